//! Separated nets in K-balls, the cone-cover property they certify, and a
//! lattice piercing heuristic for subfamilies around a smallest ball.
//!
//! The net is a greedy maximal `a/2`-separated subset of `B(0,a)` scanned
//! from a fine lattice.  What downstream arguments actually use is the
//! cover property: every `(y,s)` with `‖y‖_K ≤ δ + s`, `s ≥ a`, `δ < a/2`
//! has a net point within distance `s`.  The cardinality is capped by the
//! packing bound `5^n`; the tighter `3^n` claim is only reported, since
//! the ℓ^∞ line already needs 5 points.

use serde::Serialize;

use crate::error::{Error, Result};

use super::{BallFamily, ConvexBody};

/// Scales `s/a` at which the cone cover is sampled (all ≥ 1, matching the
/// truncation `s ≥ a`).
const COVER_SCALES: [f64; 5] = [1.0, 1.3, 1.7, 2.2, 3.1];

/// Lattice points per half-axis when sampling cover slices.
const COVER_STEPS: usize = 4;

#[derive(Clone, Debug, Serialize)]
pub struct NetReport {
    pub points: Vec<Vec<f64>>,
    pub cardinality: usize,
    /// The stated dimensional cap `3^n` (reported, not asserted).
    pub bound_3n: usize,
    /// The packing cap `5^n` (always satisfied).
    pub bound_5n: usize,
    pub within_3n: bool,
    pub within_5n: bool,
    /// Pairwise separation ≥ a/2, re-verified after construction.
    pub separation_ok: bool,
    pub cover_ok: bool,
    /// Sampled `(y, s)` pairs with no net point within `s`.
    pub cover_failures: Vec<(Vec<f64>, f64)>,
}

/// Ascending lattice coordinates `−extent + k·step` covering `[−extent, extent]`.
fn axis_coords(extent: f64, step: f64) -> Vec<f64> {
    let count = (2.0 * extent / step).round() as usize;
    (0..=count).map(|k| -extent + k as f64 * step).collect()
}

/// Row-major scan of the product lattice (last axis fastest).
fn lattice(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut points = vec![Vec::new()];
    for axis in axes {
        let mut next = Vec::with_capacity(points.len() * axis.len());
        for p in &points {
            for &c in axis {
                let mut q = p.clone();
                q.push(c);
                next.push(q);
            }
        }
        points = next;
    }
    points
}

/// Greedy maximal `a/2`-separated subset of `B(0,a)`, plus the sampled
/// cone-cover verification at `δ = a/4`.
pub fn separated_net(body: &ConvexBody, a: f64, divisor: f64) -> Result<NetReport> {
    if !a.is_finite() || a <= 0.0 {
        return Err(Error::Input(format!("net scale must be positive and finite, got {a}")));
    }
    if !divisor.is_finite() || divisor < 2.0 {
        return Err(Error::Input(format!("lattice divisor must be at least 2, got {divisor}")));
    }
    let step = a / divisor;
    let axes: Vec<Vec<f64>> = (0..body.dim).map(|_| axis_coords(a, step)).collect();
    let mut points: Vec<Vec<f64>> = Vec::new();
    for p in lattice(&axes) {
        if body.norm_of(&p) <= a && points.iter().all(|q| body.distance(&p, q) >= a / 2.0) {
            points.push(p);
        }
    }

    let separation_ok = points
        .iter()
        .enumerate()
        .all(|(i, p)| points.iter().skip(i + 1).all(|q| body.distance(p, q) >= a / 2.0));

    let delta = a / 4.0;
    let mut cover_failures = Vec::new();
    for scale in COVER_SCALES {
        let s = scale * a;
        let extent = delta + s;
        let slice: Vec<Vec<f64>> =
            (0..body.dim).map(|_| axis_coords(extent, extent / COVER_STEPS as f64)).collect();
        for y in lattice(&slice) {
            if body.norm_of(&y) > extent {
                continue;
            }
            if !points.iter().any(|x| body.distance(&y, x) <= s) {
                cover_failures.push((y, s));
            }
        }
    }

    let cardinality = points.len();
    let bound_3n = 3usize.pow(body.dim as u32);
    let bound_5n = 5usize.pow(body.dim as u32);
    Ok(NetReport {
        cardinality,
        bound_3n,
        bound_5n,
        within_3n: cardinality <= bound_3n,
        within_5n: cardinality <= bound_5n,
        separation_ok,
        cover_ok: cover_failures.is_empty(),
        cover_failures,
        points,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PiercingReport {
    /// Index of the smallest-volume ball `B1 = B(x1, t1)`.
    pub base_index: usize,
    /// Indices of the subfamily meeting `B1` (including `B1`).
    pub subfamily: Vec<usize>,
    /// Retained piercing points after greedy cover and pruning.
    pub points: Vec<Vec<f64>>,
    /// Subfamily members containing none of the retained points.
    pub unpierced: Vec<usize>,
    pub verified: bool,
}

/// Pierces the subfamily around the smallest ball with `t1`-spaced lattice
/// points of `B(x1, 3t1)`: greedy maximum coverage, then pruning.  The
/// candidate construction can be insufficient (notably for thin ℓ¹
/// geometry); failures are reported, never papered over.
pub fn piercing_heuristic(family: &BallFamily) -> Result<PiercingReport> {
    if family.is_empty() {
        return Err(Error::Input("piercing requires a nonempty family".to_string()));
    }
    let base_index = (0..family.len())
        .min_by(|&a, &b| {
            family.balls[a]
                .volume(&family.body)
                .partial_cmp(&family.balls[b].volume(&family.body))
                .expect("finite volumes")
                .then(a.cmp(&b))
        })
        .expect("nonempty family");
    let b1 = &family.balls[base_index];
    let subfamily: Vec<usize> = (0..family.len())
        .filter(|&i| super::balls_intersect(&family.body, b1, &family.balls[i]))
        .collect();

    let t1 = b1.radius;
    let offsets: Vec<Vec<f64>> =
        (0..family.body.dim).map(|_| (-3..=3).map(|k| k as f64 * t1).collect()).collect();
    let candidates: Vec<Vec<f64>> = lattice(&offsets)
        .into_iter()
        .map(|off| off.iter().zip(&b1.center).map(|(o, c)| c + o).collect::<Vec<f64>>())
        .filter(|p| family.body.distance(p, &b1.center) <= 3.0 * t1)
        .collect();

    let pierces = |point: &[f64], member: usize| family.balls[member].contains(&family.body, point);

    let mut uncovered: Vec<usize> = subfamily.clone();
    let mut retained: Vec<Vec<f64>> = Vec::new();
    while !uncovered.is_empty() {
        // Most coverage wins; ties go to the candidate nearest x1.
        let mut best: Option<(usize, usize, f64)> = None;
        for (i, p) in candidates.iter().enumerate() {
            let count = uncovered.iter().filter(|&&m| pierces(p, m)).count();
            let dist = family.body.distance(p, &b1.center);
            let better = match best {
                None => true,
                Some((_, c, d)) => count > c || (count == c && dist < d),
            };
            if better {
                best = Some((i, count, dist));
            }
        }
        let (index, count, _) = best.expect("candidate list is nonempty");
        if count == 0 {
            break;
        }
        let point = candidates[index].clone();
        uncovered.retain(|&m| !pierces(&point, m));
        retained.push(point);
    }

    // Drop points whose members are already pierced by the rest.
    let mut index = 0;
    while index < retained.len() {
        let rest_pierces_all = subfamily.iter().all(|&m| {
            uncovered.contains(&m)
                || retained.iter().enumerate().any(|(j, p)| j != index && pierces(p, m))
        });
        if rest_pierces_all {
            retained.remove(index);
        } else {
            index += 1;
        }
    }

    let unpierced: Vec<usize> =
        subfamily.iter().copied().filter(|&m| !retained.iter().any(|p| pierces(p, m))).collect();
    let verified = unpierced.is_empty();
    Ok(PiercingReport { base_index, subfamily, points: retained, unpierced, verified })
}

#[cfg(test)]
mod tests {
    use super::super::{interval_family, BallFamily, ConvexBody, KBall, NormKind};
    use super::*;
    use crate::tol::NET_RESOLUTION_DIVISOR;

    #[test]
    fn line_net_is_five_points() {
        let body = ConvexBody::new(1, NormKind::Linf).unwrap();
        let r = separated_net(&body, 1.0, NET_RESOLUTION_DIVISOR).unwrap();
        assert_eq!(r.points, vec![vec![-1.0], vec![-0.5], vec![0.0], vec![0.5], vec![1.0]]);
        assert!(r.cover_ok);
        assert!(r.separation_ok);
        assert!(r.within_5n);
        // The stated 3^1 cap is genuinely exceeded on the line.
        assert!(!r.within_3n);
    }

    #[test]
    fn nets_cover_across_bodies_and_scales() {
        for norm in [NormKind::Linf, NormKind::L2, NormKind::L1] {
            for dim in 1..=2usize {
                for a in [0.5, 1.0, 2.0] {
                    let body = ConvexBody::new(dim, norm).unwrap();
                    let r = separated_net(&body, a, NET_RESOLUTION_DIVISOR).unwrap();
                    assert!(r.cover_ok, "{norm:?} dim {dim} a {a}: {:?}", r.cover_failures);
                    assert!(r.separation_ok);
                    assert!(r.within_5n, "{norm:?} dim {dim} a {a}: {}", r.cardinality);
                    assert!(r.cardinality >= 1);
                }
            }
        }
    }

    #[test]
    fn three_dimensional_smoke() {
        let body = ConvexBody::new(3, NormKind::L2).unwrap();
        let r = separated_net(&body, 1.0, 10.0).unwrap();
        assert!(r.cover_ok);
        assert!(r.within_5n);
    }

    #[test]
    fn net_input_validation() {
        let body = ConvexBody::new(1, NormKind::Linf).unwrap();
        assert!(separated_net(&body, 0.0, 20.0).is_err());
        assert!(separated_net(&body, 1.0, 1.0).is_err());
    }

    #[test]
    fn piercing_single_ball() {
        let family = interval_family(&[(2.0, 0.7)]);
        let r = piercing_heuristic(&family).unwrap();
        assert_eq!(r.base_index, 0);
        assert_eq!(r.subfamily, vec![0]);
        assert_eq!(r.points, vec![vec![2.0]]);
        assert!(r.verified);
    }

    #[test]
    fn piercing_three_intervals() {
        let family = interval_family(&[(1.0, 0.9), (2.0, 0.9), (3.0, 0.9)]);
        let r = piercing_heuristic(&family).unwrap();
        assert_eq!(r.base_index, 0);
        assert_eq!(r.subfamily, vec![0, 1]);
        assert!(r.points.len() <= 3);
        assert!(r.verified);
    }

    #[test]
    fn piercing_common_point_family() {
        let family = interval_family(&[(0.0, 1.0), (0.3, 1.0), (-0.4, 1.0), (0.1, 1.0)]);
        let r = piercing_heuristic(&family).unwrap();
        assert_eq!(r.subfamily.len(), 4);
        assert_eq!(r.points.len(), 1);
        assert!(r.verified);
    }

    #[test]
    fn piercing_two_dimensional() {
        let body = ConvexBody::new(2, NormKind::Linf).unwrap();
        let balls = vec![
            KBall::new(vec![0.0, 0.0], 0.5).unwrap(),
            KBall::new(vec![0.8, 0.0], 0.5).unwrap(),
            KBall::new(vec![0.0, 0.9], 0.5).unwrap(),
            KBall::new(vec![5.0, 5.0], 0.5).unwrap(),
        ];
        let family = BallFamily::new(body, balls, None).unwrap();
        let r = piercing_heuristic(&family).unwrap();
        assert_eq!(r.subfamily, vec![0, 1, 2]);
        assert!(r.verified, "unpierced: {:?}", r.unpierced);
        assert!(piercing_heuristic(&BallFamily::new(body, vec![], None).unwrap()).is_err());
    }
}
