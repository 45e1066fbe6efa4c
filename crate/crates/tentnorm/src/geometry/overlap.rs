//! Pointwise overlap maxima: the total overlap count, the weighted T¹
//! norm, and the essential-supremum variant on the exact cell arrangement.
//!
//! For ℓ^∞ bodies every ball is a box and the overlap function is
//! piecewise constant on the grid arrangement of facet coordinates, so the
//! maximum is attained at a grid vertex and the search is exact.  Other
//! bodies are evaluated on centers, pairwise contact points, and a dense
//! lattice — a certified lower bound, flagged as inexact.

use serde::Serialize;

use crate::error::{Error, Result};

use super::{BallFamily, NormKind};

/// Lattice resolution per axis for the non-box sampling fallback.
const LOWER_BOUND_SAMPLE_STEPS: usize = 16;

/// Unweighted overlap maximum.
#[derive(Clone, Debug, Serialize)]
pub struct TotalOverlap {
    pub count: usize,
    pub witness: Vec<f64>,
    /// False when the value is only a sampled lower bound (non-box body).
    pub exact: bool,
}

/// Weighted overlap maximum `max_x Σ |g_B|·1_B(x)`.
#[derive(Clone, Debug, Serialize)]
pub struct WeightedOverlap {
    pub value: f64,
    pub witness: Vec<f64>,
    pub exact: bool,
}

fn weighted_count_at(family: &BallFamily, weights: &[f64], point: &[f64]) -> f64 {
    family
        .balls
        .iter()
        .zip(weights)
        .filter(|(ball, _)| ball.contains(&family.body, point))
        .map(|(_, w)| w.abs())
        .sum()
}

/// All facet and center coordinates per axis, sorted and deduplicated.
/// Centers are stored exactly, so every ball contains at least one grid
/// vertex even when `c ± r` rounds outside the closed box.
fn facet_coordinates(family: &BallFamily) -> Vec<Vec<f64>> {
    let dim = family.body.dim;
    let mut axes = vec![Vec::new(); dim];
    for ball in &family.balls {
        for (axis, &c) in ball.center.iter().enumerate() {
            axes[axis].push(c - ball.radius);
            axes[axis].push(c);
            axes[axis].push(c + ball.radius);
        }
    }
    for axis in &mut axes {
        axis.sort_by(|a, b| a.partial_cmp(b).expect("finite coordinates"));
        axis.dedup();
    }
    axes
}

/// Cartesian product of per-axis coordinate lists.
fn grid_points(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
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

/// Candidate maximizers: exact grid vertices for boxes, otherwise centers,
/// pairwise contact points, and a bounding-box lattice.
fn candidates(family: &BallFamily) -> (Vec<Vec<f64>>, bool) {
    if family.body.norm == NormKind::Linf {
        return (grid_points(&facet_coordinates(family)), true);
    }
    let dim = family.body.dim;
    let mut points: Vec<Vec<f64>> = family.balls.iter().map(|b| b.center.clone()).collect();
    for (i, bi) in family.balls.iter().enumerate() {
        for bj in family.balls.iter().skip(i + 1) {
            let t = bi.radius / (bi.radius + bj.radius);
            let contact: Vec<f64> =
                bi.center.iter().zip(&bj.center).map(|(a, b)| a + (b - a) * t).collect();
            points.push(contact);
        }
    }
    if !family.balls.is_empty() {
        let mut lo = vec![f64::INFINITY; dim];
        let mut hi = vec![f64::NEG_INFINITY; dim];
        for ball in &family.balls {
            for axis in 0..dim {
                lo[axis] = lo[axis].min(ball.center[axis] - ball.radius);
                hi[axis] = hi[axis].max(ball.center[axis] + ball.radius);
            }
        }
        let axes: Vec<Vec<f64>> = (0..dim)
            .map(|axis| {
                (0..=LOWER_BOUND_SAMPLE_STEPS)
                    .map(|k| {
                        lo[axis]
                            + (hi[axis] - lo[axis]) * k as f64 / LOWER_BOUND_SAMPLE_STEPS as f64
                    })
                    .collect()
            })
            .collect();
        points.extend(grid_points(&axes));
    }
    (points, false)
}

fn best_point(family: &BallFamily, weights: &[f64]) -> (f64, Vec<f64>, bool) {
    let (points, exact) = candidates(family);
    let mut best = 0.0f64;
    let mut witness = vec![0.0; family.body.dim];
    for point in points {
        let value = weighted_count_at(family, weights, &point);
        if value > best {
            best = value;
            witness = point;
        }
    }
    (best, witness, exact)
}

/// Maximum number of balls covering a single point, with a point that
/// attains it.
pub fn total_overlap(family: &BallFamily) -> TotalOverlap {
    let ones = vec![1.0; family.len()];
    let (value, witness, exact) = best_point(family, &ones);
    TotalOverlap { count: value.round() as usize, witness, exact }
}

/// `max_x Σ_B |g_B| 1_B(x)` with a witness point; equals the total overlap
/// when every weight is 1.
pub fn t1_discrete_norm(family: &BallFamily, weights: &[f64]) -> Result<WeightedOverlap> {
    if weights.len() != family.len() {
        return Err(Error::Input(format!("{} weights for {} balls", weights.len(), family.len())));
    }
    let (value, witness, exact) = best_point(family, weights);
    Ok(WeightedOverlap { value, witness, exact })
}

/// Essential supremum of the overlap count: the maximum over open cells of
/// the facet arrangement, each evaluated at its midpoint.  Agrees with
/// [`total_overlap`] except on measure-zero tangency configurations, where
/// the closed-ball pointwise maximum can be larger.
pub fn ess_sup_overlap(family: &BallFamily) -> Result<usize> {
    if family.body.norm != NormKind::Linf {
        return Err(Error::Input(
            "essential-supremum overlap requires an l-infinity body (boxes)".to_string(),
        ));
    }
    let axes = facet_coordinates(family);
    let midpoint_axes: Vec<Vec<f64>> =
        axes.iter().map(|axis| axis.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()).collect();
    if midpoint_axes.iter().any(Vec::is_empty) {
        return Ok(0);
    }
    let ones = vec![1.0; family.len()];
    let best = grid_points(&midpoint_axes)
        .into_iter()
        .map(|p| weighted_count_at(family, &ones, &p))
        .fold(0.0f64, f64::max);
    Ok(best.round() as usize)
}

#[cfg(test)]
mod tests {
    use super::super::{interval_family, BallFamily, ConvexBody, KBall, NormKind};
    use super::*;

    fn three_intervals() -> BallFamily {
        interval_family(&[(1.0, 0.9), (2.0, 0.9), (3.0, 0.9)])
    }

    #[test]
    fn three_interval_overlap() {
        let r = total_overlap(&three_intervals());
        assert_eq!(r.count, 2);
        assert!(r.exact);
        let at_witness = weighted_count_at(&three_intervals(), &[1.0; 3], &r.witness);
        assert_eq!(at_witness, 2.0);
    }

    #[test]
    fn degenerate_overlaps() {
        let single = interval_family(&[(0.0, 1.0)]);
        assert_eq!(total_overlap(&single).count, 1);

        let identical = interval_family(&[(0.5, 0.2); 5]);
        assert_eq!(total_overlap(&identical).count, 5);

        let body = ConvexBody::new(1, NormKind::Linf).unwrap();
        let empty = BallFamily::new(body, vec![], None).unwrap();
        assert_eq!(total_overlap(&empty).count, 0);
    }

    #[test]
    fn two_dimensional_boxes_exact() {
        let body = ConvexBody::new(2, NormKind::Linf).unwrap();
        // A cross: horizontal bar, vertical bar, and a distant square.
        let balls = vec![
            KBall::new(vec![0.0, 0.0], 1.0).unwrap(),
            KBall::new(vec![0.5, 0.5], 1.0).unwrap(),
            KBall::new(vec![10.0, 10.0], 1.0).unwrap(),
        ];
        let family = BallFamily::new(body, balls, None).unwrap();
        let r = total_overlap(&family);
        assert_eq!(r.count, 2);
        assert!(r.exact);
    }

    #[test]
    fn t1_examples() {
        let family = three_intervals();
        let r = t1_discrete_norm(&family, &[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(r.value, 2.0);

        let r = t1_discrete_norm(&family, &[5.0, 0.0, 0.0]).unwrap();
        assert_eq!(r.value, 5.0);
        assert!(family.balls[0].contains(&family.body, &r.witness));

        // All three contain no common point, but B1 and B2 share mass.
        let r = t1_discrete_norm(&family, &[2.0, 3.0, 0.25]).unwrap();
        assert_eq!(r.value, 5.0);

        assert!(t1_discrete_norm(&family, &[1.0]).is_err());
    }

    #[test]
    fn t1_reduces_to_total_overlap() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(52);
        for _ in 0..30 {
            let spec: Vec<(f64, f64)> = (0..rng.gen_range(1..=8))
                .map(|_| (rng.gen_range(-3.0..3.0), rng.gen_range(0.1..1.5)))
                .collect();
            let family = interval_family(&spec);
            let total = total_overlap(&family);
            let t1 = t1_discrete_norm(&family, &vec![1.0; family.len()]).unwrap();
            assert_eq!(t1.value, total.count as f64);
        }
    }

    #[test]
    fn non_box_bodies_flagged_lower_bound() {
        let body = ConvexBody::new(2, NormKind::L2).unwrap();
        let balls = vec![
            KBall::new(vec![0.0, 0.0], 1.0).unwrap(),
            KBall::new(vec![1.0, 0.0], 1.0).unwrap(),
        ];
        let family = BallFamily::new(body, balls, None).unwrap();
        let r = total_overlap(&family);
        assert_eq!(r.count, 2);
        assert!(!r.exact);
        assert!(ess_sup_overlap(&family).is_err());
    }

    #[test]
    fn ess_sup_matches_total_except_tangencies() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(53);
        for _ in 0..30 {
            let spec: Vec<(f64, f64)> = (0..rng.gen_range(1..=8))
                .map(|_| (rng.gen_range(-3.0..3.0), rng.gen_range(0.1..1.5)))
                .collect();
            let family = interval_family(&spec);
            assert_eq!(ess_sup_overlap(&family).unwrap(), total_overlap(&family).count);
        }
        // Tangent closed intervals overlap in a single point of measure zero.
        let tangent = interval_family(&[(0.5, 0.5), (1.5, 0.5)]);
        assert_eq!(total_overlap(&tangent).count, 2);
        assert_eq!(ess_sup_overlap(&tangent).unwrap(), 1);
    }
}
