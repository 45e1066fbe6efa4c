//! Weak-type bound for the discrete non-tangential maximal operator.
//!
//! With `f` supported on a finite ball family, `M_p(f)(x)` is the largest
//! `|f_B|/|B|^{1/p}` over balls containing `x`, so the superlevel set
//! `{M_p > λ}` is exactly the union of the balls whose normalized value
//! beats `λ`.  For boxes that union's measure is computed exactly on the
//! compressed cell arrangement, and the Vitali argument caps it by
//! `3^n·‖f‖^p_{S^p}/λ^p`.

use serde::Serialize;

use crate::error::{Error, Result};

use super::{s1_discrete_norm, BallFamily, NormKind};

#[derive(Clone, Debug, Serialize)]
pub struct WeakTypeReport {
    pub p: f64,
    pub lambda: f64,
    /// Indices of the balls forming the superlevel set.
    pub selected: Vec<usize>,
    /// Exact Lebesgue measure of `{M_p > λ}`.
    pub level_set_measure: f64,
    /// `λ^p · |{M_p > λ}|`.
    pub lhs: f64,
    /// `3^n · ‖f‖^p_{S^p}`.
    pub rhs: f64,
    /// `‖f‖_{S^p} = s1({|f_B|^p})^{1/p}`.
    pub sp_norm: f64,
    pub holds: bool,
}

/// Exact measure of a union of boxes via per-axis coordinate compression:
/// the union is a disjoint union of grid cells, and a cell lies inside iff
/// its midpoint does.
fn box_union_measure(family: &BallFamily, selected: &[usize]) -> f64 {
    if selected.is_empty() {
        return 0.0;
    }
    let dim = family.body.dim;
    let mut axes = vec![Vec::new(); dim];
    for &i in selected {
        let ball = &family.balls[i];
        for (axis, &c) in ball.center.iter().enumerate() {
            axes[axis].push(c - ball.radius);
            axes[axis].push(c + ball.radius);
        }
    }
    for axis in &mut axes {
        axis.sort_by(|a, b| a.partial_cmp(b).expect("finite coordinates"));
        axis.dedup();
    }

    // Odometer over the cell grid; cells carry (midpoint, width) per axis.
    let cells_per_axis: Vec<usize> = axes.iter().map(|a| a.len() - 1).collect();
    if cells_per_axis.iter().any(|&c| c == 0) {
        return 0.0;
    }
    let mut index = vec![0usize; dim];
    let mut measure = 0.0;
    loop {
        let mut midpoint = Vec::with_capacity(dim);
        let mut volume = 1.0;
        for axis in 0..dim {
            let lo = axes[axis][index[axis]];
            let hi = axes[axis][index[axis] + 1];
            midpoint.push(0.5 * (lo + hi));
            volume *= hi - lo;
        }
        if selected.iter().any(|&i| family.balls[i].contains(&family.body, &midpoint)) {
            measure += volume;
        }
        let mut axis = 0;
        loop {
            index[axis] += 1;
            if index[axis] < cells_per_axis[axis] {
                break;
            }
            index[axis] = 0;
            axis += 1;
            if axis == dim {
                return measure;
            }
        }
    }
}

/// Checks `λ^p·|{M_p > λ}| ≤ 3^n·‖f‖^p_{S^p}` on one instance with exact
/// box measures.  Requires an ℓ^∞ body, finite `p ≥ 1`, and `λ > 0`.
pub fn maximal_weak_type(
    family: &BallFamily,
    weights: &[f64],
    p: f64,
    lambda: f64,
    limit: usize,
) -> Result<WeakTypeReport> {
    if family.body.norm != NormKind::Linf {
        return Err(Error::Input(
            "exact level-set measures require an l-infinity body (boxes)".to_string(),
        ));
    }
    if !p.is_finite() || p < 1.0 {
        return Err(Error::InvalidExponent(p));
    }
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::Input(format!("level λ must be positive and finite, got {lambda}")));
    }
    if weights.len() != family.len() {
        return Err(Error::Input(format!("{} weights for {} balls", weights.len(), family.len())));
    }

    let selected: Vec<usize> = (0..family.len())
        .filter(|&i| {
            let volume = family.balls[i].volume(&family.body);
            weights[i].abs() / volume.powf(1.0 / p) > lambda
        })
        .collect();
    let level_set_measure = box_union_measure(family, &selected);

    let powered: Vec<f64> = weights.iter().map(|w| w.abs().powf(p)).collect();
    let s1 = s1_discrete_norm(family, &powered, limit)?.value;
    let sp_norm = s1.powf(1.0 / p);
    let lhs = lambda.powf(p) * level_set_measure;
    let rhs = 3f64.powi(family.body.dim as i32) * s1;

    Ok(WeakTypeReport {
        p,
        lambda,
        selected,
        level_set_measure,
        lhs,
        rhs,
        sp_norm,
        holds: lhs <= rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{interval_family, BallFamily, ConvexBody, KBall, NormKind};
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_ball_closed_form() {
        let family = interval_family(&[(0.0, 1.0)]);
        for p in [1.0, 2.0] {
            // |B| = 2, so M_p jumps to v·2^{−1/p} on the ball.
            let v: f64 = 1.5;
            let threshold = v * 2f64.powf(-1.0 / p);
            let below = maximal_weak_type(&family, &[v], p, threshold * 0.9, 24).unwrap();
            assert_eq!(below.selected, vec![0]);
            assert_eq!(below.level_set_measure, 2.0);
            assert!(below.holds);

            let above = maximal_weak_type(&family, &[v], p, threshold * 1.1, 24).unwrap();
            assert!(above.selected.is_empty());
            assert_eq!(above.level_set_measure, 0.0);
            assert_eq!(above.lhs, 0.0);
            assert!(above.holds);
        }
    }

    #[test]
    fn union_measure_merges_overlaps() {
        // [0,2] ∪ [1,3] has measure 3, not 4.
        let family = interval_family(&[(1.0, 1.0), (2.0, 1.0)]);
        assert_eq!(box_union_measure(&family, &[0, 1]), 3.0);
        assert_eq!(box_union_measure(&family, &[0]), 2.0);
        assert_eq!(box_union_measure(&family, &[]), 0.0);

        let body = ConvexBody::new(2, NormKind::Linf).unwrap();
        let balls = vec![
            KBall::new(vec![0.0, 0.0], 1.0).unwrap(),
            KBall::new(vec![1.0, 1.0], 1.0).unwrap(),
        ];
        let squares = BallFamily::new(body, balls, None).unwrap();
        // Two unit squares (area 4 each) overlapping in a 1×1 corner.
        assert_eq!(box_union_measure(&squares, &[0, 1]), 7.0);
    }

    #[test]
    fn rejects_unsupported_inputs() {
        let family = interval_family(&[(0.0, 1.0)]);
        assert!(maximal_weak_type(&family, &[1.0], 0.5, 1.0, 24).is_err());
        assert!(maximal_weak_type(&family, &[1.0], f64::INFINITY, 1.0, 24).is_err());
        assert!(maximal_weak_type(&family, &[1.0], 1.0, 0.0, 24).is_err());
        assert!(maximal_weak_type(&family, &[1.0, 2.0], 1.0, 1.0, 24).is_err());
        let body = ConvexBody::new(1, NormKind::L2).unwrap();
        let disk = BallFamily::new(body, vec![KBall::new(vec![0.0], 1.0).unwrap()], None).unwrap();
        assert!(maximal_weak_type(&disk, &[1.0], 1.0, 1.0, 24).is_err());
    }

    #[test]
    fn bound_holds_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(57);
        for dim in 1..=2usize {
            let body = ConvexBody::new(dim, NormKind::Linf).unwrap();
            for _ in 0..50 {
                let m = rng.gen_range(1..=10);
                let balls: Vec<KBall> = (0..m)
                    .map(|_| {
                        let center = (0..dim).map(|_| rng.gen_range(-3.0..3.0)).collect();
                        KBall::new(center, rng.gen_range(0.1..1.5)).unwrap()
                    })
                    .collect();
                let family = BallFamily::new(body, balls, None).unwrap();
                let weights: Vec<f64> = (0..m).map(|_| rng.gen_range(-2.0..2.0)).collect();
                for p in [1.0, 2.0] {
                    for _ in 0..5 {
                        let lambda = rng.gen_range(0.05..3.0);
                        let r = maximal_weak_type(&family, &weights, p, lambda, 24).unwrap();
                        assert!(r.holds, "λ^p·measure = {} exceeds 3^n·s1 = {}", r.lhs, r.rhs);
                    }
                }
            }
        }
    }
}
