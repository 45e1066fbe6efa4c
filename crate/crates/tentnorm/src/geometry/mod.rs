//! Finite families of K-balls: intersection graphs, overlap counts,
//! coloring, discrete S¹/T¹ norms, Vitali selection, the weak-type bound
//! for the non-tangential maximal operator, separated nets, and piercing
//! heuristics.
//!
//! K is an ℓ^r unit ball in dimension 1–3 and all balls are closed
//! (tangency counts as intersection).  Exact overlap and measure
//! computations are available for ℓ^∞ bodies, where everything reduces to
//! finite box arrangements; other bodies get certified lower bounds that
//! are flagged as such.

mod coloring;
mod mwis;
mod nets;
mod overlap;
mod vitali;
mod weak_type;

pub use coloring::{chromatic_number_exact, color_family, is_proper, Coloring};
pub use mwis::{discrete_duality_check, s1_discrete_norm, DualityRatioReport, S1Report};
pub use nets::{piercing_heuristic, separated_net, NetReport, PiercingReport};
pub use overlap::{
    ess_sup_overlap, t1_discrete_norm, total_overlap, TotalOverlap, WeightedOverlap,
};
pub use vitali::{vitali_select, VitaliReport};
pub use weak_type::{maximal_weak_type, WeakTypeReport};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which ℓ^r unit ball plays the role of the symmetric convex body K.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormKind {
    #[serde(rename = "l1")]
    L1,
    #[serde(rename = "l2")]
    L2,
    #[serde(rename = "linf")]
    Linf,
}

impl NormKind {
    pub fn norm(self, v: &[f64]) -> f64 {
        match self {
            NormKind::L1 => v.iter().map(|x| x.abs()).sum(),
            NormKind::L2 => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
            NormKind::Linf => v.iter().fold(0.0f64, |m, x| m.max(x.abs())),
        }
    }
}

/// A symmetric convex body: the unit ℓ^r ball in dimension 1, 2, or 3.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvexBody {
    pub dim: usize,
    pub norm: NormKind,
}

impl ConvexBody {
    pub fn new(dim: usize, norm: NormKind) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::UnsupportedDimension(dim));
        }
        Ok(ConvexBody { dim, norm })
    }

    pub fn norm_of(&self, v: &[f64]) -> f64 {
        debug_assert_eq!(v.len(), self.dim);
        self.norm.norm(v)
    }

    pub fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        debug_assert_eq!(a.len(), b.len());
        let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.norm_of(&diff)
    }

    /// Lebesgue volume of the unit K-ball, from the closed forms for
    /// cubes, Euclidean balls, and cross-polytopes.
    pub fn unit_ball_volume(&self) -> f64 {
        use std::f64::consts::PI;
        match (self.norm, self.dim) {
            (NormKind::Linf, n) => 2f64.powi(n as i32),
            (NormKind::L2, 1) => 2.0,
            (NormKind::L2, 2) => PI,
            (NormKind::L2, 3) => 4.0 * PI / 3.0,
            (NormKind::L1, 1) => 2.0,
            (NormKind::L1, 2) => 2.0,
            (NormKind::L1, 3) => 4.0 / 3.0,
            _ => unreachable!("dimension validated at construction"),
        }
    }
}

/// A closed K-ball `B(center, radius) = {y : ‖y − center‖_K ≤ radius}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KBall {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl KBall {
    pub fn new(center: Vec<f64>, radius: f64) -> Result<Self> {
        if !radius.is_finite() || radius <= 0.0 {
            return Err(Error::InvalidRadius(radius));
        }
        if center.iter().any(|c| !c.is_finite()) {
            return Err(Error::Input(format!("non-finite ball center {center:?}")));
        }
        Ok(KBall { center, radius })
    }

    pub fn contains(&self, body: &ConvexBody, point: &[f64]) -> bool {
        body.distance(&self.center, point) <= self.radius
    }

    /// `radius^n` times the unit-ball volume — exact scaling of the closed
    /// forms above.
    pub fn volume(&self, body: &ConvexBody) -> f64 {
        body.unit_ball_volume() * self.radius.powi(body.dim as i32)
    }
}

/// An ordered, repetition-allowed sequence of K-balls with optional
/// per-ball weights.
#[derive(Clone, Debug, PartialEq)]
pub struct BallFamily {
    pub body: ConvexBody,
    pub balls: Vec<KBall>,
    pub weights: Option<Vec<f64>>,
}

impl BallFamily {
    pub fn new(body: ConvexBody, balls: Vec<KBall>, weights: Option<Vec<f64>>) -> Result<Self> {
        for ball in &balls {
            if ball.center.len() != body.dim {
                return Err(Error::Input(format!(
                    "ball center {:?} has {} coordinates in a dimension-{} family",
                    ball.center,
                    ball.center.len(),
                    body.dim
                )));
            }
        }
        if let Some(w) = &weights {
            if w.len() != balls.len() {
                return Err(Error::Input(format!("{} weights for {} balls", w.len(), balls.len())));
            }
            if let Some(bad) = w.iter().find(|v| !v.is_finite()) {
                return Err(Error::Input(format!("non-finite ball weight {bad}")));
            }
        }
        Ok(BallFamily { body, balls, weights })
    }

    pub fn len(&self) -> usize {
        self.balls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty()
    }

    /// Stored weights, or all ones.
    pub fn weights_or_ones(&self) -> Vec<f64> {
        self.weights.clone().unwrap_or_else(|| vec![1.0; self.balls.len()])
    }

    /// Pairwise intersection adjacency (diagonal false).
    pub(crate) fn adjacency(&self) -> Vec<Vec<bool>> {
        let m = self.balls.len();
        let mut adj = vec![vec![false; m]; m];
        for i in 0..m {
            for j in i + 1..m {
                if balls_intersect(&self.body, &self.balls[i], &self.balls[j]) {
                    adj[i][j] = true;
                    adj[j][i] = true;
                }
            }
        }
        adj
    }
}

/// Closed-ball intersection test: `‖c1 − c2‖_K ≤ r1 + r2`.
pub fn balls_intersect(body: &ConvexBody, b1: &KBall, b2: &KBall) -> bool {
    body.distance(&b1.center, &b2.center) <= b1.radius + b2.radius
}

#[cfg(test)]
pub(crate) fn interval_family(spec: &[(f64, f64)]) -> BallFamily {
    let body = ConvexBody::new(1, NormKind::Linf).unwrap();
    let balls = spec.iter().map(|&(c, r)| KBall::new(vec![c], r).unwrap()).collect();
    BallFamily::new(body, balls, None).unwrap()
}
