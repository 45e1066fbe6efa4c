//! Young functions, Luxemburg gauges on step functions, and the two
//! exponential-integrability reports tying `SL^∞` control to Orlicz norms.
//!
//! All integrals over `[0, 1)` are exact finite sums over cells; only the
//! gauge thresholds are located by bisection.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::haar::{haar_transform, square_function_and_slinfty, StepFunction};
use crate::tol::TOL_BISECTION;
use crate::xpq::xpq_norm;

/// Built-in Young functions: convex, increasing, `Φ(0) = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum YoungFunction {
    /// `Φ(t) = t·(1 + log⁺t)^{1/2}`, the gauge of `L(1+log⁺)^{1/2}L`.
    #[serde(rename = "llog_half_l")]
    LLogHalfL,
    /// `Φ(t) = e^{t²} − 1`, the gauge of `e^{L²}`.
    #[serde(rename = "exp_square")]
    ExpSquare,
}

impl YoungFunction {
    pub const ALL: [YoungFunction; 2] = [YoungFunction::LLogHalfL, YoungFunction::ExpSquare];

    pub fn eval(self, t: f64) -> f64 {
        debug_assert!(t >= 0.0);
        match self {
            // log⁺0 = 0 falls out of ln(0) = −∞ clamped below by max.
            YoungFunction::LLogHalfL => t * (1.0 + t.ln().max(0.0)).sqrt(),
            YoungFunction::ExpSquare => (t * t).exp_m1(),
        }
    }
}

/// `∫ Φ(|f|/λ)` over `[0, 1)`, an exact cell sum.
pub fn orlicz_integral(f: &StepFunction, phi: YoungFunction, lambda: f64) -> f64 {
    debug_assert!(lambda > 0.0);
    f.values().iter().map(|v| phi.eval(v.abs() / lambda)).sum::<f64>() / f.values().len() as f64
}

/// Luxemburg gauge `inf{λ > 0 : ∫Φ(|f|/λ) ≤ 1}`, located by bisection to
/// relative tolerance 1e-10.  The returned λ always satisfies the
/// constraint (the bisection keeps the feasible endpoint).
pub fn luxemburg_norm(f: &StepFunction, phi: YoungFunction) -> f64 {
    if f.max_abs() == 0.0 {
        return 0.0;
    }
    let mut hi = f.max_abs();
    while orlicz_integral(f, phi, hi) > 1.0 {
        hi *= 2.0;
    }
    let mut lo = hi / 2.0;
    while orlicz_integral(f, phi, lo) <= 1.0 {
        hi = lo;
        lo /= 2.0;
        if lo < f64::MIN_POSITIVE {
            return hi;
        }
    }
    while hi - lo > TOL_BISECTION * hi {
        let mid = 0.5 * (lo + hi);
        if orlicz_integral(f, phi, mid) <= 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Empirical constants linking the square function to exponential
/// integrability and the coefficient `X^{1,2}` norm to `L(1+log⁺)^{1/2}L`.
#[derive(Clone, Debug, Serialize)]
pub struct EmbeddingReport {
    /// The input had nonzero mean and was recentered first.
    pub mean_subtracted: bool,
    /// `SL^∞` of the recentered function.
    pub slinfty: f64,
    /// Largest `c` with `∫ exp(c·f²/SL^∞²) ≤ 2`; `None` for constants.
    pub exp_constant: Option<f64>,
    /// `X^{1,2}` norm of the Haar coefficient sequence.
    pub x12_norm: f64,
    /// Luxemburg gauge of the recentered function in `L(1+log⁺)^{1/2}L`.
    pub luxemburg: f64,
    /// `x12_norm / luxemburg`; `None` for the zero function.
    pub ratio: Option<f64>,
}

pub fn embedding_checks(f: &StepFunction) -> EmbeddingReport {
    let mean = f.mean();
    let mean_subtracted = mean != 0.0;
    let g = if mean_subtracted { f.map_values(|v| v - mean) } else { f.clone() };
    let (_, slinfty) = square_function_and_slinfty(&g);

    let exp_constant = (slinfty > 0.0).then(|| {
        let scale = slinfty * slinfty;
        let integral = |c: f64| -> f64 {
            g.values().iter().map(|v| (c * v * v / scale).exp()).sum::<f64>()
                / g.values().len() as f64
        };
        let mut hi = 1.0;
        while integral(hi) <= 2.0 {
            hi *= 2.0;
        }
        let mut lo = 0.0;
        while hi - lo > TOL_BISECTION * hi.max(1.0) {
            let mid = 0.5 * (lo + hi);
            if integral(mid) <= 2.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    });

    let coefficients = haar_transform(&g).coefficients;
    let x12_norm = xpq_norm(&coefficients, Exponent::ONE, Exponent::TWO).value;
    let luxemburg = luxemburg_norm(&g, YoungFunction::LLogHalfL);
    let ratio = (luxemburg > 0.0).then(|| x12_norm / luxemburg);
    EmbeddingReport { mean_subtracted, slinfty, exp_constant, x12_norm, luxemburg, ratio }
}

/// Spot-check of the Young-function axioms on a sample grid; returns the
/// first failing triple `(t, Φ-value, violated-bound)` if any.
pub fn young_axiom_check(phi: YoungFunction) -> Result<()> {
    if phi.eval(0.0) != 0.0 {
        return Err(Error::Internal(format!("{phi:?} has Φ(0) ≠ 0")));
    }
    let grid: Vec<f64> = (0..=500).map(|i| i as f64 * 0.01).collect();
    for pair in grid.windows(2) {
        if phi.eval(pair[1]) < phi.eval(pair[0]) {
            return Err(Error::Internal(format!("{phi:?} decreases at t = {}", pair[1])));
        }
    }
    for pair in grid.windows(3) {
        let midpoint = phi.eval(pair[1]);
        let secant = 0.5 * (phi.eval(pair[0]) + phi.eval(pair[2]));
        if midpoint > secant + 1e-12 {
            return Err(Error::Internal(format!("{phi:?} is concave near t = {}", pair[1])));
        }
    }
    Ok(())
}
