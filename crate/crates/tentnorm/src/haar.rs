//! Step functions on `[0, 1)`, the Haar transform, oscillation functionals,
//! square functions, and Haar multiplier operators.
//!
//! The Haar system is sup-normalized: `h_I = 1_{I_r} − 1_{I_l}` takes values
//! in `{−1, 0, 1}`, and the coefficient of a function `f` is
//! `f_I = (∫_{I_r} f − ∫_{I_l} f)/|I|`.  The global mean is carried
//! separately from the difference coefficients, so a depth-`d` step function
//! is exactly `mean + Σ_{level(I) < d} f_I h_I`.

use serde::{Deserialize, Serialize};

use crate::dyadic::{for_each_antichain, DyadicIndex, DyadicSequence};
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::xpq::{xpq_norm, NormReport};

/// Hard cap on step-function depth (`2^depth` stored cells).
pub const MAX_STEP_DEPTH: u32 = 20;

/// A real function on `[0, 1)` constant on the `2^depth` dyadic cells of one
/// generation.  All integrals over dyadic intervals of level ≤ depth are
/// exact finite sums.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepFunction {
    depth: u32,
    values: Vec<f64>,
}

impl<'de> Deserialize<'de> for StepFunction {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            depth: u32,
            values: Vec<f64>,
        }
        let raw = Raw::deserialize(deserializer)?;
        StepFunction::new(raw.depth, raw.values).map_err(serde::de::Error::custom)
    }
}

impl StepFunction {
    pub fn new(depth: u32, values: Vec<f64>) -> Result<Self> {
        if depth > MAX_STEP_DEPTH {
            return Err(Error::Input(format!(
                "step-function depth {depth} exceeds the supported maximum {MAX_STEP_DEPTH}"
            )));
        }
        let expected = 1usize << depth;
        if values.len() != expected {
            return Err(Error::StepLength { depth, expected, got: values.len() });
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Input(format!("non-finite cell value {bad}")));
        }
        Ok(StepFunction { depth, values })
    }

    pub fn constant(depth: u32, value: f64) -> Result<Self> {
        Self::new(depth, vec![value; 1usize << depth])
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// The cell values over a dyadic interval of level ≤ depth.
    fn block(&self, interval: DyadicIndex) -> Result<&[f64]> {
        if interval.level > self.depth {
            return Err(Error::LevelBeyondDepth { level: interval.level, depth: self.depth });
        }
        let shift = self.depth - interval.level;
        let start = (interval.position << shift) as usize;
        Ok(&self.values[start..start + (1usize << shift)])
    }

    /// Mean of `f` over the interval.
    pub fn average(&self, interval: DyadicIndex) -> Result<f64> {
        let block = self.block(interval)?;
        Ok(block.iter().sum::<f64>() / block.len() as f64)
    }

    /// `∫_I f`.
    pub fn integral(&self, interval: DyadicIndex) -> Result<f64> {
        Ok(self.average(interval)? * interval.length())
    }

    pub fn mean(&self) -> f64 {
        self.average(DyadicIndex::ROOT).expect("root is always resolvable")
    }

    /// `∫ f²` over all of `[0, 1)`.
    pub fn square_integral(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>() / self.values.len() as f64
    }

    pub fn l2_norm(&self) -> f64 {
        self.square_integral().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn map_values<F: Fn(f64) -> f64>(&self, f: F) -> Self {
        StepFunction { depth: self.depth, values: self.values.iter().map(|&v| f(v)).collect() }
    }
}

/// Mean plus difference coefficients of a step function; the coefficients
/// live on levels `0 .. depth` (strictly above cell resolution).
#[derive(Clone, Debug, PartialEq)]
pub struct HaarExpansion {
    pub mean: f64,
    pub coefficients: DyadicSequence,
}

/// Difference coefficients `f_I = (∫_{I_r} f − ∫_{I_l} f)/|I|` for every
/// interval of level < depth, plus the global mean.
pub fn haar_transform(f: &StepFunction) -> HaarExpansion {
    let mut averages = f.values().to_vec();
    let mut coefficients = DyadicSequence::new();
    for level in (0..f.depth()).rev() {
        let mut next = Vec::with_capacity(averages.len() / 2);
        for k in 0..averages.len() / 2 {
            let left = averages[2 * k];
            let right = averages[2 * k + 1];
            next.push((left + right) / 2.0);
            coefficients.set(DyadicIndex::raw(level, k as u64), (right - left) / 2.0);
        }
        averages = next;
    }
    HaarExpansion { mean: averages[0], coefficients }
}

/// Rebuilds the step function of the given depth: descending from the mean,
/// each interval's average splits into `avg ∓ f_I` on its two halves.
pub fn inverse_haar(expansion: &HaarExpansion, depth: u32) -> Result<StepFunction> {
    if let Some(d) = expansion.coefficients.depth() {
        if d >= depth {
            return Err(Error::CoefficientTooDeep { level: d, depth });
        }
    }
    let mut values = vec![expansion.mean];
    for level in 0..depth {
        let mut next = Vec::with_capacity(values.len() * 2);
        for (k, &avg) in values.iter().enumerate() {
            let c = expansion.coefficients.get(DyadicIndex::raw(level, k as u64));
            next.push(avg - c);
            next.push(avg + c);
        }
        values = next;
    }
    StepFunction::new(depth, values)
}

/// Which mean-oscillation functional to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OscKind {
    /// Average of `|f − avg_I f|` over `I`.
    L1,
    /// Root mean square of `f − avg_I f` over `I`.
    L2Direct,
    /// Same quantity through the coefficient identity
    /// `osc₂(f, I)² = (1/|I|) Σ_{J ⊆ I} f_J² |J|`.
    L2Haar,
}

/// Mean oscillation of `f` over a dyadic interval of level ≤ depth.
pub fn oscillation(f: &StepFunction, interval: DyadicIndex, kind: OscKind) -> Result<f64> {
    match kind {
        OscKind::L1 => {
            let avg = f.average(interval)?;
            let block = f.block(interval)?;
            Ok(block.iter().map(|v| (v - avg).abs()).sum::<f64>() / block.len() as f64)
        }
        OscKind::L2Direct => {
            let avg = f.average(interval)?;
            let block = f.block(interval)?;
            let mean_sq =
                block.iter().map(|v| (v - avg) * (v - avg)).sum::<f64>() / block.len() as f64;
            Ok(mean_sq.sqrt())
        }
        OscKind::L2Haar => {
            if interval.level > f.depth() {
                return Err(Error::LevelBeyondDepth { level: interval.level, depth: f.depth() });
            }
            let expansion = haar_transform(f);
            let mut sum = 0.0;
            for (j, v) in expansion.coefficients.iter() {
                if interval.contains(j) {
                    // |J| / |I| = 2^{level(I) − level(J)}
                    sum += v * v * 2f64.powi(interval.level as i32 - j.level as i32);
                }
            }
            Ok(sum.sqrt())
        }
    }
}

/// Both sides of the coefficient–oscillation identity
/// `f_I²|I| = |I|osc₂(I)² − |I_l|osc₂(I_l)² − |I_r|osc₂(I_r)²`, evaluated
/// independently (coefficient vs. direct integrals).
#[derive(Clone, Debug, Serialize)]
pub struct OscIdentityReport {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

impl OscIdentityReport {
    /// Identity holds and the right side is nonnegative, up to `tol`.
    pub fn holds(&self, tol: f64) -> bool {
        self.residual.abs() <= tol && self.rhs >= -tol
    }
}

pub fn haar_osc_identity_check(
    f: &StepFunction,
    interval: DyadicIndex,
) -> Result<OscIdentityReport> {
    if f.depth() == 0 || interval.level > f.depth() - 1 {
        return Err(Error::LevelBeyondDepth {
            level: interval.level,
            depth: f.depth().saturating_sub(1),
        });
    }
    let coefficient = haar_transform(f).coefficients.get(interval);
    let lhs = coefficient * coefficient * interval.length();
    let term = |i: DyadicIndex| -> Result<f64> {
        let osc = oscillation(f, i, OscKind::L2Direct)?;
        Ok(i.length() * osc * osc)
    };
    let rhs = term(interval)? - term(interval.left_child())? - term(interval.right_child())?;
    Ok(OscIdentityReport { lhs, rhs, residual: lhs - rhs })
}

/// The measure-weighted oscillation sequence `g_I = osc(f, I)·|I|^{1/p}`
/// over every level ≤ depth.  Defined for finite `p` strictly greater
/// than 1.
pub fn osc_sequence(f: &StepFunction, p: Exponent, kind: OscKind) -> Result<DyadicSequence> {
    let pf = match p {
        Exponent::Finite(v) if v > 1.0 => v,
        _ => return Err(Error::ExponentNotInOpenRange(p.to_string())),
    };
    let mut g = DyadicSequence::new();
    for level in 0..=f.depth() {
        for position in 0..(1u64 << level) {
            let i = DyadicIndex::raw(level, position);
            let osc = oscillation(f, i, kind)?;
            g.set(i, osc * i.length().powf(1.0 / pf));
        }
    }
    Ok(g)
}

/// The oscillation-based norm: [`osc_sequence`] aggregated as the supremum
/// of `ℓ^p` sums over antichains.
pub fn jnp_dyadic_norm(f: &StepFunction, p: Exponent, kind: OscKind) -> Result<NormReport> {
    Ok(xpq_norm(&osc_sequence(f, p, kind)?, p, Exponent::Infinite))
}

/// `S(f)(x) = (Σ f_I² 1_I(x))^{1/2}` as a step function of the same depth,
/// together with its maximum (the `SL^∞` norm).  The mean term is excluded.
pub fn square_function_and_slinfty(f: &StepFunction) -> (StepFunction, f64) {
    let expansion = haar_transform(f);
    let cells = 1usize << f.depth();
    let mut acc = vec![0.0f64; cells];
    for (i, v) in expansion.coefficients.iter() {
        let shift = f.depth() - i.level;
        let start = (i.position << shift) as usize;
        for cell in acc[start..start + (1usize << shift)].iter_mut() {
            *cell += v * v;
        }
    }
    let values: Vec<f64> = acc.into_iter().map(f64::sqrt).collect();
    let max = values.iter().fold(0.0f64, |m, &v| m.max(v));
    (StepFunction { depth: f.depth(), values }, max)
}

pub fn slinfty_norm(f: &StepFunction) -> f64 {
    square_function_and_slinfty(f).1
}

/// The multiplier `T_a f = Σ (a_I/√|I|) f_I h_I`: coefficientwise
/// `f_I ↦ a_I f_I 2^{level/2}`, mean dropped.
pub fn haar_multiplier_apply(a: &DyadicSequence, f: &StepFunction) -> Result<StepFunction> {
    if let Some(d) = a.depth() {
        if d >= f.depth() {
            return Err(Error::CoefficientTooDeep { level: d, depth: f.depth() });
        }
    }
    let expansion = haar_transform(f);
    let mut scaled = DyadicSequence::new();
    for (i, av) in a.iter() {
        let fi = expansion.coefficients.get(i);
        scaled.set(i, av * fi * 2f64.powf(i.level as f64 / 2.0));
    }
    inverse_haar(&HaarExpansion { mean: 0.0, coefficients: scaled }, f.depth())
}

/// Operator norm of `T_a` from `SL^∞` to `L²`, achieved constructively.
#[derive(Clone, Debug, Serialize)]
pub struct MultiplierReport {
    /// `‖a‖_{X^{2,∞}}`, which is the exact operator norm.
    pub norm: f64,
    /// Optimal antichain from the norm reduction.
    pub witness: Vec<DyadicIndex>,
    /// Extremal input: Haar coefficients `+1` on the witness antichain (so
    /// its `SL^∞` norm is exactly 1); `None` when `a = 0`.
    pub extremal: Option<StepFunction>,
    /// Rayleigh quotient `‖T_a f‖₂ / ‖f‖_{SL^∞}` of the extremal input.
    pub rayleigh: Option<f64>,
}

pub fn haar_multiplier_norm(a: &DyadicSequence) -> MultiplierReport {
    let report = xpq_norm(a, Exponent::TWO, Exponent::Infinite);
    let witness = report.witness.clone().unwrap_or_default();
    if witness.is_empty() {
        return MultiplierReport { norm: report.value, witness, extremal: None, rayleigh: None };
    }
    let depth = a.depth().expect("nonempty witness implies nonempty support") + 1;
    let mut coefficients = DyadicSequence::new();
    for &i in &witness {
        coefficients.set(i, 1.0);
    }
    let extremal = inverse_haar(&HaarExpansion { mean: 0.0, coefficients }, depth)
        .expect("witness levels stay below depth");
    let sl = slinfty_norm(&extremal);
    let rayleigh = haar_multiplier_apply(a, &extremal)
        .expect("extremal depth exceeds multiplier support")
        .l2_norm()
        / sl;
    MultiplierReport {
        norm: report.value,
        witness,
        extremal: Some(extremal),
        rayleigh: Some(rayleigh),
    }
}

/// Rayleigh quotient of an arbitrary probe input, or `None` when the probe
/// has zero square function.
pub fn multiplier_rayleigh(a: &DyadicSequence, f: &StepFunction) -> Result<Option<f64>> {
    let sl = slinfty_norm(f);
    if sl == 0.0 {
        return Ok(None);
    }
    Ok(Some(haar_multiplier_apply(a, f)?.l2_norm() / sl))
}

/// Independent oracle for the multiplier norm: exhaustively maximizes
/// `Σ_{I∈C} a_I² f_I²` over antichains `C` with `f_I = ±1` on `C` (any sign
/// pattern gives the same objective, and such inputs have `SL^∞ = 1`).
pub fn multiplier_norm_oracle(a: &DyadicSequence, limit: u32) -> Result<f64> {
    let depth = a.depth().unwrap_or(0);
    let mut best = 0.0f64;
    for_each_antichain(depth, limit, |members| {
        let s: f64 = members
            .iter()
            .map(|&i| {
                let v = a.get(i);
                v * v
            })
            .sum();
        if s > best {
            best = s;
        }
    })?;
    Ok(best.sqrt())
}

/// First failure, if any, of the coefficient growth inequality
/// `g_I ≥ 2^{1/p − 1/2}·(g_{I_l}² + g_{I_r}²)^{1/2}` over the support
/// closure of `g`.  Oscillation sequences built from the `L²` kinds satisfy
/// it; it is a necessary condition, not a characterization.
#[derive(Clone, Debug, Serialize)]
pub struct GrowthViolation {
    pub interval: DyadicIndex,
    pub lhs: f64,
    pub rhs: f64,
}

pub fn jnp_growth_check(g: &DyadicSequence, p: f64, tol: f64) -> Result<Option<GrowthViolation>> {
    if !(p > 1.0) || !p.is_finite() {
        return Err(Error::ExponentNotInOpenRange(p.to_string()));
    }
    let Some(depth) = g.depth() else { return Ok(None) };
    let factor = 2f64.powf(1.0 / p - 0.5);
    for level in 0..depth {
        for position in 0..(1u64 << level) {
            let i = DyadicIndex::raw(level, position);
            let l = g.get(i.left_child());
            let r = g.get(i.right_child());
            if l == 0.0 && r == 0.0 {
                continue;
            }
            let lhs = g.get(i);
            let rhs = factor * (l * l + r * r).sqrt();
            if lhs < rhs - tol {
                return Ok(Some(GrowthViolation { interval: i, lhs, rhs }));
            }
        }
    }
    Ok(None)
}
