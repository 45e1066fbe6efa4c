//! Chain atoms: elementary sequences of a single weight with ±1 signs along
//! a nested collection of intervals through one dyadic point.
//!
//! A unit atom has `X^{1,∞}` norm exactly 1 (an antichain meets a chain in
//! at most one interval), so any signed combination is bounded by the sum of
//! its weights.  `decompose_greedy` inverts `synthesize` exactly: every
//! residual update is committed only when the floating-point subtraction is
//! error-free, falling back to one-interval atoms otherwise, and the atom
//! order is arranged so that resynthesis replays the same rounded sums.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dyadic::{DyadicIndex, DyadicSequence, MAX_LEVEL};
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::xpq::xpq_norm;

/// A dyadic rational `numerator / 2^level` in `[0, 1)`, stored in lowest
/// terms (numerator odd, or zero at level 0).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DyadicPoint {
    level: u32,
    numerator: u64,
}

impl DyadicPoint {
    pub const ZERO: DyadicPoint = DyadicPoint { level: 0, numerator: 0 };

    pub fn new(numerator: u64, level: u32) -> Result<Self> {
        if level > MAX_LEVEL || numerator >= 1u64 << level {
            return Err(Error::InvalidPoint(format!("{numerator}/2^{level}")));
        }
        let mut numerator = numerator;
        let mut level = level;
        while level > 0 && numerator % 2 == 0 {
            numerator /= 2;
            level -= 1;
        }
        Ok(DyadicPoint { level, numerator })
    }

    pub fn value(self) -> f64 {
        self.numerator as f64 / (1u64 << self.level) as f64
    }

    /// Left endpoint of a dyadic interval, as an exact point.
    pub fn left_endpoint(interval: DyadicIndex) -> Self {
        DyadicPoint::new(interval.position, interval.level)
            .expect("interval positions are in range")
    }

    /// The unique interval at the given level containing this point.
    pub fn chain_interval(self, level: u32) -> Result<DyadicIndex> {
        let position = if level >= self.level {
            let shift = level - self.level;
            if shift > MAX_LEVEL {
                return Err(Error::LevelTooDeep { level, max: MAX_LEVEL });
            }
            self.numerator
                .checked_shl(shift)
                .ok_or(Error::LevelTooDeep { level, max: MAX_LEVEL })?
        } else {
            self.numerator >> (self.level - level)
        };
        DyadicIndex::new(level, position)
    }

    /// Whether the point lies in the interval.
    pub fn lies_in(self, interval: DyadicIndex) -> bool {
        self.chain_interval(interval.level).map_or(false, |i| i == interval)
    }
}

impl fmt::Display for DyadicPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numerator, 1u64 << self.level)
    }
}

impl FromStr for DyadicPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidPoint(s.to_string());
        let (num, den) = s.split_once('/').ok_or_else(bad)?;
        let numerator: u64 = num.trim().parse().map_err(|_| bad())?;
        let denominator: u64 = den.trim().parse().map_err(|_| bad())?;
        if !denominator.is_power_of_two() {
            return Err(bad());
        }
        let level = denominator.trailing_zeros();
        if numerator >= denominator {
            return Err(bad());
        }
        DyadicPoint::new(numerator, level)
    }
}

impl Serialize for DyadicPoint {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DyadicPoint {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One weight spread with ±1 signs over a nested set of intervals that all
/// contain a common base point.  The sign support may skip levels; it is
/// still nested, so the unit-norm property is unaffected.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainAtom {
    point: DyadicPoint,
    weight: f64,
    signs: BTreeMap<DyadicIndex, i8>,
}

#[derive(Serialize, Deserialize)]
struct SignWire {
    level: u32,
    index: u64,
    sign: i8,
}

#[derive(Serialize, Deserialize)]
struct AtomWire {
    x: DyadicPoint,
    lambda: f64,
    signs: Vec<SignWire>,
}

impl Serialize for ChainAtom {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let signs = self
            .signs
            .iter()
            .map(|(&i, &sign)| SignWire { level: i.level, index: i.position, sign })
            .collect();
        AtomWire { x: self.point, lambda: self.weight, signs }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ChainAtom {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let wire = AtomWire::deserialize(deserializer)?;
        let mut signs = BTreeMap::new();
        for entry in wire.signs {
            let interval = DyadicIndex::new(entry.level, entry.index).map_err(D::Error::custom)?;
            if signs.insert(interval, entry.sign).is_some() {
                return Err(D::Error::custom(format!("duplicate sign interval {interval}")));
            }
        }
        ChainAtom::new(wire.x, wire.lambda, signs).map_err(D::Error::custom)
    }
}

impl ChainAtom {
    pub fn new(point: DyadicPoint, weight: f64, signs: BTreeMap<DyadicIndex, i8>) -> Result<Self> {
        if !weight.is_finite() || weight <= 0.0 {
            return Err(Error::InvalidWeight(weight));
        }
        for (&interval, &sign) in &signs {
            if sign != 1 && sign != -1 {
                return Err(Error::InvalidSign(sign as i64));
            }
            if !point.lies_in(interval) {
                return Err(Error::SignOffChain { interval, point: point.to_string() });
            }
        }
        Ok(ChainAtom { point, weight, signs })
    }

    /// Atom with the same sign on every chain interval of level 0..=depth.
    pub fn full_chain(point: DyadicPoint, weight: f64, depth: u32, sign: i8) -> Result<Self> {
        let mut signs = BTreeMap::new();
        for level in 0..=depth {
            signs.insert(point.chain_interval(level)?, sign);
        }
        ChainAtom::new(point, weight, signs)
    }

    pub fn point(&self) -> DyadicPoint {
        self.point
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn signs(&self) -> &BTreeMap<DyadicIndex, i8> {
        &self.signs
    }

    /// The sequence `λ·ε` this atom contributes, truncated to the depth.
    pub fn as_sequence(&self, depth: u32) -> DyadicSequence {
        let mut seq = DyadicSequence::new();
        for (&interval, &sign) in &self.signs {
            if interval.level <= depth {
                seq.set(interval, sign as f64 * self.weight);
            }
        }
        seq
    }
}

/// Signed sum `f_I = Σ_i ε_{i,I} λ_i` of the atoms' contributions at levels
/// 0..=depth.  Entries are accumulated in the listed atom order, which is
/// what makes decompositions from [`decompose_greedy`] replay bit-exactly.
pub fn synthesize(atoms: &[ChainAtom], depth: u32) -> DyadicSequence {
    let mut out = DyadicSequence::new();
    for atom in atoms {
        for (&interval, &sign) in &atom.signs {
            if interval.level <= depth {
                out.set(interval, out.get(interval) + sign as f64 * atom.weight);
            }
        }
    }
    out
}

/// `sign(g_I)·|g_I|^{1/p}` for the synthesized `g`: the p-power scaling of
/// an atomic sum, whose `X^{p,∞}` norm to the p-th power is at most `Σλ_i`.
pub fn atom_power_sequence(atoms: &[ChainAtom], depth: u32, p: f64) -> Result<DyadicSequence> {
    if !p.is_finite() || p < 1.0 {
        return Err(Error::InvalidExponent(p));
    }
    Ok(synthesize(atoms, depth).map_values(|v| v.signum() * v.abs().powf(1.0 / p)))
}

/// Greedy atomic decomposition with its certificate: the weight total is an
/// upper bound for the norm, and the ratio measures how far from optimal
/// the greedy got (reported, never asserted).
#[derive(Clone, Debug, Serialize)]
pub struct Decomposition {
    pub atoms: Vec<ChainAtom>,
    /// Σλ_i in atom order.
    pub weight_sum: f64,
    /// `‖f‖_{X^{1,∞}}` of the decomposed sequence.
    pub norm: f64,
}

impl Decomposition {
    /// `Σλ_i / ‖f‖`; `None` for the zero sequence.
    pub fn ratio(&self) -> Option<f64> {
        (self.norm > 0.0).then(|| self.weight_sum / self.norm)
    }
}

/// Exact rounding error of the floating-point sum `a + b` (two-sum).
fn addition_error(a: f64, b: f64) -> f64 {
    let s = a + b;
    let bb = s - a;
    let aa = s - bb;
    (a - aa) + (b - bb)
}

fn sign_of(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else {
        -1
    }
}

/// Decomposes a finitely supported sequence into chain atoms with
/// `synthesize(atoms, depth) == f` bit-for-bit.
///
/// Strategy: take the deepest-leftmost support interval, walk the chain of
/// support entries through its left endpoint, and peel off the smallest
/// absolute value with matching signs.  A peel commits only if every
/// subtraction along the chain is exact in floating point; the first
/// inexact step aborts the greedy phase and the whole residual is emitted
/// as one single-interval atom per entry (a one-element chain), which is
/// trivially exact.  Greedy atoms are returned in reverse extraction order,
/// after the fallback atoms, so the forward accumulation in `synthesize`
/// reproduces each intermediate residual exactly.
pub fn decompose_greedy(f: &DyadicSequence) -> Decomposition {
    let norm = xpq_norm(f, Exponent::ONE, Exponent::Infinite).value;
    let mut residual = f.clone();
    let mut greedy: Vec<ChainAtom> = Vec::new();

    'peel: while !residual.is_empty() {
        let target = residual
            .iter()
            .map(|(i, _)| i)
            .max_by_key(|i| (i.level, std::cmp::Reverse(i.position)))
            .expect("residual is nonempty");
        let point = DyadicPoint::left_endpoint(target);

        let mut chain: Vec<(DyadicIndex, f64)> = Vec::new();
        for level in 0..=target.level {
            let interval = target.ancestor_at(level).expect("level ≤ target.level");
            let value = residual.get(interval);
            if value != 0.0 {
                chain.push((interval, value));
            }
        }
        let weight = chain.iter().map(|(_, v)| v.abs()).fold(f64::INFINITY, f64::min);

        let mut updates = Vec::with_capacity(chain.len());
        for &(interval, value) in &chain {
            let delta = weight * sign_of(value) as f64;
            if addition_error(value, -delta) != 0.0 {
                break 'peel;
            }
            updates.push((interval, value - delta));
        }

        let signs: BTreeMap<DyadicIndex, i8> =
            chain.iter().map(|&(interval, value)| (interval, sign_of(value))).collect();
        greedy.push(
            ChainAtom::new(point, weight, signs).expect("chain entries contain the base point"),
        );
        for (interval, value) in updates {
            residual.set(interval, value);
        }
    }

    let mut atoms: Vec<ChainAtom> = residual
        .iter()
        .map(|(interval, value)| {
            let signs = BTreeMap::from([(interval, sign_of(value))]);
            ChainAtom::new(DyadicPoint::left_endpoint(interval), value.abs(), signs)
                .expect("support values are nonzero")
        })
        .collect();
    atoms.extend(greedy.into_iter().rev());

    let weight_sum = atoms.iter().map(ChainAtom::weight).sum();
    Decomposition { atoms, weight_sum, norm }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tol::{DEFAULT_ORACLE_DEPTH, TOL_EXACT};
    use crate::xpq::brute_force_xp_infty;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn idx(level: u32, position: u64) -> DyadicIndex {
        DyadicIndex::new(level, position).unwrap()
    }

    fn x1_inf(f: &DyadicSequence) -> f64 {
        xpq_norm(f, Exponent::ONE, Exponent::Infinite).value
    }

    #[test]
    fn point_canonicalization_and_strings() {
        let half = DyadicPoint::new(2, 2).unwrap();
        assert_eq!(half, DyadicPoint::new(1, 1).unwrap());
        assert_eq!(half.to_string(), "1/2");
        assert_eq!(DyadicPoint::new(0, 7).unwrap(), DyadicPoint::ZERO);
        assert_eq!(DyadicPoint::ZERO.to_string(), "0/1");
        assert_eq!("3/8".parse::<DyadicPoint>().unwrap().value(), 0.375);
        assert_eq!("6/16".parse::<DyadicPoint>().unwrap().to_string(), "3/8");
        for bad in ["", "1", "1/3", "4/4", "9/8", "-1/2", "a/8"] {
            assert!(bad.parse::<DyadicPoint>().is_err(), "{bad:?} should fail");
        }
        assert!(DyadicPoint::new(4, 2).is_err());
    }

    #[test]
    fn chain_intervals() {
        let x = "3/8".parse::<DyadicPoint>().unwrap();
        assert_eq!(x.chain_interval(0).unwrap(), DyadicIndex::ROOT);
        assert_eq!(x.chain_interval(1).unwrap(), idx(1, 0));
        assert_eq!(x.chain_interval(2).unwrap(), idx(2, 1));
        assert_eq!(x.chain_interval(3).unwrap(), idx(3, 3));
        assert_eq!(x.chain_interval(4).unwrap(), idx(4, 6));
        assert!(x.lies_in(idx(2, 1)));
        assert!(!x.lies_in(idx(2, 0)));
        let half = "1/2".parse::<DyadicPoint>().unwrap();
        assert_eq!(half.chain_interval(2).unwrap(), idx(2, 2));
    }

    #[test]
    fn atom_validation() {
        let x = DyadicPoint::ZERO;
        let signs = BTreeMap::from([(DyadicIndex::ROOT, 1i8)]);
        assert!(ChainAtom::new(x, 1.0, signs.clone()).is_ok());
        assert!(matches!(ChainAtom::new(x, 0.0, signs.clone()), Err(Error::InvalidWeight(_))));
        assert!(matches!(ChainAtom::new(x, f64::NAN, signs.clone()), Err(Error::InvalidWeight(_))));
        let bad_sign = BTreeMap::from([(DyadicIndex::ROOT, 2i8)]);
        assert!(matches!(ChainAtom::new(x, 1.0, bad_sign), Err(Error::InvalidSign(2))));
        let off_chain = BTreeMap::from([(idx(1, 1), 1i8)]);
        assert!(matches!(ChainAtom::new(x, 1.0, off_chain), Err(Error::SignOffChain { .. })));
    }

    #[test]
    fn unit_atom_norm_is_exactly_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..20 {
            let level = rng.gen_range(0..=3u32);
            let numerator = rng.gen_range(0..1u64 << level);
            let point = DyadicPoint::new(numerator, level).unwrap();
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            let atom = ChainAtom::full_chain(point, 1.0, 3, sign).unwrap();
            let f = synthesize(&[atom], 3);
            assert_eq!(x1_inf(&f), 1.0);
            let oracle = brute_force_xp_infty(&f, Exponent::ONE, DEFAULT_ORACLE_DEPTH).unwrap();
            assert_eq!(oracle.value, 1.0);
        }
        // Gapped sign support is still nested, hence still unit norm.
        let x = "1/4".parse::<DyadicPoint>().unwrap();
        let signs = BTreeMap::from([(DyadicIndex::ROOT, 1i8), (idx(3, 2), -1i8)]);
        let atom = ChainAtom::new(x, 1.0, signs).unwrap();
        assert_eq!(x1_inf(&synthesize(&[atom], 3)), 1.0);
    }

    #[test]
    fn synthesize_examples() {
        let spine = ChainAtom::full_chain(DyadicPoint::ZERO, 1.0, 2, 1).unwrap();
        let f = synthesize(&[spine.clone()], 2);
        assert_eq!(f.get(DyadicIndex::ROOT), 1.0);
        assert_eq!(f.get(idx(1, 0)), 1.0);
        assert_eq!(f.get(idx(2, 0)), 1.0);
        assert_eq!(f.support_size(), 3);
        assert_eq!(x1_inf(&f), 1.0);

        let half = "1/2".parse::<DyadicPoint>().unwrap();
        let other = ChainAtom::full_chain(half, 1.0, 1, 1).unwrap();
        let f = synthesize(&[spine.clone(), other], 1);
        assert_eq!(f.get(DyadicIndex::ROOT), 2.0);
        assert_eq!(f.get(idx(1, 0)), 1.0);
        assert_eq!(f.get(idx(1, 1)), 1.0);
        assert_eq!(x1_inf(&f), 2.0);
        let oracle = brute_force_xp_infty(&f, Exponent::ONE, DEFAULT_ORACLE_DEPTH).unwrap();
        assert_eq!(oracle.value, 2.0);

        let plus = ChainAtom::full_chain(DyadicPoint::ZERO, 1.0, 0, 1).unwrap();
        let minus = ChainAtom::full_chain(half, 1.0, 0, -1).unwrap();
        assert!(synthesize(&[plus, minus], 2).is_empty());
    }

    #[test]
    fn synthesize_truncates_at_depth() {
        let atom = ChainAtom::full_chain(DyadicPoint::ZERO, 0.5, 3, 1).unwrap();
        let f = synthesize(&[atom], 2);
        assert_eq!(f.depth(), Some(2));
        assert_eq!(f.support_size(), 3);
    }

    #[test]
    fn norm_bounded_by_weight_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for _ in 0..50 {
            let count = rng.gen_range(1..=6);
            let mut atoms = Vec::new();
            let mut total = 0.0;
            for _ in 0..count {
                let level = rng.gen_range(0..=4u32);
                let numerator = rng.gen_range(0..1u64 << level);
                let point = DyadicPoint::new(numerator, level).unwrap();
                // Grid weights k/1024 keep every sum exact.
                let weight = rng.gen_range(1..=1024) as f64 / 1024.0;
                let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
                let depth = rng.gen_range(0..=4u32);
                atoms.push(ChainAtom::full_chain(point, weight, depth, sign).unwrap());
                total += weight;
            }
            let f = synthesize(&atoms, 4);
            assert!(x1_inf(&f) <= total);
            for p in [1.0, 1.5, 2.0, 3.0] {
                let powered = atom_power_sequence(&atoms, 4, p).unwrap();
                let norm = xpq_norm(&powered, Exponent::Finite(p), Exponent::Infinite).value;
                assert!(norm.powf(p) <= total + TOL_EXACT, "p={p} norm={norm} total={total}");
            }
        }
        assert!(atom_power_sequence(&[], 2, 0.5).is_err());
    }

    #[test]
    fn decompose_root_only() {
        let mut f = DyadicSequence::new();
        f.set(DyadicIndex::ROOT, 3.0);
        let d = decompose_greedy(&f);
        assert_eq!(d.atoms.len(), 1);
        assert_eq!(d.atoms[0].weight(), 3.0);
        assert_eq!(d.weight_sum, 3.0);
        assert_eq!(d.norm, 3.0);
        assert_eq!(d.ratio(), Some(1.0));
        assert_eq!(synthesize(&d.atoms, 4), f);
    }

    #[test]
    fn decompose_zero_sequence() {
        let d = decompose_greedy(&DyadicSequence::new());
        assert!(d.atoms.is_empty());
        assert_eq!(d.weight_sum, 0.0);
        assert_eq!(d.ratio(), None);
    }

    #[test]
    fn decompose_recovers_single_atom() {
        let x = "3/4".parse::<DyadicPoint>().unwrap();
        let atom = ChainAtom::full_chain(x, 1.25, 3, 1).unwrap();
        let f = synthesize(&[atom], 3);
        let d = decompose_greedy(&f);
        assert_eq!(d.weight_sum, d.norm);
        assert_eq!(synthesize(&d.atoms, 3), f);
    }

    #[test]
    fn decompose_round_trip_grid_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for _ in 0..100 {
            let mut f = DyadicSequence::new();
            for level in 0..=4u32 {
                for position in 0..1u64 << level {
                    if rng.gen_bool(0.4) {
                        let v = rng.gen_range(-1024i64..=1024) as f64 / 1024.0;
                        f.set(idx(level, position), v);
                    }
                }
            }
            let d = decompose_greedy(&f);
            assert_eq!(synthesize(&d.atoms, 4), f);
            if f.is_empty() {
                continue;
            }
            let ratio = d.ratio().unwrap();
            assert!(ratio >= 1.0 - TOL_EXACT, "greedy total below the norm: {ratio}");
        }
    }

    #[test]
    fn decompose_round_trip_continuous_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        for _ in 0..100 {
            let mut f = DyadicSequence::new();
            for level in 0..=4u32 {
                for position in 0..1u64 << level {
                    if rng.gen_bool(0.4) {
                        f.set(idx(level, position), rng.gen_range(-1.0..1.0));
                    }
                }
            }
            let d = decompose_greedy(&f);
            assert_eq!(synthesize(&d.atoms, 4), f);
        }
    }

    #[test]
    fn decompose_falls_back_on_inexact_chains() {
        // 1.0 and 1e-17 share a chain; subtracting 1e-17 from 1.0 is inexact,
        // so the greedy must stop and single-interval atoms take over.
        let mut f = DyadicSequence::new();
        f.set(DyadicIndex::ROOT, 1.0);
        f.set(idx(2, 0), 1e-17);
        let d = decompose_greedy(&f);
        assert_eq!(synthesize(&d.atoms, 2), f);
        assert!(d.atoms.iter().all(|a| a.signs().len() == 1));
    }

    #[test]
    fn synthesize_decompose_synthesize_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(35);
        for _ in 0..40 {
            let count = rng.gen_range(1..=5);
            let mut atoms = Vec::new();
            for _ in 0..count {
                let level = rng.gen_range(0..=3u32);
                let numerator = rng.gen_range(0..1u64 << level);
                let point = DyadicPoint::new(numerator, level).unwrap();
                let weight = rng.gen_range(0.1..2.0);
                let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
                atoms.push(ChainAtom::full_chain(point, weight, 3, sign).unwrap());
            }
            let f = synthesize(&atoms, 3);
            let d = decompose_greedy(&f);
            assert_eq!(synthesize(&d.atoms, 3), f);
        }
    }
}
