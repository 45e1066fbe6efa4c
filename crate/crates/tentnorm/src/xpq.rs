//! The two-exponent norm engine.
//!
//! For exponents `p, q ∈ [1, ∞]`, the norm of a finitely supported sequence
//! `g` is computed by a single bottom-up sweep: at each node the two child
//! values are merged in `ℓ^p`, then merged with the node's own value in
//! `ℓ^q`, with `∞` meaning `max`.  The two boundary cases have transparent
//! meanings and carry optimizer witnesses:
//!
//! * `q = ∞`: the norm is the supremum of `ℓ^p` sums over antichains
//!   (pairwise disjoint intervals); the witness is an optimal antichain.
//! * `p = ∞`: the norm is the supremum of `ℓ^q` sums along root-to-leaf
//!   chains (cones); the witness is an optimal chain.
//!
//! Alongside the production reduction live an exhaustive antichain oracle,
//! the pointwise cone formula, the duality pairing with Hölder verification,
//! and a constructive extremizer realizing the dual norm with constant
//! exactly 1.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::dyadic::{for_each_antichain, for_each_weighted_antichain, DyadicIndex, DyadicSequence};
use crate::error::{Error, Result};
use crate::exponent::{pow_abs, Exponent};

/// One merge step of the bottom-up reduction: children in `ℓ^p`, then the
/// node in `ℓ^q`.  Signs of the inputs are ignored.
pub fn combine(p: Exponent, q: Exponent, a_r: f64, a_l: f64, a_node: f64) -> f64 {
    q.pair_norm(p.pair_norm(a_r.abs(), a_l.abs()), a_node.abs())
}

/// A computed norm value together with an optimizer witness when the
/// exponent shape admits one: an antichain for `q = ∞`, a root-to-leaf chain
/// for `p = ∞` with `q < ∞`, nothing when both exponents are finite.
#[derive(Clone, Debug, Serialize)]
pub struct NormReport {
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<DyadicIndex>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ChildSide {
    Left,
    Right,
}

#[derive(Clone, Copy)]
struct AntichainChoice {
    /// Node value beat (or tied) the best antichain strictly below it.
    node_wins: bool,
    /// For `p = ∞`: which child subtree held the maximum; `None` when both
    /// children contribute (finite `p`).
    side: Option<ChildSide>,
}

/// Sorted parents of the level-`level` entries currently present in `map`.
fn parents_at(map: &BTreeMap<DyadicIndex, f64>, level: u32) -> Vec<DyadicIndex> {
    let (lo, hi) = DyadicIndex::level_bounds(level);
    let mut parents: Vec<DyadicIndex> =
        map.range(lo..=hi).map(|(&i, _)| DyadicIndex::raw(level - 1, i.position >> 1)).collect();
    parents.dedup();
    parents
}

// q = ∞: carry, per active node, the best antichain objective within its
// subtree — Σ|g|^p for finite p, max|g| for p = ∞ — and record each argmax
// so the optimal antichain can be rebuilt top-down.  Ties prefer the node,
// then the left child.
fn reduce_q_infinite(g: &DyadicSequence, p: Exponent) -> NormReport {
    let Some(depth) = g.depth() else {
        return NormReport { value: 0.0, witness: Some(Vec::new()) };
    };
    let powered: BTreeMap<DyadicIndex, f64> = match p {
        Exponent::Finite(pf) => g.iter().map(|(i, v)| (i, pow_abs(v, pf))).collect(),
        Exponent::Infinite => g.iter().map(|(i, v)| (i, v.abs())).collect(),
    };
    let mut carry = powered.clone();
    let mut choices: BTreeMap<DyadicIndex, AntichainChoice> = BTreeMap::new();
    for level in (1..=depth).rev() {
        for parent in parents_at(&carry, level) {
            let l = carry.remove(&parent.left_child()).unwrap_or(0.0);
            let r = carry.remove(&parent.right_child()).unwrap_or(0.0);
            let own = carry.get(&parent).copied().unwrap_or(0.0);
            let (children, side) = match p {
                Exponent::Infinite => {
                    if l >= r {
                        (l, Some(ChildSide::Left))
                    } else {
                        (r, Some(ChildSide::Right))
                    }
                }
                Exponent::Finite(_) => (l + r, None),
            };
            let node_wins = own >= children;
            choices.insert(parent, AntichainChoice { node_wins, side });
            carry.insert(parent, if node_wins { own } else { children });
        }
    }
    let total = carry.get(&DyadicIndex::ROOT).copied().unwrap_or(0.0);
    let value = match p {
        Exponent::Finite(pf) if pf != 1.0 => total.powf(1.0 / pf),
        _ => total,
    };
    let mut witness = Vec::new();
    if total > 0.0 {
        let mut stack = vec![DyadicIndex::ROOT];
        while let Some(node) = stack.pop() {
            match choices.get(&node) {
                // Never combined as a parent: an active leaf of the search.
                None => witness.push(node),
                Some(c) if c.node_wins => witness.push(node),
                Some(c) => match c.side {
                    Some(ChildSide::Left) => stack.push(node.left_child()),
                    Some(ChildSide::Right) => stack.push(node.right_child()),
                    None => {
                        for child in [node.left_child(), node.right_child()] {
                            if choices.contains_key(&child) || powered.contains_key(&child) {
                                stack.push(child);
                            }
                        }
                    }
                },
            }
        }
        witness.sort();
    }
    NormReport { value, witness: Some(witness) }
}

// p = ∞, q < ∞: carry the best chain sum of |g|^q, accumulated deepest
// first; this makes the result bit-identical to `cone_norm` along the
// optimal chain, because `max` commutes with the shared additions.
fn reduce_p_infinite(g: &DyadicSequence, qf: f64) -> NormReport {
    let Some(depth) = g.depth() else {
        return NormReport { value: 0.0, witness: Some(Vec::new()) };
    };
    let mut carry: BTreeMap<DyadicIndex, f64> =
        g.iter().map(|(i, v)| (i, pow_abs(v, qf))).collect();
    let mut sides: BTreeMap<DyadicIndex, ChildSide> = BTreeMap::new();
    for level in (1..=depth).rev() {
        for parent in parents_at(&carry, level) {
            let l = carry.remove(&parent.left_child()).unwrap_or(0.0);
            let r = carry.remove(&parent.right_child()).unwrap_or(0.0);
            let own = carry.get(&parent).copied().unwrap_or(0.0);
            let (best, side) = if l >= r { (l, ChildSide::Left) } else { (r, ChildSide::Right) };
            sides.insert(parent, side);
            carry.insert(parent, best + own);
        }
    }
    let total = carry.get(&DyadicIndex::ROOT).copied().unwrap_or(0.0);
    let value = if qf == 1.0 { total } else { total.powf(1.0 / qf) };
    let mut witness = Vec::new();
    if total > 0.0 {
        let mut node = DyadicIndex::ROOT;
        loop {
            witness.push(node);
            match sides.get(&node) {
                Some(ChildSide::Left) => node = node.left_child(),
                Some(ChildSide::Right) => node = node.right_child(),
                None => break,
            }
        }
    }
    NormReport { value, witness: Some(witness) }
}

// Both exponents finite: plain value reduction.  Also records, for every
// active node, the fully reduced value of its subtree; the dual extremizer
// consumes that map.
fn reduce_values(
    g: &DyadicSequence,
    p: Exponent,
    q: Exponent,
) -> (f64, BTreeMap<DyadicIndex, f64>) {
    let mut subtree: BTreeMap<DyadicIndex, f64> = BTreeMap::new();
    let Some(depth) = g.depth() else {
        return (0.0, subtree);
    };
    let mut values: BTreeMap<DyadicIndex, f64> = g.iter().map(|(i, v)| (i, v.abs())).collect();
    for level in (1..=depth).rev() {
        for parent in parents_at(&values, level) {
            let l = values.remove(&parent.left_child());
            let r = values.remove(&parent.right_child());
            if let Some(lv) = l {
                subtree.insert(parent.left_child(), lv);
            }
            if let Some(rv) = r {
                subtree.insert(parent.right_child(), rv);
            }
            let own = values.get(&parent).copied().unwrap_or(0.0);
            let merged = combine(p, q, r.unwrap_or(0.0), l.unwrap_or(0.0), own);
            values.insert(parent, merged);
        }
    }
    let root = values.get(&DyadicIndex::ROOT).copied().unwrap_or(0.0);
    subtree.insert(DyadicIndex::ROOT, root);
    (root, subtree)
}

/// The `X^{p,q}` norm of `g`, with a witness for the two supremum shapes.
///
/// The zero sequence reports value `0` with an empty witness where a witness
/// shape exists.
pub fn xpq_norm(g: &DyadicSequence, p: Exponent, q: Exponent) -> NormReport {
    match (p, q) {
        (_, Exponent::Infinite) => reduce_q_infinite(g, p),
        (Exponent::Infinite, Exponent::Finite(qf)) => reduce_p_infinite(g, qf),
        (Exponent::Finite(_), Exponent::Finite(_)) => {
            NormReport { value: reduce_values(g, p, q).0, witness: None }
        }
    }
}

/// Evaluates a witness produced by [`xpq_norm`] or the oracle: `ℓ^p`
/// aggregation for antichain witnesses (`q = ∞`), deepest-first `ℓ^q`
/// aggregation for chain witnesses.
pub fn evaluate_witness(
    g: &DyadicSequence,
    p: Exponent,
    q: Exponent,
    witness: &[DyadicIndex],
) -> f64 {
    if q.is_infinite() {
        match p {
            Exponent::Finite(pf) => {
                let s = witness.iter().fold(0.0, |acc, &i| acc + pow_abs(g.get(i), pf));
                if pf == 1.0 {
                    s
                } else {
                    s.powf(1.0 / pf)
                }
            }
            Exponent::Infinite => witness.iter().fold(0.0f64, |m, &i| m.max(g.get(i).abs())),
        }
    } else {
        let qf = q.value();
        let s = witness.iter().rev().fold(0.0, |acc, &i| acc + pow_abs(g.get(i), qf));
        if qf == 1.0 {
            s
        } else {
            s.powf(1.0 / qf)
        }
    }
}

/// Verification mode for the truncation-based definition: the supremum of
/// norms of `restrict(g, i)` over `i ≤ depth(g)`.  By truncation
/// monotonicity this equals the full-depth norm; computing it this way
/// exists to check exactly that.
pub fn xpq_norm_truncated(g: &DyadicSequence, p: Exponent, q: Exponent) -> f64 {
    let Some(depth) = g.depth() else { return 0.0 };
    (0..=depth).map(|i| xpq_norm(&g.restrict(i), p, q).value).fold(0.0, f64::max)
}

/// Independent oracle for `q = ∞`: direct maximization over every antichain
/// of the depth-`depth(g)` tree, by exhaustive enumeration.
///
/// Ties between equally good antichains resolve to the lexicographically
/// first one (members sorted, then sequence comparison).  Refuses when the
/// sequence is deeper than `limit`.
pub fn brute_force_xp_infty(g: &DyadicSequence, p: Exponent, limit: u32) -> Result<NormReport> {
    let depth = g.depth().unwrap_or(0);
    match p {
        Exponent::Finite(pf) => {
            // Flat table of |g_I|^p so the walk pays O(1) per inclusion.
            let mut table = vec![0.0f64; (1usize << (depth + 1)) - 1];
            for (i, v) in g.iter() {
                table[flat_id(i)] = pow_abs(v, pf);
            }
            let mut best_sum = f64::NEG_INFINITY;
            let mut best: Vec<DyadicIndex> = Vec::new();
            for_each_weighted_antichain(
                depth,
                limit,
                |i| table[flat_id(i)],
                |sum, members| {
                    if sum > best_sum || (sum == best_sum && members < best.as_slice()) {
                        best_sum = sum;
                        best.clear();
                        best.extend_from_slice(members);
                    }
                },
            )?;
            let value = if pf == 1.0 { best_sum } else { best_sum.powf(1.0 / pf) };
            Ok(NormReport { value, witness: Some(best) })
        }
        Exponent::Infinite => {
            let mut best_max = f64::NEG_INFINITY;
            let mut best: Vec<DyadicIndex> = Vec::new();
            for_each_antichain(depth, limit, |members| {
                let m = members.iter().fold(0.0f64, |acc, &i| acc.max(g.get(i).abs()));
                if m > best_max || (m == best_max && members < best.as_slice()) {
                    best_max = m;
                    best.clear();
                    best.extend_from_slice(members);
                }
            })?;
            Ok(NormReport { value: best_max, witness: Some(best) })
        }
    }
}

fn flat_id(i: DyadicIndex) -> usize {
    ((1u64 << i.level) - 1 + i.position) as usize
}

/// `ℓ^q` aggregation of `g` along the root-to-leaf chain of intervals
/// containing `x`, down to `depth(g)`; the pointwise cone formula.
///
/// Summation runs deepest first, matching the internal reduction order so
/// the two agree bit for bit.
pub fn cone_norm(g: &DyadicSequence, q: Exponent, x: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::Input(format!("cone apex {x} lies outside [0, 1)")));
    }
    let Some(depth) = g.depth() else { return Ok(0.0) };
    let chain = (0..=depth).rev().map(|level| {
        let k = (x * 2f64.powi(level as i32)) as u64;
        g.get(DyadicIndex::raw(level, k))
    });
    match q {
        Exponent::Finite(qf) => {
            let s = chain.fold(0.0, |acc, v| acc + pow_abs(v, qf));
            Ok(if qf == 1.0 { s } else { s.powf(1.0 / qf) })
        }
        Exponent::Infinite => Ok(chain.fold(0.0f64, |m, v| m.max(v.abs()))),
    }
}

/// Maximum of [`cone_norm`] over one representative point per deepest-level
/// interval.  Exponential in `depth(g)`; meant for oracle-scale checks.
pub fn max_cone_norm(g: &DyadicSequence, q: Exponent) -> f64 {
    let Some(depth) = g.depth() else { return 0.0 };
    assert!(depth <= 24, "max_cone_norm enumerates 2^depth leaves");
    let mut best = 0.0f64;
    for k in 0..(1u64 << depth) {
        let x = k as f64 * 2f64.powi(-(depth as i32));
        let v = cone_norm(g, q, x).expect("left endpoints lie in [0, 1)");
        if v > best {
            best = v;
        }
    }
    best
}

/// The bilinear pairing `Σ_I f_I g_I`.
pub fn pairing(f: &DyadicSequence, g: &DyadicSequence) -> f64 {
    f.iter().fold(0.0, |acc, (i, v)| acc + v * g.get(i))
}

/// The two norms, their product, the pairing, and the Hölder slack
/// `‖f‖·‖g‖ − |⟨f,g⟩|` (nonnegative when the inequality holds).
#[derive(Clone, Debug, Serialize)]
pub struct HolderReport {
    pub pairing: f64,
    pub f_norm: f64,
    pub g_conjugate_norm: f64,
    pub bound: f64,
    pub slack: f64,
}

impl HolderReport {
    /// `|⟨f,g⟩| ≤ ‖f‖_{X^{p,q}}·‖g‖_{X^{p',q'}}` with constant exactly 1,
    /// up to `tol`.
    pub fn holds(&self, tol: f64) -> bool {
        self.slack >= -tol
    }
}

/// Checks the duality inequality for `f` in `X^{p,q}` against `g` in the
/// conjugate norm.
pub fn holder_check(
    f: &DyadicSequence,
    g: &DyadicSequence,
    p: Exponent,
    q: Exponent,
) -> HolderReport {
    let f_norm = xpq_norm(f, p, q).value;
    let g_conjugate_norm = xpq_norm(g, p.conjugate(), q.conjugate()).value;
    let pair = pairing(f, g);
    let bound = f_norm * g_conjugate_norm;
    HolderReport { pairing: pair, f_norm, g_conjugate_norm, bound, slack: bound - pair.abs() }
}

// Equality weights for the two-term Hölder inequality at exponent `r`:
// returns (α, β) with α·a + β·b = (a, b)_r and unit conjugate norm, for
// a, b ≥ 0 not both zero.  At r = ∞ the full weight goes to the larger
// input, ties preferring the first slot.
fn dual_weights(r: Exponent, a: f64, b: f64) -> (f64, f64) {
    match r {
        Exponent::Infinite => {
            if a >= b {
                (1.0, 0.0)
            } else {
                (0.0, 1.0)
            }
        }
        Exponent::Finite(rf) if rf == 1.0 => (1.0, 1.0),
        // One-sided cases are exact; they also keep weight products clean
        // along sparse chains.
        Exponent::Finite(_) if b == 0.0 && a == 0.0 => (0.0, 0.0),
        Exponent::Finite(_) if b == 0.0 => (1.0, 0.0),
        Exponent::Finite(_) if a == 0.0 => (0.0, 1.0),
        Exponent::Finite(rf) => {
            let m = r.pair_norm(a, b);
            ((a / m).powf(rf - 1.0), (b / m).powf(rf - 1.0))
        }
    }
}

/// Constructs `f` with `‖f‖_{X^{p,q}} ≤ 1` and `⟨f, g⟩ = ‖g‖_{X^{p',q'}}`
/// (up to rounding), realizing the dual norm with constant exactly 1.
///
/// The reduction of `|g|` runs at the conjugate exponents, recording every
/// subtree value; a top-down pass then multiplies out, at each node, the
/// Hölder equality weights between (children-merge, node) at `q'` and
/// (left, right) at `p'`.  `f_I` is `sign(g_I)` times the product of the
/// weights along the path from the root.
pub fn dual_extremizer(g: &DyadicSequence, p: Exponent, q: Exponent) -> DyadicSequence {
    let (pc, qc) = (p.conjugate(), q.conjugate());
    let (_, subtree) = reduce_values(g, pc, qc);
    let mut f = DyadicSequence::new();
    if subtree.is_empty() {
        return f;
    }
    let mut stack = vec![(DyadicIndex::ROOT, 1.0f64)];
    while let Some((node, weight)) = stack.pop() {
        if weight == 0.0 {
            continue;
        }
        let own = g.get(node);
        let vl = subtree.get(&node.left_child()).copied();
        let vr = subtree.get(&node.right_child()).copied();
        let inner = pc.pair_norm(vr.unwrap_or(0.0), vl.unwrap_or(0.0));
        let (phi_node, phi_inner) = dual_weights(qc, own.abs(), inner);
        if own != 0.0 {
            f.set(node, own.signum() * weight * phi_node);
        }
        if vl.is_some() || vr.is_some() {
            let (phi_l, phi_r) = dual_weights(pc, vl.unwrap_or(0.0), vr.unwrap_or(0.0));
            if vl.is_some() {
                stack.push((node.left_child(), weight * phi_inner * phi_l));
            }
            if vr.is_some() {
                stack.push((node.right_child(), weight * phi_inner * phi_r));
            }
        }
    }
    f
}

/// Entrywise `|f_I|^p`.  Together with the power-sum carries this gives
/// `‖f‖_{X^{p,∞}}^p = ‖power_transform(f, p)‖_{X^{1,∞}}`.
pub fn power_transform(f: &DyadicSequence, p: f64) -> Result<DyadicSequence> {
    if !p.is_finite() || p < 1.0 {
        return Err(Error::InvalidExponent(p));
    }
    Ok(f.map_values(|v| pow_abs(v, p)))
}
