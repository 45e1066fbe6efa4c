//! The discrete S¹ norm — a maximum-weight independent set in the
//! intersection graph — and the S¹/T¹ duality ratio.
//!
//! The search is exact: memoized branch on the lowest-index ball, either
//! skipped or taken together with the removal of its closed neighborhood.
//! Families beyond the configured limit are refused outright, because this
//! norm anchors the duality experiments and must never silently degrade.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};

use super::{t1_discrete_norm, BallFamily};

/// Hard cap imposed by the `u32` subset encoding.
const MASK_CAP: usize = 32;

#[derive(Clone, Debug, Serialize)]
pub struct S1Report {
    /// `max Σ|f_B|` over pairwise-disjoint subfamilies.
    pub value: f64,
    /// Indices of an optimal disjoint subfamily, ascending.
    pub witness: Vec<usize>,
}

fn solve(
    mask: u32,
    weights: &[f64],
    closed_nbr: &[u32],
    memo: &mut HashMap<u32, (f64, u32)>,
) -> (f64, u32) {
    if mask == 0 {
        return (0.0, 0);
    }
    if let Some(&cached) = memo.get(&mask) {
        return cached;
    }
    let v = mask.trailing_zeros() as usize;
    let skip = solve(mask & !(1 << v), weights, closed_nbr, memo);
    let take_rest = solve(mask & !closed_nbr[v], weights, closed_nbr, memo);
    let take = (take_rest.0 + weights[v].abs(), take_rest.1 | 1 << v);
    let best = if take.0 > skip.0 { take } else { skip };
    memo.insert(mask, best);
    best
}

/// Exact maximum of `Σ|f_B|` over pairwise-disjoint subfamilies, with an
/// optimal subfamily.  Refuses families larger than `limit`.
pub fn s1_discrete_norm(family: &BallFamily, weights: &[f64], limit: usize) -> Result<S1Report> {
    let m = family.len();
    let effective = limit.min(MASK_CAP);
    if m > effective {
        return Err(Error::FamilyTooLarge { count: m, limit: effective });
    }
    if weights.len() != m {
        return Err(Error::Input(format!("{} weights for {m} balls", weights.len())));
    }
    let adj = family.adjacency();
    let closed_nbr: Vec<u32> = (0..m)
        .map(|v| (0..m).filter(|&u| u == v || adj[v][u]).fold(0u32, |mask, u| mask | 1 << u))
        .collect();
    let full = if m == 32 { u32::MAX } else { (1u32 << m) - 1 };
    let mut memo = HashMap::new();
    let (value, chosen) = solve(full, weights, &closed_nbr, &mut memo);
    let witness = (0..m).filter(|&i| chosen >> i & 1 == 1).collect();
    Ok(S1Report { value, witness })
}

/// `|Σ f_B g_B| / (S¹(f)·T¹(g))`, recorded per instance; the corpus-wide
/// maximum serves as the empirical duality constant.
#[derive(Clone, Debug, Serialize)]
pub struct DualityRatioReport {
    pub pairing: f64,
    pub s1: f64,
    pub t1: f64,
    /// `None` when everything vanishes (zero over zero).
    pub ratio: Option<f64>,
    /// T¹ exactness flag (false for non-box bodies).
    pub exact: bool,
}

pub fn discrete_duality_check(
    family: &BallFamily,
    f: &[f64],
    g: &[f64],
    limit: usize,
) -> Result<DualityRatioReport> {
    let pairing = f.iter().zip(g).map(|(a, b)| a * b).sum::<f64>().abs();
    let s1 = s1_discrete_norm(family, f, limit)?.value;
    let t1 = t1_discrete_norm(family, g)?;
    let denominator = s1 * t1.value;
    if denominator == 0.0 {
        if pairing > 0.0 {
            // S¹ ≥ max|f_B| and T¹ ≥ max|g_B|, so a positive pairing with a
            // zero denominator cannot happen.
            return Err(Error::Internal(format!("pairing {pairing} > 0 but S¹·T¹ = 0")));
        }
        return Ok(DualityRatioReport { pairing, s1, t1: t1.value, ratio: None, exact: t1.exact });
    }
    Ok(DualityRatioReport {
        pairing,
        s1,
        t1: t1.value,
        ratio: Some(pairing / denominator),
        exact: t1.exact,
    })
}
