//! Dyadic intervals of `[0, 1)`, finitely supported coefficient sequences,
//! antichains, and exhaustive antichain enumeration.
//!
//! An index `(level j, position k)` names the half-open interval
//! `[k·2^{-j}, (k+1)·2^{-j})`.  Two dyadic intervals are always either nested
//! or disjoint, which is what makes antichains (pairwise disjoint finite
//! collections) and chains (nested root-to-leaf paths) the two extremal
//! combinatorial shapes everything else in this crate aggregates over.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Deepest representable level; keeps `position < 2^level` and interval
/// endpoints comfortably inside `u64`/`f64` range.
pub const MAX_LEVEL: u32 = 60;

/// A dyadic interval `[k·2^{-j}, (k+1)·2^{-j}) ⊆ [0, 1)`, stored as
/// `(level, position) = (j, k)`.
///
/// The derived ordering is lexicographic by level then position, i.e. breadth
/// first through the tree; witnesses and iteration orders rely on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DyadicIndex {
    pub level: u32,
    #[serde(rename = "index")]
    pub position: u64,
}

/// How two dyadic intervals sit relative to each other.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Equal,
    /// `self` strictly contains the other interval.
    Contains,
    /// `self` is strictly contained in the other interval.
    ContainedIn,
    Disjoint,
}

impl DyadicIndex {
    /// The whole interval `[0, 1)`.
    pub const ROOT: DyadicIndex = DyadicIndex { level: 0, position: 0 };

    pub fn new(level: u32, position: u64) -> Result<Self> {
        if level > MAX_LEVEL {
            return Err(Error::LevelTooDeep { level, max: MAX_LEVEL });
        }
        if position >= 1u64 << level {
            return Err(Error::PositionOutOfRange { level, position });
        }
        Ok(DyadicIndex { level, position })
    }

    /// Internal constructor for indices already known to be in range.
    pub(crate) fn raw(level: u32, position: u64) -> Self {
        debug_assert!(level <= MAX_LEVEL && position < 1u64 << level);
        DyadicIndex { level, position }
    }

    pub fn is_root(self) -> bool {
        self.level == 0
    }

    /// Left half `[k·2^{-j}, (k + 1/2)·2^{-j})`.
    pub fn left_child(self) -> Self {
        assert!(self.level < MAX_LEVEL, "level cap {MAX_LEVEL} exceeded");
        DyadicIndex { level: self.level + 1, position: self.position << 1 }
    }

    /// Right half `[(k + 1/2)·2^{-j}, (k+1)·2^{-j})`.
    pub fn right_child(self) -> Self {
        assert!(self.level < MAX_LEVEL, "level cap {MAX_LEVEL} exceeded");
        DyadicIndex { level: self.level + 1, position: (self.position << 1) | 1 }
    }

    pub fn parent(self) -> Result<Self> {
        if self.is_root() {
            return Err(Error::RootHasNoParent);
        }
        Ok(DyadicIndex { level: self.level - 1, position: self.position >> 1 })
    }

    /// The ancestor at a coarser (or equal) level.
    pub fn ancestor_at(self, level: u32) -> Result<Self> {
        if level > self.level {
            return Err(Error::LevelBeyondDepth { level, depth: self.level });
        }
        Ok(DyadicIndex { level, position: self.position >> (self.level - level) })
    }

    pub fn relate(self, other: DyadicIndex) -> Relation {
        use std::cmp::Ordering;
        match self.level.cmp(&other.level) {
            Ordering::Equal => {
                if self.position == other.position {
                    Relation::Equal
                } else {
                    Relation::Disjoint
                }
            }
            Ordering::Less => {
                if other.position >> (other.level - self.level) == self.position {
                    Relation::Contains
                } else {
                    Relation::Disjoint
                }
            }
            Ordering::Greater => {
                if self.position >> (self.level - other.level) == other.position {
                    Relation::ContainedIn
                } else {
                    Relation::Disjoint
                }
            }
        }
    }

    /// Whether `self` contains `other` (allowing equality).
    pub fn contains(self, other: DyadicIndex) -> bool {
        matches!(self.relate(other), Relation::Equal | Relation::Contains)
    }

    /// `|I| = 2^{-level}`.
    pub fn length(self) -> f64 {
        2f64.powi(-(self.level as i32))
    }

    /// Left endpoint `k·2^{-j}` (exact for levels up to the mantissa width).
    pub fn left(self) -> f64 {
        self.position as f64 * self.length()
    }

    pub fn right(self) -> f64 {
        (self.position + 1) as f64 * self.length()
    }

    pub fn midpoint(self) -> f64 {
        self.left() + 0.5 * self.length()
    }

    pub fn contains_point(self, x: f64) -> bool {
        self.left() <= x && x < self.right()
    }

    /// Smallest and largest index at a level, for range scans over ordered maps.
    pub(crate) fn level_bounds(level: u32) -> (DyadicIndex, DyadicIndex) {
        (DyadicIndex::raw(level, 0), DyadicIndex::raw(level, (1u64 << level) - 1))
    }
}

impl fmt::Display for DyadicIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.level, self.position)
    }
}

/// A finitely supported real sequence indexed by dyadic intervals.
///
/// Zero values are never stored: setting an entry to `0` removes it, so the
/// support is exactly the key set and iteration order is breadth-first
/// lexicographic.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DyadicSequence {
    entries: BTreeMap<DyadicIndex, f64>,
}

impl DyadicSequence {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries<T: IntoIterator<Item = (DyadicIndex, f64)>>(entries: T) -> Self {
        let mut s = Self::new();
        for (i, v) in entries {
            s.set(i, v);
        }
        s
    }

    pub fn get(&self, index: DyadicIndex) -> f64 {
        self.entries.get(&index).copied().unwrap_or(0.0)
    }

    pub fn set(&mut self, index: DyadicIndex, value: f64) {
        debug_assert!(value.is_finite());
        if value == 0.0 {
            self.entries.remove(&index);
        } else {
            self.entries.insert(index, value);
        }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    /// Deepest level carrying a nonzero entry, or `None` for the zero sequence.
    pub fn depth(&self) -> Option<u32> {
        self.entries.keys().map(|i| i.level).max()
    }

    pub fn iter(&self) -> impl Iterator<Item = (DyadicIndex, f64)> + '_ {
        self.entries.iter().map(|(&i, &v)| (i, v))
    }

    /// Entries at one level, in position order.
    pub fn level_iter(&self, level: u32) -> impl Iterator<Item = (DyadicIndex, f64)> + '_ {
        let (lo, hi) = DyadicIndex::level_bounds(level);
        self.entries.range(lo..=hi).map(|(&i, &v)| (i, v))
    }

    /// Truncation: keep entries with `level ≤ max_level`, drop the rest.
    pub fn restrict(&self, max_level: u32) -> Self {
        DyadicSequence {
            entries: self
                .entries
                .iter()
                .filter(|(i, _)| i.level <= max_level)
                .map(|(&i, &v)| (i, v))
                .collect(),
        }
    }

    /// Entrywise transform; results equal to zero leave the support.
    pub fn map_values<F: Fn(f64) -> f64>(&self, f: F) -> Self {
        Self::from_entries(self.iter().map(|(i, v)| (i, f(v))))
    }

    pub fn scaled(&self, t: f64) -> Self {
        self.map_values(|v| t * v)
    }
}

impl Add<&DyadicSequence> for &DyadicSequence {
    type Output = DyadicSequence;

    fn add(self, rhs: &DyadicSequence) -> DyadicSequence {
        let mut out = self.clone();
        for (i, v) in rhs.iter() {
            out.set(i, out.get(i) + v);
        }
        out
    }
}

/// A validated antichain: pairwise disjoint dyadic intervals, stored sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Antichain {
    members: Vec<DyadicIndex>,
}

impl Antichain {
    pub fn new(mut members: Vec<DyadicIndex>) -> Result<Self> {
        members.sort();
        for i in 0..members.len() {
            for j in i + 1..members.len() {
                if members[i].relate(members[j]) != Relation::Disjoint {
                    return Err(Error::NotAnAntichain { a: members[i], b: members[j] });
                }
            }
        }
        Ok(Antichain { members })
    }

    pub(crate) fn from_sorted_unchecked(members: Vec<DyadicIndex>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Antichain { members }
    }

    pub fn members(&self) -> &[DyadicIndex] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Total length of the union, which is at most 1.
    pub fn measure(&self) -> f64 {
        self.members.iter().map(|i| i.length()).sum()
    }
}

/// Number of antichains (including the empty one) in the full binary tree of
/// the given depth: `A(0) = 2`, `A(d) = A(d-1)^2 + 1`.  `None` on overflow.
pub fn antichain_count(max_depth: u32) -> Option<u128> {
    let mut count: u128 = 2;
    for _ in 0..max_depth {
        count = count.checked_mul(count)?.checked_add(1)?;
    }
    Some(count)
}

/// Visits every antichain of the depth-`max_depth` tree exactly once,
/// including the empty one.  Members are passed sorted.
///
/// Refuses (rather than hangs) when `max_depth > limit`: the count is
/// `A(d) = A(d-1)^2 + 1`, so each extra level squares the work.
pub fn for_each_antichain<V>(max_depth: u32, limit: u32, mut visit: V) -> Result<()>
where
    V: FnMut(&[DyadicIndex]),
{
    for_each_weighted_antichain(max_depth, limit, |_| 0.0, |_, members| visit(members))
}

/// Collects every antichain of the depth-`max_depth` tree.
pub fn enumerate_antichains(max_depth: u32, limit: u32) -> Result<Vec<Antichain>> {
    let mut out = Vec::new();
    for_each_antichain(max_depth, limit, |members| {
        out.push(Antichain::from_sorted_unchecked(members.to_vec()));
    })?;
    Ok(out)
}

/// Enumeration that also threads an additive weight along each inclusion
/// path, so brute-force maximizers get their objective in O(1) per visit.
///
/// The weight of an antichain is the plain left-to-right sum of member
/// weights in breadth-first order; no subtraction ever happens, so the float
/// result per antichain is reproducible.
pub(crate) fn for_each_weighted_antichain<W, V>(
    max_depth: u32,
    limit: u32,
    weight: W,
    mut visit: V,
) -> Result<()>
where
    W: Fn(DyadicIndex) -> f64,
    V: FnMut(f64, &[DyadicIndex]),
{
    if max_depth > limit {
        return Err(Error::DepthLimitExceeded { depth: max_depth, limit });
    }
    let mut arena: Vec<(DyadicIndex, u32)> = vec![(DyadicIndex::ROOT, max_depth)];
    let mut chosen: Vec<DyadicIndex> = Vec::new();
    walk(&mut arena, 0, &mut chosen, 0.0, &weight, &mut visit);
    Ok(())
}

// Frontier walk: `arena[cursor..]` holds pending nodes in breadth-first
// order; each node is either excluded (its children join the frontier) or
// included (its subtree is closed off).  `chosen` stays sorted because the
// frontier is breadth-first.
fn walk<W, V>(
    arena: &mut Vec<(DyadicIndex, u32)>,
    cursor: usize,
    chosen: &mut Vec<DyadicIndex>,
    sum: f64,
    weight: &W,
    visit: &mut V,
) where
    W: Fn(DyadicIndex) -> f64,
    V: FnMut(f64, &[DyadicIndex]),
{
    if cursor == arena.len() {
        visit(sum, chosen);
        return;
    }
    let (node, budget) = arena[cursor];
    let mark = arena.len();
    if budget > 0 {
        arena.push((node.left_child(), budget - 1));
        arena.push((node.right_child(), budget - 1));
    }
    walk(arena, cursor + 1, chosen, sum, weight, visit);
    arena.truncate(mark);
    chosen.push(node);
    let sum = sum + weight(node);
    walk(arena, cursor + 1, chosen, sum, weight, visit);
    chosen.pop();
}
