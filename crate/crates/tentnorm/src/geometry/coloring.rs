//! Proper coloring of the intersection graph by greedy assignment in
//! volume order, with an exact chromatic number for small families.
//!
//! Processing balls by nondecreasing volume and giving each the smallest
//! color unused among its already-colored neighbors yields at most
//! `1 + max back-degree` colors, the combinatorial heart of the
//! overlap-to-coloring bound.

use serde::Serialize;

use crate::tol::CHROMATIC_LIMIT;

use super::BallFamily;

#[derive(Clone, Debug, Serialize)]
pub struct Coloring {
    /// Processing order: indices sorted by nondecreasing volume.
    pub order: Vec<usize>,
    /// Color of each ball, indexed like the family.
    pub colors: Vec<usize>,
    pub color_count: usize,
    /// Largest number of already-colored neighbors seen at assignment time;
    /// `color_count ≤ max_back_degree + 1` always.
    pub max_back_degree: usize,
    /// Exact chromatic number (branch and bound) for families of at most
    /// [`CHROMATIC_LIMIT`] balls.
    pub chromatic_exact: Option<usize>,
}

impl Coloring {
    /// Ball indices holding a given color.
    pub fn class(&self, color: usize) -> Vec<usize> {
        (0..self.colors.len()).filter(|&i| self.colors[i] == color).collect()
    }
}

pub fn color_family(family: &BallFamily) -> Coloring {
    let m = family.len();
    let adj = family.adjacency();

    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| {
        let va = family.balls[a].volume(&family.body);
        let vb = family.balls[b].volume(&family.body);
        va.partial_cmp(&vb).expect("finite volumes").then(a.cmp(&b))
    });

    let mut colors = vec![usize::MAX; m];
    let mut max_back_degree = 0;
    for &v in &order {
        let back: Vec<usize> = (0..m).filter(|&u| adj[v][u] && colors[u] != usize::MAX).collect();
        max_back_degree = max_back_degree.max(back.len());
        let mut color = 0;
        while back.iter().any(|&u| colors[u] == color) {
            color += 1;
        }
        colors[v] = color;
    }
    let color_count = colors.iter().map(|&c| c + 1).max().unwrap_or(0);

    let chromatic_exact = (m <= CHROMATIC_LIMIT as usize).then(|| chromatic_number_exact(&adj));

    Coloring { order, colors, color_count, max_back_degree, chromatic_exact }
}

/// Whether a color assignment is a proper coloring of the intersection
/// graph (every color class pairwise disjoint).
pub fn is_proper(family: &BallFamily, colors: &[usize]) -> bool {
    let adj = family.adjacency();
    (0..family.len()).all(|i| (i + 1..family.len()).all(|j| !adj[i][j] || colors[i] != colors[j]))
}

/// Exact chromatic number by k-colorability backtracking with symmetry
/// breaking (a vertex may only open one fresh color).
pub fn chromatic_number_exact(adj: &[Vec<bool>]) -> usize {
    let n = adj.len();
    if n == 0 {
        return 0;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(adj[v].iter().filter(|&&e| e).count()));

    fn colorable(
        k: usize,
        idx: usize,
        used: usize,
        order: &[usize],
        adj: &[Vec<bool>],
        colors: &mut [usize],
    ) -> bool {
        if idx == order.len() {
            return true;
        }
        let v = order[idx];
        let cap = k.min(used + 1);
        for c in 0..cap {
            if (0..adj.len()).any(|u| adj[v][u] && colors[u] == c) {
                continue;
            }
            colors[v] = c;
            if colorable(k, idx + 1, used.max(c + 1), order, adj, colors) {
                return true;
            }
            colors[v] = usize::MAX;
        }
        false
    }

    for k in 1..n {
        let mut colors = vec![usize::MAX; n];
        if colorable(k, 0, 0, &order, adj, &mut colors) {
            return k;
        }
    }
    n
}

#[cfg(test)]
mod tests {
    use super::super::{interval_family, total_overlap};
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn three_interval_coloring() {
        let family = interval_family(&[(1.0, 0.9), (2.0, 0.9), (3.0, 0.9)]);
        let c = color_family(&family);
        assert_eq!(c.color_count, 2);
        assert!(is_proper(&family, &c.colors));
        assert_eq!(c.class(c.colors[0]), vec![0, 2]);
        assert_eq!(c.class(c.colors[1]), vec![1]);
        assert_eq!(c.chromatic_exact, Some(2));
    }

    #[test]
    fn disjoint_family_one_color() {
        let family = interval_family(&[(0.0, 0.4), (2.0, 0.4), (4.0, 0.4)]);
        let c = color_family(&family);
        assert_eq!(c.color_count, 1);
        assert_eq!(c.max_back_degree, 0);
        assert_eq!(c.chromatic_exact, Some(1));
    }

    #[test]
    fn identical_balls_form_a_clique() {
        let family = interval_family(&[(1.0, 0.5); 6]);
        let c = color_family(&family);
        assert_eq!(c.color_count, 6);
        assert_eq!(c.chromatic_exact, Some(6));
        assert!(is_proper(&family, &c.colors));
    }

    #[test]
    fn greedy_bound_and_exact_consistency_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(54);
        for _ in 0..60 {
            let spec: Vec<(f64, f64)> = (0..rng.gen_range(1..=10))
                .map(|_| (rng.gen_range(-3.0..3.0), rng.gen_range(0.1..1.5)))
                .collect();
            let family = interval_family(&spec);
            let c = color_family(&family);
            assert!(is_proper(&family, &c.colors));
            assert!(c.color_count <= c.max_back_degree + 1);
            let exact = c.chromatic_exact.unwrap();
            assert!(exact <= c.color_count);
            assert!(exact >= 1);
            // The overlap maximum is a clique, so it lower-bounds χ.
            assert!(exact >= total_overlap(&family).count.min(1));
        }
    }

    #[test]
    fn chromatic_number_known_graphs() {
        // Triangle.
        let t = vec![vec![false, true, true], vec![true, false, true], vec![true, true, false]];
        assert_eq!(chromatic_number_exact(&t), 3);
        // 5-cycle is not bipartite.
        let mut c5 = vec![vec![false; 5]; 5];
        for i in 0..5 {
            let j = (i + 1) % 5;
            c5[i][j] = true;
            c5[j][i] = true;
        }
        assert_eq!(chromatic_number_exact(&c5), 3);
        // Edgeless.
        assert_eq!(chromatic_number_exact(&vec![vec![false; 4]; 4]), 1);
        assert_eq!(chromatic_number_exact(&[]), 0);
    }
}
