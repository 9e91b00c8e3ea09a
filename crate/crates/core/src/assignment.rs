//! Exact max-weight bipartite assignment (Hungarian method with potentials).
//!
//! Left/right vertices are plain indices; absent pairs are passed as weight
//! zero, so a maximum assignment never loses value by "selecting" one — the
//! caller drops non-positive pairs from the returned list. Runs in
//! O(n² · m) and is fully deterministic for a fixed weight function.

/// A maximum-weight assignment: the selected `(left, right)` pairs with
/// strictly positive weight, and their total weight.
pub(crate) struct Assignment {
    pub pairs: Vec<(usize, usize)>,
    pub value: i64,
}

/// Computes a maximum-weight assignment between `n_left` and `n_right`
/// vertices. `weight(i, j)` must be non-negative; pairs that end up with
/// weight zero are omitted from `pairs` (they carry no information).
pub(crate) fn max_assignment<F>(n_left: usize, n_right: usize, weight: F) -> Assignment
where
    F: Fn(usize, usize) -> i64,
{
    if n_left == 0 || n_right == 0 {
        return Assignment {
            pairs: Vec::new(),
            value: 0,
        };
    }
    // The classic shortest-augmenting-path formulation solves a minimum-cost
    // perfect assignment of rows into columns, rows ≤ columns; negate the
    // weights and pad with zero-weight columns when the left side is larger.
    let (rows, cols, transposed) = if n_left <= n_right {
        (n_left, n_right, false)
    } else {
        (n_right, n_left, true)
    };
    let cost = |r: usize, c: usize| -> i64 {
        let w = if transposed { weight(c, r) } else { weight(r, c) };
        debug_assert!(w >= 0, "assignment weights must be non-negative");
        -w
    };

    const INF: i64 = i64::MAX / 4;
    // 1-based arrays; p[j] is the row matched to column j (0 = none).
    let mut u = vec![0i64; rows + 1];
    let mut v = vec![0i64; cols + 1];
    let mut p = vec![0usize; cols + 1];
    let mut way = vec![0usize; cols + 1];
    for i in 1..=rows {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![INF; cols + 1];
        let mut used = vec![false; cols + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = INF;
            let mut j1 = 0usize;
            for j in 1..=cols {
                if used[j] {
                    continue;
                }
                let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=cols {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        // Walk the augmenting path backwards, flipping the matched edges.
        while j0 != 0 {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        }
    }

    let mut pairs = Vec::new();
    let mut value = 0i64;
    for j in 1..=cols {
        if p[j] == 0 {
            continue;
        }
        let (r, c) = (p[j] - 1, j - 1);
        let (l, rr) = if transposed { (c, r) } else { (r, c) };
        let w = weight(l, rr);
        if w > 0 {
            pairs.push((l, rr));
            value += w;
        }
    }
    pairs.sort_unstable();
    Assignment { pairs, value }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Reference: try every injective map of the smaller side into the larger.
    fn brute_best(n_left: usize, n_right: usize, w: &dyn Fn(usize, usize) -> i64) -> i64 {
        fn rec(
            i: usize,
            n_left: usize,
            taken: &mut Vec<bool>,
            w: &dyn Fn(usize, usize) -> i64,
        ) -> i64 {
            if i == n_left {
                return 0;
            }
            // Leaving `i` unmatched is always an option.
            let mut best = rec(i + 1, n_left, taken, w);
            for j in 0..taken.len() {
                if !taken[j] {
                    taken[j] = true;
                    best = best.max(w(i, j) + rec(i + 1, n_left, taken, w));
                    taken[j] = false;
                }
            }
            best
        }
        rec(0, n_left, &mut vec![false; n_right], w)
    }

    #[test]
    fn empty_sides() {
        assert_eq!(max_assignment(0, 5, |_, _| 1).value, 0);
        assert_eq!(max_assignment(3, 0, |_, _| 1).value, 0);
    }

    #[test]
    fn picks_the_cross_pairing() {
        // Diagonal 1+1 = 2 loses to the cross 10+10 = 20.
        let w = [[1, 10], [10, 1]];
        let a = max_assignment(2, 2, |i, j| w[i][j]);
        assert_eq!(a.value, 20);
        assert_eq!(a.pairs, vec![(0, 1), (1, 0)]);
    }

    #[test]
    fn zero_weight_pairs_are_dropped() {
        let w = [[0, 7], [0, 0]];
        let a = max_assignment(2, 2, |i, j| w[i][j]);
        assert_eq!(a.value, 7);
        assert_eq!(a.pairs, vec![(0, 1)]);
    }

    #[test]
    fn rectangular_both_ways() {
        let w = [[3, 1, 9], [2, 8, 1]];
        let a = max_assignment(2, 3, |i, j| w[i][j]);
        assert_eq!(a.value, 17);
        let b = max_assignment(3, 2, |i, j| w[j][i]);
        assert_eq!(b.value, 17);
    }

    #[test]
    fn matches_exhaustive_search_on_seeded_grids() {
        // Small deterministic PRNG; enough to shake out potential/augmenting
        // path bugs without pulling a dependency into the crate.
        let mut state = 0x2545f4914f6cdd1du64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for round in 0..200 {
            let n_left = (next() % 5 + 1) as usize;
            let n_right = (next() % 5 + 1) as usize;
            let grid: Vec<Vec<i64>> = (0..n_left)
                .map(|_| (0..n_right).map(|_| (next() % 30) as i64).collect())
                .collect();
            let w = |i: usize, j: usize| grid[i][j];
            let got = max_assignment(n_left, n_right, w).value;
            let want = brute_best(n_left, n_right, &w);
            assert_eq!(got, want, "round {round}, grid {grid:?}");
        }
    }

    #[test]
    fn returned_pairs_sum_to_value_and_are_a_matching() {
        let grid = [[5, 9, 2, 4], [9, 1, 3, 8], [2, 3, 7, 6]];
        let a = max_assignment(3, 4, |i, j| grid[i][j]);
        let sum: i64 = a.pairs.iter().map(|&(i, j)| grid[i][j]).sum();
        assert_eq!(sum, a.value);
        let mut lefts: Vec<_> = a.pairs.iter().map(|p| p.0).collect();
        let mut rights: Vec<_> = a.pairs.iter().map(|p| p.1).collect();
        lefts.dedup();
        rights.sort_unstable();
        rights.dedup();
        assert_eq!(lefts.len(), a.pairs.len());
        assert_eq!(rights.len(), a.pairs.len());
    }
}
