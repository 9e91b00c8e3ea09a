//! Tours through the lines of one station: the exact maximum-weight visiting
//! order, the cycle-merging heuristic with its additive guarantee, and the
//! exact overlap optimum over every way of splitting the lines into chains
//! and tours.

use crate::cycles::span_to_grid;
use crate::model::{Instance, Solution};

use super::{
    energy_arc_id, realize, MatchedPair, OneStationError, OneStationSpec, StationView,
    WeightedMatchingReport, PARTITION_LINE_LIMIT, TOUR_LINE_LIMIT,
};

/// Maximum-weight visiting order over all lines: `tour[i]` feeds
/// `tour[i + 1]`, and the last line feeds the first.
///
/// Subset dynamic program with line 0 fixed as the start: `O(2ⁿ·n²)` time,
/// `O(2ⁿ·n)` memory (about 80 MB at the 20-line cap). Ties are broken
/// deterministically towards smaller line indices. With one line the tour
/// is the line alone, closed by its own self-loop.
pub(crate) fn best_tour<F: Fn(usize, usize) -> i64>(n: usize, weight: F) -> Vec<usize> {
    debug_assert!(n >= 1, "stations have at least one line");
    if n == 1 {
        return vec![0];
    }
    // Bit v stands for line v + 1; line 0 is the fixed start of every path.
    let m = n - 1;
    let states = 1usize << m;
    let mut dp = vec![i64::MIN; states * m];
    for v in 0..m {
        dp[(1 << v) * m + v] = weight(0, v + 1);
    }
    for mask in 1..states {
        for v in 0..m {
            if mask & (1 << v) == 0 {
                continue;
            }
            let rest = mask ^ (1 << v);
            if rest == 0 {
                continue;
            }
            let mut best = i64::MIN;
            for u in 0..m {
                if rest & (1 << u) == 0 {
                    continue;
                }
                let reach = dp[rest * m + u];
                if reach == i64::MIN {
                    continue;
                }
                let cand = reach + weight(u + 1, v + 1);
                if cand > best {
                    best = cand;
                }
            }
            dp[mask * m + v] = best;
        }
    }
    let all = states - 1;
    let mut end = 0;
    let mut best = i64::MIN;
    for v in 0..m {
        let reach = dp[all * m + v];
        if reach == i64::MIN {
            continue;
        }
        let cand = reach + weight(v + 1, 0);
        if cand > best {
            best = cand;
            end = v;
        }
    }
    // Walk the winning path backwards; any equality split is optimal, the
    // first hit keeps the result deterministic.
    let mut tour_rev = vec![end + 1];
    let mut mask = all;
    let mut v = end;
    while mask != (1 << v) {
        let rest = mask ^ (1 << v);
        let target = dp[mask * m + v];
        let mut prev = usize::MAX;
        for u in 0..m {
            if rest & (1 << u) == 0 {
                continue;
            }
            let reach = dp[rest * m + u];
            if reach != i64::MIN && reach + weight(u + 1, v + 1) == target {
                prev = u;
                break;
            }
        }
        debug_assert_ne!(prev, usize::MAX, "every optimal state has a predecessor");
        tour_rev.push(prev + 1);
        mask = rest;
        v = prev;
    }
    tour_rev.push(0);
    tour_rev.reverse();
    tour_rev
}

/// The consecutive `(from, to)` pairs of a visiting order, closing arc
/// included. A one-line tour is its self-loop.
pub(crate) fn tour_pairs(tour: &[usize]) -> Vec<(usize, usize)> {
    let n = tour.len();
    (0..n).map(|i| (tour[i], tour[(i + 1) % n])).collect()
}

fn spec_report(spec: &OneStationSpec, pairs: Vec<(usize, usize)>) -> WeightedMatchingReport {
    let mut pairs: Vec<MatchedPair> = pairs
        .into_iter()
        .map(|(from, to)| MatchedPair {
            dep_line: from,
            arr_line: to,
            weight: spec.accel_times[from].min(spec.brake_times[to]),
        })
        .collect();
    pairs.sort_by_key(|p| p.dep_line);
    let weight = pairs.iter().map(|p| p.weight).sum();
    let matching = pairs
        .iter()
        .map(|p| energy_arc_id(p.dep_line, p.arr_line))
        .collect();
    WeightedMatchingReport {
        matching,
        pairs,
        weight,
    }
}

/// The heaviest single tour through every line. Requires the full energy
/// grid and at most [`TOUR_LINE_LIMIT`] lines.
///
/// Among perfect pairings, those forming one tour keep the whole station in
/// a single component; the report's [`path_weight`] is what that tour
/// realizes once opened into a chain by dropping its weakest arc.
///
/// [`path_weight`]: WeightedMatchingReport::path_weight
pub fn max_weight_hamiltonian_cycle(
    spec: &OneStationSpec,
) -> Result<WeightedMatchingReport, OneStationError> {
    let n = spec.check()?;
    spec.require_all_pairs("max_weight_hamiltonian_cycle")?;
    if n > TOUR_LINE_LIMIT {
        return Err(OneStationError::TooManyLines {
            op: "max_weight_hamiltonian_cycle",
            lines: n,
            limit: TOUR_LINE_LIMIT,
        });
    }
    let tour = best_tour(n, |a, b| spec.accel_times[a].min(spec.brake_times[b]));
    Ok(spec_report(spec, tour_pairs(&tour)))
}

/// Merges the rank-by-rank pairing into one tour by swapping adjacent
/// departure ranks, at line-index level. Returns the tour's pairs.
///
/// Departures are ranked by ascending acceleration time, arrivals by
/// ascending braking time (ties by line index). The rank-for-rank pairing
/// maximizes total weight but may split into several cycles; each round
/// follows the cycle containing departure rank 0 and, if lines remain
/// outside it, swaps the first seen/unseen boundary pair of ranks, which
/// splices two cycles into one. At most `n - 1` swaps later the pairing is
/// a single tour.
pub(crate) fn merge_pairs(accel: &[i64], brake: &[i64]) -> Vec<(usize, usize)> {
    let n = accel.len();
    debug_assert_eq!(n, brake.len());
    debug_assert!(n >= 1);
    let mut deps: Vec<usize> = (0..n).collect();
    deps.sort_by_key(|&i| (accel[i], i));
    let mut arrs: Vec<usize> = (0..n).collect();
    arrs.sort_by_key(|&i| (brake[i], i));
    let mut rank_of_dep = vec![0usize; n];
    for (r, &line) in deps.iter().enumerate() {
        rank_of_dep[line] = r;
    }
    // phi maps departure rank to the arrival rank it feeds.
    let mut phi: Vec<usize> = (0..n).collect();
    loop {
        let mut seen = vec![false; n];
        let mut r = 0;
        while !seen[r] {
            seen[r] = true;
            r = rank_of_dep[arrs[phi[r]]];
        }
        if seen.iter().all(|&s| s) {
            break;
        }
        let boundary = (0..n - 1)
            .find(|&l| seen[l] && !seen[l + 1])
            .expect("an unseen rank follows a seen one");
        phi.swap(boundary, boundary + 1);
    }
    (0..n).map(|r| (deps[r], arrs[phi[r]])).collect()
}

/// Single tour built by merging the cycles of the rank-by-rank pairing.
/// Requires the full energy grid.
///
/// Each merge swaps adjacent sorted ranks, so the tour's weight after
/// dropping its weakest arc — [`path_weight`], what the opened tour
/// realizes — trails the best perfect pairing by at most the smaller of the
/// largest acceleration and the largest braking time. Runs in `O(n²)`,
/// any number of lines.
///
/// [`path_weight`]: WeightedMatchingReport::path_weight
pub fn merge_heuristic(spec: &OneStationSpec) -> Result<WeightedMatchingReport, OneStationError> {
    spec.check()?;
    spec.require_all_pairs("merge_heuristic")?;
    let pairs = merge_pairs(&spec.accel_times, &spec.brake_times);
    Ok(spec_report(spec, pairs))
}

/// The exact overlap optimum together with a schedule achieving it.
#[derive(Debug, Clone)]
pub struct OverlapOptimum {
    /// Best total overlap over every selection of energy arcs.
    pub value: i64,
    /// A schedule realizing a best selection.
    pub solution: Solution,
}

/// Exact maximum total overlap of a single-station instance, over every
/// selection of energy arcs and every schedule. At most
/// [`PARTITION_LINE_LIMIT`] lines; restricted energy grids are fine.
///
/// Every selection splits the lines into chains and closed tours. A chain
/// realizes its full pair weight; a tour forfeits the smaller of its
/// weakest pair and the distance between its tension span and the period
/// grid. Heavier tours over the same lines tighten the span symmetrically,
/// so per line set only the heaviest feasible tour matters; the optimum is
/// a best-scored partition of the lines into single chains and tours, found
/// by dynamic programming over subsets.
///
/// On instances that pass [`crate::validate_instance`] the returned
/// schedule achieves exactly `value`. Instances whose phase pairs exceed
/// the period are scored by the same residue accounting, but the schedule
/// built for them may land elsewhere on the affected tours.
pub fn exact_overlap_optimum(instance: &Instance) -> Result<OverlapOptimum, OneStationError> {
    let view = StationView::from_instance(instance)?;
    let n = view.n();
    if n > PARTITION_LINE_LIMIT {
        return Err(OneStationError::TooManyLines {
            op: "exact_overlap_optimum",
            lines: n,
            limit: PARTITION_LINE_LIMIT,
        });
    }
    let full = (1usize << n) - 1;
    let weight = |a: usize, b: usize| -> Option<i64> {
        view.energy
            .contains_key(&(a, b))
            .then(|| view.short_phase(a, b))
    };
    const NONE: i64 = i64::MIN;
    let idx = |mask: usize, last: usize| mask * n + last;

    // chain[mask][last]: heaviest open path through exactly `mask`, ending
    // at `last`, starting anywhere. path[mask][last]: the same, but starting
    // at the lowest line of `mask` — the half of a tour before it closes.
    let mut chain = vec![NONE; (full + 1) * n];
    let mut path = vec![NONE; (full + 1) * n];
    for v in 0..n {
        chain[idx(1 << v, v)] = 0;
        path[idx(1 << v, v)] = 0;
    }
    for mask in 1..=full {
        let lb = mask.trailing_zeros() as usize;
        for last in 0..n {
            if mask & (1 << last) == 0 {
                continue;
            }
            let c = chain[idx(mask, last)];
            let p = path[idx(mask, last)];
            if c == NONE && p == NONE {
                continue;
            }
            for next in 0..n {
                if mask & (1 << next) != 0 {
                    continue;
                }
                let Some(w) = weight(last, next) else {
                    continue;
                };
                let grown = mask | (1 << next);
                if c != NONE && c + w > chain[idx(grown, next)] {
                    chain[idx(grown, next)] = c + w;
                }
                // Growing below the anchor would change the lowest line.
                if p != NONE && next > lb && p + w > path[idx(grown, next)] {
                    path[idx(grown, next)] = p + w;
                }
            }
        }
    }

    // Best single structure per line set: an open chain keeps its whole
    // weight; a tour of weight w spans [waits_low + w, waits_high + phases - w]
    // and forfeits min(weakest line phase, distance of that span to the grid).
    let mut block = vec![NONE; full + 1];
    let mut block_pick: Vec<Option<(bool, usize)>> = vec![None; full + 1];
    for mask in 1..=full {
        let lb = mask.trailing_zeros() as usize;
        let mut best = NONE;
        let mut pick = None;
        for last in 0..n {
            if mask & (1 << last) == 0 {
                continue;
            }
            let c = chain[idx(mask, last)];
            if c != NONE && c > best {
                best = c;
                pick = Some((false, last));
            }
        }
        let mut waits_low = 0;
        let mut span_rest = 0;
        let mut theta = i64::MAX;
        for i in 0..n {
            if mask & (1 << i) != 0 {
                let slot = &view.lines[i];
                waits_low += slot.wait_lower;
                span_rest += slot.wait_upper + slot.accel + slot.brake;
                theta = theta.min(slot.accel.min(slot.brake));
            }
        }
        let mut w_best = NONE;
        let mut w_last = 0;
        for last in 0..n {
            if mask & (1 << last) == 0 {
                continue;
            }
            let p = path[idx(mask, last)];
            if p == NONE {
                continue;
            }
            let Some(w) = weight(last, lb) else {
                continue;
            };
            if p + w > w_best {
                w_best = p + w;
                w_last = last;
            }
        }
        if w_best != NONE {
            let (distance, _) =
                span_to_grid(waits_low + w_best, span_rest - w_best, view.period);
            let value = w_best - theta.min(distance);
            if value > best {
                best = value;
                pick = Some((true, w_last));
            }
        }
        block[mask] = best;
        block_pick[mask] = pick;
    }

    // Partition the lines into blocks; anchor each block at the lowest
    // remaining line so every partition is enumerated once.
    let mut part = vec![NONE; full + 1];
    let mut part_pick = vec![0usize; full + 1];
    part[0] = 0;
    for mask in 1..=full {
        let lb_bit = 1usize << mask.trailing_zeros();
        let mut best = NONE;
        let mut best_sub = 0;
        let mut sub = mask;
        loop {
            if sub & lb_bit != 0 && block[sub] != NONE && part[mask ^ sub] != NONE {
                let cand = block[sub] + part[mask ^ sub];
                if cand > best {
                    best = cand;
                    best_sub = sub;
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & mask;
        }
        part[mask] = best;
        part_pick[mask] = best_sub;
    }

    // Rebuild the winning pairs by walking each dynamic program backwards.
    let backtrack = |dp: &[i64], mut mask: usize, mut last: usize, pairs: &mut Vec<(usize, usize)>| {
        while mask != (1 << last) {
            let shrunk = mask ^ (1 << last);
            let target = dp[idx(mask, last)];
            let mut prev = usize::MAX;
            for u in 0..n {
                if shrunk & (1 << u) == 0 {
                    continue;
                }
                let reach = dp[idx(shrunk, u)];
                if reach == NONE {
                    continue;
                }
                if let Some(w) = weight(u, last) {
                    if reach + w == target {
                        prev = u;
                        break;
                    }
                }
            }
            debug_assert_ne!(prev, usize::MAX, "every optimal state has a predecessor");
            pairs.push((prev, last));
            mask = shrunk;
            last = prev;
        }
    };
    let mut pairs = Vec::new();
    let mut rest = full;
    while rest != 0 {
        let sub = part_pick[rest];
        let (is_tour, last) = block_pick[sub].expect("chosen blocks have a structure");
        if is_tour {
            pairs.push((last, sub.trailing_zeros() as usize));
            backtrack(&path, sub, last, &mut pairs);
        } else {
            backtrack(&chain, sub, last, &mut pairs);
        }
        rest ^= sub;
    }
    let matching = view.matching_of("exact_overlap_optimum", &pairs)?;
    let solution = realize(instance, matching)?;
    Ok(OverlapOptimum {
        value: part[full],
        solution,
    })
}
