//! Lines that brake exactly as long as they accelerate: closed tours over
//! consecutive runs of the sorted phase times, and the exact run-partition
//! dynamic program built on them.

use crate::cycles::span_to_grid;
use crate::model::{Instance, Solution};

use super::{realize, OneStationError, StationView};

/// Overlap realized by one closed tour over the lines `start..=end` of a
/// station whose lines each accelerate and brake for the same time.
///
/// `times` holds that common phase per line, sorted ascending;
/// `wait_bounds` the matching wait arc bounds. The tour feeds each line
/// from the next-slower one and closes by feeding the slowest from the
/// fastest, so consecutive pair weights telescope: the run keeps
/// `times[start] + … + times[end - 1]` on its plateaus, and the closing
/// pair salvages whatever of `times[start]` the period grid leaves it.
pub fn contiguous_cycle_overlap(
    start: usize,
    end: usize,
    times: &[i64],
    wait_bounds: &[(i64, i64)],
    period: i64,
) -> Result<i64, OneStationError> {
    const OP: &str = "contiguous_cycle_overlap";
    if period < 1 {
        return Err(OneStationError::PreconditionNotMet {
            op: OP,
            detail: format!("the period must be at least 1, got {period}"),
        });
    }
    if times.is_empty() {
        return Err(OneStationError::NoLines);
    }
    if wait_bounds.len() != times.len() {
        return Err(OneStationError::LengthMismatch {
            field: "wait_bounds",
            expected: times.len(),
            found: wait_bounds.len(),
        });
    }
    if start > end || end >= times.len() {
        return Err(OneStationError::PreconditionNotMet {
            op: OP,
            detail: format!(
                "the run {start}..={end} does not fit {} lines",
                times.len()
            ),
        });
    }
    for (i, &t) in times.iter().enumerate() {
        if t < 1 {
            return Err(OneStationError::NonPositiveTime { line: i, value: t });
        }
        if i + 1 < times.len() && t > times[i + 1] {
            return Err(OneStationError::PreconditionNotMet {
                op: OP,
                detail: format!(
                    "phase times must be sorted ascending, got {t} before {} at position {i}",
                    times[i + 1]
                ),
            });
        }
    }
    for (i, &(lower, upper)) in wait_bounds.iter().enumerate() {
        if lower > upper {
            return Err(OneStationError::PreconditionNotMet {
                op: OP,
                detail: format!("wait bounds ({lower}, {upper}) of line {i} are reversed"),
            });
        }
    }
    // Pair minima along the run are the slower feeder's phase, pair maxima
    // the receiver's; with the closing pair the span bookkeeping telescopes
    // to the sums below.
    let kept: i64 = times[start..end].iter().sum();
    let mut low = kept + times[start];
    let mut high: i64 = times[start + 1..=end].iter().sum::<i64>() + times[end];
    for &(lower, upper) in &wait_bounds[start..=end] {
        low += lower;
        high += upper;
    }
    let (distance, _) = span_to_grid(low, high, period);
    Ok(kept + (times[start] - distance).max(0))
}

/// Exact solution when every line brakes exactly as long as it accelerates.
/// Requires the full energy grid.
///
/// With equal phases per line, every pair weight is the slower line's
/// phase, so only the multiset of phases matters. Some optimum then closes
/// each of its tours over a consecutive run of the sorted phases — crossing
/// runs can be uncrossed without losing weight or widening any tension
/// span — and singletons keep their self-loop, which never hurts. Splitting
/// the sorted sequence into runs optimally is a one-dimensional dynamic
/// program over [`contiguous_cycle_overlap`] values; among equally good
/// splits the one whose runs reach furthest left is kept.
pub fn solve_equal_times_dp(instance: &Instance) -> Result<Solution, OneStationError> {
    let view = StationView::from_instance(instance)?;
    view.require_complete("solve_equal_times_dp")?;
    for slot in &view.lines {
        if slot.accel != slot.brake {
            return Err(OneStationError::PreconditionNotMet {
                op: "solve_equal_times_dp",
                detail: format!(
                    "line `{}` accelerates for {} but brakes for {}; the run partition needs them equal",
                    slot.line, slot.accel, slot.brake
                ),
            });
        }
    }
    let n = view.n();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (view.lines[i].accel, i));
    let times: Vec<i64> = order.iter().map(|&i| view.lines[i].accel).collect();
    let bounds: Vec<(i64, i64)> = order
        .iter()
        .map(|&i| (view.lines[i].wait_lower, view.lines[i].wait_upper))
        .collect();
    // opt[i]: best total over the first i sorted lines; cut[i]: where the
    // last run starts (smallest start among optima).
    let mut opt = vec![0i64; n + 1];
    let mut cut = vec![0usize; n + 1];
    for i in 1..=n {
        let mut best = i64::MIN;
        let mut best_start = 0;
        for s in 0..i {
            let value =
                contiguous_cycle_overlap(s, i - 1, &times, &bounds, view.period)? + opt[s];
            if value > best {
                best = value;
                best_start = s;
            }
        }
        opt[i] = best;
        cut[i] = best_start;
    }
    let mut pairs = Vec::new();
    let mut i = n;
    while i > 0 {
        let s = cut[i];
        let l = i - 1;
        for k in (s + 1)..=l {
            pairs.push((order[k], order[k - 1]));
        }
        pairs.push((order[s], order[l]));
        i = s;
    }
    let matching = view.matching_of("solve_equal_times_dp", &pairs)?;
    realize(instance, matching)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::{decompose, ComponentKind};
    use crate::model::{validate_instance, EventKind};
    use crate::onestation::tests::Rng;
    use crate::onestation::{build_one_station, solve_uniform_times, OneStationSpec};
    use crate::solver::{brute_force, Objective, SolveRequest};

    #[test]
    fn contiguous_run_worked_examples() {
        // One line, tight wait: the span [3, 3] sits 3 away from the grid.
        assert_eq!(
            contiguous_cycle_overlap(0, 0, &[3], &[(0, 0)], 10).unwrap(),
            0
        );
        // One line, slack wait: the span [4, 8] touches the multiple 8.
        assert_eq!(
            contiguous_cycle_overlap(0, 0, &[4], &[(0, 4)], 8).unwrap(),
            4
        );
        // Three lines: keeps 2 + 3 on the run, and the span [7, 22]
        // contains 12, so the closing pair salvages its full 2.
        assert_eq!(
            contiguous_cycle_overlap(0, 2, &[2, 3, 5], &[(0, 3); 3], 12).unwrap(),
            7
        );
        // The middle line alone spans [3, 6]: distance 3 from the grid of
        // 12 eats its whole phase, while a period of 5 lands inside.
        assert_eq!(
            contiguous_cycle_overlap(1, 1, &[2, 3, 5], &[(0, 3); 3], 12).unwrap(),
            0
        );
        assert_eq!(
            contiguous_cycle_overlap(1, 1, &[2, 3, 5], &[(0, 3); 3], 5).unwrap(),
            3
        );
    }

    #[test]
    fn contiguous_run_rejects_bad_input() {
        let err = contiguous_cycle_overlap(0, 0, &[3], &[(0, 0)], 0);
        assert!(matches!(
            err,
            Err(OneStationError::PreconditionNotMet { .. })
        ));
        assert!(matches!(
            contiguous_cycle_overlap(0, 0, &[], &[], 10),
            Err(OneStationError::NoLines)
        ));
        assert!(matches!(
            contiguous_cycle_overlap(0, 0, &[3, 4], &[(0, 0)], 10),
            Err(OneStationError::LengthMismatch {
                field: "wait_bounds",
                expected: 2,
                found: 1
            })
        ));
        assert!(matches!(
            contiguous_cycle_overlap(1, 0, &[3, 4], &[(0, 0); 2], 10),
            Err(OneStationError::PreconditionNotMet { .. })
        ));
        assert!(matches!(
            contiguous_cycle_overlap(0, 2, &[3, 4], &[(0, 0); 2], 10),
            Err(OneStationError::PreconditionNotMet { .. })
        ));
        assert!(matches!(
            contiguous_cycle_overlap(0, 1, &[4, 3], &[(0, 0); 2], 10),
            Err(OneStationError::PreconditionNotMet { .. })
        ));
        assert!(matches!(
            contiguous_cycle_overlap(0, 1, &[0, 3], &[(0, 0); 2], 10),
            Err(OneStationError::NonPositiveTime { line: 0, value: 0 })
        ));
        assert!(matches!(
            contiguous_cycle_overlap(0, 1, &[3, 3], &[(0, 0), (2, 1)], 10),
            Err(OneStationError::PreconditionNotMet { .. })
        ));
    }

    #[test]
    fn one_line_station_keeps_what_the_grid_allows() {
        let spec = OneStationSpec::new(&[4], &[4], &[(0, 4)]);
        let instance = build_one_station(&spec, 8).unwrap();
        assert_eq!(solve_equal_times_dp(&instance).unwrap().total_overlap, 4);

        let spec = OneStationSpec::new(&[3], &[3], &[(0, 0)]);
        let instance = build_one_station(&spec, 10).unwrap();
        assert_eq!(solve_equal_times_dp(&instance).unwrap().total_overlap, 0);
    }

    #[test]
    fn all_alike_phases_agree_with_the_ring_solver() {
        let mut rng = Rng::new(0x9a37);
        let mut checked = 0;
        while checked < 10 {
            let period = rng.below(5) as i64 + 7;
            let n = (rng.below(4) + 1) as usize;
            let t = rng.below(3) as i64 + 1;
            let mut bounds = Vec::new();
            for _ in 0..n {
                let lower = rng.below(3) as i64;
                bounds.push((lower, lower + rng.below(5) as i64));
            }
            let spec = OneStationSpec::new(&vec![t; n], &vec![t; n], &bounds);
            let instance = build_one_station(&spec, period).unwrap();
            if !validate_instance(&instance).is_empty() {
                continue;
            }
            let by_runs = solve_equal_times_dp(&instance).unwrap();
            let by_ring = solve_uniform_times(&instance).unwrap();
            assert_eq!(
                by_runs.total_overlap, by_ring.total_overlap,
                "run partition and ring disagree on {spec:?} period {period}"
            );
            checked += 1;
        }
    }

    #[test]
    fn run_partition_matches_brute_force() {
        let mut rng = Rng::new(0x5ca1e);
        let mut checked = 0;
        while checked < 20 {
            let period = rng.below(6) as i64 + 7;
            let n = (rng.below(4) + 1) as usize;
            let times: Vec<i64> = (0..n).map(|_| rng.below(3) as i64 + 1).collect();
            let mut bounds = Vec::new();
            for _ in 0..n {
                let lower = rng.below(3) as i64;
                bounds.push((lower, lower + rng.below(6) as i64));
            }
            let spec = OneStationSpec::new(&times, &times, &bounds);
            let instance = build_one_station(&spec, period).unwrap();
            if !validate_instance(&instance).is_empty() {
                continue;
            }
            let fast = solve_equal_times_dp(&instance).unwrap();
            let request = SolveRequest::new(instance, Objective::MaxOverlap);
            let brute = brute_force(&request).unwrap();
            assert_eq!(
                fast.total_overlap,
                brute.solution.unwrap().total_overlap,
                "run partition missed the optimum on {spec:?} period {period}"
            );
            checked += 1;
        }
    }

    #[test]
    fn runs_cover_consecutive_sorted_phases() {
        let mut rng = Rng::new(0xd07);
        let mut checked = 0;
        while checked < 10 {
            let period = rng.below(6) as i64 + 7;
            let n = (rng.below(5) + 2) as usize;
            let times: Vec<i64> = (0..n).map(|_| rng.below(3) as i64 + 1).collect();
            let mut bounds = Vec::new();
            for _ in 0..n {
                let lower = rng.below(3) as i64;
                bounds.push((lower, lower + rng.below(6) as i64));
            }
            let spec = OneStationSpec::new(&times, &times, &bounds);
            let instance = build_one_station(&spec, period).unwrap();
            if !validate_instance(&instance).is_empty() {
                continue;
            }
            let solution = solve_equal_times_dp(&instance).unwrap();
            let view = StationView::from_instance(&instance).unwrap();
            let mut order: Vec<usize> = (0..view.n()).collect();
            order.sort_by_key(|&i| (view.lines[i].accel, i));
            let mut position = vec![0usize; view.n()];
            for (pos, &i) in order.iter().enumerate() {
                position[i] = pos;
            }
            // Every line sits in a closed tour, and each tour's lines are
            // consecutive in the sorted phase order.
            for component in decompose(&instance, &solution.matching).unwrap() {
                assert_eq!(component.kind, ComponentKind::Cycle);
                let mut positions: Vec<usize> = component
                    .events
                    .iter()
                    .filter_map(|id| {
                        let event = instance.events.iter().find(|e| &e.id == id).unwrap();
                        (event.kind == EventKind::Arrival)
                            .then(|| view.lines.iter().position(|s| s.line == event.line))
                            .flatten()
                    })
                    .map(|i| position[i])
                    .collect();
                positions.sort_unstable();
                for pair in positions.windows(2) {
                    assert_eq!(pair[1], pair[0] + 1, "a run skipped a sorted phase");
                }
            }
            checked += 1;
        }
    }
}
