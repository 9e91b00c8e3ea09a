//! Exhaustive reference solver.
//!
//! Two search strategies, both deliberately naive:
//!
//! * **timetable sweep** — try every anchored timetable (at most 8 events,
//!   period at most 12) and pick the best matching per timetable by
//!   assignment;
//! * **matching sweep** — for max-overlap on a paired one-station instance
//!   (at most 6 lines, period at most 12), try every matching and exhaust
//!   each resulting cycle's tension space by a residue sweep.
//!
//! Anything outside those guard rails is refused. The point of this module
//! is to be obviously correct, not fast; the real solvers are tested against
//! it.

use std::collections::BTreeMap;

use crate::eval::evaluate;
use crate::model::{validate_instance, ActivityKind, EventKind, Matching, Timetable, Topo};
use crate::solver::support::{EnergyLayout, TravelScale};
use crate::solver::{
    Objective, ObjectiveValue, SolveError, SolveRequest, SolveResult, SolveStatus,
};

const MAX_EVENTS: usize = 8;
const MAX_LINES: usize = 6;
const MAX_PERIOD: i64 = 12;

pub fn brute_force(request: &SolveRequest) -> Result<SolveResult, SolveError> {
    let violations = validate_instance(&request.instance);
    if !violations.is_empty() {
        return Err(SolveError::Invalid(violations));
    }
    let topo = Topo::new(&request.instance)?;
    if topo.events.len() <= MAX_EVENTS && topo.period <= MAX_PERIOD {
        return Ok(sweep_timetables(request, &topo));
    }
    if request.objective == Objective::MaxOverlap && topo.period <= MAX_PERIOD {
        if let Some(view) = PairedStation::extract(&topo) {
            if view.lines.len() <= MAX_LINES {
                return Ok(sweep_matchings(request, &topo, &view));
            }
        }
    }
    Err(SolveError::TooLarge {
        events: topo.events.len(),
        period: topo.period,
    })
}

// ---------------------------------------------------------------------------
// Timetable sweep.
// ---------------------------------------------------------------------------

fn sweep_timetables(request: &SolveRequest, topo: &Topo) -> SolveResult {
    let t = topo.period;
    let n = topo.events.len();

    // One event per connected component (over every arc) is pinned to 0;
    // both objectives are invariant under shifting a whole component.
    let mut anchored = vec![false; n];
    let mut seen = vec![false; n];
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for a in &topo.acts {
        adj[a.tail].push(a.head);
        adj[a.head].push(a.tail);
    }
    for start in 0..n {
        if seen[start] {
            continue;
        }
        anchored[start] = true;
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    let free: Vec<usize> = (0..n).filter(|&i| !anchored[i]).collect();

    // Arcs become checkable once their later endpoint gets a time; walking
    // events in id order keeps the enumeration lexicographic and lets bad
    // prefixes die early.
    let depth_of = |ev: usize| -> usize {
        if anchored[ev] {
            0
        } else {
            free.iter().position(|&f| f == ev).unwrap() + 1
        }
    };
    let mut checks: Vec<Vec<usize>> = vec![Vec::new(); free.len() + 1];
    for (idx, a) in topo.acts.iter().enumerate() {
        if matches!(
            a.act.kind,
            ActivityKind::Wait | ActivityKind::Drive | ActivityKind::Headway
        ) {
            checks[depth_of(a.tail).max(depth_of(a.head))].push(idx);
        }
    }

    let scale = TravelScale::of(topo);
    let layout = EnergyLayout::of(topo);

    let mut times = vec![0i64; n];
    let mut nodes = 0u64;
    let mut best: Option<Best> = None;

    // Depth-first odometer over the free events.
    let mut depth = 0usize;
    let mut value = vec![0i64; free.len()];
    'outer: loop {
        // Feasibility of the arcs completed at this depth.
        let feasible = checks[depth].iter().all(|&idx| {
            let a = &topo.acts[idx];
            let x = (times[a.head] - times[a.tail] - a.act.lower).rem_euclid(t) + a.act.lower;
            x <= a.act.upper
        });
        if feasible && depth == free.len() {
            nodes += 1;
            leaf(request, topo, &times, &layout, &scale, &mut best);
        }
        if feasible && depth < free.len() {
            value[depth] = 0;
            times[free[depth]] = 0;
            depth += 1;
            continue;
        }
        // Advance the odometer.
        loop {
            if depth == 0 {
                break 'outer;
            }
            let d = depth - 1;
            if value[d] + 1 < t {
                value[d] += 1;
                times[free[d]] = value[d];
                break;
            }
            depth -= 1;
        }
    }

    finish(request, topo, best, nodes, &scale)
}

fn leaf(
    request: &SolveRequest,
    topo: &Topo,
    times: &[i64],
    layout: &EnergyLayout,
    scale: &TravelScale,
    best: &mut Option<Best>,
) {
    let (overlap, matched) = layout.best_matching(topo, times);
    if overlap < request.overlap_floor {
        return;
    }
    let score = match request.objective {
        Objective::MaxOverlap => overlap,
        Objective::MinTravel => scale.travel_of(topo, times),
    };
    // The sweep runs in lexicographic timetable order, so keeping only
    // strict improvements returns the lexicographically smallest optimum.
    let improves = match (&best, request.objective) {
        (None, _) => true,
        (Some(b), Objective::MaxOverlap) => score > b.score,
        (Some(b), Objective::MinTravel) => score < b.score,
    };
    if improves {
        *best = Some(Best {
            score,
            times: times.to_vec(),
            matched,
        });
    }
}

struct Best {
    score: i64,
    times: Vec<i64>,
    matched: Vec<usize>,
}

fn finish(
    request: &SolveRequest,
    topo: &Topo,
    best: Option<Best>,
    nodes: u64,
    scale: &TravelScale,
) -> SolveResult {
    match best {
        None => SolveResult {
            status: SolveStatus::Infeasible,
            solution: None,
            bound: None,
            nodes,
        },
        Some(b) => {
            let timetable: Timetable = topo
                .events
                .iter()
                .enumerate()
                .map(|(i, ev)| (ev.id.clone(), b.times[i]))
                .collect();
            let matching: Matching = b
                .matched
                .iter()
                .map(|&idx| topo.acts[idx].act.id.clone())
                .collect();
            let solution = evaluate(&request.instance, &matching, &timetable)
                .expect("the sweep only keeps feasible leaves");
            let bound = match request.objective {
                Objective::MaxOverlap => ObjectiveValue::Overlap(b.score),
                Objective::MinTravel => ObjectiveValue::Travel(scale.to_weight(b.score)),
            };
            debug_assert!(match request.objective {
                Objective::MaxOverlap => solution.total_overlap == b.score,
                Objective::MinTravel => solution.travel_time == scale.to_weight(b.score),
            });
            SolveResult {
                status: SolveStatus::Optimal,
                solution: Some(solution),
                bound: Some(bound),
                nodes,
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Matching sweep for the paired one-station case.
// ---------------------------------------------------------------------------

/// A station where every line contributes exactly one arrival/departure pair
/// joined by a wait arc, with optional energy arcs between lines and nothing
/// else that constrains the timetable (transfers are free and tolerated).
struct PairedStation {
    /// `(arr event, dep event, wait lower, wait upper, accel, brake)`,
    /// ordered by line id.
    lines: Vec<LineView>,
    /// `(dep line, arr line) → activity index`; parallel arcs keep the
    /// smallest id (they carry identical phase times anyway).
    energy: BTreeMap<(usize, usize), usize>,
}

struct LineView {
    arr: usize,
    dep: usize,
    wait_lower: i64,
    wait_upper: i64,
    accel: i64,
    brake: i64,
}

impl PairedStation {
    fn extract(topo: &Topo) -> Option<PairedStation> {
        let station = &topo.events.first()?.station;
        let mut by_line: BTreeMap<&crate::ids::LineId, (Option<usize>, Option<usize>)> =
            BTreeMap::new();
        for (i, ev) in topo.events.iter().enumerate() {
            if &ev.station != station {
                return None;
            }
            let slot = by_line.entry(&ev.line).or_default();
            match ev.kind {
                EventKind::Arrival => {
                    if slot.0.replace(i).is_some() {
                        return None;
                    }
                }
                EventKind::Departure => {
                    if slot.1.replace(i).is_some() {
                        return None;
                    }
                }
            }
        }
        let mut lines = Vec::with_capacity(by_line.len());
        let mut line_of_event = vec![usize::MAX; topo.events.len()];
        for (arr, dep) in by_line.values() {
            let (arr, dep) = (arr.as_ref()?, dep.as_ref()?);
            line_of_event[*arr] = lines.len();
            line_of_event[*dep] = lines.len();
            lines.push(LineView {
                arr: *arr,
                dep: *dep,
                wait_lower: 0,
                wait_upper: 0,
                accel: topo.events[*dep].accel_time?,
                brake: topo.events[*arr].brake_time?,
            });
        }
        let mut energy: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut waits_seen = vec![false; lines.len()];
        for (idx, a) in topo.acts.iter().enumerate() {
            match a.act.kind {
                ActivityKind::Wait => {
                    let line = line_of_event[a.tail];
                    if line != line_of_event[a.head] || waits_seen[line] {
                        return None;
                    }
                    waits_seen[line] = true;
                    lines[line].wait_lower = a.act.lower;
                    lines[line].wait_upper = a.act.upper;
                }
                ActivityKind::Energy => {
                    let key = (line_of_event[a.tail], line_of_event[a.head]);
                    let keep = match energy.get(&key) {
                        None => true,
                        Some(&old) => topo.acts[idx].act.id < topo.acts[old].act.id,
                    };
                    if keep {
                        energy.insert(key, idx);
                    }
                }
                ActivityKind::Transfer => {}
                ActivityKind::Drive | ActivityKind::Headway => return None,
            }
        }
        if !waits_seen.iter().all(|&w| w) {
            return None;
        }
        Some(PairedStation { lines, energy })
    }
}

fn sweep_matchings(request: &SolveRequest, topo: &Topo, view: &PairedStation) -> SolveResult {
    let n = view.lines.len();
    let mut phi: Vec<Option<usize>> = vec![None; n];
    let mut arr_used = vec![false; n];
    let mut nodes = 0u64;
    let mut best: Option<(i64, Timetable, Vec<usize>)> = None;

    fn recurse(
        dep: usize,
        view: &PairedStation,
        topo: &Topo,
        phi: &mut Vec<Option<usize>>,
        arr_used: &mut Vec<bool>,
        nodes: &mut u64,
        best: &mut Option<(i64, Timetable, Vec<usize>)>,
    ) {
        let n = view.lines.len();
        if dep == n {
            *nodes += 1;
            score_matching(view, topo, phi, best);
            return;
        }
        recurse(dep + 1, view, topo, phi, arr_used, nodes, best);
        for arr in 0..n {
            if !arr_used[arr] && view.energy.contains_key(&(dep, arr)) {
                arr_used[arr] = true;
                phi[dep] = Some(arr);
                recurse(dep + 1, view, topo, phi, arr_used, nodes, best);
                phi[dep] = None;
                arr_used[arr] = false;
            }
        }
    }
    recurse(0, view, topo, &mut phi, &mut arr_used, &mut nodes, &mut best);

    match best {
        Some((value, _, _)) if value < request.overlap_floor => SolveResult {
            status: SolveStatus::Infeasible,
            solution: None,
            bound: None,
            nodes,
        },
        Some((value, timetable, matched)) => {
            let matching: Matching = matched
                .iter()
                .map(|&idx| topo.acts[idx].act.id.clone())
                .collect();
            let solution = evaluate(&request.instance, &matching, &timetable)
                .expect("assembled timetables respect every wait window");
            debug_assert_eq!(solution.total_overlap, value);
            SolveResult {
                status: SolveStatus::Optimal,
                solution: Some(solution),
                bound: Some(ObjectiveValue::Overlap(value)),
                nodes,
            }
        }
        None => unreachable!("the empty matching is always examined"),
    }
}

/// Scores one complete matching: per component the best achievable overlap,
/// found by sweeping tension sums over the period residues — no structural
/// shortcuts, so this stays an independent reference.
fn score_matching(
    view: &PairedStation,
    topo: &Topo,
    phi: &[Option<usize>],
    best: &mut Option<(i64, Timetable, Vec<usize>)>,
) {
    let t = topo.period;
    let n = view.lines.len();
    let mut pred: Vec<Option<usize>> = vec![None; n];
    for (dep, target) in phi.iter().enumerate() {
        if let Some(arr) = target {
            pred[*arr] = Some(dep);
        }
    }

    // Arcs of one component in traversal order: wait of the line, then the
    // energy arc leaving it (if matched).
    #[derive(Clone, Copy)]
    enum Step {
        Wait(usize),
        Hop(usize, usize),
    }
    let mut value = 0i64;
    let mut timetable = Timetable::new();
    let mut matched: Vec<usize> = Vec::new();
    let mut visited = vec![false; n];
    for start in 0..n {
        if visited[start] {
            continue;
        }
        // Rewind to the component's source (or detect the cycle).
        let mut origin = start;
        let is_cycle = loop {
            match pred[origin] {
                None => break false,
                Some(p) => {
                    if p == start {
                        break true;
                    }
                    origin = p;
                }
            }
        };
        let first = if is_cycle { start } else { origin };
        let mut steps = Vec::new();
        let mut cur = first;
        loop {
            visited[cur] = true;
            steps.push(Step::Wait(cur));
            match phi[cur] {
                Some(next) => {
                    steps.push(Step::Hop(cur, next));
                    if next == first {
                        break;
                    }
                    cur = next;
                }
                None => break,
            }
        }

        let gain = |dep: usize, arr: usize, x: i64| -> i64 {
            let (a, b) = (view.lines[dep].accel, view.lines[arr].brake);
            let (t_min, t_max) = (a.min(b), a.max(b));
            x.min(t_min).min(t_max + t_min - x).max(0)
        };

        // Choose tensions: paths take every lower/short value (nothing is
        // coupled); cycles sweep the residue table.
        let mut tensions: Vec<i64> = Vec::with_capacity(steps.len());
        if !is_cycle {
            for step in &steps {
                match *step {
                    Step::Wait(line) => tensions.push(view.lines[line].wait_lower),
                    Step::Hop(dep, arr) => {
                        let x = view.lines[dep].accel.min(view.lines[arr].brake);
                        value += gain(dep, arr, x);
                        tensions.push(x);
                    }
                }
            }
        } else {
            const NEG: i64 = i64::MIN / 2;
            let mut f = vec![NEG; t as usize];
            f[0] = 0;
            // choice[s][r] = (previous residue, tension) that realizes f[r]
            // after step s.
            let mut choice: Vec<Vec<(i64, i64)>> = Vec::with_capacity(steps.len());
            for step in &steps {
                let mut g = vec![NEG; t as usize];
                let mut pick = vec![(0i64, 0i64); t as usize];
                let (lo, hi) = match *step {
                    Step::Wait(line) => (view.lines[line].wait_lower, view.lines[line].wait_upper),
                    Step::Hop(..) => (0, t - 1),
                };
                for r in 0..t as usize {
                    if f[r] == NEG {
                        continue;
                    }
                    for x in lo..=hi {
                        let extra = match *step {
                            Step::Wait(_) => 0,
                            Step::Hop(dep, arr) => gain(dep, arr, x),
                        };
                        let nr = ((r as i64 + x) % t) as usize;
                        if f[r] + extra > g[nr] {
                            g[nr] = f[r] + extra;
                            pick[nr] = (r as i64, x);
                        }
                    }
                }
                choice.push(pick);
                f = g;
            }
            debug_assert!(f[0] >= 0, "every cycle admits a closing tension sum");
            value += f[0];
            let mut r = 0usize;
            let mut rev = Vec::with_capacity(steps.len());
            for pick in choice.iter().rev() {
                let (pr, x) = pick[r];
                rev.push(x);
                r = pr as usize;
            }
            rev.reverse();
            tensions = rev;
        }

        // Realize the chosen tensions as event times, anchoring the smallest
        // event id of the component at 0.
        let mut local: Vec<(usize, i64)> = Vec::new(); // (event index, raw time)
        let mut clock = 0i64;
        for (step, &x) in steps.iter().zip(tensions.iter()) {
            match *step {
                Step::Wait(line) => {
                    local.push((view.lines[line].arr, clock));
                    clock += x;
                    local.push((view.lines[line].dep, clock));
                }
                Step::Hop(dep, arr) => {
                    if gain(dep, arr, x) > 0 {
                        matched.push(view.energy[&(dep, arr)]);
                    }
                    clock += x;
                }
            }
        }
        let shift = local
            .iter()
            .min_by_key(|(ev, _)| &topo.events[*ev].id)
            .map(|&(_, time)| time)
            .unwrap_or(0);
        for (ev, raw) in local {
            timetable.set(topo.events[ev].id.clone(), (raw - shift).rem_euclid(t));
        }
    }

    let better = match best {
        None => true,
        Some((v, tt, _)) => value > *v || (value == *v && timetable < *tt),
    };
    if better {
        *best = Some((value, timetable, matched));
    }
}
