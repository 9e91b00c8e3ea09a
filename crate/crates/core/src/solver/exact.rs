//! Depth-first branch and bound over event times.
//!
//! The search never branches on matchings: for any fully fixed timetable the
//! best matching is a maximum-weight assignment on the realized overlaps, so
//! matchings are recomputed at every leaf. Branching fixes one event time at
//! a time (events ordered by decreasing incident passenger weight), domains
//! shrink by arc-consistency propagation over the constraining activities,
//! and subtrees die when an optimistic bound falls strictly below the
//! incumbent — equal-bound subtrees are explored so that among all optima
//! the lexicographically smallest timetable survives.

use std::time::Instant;

use crate::assignment::max_assignment;
use crate::eval::evaluate;
use crate::model::{validate_instance, Matching, Timetable, Topo};
use crate::solver::support::{EnergyLayout, TravelScale};
use crate::solver::{
    Objective, ObjectiveValue, SolveError, SolveRequest, SolveResult, SolveStatus,
};
use crate::weight::Weight;

pub fn solve_exact(request: &SolveRequest) -> Result<SolveResult, SolveError> {
    let violations = validate_instance(&request.instance);
    if !violations.is_empty() {
        return Err(SolveError::Invalid(violations));
    }
    let topo = Topo::new(&request.instance)?;
    let mut search = Search::new(request, &topo);

    // Root domains: one event per component pinned to 0, the rest free.
    let mut domains: Vec<Domain> = (0..topo.events.len())
        .map(|i| {
            if search.anchored[i] {
                Domain::singleton(search.t, 0)
            } else {
                Domain::full(search.t)
            }
        })
        .collect();
    let root_alive = search.propagate(&mut domains, (0..topo.events.len()).collect());

    let root_overlap_bound = search.overlap_bound(&domains);
    if !root_alive || request.overlap_floor > root_overlap_bound {
        return Ok(SolveResult {
            status: SolveStatus::Infeasible,
            solution: None,
            bound: None,
            nodes: 0,
        });
    }
    let root_bound = match request.objective {
        Objective::MaxOverlap => ObjectiveValue::Overlap(root_overlap_bound),
        Objective::MinTravel => {
            ObjectiveValue::Travel(search.scale.to_weight(search.travel_bound(&domains)))
        }
    };

    search.dfs(&domains, 0);

    let nodes = search.nodes;
    if search.limit_hit {
        let solution = search.witness(request)?;
        return Ok(SolveResult {
            status: SolveStatus::LimitReached,
            solution,
            bound: Some(root_bound),
            nodes,
        });
    }
    match search.incumbent.take() {
        None => Ok(SolveResult {
            status: SolveStatus::Infeasible,
            solution: None,
            bound: None,
            nodes,
        }),
        Some(inc) => {
            let bound = match request.objective {
                Objective::MaxOverlap => ObjectiveValue::Overlap(inc.score),
                Objective::MinTravel => ObjectiveValue::Travel(search.scale.to_weight(inc.score)),
            };
            search.incumbent = Some(inc);
            let solution = search.witness(request)?;
            Ok(SolveResult {
                status: SolveStatus::Optimal,
                solution,
                bound: Some(bound),
                nodes,
            })
        }
    }
}

/// A set of candidate times, one bit per value in `{0, …, T−1}`.
#[derive(Clone)]
struct Domain {
    words: Box<[u64]>,
}

impl Domain {
    fn empty(t: i64) -> Self {
        Domain {
            words: vec![0u64; (t as usize).div_ceil(64)].into_boxed_slice(),
        }
    }

    fn full(t: i64) -> Self {
        let mut d = Domain::empty(t);
        d.mark(0, t - 1);
        d
    }

    fn singleton(t: i64, v: i64) -> Self {
        let mut d = Domain::empty(t);
        d.mark(v, v);
        d
    }

    /// Sets all bits in the inclusive range `[a, b]` (`0 ≤ a ≤ b < t`).
    fn mark(&mut self, a: i64, b: i64) {
        let (a, b) = (a as usize, b as usize);
        let (wa, wb) = (a / 64, b / 64);
        if wa == wb {
            self.words[wa] |= (!0u64 >> (63 - (b - a))) << (a % 64);
        } else {
            self.words[wa] |= !0u64 << (a % 64);
            for w in &mut self.words[wa + 1..wb] {
                *w = !0;
            }
            self.words[wb] |= !0u64 >> (63 - b % 64);
        }
    }

    fn clear(&mut self) {
        self.words.fill(0);
    }

    fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// The single remaining value, if exactly one bit is set.
    fn single(&self) -> Option<i64> {
        let mut found: Option<i64> = None;
        for (wi, &w) in self.words.iter().enumerate() {
            if w == 0 {
                continue;
            }
            if found.is_some() || w & (w - 1) != 0 {
                return None;
            }
            found = Some((wi * 64) as i64 + w.trailing_zeros() as i64);
        }
        found
    }

    /// Intersects in place; reports whether anything was removed.
    fn intersect(&mut self, other: &Domain) -> bool {
        let mut changed = false;
        for (w, &o) in self.words.iter_mut().zip(other.words.iter()) {
            let new = *w & o;
            changed |= new != *w;
            *w = new;
        }
        changed
    }

    fn iter(&self) -> impl Iterator<Item = i64> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &word)| {
            std::iter::successors(
                if word == 0 { None } else { Some(word) },
                |&w| {
                    let next = w & (w - 1);
                    (next != 0).then_some(next)
                },
            )
            .map(move |w| (wi * 64) as i64 + w.trailing_zeros() as i64)
        })
    }
}

/// A constraining activity in index form.
struct Cons {
    tail: usize,
    head: usize,
    lower: i64,
    upper: i64,
}

struct Incumbent {
    score: i64,
    times: Vec<i64>,
    matched: Vec<usize>,
}

struct Search<'a> {
    request: &'a SolveRequest,
    topo: &'a Topo<'a>,
    t: i64,
    anchored: Vec<bool>,
    /// Branching order over the non-anchored events.
    order: Vec<usize>,
    cons: Vec<Cons>,
    incident: Vec<Vec<usize>>,
    layout: EnergyLayout,
    /// `(grid row, grid col, t_min, t_max, tail, head)` per energy arc.
    caps: Vec<(usize, usize, i64, i64, usize, usize)>,
    scale: TravelScale,
    started: Instant,
    nodes: u64,
    limit_hit: bool,
    incumbent: Option<Incumbent>,
}

impl<'a> Search<'a> {
    fn new(request: &'a SolveRequest, topo: &'a Topo<'a>) -> Self {
        let n = topo.events.len();
        let t = topo.period;

        // Connected components over every arc; the smallest event id of each
        // is pinned (both objectives are invariant under component shifts).
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for a in &topo.acts {
            adj[a.tail].push(a.head);
            adj[a.head].push(a.tail);
        }
        let mut anchored = vec![false; n];
        let mut seen = vec![false; n];
        for start in 0..n {
            if seen[start] {
                continue;
            }
            anchored[start] = true;
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }

        // Branch on heavy events first: decreasing sum of incident weights,
        // ties by event id (= index).
        let mut load = vec![Weight::ZERO; n];
        for a in &topo.acts {
            load[a.tail] += a.act.weight.clone();
            load[a.head] += a.act.weight.clone();
        }
        let mut order: Vec<usize> = (0..n).filter(|&i| !anchored[i]).collect();
        order.sort_by(|&x, &y| load[y].cmp(&load[x]).then(x.cmp(&y)));

        let mut cons = Vec::new();
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
        for a in &topo.acts {
            let constraining = topo.is_constraining(a) && a.act.upper - a.act.lower + 1 < t;
            if constraining {
                incident[a.tail].push(cons.len());
                incident[a.head].push(cons.len());
                cons.push(Cons {
                    tail: a.tail,
                    head: a.head,
                    lower: a.act.lower,
                    upper: a.act.upper,
                });
            }
        }

        let layout = EnergyLayout::of(topo);
        let caps = layout
            .arcs
            .iter()
            .map(|&idx| {
                let a = &topo.acts[idx];
                let (t_min, t_max) = topo.energy_times(a).expect("validated energy arc");
                let r = layout.dep_rows.binary_search(&a.tail).unwrap();
                let c = layout.arr_cols.binary_search(&a.head).unwrap();
                (r, c, t_min, t_max, a.tail, a.head)
            })
            .collect();
        let scale = TravelScale::of(topo);

        Search {
            request,
            topo,
            t,
            anchored,
            order,
            cons,
            incident,
            layout,
            caps,
            scale,
            started: Instant::now(),
            nodes: 0,
            limit_hit: false,
            incumbent: None,
        }
    }

    /// Arc-consistency fixpoint starting from the given dirty events.
    /// Returns false on a wiped-out domain.
    fn propagate(&self, domains: &mut [Domain], mut dirty: Vec<usize>) -> bool {
        let t = self.t;
        let mut scratch = Domain::empty(t);
        while let Some(ev) = dirty.pop() {
            for &ci in &self.incident[ev] {
                let c = &self.cons[ci];
                // Head times reachable from the tail domain…
                scratch.clear();
                for v in domains[c.tail].iter() {
                    let a = (v + c.lower).rem_euclid(t);
                    let b = a + (c.upper - c.lower);
                    if b < t {
                        scratch.mark(a, b);
                    } else {
                        scratch.mark(a, t - 1);
                        scratch.mark(0, b - t);
                    }
                }
                if domains[c.head].intersect(&scratch) {
                    if domains[c.head].is_empty() {
                        return false;
                    }
                    dirty.push(c.head);
                }
                // …and tail times compatible with the head domain.
                scratch.clear();
                for v in domains[c.head].iter() {
                    let a = (v - c.upper).rem_euclid(t);
                    let b = a + (c.upper - c.lower);
                    if b < t {
                        scratch.mark(a, b);
                    } else {
                        scratch.mark(a, t - 1);
                        scratch.mark(0, b - t);
                    }
                }
                if domains[c.tail].intersect(&scratch) {
                    if domains[c.tail].is_empty() {
                        return false;
                    }
                    dirty.push(c.tail);
                }
            }
        }
        true
    }

    /// Optimistic total overlap: realized value where both endpoints are
    /// fixed, the full short phase otherwise, pushed through the assignment.
    fn overlap_bound(&self, domains: &[Domain]) -> i64 {
        if self.caps.is_empty() {
            return 0;
        }
        let mut grid = vec![0i64; self.layout.dep_rows.len() * self.layout.arr_cols.len()];
        let cols = self.layout.arr_cols.len();
        for &(r, c, t_min, t_max, tail, head) in &self.caps {
            let cap = match (domains[tail].single(), domains[head].single()) {
                (Some(dep), Some(arr)) => {
                    let x = (arr - dep).rem_euclid(self.t);
                    x.min(t_min).min(t_max + t_min - x).max(0)
                }
                _ => t_min,
            };
            let cell = &mut grid[r * cols + c];
            *cell = (*cell).max(cap);
        }
        max_assignment(self.layout.dep_rows.len(), cols, |r, c| grid[r * cols + c]).value
    }

    /// Valid lower bound on scaled travel: realized tension where fixed,
    /// the lower bound otherwise.
    fn travel_bound(&self, domains: &[Domain]) -> i64 {
        let mut travel = 0i64;
        for (idx, a) in self.topo.acts.iter().enumerate() {
            let w = self.scale.scaled[idx];
            if w == 0 {
                continue;
            }
            let x = match (domains[a.tail].single(), domains[a.head].single()) {
                (Some(tail), Some(head)) => {
                    (head - tail - a.act.lower).rem_euclid(self.t) + a.act.lower
                }
                _ => a.act.lower,
            };
            travel += w * x;
        }
        travel
    }

    fn out_of_budget(&mut self) -> bool {
        if let Some(limit) = self.request.node_limit {
            if self.nodes >= limit {
                return true;
            }
        }
        if let Some(limit) = self.request.time_limit {
            if self.nodes % 256 == 0 && self.started.elapsed() >= limit {
                return true;
            }
        }
        false
    }

    fn dfs(&mut self, domains: &[Domain], depth: usize) {
        if self.limit_hit {
            return;
        }
        self.nodes += 1;
        if self.out_of_budget() {
            self.limit_hit = true;
            return;
        }
        if depth == self.order.len() {
            self.leaf(domains);
            return;
        }
        let ev = self.order[depth];
        let values: Vec<i64> = domains[ev].iter().collect();
        for v in values {
            if self.limit_hit {
                return;
            }
            let mut child: Vec<Domain> = domains.to_vec();
            child[ev] = Domain::singleton(self.t, v);
            if !self.propagate(&mut child, vec![ev]) {
                continue;
            }
            let ob = self.overlap_bound(&child);
            if ob < self.request.overlap_floor {
                continue;
            }
            let worse = match (self.request.objective, &self.incumbent) {
                (Objective::MaxOverlap, Some(inc)) => ob < inc.score,
                (Objective::MinTravel, Some(inc)) => self.travel_bound(&child) > inc.score,
                (_, None) => false,
            };
            if worse {
                continue;
            }
            self.dfs(&child, depth + 1);
        }
    }

    fn leaf(&mut self, domains: &[Domain]) {
        let times: Vec<i64> = domains
            .iter()
            .map(|d| d.single().expect("all events fixed at a leaf"))
            .collect();
        let (overlap, matched) = self.layout.best_matching(self.topo, &times);
        if overlap < self.request.overlap_floor {
            return;
        }
        let score = match self.request.objective {
            Objective::MaxOverlap => overlap,
            Objective::MinTravel => self.scale.travel_of(self.topo, &times),
        };
        let better = match (&self.incumbent, self.request.objective) {
            (None, _) => true,
            (Some(inc), Objective::MaxOverlap) => {
                score > inc.score || (score == inc.score && times < inc.times)
            }
            (Some(inc), Objective::MinTravel) => {
                score < inc.score || (score == inc.score && times < inc.times)
            }
        };
        if better {
            self.incumbent = Some(Incumbent {
                score,
                times,
                matched,
            });
        }
    }

    fn witness(&self, request: &SolveRequest) -> Result<Option<crate::model::Solution>, SolveError> {
        let inc = match &self.incumbent {
            Some(inc) => inc,
            None => return Ok(None),
        };
        let timetable: Timetable = self
            .topo
            .events
            .iter()
            .enumerate()
            .map(|(i, ev)| (ev.id.clone(), inc.times[i]))
            .collect();
        let matching: Matching = inc
            .matched
            .iter()
            .map(|&idx| self.topo.acts[idx].act.id.clone())
            .collect();
        let solution = evaluate(&request.instance, &matching, &timetable)?;
        Ok(Some(solution))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ids::ActivityId;
    use crate::solver::brute_force;
    use crate::testkit::station;

    fn tiny() -> crate::model::Instance {
        station(10, &[("L1", 3, 4, 1, 3), ("L2", 2, 2, 0, 2)])
    }

    #[test]
    fn agrees_with_the_oracle_on_a_small_station() {
        let inst = tiny();
        for objective in [Objective::MaxOverlap, Objective::MinTravel] {
            let request = SolveRequest::new(inst.clone(), objective);
            let fast = solve_exact(&request).unwrap();
            let slow = brute_force(&request).unwrap();
            assert_eq!(fast.status, SolveStatus::Optimal);
            assert_eq!(slow.status, SolveStatus::Optimal);
            let (a, b) = (fast.solution.unwrap(), slow.solution.unwrap());
            assert_eq!(a.total_overlap, b.total_overlap, "{objective}");
            assert_eq!(a.travel_time, b.travel_time, "{objective}");
            assert_eq!(a.timetable, b.timetable, "{objective}");
            assert_eq!(a.matching, b.matching, "{objective}");
        }
    }

    #[test]
    fn overlap_floor_carves_the_travel_frontier() {
        let mut inst = tiny();
        // Give the waits passenger weight so travel reacts to the floor.
        inst.activities[0].weight = "40".parse().unwrap();
        inst.activities[1].weight = "20".parse().unwrap();
        let max_overlap = solve_exact(&SolveRequest::new(inst.clone(), Objective::MaxOverlap))
            .unwrap()
            .solution
            .unwrap()
            .total_overlap;
        let mut last = None;
        for floor in 0..=max_overlap {
            let req = SolveRequest::new(inst.clone(), Objective::MinTravel)
                .with_overlap_floor(floor);
            let got = solve_exact(&req).unwrap();
            assert_eq!(got.status, SolveStatus::Optimal, "floor {floor}");
            let sol = got.solution.unwrap();
            assert!(sol.total_overlap >= floor);
            let brute = brute_force(&req).unwrap().solution.unwrap();
            assert_eq!(sol.travel_time, brute.travel_time, "floor {floor}");
            if let Some(prev) = last {
                assert!(sol.travel_time >= prev, "travel cannot improve as the floor rises");
            }
            last = Some(sol.travel_time);
        }
        // One past the optimum must be infeasible.
        let req = SolveRequest::new(inst, Objective::MinTravel)
            .with_overlap_floor(max_overlap + 1);
        assert_eq!(solve_exact(&req).unwrap().status, SolveStatus::Infeasible);
    }

    #[test]
    fn rigid_wait_ring_is_infeasible() {
        // Two waits pinned to 3 and a drive pinned to 1 in a period of 10
        // cannot close a directed cycle: 3 + 1 + 3 + 1 = 8 ≢ 0 (mod 10).
        let mut inst = station(10, &[("L1", 3, 3, 3, 3), ("L2", 3, 3, 3, 3)]);
        inst.activities.push(crate::model::Activity {
            id: ActivityId::from("drive_L1_L2"),
            kind: crate::model::ActivityKind::Drive,
            tail: crate::ids::EventId::from("L1_dep"),
            head: crate::ids::EventId::from("L2_arr"),
            lower: 1,
            upper: 1,
            weight: crate::weight::Weight::ZERO,
        });
        inst.activities.push(crate::model::Activity {
            id: ActivityId::from("drive_L2_L1"),
            kind: crate::model::ActivityKind::Drive,
            tail: crate::ids::EventId::from("L2_dep"),
            head: crate::ids::EventId::from("L1_arr"),
            lower: 1,
            upper: 1,
            weight: crate::weight::Weight::ZERO,
        });
        let got = solve_exact(&SolveRequest::new(inst, Objective::MaxOverlap)).unwrap();
        assert_eq!(got.status, SolveStatus::Infeasible);
        assert!(got.solution.is_none());
    }

    #[test]
    fn node_limit_stops_the_search() {
        let inst = station(12, &[("L1", 3, 4, 0, 11), ("L2", 2, 2, 0, 11), ("L3", 4, 5, 0, 11)]);
        let req = SolveRequest::new(inst, Objective::MaxOverlap).with_node_limit(5);
        let got = solve_exact(&req).unwrap();
        assert_eq!(got.status, SolveStatus::LimitReached);
        assert!(got.nodes <= 6);
        assert!(got.bound.is_some(), "a limit-hit result still carries the root bound");
    }

    #[test]
    fn identical_requests_give_identical_results() {
        let inst = tiny();
        let req = SolveRequest::new(inst, Objective::MaxOverlap);
        let a = solve_exact(&req).unwrap();
        let b = solve_exact(&req).unwrap();
        assert_eq!(a.nodes, b.nodes);
        assert_eq!(a.solution.unwrap().timetable, b.solution.unwrap().timetable);
    }

    #[test]
    fn matches_the_oracle_on_seeded_stations_witness_for_witness() {
        // Both solvers promise the lexicographically smallest optimal
        // timetable, so whole solutions must coincide — not just values.
        let mut state = 0x853c49e6748fea9bu64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let names = ["A", "B", "C"];
        for round in 0..30 {
            let t = (next() % 7 + 4) as i64;
            let lines = (next() % 2 + 2) as usize;
            let phase_cap = (t / 2 - 1).max(1);
            let specs: Vec<(&str, i64, i64, i64, i64)> = (0..lines)
                .map(|i| {
                    let ac = (next() % phase_cap as u64 + 1) as i64;
                    let br = (next() % phase_cap as u64 + 1) as i64;
                    let wl = (next() % t as u64) as i64;
                    let wu = wl + (next() % t as u64) as i64;
                    (names[i], ac, br, wl, wu)
                })
                .collect();
            let mut inst = station(t, &specs);
            for (i, a) in inst.activities.iter_mut().enumerate() {
                if a.kind == crate::model::ActivityKind::Wait {
                    a.weight = format!("{}", (i % 3) * 10 + 5).parse().unwrap();
                }
            }
            let floor = (next() % 3) as i64;
            for objective in [Objective::MaxOverlap, Objective::MinTravel] {
                let req = SolveRequest::new(inst.clone(), objective).with_overlap_floor(floor);
                let fast = solve_exact(&req).unwrap();
                let slow = brute_force(&req).unwrap();
                assert_eq!(fast.status, slow.status, "round {round}, {objective}");
                match (fast.solution, slow.solution) {
                    (None, None) => {}
                    (Some(a), Some(b)) => {
                        assert_eq!(a.total_overlap, b.total_overlap, "round {round}, {objective}");
                        assert_eq!(a.travel_time, b.travel_time, "round {round}, {objective}");
                        assert_eq!(a.timetable, b.timetable, "round {round}, {objective}");
                        assert_eq!(a.matching, b.matching, "round {round}, {objective}");
                    }
                    (fast, slow) => panic!(
                        "round {round}, {objective}: one solver returned a witness, \
                         the other did not ({} vs {})",
                        fast.is_some(),
                        slow.is_some()
                    ),
                }
            }
        }
    }

    #[test]
    fn invalid_instances_are_refused() {
        let mut inst = tiny();
        inst.activities[0].upper = 42; // wait window wider than the period
        let err = solve_exact(&SolveRequest::new(inst, Objective::MaxOverlap)).unwrap_err();
        assert!(matches!(err, SolveError::Invalid(v) if !v.is_empty()));
    }
}
