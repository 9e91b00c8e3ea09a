//! Single-station networks: one arrival and one departure per line, a wait
//! arc between them, optional passenger transfers, and energy arcs from
//! departures to arrivals.
//!
//! At one station the overlap objective has far more structure than in the
//! general network. Selecting energy arcs is a bipartite pairing of
//! departures with arrivals, the paired structure decomposes into chains and
//! tours over the lines, and each closed tour pays the whole distance between
//! its tension span and the period grid on a single arc (see
//! [`crate::cycles`]). This module exploits that structure:
//!
//! * [`build_one_station`] turns a compact per-line description into a full
//!   [`Instance`] with canonical ids.
//! * [`greedy_matching`], [`max_weight_matching`], and [`extend_to_perfect`]
//!   select energy arcs by pair weight alone — the weight of a pair is the
//!   shorter of its two phases, the overlap it yields on its plateau.
//! * [`solve_free_waiting`], [`solve_uniform_times`], [`solve_large_period`],
//!   [`solve_equal_times_dp`], and [`solve_single_cycle`] each solve a
//!   structural special case exactly, in polynomial time.
//! * [`max_weight_hamiltonian_cycle`], [`merge_heuristic`], and
//!   [`exact_overlap_optimum`] handle the general case: exact tours and the
//!   exact optimum for small stations, a guaranteed-gap heuristic beyond.
//! * [`dispatch`] picks the strongest applicable method automatically.
//!
//! Everything here optimizes total overlap; travel time is reported on the
//! returned [`Solution`] but not optimized. Schedules are assembled per
//! component with [`crate::cycles::build_cycle_timetable`], so each component
//! is anchored at time 0 and the result is deterministic.

use std::collections::HashMap;
use std::fmt;

use crate::assignment::max_assignment;
use crate::cycles::{build_cycle_timetable, decompose};
use crate::eval::evaluate;
use crate::ids::{ActivityId, EventId, LineId, StationId};
use crate::model::{
    Activity, ActivityKind, Event, EventKind, Instance, Matching, ModelError, Solution, Timetable,
};
use crate::solver::{solve_exact, Objective, SolveError, SolveRequest, SolveStatus};
use crate::weight::Weight;

mod dp;
mod hamilton;

pub use dp::{contiguous_cycle_overlap, solve_equal_times_dp};
pub use hamilton::{
    exact_overlap_optimum, max_weight_hamiltonian_cycle, merge_heuristic, OverlapOptimum,
};

/// How many lines the exact tour search accepts (subset dynamic program).
pub const TOUR_LINE_LIMIT: usize = 20;

/// How many lines [`exact_overlap_optimum`] accepts (partition enumeration).
pub const PARTITION_LINE_LIMIT: usize = 8;

/// Exact-solver guard used by [`dispatch`]: at most this many events …
const DISPATCH_EXACT_EVENTS: usize = 12;
/// … and at most this period fall back to the general exact search.
const DISPATCH_EXACT_PERIOD: i64 = 60;

/// Compact per-line description of a single station.
///
/// Line `i` (0-based) arrives braking for `brake_times[i]`, waits within
/// `wait_bounds[i]`, and departs accelerating for `accel_times[i]`. The
/// four per-line vectors must have equal length. `wait_weights` carries the
/// passenger weight of each wait arc (zero when the station is studied for
/// overlap alone).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneStationSpec {
    pub accel_times: Vec<i64>,
    pub brake_times: Vec<i64>,
    /// Wait arc bounds `(lower, upper)` per line.
    pub wait_bounds: Vec<(i64, i64)>,
    /// Passenger weight of each wait arc.
    pub wait_weights: Vec<Weight>,
    /// Passenger transfers between lines; none is the common case.
    pub transfers: Vec<TransferSpec>,
    /// Which departure→arrival energy arcs exist.
    pub energy: EnergyTopology,
}

/// One passenger transfer: arrival of `from_line` to departure of `to_line`.
///
/// The built arc is free: its upper bound is `lower + period - 1`, so it
/// constrains nothing and only contributes weighted travel time.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferSpec {
    pub from_line: usize,
    pub to_line: usize,
    /// Minimum transfer time.
    pub lower: i64,
    pub weight: Weight,
}

/// Which departure→arrival pairs get an energy arc.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EnergyTopology {
    /// Every departure can feed every arrival (the full grid).
    All,
    /// Only the listed `(departing line, arriving line)` pairs.
    Explicit(Vec<(usize, usize)>),
}

impl OneStationSpec {
    /// A transfer-free spec with zero wait weights and the full energy grid.
    pub fn new(accel_times: &[i64], brake_times: &[i64], wait_bounds: &[(i64, i64)]) -> Self {
        OneStationSpec {
            accel_times: accel_times.to_vec(),
            brake_times: brake_times.to_vec(),
            wait_bounds: wait_bounds.to_vec(),
            wait_weights: vec![Weight::ZERO; accel_times.len()],
            transfers: Vec::new(),
            energy: EnergyTopology::All,
        }
    }

    /// Number of lines described.
    pub fn lines(&self) -> usize {
        self.accel_times.len()
    }

    /// Verifies the per-line vectors line up and all indices and times are
    /// usable; returns the number of lines.
    fn check(&self) -> Result<usize, OneStationError> {
        let n = self.accel_times.len();
        if n == 0 {
            return Err(OneStationError::NoLines);
        }
        for (field, found) in [
            ("brake_times", self.brake_times.len()),
            ("wait_bounds", self.wait_bounds.len()),
            ("wait_weights", self.wait_weights.len()),
        ] {
            if found != n {
                return Err(OneStationError::LengthMismatch {
                    field,
                    expected: n,
                    found,
                });
            }
        }
        for i in 0..n {
            for value in [self.accel_times[i], self.brake_times[i]] {
                if value < 1 {
                    return Err(OneStationError::NonPositiveTime { line: i, value });
                }
            }
        }
        let mut seen_transfers = HashMap::new();
        for t in &self.transfers {
            for line in [t.from_line, t.to_line] {
                if line >= n {
                    return Err(OneStationError::LineOutOfRange {
                        context: "transfers",
                        line,
                        lines: n,
                    });
                }
            }
            if seen_transfers.insert((t.from_line, t.to_line), ()).is_some() {
                return Err(OneStationError::DuplicatePair {
                    context: "transfers",
                    from: t.from_line,
                    to: t.to_line,
                });
            }
        }
        if let EnergyTopology::Explicit(pairs) = &self.energy {
            let mut seen = HashMap::new();
            for &(from, to) in pairs {
                for line in [from, to] {
                    if line >= n {
                        return Err(OneStationError::LineOutOfRange {
                            context: "energy",
                            line,
                            lines: n,
                        });
                    }
                }
                if seen.insert((from, to), ()).is_some() {
                    return Err(OneStationError::DuplicatePair {
                        context: "energy",
                        from,
                        to,
                    });
                }
            }
        }
        Ok(n)
    }

    /// Errors unless every departure–arrival energy arc is present.
    fn require_all_pairs(&self, op: &'static str) -> Result<(), OneStationError> {
        match self.energy {
            EnergyTopology::All => Ok(()),
            EnergyTopology::Explicit(_) => Err(OneStationError::NeedsCompleteGrid { op }),
        }
    }
}

/// Errors of the single-station toolbox.
#[derive(Debug)]
pub enum OneStationError {
    /// The description has no lines at all.
    NoLines,
    /// Parallel per-line vectors disagree in length.
    LengthMismatch {
        field: &'static str,
        expected: usize,
        found: usize,
    },
    /// An acceleration or braking time is zero or negative.
    NonPositiveTime { line: usize, value: i64 },
    /// A line index in a transfer or energy pair is out of range.
    LineOutOfRange {
        context: &'static str,
        line: usize,
        lines: usize,
    },
    /// The same ordered pair is listed twice.
    DuplicatePair {
        context: &'static str,
        from: usize,
        to: usize,
    },
    /// A per-line piece of the station is missing or doubled.
    LineShape { line: LineId, problem: &'static str },
    /// An activity that cannot occur inside one station.
    ForeignActivity {
        activity: ActivityId,
        problem: &'static str,
    },
    /// The operation needs an energy arc from every departure to every
    /// arrival, but the instance restricts the grid.
    NeedsCompleteGrid { op: &'static str },
    /// The operation's entry condition does not hold on this input.
    PreconditionNotMet { op: &'static str, detail: String },
    /// Guard rail of an exponential algorithm.
    TooManyLines {
        op: &'static str,
        lines: usize,
        limit: usize,
    },
    /// A matching id that is not an energy arc of the station grid.
    UnknownArc(ActivityId),
    /// Structural defect reported by the model layer.
    Model(ModelError),
    /// The general exact solver could not answer.
    Solve(SolveError),
}

impl fmt::Display for OneStationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OneStationError::NoLines => f.write_str("a station needs at least one line"),
            OneStationError::LengthMismatch {
                field,
                expected,
                found,
            } => write!(
                f,
                "`{field}` has {found} entries, expected {expected} (one per line)"
            ),
            OneStationError::NonPositiveTime { line, value } => write!(
                f,
                "line {} needs positive acceleration and braking times, got {value}",
                line + 1
            ),
            OneStationError::LineOutOfRange {
                context,
                line,
                lines,
            } => write!(
                f,
                "{context} reference line index {line}, but there are only {lines} lines"
            ),
            OneStationError::DuplicatePair { context, from, to } => {
                write!(f, "{context} list the pair ({from}, {to}) twice")
            }
            OneStationError::LineShape { line, problem } => {
                write!(f, "line `{line}` {problem}")
            }
            OneStationError::ForeignActivity { activity, problem } => {
                write!(f, "activity `{activity}` {problem}")
            }
            OneStationError::NeedsCompleteGrid { op } => write!(
                f,
                "{op} needs an energy arc from every departure to every arrival"
            ),
            OneStationError::PreconditionNotMet { op, detail } => write!(f, "{op}: {detail}"),
            OneStationError::TooManyLines { op, lines, limit } => {
                write!(f, "{op} handles at most {limit} lines, got {lines}")
            }
            OneStationError::UnknownArc(id) => {
                write!(f, "`{id}` is not an energy arc of this station")
            }
            OneStationError::Model(e) => e.fmt(f),
            OneStationError::Solve(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for OneStationError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            OneStationError::Model(e) => Some(e),
            OneStationError::Solve(e) => Some(e),
            _ => None,
        }
    }
}

impl From<ModelError> for OneStationError {
    fn from(e: ModelError) -> Self {
        OneStationError::Model(e)
    }
}

impl From<SolveError> for OneStationError {
    fn from(e: SolveError) -> Self {
        OneStationError::Solve(e)
    }
}

/// Station id used by [`build_one_station`].
const STATION: &str = "s";

fn line_label(i: usize) -> String {
    format!("L{}", i + 1)
}

fn arr_id(i: usize) -> EventId {
    EventId::new(format!("L{}_arr", i + 1))
}

fn dep_id(i: usize) -> EventId {
    EventId::new(format!("L{}_dep", i + 1))
}

fn wait_arc_id(i: usize) -> ActivityId {
    ActivityId::new(format!("wait_L{}", i + 1))
}

pub(crate) fn energy_arc_id(from: usize, to: usize) -> ActivityId {
    ActivityId::new(format!("energy_L{}_L{}", from + 1, to + 1))
}

fn transfer_arc_id(from: usize, to: usize) -> ActivityId {
    ActivityId::new(format!("change_L{}_L{}", from + 1, to + 1))
}

/// Builds the full instance for a station description.
///
/// Line `i` becomes events `L{i+1}_arr` / `L{i+1}_dep` joined by
/// `wait_L{i+1}`; transfers become free arcs `change_L{a}_L{b}`; the energy
/// pair from line `a` to line `b` becomes `energy_L{a}_L{b}` with bounds
/// `[0, period - 1]` and weight zero.
///
/// Only the shape is checked here (vector lengths, index ranges, positive
/// phases, no duplicate pairs). Semantic rules — bounds fitting the period,
/// phase pairs leaving room inside one period — stay with
/// [`crate::validate_instance`], the single gate all solvers trust.
pub fn build_one_station(
    spec: &OneStationSpec,
    period: i64,
) -> Result<Instance, OneStationError> {
    let n = spec.check()?;
    if period < 1 {
        return Err(OneStationError::PreconditionNotMet {
            op: "build_one_station",
            detail: format!("the period must be at least 1, got {period}"),
        });
    }
    let mut events = Vec::with_capacity(2 * n);
    let mut activities = Vec::new();
    for i in 0..n {
        events.push(Event {
            id: arr_id(i),
            kind: EventKind::Arrival,
            line: LineId::new(line_label(i)),
            station: StationId::new(STATION),
            brake_time: Some(spec.brake_times[i]),
            accel_time: None,
        });
        events.push(Event {
            id: dep_id(i),
            kind: EventKind::Departure,
            line: LineId::new(line_label(i)),
            station: StationId::new(STATION),
            brake_time: None,
            accel_time: Some(spec.accel_times[i]),
        });
        activities.push(Activity {
            id: wait_arc_id(i),
            kind: ActivityKind::Wait,
            tail: arr_id(i),
            head: dep_id(i),
            lower: spec.wait_bounds[i].0,
            upper: spec.wait_bounds[i].1,
            weight: spec.wait_weights[i],
        });
    }
    for t in &spec.transfers {
        activities.push(Activity {
            id: transfer_arc_id(t.from_line, t.to_line),
            kind: ActivityKind::Transfer,
            tail: arr_id(t.from_line),
            head: dep_id(t.to_line),
            lower: t.lower,
            upper: t.lower + period - 1,
            weight: t.weight,
        });
    }
    let mut push_energy = |from: usize, to: usize| {
        activities.push(Activity {
            id: energy_arc_id(from, to),
            kind: ActivityKind::Energy,
            tail: dep_id(from),
            head: arr_id(to),
            lower: 0,
            upper: period - 1,
            weight: Weight::ZERO,
        });
    };
    match &spec.energy {
        EnergyTopology::All => {
            for from in 0..n {
                for to in 0..n {
                    push_energy(from, to);
                }
            }
        }
        EnergyTopology::Explicit(pairs) => {
            for &(from, to) in pairs {
                push_energy(from, to);
            }
        }
    }
    Ok(Instance {
        period,
        events,
        activities,
    })
}

/// One line as seen from the station: its phases and wait arc bounds.
#[derive(Debug, Clone)]
pub(crate) struct LineSlot {
    pub(crate) line: LineId,
    pub(crate) accel: i64,
    pub(crate) brake: i64,
    pub(crate) wait_lower: i64,
    pub(crate) wait_upper: i64,
}

/// Structural digest of a single-station instance.
///
/// Extraction is purely structural: it accepts any instance whose events all
/// sit on one station, whose every line has exactly one arrival, departure,
/// and wait arc, and whose only other activities are transfers and energy
/// arcs. Lines are indexed in id order. Parallel energy arcs between the
/// same pair keep the smallest id.
#[derive(Debug, Clone)]
pub(crate) struct StationView {
    pub(crate) period: i64,
    pub(crate) lines: Vec<LineSlot>,
    /// `(departing line, arriving line)` → energy arc id.
    pub(crate) energy: std::collections::BTreeMap<(usize, usize), ActivityId>,
}

impl StationView {
    pub(crate) fn from_instance(instance: &Instance) -> Result<Self, OneStationError> {
        if instance.events.is_empty() {
            return Err(OneStationError::NoLines);
        }
        if instance.period < 1 {
            return Err(OneStationError::PreconditionNotMet {
                op: "station analysis",
                detail: format!("the period must be at least 1, got {}", instance.period),
            });
        }
        let station = &instance.events[0].station;
        for event in &instance.events {
            if &event.station != station {
                return Err(OneStationError::Model(ModelError::MixedStations(
                    station.clone(),
                    event.station.clone(),
                )));
            }
        }

        // Collect each line's arrival and departure, in line-id order.
        let mut per_line: std::collections::BTreeMap<&LineId, (Option<&Event>, Option<&Event>)> =
            std::collections::BTreeMap::new();
        for event in &instance.events {
            let slot = per_line.entry(&event.line).or_default();
            match event.kind {
                EventKind::Arrival => {
                    if slot.0.replace(event).is_some() {
                        return Err(OneStationError::LineShape {
                            line: event.line.clone(),
                            problem: "has more than one arrival at this station",
                        });
                    }
                }
                EventKind::Departure => {
                    if slot.1.replace(event).is_some() {
                        return Err(OneStationError::LineShape {
                            line: event.line.clone(),
                            problem: "has more than one departure at this station",
                        });
                    }
                }
            }
        }
        let mut lines = Vec::with_capacity(per_line.len());
        let mut arr_index: HashMap<&EventId, usize> = HashMap::new();
        let mut dep_index: HashMap<&EventId, usize> = HashMap::new();
        for (line, (arr, dep)) in &per_line {
            let arr = arr.ok_or_else(|| OneStationError::LineShape {
                line: (*line).clone(),
                problem: "has no arrival at this station",
            })?;
            let dep = dep.ok_or_else(|| OneStationError::LineShape {
                line: (*line).clone(),
                problem: "has no departure at this station",
            })?;
            let brake = match arr.brake_time {
                Some(t) if t >= 1 => t,
                _ => {
                    return Err(OneStationError::LineShape {
                        line: (*line).clone(),
                        problem: "has no positive braking time on its arrival",
                    })
                }
            };
            let accel = match dep.accel_time {
                Some(t) if t >= 1 => t,
                _ => {
                    return Err(OneStationError::LineShape {
                        line: (*line).clone(),
                        problem: "has no positive acceleration time on its departure",
                    })
                }
            };
            let index = lines.len();
            arr_index.insert(&arr.id, index);
            dep_index.insert(&dep.id, index);
            lines.push(LineSlot {
                line: (*line).clone(),
                accel,
                brake,
                wait_lower: 0,
                wait_upper: 0,
            });
        }

        let mut energy: std::collections::BTreeMap<(usize, usize), ActivityId> =
            std::collections::BTreeMap::new();
        let mut wait_seen = vec![false; lines.len()];
        for act in &instance.activities {
            match act.kind {
                ActivityKind::Wait => {
                    let index = match (arr_index.get(&act.tail), dep_index.get(&act.head)) {
                        (Some(&a), Some(&d)) if a == d => a,
                        _ => {
                            return Err(OneStationError::ForeignActivity {
                                activity: act.id.clone(),
                                problem: "does not join an arrival to its own departure",
                            })
                        }
                    };
                    if wait_seen[index] {
                        return Err(OneStationError::LineShape {
                            line: lines[index].line.clone(),
                            problem: "has more than one wait arc",
                        });
                    }
                    wait_seen[index] = true;
                    lines[index].wait_lower = act.lower;
                    lines[index].wait_upper = act.upper;
                }
                ActivityKind::Energy => {
                    let (from, to) = match (dep_index.get(&act.tail), arr_index.get(&act.head)) {
                        (Some(&f), Some(&t)) => (f, t),
                        _ => {
                            return Err(OneStationError::ForeignActivity {
                                activity: act.id.clone(),
                                problem: "must run from a departure to an arrival",
                            })
                        }
                    };
                    let slot = energy.entry((from, to)).or_insert_with(|| act.id.clone());
                    if act.id < *slot {
                        *slot = act.id.clone();
                    }
                }
                ActivityKind::Transfer => {}
                ActivityKind::Drive | ActivityKind::Headway => {
                    return Err(OneStationError::ForeignActivity {
                        activity: act.id.clone(),
                        problem: "is a drive or headway arc, which never stays inside one station",
                    })
                }
            }
        }
        for (index, seen) in wait_seen.iter().enumerate() {
            if !seen {
                return Err(OneStationError::LineShape {
                    line: lines[index].line.clone(),
                    problem: "has no wait arc",
                });
            }
        }
        Ok(StationView {
            period: instance.period,
            lines,
            energy,
        })
    }

    pub(crate) fn n(&self) -> usize {
        self.lines.len()
    }

    /// Whether every departure→arrival pair has an energy arc.
    pub(crate) fn complete(&self) -> bool {
        self.energy.len() == self.n() * self.n()
    }

    pub(crate) fn require_complete(&self, op: &'static str) -> Result<(), OneStationError> {
        if self.complete() {
            Ok(())
        } else {
            Err(OneStationError::NeedsCompleteGrid { op })
        }
    }

    /// Shorter phase of the pair — the overlap the arc yields on its plateau.
    pub(crate) fn short_phase(&self, from: usize, to: usize) -> i64 {
        self.lines[from].accel.min(self.lines[to].brake)
    }

    /// Turns index pairs into a [`Matching`] over the instance's arc ids.
    pub(crate) fn matching_of(
        &self,
        op: &'static str,
        pairs: &[(usize, usize)],
    ) -> Result<Matching, OneStationError> {
        let mut matching = Matching::empty();
        for &(from, to) in pairs {
            let id = self.energy.get(&(from, to)).ok_or_else(|| {
                OneStationError::PreconditionNotMet {
                    op,
                    detail: format!(
                        "no energy arc from line {} to line {}",
                        from + 1,
                        to + 1
                    ),
                }
            })?;
            matching.insert(id.clone());
        }
        Ok(matching)
    }

    /// Report for a set of index pairs: per-pair plateau weights and total.
    pub(crate) fn report_of(
        &self,
        op: &'static str,
        mut pairs: Vec<(usize, usize)>,
    ) -> Result<WeightedMatchingReport, OneStationError> {
        pairs.sort_unstable();
        let matching = self.matching_of(op, &pairs)?;
        let pairs: Vec<MatchedPair> = pairs
            .into_iter()
            .map(|(from, to)| MatchedPair {
                dep_line: from,
                arr_line: to,
                weight: self.short_phase(from, to),
            })
            .collect();
        let weight = pairs.iter().map(|p| p.weight).sum();
        Ok(WeightedMatchingReport {
            matching,
            pairs,
            weight,
        })
    }
}

/// One selected energy pair, by line index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatchedPair {
    /// Line whose departure feeds the pair.
    pub dep_line: usize,
    /// Line whose arrival receives it.
    pub arr_line: usize,
    /// Plateau overlap of the pair: the shorter of its two phases.
    pub weight: i64,
}

/// A selected set of energy arcs with its total plateau weight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedMatchingReport {
    pub matching: Matching,
    /// The same selection by line index, sorted by departing line.
    pub pairs: Vec<MatchedPair>,
    /// Sum of the pair weights — the overlap if every pair sat on its
    /// plateau simultaneously.
    pub weight: i64,
}

impl WeightedMatchingReport {
    /// Weight after dropping the weakest selected pair — what a tour through
    /// every line realizes once it is opened into a chain.
    pub fn path_weight(&self) -> i64 {
        let weakest = self.pairs.iter().map(|p| p.weight).min().unwrap_or(0);
        self.weight - weakest
    }
}

/// Pairs the k-th shortest acceleration with the k-th shortest braking
/// phase, for every k. Requires the full energy grid.
///
/// This maximizes the total of pairwise minima over all perfect pairings:
/// in any pairing that crosses two sorted ranks, uncrossing them never
/// lowers the two minima involved. The result is therefore also a
/// maximum-weight perfect matching, with ties broken by line index.
pub fn greedy_matching(spec: &OneStationSpec) -> Result<WeightedMatchingReport, OneStationError> {
    let n = spec.check()?;
    spec.require_all_pairs("greedy_matching")?;
    let mut deps: Vec<usize> = (0..n).collect();
    deps.sort_by_key(|&i| (spec.accel_times[i], i));
    let mut arrs: Vec<usize> = (0..n).collect();
    arrs.sort_by_key(|&i| (spec.brake_times[i], i));
    let mut pairs: Vec<MatchedPair> = deps
        .iter()
        .zip(&arrs)
        .map(|(&dep, &arr)| MatchedPair {
            dep_line: dep,
            arr_line: arr,
            weight: spec.accel_times[dep].min(spec.brake_times[arr]),
        })
        .collect();
    pairs.sort_by_key(|p| p.dep_line);
    let weight = pairs.iter().map(|p| p.weight).sum();
    let matching = pairs
        .iter()
        .map(|p| energy_arc_id(p.dep_line, p.arr_line))
        .collect();
    Ok(WeightedMatchingReport {
        matching,
        pairs,
        weight,
    })
}

/// Maximum-weight matching over the energy arcs the instance actually has.
///
/// On the full grid this coincides with [`greedy_matching`] in weight; on a
/// restricted grid it solves the bipartite assignment exactly (leaving lines
/// unmatched whenever that is at least as good, which it always is here
/// since pair weights are positive).
pub fn max_weight_matching(instance: &Instance) -> Result<WeightedMatchingReport, OneStationError> {
    let view = StationView::from_instance(instance)?;
    let n = view.n();
    let assignment = max_assignment(n, n, |from, to| {
        if view.energy.contains_key(&(from, to)) {
            view.short_phase(from, to)
        } else {
            0
        }
    });
    view.report_of("max_weight_matching", assignment.pairs)
}

/// Completes a partial selection to a perfect one on the full grid, pairing
/// the unmatched departures and arrivals in ascending line order.
///
/// Adding arcs never lowers the best achievable overlap: extra pairs can
/// always be scheduled at the edge of their feasible range, where they
/// contribute nothing but disturb nothing either.
pub fn extend_to_perfect(
    matching: &Matching,
    spec: &OneStationSpec,
) -> Result<Matching, OneStationError> {
    let n = spec.check()?;
    spec.require_all_pairs("extend_to_perfect")?;
    let mut by_id: HashMap<ActivityId, (usize, usize)> = HashMap::new();
    for from in 0..n {
        for to in 0..n {
            by_id.insert(energy_arc_id(from, to), (from, to));
        }
    }
    let mut dep_used: Vec<Option<&ActivityId>> = vec![None; n];
    let mut arr_used: Vec<Option<&ActivityId>> = vec![None; n];
    for id in matching.iter() {
        let &(from, to) = by_id
            .get(id)
            .ok_or_else(|| OneStationError::UnknownArc(id.clone()))?;
        if let Some(first) = dep_used[from] {
            return Err(OneStationError::Model(ModelError::MatchingConflict {
                event: dep_id(from),
                first: first.clone(),
                second: id.clone(),
            }));
        }
        if let Some(first) = arr_used[to] {
            return Err(OneStationError::Model(ModelError::MatchingConflict {
                event: arr_id(to),
                first: first.clone(),
                second: id.clone(),
            }));
        }
        dep_used[from] = Some(id);
        arr_used[to] = Some(id);
    }
    let free_deps = (0..n).filter(|&i| dep_used[i].is_none());
    let free_arrs: Vec<usize> = (0..n).filter(|&i| arr_used[i].is_none()).collect();
    let mut extended = matching.clone();
    for (from, to) in free_deps.zip(free_arrs) {
        extended.insert(energy_arc_id(from, to));
    }
    Ok(extended)
}

/// Schedules a matching component by component — each chain at full overlap,
/// each tour with the period-grid residue pushed onto its weakest arc — and
/// evaluates the result.
pub(crate) fn realize(
    instance: &Instance,
    matching: Matching,
) -> Result<Solution, OneStationError> {
    let components = decompose(instance, &matching)?;
    let mut timetable = Timetable::new();
    for component in &components {
        timetable.absorb(build_cycle_timetable(instance, component)?);
    }
    Ok(evaluate(instance, &matching, &timetable)?)
}

/// Exact solution when every wait arc spans a full period.
///
/// With free waits every component's tension span covers a whole period, so
/// the grid residue is zero and every selected pair sits on its plateau.
/// The maximum-weight matching is an upper bound on any schedule's overlap
/// and is reached, so it is the optimum.
pub fn solve_free_waiting(instance: &Instance) -> Result<Solution, OneStationError> {
    let view = StationView::from_instance(instance)?;
    for slot in &view.lines {
        if slot.wait_upper - slot.wait_lower < view.period - 1 {
            return Err(OneStationError::PreconditionNotMet {
                op: "solve_free_waiting",
                detail: format!(
                    "the wait arc of line `{}` spans [{}, {}], not a full period",
                    slot.line, slot.wait_lower, slot.wait_upper
                ),
            });
        }
    }
    let report = max_weight_matching(instance)?;
    let solution = realize(instance, report.matching.clone())?;
    debug_assert_eq!(solution.total_overlap, report.weight);
    Ok(solution)
}

/// Exact solution when all acceleration phases are equal (or all braking
/// phases are). Requires the full energy grid.
///
/// With one side uniform, every tour through a fixed set of lines has the
/// same weight regardless of visiting order, and splitting lines into
/// several tours never beats one tour through all of them: two tours can be
/// spliced into one without changing the total of pair weights or the
/// combined tension span. One tour in line order is therefore optimal.
pub fn solve_uniform_times(instance: &Instance) -> Result<Solution, OneStationError> {
    let view = StationView::from_instance(instance)?;
    view.require_complete("solve_uniform_times")?;
    let first = &view.lines[0];
    let uniform_accel = view.lines.iter().all(|s| s.accel == first.accel);
    let uniform_brake = view.lines.iter().all(|s| s.brake == first.brake);
    if !uniform_accel && !uniform_brake {
        return Err(OneStationError::PreconditionNotMet {
            op: "solve_uniform_times",
            detail: "acceleration times differ and braking times differ; one side must be uniform"
                .to_string(),
        });
    }
    let n = view.n();
    let pairs: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    let matching = view.matching_of("solve_uniform_times", &pairs)?;
    realize(instance, matching)
}

/// Exact solution when the period dwarfs the station: at least `n` times the
/// largest wait upper bound plus the largest acceleration and braking times.
/// Requires the full energy grid.
///
/// With that much room no tour can wrap around the period, so every tour
/// forfeits at least its weakest pair — exactly what a chain forfeits by
/// simply not closing. The heaviest tour minus its weakest arc, scheduled
/// as a chain, is therefore optimal.
pub fn solve_large_period(instance: &Instance) -> Result<Solution, OneStationError> {
    let view = StationView::from_instance(instance)?;
    view.require_complete("solve_large_period")?;
    let n = view.n();
    let max_wait = view.lines.iter().map(|s| s.wait_upper).max().unwrap_or(0);
    let max_accel = view.lines.iter().map(|s| s.accel).max().unwrap_or(0);
    let max_brake = view.lines.iter().map(|s| s.brake).max().unwrap_or(0);
    let threshold = (n as i64) * (max_wait + max_accel + max_brake);
    if view.period < threshold {
        return Err(OneStationError::PreconditionNotMet {
            op: "solve_large_period",
            detail: format!(
                "the period {} is below the everything-unwraps threshold {threshold}",
                view.period
            ),
        });
    }
    if n == 1 {
        return realize(instance, Matching::empty());
    }
    let tour = hamilton::best_tour(n, |a, b| view.short_phase(a, b));
    let mut pairs = hamilton::tour_pairs(&tour);
    // Open the tour into a chain by dropping its weakest arc (smallest
    // departing line among equals).
    let weakest = pairs
        .iter()
        .enumerate()
        .min_by_key(|(_, &(from, to))| (view.short_phase(from, to), from, to))
        .map(|(i, _)| i)
        .expect("a tour over two or more lines has arcs");
    pairs.remove(weakest);
    let matching = view.matching_of("solve_large_period", &pairs)?;
    realize(instance, matching)
}

/// Best solution whose matching is one tour through every line. Requires
/// the full energy grid; exponential in lines (guarded at
/// [`TOUR_LINE_LIMIT`]).
///
/// The heaviest tour is optimal among tours: adding weight to the tour both
/// raises the guaranteed plateau total and tightens the tension span
/// symmetrically, so the grid residue can only shrink.
pub fn solve_single_cycle(instance: &Instance) -> Result<Solution, OneStationError> {
    let view = StationView::from_instance(instance)?;
    view.require_complete("solve_single_cycle")?;
    let n = view.n();
    if n > TOUR_LINE_LIMIT {
        return Err(OneStationError::TooManyLines {
            op: "solve_single_cycle",
            lines: n,
            limit: TOUR_LINE_LIMIT,
        });
    }
    let tour = hamilton::best_tour(n, |a, b| view.short_phase(a, b));
    let pairs = hamilton::tour_pairs(&tour);
    let matching = view.matching_of("solve_single_cycle", &pairs)?;
    realize(instance, matching)
}

/// Pairing-merge heuristic scheduled as a chain. Requires the full energy
/// grid.
///
/// Departures are ranked by acceleration time and arrivals by braking time;
/// the rank-for-rank pairing is spliced into a single tour with at most
/// n − 1 swaps, and the tour is opened into a chain by dropping its weakest
/// pair. The chain realizes its full pairing weight, which trails the greedy
/// pairing weight by at most min{max accel, max brake}.
pub fn solve_merge(instance: &Instance) -> Result<Solution, OneStationError> {
    let view = StationView::from_instance(instance)?;
    view.require_complete("solve_merge")?;
    let accel: Vec<i64> = view.lines.iter().map(|s| s.accel).collect();
    let brake: Vec<i64> = view.lines.iter().map(|s| s.brake).collect();
    let mut pairs = hamilton::merge_pairs(&accel, &brake);
    if pairs.len() > 1 {
        let weakest = pairs
            .iter()
            .enumerate()
            .min_by_key(|(_, &(from, to))| (view.short_phase(from, to), from, to))
            .map(|(i, _)| i)
            .expect("stations have at least one line");
        pairs.remove(weakest);
    }
    let matching = view.matching_of("solve_merge", &pairs)?;
    realize(instance, matching)
}

/// Which algorithm [`dispatch`] settled on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Every wait spans a full period: maximum matching, zero residue.
    FreeWaiting,
    /// One side's phases are uniform: one tour in line order.
    UniformTimes,
    /// Each line brakes as long as it accelerates: run dynamic program.
    EqualTimesDp,
    /// The period dwarfs the station: heaviest tour opened into a chain.
    LargePeriod,
    /// General exact search over matchings and schedules.
    Exact,
    /// Pairing-merge heuristic with a proven additive gap.
    Merge,
    /// Maximum-weight matching scheduled as-is (restricted grids beyond the
    /// exact guard); bounds may be loose.
    Matching,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::FreeWaiting => "free-waiting",
            Method::UniformTimes => "uniform-times",
            Method::EqualTimesDp => "equal-times-dp",
            Method::LargePeriod => "large-period",
            Method::Exact => "exact",
            Method::Merge => "merge",
            Method::Matching => "matching",
        })
    }
}

/// A solution tagged with the method that produced it and two-sided bounds
/// on the best achievable total overlap.
#[derive(Debug, Clone)]
pub struct Dispatched {
    pub method: Method,
    pub solution: Solution,
    /// Overlap of `solution` — always achievable.
    pub lower_bound: i64,
    /// No schedule of this instance exceeds this overlap.
    pub upper_bound: i64,
}

/// Picks the strongest applicable method for a single-station instance, in
/// order: free waits, uniform phases, equal phases, large period (each exact
/// in polynomial time), then the general exact search while the instance is
/// small (at most 12 events and period at most 60), then the merge heuristic
/// on full grids, and finally the plain maximum matching.
///
/// Exact methods return equal bounds; the heuristics return their achieved
/// overlap as the lower bound and the matching weight as the upper bound.
pub fn dispatch(instance: &Instance) -> Result<Dispatched, OneStationError> {
    let view = StationView::from_instance(instance)?;
    let exact = |method: Method, solution: Solution| {
        let value = solution.total_overlap;
        Dispatched {
            method,
            solution,
            lower_bound: value,
            upper_bound: value,
        }
    };
    if view
        .lines
        .iter()
        .all(|s| s.wait_upper - s.wait_lower >= view.period - 1)
    {
        return Ok(exact(Method::FreeWaiting, solve_free_waiting(instance)?));
    }
    if view.complete() {
        let first = &view.lines[0];
        if view.lines.iter().all(|s| s.accel == first.accel)
            || view.lines.iter().all(|s| s.brake == first.brake)
        {
            return Ok(exact(Method::UniformTimes, solve_uniform_times(instance)?));
        }
        if view.lines.iter().all(|s| s.accel == s.brake) {
            return Ok(exact(Method::EqualTimesDp, solve_equal_times_dp(instance)?));
        }
        let n = view.n() as i64;
        let max_wait = view.lines.iter().map(|s| s.wait_upper).max().unwrap_or(0);
        let max_accel = view.lines.iter().map(|s| s.accel).max().unwrap_or(0);
        let max_brake = view.lines.iter().map(|s| s.brake).max().unwrap_or(0);
        if view.period >= n * (max_wait + max_accel + max_brake) {
            return Ok(exact(Method::LargePeriod, solve_large_period(instance)?));
        }
    }
    if instance.events.len() <= DISPATCH_EXACT_EVENTS && instance.period <= DISPATCH_EXACT_PERIOD {
        let request = SolveRequest::new(instance.clone(), Objective::MaxOverlap);
        let result = solve_exact(&request)?;
        return match (result.status, result.solution) {
            (SolveStatus::Optimal, Some(solution)) => Ok(exact(Method::Exact, solution)),
            (status, _) => Err(OneStationError::PreconditionNotMet {
                op: "dispatch",
                detail: format!("the exact search ended {status} without a proven optimum"),
            }),
        };
    }
    let upper = max_weight_matching(instance)?;
    if view.complete() {
        let solution = solve_merge(instance)?;
        let lower = solution.total_overlap;
        return Ok(Dispatched {
            method: Method::Merge,
            solution,
            lower_bound: lower,
            upper_bound: upper.weight,
        });
    }
    let solution = realize(instance, upper.matching.clone())?;
    let lower = solution.total_overlap;
    Ok(Dispatched {
        method: Method::Matching,
        solution,
        lower_bound: lower,
        upper_bound: upper.weight,
    })
}
