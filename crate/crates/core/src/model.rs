//! The event-activity network model.
//!
//! An [`Instance`] is a periodic event-activity network: arrival/departure
//! events joined by activities (arcs), scheduled modulo a common period `T`.
//! Waiting, driving, and headway activities constrain the timetable through
//! their `[lower, upper]` tension bounds; transfer activities are free
//! (`upper = lower + T − 1`) and only contribute travel time; energy
//! activities are free, weightless candidate arcs from a departure to an
//! arrival on which braking and traction phases may overlap.
//!
//! All model types are plain immutable data. [`validate_instance`] is the
//! single gate that checks every structural invariant; algorithms assume a
//! validated instance and only report errors for conditions validation cannot
//! see (unscheduled events, infeasible timetables, …).

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ids::{ActivityId, EventId, LineId, StationId};
use crate::weight::Weight;

/// Whether an event is a train's arrival or departure at a station.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EventKind {
    Arrival,
    Departure,
}

/// One arrival or departure event.
///
/// Arrivals carry the braking time of the incoming train, departures the
/// acceleration time of the outgoing one; the opposite field stays empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Event {
    pub id: EventId,
    pub kind: EventKind,
    pub line: LineId,
    pub station: StationId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub brake_time: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub accel_time: Option<i64>,
}

/// The role an activity plays in the network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActivityKind {
    Wait,
    Drive,
    Transfer,
    Energy,
    Headway,
}

/// A directed arc between two events with periodic tension bounds and a
/// passenger weight.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Activity {
    pub id: ActivityId,
    pub kind: ActivityKind,
    pub tail: EventId,
    pub head: EventId,
    pub lower: i64,
    pub upper: i64,
    pub weight: Weight,
}

/// A complete periodic event-activity network.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub period: i64,
    pub events: Vec<Event>,
    pub activities: Vec<Activity>,
}

/// Event times, all in `{0, …, T−1}`.
///
/// Iteration (and therefore serialization and the "lexicographically
/// smallest timetable" order used for solver tie-breaks) is by event id.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Timetable {
    times: BTreeMap<EventId, i64>,
}

impl Timetable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, event: EventId, time: i64) {
        self.times.insert(event, time);
    }

    pub fn get(&self, event: &EventId) -> Option<i64> {
        self.times.get(event).copied()
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&EventId, i64)> {
        self.times.iter().map(|(id, &t)| (id, t))
    }

    /// Absorbs all entries of `other` (used to assemble a full timetable from
    /// per-component partial ones).
    pub fn absorb(&mut self, other: Timetable) {
        self.times.extend(other.times);
    }
}

impl FromIterator<(EventId, i64)> for Timetable {
    fn from_iter<I: IntoIterator<Item = (EventId, i64)>>(iter: I) -> Self {
        Timetable {
            times: iter.into_iter().collect(),
        }
    }
}

/// A set of selected energy activities, no two sharing a tail or a head.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Matching {
    selected: BTreeSet<ActivityId>,
}

impl Matching {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, id: ActivityId) {
        self.selected.insert(id);
    }

    pub fn contains(&self, id: &ActivityId) -> bool {
        self.selected.contains(id)
    }

    pub fn len(&self) -> usize {
        self.selected.len()
    }

    pub fn is_empty(&self) -> bool {
        self.selected.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &ActivityId> {
        self.selected.iter()
    }
}

impl FromIterator<ActivityId> for Matching {
    fn from_iter<I: IntoIterator<Item = ActivityId>>(iter: I) -> Self {
        Matching {
            selected: iter.into_iter().collect(),
        }
    }
}

/// A fully evaluated (matching, timetable) pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Solution {
    pub matching: Matching,
    pub timetable: Timetable,
    /// Periodic tension of every activity of the instance.
    pub tensions: BTreeMap<ActivityId, i64>,
    /// Overlap of each selected energy activity.
    pub overlaps: BTreeMap<ActivityId, i64>,
    /// Σ weight · tension over all activities.
    pub travel_time: Weight,
    /// Σ overlap over the selected energy activities.
    pub total_overlap: i64,
}

/// One broken invariant found by [`validate_instance`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Id of the offending event/activity, or `"instance"`.
    pub element: String,
    /// Human-readable statement of the broken rule.
    pub rule: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.element, self.rule)
    }
}

/// Errors raised by model operations whose preconditions go beyond what
/// [`validate_instance`] covers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelError {
    UnknownEvent(EventId),
    UnknownActivity(ActivityId),
    DuplicateId(String),
    /// A matching names an activity that is not an energy arc.
    NotEnergy(ActivityId),
    /// Two selected arcs share a tail or head event.
    MatchingConflict {
        event: EventId,
        first: ActivityId,
        second: ActivityId,
    },
    /// The timetable misses an event of the instance.
    Unscheduled(EventId),
    /// A timetable entry lies outside `{0, …, T−1}`.
    TimeOutOfRange { event: EventId, time: i64 },
    /// A Wait/Drive/Headway tension violates its bounds (first offender in
    /// activity order).
    InfeasibleTension {
        activity: ActivityId,
        tension: i64,
        lower: i64,
        upper: i64,
    },
    /// An energy arc endpoint lacks its acceleration/braking time.
    MissingEnergyTimes(ActivityId),
    /// A cycle-only operation was handed a path component.
    NotACycle,
    /// A one-station operation was handed events from several stations.
    MixedStations(StationId, StationId),
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::UnknownEvent(id) => write!(f, "unknown event `{id}`"),
            ModelError::UnknownActivity(id) => write!(f, "unknown activity `{id}`"),
            ModelError::DuplicateId(id) => write!(f, "duplicate id `{id}`"),
            ModelError::NotEnergy(id) => {
                write!(f, "activity `{id}` is in a matching but is not an energy arc")
            }
            ModelError::MatchingConflict { event, first, second } => write!(
                f,
                "arcs `{first}` and `{second}` both touch event `{event}`, but at most one may"
            ),
            ModelError::Unscheduled(id) => write!(f, "event `{id}` has no scheduled time"),
            ModelError::TimeOutOfRange { event, time } => {
                write!(f, "event `{event}` scheduled at {time}, outside [0, T)")
            }
            ModelError::InfeasibleTension { activity, tension, lower, upper } => write!(
                f,
                "activity `{activity}` realizes tension {tension} outside [{lower}, {upper}]"
            ),
            ModelError::MissingEnergyTimes(id) => write!(
                f,
                "energy activity `{id}` lacks acceleration/braking times on its endpoints"
            ),
            ModelError::NotACycle => write!(f, "component is a path, not a cycle"),
            ModelError::MixedStations(a, b) => {
                write!(f, "expected a single station, found `{a}` and `{b}`")
            }
        }
    }
}

impl std::error::Error for ModelError {}

/// Checks every structural invariant; an empty list means the instance is
/// well-formed. Violations are data, not failures: the order is
/// deterministic (events, then activities, then the wait-matching rules).
pub fn validate_instance(instance: &Instance) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |element: &str, rule: String| {
        out.push(Violation {
            element: element.to_owned(),
            rule,
        });
    };
    let t = instance.period;
    if t < 1 {
        push("instance", format!("period must be positive, got {t}"));
        return out;
    }

    let mut events: HashMap<&str, &Event> = HashMap::new();
    for ev in &instance.events {
        if events.insert(ev.id.as_str(), ev).is_some() {
            push(ev.id.as_str(), "duplicate event id".into());
            continue;
        }
        match ev.kind {
            EventKind::Arrival => {
                match ev.brake_time {
                    None => push(ev.id.as_str(), "arrival must carry a braking time".into()),
                    Some(b) if b <= 0 => {
                        push(ev.id.as_str(), format!("braking time must be positive, got {b}"))
                    }
                    Some(_) => {}
                }
                if ev.accel_time.is_some() {
                    push(ev.id.as_str(), "arrival must not carry an acceleration time".into());
                }
            }
            EventKind::Departure => {
                match ev.accel_time {
                    None => push(ev.id.as_str(), "departure must carry an acceleration time".into()),
                    Some(a) if a <= 0 => push(
                        ev.id.as_str(),
                        format!("acceleration time must be positive, got {a}"),
                    ),
                    Some(_) => {}
                }
                if ev.brake_time.is_some() {
                    push(ev.id.as_str(), "departure must not carry a braking time".into());
                }
            }
        }
    }

    let mut act_ids: BTreeSet<&str> = BTreeSet::new();
    // Wait arcs per event and per (line, station) group, for the matching rule.
    let mut wait_deg: HashMap<&str, u32> = HashMap::new();
    let mut groups: BTreeMap<(&LineId, &StationId), GroupTally> = BTreeMap::new();
    for ev in &instance.events {
        let tally = groups.entry((&ev.line, &ev.station)).or_default();
        match ev.kind {
            EventKind::Arrival => tally.arrivals += 1,
            EventKind::Departure => tally.departures += 1,
        }
    }

    for act in &instance.activities {
        let id = act.id.as_str();
        if !act_ids.insert(id) {
            push(id, "duplicate activity id".into());
            continue;
        }
        let (tail, head) = (events.get(act.tail.as_str()), events.get(act.head.as_str()));
        if tail.is_none() {
            push(id, format!("tail `{}` is not an event of the instance", act.tail));
        }
        if head.is_none() {
            push(id, format!("head `{}` is not an event of the instance", act.head));
        }
        if !(0 <= act.lower && act.lower <= t - 1) {
            push(id, format!("lower bound {} outside [0, {}]", act.lower, t - 1));
        }
        if !(act.lower <= act.upper && act.upper <= act.lower + t - 1) {
            push(
                id,
                format!(
                    "upper bound {} outside [lower, lower + T − 1] = [{}, {}]",
                    act.upper,
                    act.lower,
                    act.lower + t - 1
                ),
            );
        }
        if act.weight.is_negative() {
            push(id, format!("weight {} is negative", act.weight));
        }
        let (tail, head) = match (tail, head) {
            (Some(tl), Some(hd)) => (*tl, *hd),
            _ => continue,
        };
        match act.kind {
            ActivityKind::Energy => {
                if tail.kind != EventKind::Departure || head.kind != EventKind::Arrival {
                    push(id, "energy arc must run from a departure to an arrival".into());
                } else {
                    if act.lower != 0 || act.upper != t - 1 {
                        push(id, format!("energy arc must be free: bounds [0, {}]", t - 1));
                    }
                    if !act.weight.is_zero() {
                        push(id, "energy arc must have weight 0".into());
                    }
                    if let (Some(ac), Some(br)) = (tail.accel_time, head.brake_time) {
                        if ac + br >= t {
                            push(
                                id,
                                format!(
                                    "acceleration {ac} plus braking {br} must stay below the period {t}"
                                ),
                            );
                        }
                    }
                }
            }
            ActivityKind::Transfer => {
                if act.upper != act.lower + t - 1 {
                    push(
                        id,
                        format!("transfer must be free: upper = lower + T − 1 = {}", act.lower + t - 1),
                    );
                }
            }
            ActivityKind::Wait => {
                if tail.kind != EventKind::Arrival || head.kind != EventKind::Departure {
                    push(id, "wait arc must run from an arrival to a departure".into());
                } else if tail.line != head.line || tail.station != head.station {
                    push(id, "wait arc must stay on one line at one station".into());
                } else {
                    *wait_deg.entry(tail.id.as_str()).or_default() += 1;
                    *wait_deg.entry(head.id.as_str()).or_default() += 1;
                    groups
                        .entry((&tail.line, &tail.station))
                        .or_default()
                        .waits += 1;
                }
            }
            ActivityKind::Drive | ActivityKind::Headway => {}
        }
    }

    // The wait arcs must perfectly match arrivals to departures wherever a
    // (line, station) pair has both; events on two wait arcs are never legal.
    for ev in &instance.events {
        if wait_deg.get(ev.id.as_str()).copied().unwrap_or(0) > 1 {
            push(ev.id.as_str(), "event lies on more than one wait arc".into());
        }
    }
    for ((line, station), tally) in &groups {
        if tally.arrivals > 0 && tally.departures > 0 {
            let need = tally.arrivals.min(tally.departures);
            if tally.waits != need || tally.arrivals != tally.departures {
                push(
                    "instance",
                    format!(
                        "line `{line}` at station `{station}` needs a perfect wait matching \
                         ({} arrivals, {} departures, {} wait arcs)",
                        tally.arrivals, tally.departures, tally.waits
                    ),
                );
            }
        }
    }

    out
}

#[derive(Default)]
struct GroupTally {
    arrivals: u32,
    departures: u32,
    waits: u32,
}

/// Periodic tension of one activity under a timetable.
///
/// Returns `(π_head − π_tail − l) mod T + l`, the unique representative of
/// the time difference in `[l, l + T − 1]`.
pub fn tension(
    instance: &Instance,
    timetable: &Timetable,
    activity: &Activity,
) -> Result<i64, ModelError> {
    let pi_tail = timetable
        .get(&activity.tail)
        .ok_or_else(|| ModelError::UnknownEvent(activity.tail.clone()))?;
    let pi_head = timetable
        .get(&activity.head)
        .ok_or_else(|| ModelError::UnknownEvent(activity.head.clone()))?;
    Ok(crate::periodic::tension_of_times(
        instance.period,
        pi_tail,
        pi_head,
        activity.lower,
    ))
}

// ---------------------------------------------------------------------------
// Indexed view shared by the algorithms.
// ---------------------------------------------------------------------------

/// Index-based view of an instance: events sorted by id, activities in
/// instance order, endpoints resolved to positions. Built once per operation;
/// construction fails only on dangling or duplicate ids (conditions
/// `validate_instance` reports in full).
pub(crate) struct Topo<'a> {
    pub period: i64,
    /// Events sorted by id; position in this vector is the event index used
    /// everywhere (anchors, lexicographic timetable comparisons, …).
    pub events: Vec<&'a Event>,
    pub acts: Vec<ActRef<'a>>,
}

pub(crate) struct ActRef<'a> {
    pub act: &'a Activity,
    pub tail: usize,
    pub head: usize,
}

impl<'a> Topo<'a> {
    pub fn new(instance: &'a Instance) -> Result<Self, ModelError> {
        let mut events: Vec<&Event> = instance.events.iter().collect();
        events.sort_by(|a, b| a.id.cmp(&b.id));
        let mut pos: HashMap<&str, usize> = HashMap::with_capacity(events.len());
        for (i, ev) in events.iter().enumerate() {
            if pos.insert(ev.id.as_str(), i).is_some() {
                return Err(ModelError::DuplicateId(ev.id.as_str().to_owned()));
            }
        }
        let mut acts = Vec::with_capacity(instance.activities.len());
        let mut seen: BTreeSet<&str> = BTreeSet::new();
        for act in &instance.activities {
            if !seen.insert(act.id.as_str()) {
                return Err(ModelError::DuplicateId(act.id.as_str().to_owned()));
            }
            let tail = *pos
                .get(act.tail.as_str())
                .ok_or_else(|| ModelError::UnknownEvent(act.tail.clone()))?;
            let head = *pos
                .get(act.head.as_str())
                .ok_or_else(|| ModelError::UnknownEvent(act.head.clone()))?;
            acts.push(ActRef { act, tail, head });
        }
        Ok(Topo {
            period: instance.period,
            events,
            acts,
        })
    }

    /// `(t_min, t_max)` of an energy arc, from its endpoint events.
    pub fn energy_times(&self, a: &ActRef) -> Result<(i64, i64), ModelError> {
        let ac = self.events[a.tail].accel_time;
        let br = self.events[a.head].brake_time;
        match (ac, br) {
            (Some(ac), Some(br)) => Ok((ac.min(br), ac.max(br))),
            _ => Err(ModelError::MissingEnergyTimes(a.act.id.clone())),
        }
    }

    /// Whether the arc constrains the timetable (finite tension window).
    pub fn is_constraining(&self, a: &ActRef) -> bool {
        matches!(
            a.act.kind,
            ActivityKind::Wait | ActivityKind::Drive | ActivityKind::Headway
        )
    }

    /// Index of the activity list, keyed by id.
    pub fn act_positions(&self) -> HashMap<&'a str, usize> {
        self.acts
            .iter()
            .enumerate()
            .map(|(i, a)| (a.act.id.as_str(), i))
            .collect()
    }

    /// Validates a matching against this topology: every id must name an
    /// energy arc, and no two arcs may share a tail or head.
    pub fn check_matching(&self, matching: &Matching) -> Result<Vec<usize>, ModelError> {
        let by_id = self.act_positions();
        let mut used_tail: HashMap<usize, usize> = HashMap::new();
        let mut used_head: HashMap<usize, usize> = HashMap::new();
        let mut out = Vec::with_capacity(matching.len());
        for id in matching.iter() {
            let &idx = by_id
                .get(id.as_str())
                .ok_or_else(|| ModelError::UnknownActivity(id.clone()))?;
            let a = &self.acts[idx];
            if a.act.kind != ActivityKind::Energy {
                return Err(ModelError::NotEnergy(id.clone()));
            }
            if let Some(&other) = used_tail.get(&a.tail) {
                return Err(ModelError::MatchingConflict {
                    event: self.events[a.tail].id.clone(),
                    first: self.acts[other].act.id.clone(),
                    second: id.clone(),
                });
            }
            if let Some(&other) = used_head.get(&a.head) {
                return Err(ModelError::MatchingConflict {
                    event: self.events[a.head].id.clone(),
                    first: self.acts[other].act.id.clone(),
                    second: id.clone(),
                });
            }
            used_tail.insert(a.tail, idx);
            used_head.insert(a.head, idx);
            out.push(idx);
        }
        Ok(out)
    }
}
