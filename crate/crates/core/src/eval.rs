//! Evaluation of a (matching, timetable) pair against an instance.

use std::collections::BTreeMap;

use crate::model::{Instance, Matching, ModelError, Solution, Timetable, Topo};
use crate::periodic::tension_of_times;
use crate::weight::Weight;

/// Computes tensions, travel time, and the overlaps of the selected energy
/// arcs for a complete timetable.
///
/// Errors are reported in a fixed order: the first unscheduled or
/// out-of-range event (by event id), then matching defects, then the first
/// Wait/Drive/Headway activity (in instance order) whose realized tension
/// leaves its `[lower, upper]` window.
pub fn evaluate(
    instance: &Instance,
    matching: &Matching,
    timetable: &Timetable,
) -> Result<Solution, ModelError> {
    let topo = Topo::new(instance)?;

    let mut times = Vec::with_capacity(topo.events.len());
    for ev in &topo.events {
        let t = timetable
            .get(&ev.id)
            .ok_or_else(|| ModelError::Unscheduled(ev.id.clone()))?;
        if !(0 <= t && t < topo.period) {
            return Err(ModelError::TimeOutOfRange {
                event: ev.id.clone(),
                time: t,
            });
        }
        times.push(t);
    }

    let selected = topo.check_matching(matching)?;

    let mut tensions = BTreeMap::new();
    let mut travel_time = Weight::ZERO;
    for a in &topo.acts {
        let x = tension_of_times(topo.period, times[a.tail], times[a.head], a.act.lower);
        if topo.is_constraining(a) && x > a.act.upper {
            return Err(ModelError::InfeasibleTension {
                activity: a.act.id.clone(),
                tension: x,
                lower: a.act.lower,
                upper: a.act.upper,
            });
        }
        travel_time += a.act.weight.times(x);
        tensions.insert(a.act.id.clone(), x);
    }

    let mut overlaps = BTreeMap::new();
    let mut total_overlap = 0i64;
    for &idx in &selected {
        let a = &topo.acts[idx];
        let (t_min, t_max) = topo.energy_times(a)?;
        let x = tensions[&a.act.id];
        let o = x.min(t_min).min(t_max + t_min - x).max(0);
        total_overlap += o;
        overlaps.insert(a.act.id.clone(), o);
    }

    Ok(Solution {
        matching: matching.clone(),
        timetable: timetable.clone(),
        tensions,
        overlaps,
        travel_time,
        total_overlap,
    })
}
