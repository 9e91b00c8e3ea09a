//! Shared fixture builders for the unit tests.

use crate::ids::{ActivityId, EventId, LineId, StationId};
use crate::model::{Activity, ActivityKind, Event, EventKind, Instance};
use crate::weight::Weight;

pub(crate) fn arrival(id: &str, line: &str, brake: i64) -> Event {
    Event {
        id: EventId::from(id),
        kind: EventKind::Arrival,
        line: LineId::from(line),
        station: StationId::from("s"),
        brake_time: Some(brake),
        accel_time: None,
    }
}

pub(crate) fn departure(id: &str, line: &str, accel: i64) -> Event {
    Event {
        id: EventId::from(id),
        kind: EventKind::Departure,
        line: LineId::from(line),
        station: StationId::from("s"),
        brake_time: None,
        accel_time: Some(accel),
    }
}

pub(crate) fn wait(id: &str, tail: &str, head: &str, lower: i64, upper: i64) -> Activity {
    Activity {
        id: ActivityId::from(id),
        kind: ActivityKind::Wait,
        tail: EventId::from(tail),
        head: EventId::from(head),
        lower,
        upper,
        weight: Weight::ZERO,
    }
}

pub(crate) fn energy(id: &str, tail: &str, head: &str, period: i64) -> Activity {
    Activity {
        id: ActivityId::from(id),
        kind: ActivityKind::Energy,
        tail: EventId::from(tail),
        head: EventId::from(head),
        lower: 0,
        upper: period - 1,
        weight: Weight::ZERO,
    }
}

/// One-station instance: per line an arrival/departure pair with a wait arc,
/// plus the full grid of energy arcs (every departure to every arrival).
///
/// `lines` entries are `(name, accel, brake, wait_lower, wait_upper)`.
pub(crate) fn station(period: i64, lines: &[(&str, i64, i64, i64, i64)]) -> Instance {
    let mut events = Vec::new();
    let mut activities = Vec::new();
    for &(name, accel, brake, wl, wu) in lines {
        events.push(arrival(&format!("{name}_arr"), name, brake));
        events.push(departure(&format!("{name}_dep"), name, accel));
        activities.push(wait(
            &format!("wait_{name}"),
            &format!("{name}_arr"),
            &format!("{name}_dep"),
            wl,
            wu,
        ));
    }
    for &(from, ..) in lines {
        for &(to, ..) in lines {
            activities.push(energy(
                &format!("energy_{from}_{to}"),
                &format!("{from}_dep"),
                &format!("{to}_arr"),
                period,
            ));
        }
    }
    Instance {
        period,
        events,
        activities,
    }
}
