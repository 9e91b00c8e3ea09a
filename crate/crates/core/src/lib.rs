//! Periodic timetabling with brake-traction energy recovery.
//!
//! A braking train can feed recovered energy to a train accelerating out of
//! the same station if the two phases overlap in time. This crate models
//! periodic event-activity networks in which such departure/arrival pairs are
//! selected by a matching and scheduled by a periodic timetable, and provides
//! exact and structural algorithms for the two competing objectives:
//!
//! * **total overlap** — how long braking and traction phases coincide,
//!   summed over the selected pairs (maximize), and
//! * **weighted travel time** — passenger minutes spent on waiting, driving,
//!   and transfer activities (minimize).
//!
//! The main entry points are [`validate_instance`], [`evaluate`],
//! [`solver::solve_exact`], the single-station toolbox in [`onestation`], and
//! the bicriteria sweep in [`pareto::enumerate_front`]. Everything is
//! integer-exact and deterministic: event times are integers modulo the
//! period, weights are exact rationals, and every tie anywhere is broken by
//! id order.

pub mod ids;
pub mod model;
pub mod periodic;
pub mod weight;

pub(crate) mod assignment;
#[cfg(test)]
pub(crate) mod testkit;

pub mod cycles;
pub mod eval;
pub mod io;
pub mod onestation;
pub mod pareto;
pub mod solver;

pub use ids::{ActivityId, EventId, LineId, StationId};
pub use model::{
    tension, validate_instance, Activity, ActivityKind, Event, EventKind, Instance, Matching,
    ModelError, Solution, Timetable, Violation,
};
pub use periodic::{overlap_of_tension, overlap_oracle, OverlapPreconditionError};
pub use weight::Weight;
