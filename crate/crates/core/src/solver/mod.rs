//! Exact solvers for the bicriteria timetabling problem.
//!
//! Both entry points optimize one objective at a time, with the other held
//! by a floor: maximize total overlap, or minimize weighted travel time
//! subject to `total overlap ≥ overlap_floor`.
//!
//! * [`solve_exact`] — depth-first branch and bound over event times. At
//!   every leaf the best matching for the fixed timetable is a maximum-weight
//!   bipartite assignment on the realized overlaps, so the search only
//!   branches on times, never on matchings.
//! * [`brute_force`] — a deliberately naive reference implementation used as
//!   the test oracle. It refuses anything beyond toy sizes.
//! * [`export_lp`] — writes the mixed-integer formulation in CPLEX LP format
//!   for cross-checking against external solvers.
//!
//! Everything is deterministic: identical requests produce identical
//! results, bit for bit. Ties between optimal solutions go to the
//! lexicographically smallest timetable (times read in event-id order).

mod brute;
mod exact;
mod lp;
pub(crate) mod support;

pub use brute::brute_force;
pub use exact::solve_exact;
pub use lp::{export_lp, ModelExport};

use std::fmt;
use std::time::Duration;

use crate::model::{Instance, ModelError, Solution, Violation};
use crate::weight::Weight;

/// Which criterion to optimize.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    /// Minimize Σ weight · tension over all activities.
    MinTravel,
    /// Maximize the total overlap of the selected energy arcs.
    MaxOverlap,
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Objective::MinTravel => f.write_str("min-travel"),
            Objective::MaxOverlap => f.write_str("max-overlap"),
        }
    }
}

/// A solve call: the instance, the objective, and optional limits.
///
/// `overlap_floor` demands `total overlap ≥ floor` from every feasible
/// solution (0 = no demand). Limits default to unlimited.
#[derive(Debug, Clone)]
pub struct SolveRequest {
    pub instance: Instance,
    pub objective: Objective,
    pub overlap_floor: i64,
    pub time_limit: Option<Duration>,
    pub node_limit: Option<u64>,
}

impl SolveRequest {
    pub fn new(instance: Instance, objective: Objective) -> Self {
        SolveRequest {
            instance,
            objective,
            overlap_floor: 0,
            time_limit: None,
            node_limit: None,
        }
    }

    pub fn with_overlap_floor(mut self, floor: i64) -> Self {
        self.overlap_floor = floor;
        self
    }

    pub fn with_time_limit(mut self, limit: Duration) -> Self {
        self.time_limit = Some(limit);
        self
    }

    pub fn with_node_limit(mut self, limit: u64) -> Self {
        self.node_limit = Some(limit);
        self
    }
}

/// How a solve ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    /// The returned solution is proven optimal.
    Optimal,
    /// No feasible solution exists (under the requested overlap floor).
    Infeasible,
    /// A time or node limit stopped the search; the result carries the best
    /// incumbent found and a valid dual bound.
    LimitReached,
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveStatus::Optimal => f.write_str("optimal"),
            SolveStatus::Infeasible => f.write_str("infeasible"),
            SolveStatus::LimitReached => f.write_str("limit-reached"),
        }
    }
}

/// Objective value in the unit of the objective that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ObjectiveValue {
    Travel(Weight),
    Overlap(i64),
}

impl fmt::Display for ObjectiveValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObjectiveValue::Travel(w) => write!(f, "{w}"),
            ObjectiveValue::Overlap(o) => write!(f, "{o}"),
        }
    }
}

/// Outcome of a solve.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub status: SolveStatus,
    /// Best solution found, if any.
    pub solution: Option<Solution>,
    /// Dual bound on the objective: equals the optimum when `Optimal`, and
    /// brackets it from the optimistic side when a limit was reached.
    pub bound: Option<ObjectiveValue>,
    /// Search nodes examined.
    pub nodes: u64,
}

/// Errors that make a solve request unanswerable (as opposed to infeasible).
#[derive(Debug)]
pub enum SolveError {
    /// The instance fails validation; solvers require a clean instance.
    Invalid(Vec<Violation>),
    /// Structural defect surfaced while preparing the solve.
    Model(ModelError),
    /// The brute-force oracle refuses instances beyond its guard rails.
    TooLarge { events: usize, period: i64 },
    /// An id cannot be embedded in the LP text.
    UnexportableId(String),
    /// A weight has no finite decimal representation for the LP text.
    UnexportableWeight(String),
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::Invalid(violations) => {
                write!(f, "instance fails validation ({} violations)", violations.len())
            }
            SolveError::Model(e) => write!(f, "{e}"),
            SolveError::TooLarge { events, period } => write!(
                f,
                "instance too large for exhaustive search ({events} events, period {period})"
            ),
            SolveError::UnexportableId(id) => {
                write!(f, "id `{id}` contains characters the LP format cannot carry")
            }
            SolveError::UnexportableWeight(id) => {
                write!(f, "weight of `{id}` has no finite decimal form")
            }
        }
    }
}

impl std::error::Error for SolveError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            SolveError::Model(e) => Some(e),
            _ => None,
        }
    }
}

impl From<ModelError> for SolveError {
    fn from(e: ModelError) -> Self {
        SolveError::Model(e)
    }
}
