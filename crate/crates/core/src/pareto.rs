//! The overlap/travel-time trade-off curve.
//!
//! Total overlap and weighted travel time pull schedules in opposite
//! directions: tight waits help passengers but pin tensions away from the
//! overlap plateaus. [`enumerate_front`] sweeps the whole trade-off exactly —
//! it probes the best achievable overlap, then minimizes travel time once per
//! overlap floor and keeps the undominated outcomes. Because overlaps are
//! integers in `[0, best]`, the sweep is finite and misses nothing: every
//! undominated (overlap, travel time) pair appears for the floor equal to its
//! overlap.
//!
//! The solver is injected as a closure so the sweep works with any oracle
//! honoring [`SolveRequest`] — the branch-and-bound search in production,
//! exhaustive references in tests.

use std::fmt;

use crate::ids::ActivityId;
use crate::model::{Instance, Solution, Timetable};
use crate::solver::{Objective, SolveError, SolveRequest, SolveResult, SolveStatus};
use crate::weight::Weight;

/// One point of the trade-off curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParetoPoint {
    /// Overlap floor this point was swept at. On a filtered front this
    /// equals the witness's achieved total overlap.
    pub overlap: i64,
    /// Best weighted travel time under that floor.
    pub travel_time: Weight,
    /// A schedule attaining it.
    pub witness: Solution,
}

/// The undominated points of a sweep, ascending strictly in overlap and in
/// travel time alike.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParetoFront {
    pub points: Vec<ParetoPoint>,
}

/// Errors of the trade-off sweep.
#[derive(Debug)]
pub enum ParetoError {
    /// A solver call failed outright.
    Solve(SolveError),
    /// A solver call returned without a proven optimum; `floor` is the
    /// overlap floor being swept, or `None` for the initial overlap probe.
    Unsolved {
        floor: Option<i64>,
        status: SolveStatus,
    },
}

impl fmt::Display for ParetoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParetoError::Solve(e) => e.fmt(f),
            ParetoError::Unsolved {
                floor: None,
                status,
            } => write!(f, "the overlap probe ended {status} without a proven optimum"),
            ParetoError::Unsolved {
                floor: Some(floor),
                status,
            } => write!(
                f,
                "the travel sweep at overlap floor {floor} ended {status} without a proven optimum"
            ),
        }
    }
}

impl std::error::Error for ParetoError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            ParetoError::Solve(e) => Some(e),
            ParetoError::Unsolved { .. } => None,
        }
    }
}

impl From<SolveError> for ParetoError {
    fn from(e: SolveError) -> Self {
        ParetoError::Solve(e)
    }
}

/// Sweeps the exact trade-off curve of an instance.
///
/// First maximizes total overlap to learn the sweep range, then minimizes
/// travel time once per overlap floor `0..=best` and filters the outcomes
/// with [`dominance_filter`]. Every call must come back
/// [`SolveStatus::Optimal`]; the first one that does not aborts the sweep
/// with its floor, so a caller hitting solver limits knows where to resume.
///
/// The front inherits the solver's determinism: identical instances and
/// solvers yield identical fronts, witnesses included.
pub fn enumerate_front<F>(instance: &Instance, solve: F) -> Result<ParetoFront, ParetoError>
where
    F: Fn(SolveRequest) -> Result<SolveResult, SolveError>,
{
    let probe = solve(SolveRequest::new(instance.clone(), Objective::MaxOverlap))?;
    let best_overlap = match (probe.status, probe.solution) {
        (SolveStatus::Optimal, Some(solution)) => solution.total_overlap,
        (status, _) => return Err(ParetoError::Unsolved { floor: None, status }),
    };
    let mut points = Vec::with_capacity(best_overlap.max(0) as usize + 1);
    for floor in 0..=best_overlap {
        let request =
            SolveRequest::new(instance.clone(), Objective::MinTravel).with_overlap_floor(floor);
        let swept = solve(request)?;
        let witness = match (swept.status, swept.solution) {
            (SolveStatus::Optimal, Some(solution)) => solution,
            (status, _) => {
                return Err(ParetoError::Unsolved {
                    floor: Some(floor),
                    status,
                })
            }
        };
        points.push(ParetoPoint {
            overlap: floor,
            travel_time: witness.travel_time,
            witness,
        });
    }
    Ok(ParetoFront {
        points: dominance_filter(points),
    })
}

fn witness_key(point: &ParetoPoint) -> (&Timetable, Vec<&ActivityId>) {
    (
        &point.witness.timetable,
        point.witness.matching.iter().collect(),
    )
}

/// Keeps the undominated points of an arbitrary collection.
///
/// A point is dropped when another offers at least its overlap for at most
/// its travel time, one of the two strictly better. Points with identical
/// coordinates collapse to the one with the smallest witness (by timetable,
/// then matching). The result is sorted ascending and strictly increasing
/// in both coordinates, and does not depend on the input order.
pub fn dominance_filter(mut points: Vec<ParetoPoint>) -> Vec<ParetoPoint> {
    points.sort_by(|a, b| {
        a.overlap
            .cmp(&b.overlap)
            .then(b.travel_time.cmp(&a.travel_time))
            .then_with(|| witness_key(a).cmp(&witness_key(b)))
    });
    points.dedup_by(|later, earlier| {
        later.overlap == earlier.overlap && later.travel_time == earlier.travel_time
    });
    // Descending overlap, ties visited cheapest-travel first: a point
    // survives exactly when it undercuts everything that offers at least
    // as much overlap.
    let mut kept: Vec<ParetoPoint> = Vec::new();
    let mut best_travel: Option<Weight> = None;
    for point in points.into_iter().rev() {
        if best_travel.map_or(true, |best| point.travel_time < best) {
            best_travel = Some(point.travel_time);
            kept.push(point);
        }
    }
    kept.reverse();
    kept
}
