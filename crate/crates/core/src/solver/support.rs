//! Shared pieces of the solvers: the leaf-matching computation and exact
//! travel-time accounting on a common denominator.
//!
//! Both solvers must derive the *same* matching from the same fixed
//! timetable (including tie-breaks between parallel arcs), otherwise their
//! witnesses could disagree even when their objective values agree.

use crate::assignment::max_assignment;
use crate::model::{ActivityKind, Topo};

/// Energy-arc geometry of an instance: arc indices plus the deduplicated,
/// sorted departure/arrival event indices that span the bipartite matching.
pub(crate) struct EnergyLayout {
    pub arcs: Vec<usize>,
    pub dep_rows: Vec<usize>,
    pub arr_cols: Vec<usize>,
}

impl EnergyLayout {
    pub fn of(topo: &Topo) -> Self {
        let arcs: Vec<usize> = topo
            .acts
            .iter()
            .enumerate()
            .filter(|(_, a)| a.act.kind == ActivityKind::Energy)
            .map(|(i, _)| i)
            .collect();
        let mut dep_rows: Vec<usize> = arcs.iter().map(|&i| topo.acts[i].tail).collect();
        let mut arr_cols: Vec<usize> = arcs.iter().map(|&i| topo.acts[i].head).collect();
        dep_rows.sort_unstable();
        dep_rows.dedup();
        arr_cols.sort_unstable();
        arr_cols.dedup();
        EnergyLayout {
            arcs,
            dep_rows,
            arr_cols,
        }
    }

    /// Best total overlap over all matchings for a fully fixed timetable,
    /// with the activity indices of the selected (positive-overlap) arcs.
    /// Parallel arcs between the same event pair keep the higher overlap,
    /// then the smaller id.
    pub fn best_matching(&self, topo: &Topo, times: &[i64]) -> (i64, Vec<usize>) {
        struct Cell {
            overlap: i64,
            act: usize,
        }
        let t = topo.period;
        let mut grid: Vec<Vec<Option<Cell>>> = (0..self.dep_rows.len())
            .map(|_| (0..self.arr_cols.len()).map(|_| None).collect())
            .collect();
        for &idx in &self.arcs {
            let a = &topo.acts[idx];
            let (t_min, t_max) = topo.energy_times(a).expect("validated energy arc");
            let x = (times[a.head] - times[a.tail]).rem_euclid(t);
            let o = x.min(t_min).min(t_max + t_min - x).max(0);
            let r = self.dep_rows.binary_search(&a.tail).unwrap();
            let c = self.arr_cols.binary_search(&a.head).unwrap();
            let better = match &grid[r][c] {
                None => true,
                Some(cell) => {
                    o > cell.overlap
                        || (o == cell.overlap && topo.acts[idx].act.id < topo.acts[cell.act].act.id)
                }
            };
            if better {
                grid[r][c] = Some(Cell { overlap: o, act: idx });
            }
        }
        let assignment = max_assignment(self.dep_rows.len(), self.arr_cols.len(), |r, c| {
            grid[r][c].as_ref().map_or(0, |cell| cell.overlap)
        });
        let matched = assignment
            .pairs
            .iter()
            .map(|&(r, c)| grid[r][c].as_ref().unwrap().act)
            .collect();
        (assignment.value, matched)
    }
}

/// Scaled integer travel accounting: every weight multiplied by the least
/// common denominator, so leaf comparisons stay in `i64`.
pub(crate) struct TravelScale {
    pub denom: i64,
    pub scaled: Vec<i64>,
}

impl TravelScale {
    pub fn of(topo: &Topo) -> Self {
        let denom = topo
            .acts
            .iter()
            .map(|a| a.act.weight.as_fraction().1)
            .fold(1i64, lcm);
        let scaled = topo
            .acts
            .iter()
            .map(|a| {
                let (num, den) = a.act.weight.as_fraction();
                num * (denom / den)
            })
            .collect();
        TravelScale { denom, scaled }
    }

    pub fn travel_of(&self, topo: &Topo, times: &[i64]) -> i64 {
        let t = topo.period;
        let mut travel = 0i64;
        for (idx, a) in topo.acts.iter().enumerate() {
            if self.scaled[idx] == 0 {
                continue;
            }
            let x = (times[a.head] - times[a.tail] - a.act.lower).rem_euclid(t) + a.act.lower;
            travel += self.scaled[idx] * x;
        }
        travel
    }

    pub fn to_weight(&self, travel: i64) -> crate::weight::Weight {
        crate::weight::Weight::from_fraction(travel, self.denom)
    }
}

pub(crate) fn lcm(a: i64, b: i64) -> i64 {
    a / gcd(a, b) * b
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}
