//! Mixed-integer model export in the classic LP text format.
//!
//! The rendered model is the standard linearization of the problem: one
//! integer time `pi_e` per event, one tension `x_a` with its cycle offset
//! `p_a` per activity, and for every recuperation arc an overlap variable
//! `o_a` gated by a selection binary `alpha_a`. The big-M constant gamma is
//! the largest slack `T − (t_max + t_min)` over the recuperation arcs, the
//! smallest value that leaves the overlap rows exact. Output is plain ASCII
//! with LF line ends, deterministic for a given request: rows and variables
//! are ordered by id throughout.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::model::{validate_instance, ActivityKind, Topo};
use crate::solver::{Objective, SolveError, SolveRequest};
use crate::weight::Weight;

/// The rendered model text plus the big-M constant baked into it.
#[derive(Debug, Clone)]
pub struct ModelExport {
    pub text: String,
    pub gamma: i64,
}

/// Renders the request as a mixed-integer program in LP text format.
///
/// Fails on invalid instances, on ids that do not fit the LP name charset
/// (ASCII letters, digits, `_`, `.`), and on weights without a finite
/// decimal expansion.
pub fn export_lp(request: &SolveRequest) -> Result<ModelExport, SolveError> {
    let violations = validate_instance(&request.instance);
    if !violations.is_empty() {
        return Err(SolveError::Invalid(violations));
    }
    let topo = Topo::new(&request.instance)?;
    let t = topo.period;

    for ev in &topo.events {
        if !lp_name_safe(ev.id.as_str()) {
            return Err(SolveError::UnexportableId(ev.id.to_string()));
        }
    }
    for a in &topo.acts {
        if !lp_name_safe(a.act.id.as_str()) {
            return Err(SolveError::UnexportableId(a.act.id.to_string()));
        }
        if !a.act.weight.has_decimal_form() {
            return Err(SolveError::UnexportableWeight(a.act.id.to_string()));
        }
    }

    // Everything is emitted in id order.
    let mut act_order: Vec<usize> = (0..topo.acts.len()).collect();
    act_order.sort_by(|&i, &j| topo.acts[i].act.id.cmp(&topo.acts[j].act.id));

    struct EnergyRow {
        act: usize,
        t_min: i64,
        t_max: i64,
    }
    let mut energy: Vec<EnergyRow> = Vec::new();
    for &i in &act_order {
        let a = &topo.acts[i];
        if a.act.kind == ActivityKind::Energy {
            let (t_min, t_max) = topo.energy_times(a)?;
            energy.push(EnergyRow { act: i, t_min, t_max });
        }
    }
    let gamma = energy
        .iter()
        .map(|e| t - (e.t_max + e.t_min))
        .max()
        .unwrap_or(0);

    let mut out = String::new();
    let _ = writeln!(out, "\\ periodic timetable with recuperation matching");
    let _ = writeln!(
        out,
        "\\ period {t}, events {}, activities {}, recuperation arcs {}",
        topo.events.len(),
        topo.acts.len(),
        energy.len()
    );
    let _ = writeln!(
        out,
        "\\ objective {}, overlap floor {}, gamma {gamma}",
        request.objective, request.overlap_floor
    );

    // Objective. A constant-only objective still needs one variable to
    // anchor the expression, so fall back to a zero term.
    let zero_term = topo
        .events
        .first()
        .map(|ev| format!("0 pi_{}", ev.id))
        .unwrap_or_default();
    match request.objective {
        Objective::MinTravel => {
            let _ = writeln!(out, "Minimize");
            let terms: Vec<String> = act_order
                .iter()
                .map(|&i| &topo.acts[i])
                .filter(|a| a.act.weight != Weight::ZERO)
                .map(|a| format!("{} x_{}", a.act.weight, a.act.id))
                .collect();
            let body = if terms.is_empty() { zero_term } else { terms.join(" + ") };
            let _ = writeln!(out, " obj: {body}");
        }
        Objective::MaxOverlap => {
            let _ = writeln!(out, "Maximize");
            let terms: Vec<String> = energy
                .iter()
                .map(|e| format!("o_{}", topo.acts[e.act].act.id))
                .collect();
            let body = if terms.is_empty() { zero_term } else { terms.join(" + ") };
            let _ = writeln!(out, " obj: {body}");
        }
    }

    let _ = writeln!(out, "Subject To");
    for &i in &act_order {
        let a = &topo.acts[i];
        let _ = writeln!(
            out,
            " ten_{id}: x_{id} - pi_{head} + pi_{tail} - {t} p_{id} = 0",
            id = a.act.id,
            head = topo.events[a.head].id,
            tail = topo.events[a.tail].id,
        );
    }
    for e in &energy {
        let id = &topo.acts[e.act].act.id;
        let _ = writeln!(out, " oub1_{id}: o_{id} - x_{id} <= 0");
        let _ = writeln!(out, " oub2_{id}: o_{id} - {} alpha_{id} <= 0", e.t_min);
        let _ = writeln!(
            out,
            " oub3_{id}: o_{id} + x_{id} + {gamma} alpha_{id} <= {}",
            e.t_max + e.t_min + gamma
        );
    }

    // At most one selected arc per arrival and per departure.
    let mut into: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    let mut from: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for e in &energy {
        let a = &topo.acts[e.act];
        into.entry(topo.events[a.head].id.as_str())
            .or_default()
            .push(a.act.id.as_str());
        from.entry(topo.events[a.tail].id.as_str())
            .or_default()
            .push(a.act.id.as_str());
    }
    for (event, arcs) in &into {
        let sum: Vec<String> = arcs.iter().map(|id| format!("alpha_{id}")).collect();
        let _ = writeln!(out, " deg_in_{event}: {} <= 1", sum.join(" + "));
    }
    for (event, arcs) in &from {
        let sum: Vec<String> = arcs.iter().map(|id| format!("alpha_{id}")).collect();
        let _ = writeln!(out, " deg_out_{event}: {} <= 1", sum.join(" + "));
    }

    if !energy.is_empty() {
        let sum: Vec<String> = energy
            .iter()
            .map(|e| format!("o_{}", topo.acts[e.act].act.id))
            .collect();
        let _ = writeln!(out, " floor: {} >= {}", sum.join(" + "), request.overlap_floor);
    }

    let _ = writeln!(out, "Bounds");
    for &i in &act_order {
        let a = &topo.acts[i];
        let _ = writeln!(out, " {} <= x_{} <= {}", a.act.lower, a.act.id, a.act.upper);
    }
    for ev in &topo.events {
        let _ = writeln!(out, " 0 <= pi_{} <= {}", ev.id, t - 1);
    }
    for &i in &act_order {
        let _ = writeln!(out, " p_{} free", topo.acts[i].act.id);
    }
    for e in &energy {
        let _ = writeln!(out, " o_{} >= 0", topo.acts[e.act].act.id);
    }

    let _ = writeln!(out, "Generals");
    for ev in &topo.events {
        let _ = writeln!(out, " pi_{}", ev.id);
    }
    for &i in &act_order {
        let _ = writeln!(out, " p_{}", topo.acts[i].act.id);
    }
    if !energy.is_empty() {
        let _ = writeln!(out, "Binaries");
        for e in &energy {
            let _ = writeln!(out, " alpha_{}", topo.acts[e.act].act.id);
        }
    }
    let _ = writeln!(out, "End");

    debug_assert!(out.is_ascii());
    Ok(ModelExport { text: out, gamma })
}

fn lp_name_safe(id: &str) -> bool {
    !id.is_empty()
        && id
            .bytes()
            .all(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'.')
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testkit::station;

    #[test]
    fn single_line_model_renders_exactly() {
        let mut inst = station(10, &[("L1", 3, 4, 1, 3)]);
        inst.activities[0].weight = "2.5".parse().unwrap();
        let req = SolveRequest::new(inst, Objective::MinTravel).with_overlap_floor(2);
        let got = export_lp(&req).unwrap();
        assert_eq!(got.gamma, 3);
        let want = "\
\\ periodic timetable with recuperation matching
\\ period 10, events 2, activities 2, recuperation arcs 1
\\ objective min-travel, overlap floor 2, gamma 3
Minimize
 obj: 2.5 x_wait_L1
Subject To
 ten_energy_L1_L1: x_energy_L1_L1 - pi_L1_arr + pi_L1_dep - 10 p_energy_L1_L1 = 0
 ten_wait_L1: x_wait_L1 - pi_L1_dep + pi_L1_arr - 10 p_wait_L1 = 0
 oub1_energy_L1_L1: o_energy_L1_L1 - x_energy_L1_L1 <= 0
 oub2_energy_L1_L1: o_energy_L1_L1 - 3 alpha_energy_L1_L1 <= 0
 oub3_energy_L1_L1: o_energy_L1_L1 + x_energy_L1_L1 + 3 alpha_energy_L1_L1 <= 10
 deg_in_L1_arr: alpha_energy_L1_L1 <= 1
 deg_out_L1_dep: alpha_energy_L1_L1 <= 1
 floor: o_energy_L1_L1 >= 2
Bounds
 0 <= x_energy_L1_L1 <= 9
 1 <= x_wait_L1 <= 3
 0 <= pi_L1_arr <= 9
 0 <= pi_L1_dep <= 9
 p_energy_L1_L1 free
 p_wait_L1 free
 o_energy_L1_L1 >= 0
Generals
 pi_L1_arr
 pi_L1_dep
 p_energy_L1_L1
 p_wait_L1
Binaries
 alpha_energy_L1_L1
End
";
        assert_eq!(got.text, want);
    }

    #[test]
    fn four_line_station_gets_the_documented_big_m() {
        // Phase times summing to 11 in a period of 20 leave a slack of 9.
        let inst = station(
            20,
            &[("A", 5, 6, 1, 4), ("B", 5, 6, 1, 4), ("C", 5, 6, 1, 4), ("D", 5, 6, 1, 4)],
        );
        let req = SolveRequest::new(inst, Objective::MaxOverlap);
        let got = export_lp(&req).unwrap();
        assert_eq!(got.gamma, 9);
        assert!(got.text.starts_with("\\ periodic timetable"));
        assert!(got.text.contains("Maximize"));
        assert!(got.text.contains(" floor: "));
        // Four arrivals and four departures, one degree row each.
        assert_eq!(got.text.matches(" deg_in_").count(), 4);
        assert_eq!(got.text.matches(" deg_out_").count(), 4);
        // Sixteen selection binaries.
        assert_eq!(got.text.matches(" oub3_").count(), 16);
        assert!(got.text.ends_with("End\n"));
        assert!(got.text.is_ascii());
        assert!(!got.text.contains("\r"));
    }

    #[test]
    fn model_without_recuperation_arcs_is_a_plain_periodic_program() {
        let mut inst = station(10, &[("L1", 3, 4, 1, 3)]);
        inst.activities.retain(|a| a.kind != ActivityKind::Energy);
        let req = SolveRequest::new(inst, Objective::MaxOverlap);
        let got = export_lp(&req).unwrap();
        assert_eq!(got.gamma, 0);
        assert!(!got.text.contains("Binaries"));
        assert!(!got.text.contains("floor:"));
        assert!(!got.text.contains("alpha_"));
        // Nothing to maximize: the objective degenerates to a zero term.
        assert!(got.text.contains(" obj: 0 pi_L1_arr"));
    }

    #[test]
    fn hostile_ids_and_weights_are_refused() {
        let mut inst = station(10, &[("L1", 3, 4, 1, 3)]);
        inst.activities[0].id = "wait L1".into();
        let err = export_lp(&SolveRequest::new(inst, Objective::MinTravel)).unwrap_err();
        assert!(matches!(err, SolveError::UnexportableId(id) if id == "wait L1"));

        let mut inst = station(10, &[("L1", 3, 4, 1, 3)]);
        inst.activities[0].weight = Weight::from_fraction(1, 3);
        let err = export_lp(&SolveRequest::new(inst, Objective::MinTravel)).unwrap_err();
        assert!(matches!(err, SolveError::UnexportableWeight(id) if id == "wait_L1"));
    }

    #[test]
    fn rows_follow_id_order_regardless_of_input_order() {
        let mut inst = station(12, &[("B", 2, 3, 0, 3), ("A", 3, 2, 0, 3)]);
        inst.activities.reverse();
        let got = export_lp(&SolveRequest::new(inst, Objective::MinTravel)).unwrap();
        let first = got.text.find(" ten_energy_A_A:").unwrap();
        let later = got.text.find(" ten_wait_B:").unwrap();
        assert!(first < later);
    }

    #[test]
    fn invalid_instance_is_rejected_before_rendering() {
        let mut inst = station(10, &[("L1", 3, 4, 1, 3)]);
        inst.activities[0].lower = 99;
        assert!(matches!(
            export_lp(&SolveRequest::new(inst, Objective::MinTravel)),
            Err(SolveError::Invalid(_))
        ));
    }
}
