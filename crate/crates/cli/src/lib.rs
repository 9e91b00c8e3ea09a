//! Command-line front end for the brake–traction synchronization toolkit.
//!
//! The binary reads and writes the JSON instance files of
//! [`brakesync_core::io`] and exposes one verb per workflow step:
//!
//! * `validate` — list every modelling violation in an instance file,
//! * `solve` — optimize one objective exactly, or route a single-station
//!   energy question through the method dispatcher,
//! * `energy` — run one named single-station algorithm and show the
//!   per-pair overlap breakdown,
//! * `pareto` — sweep the overlap floor and emit the undominated
//!   travel/overlap trade-off as CSV,
//! * `gen` — write the built-in example stations or a seeded random one,
//! * `export-lp` — render the solve as a mixed-integer program,
//! * `oracle` — solve by exhaustive enumeration (small instances only).
//!
//! Every command exits 0 on success, 1 on parse/validation/usage problems,
//! 2 when the requested solve is infeasible, and 3 when a limit stopped the
//! search before a proven answer.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use rand::Rng as _;
use rand::SeedableRng as _;
use rand_chacha::ChaCha8Rng;

use brakesync_core::io::{instance_to_string, read_instance, write_instance, write_solution};
use brakesync_core::onestation::{
    build_one_station, dispatch, exact_overlap_optimum, solve_equal_times_dp, solve_free_waiting,
    solve_large_period, solve_merge, solve_single_cycle, solve_uniform_times, EnergyTopology,
    OneStationError, OneStationSpec, TransferSpec,
};
use brakesync_core::pareto::{enumerate_front, ParetoError, ParetoFront};
use brakesync_core::solver::{
    brute_force, export_lp, solve_exact, Objective, SolveError, SolveRequest, SolveResult,
    SolveStatus,
};
use brakesync_core::{validate_instance, Instance, Solution, Timetable, Weight};

// ---------------------------------------------------------------------------
// Built-in and random instance generators.
// ---------------------------------------------------------------------------

/// How a random station draws its acceleration/braking phases and waits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenMode {
    /// Every wait spans a full period; phases are independent.
    Free,
    /// Bounded waits; phases are independent (the general case).
    Bounded,
    /// Each line brakes exactly as long as it accelerates.
    EqualTimes,
    /// All lines share one acceleration time.
    UniformAc,
}

/// Rejected parameters of [`gen_random`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenError {
    /// A station needs at least one line.
    NoLines,
    /// Phase times must allow `1 ≤ low ≤ high`.
    BadTimeRange { low: i64, high: i64 },
    /// Wait bounds must allow `0 ≤ low ≤ high`.
    BadWaitRange { low: i64, high: i64 },
    /// The period must exceed twice the largest drawable phase time.
    PeriodTooSmall { period: i64, minimum: i64 },
}

impl fmt::Display for GenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenError::NoLines => write!(f, "a station needs at least one line"),
            GenError::BadTimeRange { low, high } => write!(
                f,
                "time range {low}..{high} is unusable: phase times need 1 <= low <= high"
            ),
            GenError::BadWaitRange { low, high } => write!(
                f,
                "wait range {low}..{high} is unusable: wait bounds need 0 <= low <= high"
            ),
            GenError::PeriodTooSmall { period, minimum } => write!(
                f,
                "period {period} is too short for the drawn phase times; need at least {minimum}"
            ),
        }
    }
}

impl std::error::Error for GenError {}

/// Four evenly matched lines at period 20: uniform 5/6 phases, weighted
/// waits in `[1, 4]`, an asymmetric transfer pattern, and the full energy
/// grid. The overlap optimum is 20 and the unconstrained travel optimum is
/// 500, which makes the station the worked example for the trade-off sweep.
pub fn artificial4_spec() -> OneStationSpec {
    let mut spec = OneStationSpec::new(&[5, 5, 5, 5], &[6, 6, 6, 6], &[(1, 4); 4]);
    spec.wait_weights = [40, 40, 20, 20]
        .into_iter()
        .map(Weight::from_integer)
        .collect();
    let transfer = |from_line, to_line, weight| TransferSpec {
        from_line,
        to_line,
        lower: 3,
        weight: Weight::from_integer(weight),
    };
    spec.transfers = vec![
        transfer(0, 2, 10),
        transfer(0, 3, 10),
        transfer(1, 2, 5),
        transfer(1, 3, 5),
        transfer(2, 0, 5),
        transfer(2, 1, 10),
        transfer(3, 0, 5),
        transfer(3, 1, 10),
    ];
    spec
}

/// [`artificial4_spec`] built at its period of 20.
pub fn gen_artificial4() -> Instance {
    build_one_station(&artificial4_spec(), 20)
        .expect("the built-in four-line station is structurally sound")
}

/// Six lines at period 15 whose phases are long enough that some pairs wrap
/// around the period. Fixed waits of 5. The greedy pairing reaches weight 38
/// but no schedule realizes it; the best schedulable total is 35 and the
/// best single tour reaches 34.
pub fn example_hp_spec() -> OneStationSpec {
    OneStationSpec::new(&[12, 8, 6, 7, 5, 2], &[8, 12, 7, 6, 2, 3], &[(5, 5); 6])
}

/// [`example_hp_spec`] built at its period of 15. Deliberately breaches the
/// per-pair phase budget, so `validate` reports its energy arcs; the
/// matching-level algorithms still run.
pub fn gen_example_hp() -> Instance {
    build_one_station(&example_hp_spec(), 15)
        .expect("the built-in six-line station is structurally sound")
}

/// Seeded random one-station instance. Identical parameters always produce
/// byte-identical instances.
///
/// Phases are drawn from `time_range`, wait lower bounds from `wait_range`
/// (uppers within the same range, except `free` mode which widens every
/// wait to a full period), wait weights from `0..=5`, and up to two
/// transfers between distinct lines. One instance in three restricts the
/// energy grid to a random pair subset. The period must exceed twice the
/// largest drawable phase time so every pairing fits inside one period.
pub fn gen_random(
    seed: u64,
    lines: usize,
    period: i64,
    time_range: (i64, i64),
    wait_range: (i64, i64),
    mode: GenMode,
) -> Result<Instance, GenError> {
    if lines == 0 {
        return Err(GenError::NoLines);
    }
    let (time_low, time_high) = time_range;
    if time_low < 1 || time_low > time_high {
        return Err(GenError::BadTimeRange {
            low: time_low,
            high: time_high,
        });
    }
    let (wait_low, wait_high) = wait_range;
    if wait_low < 0 || wait_low > wait_high {
        return Err(GenError::BadWaitRange {
            low: wait_low,
            high: wait_high,
        });
    }
    let minimum = 2 * time_high + 1;
    if period < minimum {
        return Err(GenError::PeriodTooSmall { period, minimum });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut accel: Vec<i64> = (0..lines)
        .map(|_| rng.gen_range(time_low..=time_high))
        .collect();
    let mut brake: Vec<i64> = (0..lines)
        .map(|_| rng.gen_range(time_low..=time_high))
        .collect();
    match mode {
        GenMode::Free | GenMode::Bounded => {}
        GenMode::EqualTimes => brake.copy_from_slice(&accel),
        GenMode::UniformAc => {
            let shared = accel[0];
            accel.fill(shared);
        }
    }
    let wait_bounds: Vec<(i64, i64)> = (0..lines)
        .map(|_| {
            let low = rng.gen_range(wait_low..=wait_high);
            if mode == GenMode::Free {
                (low, low + period - 1)
            } else {
                (low, rng.gen_range(low..=wait_high.max(low)))
            }
        })
        .collect();

    let mut spec = OneStationSpec::new(&accel, &brake, &wait_bounds);
    spec.wait_weights = (0..lines)
        .map(|_| Weight::from_integer(rng.gen_range(0..=5)))
        .collect();
    if lines >= 2 {
        for _ in 0..rng.gen_range(0..=2) {
            let from_line = rng.gen_range(0..lines);
            let to_line = rng.gen_range(0..lines);
            let duplicate = spec
                .transfers
                .iter()
                .any(|t| t.from_line == from_line && t.to_line == to_line);
            if from_line == to_line || duplicate {
                continue;
            }
            spec.transfers.push(TransferSpec {
                from_line,
                to_line,
                lower: rng.gen_range(1..=3),
                weight: Weight::from_integer(rng.gen_range(1..=5)),
            });
        }
    }
    if rng.gen_range(0..3) == 0 {
        let mut pairs = Vec::new();
        for dep in 0..lines {
            for arr in 0..lines {
                if rng.gen_bool(0.5) {
                    pairs.push((dep, arr));
                }
            }
        }
        spec.energy = EnergyTopology::Explicit(pairs);
    }

    let instance = build_one_station(&spec, period)
        .expect("drawn parameters satisfy the builder's structural rules");
    Ok(instance)
}

// ---------------------------------------------------------------------------
// Trade-off CSV.
// ---------------------------------------------------------------------------

/// Stable 64-bit fingerprint of a timetable: FNV-1a over its canonical
/// `event=time;` rendering in event-id order. Lets CSV consumers tell
/// whether two sweep points reuse one schedule without embedding the
/// schedule itself.
fn timetable_id(timetable: &Timetable) -> u64 {
    let mut bytes = Vec::new();
    for (event, time) in timetable.iter() {
        bytes.extend_from_slice(event.as_str().as_bytes());
        bytes.push(b'=');
        bytes.extend_from_slice(time.to_string().as_bytes());
        bytes.push(b';');
    }
    bytes
        .iter()
        .fold(0xcbf2_9ce4_8422_2325_u64, |hash, &byte| {
            (hash ^ u64::from(byte)).wrapping_mul(0x0000_0100_0000_01b3)
        })
}

/// Renders a trade-off front as CSV with columns
/// `overlap,travel_time,timetable_id`, one row per undominated point in
/// ascending overlap order.
pub fn pareto_csv(front: &ParetoFront) -> String {
    let mut out = String::from("overlap,travel_time,timetable_id\n");
    for point in &front.points {
        out.push_str(&format!(
            "{},{},{:016x}\n",
            point.overlap,
            point.travel_time,
            timetable_id(&point.witness.timetable)
        ));
    }
    out
}

// ---------------------------------------------------------------------------
// Command-line surface.
// ---------------------------------------------------------------------------

/// Periodic timetables that recover braking energy.
#[derive(Debug, Parser)]
#[command(name = "brakesync", version, about)]
pub struct Command {
    #[command(subcommand)]
    pub verb: Verb,
}

#[derive(Debug, Subcommand)]
pub enum Verb {
    /// Check an instance file and list every modelling violation.
    Validate {
        /// Instance file (JSON).
        input: PathBuf,
    },
    /// Optimize one objective, optionally under an overlap floor.
    Solve {
        /// Instance file (JSON).
        input: PathBuf,
        /// Which objective to optimize.
        #[arg(long, value_enum, default_value_t = ObjectiveArg::MinTravel)]
        objective: ObjectiveArg,
        /// Only consider schedules with at least this much total overlap.
        #[arg(long, default_value_t = 0)]
        min_overlap: i64,
        /// `auto` routes pure overlap maximization through the
        /// single-station dispatcher; `exact` always runs the general
        /// search.
        #[arg(long, value_enum, default_value_t = SolveMethodArg::Auto)]
        method: SolveMethodArg,
        /// Stop the search after this many seconds.
        #[arg(long, value_name = "SECONDS", value_parser = parse_seconds)]
        time_limit: Option<f64>,
        /// Write the resulting schedule to this file (JSON).
        #[arg(long, short = 'o')]
        output: Option<PathBuf>,
    },
    /// Run one single-station energy algorithm and show its pairing.
    Energy {
        /// Instance file (JSON).
        input: PathBuf,
        /// Which algorithm to run; `auto` picks the strongest applicable.
        #[arg(long, value_enum, default_value_t = EnergyMethodArg::Auto)]
        method: EnergyMethodArg,
        /// Write the resulting schedule to this file (JSON).
        #[arg(long, short = 'o')]
        output: Option<PathBuf>,
    },
    /// Sweep the overlap floor and write the travel/overlap trade-off.
    Pareto {
        /// Instance file (JSON).
        input: PathBuf,
        /// Write the CSV here instead of standard output.
        #[arg(long, short = 'o')]
        output: Option<PathBuf>,
    },
    /// Write a built-in example station or a seeded random instance.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Render the solve as a mixed-integer program in LP format.
    ExportLp {
        /// Instance file (JSON).
        input: PathBuf,
        /// Which objective the program should carry.
        #[arg(long, value_enum, default_value_t = ObjectiveArg::MinTravel)]
        objective: ObjectiveArg,
        /// Only consider schedules with at least this much total overlap.
        #[arg(long, default_value_t = 0)]
        min_overlap: i64,
        /// Write the LP text here instead of standard output.
        #[arg(long, short = 'o')]
        output: Option<PathBuf>,
    },
    /// Solve by exhaustive enumeration; refuses instances beyond its
    /// guard rails.
    Oracle {
        /// Instance file (JSON).
        input: PathBuf,
        /// Which objective to optimize.
        #[arg(long, value_enum, default_value_t = ObjectiveArg::MinTravel)]
        objective: ObjectiveArg,
        /// Only consider schedules with at least this much total overlap.
        #[arg(long, default_value_t = 0)]
        min_overlap: i64,
        /// Write the resulting schedule to this file (JSON).
        #[arg(long, short = 'o')]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum GenKind {
    /// The four-line station behind the worked trade-off curve.
    #[command(name = "artificial4")]
    Artificial4 {
        /// Write the instance here instead of standard output.
        #[arg(long, short = 'o')]
        output: Option<PathBuf>,
    },
    /// The six-line station whose greedy pairing overshoots the optimum.
    #[command(name = "example-hp")]
    ExampleHp {
        /// Write the instance here instead of standard output.
        #[arg(long, short = 'o')]
        output: Option<PathBuf>,
    },
    /// A seeded random station; identical flags reproduce identical bytes.
    Random {
        /// Random seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of lines.
        #[arg(long, default_value_t = 3)]
        lines: usize,
        /// Timetable period.
        #[arg(long, default_value_t = 12)]
        period: i64,
        /// Range `low..high` the phase times are drawn from.
        #[arg(long, value_parser = parse_range, default_value = "1..5")]
        time_range: (i64, i64),
        /// Range `low..high` the wait bounds are drawn from.
        #[arg(long, value_parser = parse_range, default_value = "0..4")]
        wait_range: (i64, i64),
        /// Shape of the drawn phases and waits.
        #[arg(long, value_enum, default_value_t = GenMode::Bounded)]
        mode: GenMode,
        /// Write the instance here instead of standard output.
        #[arg(long, short = 'o')]
        output: Option<PathBuf>,
    },
}

/// Objective selector shared by `solve`, `export-lp`, and `oracle`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    /// Minimize total weighted travel time.
    MinTravel,
    /// Maximize total brake–traction overlap.
    MaxOverlap,
}

impl ObjectiveArg {
    fn to_core(self) -> Objective {
        match self {
            ObjectiveArg::MinTravel => Objective::MinTravel,
            ObjectiveArg::MaxOverlap => Objective::MaxOverlap,
        }
    }
}

/// Method selector of `solve`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolveMethodArg {
    /// Dispatch single-station overlap questions, otherwise search exactly.
    Auto,
    /// Always run the general exact search.
    Exact,
}

/// Method selector of `energy`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EnergyMethodArg {
    /// Pick the strongest applicable method and report bounds.
    Auto,
    /// Exact optimum over all pairings and schedules.
    Exact,
    /// Dynamic program for lines that brake as long as they accelerate.
    Dp,
    /// Closed form for waits that span a full period.
    Free,
    /// One tour in line order when one side's phases are uniform.
    Uniform,
    /// Heaviest tour opened into a chain when the period dwarfs the station.
    LargePeriod,
    /// Pairing-merge heuristic with a proven additive gap.
    Merge,
    /// Best single tour through every line.
    Hamiltonian,
}

fn parse_range(text: &str) -> Result<(i64, i64), String> {
    let Some((low, high)) = text.split_once("..") else {
        return Err(format!("expected low..high, got {text:?}"));
    };
    let low = low
        .trim()
        .parse::<i64>()
        .map_err(|e| format!("bad lower bound {low:?}: {e}"))?;
    let high = high
        .trim()
        .parse::<i64>()
        .map_err(|e| format!("bad upper bound {high:?}: {e}"))?;
    Ok((low, high))
}

fn parse_seconds(text: &str) -> Result<f64, String> {
    let seconds = text
        .parse::<f64>()
        .map_err(|e| format!("bad duration {text:?}: {e}"))?;
    if !seconds.is_finite() || seconds <= 0.0 {
        return Err(format!("time limit must be a positive number of seconds, got {text:?}"));
    }
    Ok(seconds)
}

// ---------------------------------------------------------------------------
// Verb runners.
// ---------------------------------------------------------------------------

/// Executes one parsed command and returns the process exit code: 0 ok,
/// 1 parse/validation/usage problem, 2 infeasible, 3 limit reached.
pub fn run(command: Command) -> i32 {
    match command.verb {
        Verb::Validate { input } => run_validate(&input),
        Verb::Solve {
            input,
            objective,
            min_overlap,
            method,
            time_limit,
            output,
        } => run_solve(&input, objective, min_overlap, method, time_limit, output.as_ref()),
        Verb::Energy {
            input,
            method,
            output,
        } => run_energy(&input, method, output.as_ref()),
        Verb::Pareto { input, output } => run_pareto(&input, output.as_ref()),
        Verb::Gen { kind } => run_gen(kind),
        Verb::ExportLp {
            input,
            objective,
            min_overlap,
            output,
        } => run_export_lp(&input, objective, min_overlap, output.as_ref()),
        Verb::Oracle {
            input,
            objective,
            min_overlap,
            output,
        } => run_oracle(&input, objective, min_overlap, output.as_ref()),
    }
}

fn load_instance(path: &Path) -> Result<Instance, i32> {
    read_instance(path).map_err(|err| {
        eprintln!("error: {err}");
        1
    })
}

fn emit_text(text: &str, output: Option<&PathBuf>) -> i32 {
    match output {
        Some(path) => {
            if let Err(err) = fs::write(path, text) {
                eprintln!("error: cannot write {}: {err}", path.display());
                return 1;
            }
            0
        }
        None => {
            print!("{text}");
            0
        }
    }
}

fn emit_instance(instance: &Instance, output: Option<&PathBuf>) -> i32 {
    match output {
        Some(path) => {
            if let Err(err) = write_instance(path, instance) {
                eprintln!("error: {err}");
                return 1;
            }
            0
        }
        None => {
            print!("{}", instance_to_string(instance));
            0
        }
    }
}

fn emit_solution(solution: &Solution, output: Option<&PathBuf>) -> i32 {
    let Some(path) = output else {
        return 0;
    };
    match write_solution(path, solution) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            1
        }
    }
}

fn report_solve_error(err: &SolveError) -> i32 {
    eprintln!("error: {err}");
    if let SolveError::Invalid(violations) = err {
        for violation in violations {
            eprintln!("  {}: {}", violation.element, violation.rule);
        }
    }
    1
}

fn print_solution_lines(solution: &Solution) {
    println!("travel time: {}", solution.travel_time);
    println!("total overlap: {}", solution.total_overlap);
}

fn finish_solve(result: SolveResult, output: Option<&PathBuf>) -> i32 {
    println!("status: {}", result.status);
    if result.status == SolveStatus::LimitReached {
        if let Some(bound) = &result.bound {
            println!("bound: {bound}");
        }
    }
    if let Some(solution) = &result.solution {
        print_solution_lines(solution);
        let code = emit_solution(solution, output);
        if code != 0 {
            return code;
        }
    }
    println!("nodes: {}", result.nodes);
    match result.status {
        SolveStatus::Optimal => 0,
        SolveStatus::Infeasible => 2,
        SolveStatus::LimitReached => 3,
    }
}

fn run_validate(input: &Path) -> i32 {
    let instance = match load_instance(input) {
        Ok(instance) => instance,
        Err(code) => return code,
    };
    let violations = validate_instance(&instance);
    if violations.is_empty() {
        println!("ok");
        return 0;
    }
    for violation in &violations {
        println!("{}: {}", violation.element, violation.rule);
    }
    1
}

fn run_solve(
    input: &Path,
    objective: ObjectiveArg,
    min_overlap: i64,
    method: SolveMethodArg,
    time_limit: Option<f64>,
    output: Option<&PathBuf>,
) -> i32 {
    let instance = match load_instance(input) {
        Ok(instance) => instance,
        Err(code) => return code,
    };
    let wants_dispatch = method == SolveMethodArg::Auto
        && objective == ObjectiveArg::MaxOverlap
        && min_overlap == 0
        && time_limit.is_none();
    if wants_dispatch {
        // Route pure overlap maximization through the single-station
        // dispatcher; anything it cannot digest falls back to the general
        // search below.
        if let Ok(done) = dispatch(&instance) {
            println!("method: {}", done.method);
            if done.lower_bound == done.upper_bound {
                println!("status: optimal");
            } else {
                println!("overlap bounds: [{}, {}]", done.lower_bound, done.upper_bound);
            }
            print_solution_lines(&done.solution);
            return emit_solution(&done.solution, output);
        }
    }
    let mut request =
        SolveRequest::new(instance, objective.to_core()).with_overlap_floor(min_overlap);
    if let Some(seconds) = time_limit {
        request = request.with_time_limit(Duration::from_secs_f64(seconds));
    }
    match solve_exact(&request) {
        Ok(result) => finish_solve(result, output),
        Err(err) => report_solve_error(&err),
    }
}

fn run_energy(input: &Path, method: EnergyMethodArg, output: Option<&PathBuf>) -> i32 {
    let instance = match load_instance(input) {
        Ok(instance) => instance,
        Err(code) => return code,
    };
    type Outcome = Result<(String, Option<(i64, i64)>, Solution), OneStationError>;
    let outcome: Outcome = match method {
        EnergyMethodArg::Auto => dispatch(&instance).map(|done| {
            (
                done.method.to_string(),
                Some((done.lower_bound, done.upper_bound)),
                done.solution,
            )
        }),
        EnergyMethodArg::Exact => exact_overlap_optimum(&instance)
            .map(|best| ("exact".to_string(), Some((best.value, best.value)), best.solution)),
        EnergyMethodArg::Dp => {
            solve_equal_times_dp(&instance).map(|s| ("equal-times-dp".to_string(), None, s))
        }
        EnergyMethodArg::Free => {
            solve_free_waiting(&instance).map(|s| ("free-waiting".to_string(), None, s))
        }
        EnergyMethodArg::Uniform => {
            solve_uniform_times(&instance).map(|s| ("uniform-times".to_string(), None, s))
        }
        EnergyMethodArg::LargePeriod => {
            solve_large_period(&instance).map(|s| ("large-period".to_string(), None, s))
        }
        EnergyMethodArg::Merge => solve_merge(&instance).map(|s| ("merge".to_string(), None, s)),
        EnergyMethodArg::Hamiltonian => {
            solve_single_cycle(&instance).map(|s| ("single-cycle".to_string(), None, s))
        }
    };
    match outcome {
        Ok((name, bounds, solution)) => {
            println!("method: {name}");
            if let Some((low, high)) = bounds {
                println!("overlap bounds: [{low}, {high}]");
            }
            println!("total overlap: {}", solution.total_overlap);
            for (activity, overlap) in &solution.overlaps {
                let tension = solution.tensions.get(activity).copied().unwrap_or(0);
                println!("{}: tension {tension}, overlap {overlap}", activity.as_str());
            }
            emit_solution(&solution, output)
        }
        Err(err) => {
            eprintln!("error: {err}");
            1
        }
    }
}

fn run_pareto(input: &Path, output: Option<&PathBuf>) -> i32 {
    let instance = match load_instance(input) {
        Ok(instance) => instance,
        Err(code) => return code,
    };
    match enumerate_front(&instance, |request| solve_exact(&request)) {
        Ok(front) => emit_text(&pareto_csv(&front), output),
        Err(ParetoError::Solve(err)) => report_solve_error(&err),
        Err(err @ ParetoError::Unsolved { status, .. }) => {
            eprintln!("error: {err}");
            match status {
                SolveStatus::Infeasible => 2,
                SolveStatus::LimitReached => 3,
                SolveStatus::Optimal => 1,
            }
        }
    }
}

fn run_gen(kind: GenKind) -> i32 {
    match kind {
        GenKind::Artificial4 { output } => emit_instance(&gen_artificial4(), output.as_ref()),
        GenKind::ExampleHp { output } => emit_instance(&gen_example_hp(), output.as_ref()),
        GenKind::Random {
            seed,
            lines,
            period,
            time_range,
            wait_range,
            mode,
            output,
        } => match gen_random(seed, lines, period, time_range, wait_range, mode) {
            Ok(instance) => emit_instance(&instance, output.as_ref()),
            Err(err) => {
                eprintln!("error: {err}");
                1
            }
        },
    }
}

fn run_export_lp(
    input: &Path,
    objective: ObjectiveArg,
    min_overlap: i64,
    output: Option<&PathBuf>,
) -> i32 {
    let instance = match load_instance(input) {
        Ok(instance) => instance,
        Err(code) => return code,
    };
    let request =
        SolveRequest::new(instance, objective.to_core()).with_overlap_floor(min_overlap);
    match export_lp(&request) {
        Ok(export) => emit_text(&export.text, output),
        Err(err) => report_solve_error(&err),
    }
}

fn run_oracle(
    input: &Path,
    objective: ObjectiveArg,
    min_overlap: i64,
    output: Option<&PathBuf>,
) -> i32 {
    let instance = match load_instance(input) {
        Ok(instance) => instance,
        Err(code) => return code,
    };
    let request =
        SolveRequest::new(instance, objective.to_core()).with_overlap_floor(min_overlap);
    match brute_force(&request) {
        Ok(result) => finish_solve(result, output),
        Err(err) => report_solve_error(&err),
    }
}
