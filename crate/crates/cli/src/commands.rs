use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args};
use hadamard_core::circuit::{
    circuit_unitary, fig1a_circuit, h4, h4_theta, is_complex_hadamard, physical_unitary, reck_decompose, recompose,
    CircuitElement, ModeCircuit,
};
use hadamard_core::experiment::{
    analyze_fringes, analyze_singles, fmt_g, pair_label, simulate_sweep, write_fits, write_fringes, write_rse,
    write_singles, LIVE_PAIRS,
};
use hadamard_core::matrix_io::{format_matrix, parse_matrix};
use hadamard_core::polarization::{
    geometric_phase_report, rail_composite, wrap_angle, GeometricPhaseReport, JonesVector, Rail, RailProgram,
};
use hadamard_core::{ComplexMatrix, Error, Tolerance};
use serde::Serialize;

use crate::config::SweepFile;
use crate::error::{CliError, CliResult};
use crate::output::RunOutputs;

/// Files to write plus the text printed on success.
pub type Run = (RunOutputs, String);

fn load_config(path: Option<&Path>) -> CliResult<SweepFile> {
    let path = path.ok_or_else(|| CliError::config("this command needs --config <path>"))?;
    SweepFile::load(path)
}

pub fn fringe_sweep(config: Option<&Path>, seed: Option<u64>) -> CliResult<Run> {
    let config = load_config(config)?.resolve(seed)?;
    let records = simulate_sweep(&config)?;
    let analysis = analyze_fringes(&records, config.accidental_rate)?;

    let mut fringes = Vec::new();
    write_fringes(&mut fringes, &records)?;
    let mut fits = Vec::new();
    write_fits(&mut fits, &analysis)?;
    let mut out = RunOutputs::new("fringe-sweep", Some(config.seed), SweepFile::resolved(&config));
    out.add("fringes.csv", fringes);
    out.add("fit.csv", fits);

    let mut text = format!("{} grid points, seed {}\n", records.len(), config.seed);
    text.push_str("pair  visibility      amplitude       offset\n");
    for pf in &analysis.fits {
        let live = if LIVE_PAIRS.contains(&pf.pair) { "" } else { "  (suppressed)" };
        writeln!(
            text,
            "{:<4}  {:<14}  {:<14}  {:<14}{live}",
            pair_label(pf.pair),
            fmt_g(pf.fit.visibility),
            fmt_g(pf.fit.amplitude),
            fmt_g(pf.fit.offset)
        )
        .unwrap();
    }
    writeln!(text, "mean live-pair visibility: {}", fmt_g(analysis.mean_live_visibility)).unwrap();
    Ok((out, text))
}

pub fn singles_sweep(config: Option<&Path>, seed: Option<u64>) -> CliResult<Run> {
    let config = load_config(config)?.resolve(seed)?;
    let records = simulate_sweep(&config)?;
    let analysis = analyze_singles(&records)?;

    let mut singles = Vec::new();
    write_singles(&mut singles, &records)?;
    let mut rse = Vec::new();
    write_rse(&mut rse, &analysis)?;
    let mut out = RunOutputs::new("singles-sweep", Some(config.seed), SweepFile::resolved(&config));
    out.add("singles.csv", singles);
    out.add("rse.csv", rse);

    let mut text = format!("{} grid points, seed {}\n", records.len(), config.seed);
    text.push_str("input  detector  mean counts     rse             amplitude fraction\n");
    for t in &analysis.traces {
        writeln!(
            text,
            "{:<5}  {:<8}  {:<14}  {:<14}  {}",
            t.input,
            t.detector,
            fmt_g(t.mean_counts),
            fmt_g(t.rse),
            fmt_g(t.amplitude_fraction)
        )
        .unwrap();
    }
    writeln!(text, "mean rse: {}", fmt_g(analysis.mean_rse)).unwrap();
    Ok((out, text))
}

#[derive(Args, Debug, Serialize)]
pub struct RailsArgs {
    /// First plate angle α in radians.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub alpha: f64,
    /// Number of α values in the table.
    #[arg(long, default_value_t = 1)]
    pub points: usize,
    /// Spacing between α values in radians.
    #[arg(long, default_value_t = PI / 64.0)]
    pub step: f64,
    /// Discretization of each plate when tracing paths on the sphere.
    #[arg(long, default_value_t = hadamard_core::polarization::DEFAULT_STEPS_PER_PLATE)]
    pub steps_per_plate: usize,
}

const NEGLIGIBLE: f64 = 1e-12;

fn entry_arg(u: &ComplexMatrix, i: usize, j: usize) -> Option<f64> {
    let z = u.get(i, j);
    (z.norm() > NEGLIGIBLE).then(|| z.arg())
}

fn opt_g(x: Option<f64>) -> String {
    x.map(fmt_g).unwrap_or_default()
}

/// Reduces a solid-angle difference into `(−2π, 2π]`.
fn wrap_solid(x: f64) -> f64 {
    let r = x.rem_euclid(2.0 * TAU);
    if r > TAU {
        r - 2.0 * TAU
    } else {
        r
    }
}

struct RailRow {
    u: ComplexMatrix,
    report: GeometricPhaseReport,
}

fn rail_row(rail: Rail, alpha: f64, steps: usize) -> CliResult<RailRow> {
    let prog = RailProgram::preset(rail);
    Ok(RailRow {
        u: rail_composite(&prog, alpha)?,
        report: geometric_phase_report(&prog, JonesVector::vertical(), alpha, steps)?,
    })
}

/// Rail unitaries and geometric-phase reports, with each quantity also given
/// relative to its value at `α = 0`.
pub fn rails(args: &RailsArgs) -> CliResult<Run> {
    if args.points == 0 || args.steps_per_plate == 0 {
        return Err(CliError::config("--points and --steps-per-plate must be positive"));
    }
    if !(args.alpha.is_finite() && args.step.is_finite()) {
        return Err(CliError::config("--alpha and --step must be finite"));
    }
    let reference: Vec<RailRow> =
        Rail::ALL.iter().map(|&r| rail_row(r, 0.0, args.steps_per_plate)).collect::<CliResult<_>>()?;

    let mut csv = String::from(
        "alpha_rad,rail,u01_arg_rad,u10_arg_rad,d_u01_rad,d_u10_rad,pancharatnam_rad,solid_angle_sr,\
         d_pancharatnam_rad,d_solid_angle_sr,transport_residual\n",
    );
    let mut text = String::new();
    for k in 0..args.points {
        let alpha = args.alpha + args.step * k as f64;
        for (rail, base) in Rail::ALL.into_iter().zip(&reference) {
            let row = rail_row(rail, alpha, args.steps_per_plate)?;
            let rel = |i, j| Some(wrap_angle(entry_arg(&row.u, i, j)? - entry_arg(&base.u, i, j)?));
            let rep = row.report;
            let d_gamma = wrap_angle(rep.pancharatnam - base.report.pancharatnam);
            let d_omega = wrap_solid(rep.solid_angle - base.report.solid_angle);
            writeln!(
                csv,
                "{},{},{},{},{},{},{},{},{},{},{}",
                fmt_g(alpha),
                rail.name(),
                opt_g(entry_arg(&row.u, 0, 1)),
                opt_g(entry_arg(&row.u, 1, 0)),
                opt_g(rel(0, 1)),
                opt_g(rel(1, 0)),
                fmt_g(rep.pancharatnam),
                fmt_g(rep.solid_angle),
                fmt_g(d_gamma),
                fmt_g(d_omega),
                fmt_g(rep.dynamical_residual)
            )
            .unwrap();
            if args.points == 1 {
                writeln!(text, "U_{} at alpha = {}:\n{:.6}", rail.name(), fmt_g(alpha), row.u).unwrap();
                writeln!(
                    text,
                    "  pancharatnam {}  solid angle {}  residual {}  orthogonal endpoints {}",
                    fmt_g(rep.pancharatnam),
                    fmt_g(rep.solid_angle),
                    fmt_g(rep.dynamical_residual),
                    rep.orthogonal_endpoints
                )
                .unwrap();
                writeln!(
                    text,
                    "  relative to alpha = 0: off-diagonal phases {} / {}  pancharatnam {}  solid angle {}\n",
                    opt_g(rel(0, 1)),
                    opt_g(rel(1, 0)),
                    fmt_g(d_gamma),
                    fmt_g(d_omega)
                )
                .unwrap();
            }
        }
    }
    if args.points > 1 {
        text.push_str(&csv);
    }
    let mut out = RunOutputs::new("rails", None, args);
    out.add("rails.csv", csv.into_bytes());
    Ok((out, text))
}

#[derive(Args, Debug, Serialize)]
pub struct DecomposeArgs {
    /// Matrix file: the dimension n, then n rows of n `re,im` entries.
    pub matrix: PathBuf,
    /// Unitarity tolerance.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Serialize)]
struct PlanReport<'a> {
    modes: usize,
    beamsplitters: usize,
    elements: &'a [CircuitElement],
    residual_phases: &'a [f64],
    round_trip_error: f64,
}

fn describe(e: &CircuitElement) -> String {
    match *e {
        CircuitElement::Beamsplitter { a, b, r } => format!("bs     modes {a},{b}  r = {}", fmt_g(r)),
        CircuitElement::Phase { mode, phi } => format!("phase  mode {mode}  phi = {}", fmt_g(phi)),
        CircuitElement::Swap { a, b } => format!("swap   modes {a},{b}"),
    }
}

pub fn decompose(args: &DecomposeArgs) -> CliResult<Run> {
    let tol = Tolerance::new(args.tol).map_err(|e| CliError::config(e.to_string()))?;
    let text = std::fs::read_to_string(&args.matrix)
        .map_err(|e| CliError::config(format!("cannot read matrix {}: {e}", args.matrix.display())))?;
    let u = parse_matrix(&text).map_err(|e| CliError::config(format!("{}: {e}", args.matrix.display())))?;
    let plan = reck_decompose(&u, tol).map_err(|e| match e {
        Error::Domain(msg) => CliError::config(format!("{}: {msg}", args.matrix.display())),
        other => CliError::Numerical(other),
    })?;
    let error = recompose(&plan)?.max_abs_diff(&u)?;

    let report = PlanReport {
        modes: plan.modes,
        beamsplitters: plan.beamsplitter_count(),
        elements: &plan.elements,
        residual_phases: &plan.residual_phases,
        round_trip_error: error,
    };
    let mut json = serde_json::to_vec_pretty(&report).expect("plan serializes");
    json.push(b'\n');
    let mut out = RunOutputs::new("decompose", None, args);
    out.add("plan.json", json);

    let mut text = format!("{} modes, {} beamsplitters\n", plan.modes, plan.beamsplitter_count());
    if plan.elements.is_empty() {
        text.push_str("empty plan\n");
    }
    for e in &plan.elements {
        writeln!(text, "  {}", describe(e)).unwrap();
    }
    let phases: Vec<String> = plan.residual_phases.iter().map(|&p| fmt_g(p)).collect();
    writeln!(text, "residual phases: {}", phases.join(" ")).unwrap();
    writeln!(text, "round-trip error: {}", fmt_g(error)).unwrap();
    Ok((out, text))
}

#[derive(Args, Debug, Serialize)]
#[command(group(ArgGroup::new("source").required(true)))]
pub struct CircuitArgs {
    /// The 4-mode Hadamard family member with phase θ.
    #[arg(long, group = "source", allow_negative_numbers = true)]
    pub h4: Option<f64>,
    /// The loop-free 4-mode mesh with internal phase θ.
    #[arg(long, group = "source", allow_negative_numbers = true)]
    pub mesh: Option<f64>,
    /// The polarization network at plate angle α.
    #[arg(long, group = "source", allow_negative_numbers = true)]
    pub physical: Option<f64>,
    /// A JSON circuit `{"modes": n, "elements": [...]}`.
    #[arg(long, group = "source")]
    pub file: Option<PathBuf>,
}

fn load_circuit(path: &Path) -> CliResult<ModeCircuit> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read circuit {}: {e}", path.display())))?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    let c: ModeCircuit = serde_path_to_error::deserialize(de)
        .map_err(|e| CliError::config(format!("{}: field `{}`: {}", path.display(), e.path(), e.inner())))?;
    c.validate().map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
    Ok(c)
}

/// Builds a transfer matrix and exports it in the `decompose` file format.
pub fn circuit(args: &CircuitArgs) -> CliResult<Run> {
    let u = match (args.h4, args.mesh, args.physical, &args.file) {
        (Some(t), ..) => h4(t),
        (_, Some(t), ..) => circuit_unitary(&fig1a_circuit(t))?,
        (_, _, Some(a), _) => physical_unitary(a, [0.0; 3]),
        (.., Some(path)) => circuit_unitary(&load_circuit(path)?)?,
        _ => return Err(CliError::config("choose one of --h4, --mesh, --physical, --file")),
    };
    let mut text = format!("{u:.6}");
    let hadamard = is_complex_hadamard(&u, Tolerance::DEFAULT)?;
    writeln!(text, "complex Hadamard: {hadamard}").unwrap();
    if hadamard && u.rows() == 4 {
        writeln!(text, "theta: {}", fmt_g(h4_theta(&u)?)).unwrap();
    }
    let mut out = RunOutputs::new("circuit", None, args);
    out.add("unitary.txt", format_matrix(&u)?.into_bytes());
    Ok((out, text))
}
