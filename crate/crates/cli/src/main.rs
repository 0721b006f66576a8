//! Command-line frontend. Subcommands:
//!
//! - `controls`: tabulate the closed-form controls u1..u5, U, H, W.
//! - `geodesic`: integrate the geodesic and tabulate pose + controls + rho.
//! - `case-info`: print the case classification and derived constants.
//! - `check`: compare closed forms against the RK4 oracle and measure
//!   invariant drift; nonzero exit if the tolerance is exceeded.
//! - `sweep`: integrate a family of geodesics over one momentum component.
//!
//! Exit codes: 0 ok, 2 usage error, 3 unsupported (u6 != 0), 4 chart
//! singularity, 5 tolerance exceeded.

use clap::{Args, Parser, Subcommand};
use se3sr_core::{
    check_invariants, classify, eval_controls, first_integrals, integrate_geodesic,
    integrate_vertical, Backend, CaseParams, Error as CoreError, InitialMomentum, Trajectory,
};
use serde_json::json;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "se3sr", version, about = "Extremal controls and geodesics of the sub-Riemannian structure on SE(3) (u6 = 0 slice)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the closed-form extremal controls at equally spaced times
    Controls(RunArgs),
    /// Integrate the geodesic and tabulate pose, controls and rho invariants
    Geodesic(RunArgs),
    /// Print the case tag and all derived constants as JSON
    CaseInfo(MomentumArg),
    /// Closed-form vs oracle comparison plus invariant drift report
    Check(CheckArgs),
    /// One geodesic per value of a swept momentum component, plus a manifest
    Sweep(SweepArgs),
}

#[derive(Args)]
struct MomentumArg {
    /// Initial momentum as u1,u2,u3,u4,u5 (a sixth component is rejected
    /// unless it is exactly 0)
    #[arg(long, value_name = "U1,..,U5", allow_hyphen_values = true)]
    u0: String,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    momentum: MomentumArg,

    /// End of the time interval [0, t1]
    #[arg(long, default_value_t = 1.0)]
    t1: f64,

    /// Number of equally spaced output samples (including t = 0 and t = t1)
    #[arg(long, default_value_t = 200)]
    samples: usize,

    /// Orientation representation used by the integrator
    #[arg(long, default_value = "matrix", value_parser = ["angles", "matrix"])]
    backend: String,

    /// Output format
    #[arg(long, default_value = "csv", value_parser = ["csv", "json"])]
    format: String,

    /// Output path (standard output when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    momentum: MomentumArg,

    #[arg(long, default_value_t = 10.0)]
    t1: f64,

    /// Output samples for the geodesic leg of the check
    #[arg(long, default_value_t = 101)]
    samples: usize,

    #[arg(long, default_value = "matrix", value_parser = ["angles", "matrix"])]
    backend: String,

    /// Largest acceptable deviation; exceeded means exit code 5
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,

    /// RK4 oracle density
    #[arg(long, default_value_t = 10_000)]
    steps_per_unit: usize,
}

#[derive(Args)]
struct SweepArgs {
    /// Fixed momentum components; the swept one is overwritten
    #[command(flatten)]
    momentum: MomentumArg,

    /// Which component to sweep (1..=5)
    #[arg(long)]
    component: usize,

    #[arg(long, allow_hyphen_values = true)]
    start: f64,

    #[arg(long, allow_hyphen_values = true)]
    stop: f64,

    /// Number of swept values (count = 1 emits a single geodesic at `start`)
    #[arg(long)]
    count: usize,

    #[arg(long, default_value_t = 1.0)]
    t1: f64,

    #[arg(long, default_value_t = 200)]
    samples: usize,

    #[arg(long, default_value = "matrix", value_parser = ["angles", "matrix"])]
    backend: String,

    #[arg(long, default_value = "csv", value_parser = ["csv", "json"])]
    format: String,

    /// Output directory (required: one file per swept value plus manifest.json)
    #[arg(long)]
    out: PathBuf,
}

enum CliError {
    Usage(String),
    UnsupportedU6(f64),
    Singularity(String),
    Tolerance,
    Io(io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::UnsupportedU6(_) => 3,
            CliError::Singularity(_) => 4,
            CliError::Tolerance => 5,
            CliError::Io(_) => 1,
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::ChartSingularity(_) | CoreError::ChartSingularityAt { .. } => {
                CliError::Singularity(e.to_string())
            }
            CoreError::NonzeroU6(v) => CliError::UnsupportedU6(v),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::UnsupportedU6(v) => {
                write!(f, "u6 = {v} is not supported; only the u6 = 0 slice is implemented")
            }
            CliError::Singularity(msg) => write!(f, "{msg}"),
            CliError::Tolerance => write!(f, "tolerance exceeded"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Controls(args) => cmd_controls(args),
        Command::Geodesic(args) => cmd_geodesic(args),
        Command::CaseInfo(args) => cmd_case_info(args),
        Command::Check(args) => cmd_check(args),
        Command::Sweep(args) => cmd_sweep(args),
    }
}

fn parse_momentum(spec: &str) -> Result<InitialMomentum, CliError> {
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.len() != 5 && parts.len() != 6 {
        return Err(CliError::Usage(format!(
            "--u0 needs 5 comma-separated components (got {})",
            parts.len()
        )));
    }
    let mut values = [0.0_f64; 6];
    for (slot, part) in values.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse::<f64>()
            .map_err(|_| CliError::Usage(format!("invalid momentum component '{part}'")))?;
    }
    if parts.len() == 6 && values[5] != 0.0 {
        return Err(CliError::UnsupportedU6(values[5]));
    }
    let m = InitialMomentum::from_six(values)?;
    if !m.is_finite() {
        return Err(CliError::Usage("momentum components must be finite".into()));
    }
    Ok(m)
}

fn validate_run(t1: f64, samples: usize) -> Result<(), CliError> {
    if !t1.is_finite() || t1 <= 0.0 {
        return Err(CliError::Usage(format!("--t1 must be positive, got {t1}")));
    }
    if samples < 2 {
        return Err(CliError::Usage(format!(
            "--samples must be at least 2, got {samples}"
        )));
    }
    Ok(())
}

fn sample_times(t1: f64, samples: usize) -> impl Iterator<Item = f64> {
    let dt = t1 / (samples - 1) as f64;
    (0..samples).map(move |i| if i + 1 == samples { t1 } else { i as f64 * dt })
}

fn case_json(cp: &CaseParams) -> serde_json::Value {
    json!({
        "case": cp.tag.to_string(),
        "A": cp.a,
        "B": cp.b,
        "b": cp.sr_speed,
        "B1": cp.b1,
        "P": cp.p,
        "Q": cp.q,
        "k": cp.k,
        "p0": cp.p0,
        "psi0": cp.psi0,
        "V0": cp.v0,
    })
}

const CONTROL_COLUMNS: [&str; 9] = ["t", "u1", "u2", "u3", "u4", "u5", "U", "H", "W"];
const GEODESIC_COLUMNS: [&str; 15] = [
    "t", "x", "y", "z", "theta", "beta", "alpha", "u1", "u2", "u3", "u4", "u5", "rho1", "rho2",
    "rho3",
];

fn cmd_controls(args: RunArgs) -> Result<(), CliError> {
    validate_run(args.t1, args.samples)?;
    let m = parse_momentum(&args.momentum.u0)?;
    let cp = classify(&m);
    let rows: Vec<Vec<f64>> = sample_times(args.t1, args.samples)
        .map(|t| {
            let s = eval_controls(t, &cp, &m);
            let (h, w) = first_integrals(&s);
            vec![s.t, s.u1, s.u2, s.u3, s.u4, s.u5, s.u_int, h, w]
        })
        .collect();
    let meta = json!({
        "command": "controls",
        "u0": m.to_array(),
        "t1": args.t1,
        "samples": args.samples,
        "case_params": case_json(&cp),
    });
    emit(&args.out, &args.format, meta, &CONTROL_COLUMNS, &rows)
}

fn trajectory_rows(tr: &Trajectory) -> Vec<Vec<f64>> {
    tr.samples
        .iter()
        .zip(&tr.invariant_log)
        .map(|(s, inv)| {
            vec![
                s.controls.t,
                s.pose.x,
                s.pose.y,
                s.pose.z,
                s.pose.theta,
                s.pose.beta,
                s.pose.alpha,
                s.controls.u1,
                s.controls.u2,
                s.controls.u3,
                s.controls.u4,
                s.controls.u5,
                inv.rho1,
                inv.rho2,
                inv.rho3,
            ]
        })
        .collect()
}

fn cmd_geodesic(args: RunArgs) -> Result<(), CliError> {
    validate_run(args.t1, args.samples)?;
    let m = parse_momentum(&args.momentum.u0)?;
    let backend: Backend = args.backend.parse()?;
    let cp = classify(&m);
    let tr = integrate_geodesic(&m, args.t1, args.samples, backend)?;
    let meta = json!({
        "command": "geodesic",
        "u0": m.to_array(),
        "t1": args.t1,
        "samples": args.samples,
        "backend": args.backend,
        "case_params": case_json(&cp),
    });
    emit(&args.out, &args.format, meta, &GEODESIC_COLUMNS, &trajectory_rows(&tr))
}

fn cmd_case_info(args: MomentumArg) -> Result<(), CliError> {
    let m = parse_momentum(&args.u0)?;
    let cp = classify(&m);
    let mut report = case_json(&cp);
    report["u0"] = json!(m.to_array());
    report["H"] = json!(m.hamiltonian());
    println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    Ok(())
}

fn cmd_check(args: CheckArgs) -> Result<(), CliError> {
    validate_run(args.t1, args.samples)?;
    if !args.tol.is_finite() || args.tol <= 0.0 {
        return Err(CliError::Usage(format!(
            "--tol must be positive, got {}",
            args.tol
        )));
    }
    if args.steps_per_unit == 0 {
        return Err(CliError::Usage("--steps-per-unit must be at least 1".into()));
    }
    let m = parse_momentum(&args.momentum.u0)?;
    let backend: Backend = args.backend.parse()?;
    let cp = classify(&m);

    // closed form vs RK4 oracle
    let n_steps = ((args.steps_per_unit as f64 * args.t1).ceil() as usize).max(1);
    let states = integrate_vertical(&m, args.t1, n_steps)?;
    let stride = (n_steps / 1000).max(1);
    let mut dev_controls = 0.0_f64;
    let mut dev_u_int = 0.0_f64;
    for s in states.iter().step_by(stride) {
        let c = eval_controls(s.t, &cp, &m);
        for (closed, oracle) in [
            (c.u1, s.u[0]),
            (c.u2, s.u[1]),
            (c.u3, s.u[2]),
            (c.u4, s.u[3]),
            (c.u5, s.u[4]),
        ] {
            dev_controls = dev_controls.max((closed - oracle).abs());
        }
        dev_u_int = dev_u_int.max((c.u_int - s.u_int).abs());
    }

    // first-integral drift along the closed forms
    let (h0, w0) = first_integrals(&eval_controls(0.0, &cp, &m));
    let mut dev_h = 0.0_f64;
    let mut dev_w = 0.0_f64;
    for i in 0..=1000 {
        let t = args.t1 * i as f64 / 1000.0;
        let (h, w) = first_integrals(&eval_controls(t, &cp, &m));
        dev_h = dev_h.max((h - h0).abs());
        dev_w = dev_w.max((w - w0).abs());
    }

    // rho drift along the integrated geodesic
    let tr = integrate_geodesic(&m, args.t1, args.samples, backend)?;
    let drift = check_invariants(&tr);
    let dev_rho = drift.rho1.max(drift.rho2).max(drift.rho3);

    println!("case: {}", cp.tag);
    println!("max |closed-form u_i - RK4 u_i| = {dev_controls:.3e}");
    println!("max |closed-form U - RK4 U|     = {dev_u_int:.3e}");
    println!("max |H - H(0)|                  = {dev_h:.3e}");
    println!("max |W - W(0)|                  = {dev_w:.3e}");
    println!("max |rho_i - rho_i(0)|          = {dev_rho:.3e}");
    let worst = dev_controls.max(dev_u_int).max(dev_h).max(dev_w).max(dev_rho);
    if worst <= args.tol {
        println!("tolerance {:.1e}: PASS", args.tol);
        Ok(())
    } else {
        println!("tolerance {:.1e}: FAIL (worst deviation {worst:.3e})", args.tol);
        Err(CliError::Tolerance)
    }
}

fn cmd_sweep(args: SweepArgs) -> Result<(), CliError> {
    validate_run(args.t1, args.samples)?;
    if !(1..=5).contains(&args.component) {
        return Err(CliError::Usage(format!(
            "--component must be in 1..=5, got {}",
            args.component
        )));
    }
    if args.count == 0 {
        return Err(CliError::Usage("--count must be at least 1".into()));
    }
    if !args.start.is_finite() || !args.stop.is_finite() {
        return Err(CliError::Usage("--start/--stop must be finite".into()));
    }
    let base = parse_momentum(&args.momentum.u0)?;
    let backend: Backend = args.backend.parse()?;
    std::fs::create_dir_all(&args.out)?;

    let values: Vec<f64> = if args.count == 1 {
        vec![args.start]
    } else {
        (0..args.count)
            .map(|i| args.start + (args.stop - args.start) * i as f64 / (args.count - 1) as f64)
            .collect()
    };

    let mut entries = Vec::new();
    for (idx, &value) in values.iter().enumerate() {
        let mut u = base.to_array();
        u[args.component - 1] = value;
        let m = InitialMomentum::new(u[0], u[1], u[2], u[3], u[4]);
        let cp = classify(&m);
        let tr = integrate_geodesic(&m, args.t1, args.samples, backend)?;
        let file_name = format!("u{}_{idx:03}.{}", args.component, args.format);
        let meta = json!({
            "command": "sweep",
            "u0": m.to_array(),
            "t1": args.t1,
            "samples": args.samples,
            "backend": args.backend,
            "case_params": case_json(&cp),
        });
        emit(
            &Some(args.out.join(&file_name)),
            &args.format,
            meta,
            &GEODESIC_COLUMNS,
            &trajectory_rows(&tr),
        )?;
        entries.push(json!({
            "file": file_name,
            "value": value,
            "case": cp.tag.to_string(),
            "k": cp.k,
        }));
    }

    let manifest = json!({
        "component": format!("u{}", args.component),
        "count": args.count,
        "t1": args.t1,
        "samples": args.samples,
        "backend": args.backend,
        "format": args.format,
        "entries": entries,
    });
    let mut f = BufWriter::new(File::create(args.out.join("manifest.json"))?);
    writeln!(f, "{}", serde_json::to_string_pretty(&manifest).expect("serializable"))?;
    Ok(())
}

/// Full-precision float formatting: 17 significant digits survive the
/// round-trip to decimal and back bit-exactly.
fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn emit(
    out: &Option<PathBuf>,
    format: &str,
    meta: serde_json::Value,
    columns: &[&str],
    rows: &[Vec<f64>],
) -> Result<(), CliError> {
    let mut sink: Box<dyn Write> = match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    };
    match format {
        "csv" => write_csv(&mut sink, columns, rows)?,
        "json" => write_json(&mut sink, meta, columns, rows)?,
        other => return Err(CliError::Usage(format!("unknown format '{other}'"))),
    }
    sink.flush()?;
    Ok(())
}

fn write_csv(w: &mut dyn Write, columns: &[&str], rows: &[Vec<f64>]) -> io::Result<()> {
    writeln!(w, "{}", columns.join(","))?;
    for row in rows {
        let cells: Vec<String> = row.iter().map(|v| fmt_f64(*v)).collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    Ok(())
}

fn write_json(
    w: &mut dyn Write,
    meta: serde_json::Value,
    columns: &[&str],
    rows: &[Vec<f64>],
) -> io::Result<()> {
    let doc = json!({
        "meta": meta,
        "columns": columns,
        "rows": rows,
    });
    writeln!(w, "{}", serde_json::to_string(&doc).expect("serializable"))
}
