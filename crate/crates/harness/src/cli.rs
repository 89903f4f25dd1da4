//! Argument parsing and dispatch for the `isqk` binary.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use isqk::kernels::{KernelKind, KernelParams};
use isqk::quad::hankel_transform_tabulated;
use num_complex::Complex64;
use serde::Serialize;

use crate::grid::{eval_grid, parse_grid, render, Format, GridError, GridPoint};
use crate::identities::{run_identity_check, IdentityId, DEFAULT_SAMPLES};
use crate::report::{IdentityReport, SCHEMA_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "isqk",
    version,
    about = "Kernels of multipliers of the inverse square potential operator on the half-line"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a kernel at one point or over a grid file.
    Eval(EvalArgs),
    /// Check identities against independent quadrature oracles.
    Check(CheckArgs),
    /// Hankel transform of tabulated samples, interpolated linearly.
    Hankel(HankelArgs),
}

#[derive(Args, Debug)]
struct EvalArgs {
    /// heat | wheat | schrod | resolvent | wresolvent | gresolvent
    #[arg(long)]
    kernel: KernelKind,
    #[arg(long, allow_hyphen_values = true)]
    nu: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    p: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    mu: f64,
    /// Time for heat, wheat and schrod.
    #[arg(long, allow_hyphen_values = true)]
    t: Option<f64>,
    /// Real part of the spectral parameter lambda^2 (must be negative).
    #[arg(long, allow_hyphen_values = true)]
    lambda2_re: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    lambda2_im: f64,
    #[arg(long, allow_hyphen_values = true)]
    x: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    xp: Option<f64>,
    /// CSV with header x,xp (or t, or lambda2_re,lambda2_im for sweeps).
    #[arg(long)]
    grid_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
}

#[derive(Args, Debug)]
struct CheckArgs {
    /// I1..I10 or all.
    #[arg(long, default_value = "all")]
    identity: String,
    #[arg(long, default_value_t = DEFAULT_SAMPLES, value_parser = clap::value_parser!(usize))]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Overrides every identity's default tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Let every identity, not only the classical ones, set the exit status.
    #[arg(long)]
    strict: bool,
}

#[derive(Args, Debug)]
struct HankelArgs {
    #[arg(long, allow_hyphen_values = true)]
    nu: f64,
    /// One or more comma-separated output frequencies.
    #[arg(long, value_delimiter = ',', required = true)]
    omega: Vec<f64>,
    /// Two-column CSV of x, f(x) samples; a header row is optional.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let result = match cli.command {
        Command::Eval(a) => run_eval(a, out),
        Command::Check(a) => run_check(a, out, err),
        Command::Hankel(a) => run_hankel(a, out),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(err, "isqk: {msg}");
            EXIT_USAGE
        }
    }
}

type CliResult = Result<i32, String>;

fn open(path: &Path) -> Result<std::fs::File, String> {
    std::fs::File::open(path).map_err(|e| format!("cannot open {}: {e}", path.display()))
}

fn run_eval(a: EvalArgs, out: &mut dyn Write) -> CliResult {
    let mut base = KernelParams {
        nu: a.nu,
        p: a.p,
        mu: a.mu,
        ..KernelParams::default()
    };
    if let Some(t) = a.t {
        base.t = Complex64::new(t, 0.0);
    }
    if let Some(re) = a.lambda2_re {
        base.lambda2 = Complex64::new(re, a.lambda2_im);
    }
    let mut grid = match &a.grid_file {
        Some(path) => parse_grid(open(path)?).map_err(|e| e.to_string())?,
        None => vec![GridPoint::default()],
    };
    for pt in &mut grid {
        pt.x = pt.x.or(a.x);
        pt.xp = pt.xp.or(a.xp);
    }
    let sweeps_t = grid.iter().all(|pt| pt.t.is_some());
    let sweeps_lambda = grid.iter().all(|pt| pt.lambda2.is_some());
    if a.kernel.uses_time() && a.t.is_none() && !(sweeps_t && !grid.is_empty()) {
        return Err(format!("--t is required for the {} kernel", a.kernel));
    }
    if !a.kernel.uses_time() && a.lambda2_re.is_none() && !(sweeps_lambda && !grid.is_empty()) {
        return Err(format!("--lambda2-re is required for the {} kernel", a.kernel));
    }
    if a.grid_file.is_none() && (a.x.is_none() || a.xp.is_none()) {
        return Err("give --x and --xp, or --grid-file".into());
    }
    let records = eval_grid(a.kernel, &base, &grid, a.tol).map_err(|e| match e {
        GridError::Usage(m) | GridError::Domain(m) => m,
    })?;
    out.write_all(render(&records, a.format).as_bytes())
        .map_err(|e| e.to_string())?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct SingleReport<'a> {
    schema_version: &'static str,
    #[serde(flatten)]
    report: &'a IdentityReport,
}

#[derive(Serialize)]
struct SummaryLine {
    identity_id: String,
    verdict: &'static str,
    max_rel_err: Option<f64>,
    tolerance: f64,
    gating: bool,
}

#[derive(Serialize)]
struct FullReport<'a> {
    schema_version: &'static str,
    seed: u64,
    samples: usize,
    strict: bool,
    summary: Vec<SummaryLine>,
    reports: &'a [IdentityReport],
}

fn run_check(a: CheckArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let all = a.identity.eq_ignore_ascii_case("all");
    let ids: Vec<IdentityId> = if all {
        IdentityId::ALL.to_vec()
    } else {
        vec![a.identity.parse::<IdentityId>()?]
    };
    if a.samples == 0 {
        return Err("--samples must be positive".into());
    }
    if let Some(t) = a.tol {
        if !(t > 0.0) || !t.is_finite() {
            return Err(format!("--tol must be positive, got {t}"));
        }
    }
    let mut reports = Vec::new();
    let mut failed = false;
    let mut summary = Vec::new();
    for id in ids {
        let tol = a.tol.unwrap_or_else(|| id.default_tolerance());
        let report = run_identity_check(id, &id.default_sampler(a.seed, a.samples), tol);
        // an identity named on its own always counts
        let gating = !all || a.strict || id.gates_by_default();
        failed |= gating && report.verdict.is_failure();
        let _ = writeln!(
            err,
            "{:<4} {:<32} max_rel_err {:<10} tol {:.0e}{}",
            id.as_str(),
            report.verdict.as_str(),
            report.max_rel_err.map_or("n/a".into(), |e| format!("{e:.2e}")),
            tol,
            if gating { "" } else { "  (not gating)" }
        );
        summary.push(SummaryLine {
            identity_id: id.as_str().into(),
            verdict: report.verdict.as_str(),
            max_rel_err: report.max_rel_err,
            tolerance: tol,
            gating,
        });
        reports.push(report);
    }
    let json = if all {
        serde_json::to_string_pretty(&FullReport {
            schema_version: SCHEMA_VERSION,
            seed: a.seed,
            samples: a.samples,
            strict: a.strict,
            summary,
            reports: &reports,
        })
    } else {
        serde_json::to_string_pretty(&SingleReport {
            schema_version: SCHEMA_VERSION,
            report: &reports[0],
        })
    }
    .map_err(|e| e.to_string())?;
    match &a.report {
        Some(path) => std::fs::write(path, json + "\n")
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?,
        None => writeln!(out, "{json}").map_err(|e| e.to_string())?,
    }
    Ok(if failed { EXIT_FAILED } else { EXIT_OK })
}

#[derive(Serialize)]
struct HankelRecord {
    nu: f64,
    omega: f64,
    value: Option<f64>,
    abs_error: Option<f64>,
    status: Option<&'static str>,
    error: Option<String>,
}

/// Reads `x, f(x)` pairs, skipping a header row if it does not parse.
fn read_samples(path: &Path) -> Result<(Vec<f64>, Vec<f64>), String> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(open(path)?);
    let (mut xs, mut fs) = (Vec::new(), Vec::new());
    for (i, row) in reader.records().enumerate() {
        let row = row.map_err(|e| format!("{}: {e}", path.display()))?;
        if row.len() != 2 {
            return Err(format!("{} row {}: expected two columns", path.display(), i + 1));
        }
        match (row[0].parse::<f64>(), row[1].parse::<f64>()) {
            (Ok(x), Ok(f)) => {
                xs.push(x);
                fs.push(f);
            }
            _ if i == 0 => continue,
            _ => return Err(format!("{} row {}: not a number", path.display(), i + 1)),
        }
    }
    if xs.len() < 2 {
        return Err(format!("{}: need at least two samples", path.display()));
    }
    Ok((xs, fs))
}

fn run_hankel(a: HankelArgs, out: &mut dyn Write) -> CliResult {
    if !(a.nu > -1.0) {
        return Err(format!("order must exceed -1, got {}", a.nu));
    }
    let (xs, fs) = read_samples(&a.input)?;
    let records: Vec<HankelRecord> = a
        .omega
        .iter()
        .map(|&w| match hankel_transform_tabulated(a.nu, &xs, &fs, w, a.tol) {
            Ok(q) => HankelRecord {
                nu: a.nu,
                omega: w,
                value: Some(q.value.re),
                abs_error: Some(q.abs_error_estimate),
                status: Some(q.status.as_str()),
                error: None,
            },
            Err(e) => HankelRecord {
                nu: a.nu,
                omega: w,
                value: None,
                abs_error: None,
                status: None,
                error: Some(e.to_string()),
            },
        })
        .collect();
    out.write_all(render(&records, a.format).as_bytes())
        .map_err(|e| e.to_string())?;
    Ok(EXIT_OK)
}
