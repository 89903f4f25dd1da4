//! Kernel evaluation over grids of points or parameter sweeps.

use std::io::Read;

use isqk::kernels::{evaluate, KernelKind, KernelParams};
use num_complex::Complex64;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Why a grid run stopped before producing output.
#[derive(Debug, Clone, PartialEq)]
pub enum GridError {
    /// Malformed input or missing arguments.
    Usage(String),
    /// Parameters outside the kernel's window.
    Domain(String),
}

impl std::fmt::Display for GridError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GridError::Usage(m) => write!(f, "usage error: {m}"),
            GridError::Domain(m) => write!(f, "domain error: {m}"),
        }
    }
}

/// One evaluation point; `None` fields take the base parameter values.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GridPoint {
    pub x: Option<f64>,
    pub xp: Option<f64>,
    pub t: Option<f64>,
    pub lambda2: Option<Complex64>,
}

const COLUMNS: [&str; 5] = ["x", "xp", "t", "lambda2_re", "lambda2_im"];

/// Reads a grid CSV whose header names a subset of
/// `x, xp, t, lambda2_re, lambda2_im`.
pub fn parse_grid<R: Read>(input: R) -> Result<Vec<GridPoint>, GridError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = reader
        .headers()
        .map_err(|e| GridError::Usage(format!("grid file: {e}")))?
        .clone();
    let mut index = [None; 5];
    for (i, h) in headers.iter().enumerate() {
        let k = COLUMNS
            .iter()
            .position(|c| *c == h)
            .ok_or_else(|| GridError::Usage(format!("grid file: unknown column '{h}'")))?;
        index[k] = Some(i);
    }
    if index[3].is_none() && index[4].is_some() {
        return Err(GridError::Usage("grid file: lambda2_im needs lambda2_re".into()));
    }
    let mut points = Vec::new();
    for (line, row) in reader.records().enumerate() {
        let row = row.map_err(|e| GridError::Usage(format!("grid file: {e}")))?;
        let field = |k: usize| -> Result<Option<f64>, GridError> {
            index[k]
                .map(|i| {
                    let s = row.get(i).unwrap_or("");
                    s.parse::<f64>().map_err(|_| {
                        GridError::Usage(format!(
                            "grid file row {}: cannot parse '{s}' as {}",
                            line + 2,
                            COLUMNS[k]
                        ))
                    })
                })
                .transpose()
        };
        let lambda2 = match (field(3)?, field(4)?) {
            (Some(r), i) => Some(Complex64::new(r, i.unwrap_or(0.0))),
            _ => None,
        };
        points.push(GridPoint {
            x: field(0)?,
            xp: field(1)?,
            t: field(2)?,
            lambda2,
        });
    }
    Ok(points)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalRecord {
    pub kernel: &'static str,
    pub nu: f64,
    pub p: f64,
    pub mu: f64,
    pub t: f64,
    pub lambda2_re: f64,
    pub lambda2_im: f64,
    pub x: f64,
    pub xp: f64,
    pub value_re: Option<f64>,
    pub value_im: Option<f64>,
    pub abs_error: Option<f64>,
    pub path: Option<&'static str>,
    pub converged: Option<bool>,
    pub precision_loss: Option<bool>,
    pub extended_precision: Option<bool>,
    pub error: Option<String>,
}

fn resolve(base: &KernelParams, pt: &GridPoint) -> KernelParams {
    KernelParams {
        t: pt.t.map_or(base.t, |t| Complex64::new(t, 0.0)),
        lambda2: pt.lambda2.unwrap_or(base.lambda2),
        ..*base
    }
}

/// Evaluates `kind` at every grid point, in input order.
///
/// Every point's parameters are validated before anything is evaluated;
/// failures at individual points become records with an `error` field.
pub fn eval_grid(
    kind: KernelKind,
    base: &KernelParams,
    grid: &[GridPoint],
    tol: f64,
) -> Result<Vec<EvalRecord>, GridError> {
    if grid.is_empty() {
        return Err(GridError::Usage("the grid is empty".into()));
    }
    if !(tol > 0.0) {
        return Err(GridError::Usage(format!("tolerance must be positive, got {tol}")));
    }
    for pt in grid {
        if pt.x.is_none() || pt.xp.is_none() {
            return Err(GridError::Usage("every grid point needs x and xp".into()));
        }
        resolve(base, pt)
            .validate(kind)
            .map_err(|e| GridError::Domain(e.to_string()))?;
    }
    Ok(grid
        .iter()
        .map(|pt| {
            let params = resolve(base, pt);
            let (x, xp) = (pt.x.unwrap(), pt.xp.unwrap());
            let mut rec = EvalRecord {
                kernel: kind.as_str(),
                nu: params.nu,
                p: params.p,
                mu: params.mu,
                t: params.t.re,
                lambda2_re: params.lambda2.re,
                lambda2_im: params.lambda2.im,
                x,
                xp,
                value_re: None,
                value_im: None,
                abs_error: None,
                path: None,
                converged: None,
                precision_loss: None,
                extended_precision: None,
                error: None,
            };
            match evaluate(kind, &params, x, xp, tol) {
                Ok(s) => {
                    rec.value_re = Some(s.value.re);
                    rec.value_im = Some(s.value.im);
                    rec.abs_error = Some(s.abs_error_estimate);
                    rec.path = Some(s.path.as_str());
                    rec.converged = Some(s.converged);
                    rec.precision_loss = Some(s.precision_loss);
                    rec.extended_precision = Some(s.extended_precision);
                }
                Err(e) => rec.error = Some(e.to_string()),
            }
            rec
        })
        .collect())
}

/// Serializes records as CSV with a header row or as a JSON array.
pub fn render<T: Serialize>(records: &[T], format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(records).expect("records serialize");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in records {
                w.serialize(r).expect("records serialize");
            }
            String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
        }
    }
}
