//! Quadrature helpers shared by the identity checks.

use isqk::quad::{integrate_adaptive_breakpoints, QuadStatus, QuadratureResult};
use num_complex::Complex64;

use crate::report::{rel_err, Comparison};

pub type Eval<T> = Result<T, String>;

pub fn re(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

pub fn compare(lhs: Complex64, rhs: Complex64, floor: f64) -> Comparison {
    Comparison {
        lhs,
        rhs,
        rel_err: rel_err(lhs, rhs, floor),
    }
}

/// Absolute quadrature tolerance for a target of magnitude `scale`.
pub fn oracle_tol(tol: f64, scale: f64) -> f64 {
    (1e-2 * tol * scale).max(1e-15)
}

/// Converts library errors into report messages.
pub trait Ctx<T> {
    fn ctx(self, what: &str) -> Eval<T>;
}

impl<T> Ctx<T> for isqk::Result<T> {
    fn ctx(self, what: &str) -> Eval<T> {
        self.map_err(|e| format!("{what}: {e}"))
    }
}

/// Value of a quadrature that met its tolerance.
pub fn accepted(q: QuadratureResult, what: &str) -> Eval<Complex64> {
    match q.status {
        QuadStatus::Converged | QuadStatus::AcceleratedTail => Ok(q.value),
        s => Err(format!(
            "{what}: quadrature {} (error estimate {:.3e})",
            s.as_str(),
            q.abs_error_estimate
        )),
    }
}

/// Nodes `τ, 2τ, …` of the polynomial extrapolation used on `(0, τ)`.
const HEAD_NODES: usize = 4;

/// `∫₀^∞ e^{−st} t^μ f(t) dt` for an `f` that is only sampled on `[τ, ∞)`.
///
/// The body is integrated adaptively over geometric breakpoints from `τ`.
/// On `(0, τ)` the weighted integrand `e^{−st} f(t)` is replaced by the cubic
/// through `τ, 2τ, 3τ, 4τ`, which is accurate to `O(τ^{μ+5})` when `f` is
/// smooth at the origin.
pub fn laplace_from<F: FnMut(f64) -> Eval<f64>>(
    mut f: F,
    s: f64,
    mu: f64,
    tau: f64,
    tol: f64,
) -> Eval<f64> {
    let mut failure: Option<String> = None;
    let mut g = |t: f64| -> f64 {
        match f(t) {
            Ok(v) => (-s * t).exp() * v,
            Err(e) => {
                failure.get_or_insert(e);
                0.0
            }
        }
    };
    let samples: Vec<f64> = (1..=HEAD_NODES).map(|k| g(k as f64 * tau)).collect();
    let coef = monomial_fit(&samples);
    let head = tau.powf(mu + 1.0)
        * coef
            .iter()
            .enumerate()
            .map(|(j, c)| c / (mu + j as f64 + 1.0))
            .sum::<f64>();

    let knee = (4.0 * tau).max(1.0 / s);
    let mut pts = vec![tau];
    while *pts.last().unwrap() * 2.0 < knee {
        pts.push(pts.last().unwrap() * 2.0);
    }
    let end = knee + ((1.0 / tol).ln().max(0.0) + 30.0) / s;
    let pieces = 12;
    for j in 0..=pieces {
        pts.push(knee + (end - knee) * j as f64 / pieces as f64);
    }
    let body = integrate_adaptive_breakpoints(
        |t| Complex64::new(g(t) * t.powf(mu), 0.0),
        &pts,
        tol,
    )
    .ctx("laplace body")?;
    if let Some(e) = failure {
        return Err(e);
    }
    let body = accepted(body, "laplace body")?;
    Ok(head + body.re)
}

/// Coefficients `c_j` of the polynomial `Σ c_j u^j` through `(k, y_k)`,
/// `k = 1..=n`.
fn monomial_fit(y: &[f64]) -> Vec<f64> {
    let n = y.len();
    let mut m: Vec<Vec<f64>> = (0..n)
        .map(|k| {
            let u = (k + 1) as f64;
            let mut row: Vec<f64> = (0..n).map(|j| u.powi(j as i32)).collect();
            row.push(y[k]);
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .unwrap();
        m.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = m[r][col] / m[col][col];
                for c in col..=n {
                    m[r][c] -= f * m[col][c];
                }
            }
        }
    }
    (0..n).map(|j| m[j][n] / m[j][j]).collect()
}
