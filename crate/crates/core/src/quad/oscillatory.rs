use num_complex::Complex64;

use super::gk::integrate_adaptive;
use super::tanh_sinh::integrate_tanh_sinh;
use super::{QuadStatus, QuadratureResult};
use crate::error::{Error, Result};

/// Maximum number of iterated Aitken sweeps.
pub const AITKEN_DEPTH: usize = 12;
const MAX_INTERVALS: usize = 4000;
const QUIET_PANELS: usize = 3;

/// Iterated Aitken Δ² applied to the tail of a sequence of partial sums.
fn iterated_aitken(s: &[Complex64]) -> Complex64 {
    let mut level = s.to_vec();
    let mut depth = 0;
    while level.len() >= 3 && depth < AITKEN_DEPTH {
        let mut next = Vec::with_capacity(level.len() - 2);
        for w in level.windows(3) {
            let d1 = w[2] - w[1];
            let d0 = w[1] - w[0];
            let den = d1 - d0;
            if den.norm() <= f64::EPSILON * (w[2].norm() + d1.norm()) {
                next.push(w[2]);
            } else {
                next.push(w[2] - d1 * d1 / den);
            }
        }
        level = next;
        depth += 1;
    }
    *level.last().expect("non-empty sequence")
}

/// `∫_{node(0)}^∞ f` for an oscillatory integrand: integrates the panels
/// `[node(k), node(k+1)]` one by one and extrapolates the partial sums by
/// iterated Aitken. The first panel uses tanh-sinh, so integrable power-law
/// behaviour at `node(0)` is allowed. Stops when two successive extrapolants differ by less
/// than `tol`, or earlier if the panel contributions themselves fall below
/// `tol / 10` for several panels in a row.
pub fn partition_extrapolate<F, N>(mut f: F, node: N, tol: f64) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> Complex64,
    N: Fn(usize) -> f64,
{
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    let window = 2 * AITKEN_DEPTH + 1;
    let panel_tol = tol / 100.0;
    let mut sums: Vec<Complex64> = Vec::new();
    let mut total = Complex64::new(0.0, 0.0);
    let mut panel_err = 0.0;
    let mut evaluations = 0;
    let mut extrapolants: Vec<Complex64> = Vec::new();
    let mut quiet = 0;
    for k in 0..MAX_INTERVALS {
        let (lo, hi) = (node(k), node(k + 1));
        let r = if k == 0 {
            integrate_tanh_sinh(&mut f, lo, hi, panel_tol)?
        } else {
            integrate_adaptive(&mut f, lo, hi, panel_tol)?
        };
        evaluations += r.evaluations;
        panel_err += r.abs_error_estimate;
        total += r.value;
        sums.push(total);

        if r.value.norm() < 0.1 * tol {
            quiet += 1;
        } else {
            quiet = 0;
        }
        if quiet >= QUIET_PANELS {
            return Ok(QuadratureResult {
                value: total,
                abs_error_estimate: panel_err + r.value.norm(),
                evaluations,
                status: QuadStatus::Converged,
            }
            .settle(tol));
        }

        if sums.len() >= 5 {
            let start = sums.len().saturating_sub(window);
            extrapolants.push(iterated_aitken(&sums[start..]));
            let m = extrapolants.len();
            if m >= 3 {
                let d1 = (extrapolants[m - 1] - extrapolants[m - 2]).norm();
                let d2 = (extrapolants[m - 2] - extrapolants[m - 3]).norm();
                if d1 < tol && d2 < tol {
                    return Ok(QuadratureResult {
                        value: extrapolants[m - 1],
                        abs_error_estimate: d1.max(d2) + panel_err,
                        evaluations,
                        status: QuadStatus::AcceleratedTail,
                    });
                }
            }
        }
    }
    let m = extrapolants.len();
    Err(Error::Quadrature(format!(
        "acceleration stagnated after {MAX_INTERVALS} panels; last extrapolants {} and {}",
        extrapolants[m - 2],
        extrapolants[m - 1]
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bessel::j_real;
    use std::f64::consts::PI;

    #[test]
    fn aitken_accelerates_alternating_series() {
        // partial sums of ln 2 = 1 − 1/2 + 1/3 − …
        let mut s = Vec::new();
        let mut acc = 0.0;
        for k in 1..=15 {
            acc += if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
            s.push(Complex64::new(acc, 0.0));
        }
        let e = iterated_aitken(&s);
        assert!((e.re - 2f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn weber_integral_of_j0() {
        let r = partition_extrapolate(|w| Complex64::new(j_real(0.0, w), 0.0), |k| k as f64 * PI, 1e-9)
            .unwrap();
        assert!((r.value.re - 1.0).abs() < 1e-6, "{r:?}");
        assert_eq!(r.status, QuadStatus::AcceleratedTail);
    }

    #[test]
    fn geometric_decay() {
        let r = partition_extrapolate(|w| Complex64::new((-w).exp(), 0.0), |k| k as f64, 1e-10).unwrap();
        assert!((r.value.re - 1.0).abs() < 1e-9);
        assert!(r.abs_error_estimate < 1e-9);
    }

    #[test]
    fn divergent_integral_stagnates() {
        let e = partition_extrapolate(|_| Complex64::new(1.0, 0.0), |k| k as f64, 1e-8);
        assert!(matches!(e, Err(Error::Quadrature(_))));
    }
}
