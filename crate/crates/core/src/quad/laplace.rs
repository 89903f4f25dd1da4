use num_complex::Complex64;

use super::gk::integrate_adaptive_breakpoints;
use super::tanh_sinh::integrate_tanh_sinh;
use super::{QuadStatus, QuadratureResult};
use crate::bessel::j_real;
use crate::error::{Error, Result};
use crate::hyper::hyp0f1;
use crate::numerics::gamma;

const TAIL_EXTENSIONS: usize = 6;

/// `∫₀^∞ e^{−s t} t^μ f(t) dt`.
///
/// The head `(0, 1/s]` uses tanh-sinh so that power-law behaviour at the
/// origin is absorbed; the tail is integrated adaptively out to a cut-off
/// where the sampled integrand bound falls below `tol / 10`.
pub fn laplace_transform<F: FnMut(f64) -> f64>(
    mut f: F,
    s: f64,
    mu: f64,
    tol: f64,
) -> Result<QuadratureResult> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::domain(format!("Laplace variable must be positive, got {s}")));
    }
    if !(mu > -1.0) || !mu.is_finite() {
        return Err(Error::domain(format!("weight exponent must exceed -1, got {mu}")));
    }
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    let mut g = |t: f64| {
        let w = (-s * t).exp() * t.powf(mu);
        if w == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::new(w * f(t), 0.0)
    };
    let t_star = 1.0 / s;
    let head = integrate_tanh_sinh(&mut g, 0.0, t_star, tol / 4.0)?;

    let mut lo = t_star;
    let mut hi = t_star + ((1.0 / tol).ln().max(0.0) + 30.0) / s;
    let mut result = head;
    for ext in 0..=TAIL_EXTENSIONS {
        let pieces = 8;
        let pts: Vec<f64> = (0..=pieces)
            .map(|j| lo + (hi - lo) * j as f64 / pieces as f64)
            .collect();
        let part = integrate_adaptive_breakpoints(&mut g, &pts, tol / 4.0)?;
        result = result.join(part);
        let residual = g(hi).norm() / s;
        if residual <= tol / 10.0 {
            return Ok(result.settle(tol));
        }
        if ext == TAIL_EXTENSIONS {
            result.status = result.status.combine(QuadStatus::TruncatedTail);
            result.abs_error_estimate += residual;
            return Ok(result);
        }
        lo = hi;
        hi += ((residual / (tol / 10.0)).ln() + 10.0) / s + (hi - t_star);
    }
    unreachable!()
}

/// `₀F₁(; c; −z)` for `z ≥ 0`, through `J_{c−1}` once the series would cancel.
fn hyp0f1_negative(c: f64, z: f64) -> Result<f64> {
    if z < 1.0 {
        return hyp0f1(c, -z);
    }
    let u = 2.0 * z.sqrt();
    Ok(gamma(c)? * z.powf(0.5 * (1.0 - c)) * j_real(c - 1.0, u))
}

/// `Ψ₂(a; c, c′; −X, −Y)` for `X, Y ≥ 0` from the Laplace representation
/// `Γ(a)⁻¹ ∫₀^∞ e^{−s} s^{a−1} ₀F₁(;c;−Xs) ₀F₁(;c′;−Ys) ds`, which is free of
/// the cancellation that plagues the double series at large arguments.
pub fn psi2_negative_quadrature(
    a: f64,
    c1: f64,
    c2: f64,
    x: f64,
    y: f64,
    tol: f64,
) -> Result<QuadratureResult> {
    if !(a > 0.0) || !(c1 > 0.0) || !(c2 > 0.0) {
        return Err(Error::domain(format!(
            "the integral representation needs a, c, c' > 0 (got {a}, {c1}, {c2})"
        )));
    }
    if !(x >= 0.0) || !(y >= 0.0) || !x.is_finite() || !y.is_finite() {
        return Err(Error::domain(format!("arguments must be non-positive, got {}, {}", -x, -y)));
    }
    let ga = gamma(a)?;
    let mut failure = None;
    let r = laplace_transform(
        |s| match (hyp0f1_negative(c1, x * s), hyp0f1_negative(c2, y * s)) {
            (Ok(u), Ok(v)) => u * v,
            (Err(e), _) | (_, Err(e)) => {
                failure.get_or_insert(e);
                0.0
            }
        },
        1.0,
        a - 1.0,
        tol * ga.abs().min(1.0),
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(r.scaled(Complex64::new(1.0 / ga, 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyper::{humbert_psi2, Psi2Params};

    #[test]
    fn psi2_representation_matches_series() {
        let (a, c1, c2) = (1.7, 1.3, 0.8);
        let p = Psi2Params::new(a, c1, c2).unwrap();
        for &(x, y) in &[(0.5, 1.5), (3.0, 2.0), (6.0, 0.2)] {
            let q = psi2_negative_quadrature(a, c1, c2, x, y, 1e-11).unwrap();
            let s = humbert_psi2(&p, -x, -y, 1e-16).unwrap();
            assert!((q.value.re - s.value.re).abs() < 1e-9, "{x} {y}: {} vs {}", q.value.re, s.value.re);
        }
    }

    #[test]
    fn elementary_transforms() {
        let r = laplace_transform(|_| 1.0, 2.0, 0.0, 1e-12).unwrap();
        assert!((r.value.re - 0.5).abs() < 1e-12, "{r:?}");
        assert!(r.is_converged());
        let r = laplace_transform(|_| 1.0, 1.0, 0.7, 1e-12).unwrap();
        assert!((r.value.re - gamma(1.7).unwrap()).abs() < 1e-11);
        assert!((r.value.re - 0.908_639).abs() < 1e-6);
        // t^{-1/2} weight: Γ(1/2) s^{-1/2}
        let r = laplace_transform(|_| 1.0, 3.0, -0.5, 1e-11).unwrap();
        assert!((r.value.re - (std::f64::consts::PI / 3.0).sqrt()).abs() < 1e-10);
    }

    #[test]
    fn growing_integrand_extends_tail() {
        // ∫ e^{-t} e^{0.9 t} dt = 10
        let r = laplace_transform(|t| (0.9 * t).exp(), 1.0, 0.0, 1e-9).unwrap();
        assert!((r.value.re - 10.0).abs() < 1e-7, "{r:?}");
    }

    #[test]
    fn overflowing_integrand_is_an_error() {
        assert!(laplace_transform(|t| (2.0 * t).exp(), 1.0, 0.0, 1e-9).is_err());
    }

    #[test]
    fn parameter_checks() {
        assert!(laplace_transform(|_| 1.0, 0.0, 0.0, 1e-8).is_err());
        assert!(laplace_transform(|_| 1.0, 1.0, -1.0, 1e-8).is_err());
    }
}
