use std::f64::consts::PI;

use num_complex::Complex64;

use super::gk::integrate_adaptive_breakpoints;
use super::oscillatory::partition_extrapolate;
use super::tanh_sinh::integrate_tanh_sinh;
use super::{QuadStatus, QuadratureResult};
use crate::bessel::{j_real, HankelExpansion};
use crate::error::{Error, Result};
use crate::numerics::{cpow, rgamma};

const MAX_BREAKPOINTS: usize = 4000;

/// Spectral multiplier `φ(ω)` of a kernel `√(xx′) ∫ J_ν(ωx) J_ν(ωx′) φ(ω) ω dω`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MultiplierSpec {
    /// `e^{−tω²} ω^p`
    Gaussian { t: f64, p: f64 },
    /// `(ω² − λ²)^{−1−μ} ω^p`
    Rational { lambda2: Complex64, p: f64, mu: f64 },
}

impl MultiplierSpec {
    /// Checks that the spectral integral converges absolutely at the origin
    /// and (conditionally, through oscillation) at infinity.
    pub fn validate(&self, nu: f64) -> Result<()> {
        if !(nu > -1.0) || !nu.is_finite() {
            return Err(Error::domain(format!("order must exceed -1, got {nu}")));
        }
        let p = match *self {
            MultiplierSpec::Gaussian { t, p } => {
                if !(t > 0.0) || !t.is_finite() {
                    return Err(Error::domain(format!("time must be positive, got {t}")));
                }
                p
            }
            MultiplierSpec::Rational { lambda2, p, mu } => {
                if !(lambda2.re < 0.0) || !lambda2.im.is_finite() {
                    return Err(Error::domain(format!("Re lambda2 must be negative, got {lambda2}")));
                }
                if !(mu > -1.0) || !mu.is_finite() {
                    return Err(Error::domain(format!("mu must exceed -1, got {mu}")));
                }
                if !(p - 1.0 - 2.0 * (1.0 + mu) < -1.0) {
                    return Err(Error::domain(format!(
                        "spectral integral diverges at infinity: p = {p}, mu = {mu}"
                    )));
                }
                p
            }
        };
        if !p.is_finite() || !(p + 2.0 * nu + 1.0 > -1.0) {
            return Err(Error::domain(format!(
                "spectral integral diverges at the origin: p = {p}, nu = {nu}"
            )));
        }
        Ok(())
    }

    /// `(p, c)` with `φ(ω) ~ c ω^p` as `ω → 0`.
    fn behaviour_at_zero(&self) -> (f64, Complex64) {
        match *self {
            MultiplierSpec::Gaussian { p, .. } => (p, Complex64::new(1.0, 0.0)),
            MultiplierSpec::Rational { lambda2, p, mu } => (p, cpow(-lambda2, -1.0 - mu)),
        }
    }

    /// `φ(ω)` on the principal branches (also used off the real axis).
    pub fn eval(&self, w: Complex64) -> Complex64 {
        match *self {
            MultiplierSpec::Gaussian { t, p } => (-t * w * w).exp() * cpow(w, p),
            MultiplierSpec::Rational { lambda2, p, mu } => {
                cpow(w * w - lambda2, -1.0 - mu) * cpow(w, p)
            }
        }
    }
}

/// Below this value of `ωx` the integrand is replaced by its leading power.
const SMALL_ARGUMENT: f64 = 1e-30;

/// `z^{1/2} J_ν(z)`, with an underflowed argument mapped to its limit (or to
/// zero where the limit is an integrable singularity of negligible weight).
fn sqrt_z_j(nu: f64, z: f64) -> f64 {
    if z == 0.0 {
        return if nu == -0.5 { (2.0 / PI).sqrt() } else { 0.0 };
    }
    if z < 1e-100 {
        let v = z.powf(nu + 0.5) * 0.5f64.powf(nu) * rgamma(nu + 1.0);
        return if v.is_finite() { v } else { 0.0 };
    }
    z.sqrt() * j_real(nu, z)
}

fn check_point(x: f64, name: &str) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("{name} must be positive, got {x}")));
    }
    Ok(())
}

/// `∫₀^upper f` with a tanh-sinh first panel and Gauss-Kronrod panels of
/// width `period` after it.
fn finite_part<F: FnMut(f64) -> Complex64>(
    mut f: F,
    period: f64,
    upper: f64,
    tol: f64,
) -> Result<QuadratureResult> {
    let first = period.min(upper);
    let head = integrate_tanh_sinh(&mut f, 0.0, first, tol / 4.0)?;
    if first >= upper {
        return Ok(head.settle(tol));
    }
    let n = (((upper - first) / period).ceil() as usize).clamp(1, MAX_BREAKPOINTS);
    let pts: Vec<f64> = (0..=n)
        .map(|k| first + (upper - first) * k as f64 / n as f64)
        .collect();
    let body = integrate_adaptive_breakpoints(&mut f, &pts, 0.75 * tol)?;
    Ok(head.join(body).settle(tol))
}

/// `√(xx′) ∫₀^∞ J_ν(ωx) J_ν(ωx′) φ(ω) ω dω` to absolute tolerance `tol`.
///
/// Gaussian multipliers are truncated where `e^{−tω²}` is negligible. For
/// rational multipliers the range is split at a cut-off `Ω` beyond which
/// both Bessel factors are replaced by their Hankel expansions; each of the
/// four resulting exponentials `e^{i(±x ± x′)ω}` is integrated along a ray
/// `ω = Ω ± is` in the half-plane where it decays.
pub fn spectral_kernel_quadrature(
    nu: f64,
    phi: &MultiplierSpec,
    x: f64,
    xp: f64,
    tol: f64,
) -> Result<QuadratureResult> {
    phi.validate(nu)?;
    check_point(x, "x")?;
    check_point(xp, "x'")?;
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    // near ω = 0 the factors ω^p and J_ν J_ν may overflow and underflow
    // separately, so the leading power ω^{p+2ν+1} is used there
    let (p_exp, phi0) = phi.behaviour_at_zero();
    let c0 = (x * xp).powf(nu + 0.5) * (0.5f64.powf(nu) * rgamma(nu + 1.0)).powi(2);
    let integrand = move |w: f64| {
        if w * x.max(xp) < SMALL_ARGUMENT {
            return phi0 * (c0 * w.powf(p_exp + 2.0 * nu + 1.0));
        }
        phi.eval(Complex64::new(w, 0.0)) * (sqrt_z_j(nu, w * x) * sqrt_z_j(nu, w * xp))
    };
    let period = PI / (x + xp);
    match *phi {
        MultiplierSpec::Gaussian { t, p } => {
            let log_tol = (1.0 / tol).ln().max(1.0);
            let base = (log_tol / t).sqrt();
            let growth = (p + 1.0).max(0.0) * (1.0 + base).ln();
            let w_max = ((log_tol + growth) / t).sqrt() + 10.0;
            finite_part(integrand, period, w_max, tol)
        }
        MultiplierSpec::Rational { .. } => {
            let cutoff = ((30.0 + nu * nu) / x.min(xp)).max(4.0 * period);
            let head = finite_part(integrand, period, cutoff, 0.5 * tol)?;
            let tail = rational_tail(nu, phi, x, xp, cutoff, 0.5 * tol)?;
            Ok(head.join(tail).settle(tol))
        }
    }
}

fn rational_tail(
    nu: f64,
    phi: &MultiplierSpec,
    x: f64,
    xp: f64,
    cutoff: f64,
    tol: f64,
) -> Result<QuadratureResult> {
    let hx = HankelExpansion::new(nu, cutoff * x);
    let hxp = HankelExpansion::new(nu, cutoff * xp);
    let phase = hx.phase_offset();
    let root = (x * xp).sqrt();
    let i = Complex64::new(0.0, 1.0);
    let mut total = QuadratureResult {
        value: Complex64::new(0.0, 0.0),
        abs_error_estimate: 0.0,
        evaluations: 0,
        status: QuadStatus::Converged,
    };
    for s1 in [1.0, -1.0] {
        for s2 in [1.0, -1.0] {
            let kappa = s1 * x + s2 * xp;
            // H^{(σ)}(z) ≈ √(2/πz) e^{iσ(z − phase)} A_σ(z)
            let g = |w: Complex64| -> Complex64 {
                let zx = w * x;
                let zxp = w * xp;
                let pre = (2.0 / (PI * zx)).sqrt() * (2.0 / (PI * zxp)).sqrt();
                let osc = (i * (kappa * w - (s1 + s2) * phase)).exp();
                pre * osc * hx.amplitude(zx, s1) * hxp.amplitude(zxp, s2) * phi.eval(w) * w
                    * (0.25 * root)
            };
            let piece = if kappa == 0.0 {
                if let MultiplierSpec::Rational { p, mu, .. } = *phi {
                    if !(p < 1.0 + 2.0 * mu) {
                        return Err(Error::domain(format!(
                            "spectral integral diverges on the diagonal x = x' for p = {p}, mu = {mu}"
                        )));
                    }
                }
                integrate_tanh_sinh(
                    |u| {
                        if u < 1e-100 {
                            return Complex64::new(0.0, 0.0);
                        }
                        g(Complex64::new(cutoff / u, 0.0)) * (cutoff / (u * u))
                    },
                    0.0,
                    1.0,
                    tol / 4.0,
                )?
            } else {
                let dir = Complex64::new(0.0, kappa.signum());
                let decay = kappa.abs();
                let s_max = ((1.0 / tol).ln().max(1.0) + 20.0) / decay;
                let mut pts = vec![0.0];
                let mut s = (1.0 / decay).min(cutoff) / 16.0;
                while s < s_max {
                    pts.push(s);
                    s *= 2.0;
                }
                pts.push(s_max);
                integrate_adaptive_breakpoints(
                    |s| g(cutoff + dir * s) * dir,
                    &pts,
                    tol / 4.0,
                )?
            };
            total = total.join(piece);
        }
    }
    Ok(total)
}

/// `(H_ν f)(ω) = ∫₀^∞ (xω)^{1/2} J_ν(xω) f(x) dx` by partition at the
/// half-periods `kπ/ω` and Aitken extrapolation of the partial sums. For
/// `ω < 1` the panels are capped at width `π`.
pub fn hankel_transform<F: FnMut(f64) -> f64>(
    nu: f64,
    mut f: F,
    omega: f64,
    tol: f64,
) -> Result<QuadratureResult> {
    if !(nu > -1.0) || !nu.is_finite() {
        return Err(Error::domain(format!("order must exceed -1, got {nu}")));
    }
    check_point(omega, "omega")?;
    let period = PI / omega.max(1.0);
    partition_extrapolate(
        |x| {
            let fx = f(x);
            if fx == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            Complex64::new(sqrt_z_j(nu, x * omega) * fx, 0.0)
        },
        |k| k as f64 * period,
        tol,
    )
}

/// Hankel transform of the piecewise-linear interpolant of `(xs, fs)`,
/// taken as zero outside `[xs[0], xs[last]]`.
pub fn hankel_transform_tabulated(
    nu: f64,
    xs: &[f64],
    fs: &[f64],
    omega: f64,
    tol: f64,
) -> Result<QuadratureResult> {
    if !(nu > -1.0) || !nu.is_finite() {
        return Err(Error::domain(format!("order must exceed -1, got {nu}")));
    }
    check_point(omega, "omega")?;
    if xs.len() != fs.len() || xs.len() < 2 {
        return Err(Error::domain("need at least two (x, f) samples of equal count"));
    }
    if !(xs[0] >= 0.0) || xs.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::domain("sample abscissae must be non-negative and strictly increasing"));
    }
    if fs.iter().chain(xs).any(|v| !v.is_finite()) {
        return Err(Error::domain("non-finite sample"));
    }
    let interp = |x: f64| -> f64 {
        let j = xs.partition_point(|&v| v <= x).clamp(1, xs.len() - 1);
        let (x0, x1) = (xs[j - 1], xs[j]);
        let w = (x - x0) / (x1 - x0);
        fs[j - 1] + w * (fs[j] - fs[j - 1])
    };
    let integrand = |x: f64| Complex64::new(sqrt_z_j(nu, x * omega) * interp(x), 0.0);

    let period = PI / omega;
    let mut pts: Vec<f64> = xs.to_vec();
    let (lo, hi) = (xs[0], xs[xs.len() - 1]);
    let mut k = (lo / period).floor() as usize + 1;
    while (k as f64) * period < hi && pts.len() < MAX_BREAKPOINTS {
        pts.push(k as f64 * period);
        k += 1;
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * b.abs().max(1.0));

    let head = integrate_tanh_sinh(integrand, pts[0], pts[1], tol / 4.0)?;
    if pts.len() == 2 {
        return Ok(head.settle(tol));
    }
    let body = integrate_adaptive_breakpoints(integrand, &pts[1..], 0.75 * tol)?;
    Ok(head.join(body).settle(tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::integrate_adaptive;
    use std::f64::consts::PI;

    fn heat_half(t: f64, x: f64, xp: f64) -> f64 {
        (4.0 * PI * t).powf(-0.5)
            * ((-(x - xp) * (x - xp) / (4.0 * t)).exp() - (-(x + xp) * (x + xp) / (4.0 * t)).exp())
    }

    #[test]
    fn gaussian_multiplier_half_integer() {
        let phi = MultiplierSpec::Gaussian { t: 1.0, p: 0.0 };
        let r = spectral_kernel_quadrature(0.5, &phi, 1.0, 2.0, 1e-11).unwrap();
        let exact = heat_half(1.0, 1.0, 2.0);
        assert!((exact - 0.189_963_072_427_954).abs() < 1e-14);
        assert!((r.value.re - exact).abs() < 1e-8, "{r:?} vs {exact}");
        assert!(r.is_converged());
    }

    #[test]
    fn rational_multiplier_half_integer() {
        // (1/2a)(e^{−a|x−x′|} − e^{−a(x+x′)}) at a = 1
        let phi = MultiplierSpec::Rational { lambda2: Complex64::new(-1.0, 0.0), p: 0.0, mu: 0.0 };
        for &(x, xp) in &[(1.0, 2.0), (0.8, 1.7), (1.3, 1.3), (0.2, 3.0)] {
            let r = spectral_kernel_quadrature(0.5, &phi, x, xp, 1e-10).unwrap();
            let exact = 0.5 * ((-(x - xp as f64).abs()).exp() - (-(x + xp)).exp());
            assert!((r.value.re - exact).abs() < 1e-8, "{x} {xp}: {r:?} vs {exact}");
            assert!(r.value.im.abs() < 1e-10);
        }
    }

    #[test]
    fn rational_multiplier_with_power() {
        // μ = 1 squares the resolvent: ∂/∂(λ²) of the μ = 0 value
        let nu = 0.5;
        let (x, xp) = (0.9, 1.4);
        let r0 = |a: f64| 0.5 / a * ((-a * (xp - x)).exp() - (-a * (x + xp)).exp());
        let a: f64 = 1.1;
        // d/d(λ²) with λ² = −a² is −(1/2a) d/da
        let h = 1e-5;
        let deriv = -(r0(a + h) - r0(a - h)) / (2.0 * h) / (2.0 * a);
        let phi = MultiplierSpec::Rational { lambda2: Complex64::new(-a * a, 0.0), p: 0.0, mu: 1.0 };
        let r = spectral_kernel_quadrature(nu, &phi, x, xp, 1e-11).unwrap();
        assert!((r.value.re - deriv).abs() < 1e-8, "{} vs {}", r.value.re, deriv);
    }

    #[test]
    fn window_is_enforced() {
        let bad = MultiplierSpec::Rational { lambda2: Complex64::new(-1.0, 0.0), p: 2.5, mu: 0.0 };
        assert!(spectral_kernel_quadrature(0.3, &bad, 1.0, 2.0, 1e-8).is_err());
        let bad = MultiplierSpec::Gaussian { t: 1.0, p: -2.9 };
        assert!(spectral_kernel_quadrature(0.3, &bad, 1.0, 2.0, 1e-8).is_err());
        let bad = MultiplierSpec::Rational { lambda2: Complex64::new(1.0, 0.0), p: 0.0, mu: 0.0 };
        assert!(bad.validate(0.3).is_err());
        assert!(MultiplierSpec::Gaussian { t: 0.0, p: 0.0 }.validate(0.3).is_err());
    }

    #[test]
    fn hankel_zero_and_eigenfunction() {
        let r = hankel_transform(0.4, |_| 0.0, 1.0, 1e-10).unwrap();
        assert_eq!(r.value.re, 0.0);
        let nu = 0.4;
        for &w in &[0.5, 1.0, 2.0] {
            let r = hankel_transform(nu, |x: f64| x.powf(nu + 0.5) * (-x * x / 2.0).exp(), w, 1e-11).unwrap();
            let exact = w.powf(nu + 0.5) * (-w * w / 2.0).exp();
            assert!((r.value.re - exact).abs() < 1e-8, "{w}: {r:?} vs {exact}");
        }
    }

    #[test]
    fn hankel_involution() {
        let nu = 0.5;
        let f = |x: f64| x.powf(1.5) * (-x * x).exp();
        let x0 = 1.3;
        let inner = |w: f64| hankel_transform(nu, f, w, 1e-11).unwrap().value.re;
        let back = hankel_transform(nu, inner, x0, 1e-9).unwrap();
        assert!((back.value.re - f(x0)).abs() < 1e-6, "{back:?} vs {}", f(x0));
    }

    #[test]
    fn plancherel() {
        for &nu in &[-0.5, 0.5, 1.2] {
            let f1 = move |x: f64| x.powf(nu + 0.5) * (-x * x).exp();
            let f2 = move |x: f64| x.powf(nu + 2.5) * (-0.5 * x * x).exp() / (1.0 + x * x);
            let tests: [&dyn Fn(f64) -> f64; 2] = [&f1, &f2];
            for f in tests {
                let norm_f = integrate_adaptive(|x| Complex64::new(f(x).powi(2), 0.0), 0.0, 12.0, 1e-13)
                    .unwrap()
                    .value
                    .re;
                let norm_h = integrate_adaptive(
                    |w| Complex64::new(hankel_transform(nu, f, w, 1e-12).unwrap().value.re.powi(2), 0.0),
                    0.0,
                    12.0,
                    1e-11,
                )
                .unwrap()
                .value
                .re;
                assert!(((norm_h - norm_f) / norm_f).abs() < 1e-6, "nu={nu}: {norm_h} vs {norm_f}");
            }
        }
    }

    #[test]
    fn diagonalizes_the_bessel_operator() {
        // f = x^{ν+1/2} e^{−x²}: L f = f″ + (1/4 − ν²) f / x², worked out symbolically
        let nu = 0.7;
        let a = nu + 0.5;
        let f = move |x: f64| x.powf(a) * (-x * x).exp();
        let lf = move |x: f64| {
            let e = (-x * x).exp();
            let f2 = (a * (a - 1.0) * x.powf(a - 2.0) - 2.0 * (2.0 * a + 1.0) * x.powf(a) + 4.0 * x.powf(a + 2.0)) * e;
            f2 + (0.25 - nu * nu) * x.powf(a - 2.0) * e
        };
        for &w in &[0.4, 1.0, 1.7, 2.6] {
            let lhs = hankel_transform(nu, lf, w, 1e-11).unwrap().value.re;
            let rhs = -w * w * hankel_transform(nu, f, w, 1e-11).unwrap().value.re;
            assert!((lhs - rhs).abs() < 1e-6, "{w}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn tabulated_input() {
        let nu = 0.4;
        let xs: Vec<f64> = (0..=1200).map(|i| i as f64 * 0.01).collect();
        let fs: Vec<f64> = xs.iter().map(|&x| x.powf(nu + 0.5) * (-x * x / 2.0).exp()).collect();
        let r = hankel_transform_tabulated(nu, &xs, &fs, 1.0, 1e-10).unwrap();
        let exact = (-0.5f64).exp();
        assert!((r.value.re - exact).abs() < 1e-4, "{r:?}");
        assert!(hankel_transform_tabulated(nu, &[1.0, 0.5], &[0.0, 0.0], 1.0, 1e-8).is_err());
    }
}
