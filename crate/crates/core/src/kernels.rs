//! Closed-form Schwartz kernels of multipliers of `L_ν`: the heat kernel and
//! its weighted and oscillatory (Schrödinger) variants, the resolvent, the
//! weighted resolvent and the generalized resolvent, together with the
//! two-sided evaluator of the `J·H⁽¹⁾` product reduction.
//!
//! Conventions: the Humbert function in the weighted heat kernel is taken at
//! `(−x²/4t, −x′²/4t)`, which is what reproduces the classical heat kernel at
//! `p = 0`; resolvent multipliers are `(ω² − λ²)^{−1−μ}`, positive for real
//! `λ² < 0`; and `λ` is the square root of `λ²` with `Im λ > 0`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::bessel::{bessel_j, hankel1, i_scaled_real, k_scaled_real, BesselOrder};
use crate::error::{Error, Result};
use crate::hyper::{humbert_psi2_complex, hyp0f1_series, kampe_de_feriet_complex, KdFParams, Psi2Params};
use crate::numerics::{cpow, gamma, sqrt_upper, EvalPath, SeriesResult};
use crate::quad::{spectral_kernel_quadrature, MultiplierSpec, QuadStatus};

/// Which kernel to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelKind {
    Heat,
    WeightedHeat,
    Schrodinger,
    Resolvent,
    WeightedResolvent,
    GeneralizedResolvent,
}

impl KernelKind {
    pub const ALL: [KernelKind; 6] = [
        KernelKind::Heat,
        KernelKind::WeightedHeat,
        KernelKind::Schrodinger,
        KernelKind::Resolvent,
        KernelKind::WeightedResolvent,
        KernelKind::GeneralizedResolvent,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            KernelKind::Heat => "heat",
            KernelKind::WeightedHeat => "wheat",
            KernelKind::Schrodinger => "schrod",
            KernelKind::Resolvent => "resolvent",
            KernelKind::WeightedResolvent => "wresolvent",
            KernelKind::GeneralizedResolvent => "gresolvent",
        }
    }

    /// Whether the kernel takes a time argument (otherwise a spectral one).
    pub fn uses_time(self) -> bool {
        matches!(self, KernelKind::Heat | KernelKind::WeightedHeat | KernelKind::Schrodinger)
    }
}

impl fmt::Display for KernelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for KernelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        KernelKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::domain(format!("unknown kernel '{s}'")))
    }
}

/// Parameters shared by the kernel family; each kernel reads the fields it
/// needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParams {
    pub nu: f64,
    pub p: f64,
    pub mu: f64,
    pub lambda2: Complex64,
    pub t: Complex64,
}

impl Default for KernelParams {
    fn default() -> Self {
        KernelParams {
            nu: 0.0,
            p: 0.0,
            mu: 0.0,
            lambda2: Complex64::new(-1.0, 0.0),
            t: Complex64::new(1.0, 0.0),
        }
    }
}

impl KernelParams {
    /// Checks the parameter window of `kind`.
    pub fn validate(&self, kind: KernelKind) -> Result<()> {
        check_order(self.nu)?;
        match kind {
            KernelKind::Heat => check_real_time(self.t)?,
            KernelKind::WeightedHeat | KernelKind::Schrodinger => {
                check_real_time(self.t)?;
                check_heat_weight(self.nu, self.p)?;
            }
            KernelKind::Resolvent => check_lambda2(self.lambda2)?,
            KernelKind::WeightedResolvent => {
                check_lambda2(self.lambda2)?;
                check_weighted_window(self.nu, self.p)?;
            }
            KernelKind::GeneralizedResolvent => {
                check_lambda2(self.lambda2)?;
                check_generalized_window(self.nu, self.mu, self.p)?;
            }
        }
        Ok(())
    }
}

fn check_order(nu: f64) -> Result<()> {
    if !(nu > -1.0) || !nu.is_finite() {
        return Err(Error::domain(format!("order must exceed -1, got {nu}")));
    }
    Ok(())
}

fn check_real_time(t: Complex64) -> Result<()> {
    if t.im != 0.0 || !(t.re > 0.0) || !t.re.is_finite() {
        return Err(Error::domain(format!("time must be real and positive, got {t}")));
    }
    Ok(())
}

fn check_heat_weight(nu: f64, p: f64) -> Result<()> {
    if !p.is_finite() || !(p > -2.0 * (nu + 1.0)) {
        return Err(Error::domain(format!("need p > -2(nu+1), got p = {p}, nu = {nu}")));
    }
    Ok(())
}

fn check_lambda2(lambda2: Complex64) -> Result<()> {
    if !(lambda2.re < 0.0) || !lambda2.im.is_finite() {
        return Err(Error::domain(format!("Re lambda2 must be negative, got {lambda2}")));
    }
    Ok(())
}

fn check_weighted_window(nu: f64, p: f64) -> Result<()> {
    let b = 0.5 * p + nu;
    if !(b > -1.0 && b < 0.0) {
        return Err(Error::domain(format!("need -1 < p/2 + nu < 0, got {b}")));
    }
    Ok(())
}

fn check_generalized_window(nu: f64, mu: f64, p: f64) -> Result<()> {
    let b = 0.5 * p + nu;
    if !(mu > -1.0) || !mu.is_finite() {
        return Err(Error::domain(format!("need mu > -1, got {mu}")));
    }
    if !(b > -1.0 && b < mu) {
        return Err(Error::domain(format!("need -1 < p/2 + nu < mu, got {b} with mu = {mu}")));
    }
    let c = b + 1.0 - mu;
    if c <= 0.0 && c == c.round() {
        return Err(Error::VanishingDenominator(format!("p/2 + nu + 1 - mu = {c}")));
    }
    Ok(())
}

fn check_points(x: f64, xp: f64) -> Result<()> {
    for (name, v) in [("x", x), ("x'", xp)] {
        if !(v >= 0.0) || !v.is_finite() {
            return Err(Error::domain(format!("{name} must be non-negative, got {v}")));
        }
    }
    Ok(())
}

/// Kernel value at a point on the boundary `x = 0` or `x′ = 0`, which is `0`
/// for `ν > 0` and undefined otherwise. `None` away from the boundary.
fn boundary_value(nu: f64, x: f64, xp: f64) -> Option<Result<f64>> {
    if x > 0.0 && xp > 0.0 {
        return None;
    }
    Some(if nu > 0.0 {
        Ok(0.0)
    } else {
        Err(Error::domain(format!(
            "kernel is not defined on the boundary for nu = {nu} <= 0"
        )))
    })
}

fn exact_series(value: Complex64) -> SeriesResult {
    SeriesResult {
        value,
        abs_error_estimate: 0.0,
        terms_used: 0,
        max_term_magnitude: value.norm(),
        converged: true,
        precision_loss: false,
        extended_precision: false,
        path: EvalPath::Series,
    }
}

// ---------------------------------------------------------------------------
// heat family

/// `H⁰_ν(t, x, x′) = √(xx′)/(2t) e^{−(x²+x′²)/4t} I_ν(xx′/2t)`.
pub fn heat_kernel(nu: f64, t: f64, x: f64, xp: f64) -> Result<f64> {
    check_order(nu)?;
    check_real_time(Complex64::new(t, 0.0))?;
    check_points(x, xp)?;
    if let Some(v) = boundary_value(nu, x, xp) {
        return v;
    }
    let z = x * xp / (2.0 * t);
    let gap = (x - xp) * (x - xp) / (4.0 * t);
    let v = (x * xp).sqrt() / (2.0 * t) * (-gap).exp() * i_scaled_real(nu, z);
    if !(v >= f64::MIN_POSITIVE) {
        return Err(Error::Underflow(format!(
            "heat kernel below the double range ((x-x')^2/4t = {gap:.1})"
        )));
    }
    Ok(v)
}

/// `Γ(p/2+1+ν)(x/2)^{ν+½}(x′/2)^{ν+½} / (Γ(ν+1)² t^{p/2+ν+1})`.
pub fn weighted_heat_prefactor(nu: f64, p: f64, t: Complex64, x: f64, xp: f64) -> Result<Complex64> {
    let a = 0.5 * p + 1.0 + nu;
    let g = gamma(a)? / gamma(nu + 1.0)?.powi(2);
    let powers = (0.5 * x).powf(nu + 0.5) * (0.5 * xp).powf(nu + 0.5);
    Ok(cpow(t, -a) * (g * powers))
}

/// Series path of the weighted heat kernel at complex time `t` with
/// `Re t ≥ 0`, `t ≠ 0`; no fallback.
pub fn weighted_heat_series(
    nu: f64,
    p: f64,
    t: Complex64,
    x: f64,
    xp: f64,
    tol: f64,
) -> Result<SeriesResult> {
    check_order(nu)?;
    check_heat_weight(nu, p)?;
    check_points(x, xp)?;
    if !(t.re >= 0.0) || t == Complex64::new(0.0, 0.0) || !t.re.is_finite() || !t.im.is_finite() {
        return Err(Error::domain(format!("time must satisfy Re t >= 0, t != 0, got {t}")));
    }
    if let Some(v) = boundary_value(nu, x, xp) {
        return v.map(|v| exact_series(Complex64::new(v, 0.0)));
    }
    let params = Psi2Params::new(0.5 * p + 1.0 + nu, nu + 1.0, nu + 1.0)?;
    let four_t = 4.0 * t;
    let s = humbert_psi2_complex(&params, -(x * x) / four_t, -(xp * xp) / four_t, tol)?;
    let pre = weighted_heat_prefactor(nu, p, t, x, xp)?;
    Ok(s.scaled(pre))
}

fn from_quadrature(r: crate::quad::QuadratureResult) -> SeriesResult {
    SeriesResult {
        value: r.value,
        abs_error_estimate: r.abs_error_estimate,
        terms_used: r.evaluations,
        max_term_magnitude: r.value.norm(),
        converged: r.status != QuadStatus::MaxSubdivisions,
        precision_loss: false,
        extended_precision: false,
        path: EvalPath::Quadrature,
    }
}

/// Sum of the Humbert arguments above which the weighted heat kernel goes
/// straight to quadrature.
const SERIES_ARGUMENT_LIMIT: f64 = 50.0;

/// `H^p_ν(t, x, x′)`, the kernel of `e^{tL_ν}(√−L_ν)^p`.
///
/// The Humbert series is used unless it reports precision loss or fails to
/// converge, in which case the spectral integral with `e^{−tω²}ω^p` is used.
pub fn weighted_heat_kernel(nu: f64, p: f64, t: f64, x: f64, xp: f64, tol: f64) -> Result<SeriesResult> {
    check_real_time(Complex64::new(t, 0.0))?;
    // beyond this the terms exceed the value by roughly e^50 and even the
    // double-double resummation cannot recover it
    let hopeless = (x * x + xp * xp) / (4.0 * t) > SERIES_ARGUMENT_LIMIT;
    // terms that overflow f64 are a symptom of the same cancellation
    let series = if hopeless {
        Err(Error::Overflow("series skipped".into()))
    } else {
        weighted_heat_series(nu, p, Complex64::new(t, 0.0), x, xp, tol)
    };
    let scale = match series {
        Ok(s) if s.converged && !s.precision_loss => return Ok(s),
        Ok(s) => s.value.norm().max(f64::MIN_POSITIVE).min(1.0),
        Err(Error::Overflow(_)) => 1.0,
        Err(e) => return Err(e),
    };
    let quad_tol = (tol * scale).max(1e-14);
    let q = spectral_kernel_quadrature(nu, &MultiplierSpec::Gaussian { t, p }, x, xp, quad_tol)?;
    Ok(from_quadrature(q))
}

/// Kernel of `e^{itL_ν}(√−L_ν)^p`, the continuation `t → it` of the weighted
/// heat kernel in both Humbert arguments.
pub fn schrodinger_kernel(nu: f64, p: f64, t: f64, x: f64, xp: f64, tol: f64) -> Result<SeriesResult> {
    check_real_time(Complex64::new(t, 0.0))?;
    weighted_heat_series(nu, p, Complex64::new(0.0, t), x, xp, tol)
}

// ---------------------------------------------------------------------------
// resolvents

/// `R⁰_ν(λ, x, x′) = (iπ/2)√(xx′) J_ν(λx_<) H⁽¹⁾_ν(λx_>)`.
///
/// For real `λ² = −a²` this is evaluated as `√(xx′) I_ν(ax_<) K_ν(ax_>)`.
pub fn resolvent_kernel(nu: f64, lambda2: Complex64, x: f64, xp: f64) -> Result<Complex64> {
    check_order(nu)?;
    check_lambda2(lambda2)?;
    check_points(x, xp)?;
    if let Some(v) = boundary_value(nu, x, xp) {
        return v.map(|v| Complex64::new(v, 0.0));
    }
    let (lo, hi) = if x <= xp { (x, xp) } else { (xp, x) };
    if lambda2.im == 0.0 {
        let a = (-lambda2.re).sqrt();
        let v = (x * xp).sqrt()
            * i_scaled_real(nu, a * lo)
            * k_scaled_real(nu, a * hi)
            * (-a * (hi - lo)).exp();
        return Ok(Complex64::new(v, 0.0));
    }
    resolvent_complex_path(nu, lambda2, lo, hi)
}

fn resolvent_complex_path(nu: f64, lambda2: Complex64, lo: f64, hi: f64) -> Result<Complex64> {
    let order = BesselOrder::new(nu)?;
    let lambda = sqrt_upper(lambda2);
    let j = bessel_j(order, lambda * lo)?;
    let h = hankel1(order, lambda * hi)?;
    Ok(Complex64::new(0.0, 0.5 * PI) * (lo * hi).sqrt() * j * h)
}

/// Product of the two `₀F₁(; ν+1; λ²x²/4)` factors with combined diagnostics.
fn product_0f1(nu: f64, lambda2: Complex64, x: f64, xp: f64) -> Result<SeriesResult> {
    let f1 = hyp0f1_series(nu + 1.0, lambda2 * (0.25 * x * x))?;
    let f2 = hyp0f1_series(nu + 1.0, lambda2 * (0.25 * xp * xp))?;
    Ok(SeriesResult {
        value: f1.value * f2.value,
        abs_error_estimate: f1.abs_error_estimate * f2.value.norm()
            + f2.abs_error_estimate * f1.value.norm(),
        terms_used: f1.terms_used + f2.terms_used,
        max_term_magnitude: f1.max_term_magnitude * f2.max_term_magnitude,
        converged: f1.converged && f2.converged,
        precision_loss: f1.precision_loss || f2.precision_loss,
        extended_precision: f1.extended_precision || f2.extended_precision,
        path: EvalPath::Series,
    })
}

/// Closed form for the kernel of `(L_ν + λ²)^{−1}(−L_ν)^{p/2}`,
/// `Γ(p/2+ν+1)Γ(−p/2−ν)/Γ(ν+1)² (−λ²)^{p/2+ν} (xx′/4)^{ν+½} F^{0:0}_{0:1}(λ²x²/4, λ²x′²/4)`,
/// with the double series evaluated as a product of two `₀F₁`.
pub fn weighted_resolvent_kernel(
    nu: f64,
    p: f64,
    lambda2: Complex64,
    x: f64,
    xp: f64,
    _tol: f64,
) -> Result<SeriesResult> {
    check_order(nu)?;
    check_lambda2(lambda2)?;
    check_weighted_window(nu, p)?;
    check_points(x, xp)?;
    if let Some(v) = boundary_value(nu, x, xp) {
        return v.map(|v| exact_series(Complex64::new(v, 0.0)));
    }
    let b = 0.5 * p + nu;
    let g = gamma(b + 1.0)? * gamma(-b)? / gamma(nu + 1.0)?.powi(2);
    let pre = cpow(-lambda2, b) * (g * (0.25 * x * xp).powf(nu + 0.5));
    Ok(product_0f1(nu, lambda2, x, xp)?.scaled(pre))
}

/// Closed form for the kernel of `(L_ν + λ²)^{−1−μ}(−L_ν)^{p/2}`,
/// `Γ(μ−p/2−ν)Γ(p/2+ν+1)/(Γ(μ+1)Γ(ν+1)²) (−λ²)^{p/2+ν−μ} (xx′/4)^{ν+½}`
/// times `F^{1:0}_{1:1}(p/2+ν+1 : p/2+ν+1−μ ; ν+1, ν+1 ; λ²x²/4, λ²x′²/4)`.
pub fn generalized_resolvent_kernel(
    nu: f64,
    mu: f64,
    p: f64,
    lambda2: Complex64,
    x: f64,
    xp: f64,
    tol: f64,
) -> Result<SeriesResult> {
    check_order(nu)?;
    check_lambda2(lambda2)?;
    check_generalized_window(nu, mu, p)?;
    check_points(x, xp)?;
    if let Some(v) = boundary_value(nu, x, xp) {
        return v.map(|v| exact_series(Complex64::new(v, 0.0)));
    }
    let b = 0.5 * p + nu;
    let g = gamma(mu - b)? * gamma(b + 1.0)? / (gamma(mu + 1.0)? * gamma(nu + 1.0)?.powi(2));
    let pre = cpow(-lambda2, b - mu) * (g * (0.25 * x * xp).powf(nu + 0.5));
    let params = KdFParams::coupled_1_1(b + 1.0, b + 1.0 - mu, nu + 1.0, nu + 1.0)?;
    let s = kampe_de_feriet_complex(
        &params,
        lambda2 * (0.25 * x * x),
        lambda2 * (0.25 * xp * xp),
        tol,
    )?;
    Ok(s.scaled(pre))
}

/// The `p = 0` display of the generalized resolvent,
/// `Γ(μ−ν)/(Γ(μ+1)Γ(ν+1)) (−λ²)^{ν−μ} (xx′/4)^{ν+½} F^{1:0}_{1:1}(ν+1 : ν+1−μ ; ν+1, ν+1)`.
pub fn generalized_resolvent_p0_display(
    nu: f64,
    mu: f64,
    lambda2: Complex64,
    x: f64,
    xp: f64,
    tol: f64,
) -> Result<SeriesResult> {
    check_order(nu)?;
    check_lambda2(lambda2)?;
    if !(mu > nu) || !(mu > -1.0) {
        return Err(Error::domain(format!("need mu > nu and mu > -1, got mu = {mu}, nu = {nu}")));
    }
    check_points(x, xp)?;
    if let Some(v) = boundary_value(nu, x, xp) {
        return v.map(|v| exact_series(Complex64::new(v, 0.0)));
    }
    let g = gamma(mu - nu)? / (gamma(mu + 1.0)? * gamma(nu + 1.0)?);
    let pre = cpow(-lambda2, nu - mu) * (g * (0.25 * x * xp).powf(nu + 0.5));
    let params = KdFParams::coupled_1_1(nu + 1.0, nu + 1.0 - mu, nu + 1.0, nu + 1.0)?;
    let s = kampe_de_feriet_complex(
        &params,
        lambda2 * (0.25 * x * x),
        lambda2 * (0.25 * xp * xp),
        tol,
    )?;
    Ok(s.scaled(pre))
}

/// Both sides of the claimed reduction
/// `J_ν(λx)H⁽¹⁾_ν(λx′) = Γ(−ν)(−λ²xx′/4)^{−ν}/(iπΓ(ν+1)) F^{0:0}_{0:1}(λ²x²/4, λ²x′²/4)`
/// at `λ = ia`, `x < x′`. The left side uses `J_ν(iax)H⁽¹⁾_ν(iax′) = (2/iπ) I_ν(ax) K_ν(ax′)`.
pub fn product_jh1_both_sides(nu: f64, a: f64, x: f64, xp: f64) -> Result<(Complex64, Complex64)> {
    if !(nu > -1.0 && nu < 0.0) {
        return Err(Error::domain(format!("need -1 < nu < 0, got {nu}")));
    }
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::domain(format!("a must be positive, got {a}")));
    }
    if !(x > 0.0 && x < xp) || !xp.is_finite() {
        return Err(Error::domain(format!("need 0 < x < x', got x = {x}, x' = {xp}")));
    }
    let ik = i_scaled_real(nu, a * x) * k_scaled_real(nu, a * xp) * (-a * (xp - x)).exp();
    let lhs = Complex64::new(0.0, -2.0 / PI) * ik;

    let lambda2 = Complex64::new(-a * a, 0.0);
    let f = product_0f1(nu, lambda2, x, xp)?.require_converged()?;
    let pre = gamma(-nu)? * (0.25 * a * a * x * xp).powf(-nu) / (PI * gamma(nu + 1.0)?);
    let rhs = f.value * pre / Complex64::new(0.0, 1.0);
    Ok((lhs, rhs))
}

/// Evaluates `kind` at one point; the entry used by grid evaluation.
pub fn evaluate(kind: KernelKind, params: &KernelParams, x: f64, xp: f64, tol: f64) -> Result<SeriesResult> {
    params.validate(kind)?;
    let KernelParams { nu, p, mu, lambda2, t } = *params;
    match kind {
        KernelKind::Heat => heat_kernel(nu, t.re, x, xp).map(|v| exact_series(Complex64::new(v, 0.0))),
        KernelKind::WeightedHeat => weighted_heat_kernel(nu, p, t.re, x, xp, tol),
        KernelKind::Schrodinger => schrodinger_kernel(nu, p, t.re, x, xp, tol),
        KernelKind::Resolvent => resolvent_kernel(nu, lambda2, x, xp).map(exact_series),
        KernelKind::WeightedResolvent => weighted_resolvent_kernel(nu, p, lambda2, x, xp, tol),
        KernelKind::GeneralizedResolvent => generalized_resolvent_kernel(nu, mu, p, lambda2, x, xp, tol),
    }
}
