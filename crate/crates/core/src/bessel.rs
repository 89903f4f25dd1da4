//! Bessel functions `J_ν, Y_ν, I_ν, K_ν` and `H⁽¹⁾_ν` of real order.
//!
//! Real arguments use the ascending series up to [`SERIES_CROSSOVER`] and the
//! Hankel asymptotic expansion beyond it. Complex arguments are served by the
//! ascending series inside the disc `|z| <= Z_SERIES`; outside it the
//! functions report [`Error::AccuracyDegraded`] instead of a value.
//! `K_ν` is computed by Temme's series for `x < 2` and Steed's continued
//! fraction otherwise, followed by upward recurrence in the order.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::dd::{ComplexDd, DoubleDouble};
use crate::error::{Error, Result};
use crate::numerics::{cos_pi, cpow, rgamma, sin_pi};

/// Radius of the disc in which complex arguments are supported.
pub const Z_SERIES: f64 = 30.0;
/// Real-argument switch between ascending series and asymptotic expansion.
pub const SERIES_CROSSOVER: f64 = 15.0;
/// Offset used for (near-)integer orders of `Y_ν`.
pub const INTEGER_ORDER_EPS: f64 = 1e-6;

const SERIES_EPS: f64 = 1e-17;
const MAX_SERIES_TERMS: usize = 500;
// oscillatory series beyond this modulus are summed in double-double
const DD_THRESHOLD: f64 = 5.0;

/// Order `ν > −1` of a Bessel function.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BesselOrder(f64);

impl BesselOrder {
    pub fn new(nu: f64) -> Result<Self> {
        if nu.is_finite() && nu > -1.0 {
            Ok(BesselOrder(nu))
        } else {
            Err(Error::domain(format!("Bessel order must satisfy nu > -1, got {nu}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for BesselOrder {
    type Error = Error;
    fn try_from(nu: f64) -> Result<Self> {
        BesselOrder::new(nu)
    }
}

fn near_integer(nu: f64) -> Option<f64> {
    let n = nu.round();
    ((nu - n).abs() < INTEGER_ORDER_EPS).then_some(n)
}

fn check_real_arg(x: f64, what: &str) -> Result<()> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::domain(format!("{what} requires a finite x >= 0, got {x}")));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// ascending series

/// `Σ (±z²/4)^k / (k! Γ(ν+k+1))` times `(z/2)^ν`; `sign = −1` gives `J`,
/// `+1` gives `I`. `nu` may be any real order that is not a negative integer.
fn ascending_series_real(nu: f64, x: f64, sign: f64) -> f64 {
    if x == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    if sign < 0.0 && x > DD_THRESHOLD {
        return ascending_series_complex_dd(nu, Complex64::new(x, 0.0), sign).re;
    }
    let q = sign * 0.25 * x * x;
    let lead = (0.5 * x).powf(nu) * rgamma(nu + 1.0);
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..MAX_SERIES_TERMS {
        let kf = k as f64;
        term *= q / (kf * (nu + kf));
        sum += term;
        if term.abs() < SERIES_EPS * sum.abs() && kf > 0.5 * x {
            break;
        }
    }
    lead * sum
}

fn ascending_series_complex(nu: f64, z: Complex64, sign: f64) -> Complex64 {
    if z == Complex64::new(0.0, 0.0) {
        return if nu == 0.0 { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
    }
    if z.norm() > DD_THRESHOLD {
        return ascending_series_complex_dd(nu, z, sign);
    }
    let q = sign * 0.25 * z * z;
    let lead = cpow(0.5 * z, nu) * rgamma(nu + 1.0);
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let half_mod = 0.5 * z.norm();
    for k in 1..MAX_SERIES_TERMS {
        let kf = k as f64;
        term *= q / (kf * (nu + kf));
        sum += term;
        if term.norm() < SERIES_EPS * sum.norm() && kf > half_mod {
            break;
        }
    }
    lead * sum
}

/// Same series with the sum carried in double-double; the terms grow to
/// about `e^{|z|}` before they cancel.
fn ascending_series_complex_dd(nu: f64, z: Complex64, sign: f64) -> Complex64 {
    let zd = ComplexDd::from(z);
    let quarter = DoubleDouble::new(0.25 * sign);
    let q = (zd * zd).scale(quarter);
    let lead = cpow(0.5 * z, nu) * rgamma(nu + 1.0);
    let mut term = ComplexDd::from(Complex64::new(1.0, 0.0));
    let mut sum = term;
    let half_mod = 0.5 * z.norm();
    let nu_d = DoubleDouble::new(nu);
    for k in 1..MAX_SERIES_TERMS {
        let kd = DoubleDouble::new(k as f64);
        let inv = DoubleDouble::ONE / (kd * (nu_d + kd));
        term = (term * q).scale(inv);
        sum = sum + term;
        if term.l1_norm() < 1e-34 * sum.l1_norm() && (k as f64) > half_mod {
            break;
        }
    }
    lead * sum.to_c64()
}

// ---------------------------------------------------------------------------
// Hankel asymptotic expansion

/// Coefficients `a_k(ν) = Π_{j=1}^k (4ν² − (2j−1)²) / (k! 8^k)` of the Hankel
/// expansion, truncated for arguments of modulus at least `min_modulus`.
#[derive(Debug, Clone)]
pub struct HankelExpansion {
    nu: f64,
    coeffs: Vec<f64>,
}

impl HankelExpansion {
    pub fn new(nu: f64, min_modulus: f64) -> Self {
        let mu = 4.0 * nu * nu;
        let mut coeffs = vec![1.0];
        let mut a = 1.0;
        let mut last = 1.0;
        for k in 1..200 {
            let kf = k as f64;
            let odd = 2.0 * kf - 1.0;
            a *= (mu - odd * odd) / (8.0 * kf);
            if a == 0.0 {
                break;
            }
            let mag = a.abs() / min_modulus.powi(k);
            if mag > last {
                break;
            }
            coeffs.push(a);
            last = mag;
            if mag < 1e-18 {
                break;
            }
        }
        HankelExpansion { nu, coeffs }
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn terms(&self) -> usize {
        self.coeffs.len()
    }

    /// `Σ_k (σ i)^k a_k / u^k`, the slowly varying factor of `H⁽¹⁾` (σ = +1)
    /// or `H⁽²⁾` (σ = −1).
    pub fn amplitude(&self, u: Complex64, sigma: f64) -> Complex64 {
        let step = Complex64::new(0.0, sigma) / u;
        let mut p = Complex64::new(1.0, 0.0);
        let mut sum = Complex64::new(0.0, 0.0);
        for &a in &self.coeffs {
            sum += a * p;
            p *= step;
        }
        sum
    }

    /// Phase offset `νπ/2 + π/4` of the Hankel functions.
    pub fn phase_offset(&self) -> f64 {
        (0.5 * self.nu + 0.25) * PI
    }

    /// Returns `(P, Q)` for real `x`, where `J = √(2/πx)(P cos χ − Q sin χ)`.
    fn p_q(&self, x: f64) -> (f64, f64) {
        let mut p = 0.0;
        let mut q = 0.0;
        let mut xp = 1.0;
        for (k, &a) in self.coeffs.iter().enumerate() {
            let t = a / xp;
            match k % 4 {
                0 => p += t,
                1 => q += t,
                2 => p -= t,
                _ => q -= t,
            }
            xp *= x;
        }
        (p, q)
    }

    fn scaled_i_sum(&self, x: f64) -> f64 {
        let mut s = 0.0;
        let mut xp = 1.0;
        for (k, &a) in self.coeffs.iter().enumerate() {
            let t = a / xp;
            if k % 2 == 0 {
                s += t;
            } else {
                s -= t;
            }
            xp *= x;
        }
        s
    }
}

fn jy_asymptotic(nu: f64, x: f64) -> (f64, f64) {
    let h = HankelExpansion::new(nu, x);
    let (p, q) = h.p_q(x);
    let chi = x - h.phase_offset();
    let (s, c) = chi.sin_cos();
    let amp = (2.0 / (PI * x)).sqrt();
    (amp * (p * c - q * s), amp * (p * s + q * c))
}

// ---------------------------------------------------------------------------
// J and Y

/// Real-argument `J_ν(x)` for `x >= 0`; any real order that is not a
/// negative integer (negative orders are needed by the reflection formula).
pub(crate) fn j_real(nu: f64, x: f64) -> f64 {
    if x > SERIES_CROSSOVER {
        jy_asymptotic(nu, x).0
    } else {
        ascending_series_real(nu, x, -1.0)
    }
}

fn y_real_noninteger(nu: f64, x: f64) -> f64 {
    (j_real(nu, x) * cos_pi(nu) - j_real(-nu, x)) / sin_pi(nu)
}

pub(crate) fn y_real(nu: f64, x: f64) -> f64 {
    if x > SERIES_CROSSOVER {
        return jy_asymptotic(nu, x).1;
    }
    match near_integer(nu) {
        None => y_real_noninteger(nu, x),
        Some(n) => {
            let lo = y_real_noninteger(n - INTEGER_ORDER_EPS, x);
            let hi = y_real_noninteger(n + INTEGER_ORDER_EPS, x);
            lo + (nu - n + INTEGER_ORDER_EPS) / (2.0 * INTEGER_ORDER_EPS) * (hi - lo)
        }
    }
}

/// `J_ν(x)` for real `x >= 0`.
pub fn bessel_j_real(nu: BesselOrder, x: f64) -> Result<f64> {
    check_real_arg(x, "bessel_j")?;
    if x == 0.0 && nu.0 < 0.0 {
        return Err(Error::domain("J_nu(0) is singular for nu < 0"));
    }
    Ok(j_real(nu.0, x))
}

/// `Y_ν(x)` for real `x > 0`.
pub fn bessel_y_real(nu: BesselOrder, x: f64) -> Result<f64> {
    check_real_arg(x, "bessel_y")?;
    if x == 0.0 {
        return Err(Error::domain("Y_nu(0) is singular"));
    }
    Ok(y_real(nu.0, x))
}

fn is_positive_real(z: Complex64) -> bool {
    z.im == 0.0 && z.re > 0.0
}

fn check_disc(z: Complex64) -> Result<()> {
    let m = z.norm();
    if !m.is_finite() {
        return Err(Error::NonFinite(format!("Bessel argument {z}")));
    }
    if m > Z_SERIES {
        return Err(Error::AccuracyDegraded {
            modulus: m,
            limit: Z_SERIES,
        });
    }
    Ok(())
}

/// `J_ν(z)`, principal branch of `(z/2)^ν`.
pub fn bessel_j(nu: BesselOrder, z: Complex64) -> Result<Complex64> {
    if is_positive_real(z) {
        return Ok(Complex64::new(j_real(nu.0, z.re), 0.0));
    }
    if z.norm() == 0.0 && nu.0 < 0.0 {
        return Err(Error::domain("J_nu(0) is singular for nu < 0"));
    }
    check_disc(z)?;
    Ok(ascending_series_complex(nu.0, z, -1.0))
}

fn y_complex_noninteger(nu: f64, z: Complex64) -> Complex64 {
    (ascending_series_complex(nu, z, -1.0) * cos_pi(nu) - ascending_series_complex(-nu, z, -1.0))
        / sin_pi(nu)
}

/// `Y_ν(z)`; integer orders by interpolation between `ν ± ε`.
pub fn bessel_y(nu: BesselOrder, z: Complex64) -> Result<Complex64> {
    if is_positive_real(z) {
        return Ok(Complex64::new(y_real(nu.0, z.re), 0.0));
    }
    if z.norm() == 0.0 {
        return Err(Error::domain("Y_nu(0) is singular"));
    }
    check_disc(z)?;
    Ok(match near_integer(nu.0) {
        None => y_complex_noninteger(nu.0, z),
        Some(n) => {
            let lo = y_complex_noninteger(n - INTEGER_ORDER_EPS, z);
            let hi = y_complex_noninteger(n + INTEGER_ORDER_EPS, z);
            lo + (hi - lo) * ((nu.0 - n + INTEGER_ORDER_EPS) / (2.0 * INTEGER_ORDER_EPS))
        }
    })
}

/// `H⁽¹⁾_ν(z) = J_ν(z) + i Y_ν(z)`.
pub fn hankel1(nu: BesselOrder, z: Complex64) -> Result<Complex64> {
    let j = bessel_j(nu, z)?;
    let y = bessel_y(nu, z)?;
    Ok(j + Complex64::i() * y)
}

// ---------------------------------------------------------------------------
// I and K

/// `e^{−x} I_ν(x)`, any real order that is not a negative integer for the
/// series part. Asymptotic branch uses `|ν|`, which is accurate for
/// `x > SERIES_CROSSOVER` since `I_{−ν} − I_ν = O(e^{−x})`.
pub(crate) fn i_scaled_real(nu: f64, x: f64) -> f64 {
    if x > SERIES_CROSSOVER {
        let h = HankelExpansion::new(nu, x);
        h.scaled_i_sum(x) / (2.0 * PI * x).sqrt()
    } else {
        ascending_series_real(nu, x, 1.0) * (-x).exp()
    }
}

/// `e^{−x} I_ν(x)` for `x >= 0`.
pub fn bessel_i_scaled(nu: BesselOrder, x: f64) -> Result<f64> {
    check_real_arg(x, "bessel_i")?;
    if x == 0.0 && nu.0 < 0.0 {
        return Err(Error::domain("I_nu(0) is singular for nu < 0"));
    }
    Ok(i_scaled_real(nu.0, x))
}

/// `I_ν(x)` for `x >= 0`; overflow is reported past `x ≈ 709`.
pub fn bessel_i(nu: BesselOrder, x: f64) -> Result<f64> {
    let s = bessel_i_scaled(nu, x)?;
    let v = s * x.exp();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow(format!("I_{}({x})", nu.0)))
    }
}

// coefficients c_k of 1/Γ(z) = Σ c_k z^k
const RGAMMA_TAYLOR: [f64; 26] = [
    1.0,
    0.577_215_664_901_532_9,
    -0.655_878_071_520_253_8,
    -0.042_002_635_034_095_2,
    0.166_538_611_382_291_5,
    -0.042_197_734_555_544_3,
    -0.009_621_971_527_877_0,
    0.007_218_943_246_663_0,
    -0.001_165_167_591_859_1,
    -0.000_215_241_674_114_9,
    0.000_128_050_282_388_2,
    -0.000_020_134_854_780_7,
    -0.000_001_250_493_482_1,
    0.000_001_133_027_232_0,
    -0.000_000_205_633_841_7,
    0.000_000_006_116_095_0,
    0.000_000_005_002_007_5,
    -0.000_000_001_181_274_6,
    0.000_000_000_104_342_7,
    0.000_000_000_007_782_3,
    -0.000_000_000_003_696_8,
    0.000_000_000_000_510_0,
    -0.000_000_000_000_020_6,
    -0.000_000_000_000_005_4,
    0.000_000_000_000_001_4,
    0.000_000_000_000_000_1,
];

/// `(gam1, gam2, 1/Γ(1+μ), 1/Γ(1−μ))` for `|μ| <= 1/2`, where
/// `gam1 = (1/Γ(1−μ) − 1/Γ(1+μ))/(2μ)` and `gam2 = (1/Γ(1−μ) + 1/Γ(1+μ))/2`.
fn temme_gammas(mu: f64) -> (f64, f64, f64, f64) {
    // 1/Γ(1+μ) = Σ_j c_{j+1} μ^j
    let mut even = 0.0;
    let mut odd = 0.0;
    let mu2 = mu * mu;
    let mut p = 1.0;
    for j in (0..RGAMMA_TAYLOR.len() - 1).step_by(2) {
        even += RGAMMA_TAYLOR[j] * p;
        odd += RGAMMA_TAYLOR[j + 1] * p;
        p *= mu2;
    }
    // 1/Γ(1+μ) = even + μ·odd, 1/Γ(1−μ) = even − μ·odd
    let gampl = even + mu * odd;
    let gammi = even - mu * odd;
    (-odd, even, gampl, gammi)
}

/// `(e^x K_μ(x), e^x K_{μ+1}(x))` for `|μ| <= 1/2`.
fn k_pair_scaled(mu: f64, x: f64) -> (f64, f64) {
    const EPS: f64 = 1e-17;
    const MAXIT: usize = 10_000;
    let mu2 = mu * mu;
    if x < 2.0 {
        let x2 = 0.5 * x;
        let pimu = PI * mu;
        let fact = if pimu.abs() < 1e-15 { 1.0 } else { pimu / pimu.sin() };
        let d = -x2.ln();
        let e = mu * d;
        let fact2 = if e.abs() < 1e-15 { 1.0 } else { e.sinh() / e };
        let (gam1, gam2, gampl, gammi) = temme_gammas(mu);
        let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
        let mut sum = ff;
        let ee = e.exp();
        let mut p = 0.5 * ee / gampl;
        let mut q = 0.5 / (ee * gammi);
        let mut c = 1.0;
        let dd = x2 * x2;
        let mut sum1 = p;
        for i in 1..MAXIT {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - mu2);
            c *= dd / fi;
            p /= fi - mu;
            q /= fi + mu;
            let del = c * ff;
            sum += del;
            sum1 += c * (p - fi * ff);
            if del.abs() < sum.abs() * EPS {
                break;
            }
        }
        let scale = x.exp();
        (sum * scale, sum1 * (2.0 / x) * scale)
    } else {
        // Steed's continued fraction CF2
        let mut b = 2.0 * (1.0 + x);
        let mut d = 1.0 / b;
        let mut delh = d;
        let mut h = d;
        let mut q1 = 0.0;
        let mut q2 = 1.0;
        let a1 = 0.25 - mu2;
        let mut q = a1;
        let mut c = a1;
        let mut a = -a1;
        let mut s = 1.0 + q * delh;
        for i in 2..MAXIT {
            let fi = i as f64;
            a -= 2.0 * (fi - 1.0);
            c = -a * c / fi;
            let qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += c * qnew;
            b += 2.0;
            d = 1.0 / (b + a * d);
            delh = (b * d - 1.0) * delh;
            h += delh;
            let dels = q * delh;
            s += dels;
            if (dels / s).abs() < EPS {
                break;
            }
        }
        let h = a1 * h;
        let kmu = (PI / (2.0 * x)).sqrt() / s;
        let k1 = kmu * (mu + x + 0.5 - h) / x;
        (kmu, k1)
    }
}

/// `e^x K_ν(x)` for any real order.
pub(crate) fn k_scaled_real(nu: f64, x: f64) -> f64 {
    let nu = nu.abs();
    let nl = (nu + 0.5).floor();
    let mu = nu - nl;
    let (mut kmu, mut k1) = k_pair_scaled(mu, x);
    let xi2 = 2.0 / x;
    for i in 1..=(nl as usize) {
        let next = (mu + i as f64) * xi2 * k1 + kmu;
        kmu = k1;
        k1 = next;
    }
    kmu
}

/// `e^x K_ν(x)` for `x > 0`.
pub fn bessel_k_scaled(nu: BesselOrder, x: f64) -> Result<f64> {
    check_real_arg(x, "bessel_k")?;
    if x == 0.0 {
        return Err(Error::domain("K_nu(0) is singular"));
    }
    Ok(k_scaled_real(nu.0, x))
}

/// `K_ν(x)` for `x > 0`; underflow is reported when `e^{−x}` vanishes.
pub fn bessel_k(nu: BesselOrder, x: f64) -> Result<f64> {
    let s = bessel_k_scaled(nu, x)?;
    let v = s * (-x).exp();
    if v == 0.0 || !v.is_normal() {
        return Err(Error::Underflow(format!("K_{}({x})", nu.0)));
    }
    Ok(v)
}
