//! Scalar foundations shared by the rest of the crate: the gamma function,
//! Pochhammer symbols, principal-branch powers and the result record used by
//! every series evaluation.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Double-precision complex value used for spectral parameters and for the
/// values of complex-valued kernels.
pub type ComplexScalar = Complex64;

/// Which evaluation route produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalPath {
    Series,
    Quadrature,
}

impl EvalPath {
    pub fn as_str(self) -> &'static str {
        match self {
            EvalPath::Series => "series",
            EvalPath::Quadrature => "quadrature",
        }
    }
}

/// Value of a (double) series with its truncation diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult {
    pub value: ComplexScalar,
    /// Estimated truncation error (magnitude of the last retained blocks).
    pub abs_error_estimate: f64,
    pub terms_used: usize,
    /// Largest single term magnitude encountered while summing.
    pub max_term_magnitude: f64,
    pub converged: bool,
    /// The cancellation ratio exceeded what the working precision can absorb.
    pub precision_loss: bool,
    /// The sum was carried out in double-double arithmetic.
    pub extended_precision: bool,
    pub path: EvalPath,
}

impl SeriesResult {
    /// `max_term_magnitude / max(|value|, tiny)`.
    pub fn cancellation(&self) -> f64 {
        self.max_term_magnitude / self.value.norm().max(f64::MIN_POSITIVE)
    }

    /// Turns a non-converged or precision-lost result into an error.
    pub fn require_converged(self) -> Result<Self> {
        if !self.converged {
            return Err(Error::NotConverged {
                terms: self.terms_used,
            });
        }
        if self.precision_loss {
            return Err(Error::PrecisionLoss {
                ratio: self.cancellation(),
            });
        }
        Ok(self)
    }

    pub(crate) fn scaled(mut self, factor: ComplexScalar) -> Self {
        let m = factor.norm();
        self.value *= factor;
        self.abs_error_estimate *= m;
        self.max_term_magnitude *= m;
        self
    }
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Largest argument for which `Γ(x)` is representable.
pub const GAMMA_MAX_ARG: f64 = 171.624_376_956_302_7;

/// `sin(πx)` with exact zeros at the integers.
pub fn sin_pi(x: f64) -> f64 {
    // reduce to r in [-1, 1], then fold onto [-1/2, 1/2]
    let r = x - 2.0 * (x / 2.0).round();
    let r = if r > 0.5 {
        1.0 - r
    } else if r < -0.5 {
        -1.0 - r
    } else {
        r
    };
    (PI * r).sin()
}

/// `cos(πx)` with exact zeros at the half-integers.
pub fn cos_pi(x: f64) -> f64 {
    sin_pi(x + 0.5)
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

fn lanczos_positive(x: f64) -> f64 {
    // Γ(x) for x >= 0.5
    let z = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    // split the power so that t^(z+1/2) never overflows before the product does
    let half = t.powf((z + 0.5) / 2.0);
    (2.0 * PI).sqrt() * half * (half * (-t).exp()) * acc
}

/// The gamma function for real arguments.
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite(format!("gamma({x})")));
    }
    if is_nonpositive_integer(x) {
        return Err(Error::Pole(x));
    }
    if x > GAMMA_MAX_ARG {
        return Err(Error::Overflow(format!("gamma({x})")));
    }
    if x == x.round() && x <= 23.0 {
        let mut f = 1.0;
        let mut k = 2.0;
        while k < x {
            f *= k;
            k += 1.0;
        }
        return Ok(f);
    }
    if x >= 0.5 {
        return Ok(lanczos_positive(x));
    }
    let s = sin_pi(x);
    let g = lanczos_positive(1.0 - x);
    let v = PI / (s * g);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow(format!("gamma({x})")))
    }
}

/// `1/Γ(x)`, which is entire: returns zero at the poles of `Γ` and for
/// arguments so large that `Γ` overflows.
pub fn rgamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    if x > GAMMA_MAX_ARG {
        return 0.0;
    }
    if x >= 0.5 {
        return 1.0 / lanczos_positive(x);
    }
    sin_pi(x) * lanczos_positive(1.0 - x) / PI
}

/// Rising factorial `(a)_n = a (a+1) ··· (a+n−1)`, by direct multiplication.
pub fn pochhammer(a: f64, n: u32) -> f64 {
    let mut p = 1.0;
    for k in 0..n {
        p *= a + k as f64;
    }
    p
}

/// `z^s = exp(s · Log z)` for `Re z > 0`.
///
/// Real positive `z` with real `s` returns an exactly real value.
pub fn principal_power(z: ComplexScalar, s: f64) -> Result<ComplexScalar> {
    if !(z.re > 0.0) || !z.im.is_finite() || !s.is_finite() {
        return Err(Error::domain(format!(
            "principal_power requires Re z > 0, got z = {z}"
        )));
    }
    let v = cpow(z, s);
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow(format!("({z})^{s}")))
    }
}

/// Principal branch power without the half-plane check; `z ≠ 0`.
pub(crate) fn cpow(z: ComplexScalar, s: f64) -> ComplexScalar {
    if z.im == 0.0 && z.re > 0.0 {
        return Complex64::new(z.re.powf(s), 0.0);
    }
    if s == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    let (r, theta) = z.to_polar();
    Complex64::from_polar(r.powf(s), s * theta)
}

/// Principal square root chosen in the closed upper half-plane.
pub(crate) fn sqrt_upper(z: ComplexScalar) -> ComplexScalar {
    let r = z.sqrt();
    if r.im < 0.0 || (r.im == 0.0 && r.re < 0.0) {
        -r
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn gamma_special_values() {
        assert_eq!(gamma(1.0).unwrap(), 1.0);
        assert_eq!(gamma(5.0).unwrap(), 24.0);
        assert_relative_eq!(gamma(0.5).unwrap(), PI.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(gamma(-0.5).unwrap(), -2.0 * PI.sqrt(), max_relative = 1e-14);
        // Γ(1.7), reference value to 16 digits
        assert_relative_eq!(gamma(1.7).unwrap(), 0.908_638_732_853_290_4, max_relative = 1e-14);
        assert_relative_eq!(gamma(30.5).unwrap(), 4.8226969334909086e31, max_relative = 1e-13);
    }

    #[test]
    fn gamma_errors() {
        assert_eq!(gamma(0.0), Err(Error::Pole(0.0)));
        assert_eq!(gamma(-3.0), Err(Error::Pole(-3.0)));
        assert!(matches!(gamma(172.0), Err(Error::Overflow(_))));
        assert!(gamma(170.5).unwrap().is_finite());
    }

    #[test]
    fn gamma_large_factorials() {
        // 170! via exact products in the integer branch vs the Lanczos branch at 170.0001
        let a = gamma(170.0).unwrap();
        let b = gamma(170.000_000_1).unwrap();
        assert!(((b - a) / a).abs() < 1e-6);
    }

    #[test]
    fn gamma_recurrence_on_grid() {
        for i in 1..=100 {
            let x = i as f64 * 0.1;
            let g1 = gamma(x + 1.0).unwrap();
            let g0 = gamma(x).unwrap();
            assert!((g1 - x * g0).abs() <= 1e-12 * g1.abs(), "x = {x}");
        }
    }

    #[test]
    fn gamma_reflection_consistency() {
        for &x in &[-2.5, -1.3, -0.7, -0.2, 0.3] {
            let lhs = gamma(x).unwrap() * gamma(1.0 - x).unwrap();
            let rhs = PI / (PI * x).sin();
            assert_relative_eq!(lhs, rhs, max_relative = 1e-13);
        }
    }

    #[test]
    fn rgamma_at_poles() {
        assert_eq!(rgamma(0.0), 0.0);
        assert_eq!(rgamma(-4.0), 0.0);
        assert_relative_eq!(rgamma(3.0), 0.5, max_relative = 1e-14);
    }

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(7.3, 0), 1.0);
        assert_eq!(pochhammer(3.0, 4), 360.0);
        assert_eq!(pochhammer(0.5, 3), 1.875);
        assert_eq!(pochhammer(-2.0, 3), 0.0);
    }

    #[test]
    fn principal_power_values() {
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(principal_power(one, 3.7).unwrap(), one);
        let two = principal_power(Complex64::new(4.0, 0.0), 0.5).unwrap();
        assert_eq!(two, Complex64::new(2.0, 0.0));
        let sq = principal_power(Complex64::new(1.0, 1.0), 2.0).unwrap();
        assert!((sq - Complex64::new(0.0, 2.0)).norm() < 1e-15);
        assert!(principal_power(Complex64::new(0.0, 1.0), 0.5).is_err());
        assert!(principal_power(Complex64::new(-1.0, 0.0), 0.5).is_err());
    }

    #[test]
    fn sin_pi_exact_zeros() {
        assert_eq!(sin_pi(3.0), 0.0);
        assert_eq!(sin_pi(-2.0), 0.0);
        assert_relative_eq!(sin_pi(0.5), 1.0);
        assert_relative_eq!(sin_pi(2.25), (PI * 0.25).sin(), max_relative = 1e-15);
        assert_relative_eq!(sin_pi(-0.75), -(PI * 0.25).sin(), max_relative = 1e-15);
    }

    proptest! {
        #[test]
        fn pochhammer_splits(a in -5.0f64..5.0, n in 0u32..=20, m in 0u32..=20) {
            let lhs = pochhammer(a, n + m);
            let rhs = pochhammer(a, n) * pochhammer(a + n as f64, m);
            prop_assert!((lhs - rhs).abs() <= 1e-13 * lhs.abs().max(rhs.abs()) + 1e-300);
        }

        #[test]
        fn principal_power_adds_exponents(re in 0.01f64..10.0, im in -10.0f64..10.0,
                                          s1 in -3.0f64..3.0, s2 in -3.0f64..3.0) {
            let z = Complex64::new(re, im);
            let lhs = principal_power(z, s1 + s2).unwrap();
            let rhs = principal_power(z, s1).unwrap() * principal_power(z, s2).unwrap();
            prop_assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm());
        }
    }
}
