//! Two-variable hypergeometric series: Humbert's `Ψ₂`, the Kampé de Fériet
//! function `F^{A:B}_{C:D}` and the single-variable `₀F₁`.
//!
//! Double series are summed along anti-diagonals `m + n = k`. Every term is
//! obtained from a neighbour on the previous diagonal by a bounded ratio, so
//! no Pochhammer symbol or factorial is ever formed on its own and nothing
//! overflows unless the terms themselves do.
//!
//! Each sum is first carried out in `f64`. When the cancellation ratio
//! `max|term| / |sum|` exceeds [`EXTENDED_PRECISION_TRIGGER`] the sum is
//! repeated in double-double arithmetic. A result is flagged as
//! precision-lost when its ratio exceeds [`CANCELLATION_GUARD`] in `f64`, or
//! [`EXTENDED_CANCELLATION_GUARD`] after resummation.

use num_complex::Complex64;

use crate::dd::{ComplexDd, DoubleDouble};
use crate::error::{Error, Result};
use crate::numerics::{EvalPath, SeriesResult};

/// Maximum number of anti-diagonals summed before giving up.
pub const N_MAX: usize = 800;
/// Cancellation ratio beyond which a result is reported as precision-lost
/// unless it was recovered in extended precision.
pub const CANCELLATION_GUARD: f64 = 1e8;
/// Cancellation ratio that triggers a double-double resummation.
pub const EXTENDED_PRECISION_TRIGGER: f64 = 10.0;
/// Cancellation ratio above which the double-double sum is not trusted.
pub const EXTENDED_CANCELLATION_GUARD: f64 = 1e20;
/// Number of consecutive sub-tolerance diagonals required to stop.
const QUIET_DIAGONALS: usize = 3;

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// Parameters `a; c, c′` of `Ψ₂(a; c, c′; x, y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Psi2Params {
    pub a: f64,
    pub c1: f64,
    pub c2: f64,
}

impl Psi2Params {
    pub fn new(a: f64, c1: f64, c2: f64) -> Result<Self> {
        for (name, v) in [("c", c1), ("c'", c2)] {
            if !v.is_finite() || is_nonpositive_integer(v) {
                return Err(Error::VanishingDenominator(format!("{name} = {v}")));
            }
        }
        if !a.is_finite() {
            return Err(Error::domain(format!("a = {a}")));
        }
        Ok(Psi2Params { a, c1, c2 })
    }
}

/// Parameter lists of `F^{A:B}_{C:D}`: `a` and `c` are coupled to `m + n`,
/// `b`/`d` belong to the first variable and `b′`/`d′` to the second.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct KdFParams {
    pub a_list: Vec<f64>,
    pub b_list: Vec<f64>,
    pub b_prime_list: Vec<f64>,
    pub c_list: Vec<f64>,
    pub d_list: Vec<f64>,
    pub d_prime_list: Vec<f64>,
}

impl KdFParams {
    pub fn new(
        a_list: Vec<f64>,
        b_list: Vec<f64>,
        b_prime_list: Vec<f64>,
        c_list: Vec<f64>,
        d_list: Vec<f64>,
        d_prime_list: Vec<f64>,
    ) -> Result<Self> {
        let p = KdFParams {
            a_list,
            b_list,
            b_prime_list,
            c_list,
            d_list,
            d_prime_list,
        };
        p.validate()?;
        Ok(p)
    }

    /// `F^{0:0}_{0:1}(−:−;−; −:d;d′)`.
    pub fn product_0f1(d: f64, d_prime: f64) -> Result<Self> {
        Self::new(vec![], vec![], vec![], vec![], vec![d], vec![d_prime])
    }

    /// `F^{1:0}_{1:1}(a:−;−; c:d;d′)`.
    pub fn coupled_1_1(a: f64, c: f64, d: f64, d_prime: f64) -> Result<Self> {
        Self::new(vec![a], vec![], vec![], vec![c], vec![d], vec![d_prime])
    }

    fn validate(&self) -> Result<()> {
        if self.b_list.len() != self.b_prime_list.len() || self.d_list.len() != self.d_prime_list.len()
        {
            return Err(Error::domain(
                "per-variable parameter lists must have matching lengths (B and D)",
            ));
        }
        let (a, b, c, d) = (
            self.a_list.len(),
            self.b_list.len(),
            self.c_list.len(),
            self.d_list.len(),
        );
        if a + b >= c + d + 1 {
            return Err(Error::domain(format!(
                "series converges for all arguments only when A + B < C + D + 1 (A={a}, B={b}, C={c}, D={d})"
            )));
        }
        let all = self
            .a_list
            .iter()
            .chain(&self.b_list)
            .chain(&self.b_prime_list)
            .chain(&self.c_list)
            .chain(&self.d_list)
            .chain(&self.d_prime_list);
        if all.clone().any(|v| !v.is_finite()) {
            return Err(Error::domain("non-finite series parameter"));
        }
        for v in self.c_list.iter().chain(&self.d_list).chain(&self.d_prime_list) {
            if is_nonpositive_integer(*v) {
                return Err(Error::VanishingDenominator(format!("denominator parameter {v}")));
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// scalar abstraction over f64 and double-double

trait Scalar: Copy {
    type R: Copy;
    fn real(x: f64) -> Self::R;
    fn r_add(a: Self::R, b: Self::R) -> Self::R;
    fn r_mul(a: Self::R, b: Self::R) -> Self::R;
    fn r_div(a: Self::R, b: Self::R) -> Self::R;
    fn from_c64(z: Complex64) -> Self;
    fn zero() -> Self;
    fn add(self, o: Self) -> Self;
    fn mul(self, o: Self) -> Self;
    fn scale(self, r: Self::R) -> Self;
    fn mag(self) -> f64;
    fn to_c64(self) -> Complex64;
}

impl Scalar for Complex64 {
    type R = f64;
    fn real(x: f64) -> f64 {
        x
    }
    fn r_add(a: f64, b: f64) -> f64 {
        a + b
    }
    fn r_mul(a: f64, b: f64) -> f64 {
        a * b
    }
    fn r_div(a: f64, b: f64) -> f64 {
        a / b
    }
    fn from_c64(z: Complex64) -> Self {
        z
    }
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn add(self, o: Self) -> Self {
        self + o
    }
    fn mul(self, o: Self) -> Self {
        self * o
    }
    fn scale(self, r: f64) -> Self {
        self * r
    }
    fn mag(self) -> f64 {
        self.re.abs() + self.im.abs()
    }
    fn to_c64(self) -> Complex64 {
        self
    }
}

impl Scalar for ComplexDd {
    type R = DoubleDouble;
    fn real(x: f64) -> DoubleDouble {
        DoubleDouble::new(x)
    }
    fn r_add(a: DoubleDouble, b: DoubleDouble) -> DoubleDouble {
        a + b
    }
    fn r_mul(a: DoubleDouble, b: DoubleDouble) -> DoubleDouble {
        a * b
    }
    fn r_div(a: DoubleDouble, b: DoubleDouble) -> DoubleDouble {
        a / b
    }
    fn from_c64(z: Complex64) -> Self {
        ComplexDd::from(z)
    }
    fn zero() -> Self {
        ComplexDd::ZERO
    }
    fn add(self, o: Self) -> Self {
        self + o
    }
    fn mul(self, o: Self) -> Self {
        self * o
    }
    fn scale(self, r: DoubleDouble) -> Self {
        ComplexDd::scale(self, r)
    }
    fn mag(self) -> f64 {
        self.l1_norm()
    }
    fn to_c64(self) -> Complex64 {
        ComplexDd::to_c64(self)
    }
}

/// `Π (p_j + k)` over a parameter list, in the working precision.
fn shifted_product<S: Scalar>(list: &[f64], k: usize) -> S::R {
    let kk = S::real(k as f64);
    list.iter()
        .fold(S::real(1.0), |acc, &p| S::r_mul(acc, S::r_add(S::real(p), kk)))
}

struct RawSum {
    value: Complex64,
    tail: f64,
    diagonals: usize,
    max_term: f64,
    converged: bool,
}

impl RawSum {
    fn cancellation(&self) -> f64 {
        self.max_term / self.value.norm().max(f64::MIN_POSITIVE)
    }
}

/// Diagonal summation of `Σ T(m, n)` with
/// `T(m+1,n)/T(m,n) = [Πa(k)/Πc(k)]·[Πb(m)/Πd(m)]·x/(m+1)` (k = m+n) and the
/// symmetric rule in `n`.
fn sum_diagonals<S: Scalar>(
    p: &KdFParams,
    x: Complex64,
    y: Complex64,
    tol: f64,
    n_max: usize,
) -> RawSum {
    let xs = S::from_c64(x);
    let ys = S::from_c64(y);
    let one = S::from_c64(Complex64::new(1.0, 0.0));
    let mut prev: Vec<S> = vec![one];
    let mut sum = one;
    let mut max_term = 1.0f64;
    let mut quiet = 0usize;
    let mut recent = [0.0f64; QUIET_DIAGONALS];
    // per-variable ratios r[j] = Πb(j)/(Πd(j)·(j+1)), grown lazily
    let mut rx: Vec<S::R> = Vec::new();
    let mut ry: Vec<S::R> = Vec::new();
    let k_min = ((x.norm() + y.norm()).ceil() as usize).min(n_max / 2);
    let mut converged = false;
    let mut diagonals = 0;

    for k in 1..=n_max {
        diagonals = k;
        let j = k - 1;
        rx.push(S::r_div(
            shifted_product::<S>(&p.b_list, j),
            S::r_mul(shifted_product::<S>(&p.d_list, j), S::real(k as f64)),
        ));
        ry.push(S::r_div(
            shifted_product::<S>(&p.b_prime_list, j),
            S::r_mul(shifted_product::<S>(&p.d_prime_list, j), S::real(k as f64)),
        ));
        let coupled = S::r_div(
            shifted_product::<S>(&p.a_list, j),
            shifted_product::<S>(&p.c_list, j),
        );

        let mut cur: Vec<S> = Vec::with_capacity(k + 1);
        let mut block = S::zero();
        let mut block_mag = 0.0f64;
        for (m, &t) in prev.iter().enumerate() {
            // (m, n−1) → (m, n), n = k − m
            let n = k - m;
            let next = t.mul(ys).scale(S::r_mul(coupled, ry[n - 1]));
            cur.push(next);
        }
        let last = prev[k - 1].mul(xs).scale(S::r_mul(coupled, rx[k - 1]));
        cur.push(last);
        for &t in &cur {
            block = block.add(t);
            let mg = t.mag();
            block_mag += mg;
            max_term = max_term.max(mg);
        }
        sum = sum.add(block);
        recent[k % QUIET_DIAGONALS] = block_mag;
        if !block_mag.is_finite() {
            break;
        }
        let scale = sum.mag();
        if block_mag <= tol * scale || block_mag == 0.0 {
            quiet += 1;
        } else {
            quiet = 0;
        }
        if quiet >= QUIET_DIAGONALS && k >= k_min {
            converged = true;
            break;
        }
        prev = cur;
    }
    RawSum {
        value: sum.to_c64(),
        tail: recent.iter().sum(),
        diagonals,
        max_term,
        converged,
    }
}

fn evaluate_double(p: &KdFParams, x: Complex64, y: Complex64, tol: f64) -> Result<SeriesResult> {
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    if !(x.re.is_finite() && x.im.is_finite() && y.re.is_finite() && y.im.is_finite()) {
        return Err(Error::domain("non-finite series argument"));
    }
    let mut raw = sum_diagonals::<Complex64>(p, x, y, tol, N_MAX);
    let mut extended = false;
    if raw.converged && raw.cancellation() > EXTENDED_PRECISION_TRIGGER && raw.max_term.is_finite() {
        raw = sum_diagonals::<ComplexDd>(p, x, y, tol, N_MAX);
        extended = true;
    }
    if !raw.max_term.is_finite() || !(raw.value.re.is_finite() && raw.value.im.is_finite()) {
        return Err(Error::Overflow(format!(
            "double series terms overflow at x = {x}, y = {y}"
        )));
    }
    let guard = if extended {
        EXTENDED_CANCELLATION_GUARD
    } else {
        CANCELLATION_GUARD
    };
    let precision_loss = raw.cancellation() > guard;
    Ok(SeriesResult {
        value: raw.value,
        abs_error_estimate: raw.tail,
        terms_used: raw.diagonals,
        max_term_magnitude: raw.max_term,
        converged: raw.converged,
        precision_loss,
        extended_precision: extended,
        path: EvalPath::Series,
    })
}

fn psi2_as_kdf(params: &Psi2Params) -> KdFParams {
    KdFParams {
        a_list: vec![params.a],
        b_list: vec![],
        b_prime_list: vec![],
        c_list: vec![],
        d_list: vec![params.c1],
        d_prime_list: vec![params.c2],
    }
}

/// Humbert's `Ψ₂(a; c, c′; x, y) = Σ (a)_{m+n} / ((c)_m (c′)_n m! n!) x^m y^n`.
pub fn humbert_psi2(params: &Psi2Params, x: f64, y: f64, tol: f64) -> Result<SeriesResult> {
    humbert_psi2_complex(params, Complex64::new(x, 0.0), Complex64::new(y, 0.0), tol)
}

/// [`humbert_psi2`] at complex arguments (the series is entire in both).
pub fn humbert_psi2_complex(
    params: &Psi2Params,
    x: Complex64,
    y: Complex64,
    tol: f64,
) -> Result<SeriesResult> {
    evaluate_double(&psi2_as_kdf(params), x, y, tol)
}

/// Kampé de Fériet `F^{A:B}_{C:D}` at real arguments.
pub fn kampe_de_feriet(params: &KdFParams, x: f64, y: f64, tol: f64) -> Result<SeriesResult> {
    kampe_de_feriet_complex(params, Complex64::new(x, 0.0), Complex64::new(y, 0.0), tol)
}

pub fn kampe_de_feriet_complex(
    params: &KdFParams,
    x: Complex64,
    y: Complex64,
    tol: f64,
) -> Result<SeriesResult> {
    params.validate()?;
    evaluate_double(params, x, y, tol)
}

// ---------------------------------------------------------------------------
// ₀F₁

fn sum_0f1<S: Scalar>(c: f64, z: Complex64) -> (Complex64, f64, usize, bool) {
    let zs = S::from_c64(z);
    let one = S::from_c64(Complex64::new(1.0, 0.0));
    let mut term = one;
    let mut sum = one;
    let mut max_term = 1.0f64;
    let mut quiet = 0;
    let k_min = z.norm().sqrt().ceil() as usize;
    let cap = 4 * N_MAX;
    for k in 1..=cap {
        let kk = S::real(k as f64);
        let den = S::r_mul(kk, S::r_add(S::real(c), S::real((k - 1) as f64)));
        term = term.mul(zs).scale(S::r_div(S::real(1.0), den));
        sum = sum.add(term);
        let mg = term.mag();
        max_term = max_term.max(mg);
        if !mg.is_finite() {
            return (sum.to_c64(), max_term, k, false);
        }
        if mg <= 1e-17 * sum.mag() {
            quiet += 1;
        } else {
            quiet = 0;
        }
        if quiet >= QUIET_DIAGONALS && k >= k_min {
            return (sum.to_c64(), max_term, k, true);
        }
    }
    (sum.to_c64(), max_term, cap, false)
}

/// `₀F₁(; c; z)` with the same diagnostics as the double series.
pub fn hyp0f1_series(c: f64, z: Complex64) -> Result<SeriesResult> {
    if !c.is_finite() || is_nonpositive_integer(c) {
        return Err(Error::VanishingDenominator(format!("c = {c}")));
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::domain("non-finite argument to 0F1"));
    }
    let (mut v, mut max_term, mut terms, mut ok) = sum_0f1::<Complex64>(c, z);
    let mut extended = false;
    if ok && max_term / v.norm().max(f64::MIN_POSITIVE) > EXTENDED_PRECISION_TRIGGER {
        (v, max_term, terms, ok) = sum_0f1::<ComplexDd>(c, z);
        extended = true;
    }
    if !max_term.is_finite() || !v.re.is_finite() || !v.im.is_finite() {
        return Err(Error::Overflow(format!("0F1(;{c};{z})")));
    }
    let ratio = max_term / v.norm().max(f64::MIN_POSITIVE);
    let guard = if extended {
        EXTENDED_CANCELLATION_GUARD
    } else {
        CANCELLATION_GUARD
    };
    Ok(SeriesResult {
        value: v,
        abs_error_estimate: 1e-17 * max_term * if extended { 1e-15 } else { 1.0 } + f64::EPSILON * v.norm(),
        terms_used: terms,
        max_term_magnitude: max_term,
        converged: ok,
        precision_loss: ratio > guard,
        extended_precision: extended,
        path: EvalPath::Series,
    })
}

/// `₀F₁(; c; z) = Σ z^k / ((c)_k k!)` at complex argument.
pub fn hyp0f1_complex(c: f64, z: Complex64) -> Result<Complex64> {
    hyp0f1_series(c, z)?.require_converged().map(|r| r.value)
}

/// `₀F₁(; c; z)` at real argument.
pub fn hyp0f1(c: f64, z: f64) -> Result<f64> {
    hyp0f1_complex(c, Complex64::new(z, 0.0)).map(|v| v.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bessel::{bessel_i, bessel_j_real, BesselOrder};
    use crate::numerics::{gamma, pochhammer};
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    /// Independent oracle: nested loops with explicit Pochhammer products.
    fn brute_kdf(p: &KdFParams, x: f64, y: f64, n: u32) -> f64 {
        let mut s = 0.0;
        let mut fact_m = 1.0;
        for m in 0..n {
            if m > 0 {
                fact_m *= m as f64;
            }
            let mut fact_n = 1.0;
            for nn in 0..n {
                if nn > 0 {
                    fact_n *= nn as f64;
                }
                let k = m + nn;
                let num: f64 = p.a_list.iter().map(|&a| pochhammer(a, k)).product::<f64>()
                    * p.b_list.iter().map(|&b| pochhammer(b, m)).product::<f64>()
                    * p.b_prime_list.iter().map(|&b| pochhammer(b, nn)).product::<f64>();
                let den: f64 = p.c_list.iter().map(|&c| pochhammer(c, k)).product::<f64>()
                    * p.d_list.iter().map(|&d| pochhammer(d, m)).product::<f64>()
                    * p.d_prime_list.iter().map(|&d| pochhammer(d, nn)).product::<f64>();
                s += num / den * x.powi(m as i32) * y.powi(nn as i32) / (fact_m * fact_n);
            }
        }
        s
    }

    fn brute_0f1(c: f64, z: f64) -> f64 {
        let mut s = 0.0;
        let mut t = 1.0;
        for k in 0..200u32 {
            if k > 0 {
                t *= z / ((c + (k - 1) as f64) * k as f64);
            }
            s += t;
        }
        s
    }

    fn psi2(a: f64, c1: f64, c2: f64, x: f64, y: f64) -> SeriesResult {
        humbert_psi2(&Psi2Params::new(a, c1, c2).unwrap(), x, y, 1e-16).unwrap()
    }

    #[test]
    fn psi2_origin_and_single_variable() {
        assert_eq!(psi2(2.3, 0.7, 1.9, 0.0, 0.0).value.re, 1.0);
        assert_relative_eq!(psi2(1.0, 1.0, 3.3, 0.5, 0.0).value.re, 0.5f64.exp(), max_relative = 1e-14);
    }

    #[test]
    fn psi2_reduction_brute_force() {
        let v = psi2(1.5, 1.5, 1.5, 0.3, 0.2).value.re;
        let brute = brute_kdf(&psi2_as_kdf(&Psi2Params::new(1.5, 1.5, 1.5).unwrap()), 0.3, 0.2, 40);
        let reduced = 0.5f64.exp() * brute_0f1(1.5, 0.06);
        assert_relative_eq!(v, brute, max_relative = 1e-14);
        assert_relative_eq!(v, reduced, max_relative = 1e-14);
    }

    #[test]
    fn psi2_general_against_brute_force() {
        let p = Psi2Params::new(0.7, 1.3, 2.1).unwrap();
        for &(x, y) in &[(-1.5, 0.8), (2.0, -3.0), (0.4, 0.9)] {
            let v = humbert_psi2(&p, x, y, 1e-16).unwrap();
            let b = brute_kdf(&psi2_as_kdf(&p), x, y, 60);
            assert_relative_eq!(v.value.re, b, max_relative = 1e-12);
            assert!(v.converged && !v.precision_loss);
        }
    }

    #[test]
    fn kdf_all_empty_is_exponential() {
        let p = KdFParams::default();
        assert_eq!(kampe_de_feriet(&p, 0.0, 0.0, 1e-16).unwrap().value.re, 1.0);
        let v = kampe_de_feriet(&p, 0.1, 0.2, 1e-16).unwrap().value.re;
        assert_relative_eq!(v, 0.3f64.exp(), max_relative = 1e-14);
    }

    #[test]
    fn kdf_factorizes_without_coupled_parameters() {
        let nu = 0.4;
        let p = KdFParams::product_0f1(nu + 1.0, nu + 1.0).unwrap();
        let v = kampe_de_feriet(&p, -0.3, 0.5, 1e-16).unwrap().value.re;
        let brute = brute_kdf(&p, -0.3, 0.5, 40);
        let fact = hyp0f1(nu + 1.0, -0.3).unwrap() * hyp0f1(nu + 1.0, 0.5).unwrap();
        assert_relative_eq!(v, brute, max_relative = 1e-14);
        assert_relative_eq!(v, fact, max_relative = 1e-12);
    }

    #[test]
    fn kdf_coupled_against_brute_force() {
        let p = KdFParams::coupled_1_1(0.9, -0.35, 1.2, 1.2).unwrap();
        let v = kampe_de_feriet(&p, -1.1, 0.7, 1e-16).unwrap();
        let b = brute_kdf(&p, -1.1, 0.7, 60);
        assert_relative_eq!(v.value.re, b, max_relative = 1e-12);
    }

    #[test]
    fn kdf_parameter_errors() {
        assert!(matches!(
            KdFParams::coupled_1_1(0.5, -2.0, 1.0, 1.0),
            Err(Error::VanishingDenominator(_))
        ));
        assert!(matches!(
            KdFParams::new(vec![1.0, 2.0], vec![], vec![], vec![], vec![], vec![]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(Psi2Params::new(1.0, 0.0, 1.0), Err(Error::VanishingDenominator(_))));
        assert!(humbert_psi2(&Psi2Params::new(1.0, 1.0, 1.0).unwrap(), 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn term_cap_reports_not_converged() {
        let p = psi2_as_kdf(&Psi2Params::new(1.0, 1.0, 1.0).unwrap());
        let raw = sum_diagonals::<Complex64>(&p, Complex64::new(5.0, 0.0), Complex64::new(5.0, 0.0), 1e-16, 5);
        assert!(!raw.converged);
    }

    #[test]
    fn large_cancellation_is_resummed_or_flagged() {
        // Ψ₂(1;1,1;−x,−y) = e^{−x−y} I₀(2√(xy))
        let v = psi2(1.0, 1.0, 1.0, -8.0, -8.0);
        assert!(v.extended_precision && !v.precision_loss);
        let exact = (-16.0f64).exp() * bessel_i(BesselOrder::new(0.0).unwrap(), 16.0).unwrap();
        assert_relative_eq!(v.value.re, exact, max_relative = 1e-12);

        let w = psi2(1.0, 1.0, 1.0, -40.0, -40.0);
        assert!(w.precision_loss);
        assert!(w.require_converged().is_err());
    }

    #[test]
    fn hyp0f1_values() {
        assert_eq!(hyp0f1(2.5, 0.0).unwrap(), 1.0);
        assert_relative_eq!(hyp0f1(2.0, 1.0).unwrap(), 1.590_636_854_637_329, max_relative = 1e-14);
        let u = PI / 2.0;
        let j = hyp0f1(1.5, -u * u / 4.0).unwrap() * gamma(1.5).unwrap() * (u / 2.0).powf(-0.5);
        assert_relative_eq!(j, 2.0 / PI, max_relative = 1e-14);
        let j_direct = bessel_j_real(BesselOrder::new(0.5).unwrap(), u).unwrap();
        assert_relative_eq!(j, j_direct, max_relative = 1e-13);
        assert!(hyp0f1(-1.0, 0.3).is_err());
    }

    #[test]
    fn hyp0f1_bessel_relation_large_argument() {
        // ₀F₁(;ν+1;−u²/4) = Γ(ν+1)(u/2)^{−ν} J_ν(u), u = 12 (heavy cancellation)
        let nu = 0.3;
        let u = 12.0f64;
        let lhs = hyp0f1(nu + 1.0, -u * u / 4.0).unwrap();
        let rhs = gamma(nu + 1.0).unwrap() * (u / 2.0).powf(-nu)
            * bessel_j_real(BesselOrder::new(nu).unwrap(), u).unwrap();
        assert!((lhs - rhs).abs() < 1e-13);
    }

    #[test]
    fn single_variable_collapse() {
        // Ψ₂(a;c,c';x,0) = ₁F₁(a;c;x) and F^{1:0}_{1:1}(a;c;d,d';x,0) = ₂F₂(a,·;c,d;x)
        let (a, c) = (0.8, 1.7);
        let x = -2.5;
        let mut t = 1.0;
        let mut s = 1.0;
        for k in 1..200 {
            let kf = k as f64;
            t *= (a + kf - 1.0) * x / ((c + kf - 1.0) * kf);
            s += t;
        }
        assert_relative_eq!(psi2(a, c, 2.2, x, 0.0).value.re, s, max_relative = 1e-12);

        let p = KdFParams::coupled_1_1(a, 1.3, c, 0.9).unwrap();
        let mut t = 1.0;
        let mut s = 1.0;
        for k in 1..200 {
            let kf = k as f64;
            t *= (a + kf - 1.0) * x / ((1.3 + kf - 1.0) * (c + kf - 1.0) * kf);
            s += t;
        }
        assert_relative_eq!(kampe_de_feriet(&p, x, 0.0, 1e-16).unwrap().value.re, s, max_relative = 1e-12);
    }

    #[test]
    fn reduction_grid() {
        for &a in &[0.7, 1.5, 2.3] {
            for i in 0..9 {
                for j in 0..9 {
                    let x = -10.0 + 2.5 * i as f64;
                    let y = -10.0 + 2.5 * j as f64;
                    let v = psi2(a, a, a, x, y);
                    if v.cancellation() > CANCELLATION_GUARD && !v.extended_precision {
                        continue;
                    }
                    let r = (x + y).exp() * hyp0f1(a, x * y).unwrap();
                    assert!(((v.value.re - r) / r).abs() < 1e-9, "a={a} x={x} y={y}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn psi2_diagonal_symmetry(a in 0.1f64..3.0, c in 0.2f64..3.0, x in -5.0f64..5.0, y in -5.0f64..5.0) {
            let p = Psi2Params::new(a, c, c).unwrap();
            let u = humbert_psi2(&p, x, y, 1e-16).unwrap().value.re;
            let v = humbert_psi2(&p, y, x, 1e-16).unwrap().value.re;
            prop_assert!((u - v).abs() <= 1e-12 * u.abs().max(1e-300));
        }

        #[test]
        fn converged_results_meet_tolerance(x in -6.0f64..6.0, y in -6.0f64..6.0, tol in 1e-15f64..1e-6) {
            let p = Psi2Params::new(1.3, 0.8, 2.4).unwrap();
            let r = humbert_psi2(&p, x, y, tol).unwrap();
            prop_assert!(r.converged);
            prop_assert!(r.abs_error_estimate <= tol * r.value.norm().max(1.0) * 3.0);
            prop_assert!(r.cancellation().is_finite());
        }
    }
}
