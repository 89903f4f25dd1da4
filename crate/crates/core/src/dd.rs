//! Double-double arithmetic (about 32 significant digits) for series whose
//! terms cancel beyond what `f64` can absorb.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub const ZERO: Self = DoubleDouble { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = DoubleDouble { hi: 1.0, lo: 0.0 };

    pub fn new(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        DoubleDouble::new(x)
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        DoubleDouble {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        DoubleDouble { hi, lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        DoubleDouble { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let q1 = self.hi / o.hi;
        let r = self - o * DoubleDouble::new(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * DoubleDouble::new(q2);
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        DoubleDouble { hi, lo } + DoubleDouble::new(q3)
    }
}

/// Complex number with double-double components.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ComplexDd {
    pub re: DoubleDouble,
    pub im: DoubleDouble,
}

impl ComplexDd {
    pub const ZERO: Self = ComplexDd {
        re: DoubleDouble::ZERO,
        im: DoubleDouble::ZERO,
    };

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    /// `|re| + |im|` in double precision; enough for stopping rules.
    pub fn l1_norm(self) -> f64 {
        self.re.hi.abs() + self.im.hi.abs()
    }

    pub fn scale(self, r: DoubleDouble) -> Self {
        ComplexDd {
            re: self.re * r,
            im: self.im * r,
        }
    }
}

impl From<Complex64> for ComplexDd {
    fn from(z: Complex64) -> Self {
        ComplexDd {
            re: z.re.into(),
            im: z.im.into(),
        }
    }
}

impl Add for ComplexDd {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        ComplexDd {
            re: self.re + o.re,
            im: self.im + o.im,
        }
    }
}

impl Mul for ComplexDd {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        ComplexDd {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }
}
