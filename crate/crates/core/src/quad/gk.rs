use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use super::{QuadStatus, QuadratureResult};
use crate::error::{Error, Result};

/// Panels that may be created by bisection beyond the initial partition.
pub const MAX_PANELS: usize = 2000;

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_292_359_406,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the nodes XGK[1], XGK[3], ..., XGK[9]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err)
    }
}

/// 21-point Kronrod rule on `[a, b]` with the QUADPACK error estimate.
fn gk21<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64) -> Panel {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[10];
    let mut gauss = Complex64::new(0.0, 0.0);
    let mut fv = [Complex64::new(0.0, 0.0); 20];
    for i in 0..10 {
        let dx = h * XGK[i];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        fv[2 * i] = f1;
        fv[2 * i + 1] = f2;
        kron += (f1 + f2) * WGK[i];
        if i % 2 == 1 {
            gauss += (f1 + f2) * WG[i / 2];
        }
    }
    let mean = kron * 0.5;
    let mut resabs = WGK[10] * fc.norm();
    let mut resasc = WGK[10] * (fc - mean).norm();
    for i in 0..10 {
        resabs += WGK[i] * (fv[2 * i].norm() + fv[2 * i + 1].norm());
        resasc += WGK[i] * ((fv[2 * i] - mean).norm() + (fv[2 * i + 1] - mean).norm());
    }
    let h_abs = h.abs();
    resabs *= h_abs;
    resasc *= h_abs;
    let mut err = ((kron - gauss) * h).norm();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * resabs;
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(floor);
    }
    Panel {
        a,
        b,
        value: kron * h,
        err,
    }
}

/// Globally adaptive integration of `f` over `[a, b]` to absolute tolerance
/// `tol`, with up to [`MAX_PANELS`] bisections.
pub fn integrate_adaptive<F: FnMut(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<QuadratureResult> {
    integrate_adaptive_breakpoints(f, &[a, b], tol)
}

/// As [`integrate_adaptive`], starting from the panels delimited by the
/// increasing sequence `points` (first and last entries are the limits).
pub fn integrate_adaptive_breakpoints<F: FnMut(f64) -> Complex64>(
    mut f: F,
    points: &[f64],
    tol: f64,
) -> Result<QuadratureResult> {
    if points.len() < 2 {
        return Err(Error::domain("integration needs at least two points"));
    }
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    for w in points.windows(2) {
        if !(w[0] < w[1]) || !w[0].is_finite() || !w[1].is_finite() {
            return Err(Error::domain(format!(
                "integration limits must be finite and increasing, got {} and {}",
                w[0], w[1]
            )));
        }
    }
    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Panel> = Vec::new();
    let mut evaluations = 0;
    for w in points.windows(2) {
        heap.push(gk21(&mut f, w[0], w[1]));
        evaluations += 21;
    }
    let mut total_err: f64 = heap.iter().map(|p| p.err).sum();
    let mut splits = 0;
    while total_err > tol && splits < MAX_PANELS {
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) || (worst.b - worst.a) < 1e-14 * mid.abs().max(1e-300) {
            // cannot be refined further in double precision
            frozen.push(worst);
            if heap.is_empty() {
                break;
            }
            continue;
        }
        let left = gk21(&mut f, worst.a, mid);
        let right = gk21(&mut f, mid, worst.b);
        evaluations += 42;
        splits += 1;
        total_err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
        if splits % 64 == 0 {
            total_err = heap.iter().chain(&frozen).map(|p| p.err).sum();
        }
    }
    let mut value = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    for p in heap.iter().chain(&frozen) {
        value += p.value;
        err += p.err;
    }
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::NonFinite("integrand produced a non-finite value".into()));
    }
    let status = if err <= tol {
        QuadStatus::Converged
    } else {
        QuadStatus::MaxSubdivisions
    };
    Ok(QuadratureResult {
        value,
        abs_error_estimate: err,
        evaluations,
        status,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn re(f: impl Fn(f64) -> f64) -> impl FnMut(f64) -> Complex64 {
        move |x| Complex64::new(f(x), 0.0)
    }

    #[test]
    fn polynomial_and_sine() {
        let r = integrate_adaptive(re(|x| x * x), 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value.re - 1.0 / 3.0).abs() < 1e-14);
        assert!(r.is_converged());
        let s = integrate_adaptive(re(f64::sin), 0.0, PI, 1e-12).unwrap();
        assert!((s.value.re - 2.0).abs() < 1e-13);
    }

    #[test]
    fn inverse_square_root_singularity() {
        let r = integrate_adaptive(re(|x| 1.0 / x.sqrt()), 0.0, 1.0, 1e-10).unwrap();
        assert!((r.value.re - 2.0).abs() < 1e-8, "{r:?}");
        assert!(r.is_converged());
        assert!(r.abs_error_estimate <= 1e-10);
    }

    #[test]
    fn complex_integrand() {
        // ∫_0^1 e^{ix} dx = (e^{i} − 1)/i
        let r = integrate_adaptive(|x| Complex64::new(0.0, x).exp(), 0.0, 1.0, 1e-13).unwrap();
        let exact = (Complex64::new(0.0, 1.0).exp() - 1.0) / Complex64::new(0.0, 1.0);
        assert!((r.value - exact).norm() < 1e-14);
    }

    #[test]
    fn breakpoints_and_cap() {
        let r = integrate_adaptive_breakpoints(re(|x| x.abs()), &[-1.0, 0.0, 2.0], 1e-13).unwrap();
        assert!((r.value.re - 2.5).abs() < 1e-13);
        assert_eq!(r.evaluations, 42);
        // a non-integrable spike exhausts the subdivision budget
        let bad = integrate_adaptive(re(|x| 1.0 / (x - 0.3).abs()), 0.0, 1.0, 1e-12).unwrap();
        assert_eq!(bad.status, QuadStatus::MaxSubdivisions);
    }

    #[test]
    fn rejects_bad_limits() {
        assert!(integrate_adaptive(re(|x| x), 1.0, 0.0, 1e-8).is_err());
        assert!(integrate_adaptive(re(|x| x), 0.0, f64::INFINITY, 1e-8).is_err());
        assert!(integrate_adaptive(re(|x| x), 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn half_tolerance_rerun_agrees() {
        let f = |x: f64| (3.0 * x).cos() * (-x).exp();
        let a = integrate_adaptive(re(f), 0.0, 10.0, 1e-8).unwrap();
        let b = integrate_adaptive(re(f), 0.0, 10.0, 5e-9).unwrap();
        assert!((a.value - b.value).norm() <= a.abs_error_estimate + b.abs_error_estimate);
    }
}
