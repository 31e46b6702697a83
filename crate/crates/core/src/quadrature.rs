//! Globally adaptive 15-point Gauss–Kronrod quadrature.

use alloc::collections::BinaryHeap;
use alloc::vec::Vec;
use core::cmp::Ordering;

// Unused when std is in the build graph and inherent float methods win.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_panels: usize,
    /// Initial panels per half-period of an oscillatory integrand.
    pub base_panels_per_oscillation: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { abs_tol: 1e-12, rel_tol: 1e-10, max_panels: 4096, base_panels_per_oscillation: 8 }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol.is_finite() && self.abs_tol > 0.0) {
            return Err(Error::Domain { what: "abs_tol", value: self.abs_tol });
        }
        if !(self.rel_tol.is_finite() && self.rel_tol > 0.0) {
            return Err(Error::Domain { what: "rel_tol", value: self.rel_tol });
        }
        if self.max_panels == 0 {
            return Err(Error::Domain { what: "max_panels", value: 0.0 });
        }
        if self.base_panels_per_oscillation == 0 {
            return Err(Error::Domain { what: "base_panels_per_oscillation", value: 0.0 });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub panels: usize,
    pub evaluations: usize,
}

// Kronrod abscissae on [-1, 1] (non-negative half); odd indices are the Gauss nodes.
// Full published digits; rounding to f64 happens at compile time.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    abs: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error).then_with(|| other.a.total_cmp(&self.a))
    }
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut resk = fc * WGK[7];
    let mut resg = fc * WG[3];
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let width = half.abs();
    let abs = resabs * width;
    let asc = resasc * width;
    let mut error = ((resk - resg) * half).abs();
    if asc != 0.0 && error != 0.0 {
        error = asc * (200.0 * error / asc).powf(1.5).min(1.0);
    }
    if abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * abs);
    }
    Panel { a, b, value: resk * half, error, abs }
}

/// Integrates `f` over `[breaks[0], breaks[last]]`, starting from the panels
/// delimited by `breaks` and bisecting the worst panel until the summed error
/// estimate drops below `max(abs_tol, rel_tol·|I|)`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, breaks: &[f64], cfg: &QuadratureConfig) -> Result<Integral> {
    if breaks.len() < 2 {
        return Err(Error::Usage("quadrature needs at least two breakpoints"));
    }
    let mut heap: BinaryHeap<Panel> = breaks.windows(2).filter(|w| w[1] > w[0]).map(|w| kronrod15(&f, w[0], w[1])).collect();
    let mut evaluations = 15 * heap.len();
    loop {
        let (value, error, abs) = heap.iter().fold((0.0, 0.0, 0.0), |(v, e, s), p| (v + p.value, e + p.error, s + p.abs));
        if !value.is_finite() {
            return Err(Error::Quadrature { estimate: error, panels: heap.len() });
        }
        // The roundoff floor keeps heavily cancelling integrands from chasing noise.
        let tol = cfg.abs_tol.max(cfg.rel_tol * value.abs()).max(50.0 * f64::EPSILON * abs);
        if error <= tol {
            return Ok(Integral { value, error, panels: heap.len(), evaluations });
        }
        if heap.len() >= cfg.max_panels {
            return Err(Error::Quadrature { estimate: error, panels: heap.len() });
        }
        let Some(worst) = heap.pop() else {
            return Err(Error::Quadrature { estimate: error, panels: 0 });
        };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Panel is at machine resolution; nothing left to refine.
            return Err(Error::Quadrature { estimate: error, panels: heap.len() + 1 });
        }
        heap.push(kronrod15(&f, worst.a, mid));
        heap.push(kronrod15(&f, mid, worst.b));
        evaluations += 30;
    }
}

/// `n` equal panels on `[a, b]`, merged with extra interior points.
pub(crate) fn breakpoints(a: f64, b: f64, n: usize, extra: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let n = n.max(1);
    let mut pts: Vec<f64> = (0..=n).map(|i| a + (b - a) * (i as f64) / (n as f64)).collect();
    pts.extend(extra.into_iter().filter(|x| *x > a && *x < b));
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}
