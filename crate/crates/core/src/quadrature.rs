//! Globally adaptive Gauss–Kronrod (7/15) quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

// Kronrod abscissae, descending; odd indices are the embedded Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

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

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature {
            rel_tol: 1e-12,
            abs_tol: 0.0,
            max_intervals: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let dx = half * XGK[i];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[i] * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    Segment {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

impl Quadrature {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        Quadrature {
            rel_tol,
            ..Default::default()
        }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }

    /// Integrates `f` over the finite interval `[a, b]`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> Result<QuadratureResult> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::Validation(format!(
                "finite interval required, got [{a}, {b}]"
            )));
        }
        if a == b {
            return Ok(QuadratureResult {
                value: 0.0,
                abs_error: 0.0,
                evaluations: 0,
                intervals: 0,
            });
        }

        let first = kronrod15(&f, a, b);
        let mut value = first.value;
        let mut error = first.error;
        let mut heap = BinaryHeap::new();
        heap.push(first);
        let mut evaluations = 15;

        while !(error <= self.target(value)) {
            if !(value.is_finite() && error.is_finite()) {
                return Err(Error::QuadratureNotConverged {
                    achieved: f64::INFINITY,
                    requested: self.rel_tol,
                });
            }
            if heap.len() >= self.max_intervals {
                return Err(Error::QuadratureNotConverged {
                    achieved: error / value.abs().max(f64::MIN_POSITIVE),
                    requested: self.rel_tol,
                });
            }
            let worst = heap.pop().expect("heap never empty");
            let mid = 0.5 * (worst.a + worst.b);
            if mid <= worst.a || mid >= worst.b {
                // interval can no longer be split in floating point
                return Err(Error::QuadratureNotConverged {
                    achieved: error / value.abs().max(f64::MIN_POSITIVE),
                    requested: self.rel_tol,
                });
            }
            let left = kronrod15(&f, worst.a, mid);
            let right = kronrod15(&f, mid, worst.b);
            evaluations += 30;
            value += left.value + right.value - worst.value;
            error += left.error + right.error - worst.error;
            heap.push(left);
            heap.push(right);
        }

        // re-sum to shed the drift of the running updates
        let intervals = heap.len();
        let (value, abs_error) = heap
            .into_iter()
            .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
        Ok(QuadratureResult {
            value,
            abs_error,
            evaluations,
            intervals,
        })
    }

    /// Integrates `f` over `[a, ∞)` via `x = a + scale·t/(1−t)`.
    ///
    /// `scale` should be the length over which the integrand varies.
    pub fn integrate_to_infinity<F: Fn(f64) -> f64>(
        &self,
        f: F,
        a: f64,
        scale: f64,
    ) -> Result<QuadratureResult> {
        if !(scale > 0.0) {
            return Err(Error::InvalidParameter {
                name: "scale",
                value: scale,
                reason: "must be strictly positive",
            });
        }
        let mapped = |t: f64| {
            let one_minus = 1.0 - t;
            let x = a + scale * t / one_minus;
            let y = f(x) * scale / (one_minus * one_minus);
            if y.is_finite() {
                y
            } else {
                0.0
            }
        };
        self.integrate(mapped, 0.0, 1.0)
    }
}
