//! Adaptive Gauss–Kronrod quadrature on finite intervals.
//!
//! The kernel is the classical 15-point Kronrod rule with embedded 7-point Gauss
//! estimate; the difference of the two rules drives a conservative per-interval
//! error estimate (the usual `(200·|K−G|)^{3/2}` rescaling against the integral of
//! `|f − mean|`). The driver bisects the interval with the largest estimate until
//! the summed estimates meet `max(abs_tol, rel_tol·|result|)` or the subdivision
//! budget is exhausted.
//!
//! All integrands in this crate are smooth on the open interval; endpoints are
//! never evaluated (Kronrod abscissae are interior), so integrable endpoint
//! behavior such as the `t^{m−1}` vanishing of radial volume elements needs no
//! special casing.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerances and budget for one adaptive integration.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct QuadratureSpec {
    /// Relative tolerance on the accumulated result.
    pub rel_tol: f64,
    /// Absolute tolerance; governs integrals whose value is near zero.
    pub abs_tol: f64,
    /// Maximum number of interval bisections.
    pub max_subdivisions: usize,
}

impl QuadratureSpec {
    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let spec = QuadratureSpec {
            rel_tol,
            abs_tol,
            max_subdivisions,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol.is_finite() && self.rel_tol > 0.0) {
            return Err(Error::invalid(format!(
                "rel_tol must be finite and positive, got {}",
                self.rel_tol
            )));
        }
        if !(self.abs_tol.is_finite() && self.abs_tol > 0.0) {
            return Err(Error::invalid(format!(
                "abs_tol must be finite and positive, got {}",
                self.abs_tol
            )));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::invalid("max_subdivisions must be positive"));
        }
        Ok(())
    }

    /// Tighter version of `self`, used for internal anchor integrals whose error
    /// must stay below the caller's budget.
    pub fn tightened(&self, factor: f64) -> QuadratureSpec {
        QuadratureSpec {
            rel_tol: (self.rel_tol * factor).max(1e-15),
            abs_tol: (self.abs_tol * factor).max(1e-300),
            max_subdivisions: self.max_subdivisions.max(256),
        }
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_subdivisions: 512,
        }
    }
}

/// One converged integral with its achieved error estimate.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Integral {
    pub value: f64,
    /// Conservative bound on `|value − exact|` from the Gauss/Kronrod difference.
    pub error_estimate: f64,
    /// Bisections actually performed.
    pub subdivisions: usize,
}

// 15-point Kronrod abscissae (positive half, descending; last entry is the center)
// and weights, with the embedded 7-point Gauss weights. Values are the standard
// ones, exact to f64.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_33,
    0.949_107_912_342_758_524_526_189_684_047_85,
    0.864_864_423_359_769_072_789_712_788_640_93,
    0.741_531_185_599_394_439_863_864_773_280_79,
    0.586_087_235_467_691_130_294_144_838_258_73,
    0.405_845_151_377_397_166_906_606_412_076_96,
    0.207_784_955_007_898_467_600_689_403_773_24,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_2,
    0.104_790_010_322_250_183_839_876_322_541_52,
    0.140_653_259_715_525_918_745_189_590_510_24,
    0.169_004_726_639_267_902_826_583_426_598_55,
    0.190_350_578_064_785_409_913_256_402_421_01,
    0.204_432_940_075_298_892_414_161_999_234_65,
    0.209_482_141_084_727_828_012_999_174_891_71,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_08,
    0.279_705_391_489_276_667_901_467_771_423_78,
    0.381_830_050_505_118_944_950_369_775_488_98,
    0.417_959_183_673_469_387_755_102_040_816_33,
];

/// Raw output of one 15-point Kronrod application.
struct Kernel {
    value: f64,
    error: f64,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Kernel> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    let mut resg = WG[3] * fc;
    let mut resk = WGK[7] * fc;
    let mut resabs = WGK[7] * fc.abs();

    let mut fv = [0.0f64; 15];
    fv[7] = fc;

    // Gauss nodes sit at the odd Kronrod indices.
    for j in 0..3 {
        let idx = 2 * j + 1;
        let absc = half * XGK[idx];
        let f1 = f(center - absc);
        let f2 = f(center + absc);
        fv[7 - idx] = f1;
        fv[7 + idx] = f2;
        let fsum = f1 + f2;
        resg += WG[j] * fsum;
        resk += WGK[idx] * fsum;
        resabs += WGK[idx] * (f1.abs() + f2.abs());
    }
    for j in 0..4 {
        let idx = 2 * j;
        let absc = half * XGK[idx];
        let f1 = f(center - absc);
        let f2 = f(center + absc);
        fv[7 - idx] = f1;
        fv[7 + idx] = f2;
        resk += WGK[idx] * (f1 + f2);
        resabs += WGK[idx] * (f1.abs() + f2.abs());
    }

    let mean = 0.5 * resk;
    let mut resasc = 0.0;
    for (i, v) in fv.iter().enumerate() {
        let w = WGK[if i <= 7 { 7 - i } else { i - 7 }];
        resasc += w * (v - mean).abs();
    }

    let value = resk * half;
    if !value.is_finite() {
        return Err(Error::invalid(format!(
            "integrand produced a non-finite value on [{a}, {b}]"
        )));
    }

    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let error = rescale_error((resk - resg) * half, resabs, resasc);

    Ok(Kernel { value, error })
}

/// QUADPACK-style sharpening of the raw `|K − G|` difference into an error bound.
fn rescale_error(err: f64, resabs: f64, resasc: f64) -> f64 {
    let mut err = err.abs();
    if resasc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / resasc).powf(1.5);
        err = if scale < 1.0 { resasc * scale } else { resasc };
    }
    let min_positive = f64::MIN_POSITIVE / (50.0 * f64::EPSILON);
    if resabs > min_positive {
        let min_err = 50.0 * f64::EPSILON * resabs;
        if min_err > err {
            err = min_err;
        }
    }
    err
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl Segment {
    /// Bisection makes no progress once the midpoint collides with an endpoint.
    fn splittable(&self) -> bool {
        let mid = 0.5 * (self.a + self.b);
        mid > self.a && mid < self.b
    }
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error && self.a == other.a
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
        // Largest error first; ties broken by position for determinism.
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// Integrate `f` over the finite interval `[a, b]`.
///
/// Returns the estimate together with the achieved error bound and the number of
/// bisections. Fails with [`Error::QuadratureNonConvergence`] when the budget in
/// `spec` runs out before the tolerances are met.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Integral> {
    spec.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::invalid(format!("non-finite bounds [{a}, {b}]")));
    }
    if a == b {
        return Ok(Integral {
            value: 0.0,
            error_estimate: 0.0,
            subdivisions: 0,
        });
    }
    if a > b {
        let mut flipped = integrate(f, b, a, spec)?;
        flipped.value = -flipped.value;
        return Ok(flipped);
    }

    let first = gk15(&f, a, b)?;
    let mut heap = BinaryHeap::new();
    heap.push(Segment {
        a,
        b,
        value: first.value,
        error: first.error,
    });
    let mut total_value = first.value;
    let mut total_error = first.error;
    let mut subdivisions = 0usize;

    loop {
        let needed = spec.abs_tol.max(spec.rel_tol * total_value.abs());
        if total_error <= needed {
            break;
        }
        if subdivisions >= spec.max_subdivisions {
            return Err(Error::QuadratureNonConvergence {
                subdivisions,
                error_estimate: total_error,
                needed,
            });
        }
        let worst = heap.pop().expect("heap holds at least one segment");
        if !worst.splittable() {
            // Rounding floor reached; refining further cannot help.
            heap.push(worst);
            break;
        }
        let mid = 0.5 * (worst.a + worst.b);
        let left = gk15(&f, worst.a, mid)?;
        let right = gk15(&f, mid, worst.b)?;
        total_value += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: left.value,
            error: left.error,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: right.value,
            error: right.error,
        });
        subdivisions += 1;
    }

    // Resum in positional order; the incremental total accumulates cancellation drift.
    let mut segments: Vec<Segment> = heap.into_vec();
    segments.sort_by(|s, t| s.a.total_cmp(&t.a));
    let value = segments.iter().map(|s| s.value).sum();
    let error_estimate = segments.iter().map(|s| s.error).sum();

    let needed = spec.abs_tol.max(spec.rel_tol * f64::abs(value));
    if error_estimate > needed {
        return Err(Error::QuadratureNonConvergence {
            subdivisions,
            error_estimate,
            needed,
        });
    }

    Ok(Integral {
        value,
        error_estimate,
        subdivisions,
    })
}

/// Integrate `f` over `[a, b]` with quadrature panels forced to start and end
/// at each of `cuts`.
///
/// `cuts` must be increasing; entries outside `(a, b)` are ignored. Each piece
/// is integrated independently against `spec` and the results are summed, so
/// integrands that are polynomial between cuts (spline-backed profiles)
/// converge immediately instead of bisecting toward every kink.
pub fn integrate_piecewise<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    cuts: &[f64],
    spec: &QuadratureSpec,
) -> Result<Integral> {
    if !(a < b) || cuts.is_empty() {
        return integrate(f, a, b, spec);
    }
    let mut value = 0.0;
    let mut error_estimate = 0.0;
    let mut subdivisions = 0usize;
    let mut lo = a;
    for &cut in cuts {
        if cut <= lo || cut >= b {
            continue;
        }
        let part = integrate(&f, lo, cut, spec)?;
        value += part.value;
        error_estimate += part.error_estimate;
        subdivisions += part.subdivisions;
        lo = cut;
    }
    let last = integrate(&f, lo, b, spec)?;
    Ok(Integral {
        value: value + last.value,
        error_estimate: error_estimate + last.error_estimate,
        subdivisions: subdivisions + last.subdivisions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn polynomial_is_exact() {
        // GK15 integrates degree <= 29 exactly; adaptive driver should not split.
        let r = integrate(|t| 3.0 * t * t, 0.0, 2.0, &spec()).unwrap();
        assert!((r.value - 8.0).abs() < 1e-13);
        assert_eq!(r.subdivisions, 0);
    }

    #[test]
    fn smooth_transcendental() {
        let r = integrate(f64::exp, 0.0, 1.0, &spec()).unwrap();
        assert!((r.value - (std::f64::consts::E - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn integrable_endpoint_singularity_in_derivative() {
        // sqrt has unbounded derivatives at 0 but the rule never evaluates endpoints.
        let r = integrate(f64::sqrt, 0.0, 1.0, &spec()).unwrap();
        assert!((r.value - 2.0 / 3.0).abs() < 1e-9, "value {}", r.value);
    }

    #[test]
    fn oscillatory_needs_subdivision() {
        let r = integrate(|t| (50.0 * t).sin(), 0.0, 1.0, &spec()).unwrap();
        let exact = (1.0 - (50.0f64).cos()) / 50.0;
        assert!((r.value - exact).abs() < 1e-10);
        assert!(r.subdivisions > 0);
    }

    #[test]
    fn piecewise_handles_kinked_integrand() {
        // |t| has a kink at 0; a panel boundary there makes both halves exact.
        let cuts = [0.0];
        let r = integrate_piecewise(f64::abs, -1.0, 1.0, &cuts, &spec()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-14, "value {}", r.value);
        assert_eq!(r.subdivisions, 0);

        // cuts outside (a, b) and an empty cut list fall back to one sweep
        let r = integrate_piecewise(|t: f64| t * t, 0.0, 1.0, &[-3.0, 5.0], &spec()).unwrap();
        assert!((r.value - 1.0 / 3.0).abs() < 1e-14);
        let r = integrate_piecewise(|t: f64| t * t, 0.0, 1.0, &[], &spec()).unwrap();
        assert!((r.value - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn reversed_bounds_negate() {
        let fwd = integrate(f64::exp, 0.0, 1.0, &spec()).unwrap();
        let rev = integrate(f64::exp, 1.0, 0.0, &spec()).unwrap();
        assert_eq!(fwd.value, -rev.value);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let tight = QuadratureSpec::new(1e-15, 1e-300, 3).unwrap();
        let err = integrate(|t| (500.0 * t).sin().abs(), 0.0, 1.0, &tight).unwrap_err();
        match err {
            Error::QuadratureNonConvergence { error_estimate, .. } => {
                assert!(error_estimate > 0.0);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn error_estimate_bounds_true_error() {
        for (f, a, b, exact) in [
            (f64::sin as fn(f64) -> f64, 0.0, 3.0, 1.0 - 3.0f64.cos()),
            (f64::exp, -1.0, 2.0, std::f64::consts::E.powi(2) - (-1.0f64).exp()),
        ] {
            let r = integrate(f, a, b, &spec()).unwrap();
            assert!((r.value - exact).abs() <= r.error_estimate.max(1e-14));
        }
    }

    #[test]
    fn spec_validation() {
        assert!(QuadratureSpec::new(0.0, 1e-10, 10).is_err());
        assert!(QuadratureSpec::new(1e-10, f64::NAN, 10).is_err());
        assert!(QuadratureSpec::new(1e-10, 1e-10, 0).is_err());
    }
}
