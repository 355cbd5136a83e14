//! Radial Kähler metric quantities from a potential `f(t)`, `t = |z|²`.
//!
//! A U(m)-invariant Kähler metric on (part of) a resolution of `C^m/Γ` is encoded
//! by its potential profile. Relative to `(dd^c t)^m` the volume density is
//!
//! ```text
//! V(t) = f'(t)^{m-1} · (f'(t) + t·f''(t))
//! ```
//!
//! and the flat model `f = t/4` has `V ≡ 4^{-m}`. Scalar curvature, ball volume,
//! and total scalar curvature over balls all reduce to one-dimensional integrals
//! of `V` and `log V` derivatives, evaluated here by adaptive quadrature.
//!
//! The profile's large-`t` behavior is captured by two constants `(e, c)`:
//!
//! ```text
//! f(t) = t/4 + e·(1 − t^{2-m})/(2 − m) + c·t^{1-m} + const + (decaying)
//! ```
//!
//! with the `m = 2` limit of the middle term read as `−e·log t`. `e` is the
//! ADM-mass coefficient of the metric; `fit_asymptotics` recovers `(e, c)` from
//! samples, and the `predicted_*` functions evaluate the closed-form large-radius
//! expansions that the quadrature results are verified against.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::ALEModelInvariants;
use crate::quad::{integrate_piecewise, Integral, QuadratureSpec};

/// Derivative access to a potential profile `f(t)`.
///
/// `deriv(t, k)` returns `f⁽ᵏ⁾(t)` for `0 <= k <= 4`. Implementations may assume
/// `t` is inside the open domain; domain checks live on [`RadialProfile`].
pub trait Potential: Send + Sync {
    fn deriv(&self, t: f64, k: usize) -> f64;

    /// Interior points of `(lo, hi)` where some derivative order loses
    /// continuity (e.g. spline knots), in increasing order. Integrators align
    /// quadrature panels on these so piecewise-polynomial potentials are
    /// integrated exactly instead of by chasing every kink adaptively.
    fn breakpoints(&self, lo: f64, hi: f64) -> Vec<f64> {
        let _ = (lo, hi);
        Vec::new()
    }
}

/// Number of points in the pre-quadrature positivity screen.
const SCREEN_POINTS: usize = 256;

/// A radial profile: dimension, group order, domain, and potential.
#[derive(Clone)]
pub struct RadialProfile {
    m: usize,
    gamma: u32,
    t_min: f64,
    asymptotics: Option<(f64, f64)>,
    potential: Arc<dyn Potential>,
}

impl std::fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RadialProfile")
            .field("m", &self.m)
            .field("gamma", &self.gamma)
            .field("t_min", &self.t_min)
            .field("asymptotics", &self.asymptotics)
            .finish_non_exhaustive()
    }
}

impl RadialProfile {
    /// `t_min = 0` for global profiles; `t_min > 0` restricts to a tail annulus.
    pub fn new(
        m: usize,
        gamma: u32,
        t_min: f64,
        asymptotics: Option<(f64, f64)>,
        potential: Arc<dyn Potential>,
    ) -> Result<Self> {
        if m < 2 {
            return Err(Error::invalid(format!("dimension m = {m} < 2")));
        }
        if gamma < 1 {
            return Err(Error::invalid("group order gamma must be >= 1"));
        }
        if !(t_min.is_finite() && t_min >= 0.0) {
            return Err(Error::invalid(format!("t_min = {t_min} must be finite and >= 0")));
        }
        if let Some((e, c)) = asymptotics {
            if !(e.is_finite() && c.is_finite()) {
                return Err(Error::invalid("declared asymptotics must be finite"));
            }
        }
        Ok(RadialProfile {
            m,
            gamma,
            t_min,
            asymptotics,
            potential,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn gamma(&self) -> u32 {
        self.gamma
    }

    pub fn t_min(&self) -> f64 {
        self.t_min
    }

    /// Declared `(e, c)` constants, if the profile carries them.
    pub fn asymptotics(&self) -> Option<(f64, f64)> {
        self.asymptotics
    }

    fn check_domain(&self, t: f64) -> Result<()> {
        // t = t_min is allowed so boundary anchors can be evaluated; t = 0 is
        // not, the coordinate degenerates there.
        if !(t.is_finite() && t > 0.0 && t >= self.t_min) {
            return Err(Error::Domain {
                t,
                t_min: self.t_min,
            });
        }
        Ok(())
    }

    /// `f⁽ᵏ⁾(t)`, `0 <= k <= 4`.
    pub fn deriv(&self, t: f64, k: usize) -> Result<f64> {
        self.check_domain(t)?;
        assert!(k <= 4, "derivative order {k} out of range");
        Ok(self.potential.deriv(t, k))
    }

    pub fn f(&self, t: f64) -> Result<f64> {
        self.deriv(t, 0)
    }

    fn density_raw(&self, t: f64) -> f64 {
        let fp = self.potential.deriv(t, 1);
        let fpp = self.potential.deriv(t, 2);
        fp.powi(self.m as i32 - 1) * (fp + t * fpp)
    }

    /// Volume density `V(t) = f'^{m-1}(f' + t f'')` relative to `(dd^c t)^m`.
    pub fn volume_density(&self, t: f64) -> Result<f64> {
        self.check_domain(t)?;
        let v = self.density_raw(t);
        if !(v > 0.0) {
            return Err(Error::Degenerate { t, density: v });
        }
        Ok(v)
    }

    fn scalar_raw(&self, t: f64) -> f64 {
        self.scalar_with_noise(t).0
    }

    /// Scalar curvature together with a first-order bound on its own rounding
    /// error, assuming each derivative of `f` is accurate to 4 ulp.
    ///
    /// The formula stacks cancelling sums: `f' + t·f''` on near-flat profiles
    /// is a tiny difference of huge terms, and the log-derivative combinations
    /// cancel again on top of it. A value whose magnitude does not exceed the
    /// propagated bound is indistinguishable from zero in f64 and collapses to
    /// exactly zero; without that, quadrature over scalar-flat profiles chases
    /// rounding junk that grows without bound toward t = 0.
    fn scalar_with_noise(&self, t: f64) -> (f64, f64) {
        const U: f64 = 4.0 * f64::EPSILON;
        let m = self.m as f64;
        let fp = self.potential.deriv(t, 1);
        let f2 = self.potential.deriv(t, 2);
        let f3 = self.potential.deriv(t, 3);
        let f4 = self.potential.deriv(t, 4);

        let b = fp + t * f2;
        let nb = U * (fp.abs() + (t * f2).abs());
        let bp = 2.0 * f2 + t * f3;
        let nbp = U * ((2.0 * f2).abs() + (t * f3).abs());
        let bpp = 3.0 * f3 + t * f4;
        let nbpp = U * ((3.0 * f3).abs() + (t * f4).abs());

        // L = log V = (m-1) log f' + log b
        let q1 = f2 / fp;
        let q2 = bp / b;
        let nq2 = (nbp + q2.abs() * nb) / b.abs();
        let lp = (m - 1.0) * q1 + q2;
        let nlp = U * ((m - 1.0) * q1).abs() + nq2 + U * lp.abs();

        let t1 = (f3 * fp - f2 * f2) / (fp * fp);
        let nt1 = U * ((f3 * fp).abs() + (f2 * f2).abs()) / (fp * fp) + U * t1.abs();
        let n2 = bpp * b - bp * bp;
        let nn2 = nbpp * b.abs()
            + bpp.abs() * nb
            + 2.0 * bp.abs() * nbp
            + U * ((bpp * b).abs() + (bp * bp).abs());
        let t2 = n2 / (b * b);
        let nt2 = (nn2 + 2.0 * n2.abs() * nb / b.abs()) / (b * b) + U * t2.abs();
        let lpp = (m - 1.0) * t1 + t2;
        let nlpp = (m - 1.0) * nt1 + nt2 + U * lpp.abs();

        let cross = lp * q1;
        let ncross = nlp * q1.abs() + U * cross.abs();
        let inner = (m - 1.0) * cross + lpp;
        let ninner = (m - 1.0) * ncross + nlpp + U * inner.abs();
        let num = m * lp + t * inner;
        let nnum = m * nlp + t * ninner + U * num.abs();
        let s = -num / b;
        let ns = (nnum + s.abs() * nb) / b.abs();
        if s.abs() > ns { (s, ns) } else { (0.0, ns) }
    }

    /// Pointwise scalar curvature of the radial metric at radius-squared `t`.
    ///
    /// Computed from `s·η^m = m·ρ ∧ η^{m-1}` with `ρ = −dd^c log V`, which for a
    /// radial profile collapses to
    ///
    /// ```text
    /// s(t) = −[ m·L' + t·( (m−1)·L'·f''/f' + L'' ) ] / (f' + t·f'')
    /// ```
    ///
    /// where `L = log V`. Needs derivatives of `f` up to order 4.
    pub fn scalar_curvature(&self, t: f64) -> Result<f64> {
        self.check_domain(t)?;
        let v = self.density_raw(t);
        if !(v > 0.0) {
            return Err(Error::Degenerate { t, density: v });
        }
        Ok(self.scalar_raw(t))
    }

    /// Check `f' > 0` and `f' + t·f'' > 0` on a 256-point log grid over `(lo, hi)`.
    ///
    /// Called before every quadrature; a failure aborts with the offending `t`.
    pub fn positivity_screen(&self, hi: f64) -> Result<()> {
        let lo = if self.t_min > 0.0 {
            self.t_min * (1.0 + 1e-10)
        } else {
            hi * 1e-12
        };
        if !(hi > lo) {
            return Err(Error::invalid(format!(
                "screen interval empty: ({lo}, {hi})"
            )));
        }
        let ratio = hi / lo;
        for i in 0..SCREEN_POINTS {
            let frac = i as f64 / (SCREEN_POINTS - 1) as f64;
            let t = lo * ratio.powf(frac);
            let fp = self.potential.deriv(t, 1);
            if !(fp > 0.0) {
                return Err(Error::Positivity {
                    t,
                    what: "f'",
                    value: fp,
                });
            }
            let tf2 = t * self.potential.deriv(t, 2);
            let b = fp + tf2;
            // A nonpositive b inside the rounding noise of the cancelling sum
            // is indeterminate, not a certified degeneracy: on near-flat
            // profiles b underflows the cancellation of two huge terms.
            let noise = 4.0 * f64::EPSILON * (fp.abs() + tf2.abs());
            if !(b > 0.0) && b.abs() > noise {
                return Err(Error::Positivity {
                    t,
                    what: "f' + t f''",
                    value: b,
                });
            }
        }
        Ok(())
    }

    /// Shared prefactor of the radial reductions: `4^m π^m / ((m−1)!·γ)`.
    fn radial_prefactor(&self) -> f64 {
        4.0f64.powi(self.m as i32) * PI.powi(self.m as i32)
            / (factorial(self.m - 1) * self.gamma as f64)
    }

    /// Exact boundary term of the volume integrand's antiderivative,
    /// `(4π)^m t^m f'(t)^m / (m!·γ)`.
    ///
    /// The volume integrand is an exact derivative,
    /// `4^m π^m/((m−1)!γ) · V·t^{m−1} = d/dt[(4π)^m t^m f'(t)^m/(m!·γ)]`,
    /// so a tail-only profile's ball volume is the annulus integral plus this
    /// term at `t_min`. Global profiles (`t_min = 0`) need no anchor.
    pub fn boundary_term(&self, t: f64) -> f64 {
        let m = self.m as i32;
        (4.0 * PI).powi(m) * t.powi(m) * self.potential.deriv(t, 1).powi(m)
            / (factorial(self.m) * self.gamma as f64)
    }

    /// Volume of the ball of radius `R` (annulus from `t_min` for tail profiles,
    /// anchored by the exact boundary term so large-`R` expansions apply).
    pub fn ball_volume(&self, r: f64, quad: &QuadratureSpec) -> Result<Integral> {
        let hi = r * r;
        if !(hi > self.t_min) {
            return Err(Error::invalid(format!(
                "R^2 = {hi} must exceed t_min = {}",
                self.t_min
            )));
        }
        self.positivity_screen(hi)?;
        let mexp = self.m as i32 - 1;
        let mut result = integrate_piecewise(
            |t| self.density_raw(t) * t.powi(mexp),
            self.t_min,
            hi,
            &self.potential.breakpoints(self.t_min, hi),
            quad,
        )?;
        let pref = self.radial_prefactor();
        result.value *= pref;
        result.error_estimate *= pref;
        if self.t_min > 0.0 {
            result.value += self.boundary_term(self.t_min);
        }
        Ok(result)
    }

    /// Total scalar curvature of the ball of radius `R`
    /// (annulus for tail profiles; the scalar integrand needs no anchor).
    pub fn total_scalar_ball(&self, r: f64, quad: &QuadratureSpec) -> Result<Integral> {
        let hi = r * r;
        if !(hi > self.t_min) {
            return Err(Error::invalid(format!(
                "R^2 = {hi} must exceed t_min = {}",
                self.t_min
            )));
        }
        self.positivity_screen(hi)?;
        let mexp = self.m as i32 - 1;
        let mut result = integrate_piecewise(
            |t| self.scalar_raw(t) * self.density_raw(t) * t.powi(mexp),
            self.t_min,
            hi,
            &self.potential.breakpoints(self.t_min, hi),
            quad,
        )?;
        let pref = self.radial_prefactor();
        result.value *= pref;
        result.error_estimate *= pref;
        Ok(result)
    }

    /// Estimate `∫ ξ^m/m!` from ball volumes over an increasing radius schedule.
    ///
    /// For each `R` the three universal terms
    /// `S(R) = π^m R^{2m}/(m!γ) − 4π^m e R²/((m−1)!γ) + 8π^m e² R^{4−2m}/((m−2)!γ)`
    /// are subtracted from the measured volume; the bracketed remainder converges
    /// to `∫ξ^m/m! − 4π^m c/((m−2)!γ)` and is extrapolated over the schedule.
    pub fn xi_integral_from_volume(
        &self,
        asym: (f64, f64),
        r_schedule: &[f64],
        quad: &QuadratureSpec,
    ) -> Result<Extrapolated> {
        let (e, c) = asym;
        if r_schedule.len() < 3 {
            return Err(Error::invalid("radius schedule needs at least 3 entries"));
        }
        if !r_schedule.windows(2).all(|w| w[1] > w[0]) {
            return Err(Error::invalid("radius schedule must be strictly increasing"));
        }
        let mut brackets = Vec::with_capacity(r_schedule.len());
        let mut noise = Vec::with_capacity(r_schedule.len());
        for &r in r_schedule {
            let measured = self.ball_volume(r, quad)?;
            let s = universal_terms(self.m, self.gamma, e, r);
            brackets.push(measured.value - s);
            noise.push(measured.error_estimate + 16.0 * f64::EPSILON * (measured.value.abs() + s.abs()));
        }
        let mut extr = extrapolate(r_schedule, &brackets, &noise)?;
        extr.value += 4.0 * PI.powi(self.m as i32) * c
            / (factorial(self.m - 2) * self.gamma as f64);
        extr.schedule = r_schedule
            .iter()
            .zip(&brackets)
            .map(|(&r, &b)| (r, b))
            .collect();
        Ok(extr)
    }
}

/// `(4π)^m R^{2m}`: the boundary-sphere integral of `d^c|z|² ∧ (dd^c|z|²)^{m−1}`,
/// equal to `4^m·m!` times the euclidean ball volume. Exact closed form; serves
/// as the Stokes oracle for quadrature self-tests.
pub fn sphere_integral(m: usize, r: f64) -> f64 {
    assert!(m >= 1, "m must be >= 1");
    (4.0 * PI).powi(m as i32) * r.powi(2 * m as i32)
}

/// The universal (ξ-independent) part of the large-radius volume expansion.
fn universal_terms(m: usize, gamma: u32, e: f64, r: f64) -> f64 {
    let g = gamma as f64;
    let pm = PI.powi(m as i32);
    pm * r.powi(2 * m as i32) / (factorial(m) * g)
        - 4.0 * pm * e * r * r / (factorial(m - 1) * g)
        + 8.0 * pm * e * e * r.powi(4 - 2 * m as i32) / (factorial(m - 2) * g)
}

/// Closed-form large-`R` ball volume of an ALE model:
///
/// ```text
/// π^m R^{2m}/(m!γ) − 4π^m e R²/((m−1)!γ) − 4π^m (c − 2e²R^{4−2m})/((m−2)!γ) + ∫ξ^m/m!
/// ```
///
/// (the four displayed terms; the `O(R^{−1})` remainder is dropped).
pub fn predicted_ball_volume(inv: &ALEModelInvariants, r: f64) -> f64 {
    let m = inv.m as i32;
    let g = inv.gamma as f64;
    let pm = PI.powi(m);
    pm * r.powi(2 * m) / (factorial(inv.m) * g)
        - 4.0 * pm * inv.e * r * r / (factorial(inv.m - 1) * g)
        - 4.0 * pm * (inv.c - 2.0 * inv.e * inv.e * r.powi(4 - 2 * m)) / (factorial(inv.m - 2) * g)
        + inv.xi_m
}

/// Closed-form total scalar curvature of an ALE model:
/// `∫ρ∧ξ^{m−1}/(m−1)! + 16π^m e/((m−2)!γ)`.
pub fn predicted_total_scalar(inv: &ALEModelInvariants) -> f64 {
    inv.rho_xi
        + 16.0 * PI.powi(inv.m as i32) * inv.e / (factorial(inv.m - 2) * inv.gamma as f64)
}

/// Result of a least-squares fit of the tail expansion basis.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AsymptoticFit {
    pub e_hat: f64,
    pub c_hat: f64,
    /// Additive constant of the potential; unconstrained for sampled profiles,
    /// so it is always estimated and reported rather than assumed.
    pub const_hat: f64,
    pub rms_residual: f64,
}

/// Relative singular-value cutoff declaring the fit design matrix rank-deficient.
const FIT_RANK_RTOL: f64 = 1e-10;

/// The ADM-mass basis function `(1 − t^{2−m})/(2 − m)`, with the `m = 2` limit
/// `−log t` selected by exact integer match on `m`.
pub fn mass_basis(t: f64, m: usize) -> f64 {
    if m == 2 {
        -t.ln()
    } else {
        (1.0 - t.powi(2 - m as i32)) / (2.0 - m as f64)
    }
}

/// Least squares of `f(t) − t/4` against `{mass_basis, t^{1−m}, 1}`.
///
/// Samples must number at least 3, be distinct in `t`, and lie above
/// `t_fit_min`. For samples generated exactly from the basis the fit is exact up
/// to conditioning; a rank-deficient design (clustered samples) is an error.
pub fn fit_asymptotics(samples: &[(f64, f64)], m: usize, t_fit_min: f64) -> Result<AsymptoticFit> {
    if m < 2 {
        return Err(Error::invalid(format!("dimension m = {m} < 2")));
    }
    if samples.len() < 3 {
        return Err(Error::invalid(format!(
            "need at least 3 samples, got {}",
            samples.len()
        )));
    }
    for &(t, f) in samples {
        if !(t.is_finite() && f.is_finite()) {
            return Err(Error::invalid(format!("non-finite sample (t, f) = ({t}, {f})")));
        }
        if t <= t_fit_min || t <= 0.0 {
            return Err(Error::invalid(format!(
                "sample t = {t} at or below t_fit_min = {t_fit_min}"
            )));
        }
    }
    let mut ts: Vec<f64> = samples.iter().map(|s| s.0).collect();
    ts.sort_by(f64::total_cmp);
    if ts.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::invalid("sample t values must be distinct"));
    }

    let n = samples.len();
    let mut design = DMatrix::zeros(n, 3);
    let mut rhs = DVector::zeros(n);
    for (i, &(t, f)) in samples.iter().enumerate() {
        design[(i, 0)] = mass_basis(t, m);
        design[(i, 1)] = t.powi(1 - m as i32);
        design[(i, 2)] = 1.0;
        rhs[i] = f - 0.25 * t;
    }

    // Equilibrate columns so the rank test sees shape, not units.
    let mut scales = [0.0f64; 3];
    for j in 0..3 {
        let norm = design.column(j).norm();
        if norm == 0.0 {
            return Err(Error::FitRankDeficient { rank: j, needed: 3 });
        }
        scales[j] = norm;
        let mut col = design.column_mut(j);
        col /= norm;
    }

    let svd = design.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let rank = svd
        .singular_values
        .iter()
        .filter(|&&s| s > FIT_RANK_RTOL * smax)
        .count();
    if rank < 3 {
        return Err(Error::FitRankDeficient { rank, needed: 3 });
    }
    let scaled = svd
        .solve(&rhs, FIT_RANK_RTOL * smax)
        .map_err(|msg| Error::invalid(format!("svd solve failed: {msg}")))?;
    let coeffs = [
        scaled[0] / scales[0],
        scaled[1] / scales[1],
        scaled[2] / scales[2],
    ];

    let mut ss = 0.0;
    for &(t, f) in samples {
        let fitted =
            coeffs[0] * mass_basis(t, m) + coeffs[1] * t.powi(1 - m as i32) + coeffs[2];
        let r = (f - 0.25 * t) - fitted;
        ss += r * r;
    }

    Ok(AsymptoticFit {
        e_hat: coeffs[0],
        c_hat: coeffs[1],
        const_hat: coeffs[2],
        rms_residual: (ss / n as f64).sqrt(),
    })
}

/// A limit over a radius schedule, with the sampled values retained for export.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Extrapolated {
    pub value: f64,
    /// Spread-based error estimate (never below the quadrature noise floor).
    pub error_estimate: f64,
    /// `(R, sampled value)` pairs the limit was taken over.
    pub schedule: Vec<(f64, f64)>,
}

/// Limit of `v(R) = L + O(1/R)` over an increasing schedule.
///
/// Pairwise elimination of the `1/R` term gives a second sequence `L_k`; the
/// better-converging of the two (raw tail vs eliminated tail) is returned. The
/// sequence diverges if consecutive differences grow while clearly above the
/// supplied noise floor.
fn extrapolate(rs: &[f64], values: &[f64], noise: &[f64]) -> Result<Extrapolated> {
    let n = values.len();
    debug_assert!(n >= 3 && rs.len() == n && noise.len() == n);

    for k in 0..n - 2 {
        let d0 = (values[k + 1] - values[k]).abs();
        let d1 = (values[k + 2] - values[k + 1]).abs();
        let floor0 = 4.0 * (noise[k] + noise[k + 1]);
        let floor1 = 4.0 * (noise[k + 1] + noise[k + 2]);
        if d0 > floor0 && d1 > floor1 && d1 > d0 {
            return Err(Error::ExtrapolationDiverged {
                message: format!(
                    "|v({}) - v({})| = {:.3e} exceeds the previous difference {:.3e}",
                    rs[k + 2],
                    rs[k + 1],
                    d1,
                    d0
                ),
            });
        }
    }

    let lift = |i: usize| (rs[i + 1] * values[i + 1] - rs[i] * values[i]) / (rs[i + 1] - rs[i]);
    let l_last = lift(n - 2);
    let l_prev = lift(n - 3);
    let spread_l = (l_last - l_prev).abs();
    let spread_v = (values[n - 1] - values[n - 2]).abs();
    let floor = noise[n - 1].max(noise[n - 2]);

    let (value, spread) = if spread_l <= spread_v {
        (l_last, spread_l)
    } else {
        (values[n - 1], spread_v)
    };
    Ok(Extrapolated {
        value,
        error_estimate: spread.max(floor),
        schedule: Vec::new(),
    })
}

/// Limit of `v(R) = L + O(1/R²)`; reuses the `1/x` extrapolation at `x = R²`.
pub(crate) fn extrapolate_inverse_r2(rs: &[f64], values: &[f64], noise: &[f64]) -> Result<Extrapolated> {
    let xs: Vec<f64> = rs.iter().map(|r| r * r).collect();
    extrapolate(&xs, values, noise)
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n as u128).product::<u128>() as f64
}
