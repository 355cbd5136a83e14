//! Built-in ALE model catalog and their invariant packages.
//!
//! Each model packages a radial potential together with the constants entering
//! the large-radius expansions:
//!
//! * `Flat`: `f = t/4` on `C^m/Γ`, every invariant zero.
//! * `EguchiHanson`: `f' = sqrt(t² + a⁴)/(4t)` on the `O(-2)` resolution at
//!   `m = 2`, `γ = 2`. Ricci-flat, so `V ≡ 1/16` and `ρ = 0`.
//! * `Burns`: `f = t/4 + a·log t` at `m = 2`, `γ = 1`. Scalar-flat with
//!   nonzero mass `e = −a`.
//! * `SyntheticTail`: the pure expansion tail `t/4 + e·(1−t^{2−m})/(2−m) +
//!   c·t^{1−m}` on `t > t_min`, for exercising the numeric pipeline at any `m`.
//! * `Custom`: invariants supplied directly, with no potential attached.
//!
//! Catalog invariants are closed-form. So are anchored tails (`t_min > 0`):
//! their boundary anchor makes the ball volume an exact antiderivative value,
//! forcing `∫ξ^m/m! = 0`, and the total-scalar antiderivative at `t_min` gives
//! `∫ρ∧ξ^{m−1}/(m−1)!` directly. Only a tail starting at `t_min = 0` falls
//! back to the quadrature-and-extrapolation route the verification commands
//! use, and its invariants carry that pipeline's numeric error.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::QuadratureSpec;
use crate::radial::{extrapolate_inverse_r2, factorial, mass_basis, Potential, RadialProfile};

/// Invariants of an ALE model entering the volume and total-scalar expansions.
///
/// `xi_m` is `∫ ξ^m/m!` and `rho_xi` is `∫ ρ∧ξ^{m−1}/(m−1)!` over the
/// resolution; `a` is the coefficient with `xi_m = 16π^m·a/(m−2)!`. The sign of
/// `a` is meaningful and must not be normalized away.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ALEModelInvariants {
    pub m: usize,
    pub gamma: u32,
    /// ADM-mass coefficient of the potential expansion.
    pub e: f64,
    /// Next-order coefficient of the potential expansion.
    pub c: f64,
    /// `∫ ξ^m / m!`.
    pub xi_m: f64,
    /// `∫ ρ ∧ ξ^{m−1} / (m−1)!`.
    pub rho_xi: f64,
    /// `xi_m·(m−2)!/(16π^m)`; signed.
    pub a: f64,
    pub scalar_flat: bool,
}

impl ALEModelInvariants {
    /// Validating constructor; see [`Self::validate`].
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        m: usize,
        gamma: u32,
        e: f64,
        c: f64,
        xi_m: f64,
        rho_xi: f64,
        a: f64,
        scalar_flat: bool,
    ) -> Result<Self> {
        let inv = ALEModelInvariants {
            m,
            gamma,
            e,
            c,
            xi_m,
            rho_xi,
            a,
            scalar_flat,
        };
        inv.validate()?;
        Ok(inv)
    }

    /// Enforce the algebraic identities the fields must satisfy:
    /// `xi_m = 16π^m·a/(m−2)!` always; for scalar-flat models
    /// `rho_xi = −16π^m·e/((m−2)!·γ)`; for Ricci-flat models (`e`, `rho_xi`
    /// exactly zero and scalar-flat) `xi_m = 4π^m·c/((m−2)!·γ)`.
    pub fn validate(&self) -> Result<()> {
        if self.m < 2 {
            return Err(Error::invalid(format!("dimension m = {} < 2", self.m)));
        }
        if self.gamma < 1 {
            return Err(Error::invalid("group order gamma must be >= 1"));
        }
        for (name, v) in [
            ("e", self.e),
            ("c", self.c),
            ("xi_m", self.xi_m),
            ("rho_xi", self.rho_xi),
            ("a", self.a),
        ] {
            if !v.is_finite() {
                return Err(Error::invalid(format!("invariant {name} = {v} not finite")));
            }
        }
        let pm = PI.powi(self.m as i32);
        let xi_from_a = 16.0 * pm * self.a / factorial(self.m - 2);
        let tol = 1e-9 * (1.0 + self.xi_m.abs() + xi_from_a.abs());
        if (self.xi_m - xi_from_a).abs() > tol {
            return Err(Error::invalid(format!(
                "xi_m = {:e} violates xi_m = 16 pi^m a/(m-2)! = {:e}",
                self.xi_m, xi_from_a
            )));
        }
        if self.scalar_flat {
            let rho_expected = -16.0 * pm * self.e / (factorial(self.m - 2) * self.gamma as f64);
            let tol = 1e-9 * (1.0 + self.rho_xi.abs() + rho_expected.abs());
            if (self.rho_xi - rho_expected).abs() > tol {
                return Err(Error::invalid(format!(
                    "scalar-flat model must have rho_xi = -16 pi^m e/((m-2)! gamma) = {:e}, got {:e}",
                    rho_expected, self.rho_xi
                )));
            }
        }
        if self.scalar_flat && self.e == 0.0 && self.rho_xi == 0.0 {
            let xi_expected = 4.0 * pm * self.c / (factorial(self.m - 2) * self.gamma as f64);
            let tol = 1e-9 * (1.0 + self.xi_m.abs() + xi_expected.abs());
            if (self.xi_m - xi_expected).abs() > tol {
                return Err(Error::invalid(format!(
                    "Ricci-flat model must have xi_m = 4 pi^m c/((m-2)! gamma) = {:e}, got {:e}",
                    xi_expected, self.xi_m
                )));
            }
        }
        Ok(())
    }
}

/// A catalog model or a bare invariant package.
#[derive(Debug, Clone)]
pub enum ALEModel {
    Flat {
        m: usize,
        gamma: u32,
    },
    EguchiHanson {
        a: f64,
    },
    Burns {
        a: f64,
    },
    SyntheticTail {
        m: usize,
        gamma: u32,
        e: f64,
        c: f64,
        t_min: f64,
    },
    Custom {
        invariants: ALEModelInvariants,
    },
}

/// Grid threshold below which a numerically probed profile counts as scalar-flat.
const SCALAR_FLAT_TOL: f64 = 1e-9;

impl ALEModel {
    pub fn flat(m: usize, gamma: u32) -> Result<Self> {
        if m < 2 {
            return Err(Error::invalid(format!("dimension m = {m} < 2")));
        }
        if gamma < 1 {
            return Err(Error::invalid("group order gamma must be >= 1"));
        }
        Ok(ALEModel::Flat { m, gamma })
    }

    pub fn eguchi_hanson(a: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::invalid(format!("Eguchi-Hanson parameter a = {a} must be > 0")));
        }
        Ok(ALEModel::EguchiHanson { a })
    }

    pub fn burns(a: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::invalid(format!("Burns parameter a = {a} must be > 0")));
        }
        Ok(ALEModel::Burns { a })
    }

    pub fn synthetic_tail(m: usize, gamma: u32, e: f64, c: f64, t_min: f64) -> Result<Self> {
        if m < 2 {
            return Err(Error::invalid(format!("dimension m = {m} < 2")));
        }
        if gamma < 1 {
            return Err(Error::invalid("group order gamma must be >= 1"));
        }
        if !(e.is_finite() && c.is_finite()) {
            return Err(Error::invalid("tail coefficients must be finite"));
        }
        if !(t_min.is_finite() && t_min >= 0.0) {
            return Err(Error::invalid(format!("t_min = {t_min} must be finite and >= 0")));
        }
        Ok(ALEModel::SyntheticTail {
            m,
            gamma,
            e,
            c,
            t_min,
        })
    }

    pub fn custom(invariants: ALEModelInvariants) -> Result<Self> {
        invariants.validate()?;
        Ok(ALEModel::Custom { invariants })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ALEModel::Flat { .. } => "flat",
            ALEModel::EguchiHanson { .. } => "eguchi-hanson",
            ALEModel::Burns { .. } => "burns",
            ALEModel::SyntheticTail { .. } => "synthetic-tail",
            ALEModel::Custom { .. } => "custom",
        }
    }

    /// The model's radial profile. `Custom` carries none.
    pub fn profile(&self) -> Result<RadialProfile> {
        match *self {
            ALEModel::Flat { m, gamma } => {
                RadialProfile::new(m, gamma, 0.0, Some((0.0, 0.0)), Arc::new(FlatPotential))
            }
            ALEModel::EguchiHanson { a } => RadialProfile::new(
                2,
                2,
                0.0,
                Some((0.0, -a.powi(4) / 8.0)),
                Arc::new(EguchiHansonPotential::new(a)),
            ),
            ALEModel::Burns { a } => RadialProfile::new(
                2,
                1,
                0.0,
                Some((-a, 0.0)),
                Arc::new(BurnsPotential { a }),
            ),
            ALEModel::SyntheticTail {
                m,
                gamma,
                e,
                c,
                t_min,
            } => RadialProfile::new(m, gamma, t_min, Some((e, c)), Arc::new(TailPotential { m, e, c })),
            ALEModel::Custom { .. } => Err(Error::NoProfile(
                "custom invariant packages carry no potential",
            )),
        }
    }

    /// Invariant package. Catalog models and anchored tails (`t_min > 0`) are
    /// closed-form; a tail starting at `t_min = 0` falls back to the
    /// quadrature-and-extrapolation route and carries its numeric error.
    pub fn invariants(&self, quad: &QuadratureSpec) -> Result<ALEModelInvariants> {
        match *self {
            ALEModel::Flat { m, gamma } => {
                ALEModelInvariants::new(m, gamma, 0.0, 0.0, 0.0, 0.0, 0.0, true)
            }
            ALEModel::EguchiHanson { a } => {
                let a4 = a.powi(4);
                ALEModelInvariants::new(
                    2,
                    2,
                    0.0,
                    -a4 / 8.0,
                    -PI * PI * a4 / 4.0,
                    0.0,
                    -a4 / 64.0,
                    true,
                )
            }
            ALEModel::Burns { a } => ALEModelInvariants::new(
                2,
                1,
                -a,
                0.0,
                -8.0 * PI * PI * a * a,
                16.0 * PI * PI * a,
                -a * a / 2.0,
                true,
            ),
            ALEModel::SyntheticTail {
                m,
                gamma,
                e,
                c,
                t_min,
            } => {
                if t_min > 0.0 {
                    // The boundary anchor makes the ball volume the exact
                    // antiderivative value (4π)^m t^m f'^m/(m!γ) at the outer
                    // radius; its t^0 coefficient cancels the c-shift, so
                    // ∫ξ^m/m! is exactly zero for every anchored tail.
                    let profile = self.profile()?;
                    let pm = PI.powi(m as i32);
                    let g = gamma as f64;
                    // s ≡ 0 exactly for the m = 2, c = 0 family and for the
                    // flat tail; no other tail is scalar-flat.
                    let scalar_flat = c == 0.0 && (m == 2 || e == 0.0);
                    let mass_term = 16.0 * pm * e / (factorial(m - 2) * g);
                    let rho_xi = if scalar_flat {
                        -mass_term
                    } else {
                        let pref = 4.0f64.powi(m as i32) * pm / (factorial(m - 1) * g);
                        pref * scalar_antiderivative(&profile, t_min)? - 2.0 * mass_term
                    };
                    ALEModelInvariants::new(m, gamma, e, c, 0.0, rho_xi, 0.0, scalar_flat)
                } else {
                    let profile = self.profile()?;
                    let schedule = [10.0, 20.0, 40.0];
                    estimate_invariants(&profile, (e, c), &schedule, quad)
                }
            }
            ALEModel::Custom { invariants } => Ok(invariants),
        }
    }
}

/// Estimate the invariant package of a profile with declared or fitted
/// `(e, c)` by the quadrature-and-extrapolation pipeline: `xi_m` from ball
/// volumes over the radius schedule, `rho_xi` from the total-scalar limit,
/// scalar-flatness probed on a grid. Estimates are projected onto the
/// identities the type enforces: `a` always follows `xi_m`, a scalar-flat
/// profile pins `rho_xi`, and a Ricci-flat one pins `xi_m` itself.
pub fn estimate_invariants(
    profile: &RadialProfile,
    asym: (f64, f64),
    r_schedule: &[f64],
    quad: &QuadratureSpec,
) -> Result<ALEModelInvariants> {
    let (e, c) = asym;
    let m = profile.m();
    let gamma = profile.gamma();

    let xi = profile.xi_integral_from_volume((e, c), r_schedule, quad)?;

    let mut totals = Vec::with_capacity(r_schedule.len());
    let mut noise = Vec::with_capacity(r_schedule.len());
    for &r in r_schedule {
        let t = profile.total_scalar_ball(r, quad)?;
        totals.push(t.value);
        noise.push(t.error_estimate + 16.0 * f64::EPSILON * t.value.abs());
    }
    let total_limit = extrapolate_inverse_r2(r_schedule, &totals, &noise)?;
    let mass_term = 16.0 * PI.powi(m as i32) * e / (factorial(m - 2) * gamma as f64);

    let scalar_flat = scalar_flat_on_grid(profile);
    let rho_xi = if scalar_flat {
        -mass_term
    } else {
        total_limit.value - mass_term
    };
    let xi_m = if scalar_flat && e == 0.0 {
        4.0 * PI.powi(m as i32) * c / (factorial(m - 2) * gamma as f64)
    } else {
        xi.value
    };
    let a = xi_m * factorial(m - 2) / (16.0 * PI.powi(m as i32));
    ALEModelInvariants::new(m, gamma, e, c, xi_m, rho_xi, a, scalar_flat)
}

/// Value of the total-scalar antiderivative `H(t) = t^m f'^{m−1}·(log V)'`:
/// the total scalar over `{t0 < t < T}` is `pref·(H(t0) − H(T))`, and `H(∞)`
/// carries exactly the mass flux `e·(m−1)·4^{2−m}`.
fn scalar_antiderivative(profile: &RadialProfile, t: f64) -> Result<f64> {
    let m = profile.m() as f64;
    let fp = profile.deriv(t, 1)?;
    let f2 = profile.deriv(t, 2)?;
    let f3 = profile.deriv(t, 3)?;
    let b = fp + t * f2;
    let bp = 2.0 * f2 + t * f3;
    let lp = (m - 1.0) * f2 / fp + bp / b;
    Ok(t.powi(profile.m() as i32) * fp.powi(profile.m() as i32 - 1) * lp)
}

/// Probe |s| on a 64-point log grid spanning four decades above `t_min`.
fn scalar_flat_on_grid(profile: &RadialProfile) -> bool {
    let lo = if profile.t_min() > 0.0 {
        profile.t_min() * (1.0 + 1e-6)
    } else {
        1e-2
    };
    let hi = lo * 1e4;
    let ratio = hi / lo;
    (0..64).all(|i| {
        let t = lo * ratio.powf(i as f64 / 63.0);
        match profile.scalar_curvature(t) {
            Ok(s) => s.abs() < SCALAR_FLAT_TOL,
            Err(_) => false,
        }
    })
}

struct FlatPotential;

impl Potential for FlatPotential {
    fn deriv(&self, t: f64, k: usize) -> f64 {
        match k {
            0 => 0.25 * t,
            1 => 0.25,
            _ => 0.0,
        }
    }
}

/// `f' = sqrt(t² + a⁴)/(4t)`, integrating to
/// `f = (s + a²·log(t/(a² + s)))/4` with `s = sqrt(t² + a⁴)`, the branch of the
/// antiderivative whose large-`t` expansion `t/4 − a⁴/(8t) + O(t^{-3})` carries
/// no constant term.
struct EguchiHansonPotential {
    a2: f64,
    a4: f64,
}

impl EguchiHansonPotential {
    fn new(a: f64) -> Self {
        EguchiHansonPotential {
            a2: a * a,
            a4: a.powi(4),
        }
    }
}

impl Potential for EguchiHansonPotential {
    fn deriv(&self, t: f64, k: usize) -> f64 {
        let a4 = self.a4;
        let s = (t * t + a4).sqrt();
        match k {
            0 => {
                // log(t/(a² + s)) = −log1p((a² + (s − t))/t) with s − t
                // rationalized as a⁴/(s + t); direct evaluation loses the
                // whole tail to cancellation once s rounds to t.
                let u = (self.a2 + a4 / (s + t)) / t;
                0.25 * (s - self.a2 * u.ln_1p())
            }
            1 => s / (4.0 * t),
            2 => -a4 / (4.0 * t * t * s),
            3 => a4 * (3.0 * t * t + 2.0 * a4) / (4.0 * t.powi(3) * s.powi(3)),
            4 => {
                -3.0 * a4 * (4.0 * t.powi(4) + 5.0 * a4 * t * t + 2.0 * a4 * a4)
                    / (4.0 * t.powi(4) * s.powi(5))
            }
            _ => unreachable!("derivative order {k}"),
        }
    }
}

struct BurnsPotential {
    a: f64,
}

impl Potential for BurnsPotential {
    fn deriv(&self, t: f64, k: usize) -> f64 {
        let a = self.a;
        match k {
            0 => 0.25 * t + a * t.ln(),
            1 => 0.25 + a / t,
            2 => -a / (t * t),
            3 => 2.0 * a / t.powi(3),
            4 => -6.0 * a / t.powi(4),
            _ => unreachable!("derivative order {k}"),
        }
    }
}

/// Pure expansion tail `t/4 + e·(1−t^{2−m})/(2−m) + c·t^{1−m}`, the middle term
/// read as `−e·log t` at `m = 2`. Derivatives of order ≥ 1 share one formula
/// across all `m`.
struct TailPotential {
    m: usize,
    e: f64,
    c: f64,
}

impl Potential for TailPotential {
    fn deriv(&self, t: f64, k: usize) -> f64 {
        let m = self.m as f64;
        let mi = self.m as i32;
        let (e, c) = (self.e, self.c);
        match k {
            0 => 0.25 * t + e * mass_basis(t, self.m) + c * t.powi(1 - mi),
            1 => 0.25 - e * t.powi(1 - mi) + c * (1.0 - m) * t.powi(-mi),
            2 => (m - 1.0) * (e * t.powi(-mi) + c * m * t.powi(-mi - 1)),
            3 => -m * (m - 1.0) * (e * t.powi(-mi - 1) + c * (m + 1.0) * t.powi(-mi - 2)),
            4 => {
                m * (m - 1.0) * (m + 1.0) * (e * t.powi(-mi - 2) + c * (m + 2.0) * t.powi(-mi - 3))
            }
            _ => unreachable!("derivative order {k}"),
        }
    }
}
