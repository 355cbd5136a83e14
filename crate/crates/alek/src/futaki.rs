//! Futaki invariant expansion for orbifold configurations with resolved points.
//!
//! A configuration lists singular points `p` of a compact Kähler orbifold, each
//! carrying the invariants of the ALE model glued in at scale `ε`, the moment
//! map values `μ(p)` of a basis of holomorphic vector fields, and `Δμ(p)`. The
//! Futaki invariant of the glued metric expands in the gluing parameter:
//!
//! ```text
//! Fut_ε(v) = F₀(v) + ε^{m−1}·C_lead·v + ε^m·C_next·v + o(ε^m)
//! ```
//!
//! with one coefficient vector per order,
//!
//! ```text
//! C_lead[k] =  Σ_p μ_p[k] · rho_xi_p
//! C_next[k] = −Σ_p (s̄·μ_p[k] + Δμ_p[k]) · xi_m_p
//! ```
//!
//! When every glued model is scalar-flat the leading coefficient collapses to a
//! mass-weighted moment sum; [`scalar_flat_reduction`] returns that sum `D₁`
//! together with the next-order sum `D₂`, related to the coefficients above by
//! the bridge factor `−16π^m/(m−2)!` (see [`adiabatic_bridge`]).

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::ALEModelInvariants;
use crate::radial::factorial;

/// One singular point of the orbifold: its local group order, the glued model's
/// invariants, and the moment-map data of the ambient vector fields.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SingularPointDatum {
    pub id: String,
    pub gamma: u32,
    pub mu: Vec<f64>,
    pub lap_mu: Vec<f64>,
    pub invariants: ALEModelInvariants,
}

impl SingularPointDatum {
    pub fn new(
        id: impl Into<String>,
        gamma: u32,
        mu: Vec<f64>,
        lap_mu: Vec<f64>,
        invariants: ALEModelInvariants,
    ) -> Result<Self> {
        let id = id.into();
        if id.is_empty() {
            return Err(Error::invalid("point id must be nonempty"));
        }
        if gamma < 1 {
            return Err(Error::invalid(format!("point {id}: gamma must be >= 1")));
        }
        if mu.len() != lap_mu.len() {
            return Err(Error::DimensionMismatch {
                context: format!(
                    "point {id}: mu has {} entries but lap_mu has {}",
                    mu.len(),
                    lap_mu.len()
                ),
            });
        }
        if mu.iter().chain(lap_mu.iter()).any(|x| !x.is_finite()) {
            return Err(Error::invalid(format!("point {id}: moment data must be finite")));
        }
        invariants.validate()?;
        if invariants.gamma != gamma {
            return Err(Error::invalid(format!(
                "point {id}: gamma = {gamma} but glued model has gamma = {}",
                invariants.gamma
            )));
        }
        Ok(SingularPointDatum {
            id,
            gamma,
            mu,
            lap_mu,
            invariants,
        })
    }
}

/// A full orbifold configuration: dimension, vector-field count `d`, mean
/// scalar curvature `s̄`, the base orbifold's Futaki vector, and the points.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrbifoldConfig {
    pub m: usize,
    pub d: usize,
    pub s_bar: f64,
    pub base_futaki: Vec<f64>,
    pub points: Vec<SingularPointDatum>,
}

impl OrbifoldConfig {
    pub fn new(
        m: usize,
        d: usize,
        s_bar: f64,
        base_futaki: Vec<f64>,
        points: Vec<SingularPointDatum>,
    ) -> Result<Self> {
        if m < 2 {
            return Err(Error::invalid(format!("dimension m = {m} < 2")));
        }
        if !s_bar.is_finite() {
            return Err(Error::invalid("s_bar must be finite"));
        }
        if base_futaki.len() != d {
            return Err(Error::DimensionMismatch {
                context: format!("base_futaki has {} entries, expected d = {d}", base_futaki.len()),
            });
        }
        if base_futaki.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("base_futaki entries must be finite"));
        }
        if points.is_empty() {
            return Err(Error::invalid("configuration needs at least one point"));
        }
        let mut seen = std::collections::HashSet::new();
        for p in &points {
            if !seen.insert(p.id.as_str()) {
                return Err(Error::invalid(format!("duplicate point id {:?}", p.id)));
            }
            if p.invariants.m != m {
                return Err(Error::DimensionMismatch {
                    context: format!(
                        "point {}: model dimension {} differs from configuration m = {m}",
                        p.id, p.invariants.m
                    ),
                });
            }
            if p.mu.len() != d {
                return Err(Error::DimensionMismatch {
                    context: format!("point {}: mu has {} entries, expected d = {d}", p.id, p.mu.len()),
                });
            }
        }
        Ok(OrbifoldConfig {
            m,
            d,
            s_bar,
            base_futaki,
            points,
        })
    }
}

/// Coefficients of the Futaki expansion in the gluing scale.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FutakiExpansion {
    pub m: usize,
    /// Order-zero term: the base orbifold's Futaki vector.
    #[serde(rename = "F0")]
    pub f0: Vec<f64>,
    /// Coefficient of `ε^{m−1}`.
    #[serde(rename = "C_lead")]
    pub c_lead: Vec<f64>,
    /// Coefficient of `ε^m`.
    #[serde(rename = "C_next")]
    pub c_next: Vec<f64>,
}

impl FutakiExpansion {
    /// `(F₀ + ε^{m−1}·C_lead + ε^m·C_next) · v`.
    pub fn evaluate(&self, epsilon: f64, v: &[f64]) -> Result<f64> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::invalid(format!("epsilon = {epsilon} must be > 0")));
        }
        if v.len() != self.f0.len() {
            return Err(Error::DimensionMismatch {
                context: format!("field vector has {} entries, expected {}", v.len(), self.f0.len()),
            });
        }
        let el = epsilon.powi(self.m as i32 - 1);
        let en = epsilon.powi(self.m as i32);
        Ok(self
            .f0
            .iter()
            .zip(&self.c_lead)
            .zip(&self.c_next)
            .zip(v)
            .map(|(((f, l), n), vi)| (f + el * l + en * n) * vi)
            .sum())
    }
}

/// Expansion coefficients of the glued configuration.
pub fn expansion(config: &OrbifoldConfig) -> FutakiExpansion {
    let d = config.d;
    let mut c_lead = vec![0.0; d];
    let mut c_next = vec![0.0; d];
    for p in &config.points {
        for k in 0..d {
            c_lead[k] += p.mu[k] * p.invariants.rho_xi;
            c_next[k] -= (config.s_bar * p.mu[k] + p.lap_mu[k]) * p.invariants.xi_m;
        }
    }
    FutakiExpansion {
        m: config.m,
        f0: config.base_futaki.clone(),
        c_lead,
        c_next,
    }
}

/// The two moment sums controlling existence when every glued model is
/// scalar-flat:
///
/// ```text
/// D₁[k] = Σ_p (e_p/γ_p)·μ_p[k]
/// D₂[k] = Σ_p a_p·(s̄·μ_p[k] + Δμ_p[k])
/// ```
///
/// Errors unless every point's model is scalar-flat.
pub fn scalar_flat_reduction(config: &OrbifoldConfig) -> Result<(Vec<f64>, Vec<f64>)> {
    for p in &config.points {
        if !p.invariants.scalar_flat {
            return Err(Error::invalid(format!(
                "point {}: scalar-flat reduction needs a scalar-flat model",
                p.id
            )));
        }
    }
    let d = config.d;
    let mut d1 = vec![0.0; d];
    let mut d2 = vec![0.0; d];
    for p in &config.points {
        let mass = p.invariants.e / p.gamma as f64;
        for k in 0..d {
            d1[k] += mass * p.mu[k];
            d2[k] += p.invariants.a * (config.s_bar * p.mu[k] + p.lap_mu[k]);
        }
    }
    Ok((d1, d2))
}

/// Factor relating the scalar-flat moment sums to the expansion coefficients:
/// `C_lead = adiabatic_bridge(m)·D₁` and `C_next = adiabatic_bridge(m)·D₂`.
pub fn adiabatic_bridge(m: usize) -> f64 {
    -16.0 * PI.powi(m as i32) / factorial(m - 2)
}
