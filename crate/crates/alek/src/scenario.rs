//! Scenario files: the JSON input format for configurations, and the report
//! emitted after analysis.
//!
//! A scenario names the orbifold data (`dimension`, `d`, `s_bar`, points) with
//! each point's glued model given either as a catalog kind with parameters or
//! as inline invariants. Validation errors carry the JSON field path of the
//! offending entry.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::futaki::{expansion, scalar_flat_reduction, FutakiExpansion, OrbifoldConfig, SingularPointDatum};
use crate::models::{ALEModel, ALEModelInvariants};
use crate::quad::QuadratureSpec;
use crate::stability::{classify, ToleranceSpec, Verdict};

/// Root document of a scenario file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    /// Complex dimension `m`.
    pub dimension: usize,
    /// Dimension of the reduced automorphism algebra.
    pub d: usize,
    pub s_bar: f64,
    /// Futaki vector of the base; omitted means zero (cscK base).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_futaki: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<ToleranceSpec>,
    pub points: Vec<ScenarioPoint>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioPoint {
    pub id: String,
    pub gamma: u32,
    pub model: ModelSpec,
    pub mu: Vec<f64>,
    pub laplacian_mu: Vec<f64>,
}

/// Glued-model description: catalog kind plus parameters, or inline
/// invariants. Dimension and group order come from the scenario and the point.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ModelSpec {
    Flat,
    EguchiHanson { a: f64 },
    Burns { a: f64 },
    SyntheticTail { e: f64, c: f64, t_min: f64 },
    Custom {
        e: f64,
        c: f64,
        xi_m: f64,
        rho_xi: f64,
        a: f64,
        scalar_flat: bool,
    },
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Resolve model specs and assemble the configuration, reporting the field
    /// path of anything invalid. Orbifold points need `gamma >= 2`; the Burns
    /// model has `gamma = 1` and is therefore never eligible here.
    pub fn resolve(&self, quad: &QuadratureSpec) -> Result<OrbifoldConfig> {
        if self.dimension < 2 {
            return Err(Error::scenario(
                "dimension",
                format!("must be >= 2, found {}", self.dimension),
            ));
        }
        if !self.s_bar.is_finite() {
            return Err(Error::scenario("s_bar", "must be finite"));
        }
        if let Some(tol) = &self.tolerances {
            tol.validate()
                .map_err(|e| Error::scenario("tolerances", e.to_string()))?;
        }
        let base_futaki = match &self.base_futaki {
            Some(v) => {
                if v.len() != self.d {
                    return Err(Error::scenario(
                        "base_futaki",
                        format!("has {} entries, expected d = {}", v.len(), self.d),
                    ));
                }
                v.clone()
            }
            None => vec![0.0; self.d],
        };
        if self.points.is_empty() {
            return Err(Error::scenario("points", "must be nonempty"));
        }

        let mut points = Vec::with_capacity(self.points.len());
        for (i, pt) in self.points.iter().enumerate() {
            let path = |field: &str| format!("points[{i}].{field}");
            if pt.id.is_empty() {
                return Err(Error::scenario(path("id"), "must be nonempty"));
            }
            if pt.gamma < 2 {
                return Err(Error::scenario(
                    path("gamma"),
                    format!("orbifold points need gamma >= 2, found {}", pt.gamma),
                ));
            }
            if pt.mu.len() != self.d {
                return Err(Error::scenario(
                    path("mu"),
                    format!("has {} entries, expected d = {}", pt.mu.len(), self.d),
                ));
            }
            if pt.laplacian_mu.len() != self.d {
                return Err(Error::scenario(
                    path("laplacian_mu"),
                    format!("has {} entries, expected d = {}", pt.laplacian_mu.len(), self.d),
                ));
            }
            let invariants = self
                .resolve_model(pt, quad)
                .map_err(|e| Error::scenario(path("model"), e.to_string()))?;
            points.push(
                SingularPointDatum::new(
                    pt.id.clone(),
                    pt.gamma,
                    pt.mu.clone(),
                    pt.laplacian_mu.clone(),
                    invariants,
                )
                .map_err(|e| Error::scenario(format!("points[{i}]"), e.to_string()))?,
            );
        }
        for (i, pt) in self.points.iter().enumerate() {
            if self.points[..i].iter().any(|q| q.id == pt.id) {
                return Err(Error::scenario(
                    format!("points[{i}].id"),
                    format!("duplicate id {:?}", pt.id),
                ));
            }
        }
        OrbifoldConfig::new(self.dimension, self.d, self.s_bar, base_futaki, points)
    }

    fn resolve_model(&self, pt: &ScenarioPoint, quad: &QuadratureSpec) -> Result<ALEModelInvariants> {
        let m = self.dimension;
        let model = match pt.model {
            ModelSpec::Flat => ALEModel::flat(m, pt.gamma)?,
            ModelSpec::EguchiHanson { a } => {
                if m != 2 || pt.gamma != 2 {
                    return Err(Error::invalid(format!(
                        "eguchi-hanson needs dimension 2 and gamma 2, found dimension {m}, gamma {}",
                        pt.gamma
                    )));
                }
                ALEModel::eguchi_hanson(a)?
            }
            ModelSpec::Burns { .. } => {
                return Err(Error::invalid(
                    "burns has gamma = 1 and cannot model an orbifold point",
                ));
            }
            ModelSpec::SyntheticTail { e, c, t_min } => {
                ALEModel::synthetic_tail(m, pt.gamma, e, c, t_min)?
            }
            ModelSpec::Custom {
                e,
                c,
                xi_m,
                rho_xi,
                a,
                scalar_flat,
            } => {
                return ALEModelInvariants::new(m, pt.gamma, e, c, xi_m, rho_xi, a, scalar_flat);
            }
        };
        model.invariants(quad)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    /// Suppressed (None) for byte-reproducible reports.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timestamp_unix: Option<u64>,
}

impl Metadata {
    pub fn new(timestamp_unix: Option<u64>) -> Self {
        Metadata {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp_unix,
        }
    }
}

/// λ values for every point at one ε.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScheduleRow {
    pub epsilon: f64,
    /// `(id, λ)` pairs in configuration point order.
    pub lambdas: Vec<(String, f64)>,
}

/// Full analysis of one scenario.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    /// Input echo, with the tolerances actually used.
    pub scenario: Scenario,
    pub expansion: FutakiExpansion,
    #[serde(rename = "D1")]
    pub d1: Vec<f64>,
    #[serde(rename = "D2")]
    pub d2: Vec<f64>,
    pub verdict: Verdict,
    /// Present when the verdict carries schedules.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule_table: Option<Vec<ScheduleRow>>,
    pub metadata: Metadata,
}

/// Run the full pipeline on a resolved scenario. `tol` overrides the
/// scenario's own tolerances; the echo records whichever applied.
pub fn build_report(
    scenario: &Scenario,
    config: &OrbifoldConfig,
    tol: &ToleranceSpec,
    epsilons: &[f64],
    timestamp_unix: Option<u64>,
) -> Result<Report> {
    for &eps in epsilons {
        if !(eps.is_finite() && eps > 0.0) {
            return Err(Error::invalid(format!("epsilon = {eps} must be > 0")));
        }
    }
    let exp = expansion(config);
    let (d1, d2) = scalar_flat_reduction(config)?;
    let verdict = classify(config, tol)?;
    let schedule_table = verdict.schedules.as_ref().map(|entries| {
        epsilons
            .iter()
            .map(|&eps| ScheduleRow {
                epsilon: eps,
                lambdas: entries
                    .iter()
                    .map(|s| (s.id.clone(), s.factor * eps.powf(s.exponent)))
                    .collect(),
            })
            .collect()
    });
    let mut echo = scenario.clone();
    echo.tolerances = Some(*tol);
    Ok(Report {
        scenario: echo,
        expansion: exp,
        d1,
        d2,
        verdict,
        schedule_table,
        metadata: Metadata::new(timestamp_unix),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stability::Regime;

    fn quad() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    const ANTISYM: &str = r#"{
        "dimension": 2,
        "d": 1,
        "s_bar": 0.0,
        "points": [
            {"id": "p1", "gamma": 2, "model": {"kind": "eguchi-hanson", "a": 1.0},
             "mu": [0.4], "laplacian_mu": [1.0]},
            {"id": "p2", "gamma": 2, "model": {"kind": "eguchi-hanson", "a": 1.0},
             "mu": [-0.4], "laplacian_mu": [-1.0]}
        ]
    }"#;

    #[test]
    fn antisymmetric_scenario_classifies_existence() {
        let scenario = Scenario::from_json(ANTISYM).unwrap();
        let config = scenario.resolve(&quad()).unwrap();
        let tol = ToleranceSpec::default();
        let report = build_report(&scenario, &config, &tol, &[0.1, 0.01], None).unwrap();
        assert_eq!(report.verdict.regime, Regime::ExistenceAllZeroMass);
        assert_eq!(report.d1, vec![0.0]);
        let table = report.schedule_table.unwrap();
        assert_eq!(table.len(), 2);
        assert!((table[0].lambdas[0].1 - 0.1).abs() < 1e-12);
        // expansion vanishes identically by antisymmetry
        assert!(report.expansion.c_lead[0].abs() < 1e-12);
        assert!(report.expansion.c_next[0].abs() < 1e-12);
    }

    #[test]
    fn field_paths_in_errors() {
        let mut s = Scenario::from_json(ANTISYM).unwrap();
        s.points[1].gamma = 1;
        let err = s.resolve(&quad()).unwrap_err().to_string();
        assert!(err.contains("points[1].gamma"), "{err}");

        let mut s = Scenario::from_json(ANTISYM).unwrap();
        s.points[0].mu = vec![1.0, 2.0];
        let err = s.resolve(&quad()).unwrap_err().to_string();
        assert!(err.contains("points[0].mu"), "{err}");

        let mut s = Scenario::from_json(ANTISYM).unwrap();
        s.points[1].id = "p1".into();
        let err = s.resolve(&quad()).unwrap_err().to_string();
        assert!(err.contains("id"), "{err}");

        let mut s = Scenario::from_json(ANTISYM).unwrap();
        s.base_futaki = Some(vec![0.0, 1.0]);
        let err = s.resolve(&quad()).unwrap_err().to_string();
        assert!(err.contains("base_futaki"), "{err}");
    }

    #[test]
    fn burns_points_rejected() {
        let mut s = Scenario::from_json(ANTISYM).unwrap();
        s.points[0].model = ModelSpec::Burns { a: 1.0 };
        let err = s.resolve(&quad()).unwrap_err().to_string();
        assert!(err.contains("points[0].model"), "{err}");
    }

    #[test]
    fn unknown_fields_rejected() {
        let with_extra = ANTISYM.replace(r#""s_bar": 0.0,"#, r#""s_bar": 0.0, "bogus": 1,"#);
        assert!(Scenario::from_json(&with_extra).is_err());
    }

    #[test]
    fn custom_invariants_resolve() {
        let text = r#"{
            "dimension": 2,
            "d": 0,
            "s_bar": 1.0,
            "points": [
                {"id": "x", "gamma": 3,
                 "model": {"kind": "custom", "e": 0.0, "c": 0.0, "xi_m": 0.0,
                           "rho_xi": 0.0, "a": 0.0, "scalar_flat": true},
                 "mu": [], "laplacian_mu": []}
            ]
        }"#;
        let s = Scenario::from_json(text).unwrap();
        let config = s.resolve(&quad()).unwrap();
        assert_eq!(config.points[0].invariants.gamma, 3);
        let v = classify(&config, &ToleranceSpec::default()).unwrap();
        assert_eq!(v.regime, Regime::ExistenceAllZeroMass);
    }

    #[test]
    fn report_roundtrips_to_same_verdict() {
        let scenario = Scenario::from_json(ANTISYM).unwrap();
        let config = scenario.resolve(&quad()).unwrap();
        let tol = ToleranceSpec {
            zero_tol: 1e-8,
            rank_tol: 1e-8,
        };
        let report = build_report(&scenario, &config, &tol, &[0.1], None).unwrap();
        let echoed: Scenario = serde_json::from_str(&report.scenario.to_json().unwrap()).unwrap();
        let config2 = echoed.resolve(&quad()).unwrap();
        let tol2 = echoed.tolerances.unwrap();
        let report2 = build_report(&echoed, &config2, &tol2, &[0.1], None).unwrap();
        assert_eq!(report.verdict.regime, report2.verdict.regime);
        assert_eq!(
            serde_json::to_string(&report).unwrap(),
            serde_json::to_string(&report2).unwrap()
        );
    }
}
