//! Existence/non-existence classification for glued cscK metrics.
//!
//! Configurations are split by mass: `Q = {p : |e_p| > zero_tol}` carries the
//! points whose ALE models have nonzero ADM mass, `P` the rest. The classifier
//! walks an ordered decision tree over the two weighted moment sums
//!
//! ```text
//! D₁ = Σ_{q∈Q} (e_q/γ_q)·μ(q)        (mass obstruction)
//! D₂ = Σ_p a_p·w_p,  w_p = s̄·μ(p) + Δμ(p)   (next-order obstruction)
//! ```
//!
//! and the span conditions that let the scaling parameters absorb the
//! obstruction. All zero tests are relative to the summed term magnitudes, so
//! verdicts are invariant under uniform rescaling of the moment data; the Q/P
//! split stays absolute in `e_p`, with near-threshold masses flagged in the
//! witness.
//!
//! An equal-scale gluing can be obstructed while an adjusted-scale (mixed)
//! gluing still exists. The verdict keeps the two conclusions separate: the
//! tree's regime, the literal equal-scale flag, and an optional rescue record
//! when the mixed-scale conditions hold behind a primary non-existence.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::futaki::OrbifoldConfig;

/// Thresholds for the classifier's zero and span tests.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceSpec {
    /// Norm threshold for "sum vanishes" (relative to summed term norms) and
    /// the absolute Q/P mass split.
    pub zero_tol: f64,
    /// Relative singular-value threshold for numerical rank.
    pub rank_tol: f64,
}

impl Default for ToleranceSpec {
    fn default() -> Self {
        ToleranceSpec {
            zero_tol: 1e-9,
            rank_tol: 1e-9,
        }
    }
}

impl ToleranceSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.zero_tol.is_finite() && self.zero_tol > 0.0) {
            return Err(Error::invalid(format!("zero_tol = {} must be finite and > 0", self.zero_tol)));
        }
        if !(self.rank_tol.is_finite() && self.rank_tol > 0.0 && self.rank_tol < 1.0) {
            return Err(Error::invalid(format!(
                "rank_tol = {} must lie in (0, 1)",
                self.rank_tol
            )));
        }
        Ok(())
    }
}

/// Classification outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    NonExistenceEqualScale,
    ExistenceSomeNonzeroMass,
    ExistenceAllZeroMass,
    ExistenceMixedScales,
    Inconclusive,
}

impl Regime {
    pub fn is_existence(self) -> bool {
        matches!(
            self,
            Regime::ExistenceSomeNonzeroMass
                | Regime::ExistenceAllZeroMass
                | Regime::ExistenceMixedScales
        )
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Regime::NonExistenceEqualScale => "non-existence (equal scale)",
            Regime::ExistenceSomeNonzeroMass => "existence (some nonzero mass)",
            Regime::ExistenceAllZeroMass => "existence (all zero mass)",
            Regime::ExistenceMixedScales => "existence (mixed scales)",
            Regime::Inconclusive => "inconclusive",
        };
        f.write_str(s)
    }
}

/// The decisive sum and span data behind a verdict.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Witness {
    /// The sum the reached tree stage tested.
    pub sum_vector: Vec<f64>,
    pub sum_norm: f64,
    /// Numerical rank of the reached stage's span set.
    pub rank: usize,
    pub d: usize,
    #[serde(rename = "Q")]
    pub q: Vec<String>,
    #[serde(rename = "P")]
    pub p: Vec<String>,
    /// Points whose |e_p| lies within a decade of the zero_tol split.
    pub borderline: Vec<String>,
}

/// One point's scaling schedule: `λ(ε) = factor·ε^exponent`, the factor being
/// `(1+t_p)^power` at the solved balancing parameter.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScheduleEntry {
    pub id: String,
    pub exponent: f64,
    pub factor: f64,
}

/// Mixed-scale rescue recorded when the equal-scale family is obstructed but
/// the adjusted-scale conditions hold.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AdjustedScale {
    pub regime: Regime,
    pub witness: Witness,
    pub schedules: Option<Vec<ScheduleEntry>>,
}

/// Full classification result.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Verdict {
    pub regime: Regime,
    pub witness: Witness,
    /// Present for existence regimes when the balancing solve succeeds;
    /// entries follow configuration point order.
    pub schedules: Option<Vec<ScheduleEntry>>,
    pub tolerances: ToleranceSpec,
    /// Literal equal-scale obstruction test over all points, independent of
    /// the tree: mass sum nonzero, or (all masses zero and) next-order sum
    /// nonzero.
    pub equal_scale_obstructed: bool,
    /// Populated when the primary regime is non-existence but the mixed-scale
    /// existence conditions hold.
    pub adjusted_scale: Option<AdjustedScale>,
    pub m: usize,
}

/// Minimal-norm solution of the linearized balancing system.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BalancingSolution {
    /// Per-point scaling perturbations, each in (−1, 1).
    pub t: Vec<f64>,
    /// `‖J·t + δ‖`.
    pub residual: f64,
    pub jacobian_rank: usize,
}

/// Index partition of the points by mass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub q: Vec<usize>,
    pub p: Vec<usize>,
}

impl Partition {
    /// Split by `|e_p| > zero_tol`.
    pub fn from_config(config: &OrbifoldConfig, tol: &ToleranceSpec) -> Self {
        let mut q = Vec::new();
        let mut p = Vec::new();
        for (i, point) in config.points.iter().enumerate() {
            if point.invariants.e.abs() > tol.zero_tol {
                q.push(i);
            } else {
                p.push(i);
            }
        }
        Partition { q, p }
    }

    fn validate(&self, n: usize) -> Result<()> {
        let mut seen = vec![false; n];
        for &i in self.q.iter().chain(&self.p) {
            if i >= n {
                return Err(Error::invalid(format!("partition index {i} out of range (n = {n})")));
            }
            if seen[i] {
                return Err(Error::invalid(format!("partition index {i} appears twice")));
            }
            seen[i] = true;
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::invalid("partition must cover every point"));
        }
        Ok(())
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn add_scaled(acc: &mut [f64], v: &[f64], s: f64) {
    for (a, x) in acc.iter_mut().zip(v) {
        *a += s * x;
    }
}

/// `s̄·μ(p) + Δμ(p)`.
fn w_vector(config: &OrbifoldConfig, i: usize) -> Vec<f64> {
    let pt = &config.points[i];
    pt.mu
        .iter()
        .zip(&pt.lap_mu)
        .map(|(&m, &l)| config.s_bar * m + l)
        .collect()
}

/// Relative zero test: `‖sum‖ ≤ zero_tol·Σ‖terms‖`.
fn vanishes(sum: &[f64], term_norm_total: f64, zero_tol: f64) -> bool {
    norm(sum) <= zero_tol * term_norm_total
}

/// Number of singular values above `rank_tol` times the largest one.
///
/// `d ≤ 2` goes through an incremental Givens QR (the classifier is called in
/// tight enumeration loops); larger `d` uses an SVD. Both paths implement the
/// same definition. The QR route is preferred over Gram eigenvalues because
/// forming `A·Aᵀ` floors the small singular value at `sqrt(eps)·σ₁`, which a
/// sub-1e-8 `rank_tol` would then misread as full rank.
pub fn span_rank(vectors: &[Vec<f64>], d: usize, tol: &ToleranceSpec) -> Result<usize> {
    tol.validate()?;
    for v in vectors {
        if v.len() != d {
            return Err(Error::DimensionMismatch {
                context: format!("span vector has {} entries, expected d = {d}", v.len()),
            });
        }
    }
    if d == 0 || vectors.is_empty() {
        return Ok(0);
    }
    if d == 1 {
        let smax = vectors.iter().map(|v| v[0] * v[0]).sum::<f64>().sqrt();
        return Ok(usize::from(smax > 0.0));
    }
    if d == 2 {
        // Rotate each row into an upper-triangular 2×2 R. det(R) is then a
        // plain product, so σ₂ = |det|/σ₁ carries no cancellation.
        let (mut r11, mut r12, mut r22) = (0.0f64, 0.0f64, 0.0f64);
        for v in vectors {
            let (x, mut y) = (v[0], v[1]);
            let r = r11.hypot(x);
            if r > 0.0 {
                let (c, s) = (r11 / r, x / r);
                let b = c * r12 + s * y;
                y = c * y - s * r12;
                r11 = r;
                r12 = b;
            }
            r22 = r22.hypot(y);
        }
        let fro2 = r11 * r11 + r12 * r12 + r22 * r22;
        if fro2 == 0.0 {
            return Ok(0);
        }
        let det = r11 * r22;
        let disc = (fro2 * fro2 - 4.0 * det * det).max(0.0).sqrt();
        let smax = (0.5 * (fro2 + disc)).sqrt();
        let smin = det.abs() / smax;
        let cut = tol.rank_tol * smax;
        return Ok(usize::from(smax > cut) + usize::from(smin > cut));
    }
    let mut a = DMatrix::zeros(d, vectors.len());
    for (j, v) in vectors.iter().enumerate() {
        for (i, &x) in v.iter().enumerate() {
            a[(i, j)] = x;
        }
    }
    let sv = a.singular_values();
    let smax = sv.max();
    if smax == 0.0 {
        return Ok(0);
    }
    Ok(sv.iter().filter(|&&s| s > tol.rank_tol * smax).count())
}

/// The `d × |S|` Jacobian of the linearized balancing system: column `j` is
/// `(e_j/γ_j)·μ(j)` for `j ∈ Q` and `a_j·w_j` for `j ∈ P`.
pub fn balancing_jacobian(config: &OrbifoldConfig, partition: &Partition) -> Result<DMatrix<f64>> {
    partition.validate(config.points.len())?;
    let d = config.d;
    let n = config.points.len();
    let mut j = DMatrix::zeros(d, n);
    for &qi in &partition.q {
        let pt = &config.points[qi];
        let s = pt.invariants.e / pt.gamma as f64;
        for r in 0..d {
            j[(r, qi)] = s * pt.mu[r];
        }
    }
    for &pi in &partition.p {
        let w = w_vector(config, pi);
        let a = config.points[pi].invariants.a;
        for r in 0..d {
            j[(r, pi)] = a * w[r];
        }
    }
    Ok(j)
}

/// Minimal-norm `t` with `J·t = −δ` via pseudoinverse. Rejects Jacobians
/// without full row rank and solutions leaving the unit box `(−1, 1)^{|S|}`.
pub fn solve_balancing(j: &DMatrix<f64>, delta: &[f64], tol: &ToleranceSpec) -> Result<BalancingSolution> {
    tol.validate()?;
    let d = j.nrows();
    let n = j.ncols();
    if delta.len() != d {
        return Err(Error::DimensionMismatch {
            context: format!("delta has {} entries, expected {d}", delta.len()),
        });
    }
    if d == 0 {
        return Ok(BalancingSolution {
            t: vec![0.0; n],
            residual: 0.0,
            jacobian_rank: 0,
        });
    }
    let svd = j.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let cut = tol.rank_tol * smax;
    let rank = svd.singular_values.iter().filter(|&&s| s > cut).count();
    if rank < d {
        return Err(Error::BalancingRankDeficient { rank, d });
    }

    let u = svd.u.as_ref().expect("svd computed with u");
    let vt = svd.v_t.as_ref().expect("svd computed with v_t");
    // t = −V·Σ⁻¹·Uᵀ·δ over the retained singular values.
    let deltav = nalgebra::DVector::from_column_slice(delta);
    let mut t = nalgebra::DVector::zeros(n);
    for k in 0..svd.singular_values.len() {
        let s = svd.singular_values[k];
        if s <= cut {
            continue;
        }
        let coeff = -u.column(k).dot(&deltav) / s;
        t.axpy(coeff, &vt.row(k).transpose(), 1.0);
    }

    let t_inf = t.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    if t_inf >= 1.0 {
        return Err(Error::BalancingOutOfChart { t_inf });
    }
    let residual = (j * &t + deltav).norm();
    Ok(BalancingSolution {
        t: t.iter().copied().collect(),
        residual,
        jacobian_rank: rank,
    })
}

/// Per-point `(exponent, power)` of `λ = (1+t)^power · ε^exponent`.
fn schedule_params(regime: Regime, in_q: bool, m: usize) -> (f64, f64) {
    let mf = m as f64;
    match regime {
        Regime::ExistenceSomeNonzeroMass => {
            if in_q {
                (1.0, 1.0 / (mf - 1.0))
            } else {
                (1.0, 0.0)
            }
        }
        Regime::ExistenceAllZeroMass => (1.0, 1.0 / mf),
        Regime::ExistenceMixedScales => {
            if in_q {
                (1.0, 1.0 / (mf - 1.0))
            } else {
                ((mf - 1.0) / mf, 1.0 / mf)
            }
        }
        _ => unreachable!("schedules only exist for existence regimes"),
    }
}

fn build_schedules(
    config: &OrbifoldConfig,
    regime: Regime,
    in_q: &[bool],
    sol: &BalancingSolution,
) -> Vec<ScheduleEntry> {
    config
        .points
        .iter()
        .enumerate()
        .map(|(i, pt)| {
            let (exponent, power) = schedule_params(regime, in_q[i], config.m);
            ScheduleEntry {
                id: pt.id.clone(),
                exponent,
                factor: (1.0 + sol.t[i]).powf(power),
            }
        })
        .collect()
}

/// λ values at a given ε for an existence verdict, using a (possibly fresh)
/// balancing solution indexed in configuration point order.
pub fn lambda_schedule(
    verdict: &Verdict,
    sol: &BalancingSolution,
    epsilon: f64,
) -> Result<Vec<(String, f64)>> {
    if !verdict.regime.is_existence() {
        return Err(Error::WrongRegime {
            regime: verdict.regime.to_string(),
            operation: "lambda_schedule",
        });
    }
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::invalid(format!("epsilon = {epsilon} must be > 0")));
    }
    let schedules = verdict
        .schedules
        .as_ref()
        .ok_or_else(|| Error::invalid("verdict carries no schedules (balancing solve failed)"))?;
    if sol.t.len() != schedules.len() {
        return Err(Error::DimensionMismatch {
            context: format!(
                "balancing solution has {} entries for {} points",
                sol.t.len(),
                schedules.len()
            ),
        });
    }
    let in_q: Vec<bool> = schedules
        .iter()
        .map(|s| verdict.witness.q.contains(&s.id))
        .collect();
    let mut out = Vec::with_capacity(schedules.len());
    for (i, entry) in schedules.iter().enumerate() {
        if sol.t[i].abs() >= 1.0 {
            return Err(Error::BalancingOutOfChart { t_inf: sol.t[i].abs() });
        }
        let (exponent, power) = schedule_params(verdict.regime, in_q[i], verdict.m);
        out.push((
            entry.id.clone(),
            (1.0 + sol.t[i]).powf(power) * epsilon.powf(exponent),
        ));
    }
    Ok(out)
}

/// Accumulated stage data the tree decides on.
struct Sums {
    /// `Σ_{q∈Q} (e_q/γ_q)·μ(q)` and the summed term norms.
    d1_q: Vec<f64>,
    d1_q_scale: f64,
    /// `Σ_{p∈P} a_p·w_p` and the summed term norms.
    d2_p: Vec<f64>,
    d2_p_scale: f64,
    /// Same sums taken over all points (the literal obstruction test).
    d1_all: Vec<f64>,
    d1_all_scale: f64,
    d2_all: Vec<f64>,
    d2_all_scale: f64,
}

fn accumulate(config: &OrbifoldConfig, in_q: &[bool]) -> Sums {
    let d = config.d;
    let mut s = Sums {
        d1_q: vec![0.0; d],
        d1_q_scale: 0.0,
        d2_p: vec![0.0; d],
        d2_p_scale: 0.0,
        d1_all: vec![0.0; d],
        d1_all_scale: 0.0,
        d2_all: vec![0.0; d],
        d2_all_scale: 0.0,
    };
    for (i, pt) in config.points.iter().enumerate() {
        let mass = pt.invariants.e / pt.gamma as f64;
        let mass_norm = mass.abs() * norm(&pt.mu);
        add_scaled(&mut s.d1_all, &pt.mu, mass);
        s.d1_all_scale += mass_norm;

        let w = w_vector(config, i);
        let a = pt.invariants.a;
        add_scaled(&mut s.d2_all, &w, a);
        s.d2_all_scale += a.abs() * norm(&w);

        if in_q[i] {
            add_scaled(&mut s.d1_q, &pt.mu, mass);
            s.d1_q_scale += mass_norm;
        } else {
            add_scaled(&mut s.d2_p, &w, a);
            s.d2_p_scale += a.abs() * norm(&w);
        }
    }
    s
}

/// Classify a configuration into the non-existence/existence regimes.
///
/// Preconditions: vanishing base Futaki vector, every model scalar-flat, every
/// point with `γ ≥ 2`. The decision tree, first match wins:
///
/// 1. `Q ≠ ∅` and the mass sum `D₁` does not vanish → non-existence.
/// 2. `Q = ∅` and the next-order sum `D₂` does not vanish → non-existence.
/// 3. `Q ≠ ∅`, `D₁` vanishes, `rank{μ(q)} = d` → existence, some nonzero mass.
/// 4. `Q = ∅`, `D₂` vanishes, `rank{w_p} = d` → existence, all zero mass.
/// 5. `Q, P ≠ ∅`, the combined sum vanishes, `rank({μ(q)}∪{w_p}) = d` →
///    existence at mixed scales.
/// 6. otherwise inconclusive.
///
/// `d = 0` makes every sum and span condition vacuous, landing in 3 or 4 by
/// the partition.
pub fn classify(config: &OrbifoldConfig, tol: &ToleranceSpec) -> Result<Verdict> {
    tol.validate()?;
    if config
        .base_futaki
        .iter()
        .any(|&x| x.abs() > tol.zero_tol)
    {
        return Err(Error::invalid(
            "classification requires a vanishing base Futaki vector",
        ));
    }
    for pt in &config.points {
        if !pt.invariants.scalar_flat {
            return Err(Error::invalid(format!(
                "point {}: classification requires scalar-flat models",
                pt.id
            )));
        }
        if pt.gamma < 2 {
            return Err(Error::invalid(format!(
                "point {}: orbifold points need gamma >= 2 (gamma = {})",
                pt.id, pt.gamma
            )));
        }
    }

    let d = config.d;
    let zt = tol.zero_tol;
    let in_q: Vec<bool> = config
        .points
        .iter()
        .map(|p| p.invariants.e.abs() > zt)
        .collect();
    let partition = Partition {
        q: (0..in_q.len()).filter(|&i| in_q[i]).collect(),
        p: (0..in_q.len()).filter(|&i| !in_q[i]).collect(),
    };
    let q_ids: Vec<String> = partition.q.iter().map(|&i| config.points[i].id.clone()).collect();
    let p_ids: Vec<String> = partition.p.iter().map(|&i| config.points[i].id.clone()).collect();
    let borderline: Vec<String> = config
        .points
        .iter()
        .filter(|p| {
            let r = p.invariants.e.abs() / zt;
            r > 0.1 && r <= 10.0
        })
        .map(|p| p.id.clone())
        .collect();

    let sums = accumulate(config, &in_q);
    let combined: Vec<f64> = sums.d1_q.iter().zip(&sums.d2_p).map(|(a, b)| a + b).collect();
    let combined_scale = sums.d1_q_scale + sums.d2_p_scale;

    let mu_q: Vec<Vec<f64>> = partition.q.iter().map(|&i| config.points[i].mu.clone()).collect();
    let w_all: Vec<Vec<f64>> = (0..config.points.len()).map(|i| w_vector(config, i)).collect();
    let w_p: Vec<Vec<f64>> = partition.p.iter().map(|&i| w_all[i].clone()).collect();
    let union: Vec<Vec<f64>> = mu_q.iter().chain(w_p.iter()).cloned().collect();

    let equal_scale_obstructed = !vanishes(&sums.d1_all, sums.d1_all_scale, zt)
        || (partition.q.is_empty() && !vanishes(&sums.d2_all, sums.d2_all_scale, zt));

    let make_witness = |sum: &[f64], rank: usize| Witness {
        sum_vector: sum.to_vec(),
        sum_norm: norm(sum),
        rank,
        d,
        q: q_ids.clone(),
        p: p_ids.clone(),
        borderline: borderline.clone(),
    };

    // Mixed-scale conditions, shared by stage 5 and the rescue check.
    let mixed_holds = |rank_union: usize| {
        !partition.q.is_empty()
            && !partition.p.is_empty()
            && vanishes(&combined, combined_scale, zt)
            && rank_union == d
    };
    let mixed_solve = |regime: Regime| -> Option<Vec<ScheduleEntry>> {
        let j = balancing_jacobian(config, &partition).ok()?;
        let sol = solve_balancing(&j, &combined, tol).ok()?;
        Some(build_schedules(config, regime, &in_q, &sol))
    };

    let finish = |regime, witness, schedules, adjusted| Verdict {
        regime,
        witness,
        schedules,
        tolerances: *tol,
        equal_scale_obstructed,
        adjusted_scale: adjusted,
        m: config.m,
    };

    if !partition.q.is_empty() {
        let rank_mu_q = span_rank(&mu_q, d, tol)?;
        if !vanishes(&sums.d1_q, sums.d1_q_scale, zt) {
            // Stage 1: obstructed at equal scale; check the mixed-scale rescue.
            let adjusted = {
                let rank_union = span_rank(&union, d, tol)?;
                if mixed_holds(rank_union) {
                    Some(AdjustedScale {
                        regime: Regime::ExistenceMixedScales,
                        witness: make_witness(&combined, rank_union),
                        schedules: mixed_solve(Regime::ExistenceMixedScales),
                    })
                } else {
                    None
                }
            };
            return Ok(finish(
                Regime::NonExistenceEqualScale,
                make_witness(&sums.d1_q, rank_mu_q),
                None,
                adjusted,
            ));
        }
        if rank_mu_q == d {
            // Stage 3: Q-columns-only solve; P entries stay untouched at t = 0.
            let mut j = balancing_jacobian(config, &partition)?;
            for &pi in &partition.p {
                j.column_mut(pi).fill(0.0);
            }
            let schedules = solve_balancing(&j, &sums.d1_q, tol)
                .ok()
                .map(|sol| build_schedules(config, Regime::ExistenceSomeNonzeroMass, &in_q, &sol));
            return Ok(finish(
                Regime::ExistenceSomeNonzeroMass,
                make_witness(&sums.d1_q, rank_mu_q),
                schedules,
                None,
            ));
        }
        let rank_union = span_rank(&union, d, tol)?;
        if mixed_holds(rank_union) {
            let schedules = mixed_solve(Regime::ExistenceMixedScales);
            return Ok(finish(
                Regime::ExistenceMixedScales,
                make_witness(&combined, rank_union),
                schedules,
                None,
            ));
        }
        return Ok(finish(
            Regime::Inconclusive,
            make_witness(&combined, rank_union),
            None,
            None,
        ));
    }

    // Q empty: next-order obstruction governs.
    let rank_w = span_rank(&w_all, d, tol)?;
    if !vanishes(&sums.d2_all, sums.d2_all_scale, zt) {
        return Ok(finish(
            Regime::NonExistenceEqualScale,
            make_witness(&sums.d2_all, rank_w),
            None,
            None,
        ));
    }
    if rank_w == d {
        let j = balancing_jacobian(config, &partition)?;
        let schedules = solve_balancing(&j, &sums.d2_all, tol)
            .ok()
            .map(|sol| build_schedules(config, Regime::ExistenceAllZeroMass, &in_q, &sol));
        return Ok(finish(
            Regime::ExistenceAllZeroMass,
            make_witness(&sums.d2_all, rank_w),
            schedules,
            None,
        ));
    }
    Ok(finish(
        Regime::Inconclusive,
        make_witness(&sums.d2_all, rank_w),
        None,
        None,
    ))
}
