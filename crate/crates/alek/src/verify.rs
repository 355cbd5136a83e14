//! Residual tables: measured ball integrals against their closed-form
//! large-radius predictions over a radius schedule.
//!
//! The volume prediction drops an `O(R^{-1})` remainder and the total-scalar
//! prediction an `O(R^{-2})` one, so the order check weights the residual by
//! `R` (volume) or `R²` (scalar) and requires the weighted residual to be
//! non-increasing within a factor 2 along the schedule. Rows whose residual
//! sits at the quadrature noise floor pass unconditionally; there is nothing
//! left to measure there.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::models::ALEModelInvariants;
use crate::quad::QuadratureSpec;
use crate::radial::{predicted_ball_volume, predicted_total_scalar, RadialProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    Volume,
    Scalar,
}

impl CheckKind {
    /// Exponent of the dropped remainder: residuals are weighted by `R^p`.
    pub fn weight_power(self) -> i32 {
        match self {
            CheckKind::Volume => 1,
            CheckKind::Scalar => 2,
        }
    }

    pub fn weighted_column(self) -> &'static str {
        match self {
            CheckKind::Volume => "residual_R",
            CheckKind::Scalar => "residual_R2",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyRow {
    pub r: f64,
    pub measured: f64,
    pub predicted: f64,
    /// `|measured − predicted|`.
    pub residual: f64,
    /// `residual·R^p` with `p` from the check kind.
    pub weighted: f64,
    /// Measurement uncertainty: the largest of the quadrature error estimate,
    /// the tolerance the quadrature was asked to meet, rounding on the two
    /// compared values, and any caller-supplied term for error sources the
    /// quadrature cannot see (sampled-profile interpolation error).
    pub noise_floor: f64,
    pub pass: bool,
}

/// One row of the check at radius `r`, judged against the preceding row.
///
/// A row passes when its weighted residual is within a factor 2 of the
/// previous row's (that row floored at its noise level), or when the residual
/// itself is noise. A row with no predecessor always passes.
pub fn verify_row(
    profile: &RadialProfile,
    inv: &ALEModelInvariants,
    r: f64,
    kind: CheckKind,
    quad: &QuadratureSpec,
    prev: Option<&VerifyRow>,
) -> Result<VerifyRow> {
    verify_row_with_noise(profile, inv, r, kind, quad, 0.0, prev)
}

/// [`verify_row`] with an extra term in the noise floor, for measurements
/// whose dominant uncertainty the quadrature cannot report. A profile rebuilt
/// from samples carries interpolation error orders above the quadrature
/// tolerance; the caller estimates it (grid halving) and passes it here.
pub fn verify_row_with_noise(
    profile: &RadialProfile,
    inv: &ALEModelInvariants,
    r: f64,
    kind: CheckKind,
    quad: &QuadratureSpec,
    extra_noise: f64,
    prev: Option<&VerifyRow>,
) -> Result<VerifyRow> {
    let p = kind.weight_power();
    let (measured, err) = match kind {
        CheckKind::Volume => {
            let i = profile.ball_volume(r, quad)?;
            (i.value, i.error_estimate)
        }
        CheckKind::Scalar => {
            let i = profile.total_scalar_ball(r, quad)?;
            (i.value, i.error_estimate)
        }
    };
    let predicted = match kind {
        CheckKind::Volume => predicted_ball_volume(inv, r),
        CheckKind::Scalar => predicted_total_scalar(inv),
    };
    let residual = (measured - predicted).abs();
    let weighted = residual * r.powi(p);
    // The adaptive driver stops refining once its estimate beats the requested
    // tolerance, so the realized truncation can sit anywhere below that budget
    // while the reported estimate sits further still.
    let requested = quad.abs_tol.max(quad.rel_tol * measured.abs());
    let noise_floor = err
        .max(requested)
        .max(extra_noise)
        .max(16.0 * f64::EPSILON * (measured.abs() + predicted.abs()));
    let pass = match prev {
        None => true,
        Some(prev) => {
            residual <= noise_floor
                || weighted <= 2.0 * prev.residual.max(prev.noise_floor) * prev.r.powi(p)
        }
    };
    Ok(VerifyRow {
        r,
        measured,
        predicted,
        residual,
        weighted,
        noise_floor,
        pass,
    })
}

/// Run one check over an increasing radius schedule.
pub fn verify_profile(
    profile: &RadialProfile,
    inv: &ALEModelInvariants,
    radii: &[f64],
    kind: CheckKind,
    quad: &QuadratureSpec,
) -> Result<Vec<VerifyRow>> {
    let mut rows: Vec<VerifyRow> = Vec::with_capacity(radii.len());
    for &r in radii {
        let row = verify_row(profile, inv, r, kind, quad, rows.last())?;
        rows.push(row);
    }
    Ok(rows)
}

/// Emit the table as CSV: `R, measured, predicted, residual, residual·R^p, pass`.
pub fn write_csv<W: Write>(rows: &[VerifyRow], kind: CheckKind, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["R", "measured", "predicted", "residual", kind.weighted_column(), "pass"])?;
    for row in rows {
        w.write_record([
            format!("{:e}", row.r),
            format!("{:e}", row.measured),
            format!("{:e}", row.predicted),
            format!("{:e}", row.residual),
            format!("{:e}", row.weighted),
            if row.pass { "pass" } else { "fail" }.to_string(),
        ])?;
    }
    w.flush().map_err(crate::error::Error::Io)?;
    Ok(())
}
