//! Numerical toolkit for radial ALE Kähler metrics and adiabatic cscK existence
//! verdicts on orbifold resolutions.
//!
//! The library works with U(m)-invariant Kähler potentials `f(t)`, `t = |z|²`, on
//! resolutions of `C^m/Γ`. From the potential it evaluates metric quantities by
//! one-dimensional quadrature (volume density, scalar curvature, ball integrals),
//! extracts the asymptotic constants `(e, c)` of the expansion
//! `f(t) = t/4 + e·(1 − t^{2−m})/(2 − m) + c·t^{1−m} + const`, and verifies the
//! closed-form large-radius expansions of ball volume and total scalar curvature.
//!
//! On top of the per-model invariant packages sits the adiabatic layer: the
//! ε-expansion of the Futaki character of a configuration of singular points, and
//! the classification of such configurations into non-existence / existence regimes
//! with per-point scaling schedules `λ_p(ε)`.
//!
//! Modules:
//! - [`quad`]: adaptive Gauss–Kronrod quadrature on finite intervals.
//! - [`radial`]: radial profiles and their metric integrals.
//! - [`models`]: the catalog of concrete ALE models (flat, Eguchi–Hanson, Burns,
//!   synthetic tails) with closed-form invariant packages.
//! - [`futaki`]: the ε-expansion of the Futaki character from per-point data.
//! - [`stability`]: regime classification, span-rank tests, and the balancing solve.
//! - [`scenario`]: scenario files, validation, and deterministic JSON reports.
//! - [`sampled`]: profiles interpolated from tabulated `(t, f)` samples.
//! - [`verify`]: measured-vs-predicted residual tables over radius schedules.

pub mod error;
pub mod futaki;
pub mod models;
pub mod quad;
pub mod radial;
pub mod sampled;
pub mod scenario;
pub mod stability;
pub mod verify;

pub use error::{Error, Result};
