//! Error taxonomy shared across the library.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Evaluation point outside the profile domain `(t_min, ∞)`.
    #[error("t = {t} outside the profile domain (t_min = {t_min})")]
    Domain { t: f64, t_min: f64 },

    /// Kähler positivity failed: the volume density is not positive.
    #[error("degenerate metric at t = {t}: volume density {density:.6e} <= 0")]
    Degenerate { t: f64, density: f64 },

    /// Positivity screen failed before quadrature.
    #[error("positivity screen failed at t = {t}: {what} = {value:.6e} <= 0")]
    Positivity { t: f64, what: &'static str, value: f64 },

    /// Adaptive quadrature exhausted its subdivision budget.
    #[error(
        "quadrature did not converge after {subdivisions} subdivisions \
         (error estimate {error_estimate:.3e}, needed {needed:.3e})"
    )]
    QuadratureNonConvergence {
        subdivisions: usize,
        error_estimate: f64,
        needed: f64,
    },

    /// Radius-schedule extrapolation failed to settle.
    #[error("extrapolation did not converge over the radius schedule: {message}")]
    ExtrapolationDiverged { message: String },

    /// Least-squares design matrix is numerically rank-deficient.
    #[error("asymptotic fit failed: design matrix rank {rank} < {needed} (samples too clustered)")]
    FitRankDeficient { rank: usize, needed: usize },

    /// Mismatched vector lengths between configuration pieces.
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },

    /// Constructor-level validation failure.
    #[error("{0}")]
    InvalidInput(String),

    /// Scenario file violates the schema or cross-field constraints.
    #[error("scenario invalid at `{path}`: {message}")]
    Scenario { path: String, message: String },

    /// The balancing Jacobian does not have full row rank.
    #[error("balancing Jacobian rank {rank} < d = {d}: span hypothesis fails")]
    BalancingRankDeficient { rank: usize, d: usize },

    /// The linearized balancing step left the chart `(-1, 1)^{|S|}`.
    #[error("balancing step outside the unit chart: |t|_inf = {t_inf:.6e} >= 1")]
    BalancingOutOfChart { t_inf: f64 },

    /// Asked for the radial profile of a model that has none.
    #[error("model `{0}` carries invariants only, no radial profile")]
    NoProfile(&'static str),

    /// Operation requires a different verdict regime.
    #[error("verdict regime `{regime}` does not admit {operation}")]
    WrongRegime {
        regime: String,
        operation: &'static str,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Shorthand for `InvalidInput` with formatted text.
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// Shorthand for `Scenario` errors carrying a field path.
    pub fn scenario(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Scenario {
            path: path.into(),
            message: message.into(),
        }
    }
}
