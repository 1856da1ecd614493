use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("result overflows double precision: {0}")]
    Overflow(String),

    /// The polarization frame is undefined on the kz-axis.
    #[error("wavevector lies on the kz-axis (k_perp = {k_perp:e}, k = {k:e})")]
    OnAxis { k_perp: f64, k: f64 },

    #[error("grid shape mismatch: {0}")]
    Shape(String),

    #[error("field has zero norm; variances are undefined")]
    DegenerateNorm,

    #[error("amplitude carries weight on the kz-axis; the 1/k_perp^2 integrand diverges")]
    SingularIntegrand,

    #[error("insufficient resolution: {0}")]
    Resolution(String),

    #[error("fit error: {0}")]
    Fit(String),

    #[error("malformed field-grid file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
