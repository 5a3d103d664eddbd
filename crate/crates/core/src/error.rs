use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),

    #[error("dimension mismatch: {left}x{left} vs {right}x{right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid system spec: {0}")]
    InvalidSpec(String),

    #[error("drive model `{model}` requires n = 2, got n = {n}")]
    ModeDimension { model: &'static str, n: usize },

    #[error("energy level {index} has imaginary residue {residue:e} (limit 1e-10)")]
    NonRealEnergy { index: usize, residue: f64 },

    #[error("matrix is not hermitian: anti-hermitian residue {residual:e}")]
    NonHermitian { residual: f64 },

    #[error("jacobi sweeps did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("invalid evolution config: {0}")]
    InvalidConfig(String),

    #[error("initial state is the zero vector")]
    ZeroInitialState,

    #[error("state norm drifted by {drift:e} at t = {t}")]
    NormDrift { t: f64, drift: f64 },

    #[error("at t = {t}: {source}")]
    AtTime {
        t: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// True for failures of the numerics themselves rather than of the
    /// caller's input.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::NoConvergence { .. } | Error::NonHermitian { .. } | Error::NormDrift { .. } => {
                true
            }
            Error::AtTime { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}
