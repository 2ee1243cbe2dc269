use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum WhError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("matrix is singular to working precision (condition estimate {condition:.3e})")]
    SingularMatrix { condition: f64 },
    #[error("integrand decays too slowly: declared |t|^{declared}, sampled slope {sampled:.3}")]
    DecayTooSlow { declared: f64, sampled: f64 },
    #[error("evaluation point {re}{im:+}i lies within the contour indentation")]
    ContourHit { re: f64, im: f64 },
    #[error("kernel vanishes on the contour (|K| = {0:.3e})")]
    KernelZero(f64),
    #[error("argument of the normalized kernel winds {0} times around the origin")]
    WindingNonzero(i64),
    #[error("normal matrix is singular at the incidence point (|det| = {0:.3e})")]
    SingularAtIncidence(f64),
    #[error("direction lies on an optical boundary")]
    OpticalBoundary,
    #[error("plane-wave base solution degenerates at a test point (|X| = {0:.3e})")]
    DegenerateBase(f64),
    #[error("boundary residual {residual:.3e} above 1e-8 with {n_modes} modes; increase the mode count")]
    NotConverged { residual: f64, n_modes: usize },
    #[error("reflection residual {0:.3e} too large to fix the edge-directivity gauge")]
    GaugeAmbiguous(f64),
    #[error("spectral argument lands on the incidence pole")]
    PoleHit,
    #[error("calibration mask is empty")]
    EmptyMask,
}

pub type Result<T> = std::result::Result<T, WhError>;
