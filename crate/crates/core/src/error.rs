//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors produced by grid construction, transforms, reconstructions and
/// evolution solvers.
#[derive(Debug, Error)]
pub enum Error {
    /// Array length does not match the grid it is paired with.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// Interpolation requested outside the grid; carries the offending
    /// coordinate so the caller can decide on zero-extension.
    #[error("point outside grid on {axis} axis: {value}")]
    Bounds { axis: &'static str, value: f64 },

    /// Axis or grid parameters violate an invariant (n >= 8, max > min, ...).
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// State parameters violate an invariant (odd cat at zero amplitude, ...).
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// Degenerate frame mu = nu = 0 or phase outside its domain.
    #[error("invalid frame: {0}")]
    InvalidFrame(String),

    /// Operation requires a different tomogram representation.
    #[error("tomogram representation: {0}")]
    Representation(String),

    /// A Fourier ray leaves the conjugate grid before the integrand decays.
    #[error("insufficient bandwidth: {0}")]
    Bandwidth(String),

    /// Required data lies outside the sampled grid (missing nu slice,
    /// too much advected mass leaving the box, ...).
    #[error("grid coverage: {0}")]
    Coverage(String),

    /// A numeric post-condition failed (normalization drift, tail accuracy).
    #[error("numeric accuracy: {0}")]
    Accuracy(String),

    /// Explicit diffusion step would violate its stability bound.
    #[error("diffusion stability: {0}")]
    Stability(String),

    /// Polynomial potentials of degree >= 3 turn the marginal equation of
    /// motion into a nonlocal integro-differential equation (an antiderivative
    /// operator in the quadrature variable) and are rejected.
    #[error("nonlocal potential: {0}")]
    NonlocalPotential(String),

    /// Thermal damping (n_bar > 0) is rejected; only the zero-temperature
    /// image of the damped evolution is implemented.
    #[error("unsupported damping: {0}")]
    UnsupportedDamping(String),

    /// Malformed input (empty sample set, too few time slices, ...).
    #[error("invalid input: {0}")]
    Input(String),

    /// Underlying I/O failure while reading or writing artifacts.
    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed serialized artifact.
    #[error("parse: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
