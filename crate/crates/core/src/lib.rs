//! Numerics for symplectic quantum tomography.
//!
//! The crate maps between three equivalent descriptions of a single-mode
//! quantum state — the Wigner function W(q, p), the quadrature tomogram
//! w(x, mu, nu), and the position-representation density matrix — and evolves
//! tomograms in time under quadratic Hamiltonians and zero-temperature
//! damping, treating the tomogram as an ordinary classical probability
//! density throughout.
//!
//! Module map:
//!
//! - [`grid`] / [`fourier`]: uniform grids, trapezoidal quadrature,
//!   interpolation and the fixed Fourier conventions (the numeric substrate).
//! - [`states`]: closed-form Wigner functions and tomograms of the reference
//!   states, used as oracles everywhere.
//! - [`tomography`]: forward (Wigner -> tomogram), inverse
//!   (tomogram -> Wigner), density-matrix reconstruction, the sampled
//!   homodyne estimator, and frame utilities.
//! - [`evolution`]: tomogram equations of motion, exact characteristic flows,
//!   the damped drift-diffusion splitting, residual and propagator checks.
//! - [`moments`]: quadrature moments and the generating function, with its
//!   two-way link to the Wigner function.
//! - [`sampling`]: deterministic counter-based sampling of homodyne data.
//! - [`io`]: columnar/CSV serialization with JSON sidecars.
//! - [`acceptance`]: the end-to-end check suite behind `qtomo selftest`.

pub mod acceptance;
pub mod error;
pub mod evolution;
pub mod fourier;
pub mod grid;
pub mod io;
pub mod linalg;
pub mod moments;
pub mod sampling;
pub mod states;
pub mod tomography;

pub use error::{Error, Result};
pub use grid::{AxisGrid, PhaseSpaceGrid, ScalarField2D, ScalarField3D, WignerField};
pub use states::StateSpec;
pub use tomography::{DensityMatrix, FrameParameters, HomodyneSample, Tomogram, TomogramSlice};
