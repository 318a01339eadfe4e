//! Spontaneous emission spectrum and collective decay rate of two entangled
//! two-level atoms in front of a mirror that oscillates along its normal.
//!
//! The mirror sits at `z = a sin(omega_p t)` and reflects through
//! `sigma = diag(1, 1, -1)`. Results are perturbative to second order in the
//! amplitude `a` for the spectrum and to first order for the decay rate.
//!
//! Positions are SI meters, frequencies rad/s, times seconds. Dipole moments
//! are stored in Gaussian units (statC·cm); use [`AtomSpec::from_si`] to
//! convert from C·m.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod coupling;
pub mod decay;
pub mod lineshape;
pub mod oracle;
pub mod spectrum;
pub mod tensor;
pub mod units;

pub use config::{
    einstein_a, AtomLabel, AtomSpec, BellState, ConfigError, Geometry, ImageGeometry, Mat3, MirrorSpec,
    ReflectionMatrix, RegimeWarning, SystemConfig, Validated, Vec3, SIGMA,
};
pub use decay::{cross_validate, decay_rate, decay_rate_expanded, decay_vs_distance, DecayError, DecayResult};
pub use lineshape::LineshapeSet;
pub use spectrum::{
    spectrum_point, spectrum_sweep, FrequencyGrid, InterferencePrefactor, SpectrumError, SpectrumOptions,
    SpectrumPoint, SpectrumResult,
};
pub use tensor::{tau, tau_derivs, tau_with_derivs, RadTensor, RadTensorDerivs, TensorError};
