//! Standing pulses of a three-component reaction-diffusion system:
//! matched-asymptotic construction, SLEP-based stability analysis,
//! bifurcation diagrams and direct simulation.
//!
//! The system is a one-activator/two-inhibitor model on the line,
//!
//! ```text
//! u_t       = eps^2 u_xx + u - u^3 - eps (alpha v + beta w + gamma),
//! tau v_t   =       v_xx + u - v,
//! theta w_t =   D^2 w_xx + u - w,
//! ```
//!
//! in the singular limit `eps -> 0`. The crate provides:
//!
//! * [`params`]: validated parameters, time-scale regimes, background state;
//! * [`pulse`]: the composite standing-pulse profile and its matching data;
//! * [`slep`]: the scalar SLEP machinery that reduces the critical
//!   eigenvalues to roots of explicit analytic functions;
//! * [`bifurcation`]: drift line, Hopf curve, codimension-two points and
//!   global critical-eigenvalue paths in the slow-inhibitor regime;
//! * [`spectrum`]: essential-spectrum bounds via the dispersion determinant
//!   and a banded shift-invert eigensolver for the discretized
//!   linearization (the global cross-check for all SLEP predictions);
//! * [`sim`]: implicit-explicit time integration of the PDE with
//!   zero-contour extraction and pulse-dynamics classification.
//!
//! Everything numeric is generic over the scalar type through
//! [`scalar::Real`]; the aliases below fix the `f64` instantiation used by
//! the command-line tool and the test suite.

pub mod bifurcation;
pub mod bvp;
pub mod config;
pub mod error;
pub mod params;
pub mod pulse;
pub mod roots;
pub mod scalar;
pub mod sim;
pub mod slep;
pub mod spectrum;

pub use error::{Error, Result};
pub use scalar::Real as RealScalar;

/// Default scalar type.
pub type Real = f64;
/// Complex scalar over [`Real`].
pub type Complex = num_complex::Complex<Real>;
/// Validated model parameters over [`Real`].
pub type Params = params::ModelParams<Real>;
/// Time-scale regime over [`Real`].
pub type Regime = params::TimeScaleRegime<Real>;
/// Background state over [`Real`].
pub type Background = params::BackgroundState<Real>;
/// Layer matching data over [`Real`].
pub type Layer = pulse::LayerData<Real>;
/// Composite pulse over [`Real`].
pub type Pulse = pulse::PulseSolution<Real>;
/// SLEP evaluation context over [`Real`].
pub type Slep = slep::SlepContext<Real>;
