//! Simulation and verification toolkit for chain synthesis under entangled
//! biphoton control.
//!
//! Modules, bottom-up:
//! - [`qcore`]: complex matrices, pure states, partial traces, Born tables and
//!   a Jacobi eigensolver.
//! - [`chsh`]: participants, sign-convention presets and CHSH operators.
//! - [`synthesis`]: the two-site chain synthesis protocol and its Monte Carlo
//!   estimator.
//! - [`optimize`]: quantum, biphoton-product and classical maxima.
//! - [`claims`]: the registry of published states and claims, the verification
//!   runner and report emitters.

pub mod chsh;
pub mod claims;
pub mod error;
pub mod optimize;
pub mod qcore;
pub mod synthesis;

pub use chsh::{ConventionPreset, PairSpec, Participant, Sex, XiValue};
pub use error::{Error, Result};
pub use qcore::{ComplexMatrix, HermitianOperator, Observable, PureState};
