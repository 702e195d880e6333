//! Noise-threshold bounds for bipartite quantum states.
//!
//! The crate computes the reduced-state parameter γ_ρ and the white-noise
//! thresholds derived from it, builds and certifies explicit source-operator
//! dilations of noisy states, evaluates CHSH-type and perfect-correlation
//! Bell functionals, and provides closed forms for the noisy singlet.

pub mod error;
pub mod inequalities;
pub mod linalg;
pub mod observables;
pub mod report;
pub mod singlet_lab;
pub mod source_ops;
pub mod states;
pub mod thresholds;

pub use error::{Error, Result};
