//! Superintegrable Hamiltonians with numerical certification.
//!
//! The crate builds a catalog of κ-deformed oscillator and Kepler systems,
//! evaluates their constants of motion with exact forward-mode gradients,
//! and checks commutation, independence, limits and conservation along
//! integrated flows.

pub mod catalog;
pub mod certify;
pub mod coords;
pub mod dual;
pub mod dynamics;
pub mod error;
pub mod factorization;
pub mod geometry;
pub mod observable;
pub mod poisson;
pub mod profile;
pub mod types;

pub use catalog::{build_system, build_system_by_name, domain_sample, generic_polar_system, SystemDef, SystemId};
pub use dual::{Dual, Scalar, Univariate};
pub use error::{Error, Result};
pub use observable::{Degree, Observable, PhaseFunction};
pub use poisson::{BracketReport, Verdict};
pub use types::{Chart, ParamSet, PhasePoint, Ratio};
