//! Exact Choquet integration against monotone set functions on finite ground
//! sets, with constructive checks of sublinearity, duality, regularization,
//! dyadic Hausdorff content and the convergence lemmas.
//!
//! All arithmetic is exact: values are [`number::Rational`] or
//! [`number::Extended`] (rationals plus `+∞`).

pub mod capacity;
pub mod convergence;
pub mod domain;
pub mod duality;
pub mod error;
pub mod hausdorff;
pub mod integral;
pub mod io;
pub mod nesting;
pub mod number;

pub use capacity::{check_axiom, Axiom, AxiomReport, Capacity};
pub use domain::{GroundSet, SignedFunction, StepFunction, SubsetMask};
pub use error::{Error, Result};
pub use integral::{choquet, integrate};
pub use number::{Extended, Rational};
