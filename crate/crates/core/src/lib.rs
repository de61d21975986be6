//! Entanglement witnesses built by contracting states and witnesses
//! through a shared connector, with the linear algebra, symmetric-group
//! tools and conic optimization needed to evaluate them.

pub mod conic;
pub mod error;
pub mod linalg;
pub mod swc;
pub mod symmetric_group;
pub mod zoo;

pub use error::{Error, Result};
pub use linalg::{Operator, SubsystemShape, C64, CMatrix};
pub use swc::{contract, effective_tau_operator, evaluate_moment, SwcRecipe};
pub use symmetric_group::{GroupAlgebraElement, Permutation, YoungLabel};
