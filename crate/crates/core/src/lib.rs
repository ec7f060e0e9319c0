//! Exact computations with Heisenberg and Drinfeld doubles of finite
//! dimensional Hopf algebras: canonical elements and the pentagon relation,
//! reconstruction of the dual pair from a pentagon solution, the
//! factorized R-matrix, and the quantum dilogarithm identity in a truncated
//! formal algebra.
//!
//! Everything is generic over an exact [`scalar::Field`]; the aliases below
//! fix it to ℚ or ℚ(q).

pub mod bialgebra;
pub mod catalog;
pub mod drinfeld;
pub mod error;
pub mod formal;
pub mod io;
pub mod reconstruction;
pub mod relations;
pub mod report;
pub mod scalar;
pub mod tensor;

pub use error::{Error, Result};
pub use report::{RelationId, VerificationReport, Witness};
pub use scalar::{Field, FieldTag, Rational, RationalFunction, Scalar};

pub type QOperator = tensor::Operator<Rational>;
pub type QqOperator = tensor::Operator<RationalFunction>;
pub type QStructureConstants = bialgebra::StructureConstants<Rational>;
pub type QqStructureConstants = bialgebra::StructureConstants<RationalFunction>;
pub type QReconstruction = reconstruction::ReconstructionResult<Rational>;
pub type QqElement = formal::NormalOrderedElement<RationalFunction>;
