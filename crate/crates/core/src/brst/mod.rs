//! Nilpotent odd symmetries: the BRST generator of a Lie algebra, the
//! nilpotency test, the operator `s_υ` and truncated relative cohomology of
//! the `(s_υ, d_H)` bicomplex on horizontal forms.

mod cohomology;
mod generator;
mod lie_algebra;

pub use cohomology::{relative_cohomology, truncation_basis, ChargeGrading, CochainTruncation, RelativeCohomology};
pub use generator::{
    brst_fields, brst_generator, gauge_name, ghost_name, nilpotency_check, s_operator, BrstModel, Criterion,
    NilpotencyReport, ProbeOutcome, PROBE_SAMPLES, PROBE_SEED,
};
pub use lie_algebra::LieStructure;

use crate::calculus::CalculusError;
use crate::jetalg::{AlgebraError, GradedForm};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum BrstError {
    #[error("structure constant index ({r},{p},{q}) out of range for dimension {dim}")]
    IndexOutOfRange { r: usize, p: usize, q: usize, dim: usize },
    #[error("structure constants are not antisymmetric at ({r},{p},{q})")]
    NotAntisymmetric { r: usize, p: usize, q: usize },
    #[error("the Lie algebra is zero-dimensional")]
    EmptyAlgebra,
    #[error("derivation is not vertical")]
    NotVertical,
    #[error("s is defined only for odd vertical derivations")]
    NotOddVertical,
    #[error("form is not horizontal")]
    NotHorizontal,
    #[error("derivation is not nilpotent")]
    NotNilpotent,
    #[error("charges are not shifted by a fixed step")]
    NotGraded,
    #[error("truncation is not closed: {operator} leaves it")]
    NotClosed { operator: &'static str, form: GradedForm },
    #[error("exact part is not contained in the cocycles ({operator} image)")]
    NotSubcomplex { operator: &'static str, form: GradedForm },
    #[error("form lies outside the truncation")]
    OutsideTruncation,
    #[error(transparent)]
    Calculus(#[from] CalculusError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
