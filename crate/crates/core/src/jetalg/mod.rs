//! Canonical-normal-form arithmetic for the bigraded, Grassmann-graded
//! algebra of polynomial forms of finite jet order.
//!
//! Every element is a finite sum of terms `c · m · (g₁ ∧ … ∧ g_k)` where `c`
//! is rational, `m` is a monomial in base coordinates and jet coordinates and
//! the `gᵢ` are `dx^λ` or contact forms `θ^a_Λ`. Swapping two homogeneous
//! factors costs `(−1)^{|φ||σ| + [φ][σ]}` (form degree and Grassmann parity),
//! which is applied every time a product is sorted into canonical order, so
//! structural equality is mathematical equality.

mod context;
mod form;
mod monomial;
mod multi_index;
mod word;

use std::ops::Add;

pub use context::{wedge, FieldSpec, ModelContext};
pub use form::{GradedForm, ScalarPoly};
pub use monomial::{JetVar, Monomial};
pub use multi_index::MultiIndex;
pub use word::{FormGenerator, Word};

/// Exact rational coefficient.
pub type Coeff = num::BigRational;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bool(odd: bool) -> Self {
        if odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn bit(self) -> u8 {
        self as u8
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        Parity::from_bool(self.is_odd() ^ rhs.is_odd())
    }
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("duplicate identifier `{0}`")]
    DuplicateName(String),
    #[error("field #{0} is not declared in this model")]
    UnknownField(usize),
    #[error("base direction #{0} is out of range")]
    UnknownDirection(usize),
    #[error("parity of field `{0}` does not match the model")]
    ParityMismatch(String),
    #[error("multi-index has {found} entries, model has base dimension {expected}")]
    IndexArity { expected: usize, found: usize },
}
