//! Exact symbolic calculus on jet spaces with even and odd (Grassmann) fields.
//!
//! The crate is organized bottom-up:
//!
//! * [`jetalg`] — canonical-normal-form arithmetic of polynomial forms,
//! * [`calculus`] — total derivatives, `d = d_H + d_V`, contractions, Lie
//!   derivatives along prolonged generalized (super)symmetries, the interior
//!   Euler operator and the variational operator,
//! * [`variational`] — Euler–Lagrange operators, Lepagean equivalents, the
//!   first variational formula, Noether currents and variational triviality,
//! * [`brst`] — nilpotent odd symmetries, the `(s, d_H)` bicomplex and
//!   truncated relative cohomology,
//! * [`linalg`] — exact sparse rational linear algebra used by [`brst`].

pub mod brst;
pub mod calculus;
pub mod jetalg;
pub mod linalg;
pub mod random;
pub mod variational;

pub use jetalg::{Coeff, GradedForm, ModelContext, MultiIndex, Parity, ScalarPoly};
