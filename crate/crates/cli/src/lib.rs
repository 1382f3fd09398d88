//! Model-file language and command-line front end for `gradjet`.
//!
//! A model file declares the base, the fields, and named Lie algebras,
//! Lagrangians and symmetries:
//!
//! ```text
//! base dim 1 coords t;
//! even field y;
//! odd field c charge 1;
//! algebra g constants su2;
//! lagrangian L = 1/2*y(1)^2;
//! symmetry v: horizontal (1) vertical (y -> y(1));
//! ```
//!
//! Jets are written with exponent-vector multi-indices (`u(1,0)` is `∂_t u`
//! on a base with coordinates `t x`), `d[t]` is a horizontal differential,
//! `th[u(0,1)]` a contact form and `omega` the volume form.

pub mod commands;
pub mod model;
pub mod render;
pub mod report;
pub mod syntax;

pub use commands::{main_with_args, Cli, CliError, Command};
pub use model::{parse_model, ModelFile};
pub use report::{Format, Report, Value};
pub use syntax::{parse_form, ParseError};
