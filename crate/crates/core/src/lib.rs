//! Lie point symmetries and first-order approximate symmetries of systems of
//! two second-order ODEs, computed with exact rational arithmetic.
//!
//! The pipeline is: build an [`OdeSystem`](jet::OdeSystem) (directly or from a
//! metric via [`geom`]), prolong a [`Generator`](prolong::Generator), split the
//! invariance condition into a [`DeterminingSystem`](determine::DeterminingSystem),
//! and solve it over a finite ansatz with [`approx`].

pub mod approx;
pub mod cli;
pub mod determine;
mod error;
pub mod fixtures;
pub mod geom;
pub mod jet;
pub mod prolong;
pub mod symexpr;

pub use error::{Error, Result};
pub use symexpr::{Atom, Expr, Func};
