//! Exact computations with current and loop Lie (super)algebras, their
//! enveloping algebras, symmetric invariants and centers.

pub mod arith;
pub mod catalog;
pub mod center;
pub mod cli;
pub mod current;
pub mod error;
pub mod monomial;
pub mod pbw;
pub mod predict;
pub mod presentation;
pub mod sym;

pub use error::{Error, Result};
