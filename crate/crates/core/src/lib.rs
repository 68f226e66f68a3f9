//! Exact computations with Adams-graded commutative dg algebras: bar
//! constructions, degree-zero Hopf algebras, coLie algebras of
//! indecomposables, 1-minimal models, cell modules and connections, and
//! relative versions over a base algebra.

pub mod bar;
pub mod cdga;
pub mod cell;
pub mod connection;
pub mod error;
pub mod linalg;
pub mod minimal_model;
pub mod parse;
pub mod relative;
pub mod resolution;

pub use error::{Error, Result};
