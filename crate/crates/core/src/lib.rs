//! Exact tools for representations of integers by positive definite ternary
//! and diagonal quaternary quadratic forms.

pub mod arith;
pub mod cli;
pub mod constructive;
pub mod error;
pub mod forms;
pub mod genus;
pub mod local;
pub mod scan;

pub use error::{Error, Result};
pub use forms::{DiagonalQuaternary, IntegerQuadruple, IntegerTriple, Mat3, TernaryForm};
