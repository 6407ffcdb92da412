//! Marked translation-vector spectra of free-group representations into
//! SL_n over the reals and over valued fields of rational functions, and the
//! degeneration of rescaled real spectra to tropical ones.

// Negated float comparisons are used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arch;
pub mod chamber;
pub mod degeneration;
pub mod displacement;
pub mod error;
pub mod exact_arith;
pub mod fixtures;
pub mod groups;
pub mod io;
pub mod matrix;
pub mod nonarch;

pub use error::{Error, Result};
