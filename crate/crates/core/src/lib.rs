//! High-precision evaluation of polylogarithms, generalized polylogarithms
//! and binomial-harmonic series, with a verification catalog and an
//! integer-relation finder.

pub mod catalog;
pub mod closed_form;
pub mod complex;
pub mod constants;
pub mod contour;
pub mod error;
pub mod gpl;
pub mod polylog;
pub mod precision;
pub mod relation;
pub mod series;
pub mod util;

pub use complex::Complex;
pub use error::{Error, Result};
pub use precision::PrecisionContext;
