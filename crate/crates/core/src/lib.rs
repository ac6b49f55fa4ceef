//! Best-round rational approximation arrays of a positive real constant,
//! their continued / semi-continued / non-continued classification, total
//! and non-continued error categories, and the ranking of equal-division
//! tunings by how well they approximate an interval.

pub mod approxarray;
pub mod categorize;
pub mod cli;
pub mod contfrac;
pub mod edo;
pub mod error;
pub mod exec;
pub mod numerics;

pub use approxarray::{build_array, ApproxEntry, EntryClass, WindowB};
pub use categorize::{classify_window, CategorizedEntry, Nu};
pub use contfrac::{convergents, expand, semiconvergents, CFExpansion};
pub use error::{Error, Result};
pub use exec::Execution;
pub use numerics::{abs_error, compare_errors, make_constant, Descriptor, Fraction, NamedConstant, RealConstant};
