//! Exact computational kernels for Sperner-type questions about uniform set
//! families (shades, t-intersecting and cross-t-intersecting maxima, Frankl
//! families) together with finite-depth realizations of tree colourings,
//! level densities and branching-decay comparisons.
//!
//! Everything is exact: counts are integers or big integers, ratios are
//! big rationals, and irrational quantities (roots) are carried as
//! outward-rounded rational enclosures.

pub mod combin;
pub mod decay;
pub mod exact;
mod error;
pub mod extremal;
pub mod oracle;
pub mod pipeline;
pub mod setfam;
pub mod trees;

pub use error::{Error, Result};

/// Schema version written into every JSON document and cache record.
pub const SCHEMA_VERSION: u32 = 1;
