//! Reproducible experiments: gcd series along orbits, the depth selector,
//! Möbius quasi-invariance and large-gcd index sets.

mod depth;
mod index;
mod mobius;
mod series;

pub use depth::{choose_depth, fiber_multiplicity, DepthCertificate};
pub use index::{ap_structure, large_index_set, ApStructure, IndexSet, Progression};
pub use mobius::{
    inversion_constant, max_sample_size, mobius_invariance_probe, random_rationals, MobiusProbe, SampleDeviation,
};
pub use series::{
    gcd_series, gcd_series_with, ConfigEcho, GcdRow, GcdSeriesConfig, GcdSeriesReport, Trend, Truncation,
    CSV_ELIDE_DIGITS, FLAG_ABOVE_EPS, FLAG_BOTH_ZERO, FLAG_ELIDED, FLAG_ONE_ZERO, FLAG_RATIONAL, FLAG_UNFACTORED,
    JSON_ELIDE_DIGITS,
};
