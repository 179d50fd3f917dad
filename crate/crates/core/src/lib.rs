pub mod arith;
pub mod budget;
pub mod classify;
pub mod error;
pub mod experiments;
pub mod heights;
pub mod poly;
pub mod surface;

pub use arith::{LogValue, Place, Rational, Real};
pub use budget::Budget;
pub use error::{Error, Result};
pub use poly::{Mobius, Polynomial, ProjPoint, RationalMap};
