//! Exact coefficient field: fractions of multivariate Laurent polynomials over ℚ.

mod elem;
mod parse;
mod poly;
mod symbol;

pub use elem::FieldElem;
pub use parse::{parse, ParseError};
pub use poly::{Mono, Poly};
pub use symbol::Symbol;
