//! Exact computer algebra: rationals, parameter polynomials, rational
//! functions, polynomials in `x`, expression parsing, and fraction-free
//! linear solving.

pub mod linsolve;
pub mod parse;
pub mod ppoly;
pub mod rational;
pub mod rfunc;
pub mod symbols;
pub mod xpoly;

pub use parse::{parse_coeff, scan_symbols};
pub use ppoly::{Monomial, ParamPoly};
pub use rational::{rat, rat_int, rat_sqrt, rat_to_f64, Rational};
pub use rfunc::RationalFunction;
pub use symbols::{ensure_same, SymbolTable};
pub use xpoly::XPoly;
