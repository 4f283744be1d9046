//! Exact factorization of second-order Fuchsian operators.
//!
//! Given an operator family with `k + 2` finite regular singular points
//! (plus one at infinity) and fixed local exponents, every way of
//! distributing the points over two first-order factors
//! `(L D + M)(L̄ D + M̄)` forces a unique accessory part. This crate
//! computes those splittings exactly — arbitrary-precision rational
//! coefficients throughout — along with the index pairs at infinity,
//! Lagrange-adjoint factorizations, and the closed-form solutions the
//! right factors carry.
//!
//! Layering: [`algebra`] is the exact-arithmetic kernel (parameter
//! polynomials, rational functions, polynomials in `x`, fraction-free
//! linear solving); [`operator`] models the operators; [`factorize`] is
//! the splitting engine; [`solutions`] builds and verifies closed-form
//! solutions.

pub mod algebra;
pub mod error;
pub mod factorize;
pub mod operator;
pub mod solutions;

pub use algebra::{
    parse_coeff, rat, rat_int, rat_sqrt, rat_to_f64, scan_symbols, ParamPoly, Rational,
    RationalFunction, SymbolTable, XPoly,
};
pub use error::{Error, Result};
pub use factorize::{
    adjoint_factorization, enumerate_splittings, factorize_all, half_exponent_antisymmetry,
    half_exponent_l_value, infinity_indices, solve_splitting, swap_partner_check,
    trivial_splitting, FamilySpec, Factorization, SplittingMask, SplittingOutcome,
    TrivialSplitting,
};
pub use operator::{
    adjoint, adjoint_coeffs, build_half_exponent_family, build_operator, expand_factors,
    operator_equal, Accessory, Factor, FuchsOperator, HeunParams,
};
pub use solutions::{
    adaptive_simpson, residual_at_points, right_solution, second_solution,
    second_solution_eval, second_solution_residual, trivial_right_solution,
    verify_annihilates, PowerProduct, QuadratureSolution,
};
