//! Exact linear algebra over the parameter field.
//!
//! Determinants use fraction-free (Bareiss) elimination on polynomial
//! matrices: every intermediate division is exact, so entries stay
//! polynomial and never grow spurious denominators. Systems are solved by
//! Cramer's rule on those determinants — the matrices here are small
//! (order k+2), where Cramer on Bareiss beats building a fraction tower.

use crate::algebra::ppoly::ParamPoly;
use crate::algebra::rfunc::RationalFunction;
use crate::algebra::symbols::ensure_same;
use crate::error::{Error, Result};

/// Determinant of a square polynomial matrix by fraction-free elimination.
///
/// One-step Bareiss: after eliminating column `j`, every entry is divided by
/// the previous pivot — an exact polynomial division by construction. Zero
/// pivots are handled by row swaps (each flipping the sign); a column with
/// no nonzero pivot means the determinant is zero.
pub fn determinant(matrix: &[Vec<ParamPoly>]) -> Result<ParamPoly> {
    let n = matrix.len();
    assert!(n > 0, "determinant of an empty matrix");
    let table = matrix[0][0].table().clone();
    for row in matrix {
        assert_eq!(row.len(), n, "determinant needs a square matrix");
        for entry in row {
            ensure_same(&table, entry.table())?;
        }
    }

    let mut m: Vec<Vec<ParamPoly>> = matrix.to_vec();
    let mut sign_negative = false;
    let mut prev_pivot = ParamPoly::one(&table);

    for j in 0..n {
        // find a row with a nonzero entry in column j
        let pivot_row = match (j..n).find(|&r| !m[r][j].is_zero()) {
            Some(r) => r,
            None => return Ok(ParamPoly::zero(&table)),
        };
        if pivot_row != j {
            m.swap(pivot_row, j);
            sign_negative = !sign_negative;
        }
        let pivot = m[j][j].clone();
        for r in (j + 1)..n {
            for c in (j + 1)..n {
                let numerator = &(&pivot * &m[r][c]) - &(&m[r][j] * &m[j][c]);
                m[r][c] = numerator
                    .div_exact(&prev_pivot)
                    .expect("fraction-free elimination divides exactly");
            }
            m[r][j] = ParamPoly::zero(&table);
        }
        prev_pivot = pivot;
    }

    let det = m[n - 1][n - 1].clone();
    Ok(if sign_negative { -&det } else { det })
}

/// Solves `A x = b` exactly for a square polynomial system via Cramer's
/// rule. Errors with [`Error::SingularSystem`] when `det A == 0`.
pub fn solve_poly(matrix: &[Vec<ParamPoly>], rhs: &[ParamPoly]) -> Result<Vec<RationalFunction>> {
    let n = matrix.len();
    assert_eq!(rhs.len(), n, "right-hand side length");
    let det = determinant(matrix)?;
    if det.is_zero() {
        return Err(Error::SingularSystem);
    }
    let mut solution = Vec::with_capacity(n);
    for col in 0..n {
        let mut replaced = matrix.to_vec();
        for (row, value) in rhs.iter().enumerate() {
            replaced[row][col] = value.clone();
        }
        let det_col = determinant(&replaced)?;
        solution.push(RationalFunction::new(det_col, det.clone())?.simplify());
    }
    Ok(solution)
}

/// Solves `A x = b` where entries are rational functions: each row is
/// cleared to a common polynomial denominator, then [`solve_poly`] runs on
/// the resulting polynomial system (row scaling leaves the solution set
/// unchanged because the scale factors are nonzero polynomials).
pub fn solve(
    matrix: &[Vec<RationalFunction>],
    rhs: &[RationalFunction],
) -> Result<Vec<RationalFunction>> {
    let n = matrix.len();
    assert!(n > 0, "empty system");
    assert_eq!(rhs.len(), n, "right-hand side length");
    let table = matrix[0][0].table().clone();
    let mut poly_matrix: Vec<Vec<ParamPoly>> = Vec::with_capacity(n);
    let mut poly_rhs: Vec<ParamPoly> = Vec::with_capacity(n);
    for (row, b) in matrix.iter().zip(rhs) {
        assert_eq!(row.len(), n, "solve needs a square matrix");
        for entry in row {
            ensure_same(&table, entry.table())?;
        }
        ensure_same(&table, b.table())?;
        // common denominator of the row, including the right-hand side
        let mut common = ParamPoly::one(&table);
        for entry in row.iter().chain(std::iter::once(b)) {
            common = &common * entry.den();
        }
        let mut cleared_row = Vec::with_capacity(n);
        for entry in row {
            let cofactor = common
                .div_exact(entry.den())
                .expect("denominator divides the row product");
            cleared_row.push(entry.num() * &cofactor);
        }
        let b_cofactor = common
            .div_exact(b.den())
            .expect("denominator divides the row product");
        poly_rhs.push(b.num() * &b_cofactor);
        poly_matrix.push(cleared_row);
    }
    solve_poly(&poly_matrix, &poly_rhs)
}
