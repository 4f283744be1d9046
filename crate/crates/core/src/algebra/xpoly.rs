//! Polynomials in the independent variable `x`, with coefficients that are
//! rational functions of the declared parameters. Dense representation:
//! `coeffs[i]` multiplies `x^i`, trailing zeros trimmed.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num::traits::Signed;

use crate::algebra::rational::Rational;
use crate::algebra::rfunc::RationalFunction;
use crate::algebra::symbols::{assert_same, ensure_same, SymbolTable};
use crate::error::Result;

#[derive(Clone)]
pub struct XPoly {
    table: Arc<SymbolTable>,
    coeffs: Vec<RationalFunction>,
}

impl XPoly {
    pub fn new(table: &Arc<SymbolTable>, coeffs: Vec<RationalFunction>) -> Self {
        for c in &coeffs {
            assert_same(table, c.table());
        }
        let mut p = XPoly {
            table: Arc::clone(table),
            coeffs,
        };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self
            .coeffs
            .last()
            .map(RationalFunction::is_zero)
            .unwrap_or(false)
        {
            self.coeffs.pop();
        }
    }

    pub fn zero(table: &Arc<SymbolTable>) -> Self {
        XPoly {
            table: Arc::clone(table),
            coeffs: Vec::new(),
        }
    }

    pub fn one(table: &Arc<SymbolTable>) -> Self {
        Self::constant(RationalFunction::one(table))
    }

    pub fn constant(c: RationalFunction) -> Self {
        let table = Arc::clone(c.table());
        XPoly::new(&table, vec![c])
    }

    /// The monomial `x`.
    pub fn var(table: &Arc<SymbolTable>) -> Self {
        XPoly::new(
            table,
            vec![RationalFunction::zero(table), RationalFunction::one(table)],
        )
    }

    /// The monic linear factor `x - root`.
    pub fn linear_root(root: &RationalFunction) -> Self {
        let table = Arc::clone(root.table());
        XPoly::new(&table, vec![-root, RationalFunction::one(&table)])
    }

    /// The monic polynomial with the given roots (with multiplicity).
    pub fn from_roots(table: &Arc<SymbolTable>, roots: &[RationalFunction]) -> Self {
        let mut p = XPoly::one(table);
        for r in roots {
            p = &p * &Self::linear_root(r);
        }
        p
    }

    pub fn table(&self) -> &Arc<SymbolTable> {
        &self.table
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `x^i` (zero when `i` exceeds the degree).
    pub fn coeff(&self, i: usize) -> RationalFunction {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| RationalFunction::zero(&self.table))
    }

    pub fn coeffs(&self) -> &[RationalFunction] {
        &self.coeffs
    }

    pub fn leading_coeff(&self) -> Option<&RationalFunction> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff()
            .map(RationalFunction::is_one)
            .unwrap_or(false)
    }

    pub fn scale(&self, factor: &RationalFunction) -> Self {
        assert_same(&self.table, factor.table());
        XPoly::new(
            &self.table,
            self.coeffs.iter().map(|c| c * factor).collect(),
        )
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| {
                c * &RationalFunction::from_rational(
                    &self.table,
                    Rational::from_integer(i.into()),
                )
            })
            .collect();
        XPoly::new(&self.table, coeffs)
    }

    /// Horner evaluation at a rational-function point.
    pub fn eval(&self, x: &RationalFunction) -> RationalFunction {
        assert_same(&self.table, x.table());
        let mut acc = RationalFunction::zero(&self.table);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// Horner evaluation at a double; all coefficients must be parameter-free.
    pub fn eval_f64(&self, x: f64) -> Result<f64> {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_f64()?;
        }
        Ok(acc)
    }

    /// Dense double coefficients, constant term first.
    pub fn coeffs_f64(&self) -> Result<Vec<f64>> {
        self.coeffs.iter().map(RationalFunction::to_f64).collect()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        ensure_same(&self.table, &other.table)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        ensure_same(&self.table, &other.table)?;
        Ok(self - other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        ensure_same(&self.table, &other.table)?;
        Ok(self * other)
    }

    /// Coefficientwise exact equality (cross-multiplication per slot).
    pub fn eq_poly(&self, other: &Self) -> Result<bool> {
        ensure_same(&self.table, &other.table)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        for i in 0..n {
            if !self.coeff(i).eq_rf(&other.coeff(i))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn substitute(&self, values: &[Option<Rational>]) -> Result<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.substitute(values))
            .collect::<Result<Vec<_>>>()?;
        Ok(XPoly::new(&self.table, coeffs))
    }

    pub fn project(&self, target: &Arc<SymbolTable>) -> Result<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.project(target))
            .collect::<Result<Vec<_>>>()?;
        Ok(XPoly::new(target, coeffs))
    }
}

impl PartialEq for XPoly {
    fn eq(&self, other: &Self) -> bool {
        assert_same(&self.table, &other.table);
        self.eq_poly(other).expect("tables already checked")
    }
}

impl Add for &XPoly {
    type Output = XPoly;
    fn add(self, rhs: &XPoly) -> XPoly {
        assert_same(&self.table, &rhs.table);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) + &rhs.coeff(i)).collect();
        XPoly::new(&self.table, coeffs)
    }
}

impl Sub for &XPoly {
    type Output = XPoly;
    fn sub(self, rhs: &XPoly) -> XPoly {
        assert_same(&self.table, &rhs.table);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| &self.coeff(i) - &rhs.coeff(i)).collect();
        XPoly::new(&self.table, coeffs)
    }
}

impl Neg for &XPoly {
    type Output = XPoly;
    fn neg(self) -> XPoly {
        XPoly::new(&self.table, self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &XPoly {
    type Output = XPoly;
    fn mul(self, rhs: &XPoly) -> XPoly {
        assert_same(&self.table, &rhs.table);
        if self.is_zero() || rhs.is_zero() {
            return XPoly::zero(&self.table);
        }
        let mut coeffs =
            vec![RationalFunction::zero(&self.table); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        XPoly::new(&self.table, coeffs)
    }
}

impl fmt::Display for XPoly {
    /// Canonical form: powers descending, zero terms skipped; a pure constant
    /// prints as its coefficient; otherwise each coefficient is parenthesized
    /// exactly when it is a multi-term polynomial, `1*`/`-1*` suppressed,
    /// and `x^1` shortened to `x`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(usize, RationalFunction)> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(p, c)| (p, c.simplify()))
            .collect();
        if terms.is_empty() {
            return write!(f, "0");
        }
        if terms.len() == 1 && terms[0].0 == 0 {
            return write!(f, "{}", terms[0].1);
        }
        for (i, (power, coeff)) in terms.iter().enumerate() {
            // The simplified coefficient has a positive-leading denominator,
            // so the sign to surface is the numerator's leading sign.
            let negative = coeff
                .num()
                .leading_term()
                .map(|(_, c)| c.is_negative())
                .unwrap_or(false);
            let magnitude = if negative { -coeff } else { coeff.clone() };
            let coeff_str = if magnitude.den().is_one() {
                let s = magnitude.num().to_string();
                if magnitude.num().term_count() > 1 {
                    format!("({s})")
                } else {
                    s
                }
            } else {
                magnitude.to_string()
            };
            let body = if *power == 0 {
                coeff_str
            } else {
                let xs = if *power == 1 {
                    "x".to_string()
                } else {
                    format!("x^{power}")
                };
                if coeff_str == "1" {
                    xs
                } else {
                    format!("{coeff_str}*{xs}")
                }
            };
            if i == 0 {
                write!(f, "{}{}", if negative { "-" } else { "" }, body)?;
            } else {
                write!(f, " {} {}", if negative { "-" } else { "+" }, body)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for XPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "XPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{rat, rat_int};

    fn table_ab() -> Arc<SymbolTable> {
        SymbolTable::new(["a", "b"]).unwrap()
    }

    fn rf_int(t: &Arc<SymbolTable>, n: i64) -> RationalFunction {
        RationalFunction::from_int(t, n)
    }

    #[test]
    fn construction_and_degree() {
        let t = table_ab();
        assert_eq!(XPoly::zero(&t).degree(), None);
        assert_eq!(XPoly::one(&t).degree(), Some(0));
        assert_eq!(XPoly::var(&t).degree(), Some(1));
        // trailing zeros trim away
        let p = XPoly::new(
            &t,
            vec![rf_int(&t, 1), RationalFunction::zero(&t), RationalFunction::zero(&t)],
        );
        assert_eq!(p.degree(), Some(0));
    }

    #[test]
    fn product_of_roots_is_monic_with_those_roots() {
        let t = table_ab();
        let a = RationalFunction::symbol(&t, 0);
        let roots = [RationalFunction::zero(&t), rf_int(&t, 1), a.clone()];
        let p = XPoly::from_roots(&t, &roots);
        assert_eq!(p.degree(), Some(3));
        assert!(p.is_monic());
        for r in &roots {
            assert!(p.eval(r).is_zero());
        }
        assert!(!p.eval(&rf_int(&t, -1)).is_zero());
    }

    #[test]
    fn derivative_is_linear_and_leibniz() {
        let t = table_ab();
        let x = XPoly::var(&t);
        let p = &(&x * &x) + &XPoly::constant(rf_int(&t, 3)); // x^2 + 3
        let q = &x - &XPoly::one(&t); // x - 1
        let lhs = (&p * &q).derivative();
        let rhs = &(&p.derivative() * &q) + &(&p * &q.derivative());
        assert_eq!(lhs, rhs);
        assert_eq!(p.derivative().to_string(), "2*x");
    }

    #[test]
    fn display_canonical_forms() {
        let t = table_ab();
        let a = RationalFunction::symbol(&t, 0);
        let b = RationalFunction::symbol(&t, 1);
        let half = RationalFunction::from_rational(&t, rat(1, 2));
        let x = XPoly::var(&t);

        assert_eq!(XPoly::zero(&t).to_string(), "0");
        assert_eq!(XPoly::constant(-&half).to_string(), "-1/2");
        assert_eq!(XPoly::constant(&a - &b).to_string(), "a - b");
        assert_eq!(x.to_string(), "x");
        assert_eq!((&x * &x).to_string(), "x^2");
        assert_eq!(XPoly::linear_root(&half).to_string(), "x - 1/2");
        // multi-term coefficient gets parentheses; single-term does not
        let p = XPoly::new(&t, vec![-&(&(&a + &b) * &half), RationalFunction::one(&t)]);
        assert_eq!(p.to_string(), "x - (a + b)/2");
        let q = XPoly::new(&t, vec![-&a, &a + &b]);
        assert_eq!(q.to_string(), "(a + b)*x - a");
        // rational leading coefficient
        let r = XPoly::new(
            &t,
            vec![rf_int(&t, 0), -&rf_int(&t, 1), RationalFunction::from_rational(&t, rat(3, 2))],
        );
        assert_eq!(r.to_string(), "3/2*x^2 - x");
        // negative leading term
        let s = XPoly::new(&t, vec![half.clone(), -&RationalFunction::one(&t)]);
        assert_eq!(s.to_string(), "-x + 1/2");
    }

    #[test]
    fn eval_f64_matches_rational_eval() {
        let t = SymbolTable::empty();
        let x = XPoly::var(&t);
        let p = &(&x * &x).scale(&RationalFunction::from_rational(&t, rat(3, 2)))
            - &XPoly::constant(RationalFunction::from_int(&t, 2));
        let exact = p.eval(&RationalFunction::from_rational(&t, rat(5, 2)));
        assert_eq!(exact.as_rational(), Some(rat(59, 8)));
        let approx = p.eval_f64(2.5).unwrap();
        assert!((approx - 59.0 / 8.0).abs() < 1e-15);
    }

    #[test]
    fn mixed_tables_are_rejected() {
        let t1 = table_ab();
        let t2 = SymbolTable::new(["c"]).unwrap();
        let p = XPoly::var(&t1);
        let q = XPoly::var(&t2);
        assert!(p.checked_add(&q).is_err());
        assert_eq!(rat_int(1), rat(1, 1));
    }
}
