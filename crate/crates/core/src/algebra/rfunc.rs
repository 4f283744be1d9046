//! Rational functions in the parameters: quotients of [`ParamPoly`] values.
//!
//! No multivariate gcd is attempted. Equality is decided by exact
//! cross-multiplication, which is complete; `simplify` only performs the
//! cheap normalizations needed for canonical printing (exact trial division,
//! content extraction, denominator sign).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num::traits::{One, Signed};

use crate::algebra::ppoly::ParamPoly;
use crate::algebra::rational::{rat_to_f64, Rational};
use crate::algebra::symbols::{assert_same, ensure_same, SymbolTable};
use crate::error::{Error, Result};

/// `num / den` with `den` never zero. Arithmetic keeps a modest normal form
/// (constant denominators are folded into the numerator); full canonical
/// form is produced on demand by [`RationalFunction::simplify`].
#[derive(Clone)]
pub struct RationalFunction {
    num: ParamPoly,
    den: ParamPoly,
}

impl RationalFunction {
    pub fn new(num: ParamPoly, den: ParamPoly) -> Result<Self> {
        ensure_same(num.table(), den.table())?;
        if den.is_zero() {
            return Err(Error::DivisionByZero { pos: None });
        }
        Ok(Self::normalized(num, den))
    }

    /// Invariant maintained by arithmetic: zero numerator or constant
    /// denominator collapses the denominator to 1.
    fn normalized(num: ParamPoly, den: ParamPoly) -> Self {
        let table = Arc::clone(num.table());
        if num.is_zero() {
            return RationalFunction {
                num,
                den: ParamPoly::one(&table),
            };
        }
        if let Some(c) = den.as_constant() {
            if c.is_one() {
                return RationalFunction { num, den };
            }
            return RationalFunction {
                num: num.scale(&c.recip()),
                den: ParamPoly::one(&table),
            };
        }
        RationalFunction { num, den }
    }

    pub fn from_poly(p: ParamPoly) -> Self {
        let one = ParamPoly::one(p.table());
        RationalFunction { num: p, den: one }
    }

    pub fn from_rational(table: &Arc<SymbolTable>, value: Rational) -> Self {
        Self::from_poly(ParamPoly::constant(table, value))
    }

    pub fn from_int(table: &Arc<SymbolTable>, value: i64) -> Self {
        Self::from_rational(table, Rational::from_integer(value.into()))
    }

    pub fn symbol(table: &Arc<SymbolTable>, index: usize) -> Self {
        Self::from_poly(ParamPoly::symbol(table, index))
    }

    pub fn zero(table: &Arc<SymbolTable>) -> Self {
        Self::from_poly(ParamPoly::zero(table))
    }

    pub fn one(table: &Arc<SymbolTable>) -> Self {
        Self::from_poly(ParamPoly::one(table))
    }

    pub fn num(&self) -> &ParamPoly {
        &self.num
    }

    pub fn den(&self) -> &ParamPoly {
        &self.den
    }

    pub fn table(&self) -> &Arc<SymbolTable> {
        self.num.table()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        ensure_same(self.table(), other.table())?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        ensure_same(self.table(), other.table())?;
        Ok(self - other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        ensure_same(self.table(), other.table())?;
        Ok(self * other)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        ensure_same(self.table(), other.table())?;
        if other.is_zero() {
            return Err(Error::DivisionByZero { pos: None });
        }
        Ok(Self::normalized(
            &self.num * &other.den,
            &self.den * &other.num,
        ))
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero { pos: None });
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, exp: u32) -> Self {
        RationalFunction::normalized(self.num.pow(exp), self.den.pow(exp))
    }

    /// Exact equality by cross-multiplication: `a/b == c/d` iff `ad == cb`.
    pub fn eq_rf(&self, other: &Self) -> Result<bool> {
        ensure_same(self.table(), other.table())?;
        Ok(&self.num * &other.den == &other.num * &self.den)
    }

    /// Canonical form:
    /// 1. if the denominator divides exactly, fold it in;
    /// 2. pull numeric content so both parts have coprime integer
    ///    coefficients, moving the ratio onto the pair as an integer
    ///    numerator scale and integer denominator scale;
    /// 3. flip both signs if the denominator's leading coefficient is
    ///    negative.
    /// A canonical non-polynomial value therefore has an integer-coefficient
    /// denominator with positive leading coefficient (a plain positive
    /// integer when the denominator is constant).
    pub fn simplify(&self) -> Self {
        let table = self.table();
        if self.num.is_zero() {
            return Self::zero(table);
        }
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        if let Some(q) = num.div_exact(&den) {
            num = q;
            den = ParamPoly::one(table);
        }
        let num_content = num.content();
        let den_content = den.content();
        let ratio = &num_content / &den_content; // positive, reduced
        num = num.scale(&(Rational::from(ratio.numer().clone()) / num_content));
        den = den.scale(&(Rational::from(ratio.denom().clone()) / den_content));
        if den
            .leading_term()
            .map(|(_, c)| c.is_negative())
            .unwrap_or(false)
        {
            num = -&num;
            den = -&den;
        }
        RationalFunction { num, den }
    }

    /// `Some(value)` when the function reduces to a constant.
    pub fn as_rational(&self) -> Option<Rational> {
        if let (Some(n), Some(d)) = (self.num.as_constant(), self.den.as_constant()) {
            return Some(n / d);
        }
        let s = self.simplify();
        match (s.num.as_constant(), s.den.as_constant()) {
            (Some(n), Some(d)) => Some(n / d),
            _ => None,
        }
    }

    /// Nearest double. Errors when parameters are still free or the value
    /// overflows the double range.
    pub fn to_f64(&self) -> Result<f64> {
        let value = self.as_rational().ok_or(Error::SymbolicParameters)?;
        rat_to_f64(&value).ok_or(Error::DomainError {
            msg: "value overflows the double range".into(),
        })
    }

    /// Binds parameters to rationals; errors if the denominator vanishes.
    pub fn substitute(&self, values: &[Option<Rational>]) -> Result<Self> {
        let num = self.num.substitute(values);
        let den = self.den.substitute(values);
        Self::new(num, den)
    }

    pub fn project(&self, target: &Arc<SymbolTable>) -> Result<Self> {
        Self::new(self.num.project(target)?, self.den.project(target)?)
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        assert_same(self.table(), other.table());
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        assert_same(self.table(), rhs.table());
        if self.den == rhs.den {
            return RationalFunction::normalized(&self.num + &rhs.num, self.den.clone());
        }
        RationalFunction::normalized(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        assert_same(self.table(), rhs.table());
        if self.den == rhs.den {
            return RationalFunction::normalized(&self.num - &rhs.num, self.den.clone());
        }
        RationalFunction::normalized(
            &(&self.num * &rhs.den) - &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        assert_same(self.table(), rhs.table());
        RationalFunction::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for RationalFunction {
    /// Canonical print: `N` when the denominator is 1 after simplification;
    /// otherwise `N/D` with `N` parenthesized iff it has several terms and
    /// `D` parenthesized unless it is a positive integer.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.simplify();
        if s.den.is_one() {
            return write!(f, "{}", s.num);
        }
        let num_str = if s.num.term_count() > 1 {
            format!("({})", s.num)
        } else {
            s.num.to_string()
        };
        let den_str = match s.den.as_constant() {
            Some(c) => c.to_string(),
            None => format!("({})", s.den),
        };
        write!(f, "{num_str}/{den_str}")
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}
