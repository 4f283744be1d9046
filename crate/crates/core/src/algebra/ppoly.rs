//! Multivariate polynomials in the declared parameters, with exact rational
//! coefficients.
//!
//! Terms live in a `BTreeMap` keyed by graded-lexicographic monomial order,
//! so every polynomial has exactly one representation and structural
//! equality is mathematical equality.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num::bigint::BigInt;
use num::traits::{One, Signed, Zero};
use num::Integer;

use crate::algebra::rational::Rational;
use crate::algebra::symbols::{assert_same, ensure_same, SymbolTable};
use crate::error::{Error, Result};

/// Exponent vector over the table's symbols, ordered graded-lex: higher total
/// degree first, ties broken by the leftmost differing exponent (larger wins).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    fn constant(len: usize) -> Self {
        Monomial(vec![0; len])
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Self) -> Self {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Componentwise difference, or `None` if any exponent would go negative.
    fn try_div(&self, other: &Self) -> Option<Self> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<u32>>>()
            .map(Monomial)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in the table's parameters. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct ParamPoly {
    table: Arc<SymbolTable>,
    terms: BTreeMap<Monomial, Rational>,
}

impl ParamPoly {
    pub fn zero(table: &Arc<SymbolTable>) -> Self {
        ParamPoly {
            table: Arc::clone(table),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(table: &Arc<SymbolTable>) -> Self {
        Self::constant(table, Rational::one())
    }

    pub fn constant(table: &Arc<SymbolTable>, value: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !value.is_zero() {
            terms.insert(Monomial::constant(table.len()), value);
        }
        ParamPoly {
            table: Arc::clone(table),
            terms,
        }
    }

    /// The `index`-th declared parameter as a polynomial.
    pub fn symbol(table: &Arc<SymbolTable>, index: usize) -> Self {
        assert!(
            index < table.len(),
            "symbol index {index} out of range for table of {} names",
            table.len()
        );
        let mut exps = vec![0; table.len()];
        exps[index] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(Monomial(exps), Rational::one());
        ParamPoly {
            table: Arc::clone(table),
            terms,
        }
    }

    fn from_terms(table: Arc<SymbolTable>, terms: BTreeMap<Monomial, Rational>) -> Self {
        let mut p = ParamPoly { table, terms };
        p.terms.retain(|_, c| !c.is_zero());
        p
    }

    pub fn table(&self) -> &Arc<SymbolTable> {
        &self.table
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_constant().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Greatest term in graded-lex order, with its coefficient.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(Monomial::total_degree)
            .max()
            .unwrap_or(0)
    }

    /// Terms in descending graded-lex order (canonical print order).
    pub fn terms_desc(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return Self::zero(&self.table);
        }
        ParamPoly {
            table: Arc::clone(&self.table),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * factor))
                .collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one(&self.table);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
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

    /// Positive rational `g` such that `self / g` has coprime integer
    /// coefficients. Returns 1 for the zero polynomial.
    pub fn content(&self) -> Rational {
        if self.is_zero() {
            return Rational::one();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(&c.numer().abs());
            den_lcm = den_lcm.lcm(c.denom());
        }
        Rational::new(num_gcd, den_lcm)
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a
    /// remainder. Division by zero is `None`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        assert_same(&self.table, &divisor.table);
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero(&self.table));
        }
        let (div_mono, div_coeff) = {
            let (m, c) = divisor.leading_term().unwrap();
            (m.clone(), c.clone())
        };
        let mut remainder = self.clone();
        let mut quotient = BTreeMap::new();
        while let Some((rm, rc)) = remainder.leading_term() {
            let qm = rm.try_div(&div_mono)?;
            let qc = rc / &div_coeff;
            let term = ParamPoly::from_terms(
                Arc::clone(&self.table),
                [(qm.clone(), qc.clone())].into_iter().collect(),
            );
            remainder = &remainder - &(&term * divisor);
            quotient.insert(qm, qc);
        }
        Some(ParamPoly::from_terms(Arc::clone(&self.table), quotient))
    }

    /// Replaces each parameter that has a binding with the given rational.
    /// The result still lives over the same table.
    pub fn substitute(&self, values: &[Option<Rational>]) -> Self {
        assert_eq!(values.len(), self.table.len(), "binding vector length");
        let mut terms: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut exps = m.exponents().to_vec();
            for (i, value) in values.iter().enumerate() {
                if let Some(v) = value {
                    for _ in 0..exps[i] {
                        coeff *= v;
                    }
                    exps[i] = 0;
                }
            }
            if coeff.is_zero() {
                continue;
            }
            *terms.entry(Monomial(exps)).or_insert_with(Rational::zero) += coeff;
        }
        terms.retain(|_, c| !c.is_zero());
        ParamPoly {
            table: Arc::clone(&self.table),
            terms,
        }
    }

    /// Re-expresses the polynomial over `target`, matching symbols by name.
    /// Symbols that actually occur must exist in `target`.
    pub fn project(&self, target: &Arc<SymbolTable>) -> Result<Self> {
        let mut index_map: Vec<Option<usize>> = Vec::with_capacity(self.table.len());
        for name in self.table.names() {
            index_map.push(target.index_of(name));
        }
        let mut terms: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut exps = vec![0u32; target.len()];
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match index_map[i] {
                    Some(j) => exps[j] += e,
                    None => {
                        return Err(Error::UnknownSymbol {
                            name: self.table.name(i).to_string(),
                            pos: 0,
                        })
                    }
                }
            }
            *terms.entry(Monomial(exps)).or_insert_with(Rational::zero) += c.clone();
        }
        terms.retain(|_, c| !c.is_zero());
        Ok(ParamPoly {
            table: Arc::clone(target),
            terms,
        })
    }
}

impl Add for &ParamPoly {
    type Output = ParamPoly;
    fn add(self, rhs: &ParamPoly) -> ParamPoly {
        assert_same(&self.table, &rhs.table);
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            let slot = terms.entry(m.clone()).or_insert_with(Rational::zero);
            *slot += c;
        }
        ParamPoly::from_terms(Arc::clone(&self.table), terms)
    }
}

impl Sub for &ParamPoly {
    type Output = ParamPoly;
    fn sub(self, rhs: &ParamPoly) -> ParamPoly {
        assert_same(&self.table, &rhs.table);
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            let slot = terms.entry(m.clone()).or_insert_with(Rational::zero);
            *slot -= c;
        }
        ParamPoly::from_terms(Arc::clone(&self.table), terms)
    }
}

impl Neg for &ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        ParamPoly {
            table: Arc::clone(&self.table),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &ParamPoly {
    type Output = ParamPoly;
    fn mul(self, rhs: &ParamPoly) -> ParamPoly {
        assert_same(&self.table, &rhs.table);
        let mut terms: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = ma.mul(mb);
                let slot = terms.entry(m).or_insert_with(Rational::zero);
                *slot += ca * cb;
            }
        }
        ParamPoly::from_terms(Arc::clone(&self.table), terms)
    }
}

impl fmt::Display for ParamPoly {
    /// Canonical form: terms in descending graded-lex order; coefficient
    /// magnitudes as reduced fractions; `1*` suppressed before symbols;
    /// exponents as `sym^e`; signs rendered as ` + ` / ` - ` joiners.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms_desc().enumerate() {
            let negative = c.is_negative();
            let magnitude = c.abs();
            let mut parts: Vec<String> = Vec::new();
            for (si, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => parts.push(self.table.name(si).to_string()),
                    _ => parts.push(format!("{}^{}", self.table.name(si), e)),
                }
            }
            let body = if parts.is_empty() {
                magnitude.to_string()
            } else if magnitude.is_one() {
                parts.join("*")
            } else {
                format!("{}*{}", magnitude, parts.join("*"))
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

impl fmt::Debug for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ParamPoly({self})")
    }
}
