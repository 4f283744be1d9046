//! Splits an operator family `Q_top D^2 + Q_mid D + Q_low` into
//! `(L D + M)(L̄ D + M̄)` for every distribution of the singular points
//! over the two first-order factors.
//!
//! For a proper splitting (both sides nonempty) `L` and `L̄` are the monic
//! products of their assigned linear factors, and matching coefficients in
//! `L M̄ + M L̄ = Q_mid - L L̄'` gives a square linear system for the
//! unknown coefficients of `M` (degree `deg L - 1`) and `M̄` (degree
//! `deg L̄ - 1`). The system is nonsingular whenever the singular points
//! are pairwise distinct, so each splitting forces a unique accessory part
//! `Q_low = L M̄' + M M̄`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;

use crate::algebra::rfunc::RationalFunction;
use crate::algebra::symbols::SymbolTable;
use crate::algebra::xpoly::XPoly;
use crate::error::{Error, Result};
use crate::operator::{
    adjoint, build_half_exponent_family, build_operator, expand_factors, operator_equal,
    Accessory, Factor, FuchsOperator, HeunParams,
};

/// Assignment of each singular point to the left (`1`) or right (`0`)
/// factor. Bit `i` corresponds to singular point `i` in family order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SplittingMask {
    bits: Vec<bool>,
}

impl SplittingMask {
    /// Mask from the binary value `v`: bit `i` of `v` is singular point `i`.
    pub fn from_value(point_count: usize, v: u64) -> Self {
        assert!(point_count <= 63, "mask width");
        assert!(
            v < (1u64 << point_count),
            "mask value {v} out of range for {point_count} points"
        );
        SplittingMask {
            bits: (0..point_count).map(|i| (v >> i) & 1 == 1).collect(),
        }
    }

    pub fn value(&self) -> u64 {
        self.bits
            .iter()
            .enumerate()
            .map(|(i, &b)| if b { 1u64 << i } else { 0 })
            .sum()
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn left_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Proper means both factors receive at least one singular point.
    pub fn is_proper(&self) -> bool {
        let ones = self.left_count();
        ones > 0 && ones < self.bits.len()
    }

    pub fn complement(&self) -> Self {
        SplittingMask {
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }
}

impl fmt::Display for SplittingMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl FromStr for SplittingMask {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::MaskMismatch {
                    expected: "a string of 0s and 1s".into(),
                    got: s.to_string(),
                }),
            })
            .collect::<Result<Vec<bool>>>()?;
        if bits.is_empty() {
            return Err(Error::MaskMismatch {
                expected: "a non-empty string of 0s and 1s".into(),
                got: s.to_string(),
            });
        }
        Ok(SplittingMask { bits })
    }
}

/// All masks for `k + 2` singular points in ascending binary value,
/// optionally including the two one-sided (trivial) masks.
pub fn enumerate_splittings(k: usize, include_trivial: bool) -> Vec<SplittingMask> {
    let n = k + 2;
    assert!(n <= 24, "splitting enumeration capped at 24 points");
    let top = 1u64 << n;
    (0..top)
        .map(|v| SplittingMask::from_value(n, v))
        .filter(|m| include_trivial || m.is_proper())
        .collect()
}

/// An operator family: singular points and exponents fixed, accessory part
/// free. This is the input the factorization engine consumes.
#[derive(Clone, Debug)]
pub struct FamilySpec {
    op: FuchsOperator,
}

impl FamilySpec {
    /// Family on the normalized points `0, 1, extra[0], ..` with one
    /// exponent per point.
    pub fn new(
        table: &Arc<SymbolTable>,
        extra_singularities: Vec<RationalFunction>,
        exponents: Vec<RationalFunction>,
    ) -> Result<Self> {
        let params = HeunParams::new(table, extra_singularities, exponents, None)?;
        Ok(FamilySpec {
            op: build_operator(params)?,
        })
    }

    /// All-half-exponent family on `0, 1, extra[0], ..`.
    pub fn new_half_exponent(
        table: &Arc<SymbolTable>,
        extra_singularities: Vec<RationalFunction>,
    ) -> Result<Self> {
        Ok(FamilySpec {
            op: build_half_exponent_family(table, extra_singularities)?,
        })
    }

    pub fn table(&self) -> &Arc<SymbolTable> {
        self.op.table()
    }

    pub fn k(&self) -> usize {
        self.op.params().k()
    }

    pub fn singularities(&self) -> &[RationalFunction] {
        self.op.params().singularities()
    }

    pub fn exponents(&self) -> &[RationalFunction] {
        self.op.params().exponents()
    }

    pub fn sigma(&self) -> RationalFunction {
        self.op.params().sigma()
    }

    pub fn is_half_exponent(&self) -> bool {
        self.op.params().is_half_exponent()
    }

    pub fn q_top(&self) -> &XPoly {
        self.op.q_top()
    }

    pub fn q_mid(&self) -> &XPoly {
        self.op.q_mid()
    }

    /// The concrete operator obtained by pinning the accessory part.
    pub fn operator_with(&self, accessory: Accessory) -> Result<FuchsOperator> {
        let params = HeunParams::from_singularities(
            self.table(),
            self.singularities().to_vec(),
            self.exponents().to_vec(),
            Some(accessory),
        )?;
        build_operator(params)
    }
}

/// A successful proper splitting: the two factors, the accessory data they
/// force, the index pair at infinity, and the pinned operator.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub mask: SplittingMask,
    pub left: Factor,
    pub right: Factor,
    pub accessory: Accessory,
    /// `(nu_right, nu_other)`: the index carried by the right factor's lead
    /// slot and its partner `sigma - nu_right`. Their product is the
    /// `x^k` coefficient of the accessory part.
    pub index_pair: (RationalFunction, RationalFunction),
    pub operator: FuchsOperator,
}

/// A one-sided splitting (all points in one factor). These always succeed
/// and integrate directly: one factor is order one with `l = 1`.
#[derive(Clone, Debug)]
pub struct TrivialSplitting {
    pub mask: SplittingMask,
    pub l_poly: XPoly,
    pub m_poly: XPoly,
    pub lbar_poly: XPoly,
    pub mbar_poly: XPoly,
    pub accessory: Accessory,
    pub index_pair: (RationalFunction, RationalFunction),
    pub operator: FuchsOperator,
}

/// Outcome of one mask.
#[derive(Clone, Debug)]
pub enum SplittingOutcome {
    Proper(Factorization),
    Trivial(TrivialSplitting),
    NotFactorizable { mask: SplittingMask, reason: String },
    Singular { mask: SplittingMask },
}

impl SplittingOutcome {
    pub fn mask(&self) -> &SplittingMask {
        match self {
            SplittingOutcome::Proper(f) => &f.mask,
            SplittingOutcome::Trivial(t) => &t.mask,
            SplittingOutcome::NotFactorizable { mask, .. } => mask,
            SplittingOutcome::Singular { mask } => mask,
        }
    }

    pub fn status(&self) -> &'static str {
        match self {
            SplittingOutcome::Proper(_) => "ok",
            SplittingOutcome::Trivial(_) => "trivial-integrable",
            SplittingOutcome::NotFactorizable { .. } => "not-factorizable",
            SplittingOutcome::Singular { .. } => "singular",
        }
    }
}

fn index_pair_from(
    sigma: &RationalFunction,
    right_lead_slot: &RationalFunction,
) -> (RationalFunction, RationalFunction) {
    let nu_right = right_lead_slot.simplify();
    let nu_other = (sigma - &nu_right).simplify();
    (nu_right, nu_other)
}

/// Verifies `nu_right * nu_other == alpha_beta`; holds automatically for
/// every valid splitting, so a failure indicates an engine bug.
fn check_index_product(
    index_pair: &(RationalFunction, RationalFunction),
    alpha_beta: &RationalFunction,
) -> Result<()> {
    let product = &index_pair.0 * &index_pair.1;
    if product.eq_rf(alpha_beta)? {
        Ok(())
    } else {
        Err(Error::ConsistencyFailure {
            what: "index pair product must equal the x^k accessory coefficient".into(),
        })
    }
}

/// The index pair at infinity of a factorization, recomputed from its parts
/// and cross-checked against the accessory data.
pub fn infinity_indices(f: &Factorization) -> Result<(RationalFunction, RationalFunction)> {
    let sigma = f.operator.params().sigma();
    let pair = index_pair_from(&sigma, &f.right.lead_slot());
    check_index_product(&pair, &f.accessory.alpha_beta)?;
    Ok(pair)
}

fn validate_mask(family: &FamilySpec, mask: &SplittingMask) -> Result<()> {
    let n = family.k() + 2;
    if mask.len() != n {
        return Err(Error::MaskMismatch {
            expected: format!("{n} bits"),
            got: format!("{} bits ({mask})", mask.len()),
        });
    }
    Ok(())
}

/// True when two singular points are exactly equal as rational functions of
/// the parameters. Constant coincidences are rejected at family
/// construction, so this only fires for symbolic coincidences (`a` vs `a`);
/// such a family is degenerate and every splitting reports
/// [`Error::SingularSystem`].
fn symbolically_degenerate(family: &FamilySpec) -> Result<bool> {
    let sings = family.singularities();
    for i in 0..sings.len() {
        for j in (i + 1)..sings.len() {
            if sings[i].eq_rf(&sings[j])? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Solves one proper splitting exactly. Errors with
/// [`Error::SingularSystem`] when the coefficient-matching system is
/// singular, which happens exactly when two singular points coincide
/// symbolically.
pub fn solve_splitting(family: &FamilySpec, mask: &SplittingMask) -> Result<Factorization> {
    validate_mask(family, mask)?;
    if !mask.is_proper() {
        return Err(Error::MaskMismatch {
            expected: "a proper mask (both factors nonempty)".into(),
            got: mask.to_string(),
        });
    }
    if symbolically_degenerate(family)? {
        return Err(Error::SingularSystem);
    }
    let table = family.table();
    let n = family.k() + 2;
    let mut left_roots = Vec::new();
    let mut right_roots = Vec::new();
    for (i, s) in family.singularities().iter().enumerate() {
        if mask.bit(i) {
            left_roots.push(s.clone());
        } else {
            right_roots.push(s.clone());
        }
    }
    let m_left = left_roots.len();
    let m_right = right_roots.len();
    let l = XPoly::from_roots(table, &left_roots);
    let lbar = XPoly::from_roots(table, &right_roots);

    // L M̄ + M L̄ = Q_mid - L L̄', matched coefficientwise in x^0..x^(n-1).
    // Unknowns: m_left coefficients of M, then m_right coefficients of M̄.
    let rhs_poly = family.q_mid() - &(&l * &lbar.derivative());
    let mut matrix: Vec<Vec<RationalFunction>> = Vec::with_capacity(n);
    let mut rhs: Vec<RationalFunction> = Vec::with_capacity(n);
    for p in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..m_left {
            // column for coefficient j of M, multiplied by L̄
            row.push(if p >= j {
                lbar.coeff(p - j)
            } else {
                RationalFunction::zero(table)
            });
        }
        for j in 0..m_right {
            // column for coefficient j of M̄, multiplied by L
            row.push(if p >= j {
                l.coeff(p - j)
            } else {
                RationalFunction::zero(table)
            });
        }
        matrix.push(row);
        rhs.push(rhs_poly.coeff(p));
    }
    let solution = crate::algebra::linsolve::solve(&matrix, &rhs)?;

    let m_poly = XPoly::new(table, solution[..m_left].to_vec());
    let mbar_poly = XPoly::new(table, solution[m_left..].to_vec());
    let left = Factor::new(table, left_roots, m_poly)?;
    let right = Factor::new(table, right_roots, mbar_poly)?;

    // round trip: multiplying the factors back must reproduce the family
    // with the forced accessory part
    let expanded = expand_factors(&left, &right)?;
    let accessory = expanded
        .params()
        .accessory()
        .expect("expansion always carries accessory data")
        .clone();
    let pinned = family.operator_with(accessory.clone())?;
    if !operator_equal(&expanded, &pinned)? {
        return Err(Error::ConsistencyFailure {
            what: format!("round trip for mask {mask} does not reproduce the family"),
        });
    }

    let index_pair = index_pair_from(&family.sigma(), &right.lead_slot());
    check_index_product(&index_pair, &accessory.alpha_beta)?;

    Ok(Factorization {
        mask: mask.clone(),
        left,
        right,
        accessory,
        index_pair,
        operator: pinned,
    })
}

/// Handles the two one-sided masks. The empty-left mask gives
/// `(D)(Q_top D + (Q_mid - Q_top'))`; the full-left mask gives
/// `(Q_top D + Q_mid)(D)`. Both integrate by quadrature alone.
pub fn trivial_splitting(family: &FamilySpec, mask: &SplittingMask) -> Result<SplittingOutcome> {
    validate_mask(family, mask)?;
    if mask.is_proper() {
        return Err(Error::MaskMismatch {
            expected: "a one-sided mask".into(),
            got: mask.to_string(),
        });
    }
    if symbolically_degenerate(family)? {
        return Ok(SplittingOutcome::Singular { mask: mask.clone() });
    }
    let table = family.table();
    let k = family.k();
    let n = k + 2;
    let all_left = mask.left_count() == n;

    let (l_poly, m_poly, lbar_poly, mbar_poly) = if all_left {
        (
            family.q_top().clone(),
            family.q_mid().clone(),
            XPoly::one(table),
            XPoly::zero(table),
        )
    } else {
        (
            XPoly::one(table),
            XPoly::zero(table),
            family.q_top().clone(),
            family.q_mid() - &family.q_top().derivative(),
        )
    };

    // q relations for (l D + m)(l̄ D + m̄); the first two must reproduce
    // the family, the third defines the forced accessory part
    let top = &l_poly * &lbar_poly;
    let mid = &(&(&l_poly * &lbar_poly.derivative()) + &(&l_poly * &mbar_poly))
        + &(&m_poly * &lbar_poly);
    let low = &(&l_poly * &mbar_poly.derivative()) + &(&m_poly * &mbar_poly);
    if !top.eq_poly(family.q_top())? || !mid.eq_poly(family.q_mid())? {
        return Ok(SplittingOutcome::NotFactorizable {
            mask: mask.clone(),
            reason: "one-sided product does not reproduce the family".into(),
        });
    }
    let accessory = Accessory::from_q_low(&low, k)?;

    let sigma = family.sigma();
    let nu_right = if all_left {
        // right factor is plain D: its lead slot is empty
        RationalFunction::zero(table)
    } else {
        mbar_poly.coeff(n - 1).simplify()
    };
    let index_pair = index_pair_from(&sigma, &nu_right);
    check_index_product(&index_pair, &accessory.alpha_beta)?;

    let operator = family.operator_with(accessory.clone())?;
    Ok(SplittingOutcome::Trivial(TrivialSplitting {
        mask: mask.clone(),
        l_poly,
        m_poly,
        lbar_poly,
        mbar_poly,
        accessory,
        index_pair,
        operator,
    }))
}

/// Factorizes the family under every mask, in ascending mask value. Masks
/// whose system is singular yield a `Singular` outcome instead of aborting
/// the run; any other failure aborts.
pub fn factorize_all(
    family: &FamilySpec,
    include_trivial: bool,
) -> Result<Vec<SplittingOutcome>> {
    let masks = enumerate_splittings(family.k(), include_trivial);
    masks
        .into_par_iter()
        .map(|mask| {
            if !mask.is_proper() {
                return trivial_splitting(family, &mask);
            }
            match solve_splitting(family, &mask) {
                Ok(f) => Ok(SplittingOutcome::Proper(f)),
                Err(Error::SingularSystem) => Ok(SplittingOutcome::Singular { mask }),
                Err(other) => Err(other),
            }
        })
        .collect()
}

/// The factorization of the Lagrange adjoint. The factors trade places and
/// the connection polynomials become `l' - m` of the old factors:
/// `H* = (L̄ D + (L̄' - M̄))(L D + (L' - M))`. The mask complements, and
/// multiplying back must reproduce the adjoint operator exactly.
pub fn adjoint_factorization(f: &Factorization) -> Result<Factorization> {
    let table = Arc::clone(f.operator.table());
    let new_left_m = &f.right.l_poly().derivative() - f.right.m_poly();
    let new_right_m = &f.left.l_poly().derivative() - f.left.m_poly();
    let new_left = Factor::new(&table, f.right.roots().to_vec(), new_left_m)?;
    let new_right = Factor::new(&table, f.left.roots().to_vec(), new_right_m)?;

    let adj_op = adjoint(&f.operator)?;
    let expanded = expand_factors(&new_left, &new_right)?;
    if !operator_equal(&expanded, &adj_op)? {
        return Err(Error::ConsistencyFailure {
            what: "adjoint factorization must expand to the adjoint operator".into(),
        });
    }
    let accessory = adj_op
        .params()
        .accessory()
        .expect("adjoint of a pinned operator carries accessory data")
        .clone();
    let index_pair = index_pair_from(&adj_op.params().sigma(), &new_right.lead_slot());
    check_index_product(&index_pair, &accessory.alpha_beta)?;

    Ok(Factorization {
        mask: f.mask.complement(),
        left: new_left,
        right: new_right,
        accessory,
        index_pair,
        operator: adj_op,
    })
}

/// Half-exponent swap symmetry: for an all-half-exponent family the
/// complementary mask's factorization has `M_c = -M̄` and `M̄_c = -M`.
/// Errors with [`Error::NotLame`] for other families and
/// [`Error::MaskMismatch`] when the masks are not complementary.
pub fn swap_partner_check(f: &Factorization, g: &Factorization) -> Result<bool> {
    if !f.operator.params().is_half_exponent() || !g.operator.params().is_half_exponent() {
        return Err(Error::NotLame);
    }
    if g.mask != f.mask.complement() {
        return Err(Error::MaskMismatch {
            expected: f.mask.complement().to_string(),
            got: g.mask.to_string(),
        });
    }
    Ok(g.left.m_poly().eq_poly(&(-f.right.m_poly()))?
        && g.right.m_poly().eq_poly(&(-f.left.m_poly()))?)
}

/// Half-exponent antisymmetry of the connection polynomials:
/// `L M̄ + M L̄ = (L' L̄ - L L̄') / 2`.
pub fn half_exponent_antisymmetry(f: &Factorization) -> Result<bool> {
    if !f.operator.params().is_half_exponent() {
        return Err(Error::NotLame);
    }
    let l = f.left.l_poly();
    let m = f.left.m_poly();
    let lbar = f.right.l_poly();
    let mbar = f.right.m_poly();
    let lhs = &(l * mbar) + &(m * lbar);
    let half = RationalFunction::from_rational(f.operator.table(), crate::algebra::rat(1, 2));
    let rhs = (&(&l.derivative() * lbar) - &(l * &lbar.derivative())).scale(&half);
    lhs.eq_poly(&rhs)
}

/// For the all-half-exponent three-point case the `x^k` accessory
/// coefficient is conventionally written `-l(l+1)/4`; this returns the
/// nonnegative rational `l` when one exists.
pub fn half_exponent_l_value(alpha_beta: &RationalFunction) -> Option<crate::algebra::Rational> {
    use crate::algebra::{rat, rat_int, rat_sqrt};
    let ab = alpha_beta.as_rational()?;
    // l(l+1) = -4*ab  =>  l = (-1 + sqrt(1 - 16 ab)) / 2
    let disc = rat_int(1) - rat_int(16) * ab;
    let root = rat_sqrt(&disc)?;
    let l = (root - rat_int(1)) * rat(1, 2);
    use num::traits::Signed;
    (!l.is_negative()).then_some(l)
}
