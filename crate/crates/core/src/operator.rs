//! Second-order Fuchsian operators `Q_top(x) D^2 + Q_mid(x) D + Q_low(x)`
//! with `k+2` finite regular singular points and one at infinity.
//!
//! `Q_top` is the monic product of the linear factors at the singular
//! points; `Q_mid` is pinned by the local exponent at each point (the
//! residue of `Q_mid/Q_top` there); `Q_low` carries the accessory data —
//! it is optional so a family can be handled before its accessory part is
//! known.

use std::fmt;
use std::sync::Arc;

use crate::algebra::rational::rat;
use crate::algebra::rfunc::RationalFunction;
use crate::algebra::symbols::{ensure_same, SymbolTable};
use crate::algebra::xpoly::XPoly;
use crate::error::{Error, Result};

/// The forced lower-coefficient data of a degree-`k` family: the product of
/// the two exponents at infinity and the `k` accessory values.
#[derive(Clone, Debug, PartialEq)]
pub struct Accessory {
    /// Coefficient of `x^k` in `Q_low`.
    pub alpha_beta: RationalFunction,
    /// `rho[i]` is the coefficient of `x^(k-1-i)` in `Q_low`, so `rho`
    /// lists the accessory values in the conventional order rho_1..rho_k.
    pub rho: Vec<RationalFunction>,
}

impl Accessory {
    /// Reads the accessory data off a lower coefficient of degree <= k.
    pub fn from_q_low(q_low: &XPoly, k: usize) -> Result<Self> {
        if let Some(d) = q_low.degree() {
            if d > k {
                return Err(Error::DegreeOverflow { degree: d, max: k });
            }
        }
        Ok(Accessory {
            alpha_beta: q_low.coeff(k).simplify(),
            rho: (1..=k).map(|i| q_low.coeff(k - i).simplify()).collect(),
        })
    }

    /// Rebuilds the lower coefficient polynomial.
    pub fn to_q_low(&self, table: &Arc<SymbolTable>, k: usize) -> XPoly {
        assert_eq!(self.rho.len(), k, "accessory value count");
        let mut coeffs = vec![RationalFunction::zero(table); k + 1];
        coeffs[k] = self.alpha_beta.clone();
        for (i, r) in self.rho.iter().enumerate() {
            coeffs[k - 1 - i] = r.clone();
        }
        XPoly::new(table, coeffs)
    }

    /// In the three-singular-point case the single accessory value is
    /// conventionally quoted with the opposite sign: `q = -rho_1`.
    pub fn q_value(&self) -> Option<RationalFunction> {
        (self.rho.len() == 1).then(|| -&self.rho[0])
    }
}

/// Singular-point and exponent data of an operator family. `singularities`
/// and `exponents` run in the same order; index `i` of `exponents` is the
/// nonzero local exponent at `singularities[i]` (the other local exponent
/// at a finite point is always 0).
#[derive(Clone, Debug)]
pub struct HeunParams {
    table: Arc<SymbolTable>,
    singularities: Vec<RationalFunction>,
    exponents: Vec<RationalFunction>,
    accessory: Option<Accessory>,
}

/// Rejects pairs of singular points that are provably the same constant.
/// Structurally coincident *symbolic* points are allowed through here; they
/// surface later as a singular splitting system.
fn check_constant_coincidence(singularities: &[RationalFunction]) -> Result<()> {
    for i in 0..singularities.len() {
        for j in (i + 1)..singularities.len() {
            if let (Some(a), Some(b)) = (
                singularities[i].as_rational(),
                singularities[j].as_rational(),
            ) {
                if a == b {
                    return Err(Error::CoincidentSingularities { first: i, second: j });
                }
            }
        }
    }
    Ok(())
}

impl HeunParams {
    /// Normalized family: singular points `0, 1, extra[0], ..., extra[k-1]`,
    /// one exponent per point (`k+2` of them), and optionally the accessory
    /// data (`k` values plus the exponent product at infinity).
    pub fn new(
        table: &Arc<SymbolTable>,
        extra_singularities: Vec<RationalFunction>,
        exponents: Vec<RationalFunction>,
        accessory: Option<Accessory>,
    ) -> Result<Self> {
        let k = extra_singularities.len();
        let mut singularities = Vec::with_capacity(k + 2);
        singularities.push(RationalFunction::zero(table));
        singularities.push(RationalFunction::one(table));
        singularities.extend(extra_singularities);
        Self::from_singularities(table, singularities, exponents, accessory)
    }

    /// General-position variant: any list of pairwise distinct singular
    /// points (at least three, so the degree `k` is at least one).
    pub fn from_singularities(
        table: &Arc<SymbolTable>,
        singularities: Vec<RationalFunction>,
        exponents: Vec<RationalFunction>,
        accessory: Option<Accessory>,
    ) -> Result<Self> {
        if singularities.len() < 3 {
            return Err(Error::DomainError {
                msg: format!(
                    "need at least 3 finite singular points, got {}",
                    singularities.len()
                ),
            });
        }
        let k = singularities.len() - 2;
        if exponents.len() != singularities.len() {
            return Err(Error::DomainError {
                msg: format!(
                    "need one exponent per singular point: {} points, {} exponents",
                    singularities.len(),
                    exponents.len()
                ),
            });
        }
        for v in singularities.iter().chain(exponents.iter()) {
            ensure_same(table, v.table())?;
        }
        if let Some(acc) = &accessory {
            ensure_same(table, acc.alpha_beta.table())?;
            if acc.rho.len() != k {
                return Err(Error::DomainError {
                    msg: format!(
                        "accessory needs {k} values, got {}",
                        acc.rho.len()
                    ),
                });
            }
            for r in &acc.rho {
                ensure_same(table, r.table())?;
            }
        }
        check_constant_coincidence(&singularities)?;
        Ok(HeunParams {
            table: Arc::clone(table),
            singularities,
            exponents,
            accessory,
        })
    }

    pub fn table(&self) -> &Arc<SymbolTable> {
        &self.table
    }

    /// Degree of the accessory part; the family has `k + 2` finite points.
    pub fn k(&self) -> usize {
        self.singularities.len() - 2
    }

    pub fn singularities(&self) -> &[RationalFunction] {
        &self.singularities
    }

    pub fn exponents(&self) -> &[RationalFunction] {
        &self.exponents
    }

    pub fn accessory(&self) -> Option<&Accessory> {
        self.accessory.as_ref()
    }

    /// Exponent sum minus one: the sum of the two exponents at infinity.
    pub fn sigma(&self) -> RationalFunction {
        let mut acc = RationalFunction::from_int(&self.table, -1);
        for e in &self.exponents {
            acc = &acc + e;
        }
        acc.simplify()
    }

    /// True when every finite exponent is 1/2.
    pub fn is_half_exponent(&self) -> bool {
        let half = RationalFunction::from_rational(&self.table, rat(1, 2));
        self.exponents.iter().all(|e| *e == half)
    }
}

/// A concrete operator (or family, when `q_low` is absent).
#[derive(Clone, Debug)]
pub struct FuchsOperator {
    q_top: XPoly,
    q_mid: XPoly,
    q_low: Option<XPoly>,
    params: HeunParams,
}

impl FuchsOperator {
    pub fn q_top(&self) -> &XPoly {
        &self.q_top
    }

    pub fn q_mid(&self) -> &XPoly {
        &self.q_mid
    }

    pub fn q_low(&self) -> Result<&XPoly> {
        self.q_low.as_ref().ok_or(Error::MissingAccessory)
    }

    pub fn has_q_low(&self) -> bool {
        self.q_low.is_some()
    }

    pub fn params(&self) -> &HeunParams {
        &self.params
    }

    pub fn table(&self) -> &Arc<SymbolTable> {
        self.params.table()
    }
}

/// Monic product of the linear factors at the given points.
fn top_from_singularities(table: &Arc<SymbolTable>, points: &[RationalFunction]) -> XPoly {
    XPoly::from_roots(table, points)
}

/// The middle coefficient pinned by the exponents:
/// `sum_i e_i * prod_{j != i} (x - s_j)`.
fn mid_from_exponents(
    table: &Arc<SymbolTable>,
    points: &[RationalFunction],
    exponents: &[RationalFunction],
) -> XPoly {
    let mut acc = XPoly::zero(table);
    for (i, e) in exponents.iter().enumerate() {
        let others: Vec<RationalFunction> = points
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, s)| s.clone())
            .collect();
        acc = &acc + &XPoly::from_roots(table, &others).scale(e);
    }
    acc
}

/// Builds the operator for the given family data. When accessory data is
/// present the lower coefficient is materialized from it.
pub fn build_operator(params: HeunParams) -> Result<FuchsOperator> {
    let table = Arc::clone(params.table());
    let q_top = top_from_singularities(&table, params.singularities());
    let q_mid = mid_from_exponents(&table, params.singularities(), params.exponents());
    let q_low = params
        .accessory()
        .map(|acc| acc.to_q_low(&table, params.k()));
    Ok(FuchsOperator {
        q_top,
        q_mid,
        q_low,
        params,
    })
}

/// The all-half-exponent family on `0, 1, extra[0], ..`: every finite
/// exponent is 1/2, which forces `Q_mid = Q_top' / 2`. No accessory data —
/// the factorization step derives the admissible accessory values.
pub fn build_half_exponent_family(
    table: &Arc<SymbolTable>,
    extra_singularities: Vec<RationalFunction>,
) -> Result<FuchsOperator> {
    let n = extra_singularities.len() + 2;
    let half = RationalFunction::from_rational(table, rat(1, 2));
    let exponents = vec![half.clone(); n];
    let params = HeunParams::new(table, extra_singularities, exponents, None)?;
    let op = build_operator(params)?;
    // exponent-1/2 structure: the middle coefficient is half the derivative
    // of the top one; fails only on an implementation bug
    let expected = op.q_top.derivative().scale(&half);
    if !op.q_mid.eq_poly(&expected)? {
        return Err(Error::ConsistencyFailure {
            what: "half-exponent family must satisfy q_mid = q_top'/2".into(),
        });
    }
    Ok(op)
}

/// Coefficientwise exact equality of two operators. Families compare equal
/// to concrete operators only if both sides have the same lower-part state.
pub fn operator_equal(a: &FuchsOperator, b: &FuchsOperator) -> Result<bool> {
    if !a.q_top.eq_poly(&b.q_top)? || !a.q_mid.eq_poly(&b.q_mid)? {
        return Ok(false);
    }
    match (&a.q_low, &b.q_low) {
        (Some(pa), Some(pb)) => pa.eq_poly(pb),
        (None, None) => Ok(true),
        _ => Ok(false),
    }
}

/// Formal adjoint coefficients: for `q2 D^2 + q1 D + q0` the adjoint is
/// `q2 D^2 + (2 q2' - q1) D + (q2'' - q1' + q0)`.
pub fn adjoint_coeffs(q_top: &XPoly, q_mid: &XPoly, q_low: &XPoly) -> (XPoly, XPoly, XPoly) {
    let d_top = q_top.derivative();
    let two = RationalFunction::from_int(q_top.table(), 2);
    let adj_mid = &d_top.scale(&two) - q_mid;
    let adj_low = &(&d_top.derivative() - &q_mid.derivative()) + q_low;
    (q_top.clone(), adj_mid, adj_low)
}

/// Formal adjoint of a concrete operator. Singular points are unchanged;
/// each local exponent `e` maps to `2 - e` (verified against the residues
/// of the adjoint's middle coefficient); the accessory data is re-read off
/// the adjoint's lower coefficient.
pub fn adjoint(op: &FuchsOperator) -> Result<FuchsOperator> {
    let q_low = op.q_low()?;
    let (adj_top, adj_mid, adj_low) = adjoint_coeffs(&op.q_top, &op.q_mid, q_low);
    let table = Arc::clone(op.table());
    let two = RationalFunction::from_int(&table, 2);
    let exponents: Vec<RationalFunction> = op
        .params
        .exponents()
        .iter()
        .map(|e| (&two - e).simplify())
        .collect();
    // cross-check: residue of adj_mid/adj_top at s_i must equal 2 - e_i
    for (i, s) in op.params.singularities().iter().enumerate() {
        let top_prime_at_s = adj_top.derivative().eval(s);
        let lhs = adj_mid.eval(s);
        let rhs = &exponents[i] * &top_prime_at_s;
        if !lhs.eq_rf(&rhs)? {
            return Err(Error::ConsistencyFailure {
                what: format!("adjoint exponent residue at singular point #{i}"),
            });
        }
    }
    let accessory = Accessory::from_q_low(&adj_low, op.params.k())?;
    let params = HeunParams::from_singularities(
        &table,
        op.params.singularities().to_vec(),
        exponents,
        Some(accessory),
    )?;
    Ok(FuchsOperator {
        q_top: adj_top,
        q_mid: adj_mid,
        q_low: Some(adj_low),
        params,
    })
}

impl fmt::Display for FuchsOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})*D^2 + ({})*D", self.q_top, self.q_mid)?;
        match &self.q_low {
            Some(q) => write!(f, " + ({q})"),
            None => write!(f, " + (free accessory part)"),
        }
    }
}

/// One first-order factor `l(x) D + m(x)` where `l` is the monic product of
/// the linear factors at `roots` and `deg m <= deg l - 1`.
#[derive(Clone, Debug)]
pub struct Factor {
    roots: Vec<RationalFunction>,
    l_poly: XPoly,
    m_poly: XPoly,
}

impl Factor {
    pub fn new(
        table: &Arc<SymbolTable>,
        roots: Vec<RationalFunction>,
        m_poly: XPoly,
    ) -> Result<Self> {
        if roots.is_empty() {
            return Err(Error::DomainError {
                msg: "a factor needs at least one linear factor".into(),
            });
        }
        for r in &roots {
            ensure_same(table, r.table())?;
        }
        ensure_same(table, m_poly.table())?;
        if let Some(d) = m_poly.degree() {
            if d > roots.len() - 1 {
                return Err(Error::DegreeOverflow {
                    degree: d,
                    max: roots.len() - 1,
                });
            }
        }
        let l_poly = XPoly::from_roots(table, &roots);
        Ok(Factor {
            roots,
            l_poly,
            m_poly,
        })
    }

    pub fn roots(&self) -> &[RationalFunction] {
        &self.roots
    }

    pub fn l_poly(&self) -> &XPoly {
        &self.l_poly
    }

    pub fn m_poly(&self) -> &XPoly {
        &self.m_poly
    }

    pub fn degree(&self) -> usize {
        self.roots.len()
    }

    /// Coefficient of `m` in its highest admissible slot `x^(deg l - 1)`.
    /// This is the index at infinity carried by the factor.
    pub fn lead_slot(&self) -> RationalFunction {
        self.m_poly.coeff(self.roots.len() - 1)
    }

    pub fn contains_root(&self, point: &RationalFunction) -> bool {
        self.roots.iter().any(|r| r == point)
    }
}

/// Multiplies out `(L D + M)(L̄ D + M̄)` and rebuilds the operator data:
/// singular points are the combined roots (0 and 1 pulled to the front when
/// present), exponents are recovered from residues of the middle
/// coefficient, and the accessory data is read off the lower coefficient.
pub fn expand_factors(left: &Factor, right: &Factor) -> Result<FuchsOperator> {
    let table = Arc::clone(left.l_poly().table());
    ensure_same(&table, right.l_poly().table())?;

    let l = left.l_poly();
    let m = left.m_poly();
    let lbar = right.l_poly();
    let mbar = right.m_poly();

    let q_top = l * lbar;
    let q_mid = &(&(l * &lbar.derivative()) + &(l * mbar)) + &(m * lbar);
    let q_low = &(l * &mbar.derivative()) + &(m * mbar);

    // combined singular points, normalized order: 0, then 1, then the rest
    // in appearance order (left factor first)
    let zero = RationalFunction::zero(&table);
    let one = RationalFunction::one(&table);
    let mut front: Vec<RationalFunction> = Vec::new();
    let mut rest: Vec<RationalFunction> = Vec::new();
    let mut ones: Vec<RationalFunction> = Vec::new();
    for r in left.roots().iter().chain(right.roots()) {
        if *r == zero {
            front.push(r.clone());
        } else if *r == one {
            ones.push(r.clone());
        } else {
            rest.push(r.clone());
        }
    }
    front.extend(ones);
    front.extend(rest);
    let singularities = front;

    let q_top_prime = q_top.derivative();
    let exponents = singularities
        .iter()
        .map(|s| {
            let denom = q_top_prime.eval(s);
            q_mid.eval(s).div(&denom).map(|e| e.simplify())
        })
        .collect::<Result<Vec<_>>>()?;

    let k = singularities.len() - 2;
    let accessory = Accessory::from_q_low(&q_low, k)?;
    let params =
        HeunParams::from_singularities(&table, singularities, exponents, Some(accessory))?;
    Ok(FuchsOperator {
        q_top,
        q_mid,
        q_low: Some(q_low),
        params,
    })
}
