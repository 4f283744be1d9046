//! Closed-form solutions attached to a factorization, and their numeric
//! verification.
//!
//! The right factor `L̄ D + M̄` has the power-product solution
//! `y_1 = prod_s (x - s)^(mu_s)` over its roots, with
//! `mu_s = -M̄(s) / L̄'(s)`; `y_1` automatically solves the full
//! second-order equation. A second, independent solution follows by
//! reduction of order: `y_2 = y_1 * integral(W / y_1^2)` where the
//! Wronskian weight is `W = prod (x - s)^(-e_s)` over all singular points.

use std::fmt;
use std::sync::Arc;

use crate::algebra::rfunc::RationalFunction;
use crate::algebra::symbols::{ensure_same, SymbolTable};
use crate::algebra::xpoly::XPoly;
use crate::error::{Error, Result};
use crate::factorize::{Factorization, TrivialSplitting};
use crate::operator::FuchsOperator;

/// `prod_i (x - root_i)^(exponent_i)`, with exact rational-function data.
#[derive(Clone, Debug)]
pub struct PowerProduct {
    table: Arc<SymbolTable>,
    factors: Vec<(RationalFunction, RationalFunction)>,
}

impl PowerProduct {
    pub fn new(
        table: &Arc<SymbolTable>,
        factors: Vec<(RationalFunction, RationalFunction)>,
    ) -> Result<Self> {
        for (root, exponent) in &factors {
            ensure_same(table, root.table())?;
            ensure_same(table, exponent.table())?;
        }
        Ok(PowerProduct {
            table: Arc::clone(table),
            factors,
        })
    }

    pub fn table(&self) -> &Arc<SymbolTable> {
        &self.table
    }

    /// `(root, exponent)` pairs.
    pub fn factors(&self) -> &[(RationalFunction, RationalFunction)] {
        &self.factors
    }

    /// Numeric value `prod |x - root|^exponent`. On the intervals between
    /// real singular points this absolute-value form is a real solution of
    /// the real equation. All roots and exponents must be parameter-free.
    pub fn eval_f64(&self, x: f64) -> Result<f64> {
        let mut acc = 1.0;
        for (root, exponent) in &self.factors {
            let r = root.to_f64()?;
            let e = exponent.to_f64()?;
            let base = (x - r).abs();
            if base == 0.0 && e < 0.0 {
                return Err(Error::DomainError {
                    msg: format!("evaluation at the singular point x = {r}"),
                });
            }
            acc *= base.powf(e);
        }
        Ok(acc)
    }

    /// Logarithmic derivative `sum exponent / (x - root)` at a double.
    pub fn log_deriv_f64(&self, x: f64) -> Result<f64> {
        let mut acc = 0.0;
        for (root, exponent) in &self.factors {
            let r = root.to_f64()?;
            let e = exponent.to_f64()?;
            acc += e / (x - r);
        }
        Ok(acc)
    }

    /// Derivative of the logarithmic derivative: `-sum exponent/(x-root)^2`.
    pub fn log_deriv_prime_f64(&self, x: f64) -> Result<f64> {
        let mut acc = 0.0;
        for (root, exponent) in &self.factors {
            let r = root.to_f64()?;
            let e = exponent.to_f64()?;
            acc -= e / ((x - r) * (x - r));
        }
        Ok(acc)
    }

    /// First derivative value at `x` (via the logarithmic derivative).
    pub fn deriv_f64(&self, x: f64) -> Result<f64> {
        Ok(self.eval_f64(x)? * self.log_deriv_f64(x)?)
    }

    /// Second derivative value at `x`.
    pub fn deriv2_f64(&self, x: f64) -> Result<f64> {
        let y = self.eval_f64(x)?;
        let s = self.log_deriv_f64(x)?;
        let sp = self.log_deriv_prime_f64(x)?;
        Ok(y * (s * s + sp))
    }
}

impl fmt::Display for PowerProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let mut parts = Vec::with_capacity(self.factors.len());
        for (root, exponent) in &self.factors {
            let base = if root.is_zero() {
                "x".to_string()
            } else {
                format!("({})", XPoly::linear_root(root))
            };
            let e = exponent.simplify();
            let part = if e.is_one() {
                base
            } else {
                format!("{base}^({e})")
            };
            parts.push(part);
        }
        write!(f, "{}", parts.join("*"))
    }
}

/// Exponent `mu_s = -M̄(s) / L̄'(s)` for each root `s` of the right factor;
/// the denominator is the product of `s - t` over the other roots.
fn exponents_at_roots(
    table: &Arc<SymbolTable>,
    roots: &[RationalFunction],
    mbar: &XPoly,
) -> Result<Vec<(RationalFunction, RationalFunction)>> {
    let mut factors = Vec::with_capacity(roots.len());
    for (i, s) in roots.iter().enumerate() {
        let mut denom = RationalFunction::one(table);
        for (j, t) in roots.iter().enumerate() {
            if i != j {
                denom = &denom * &(s - t);
            }
        }
        let mu = (-&mbar.eval(s)).div(&denom)?.simplify();
        factors.push((s.clone(), mu));
    }
    Ok(factors)
}

/// The power-product solution annihilated by the right factor of a proper
/// splitting (and therefore by the full operator).
pub fn right_solution(f: &Factorization) -> Result<PowerProduct> {
    let table = f.operator.table();
    PowerProduct::new(
        table,
        exponents_at_roots(table, f.right.roots(), f.right.m_poly())?,
    )
}

/// Same construction for a one-sided splitting. The all-left mask has a
/// plain `D` as right factor, whose solution is the constant 1 (an empty
/// product); the all-right mask yields exponents `1 - e_s` at every point.
pub fn trivial_right_solution(t: &TrivialSplitting) -> Result<PowerProduct> {
    let table = t.operator.table();
    if t.lbar_poly.degree() == Some(0) {
        return PowerProduct::new(table, Vec::new());
    }
    let roots = t.operator.params().singularities().to_vec();
    PowerProduct::new(table, exponents_at_roots(table, &roots, &t.mbar_poly)?)
}

/// Verifies exactly that the operator annihilates the power product.
///
/// With `D(x) = prod (x - s)` and `N = sum_s mu_s * prod_{t != s} (x - t)`
/// the logarithmic derivative of `y` is `N/D`, so `y'' / y =
/// (N^2 + N' D - N D') / D^2` and the residual times `D^2 / y` is the
/// polynomial `q_top (N^2 + N' D - N D') + q_mid N D + q_low D^2`,
/// which must vanish identically.
pub fn verify_annihilates(op: &FuchsOperator, sol: &PowerProduct) -> Result<()> {
    let table = op.table();
    ensure_same(table, sol.table())?;
    let q_low = op.q_low()?;
    let roots: Vec<RationalFunction> =
        sol.factors().iter().map(|(r, _)| r.clone()).collect();
    let d = XPoly::from_roots(table, &roots);
    let mut n = XPoly::zero(table);
    for (i, (_, mu)) in sol.factors().iter().enumerate() {
        let others: Vec<RationalFunction> = roots
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, r)| r.clone())
            .collect();
        n = &n + &XPoly::from_roots(table, &others).scale(mu);
    }
    let y2_part = &(&(&n * &n) + &(&n.derivative() * &d)) - &(&n * &d.derivative());
    let residual = &(&(op.q_top() * &y2_part) + &(&(op.q_mid() * &n) * &d))
        + &(&(q_low * &d) * &d);
    if residual.is_zero() {
        Ok(())
    } else {
        Err(Error::NonZeroResidual {
            numerator: residual.to_string(),
        })
    }
}

/// Largest relative residual of `q_top y'' + q_mid y' + q_low y` over the
/// given points, each scaled by the magnitude sum of the three terms.
pub fn residual_at_points(
    op: &FuchsOperator,
    sol: &PowerProduct,
    points: &[f64],
) -> Result<f64> {
    let q_low = op.q_low()?;
    let mut worst: f64 = 0.0;
    for &x in points {
        let y = sol.eval_f64(x)?;
        let yp = sol.deriv_f64(x)?;
        let ypp = sol.deriv2_f64(x)?;
        let t2 = op.q_top().eval_f64(x)? * ypp;
        let t1 = op.q_mid().eval_f64(x)? * yp;
        let t0 = q_low.eval_f64(x)? * y;
        let scale = (t2.abs() + t1.abs() + t0.abs()).max(f64::MIN_POSITIVE);
        worst = worst.max((t2 + t1 + t0).abs() / scale);
    }
    Ok(worst)
}

/// Second independent solution by reduction of order:
/// `y_2(x) = y_1(x) * integral_base^x W/y_1^2`, the integrand being the
/// power product with exponent `-e_s` at left-factor points and
/// `-e_s - 2 mu_s` at right-factor points.
#[derive(Clone, Debug)]
pub struct QuadratureSolution {
    pub prefactor: PowerProduct,
    pub integrand: PowerProduct,
    pub basepoint: f64,
}

/// Builds the reduction-of-order data for a proper splitting.
pub fn second_solution(f: &Factorization, basepoint: f64) -> Result<QuadratureSolution> {
    if !basepoint.is_finite() {
        return Err(Error::DomainError {
            msg: "basepoint must be finite".into(),
        });
    }
    let table = f.operator.table();
    let prefactor = right_solution(f)?;
    let mut integrand_factors = Vec::new();
    let params = f.operator.params();
    for (i, s) in params.singularities().iter().enumerate() {
        let e = &params.exponents()[i];
        let mut exponent = -e;
        if f.right.contains_root(s) {
            let mu = prefactor
                .factors()
                .iter()
                .find(|(r, _)| r == s)
                .map(|(_, mu)| mu.clone())
                .expect("right-factor root carries an exponent");
            let two = RationalFunction::from_int(table, 2);
            exponent = &exponent - &(&two * &mu);
        }
        integrand_factors.push((s.clone(), exponent.simplify()));
    }
    Ok(QuadratureSolution {
        prefactor,
        integrand: PowerProduct::new(table, integrand_factors)?,
        basepoint,
    })
}

/// Adaptive Simpson quadrature with Richardson correction: an interval is
/// accepted when `|S_left + S_right - S_whole| <= 15 tol`, contributing
/// `S_left + S_right + delta/15`; otherwise it splits, halving `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::InvalidTolerance { tol });
    }
    if a == b {
        return Ok(0.0);
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let fa = f(lo);
    let fb = f(hi);
    let mid = 0.5 * (lo + hi);
    let fm = f(mid);
    let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    if !whole.is_finite() {
        return Err(Error::DomainError {
            msg: "integrand is not finite on the interval".into(),
        });
    }
    let value = simpson_step(f, lo, hi, fa, fm, fb, whole, tol, 40)?;
    Ok(sign * value)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if !delta.is_finite() {
        return Err(Error::DomainError {
            msg: "integrand is not finite on the interval".into(),
        });
    }
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::QuadratureDepthExceeded);
    }
    let half = 0.5 * tol;
    let lv = simpson_step(f, a, m, fa, flm, fm, left, half, depth - 1)?;
    let rv = simpson_step(f, m, b, fm, frm, fb, right, half, depth - 1)?;
    Ok(lv + rv)
}

/// Checks that no singular point of the product lies in the closed
/// evaluation interval.
fn check_interval(q: &QuadratureSolution, x: f64) -> Result<()> {
    let lo = q.basepoint.min(x);
    let hi = q.basepoint.max(x);
    for (root, _) in q.integrand.factors() {
        let r = root.to_f64()?;
        if lo <= r && r <= hi {
            return Err(Error::DomainError {
                msg: format!(
                    "singular point x = {r} lies inside the integration range [{lo}, {hi}]"
                ),
            });
        }
    }
    Ok(())
}

/// Numeric value of the second solution at `x`, to quadrature tolerance
/// `tol`. The open interval between basepoint and `x` must be free of
/// singular points.
pub fn second_solution_eval(q: &QuadratureSolution, x: f64, tol: f64) -> Result<f64> {
    if x == q.basepoint {
        return Ok(0.0);
    }
    check_interval(q, x)?;
    let integrand = &q.integrand;
    let f = |t: f64| integrand.eval_f64(t).unwrap_or(f64::NAN);
    let integral = adaptive_simpson(&f, q.basepoint, x, tol)?;
    Ok(q.prefactor.eval_f64(x)? * integral)
}

/// Relative residual of the second solution at `x`. Derivatives come from
/// the product rule: with `I(x)` the integral and `g` the integrand,
/// `y_2' = y_1' I + y_1 g` and `y_2'' = y_1'' I + 2 y_1' g + y_1 g'`, so
/// the only numeric error enters through `I` itself.
pub fn second_solution_residual(
    f: &Factorization,
    q: &QuadratureSolution,
    x: f64,
    tol: f64,
) -> Result<f64> {
    check_interval(q, x)?;
    let integrand = &q.integrand;
    let func = |t: f64| integrand.eval_f64(t).unwrap_or(f64::NAN);
    let integral = adaptive_simpson(&func, q.basepoint, x, tol)?;

    let y1 = q.prefactor.eval_f64(x)?;
    let y1p = q.prefactor.deriv_f64(x)?;
    let y1pp = q.prefactor.deriv2_f64(x)?;
    let g = integrand.eval_f64(x)?;
    let gp = g * integrand.log_deriv_f64(x)?;

    let y2 = y1 * integral;
    let y2p = y1p * integral + y1 * g;
    let y2pp = y1pp * integral + 2.0 * y1p * g + y1 * gp;

    let op = &f.operator;
    let t2 = op.q_top().eval_f64(x)? * y2pp;
    let t1 = op.q_mid().eval_f64(x)? * y2p;
    let t0 = op.q_low()?.eval_f64(x)? * y2;
    let scale = (t2.abs() + t1.abs() + t0.abs()).max(f64::MIN_POSITIVE);
    Ok((t2 + t1 + t0).abs() / scale)
}
