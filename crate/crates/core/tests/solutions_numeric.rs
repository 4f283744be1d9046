//! Quadrature unit checks and end-to-end numeric verification of the
//! closed-form solutions for a concrete degree-1 half-exponent family
//! (singular points 0, 1, 2).

use std::str::FromStr;
use std::sync::Arc;

use heunfac_core::{
    adaptive_simpson, factorize_all, rat, residual_at_points, right_solution, second_solution,
    second_solution_eval, second_solution_residual, solve_splitting, trivial_right_solution,
    trivial_splitting, verify_annihilates, Error, FamilySpec, Factorization, RationalFunction,
    SplittingMask, SplittingOutcome, SymbolTable,
};

fn concrete_family() -> FamilySpec {
    let t = SymbolTable::empty();
    let two = RationalFunction::from_int(&t, 2);
    FamilySpec::new_half_exponent(&t, vec![two]).unwrap()
}

fn mask(s: &str) -> SplittingMask {
    SplittingMask::from_str(s).unwrap()
}

#[test]
fn simpson_reproduces_known_integrals() {
    // polynomial: Simpson is exact for cubics, so one panel suffices
    let cubic = |x: f64| x * x * x - 2.0 * x;
    assert!((adaptive_simpson(&cubic, 0.0, 2.0, 1e-12).unwrap() - 0.0).abs() < 1e-12);
    // logarithm: integral of 1/x over [1, 2]
    let inv = |x: f64| 1.0 / x;
    let ln2 = adaptive_simpson(&inv, 1.0, 2.0, 1e-12).unwrap();
    assert!((ln2 - std::f64::consts::LN_2).abs() < 1e-10, "got {ln2}");
    // arctangent: integral of 4/(1+x^2) over [0, 1] is pi
    let f = |x: f64| 4.0 / (1.0 + x * x);
    let pi = adaptive_simpson(&f, 0.0, 1.0, 1e-12).unwrap();
    assert!((pi - std::f64::consts::PI).abs() < 1e-10, "got {pi}");
    // orientation and degenerate interval
    let rev = adaptive_simpson(&inv, 2.0, 1.0, 1e-12).unwrap();
    assert!((rev + std::f64::consts::LN_2).abs() < 1e-10);
    assert_eq!(adaptive_simpson(&inv, 1.5, 1.5, 1e-12).unwrap(), 0.0);
}

#[test]
fn simpson_rejects_bad_inputs() {
    let f = |x: f64| x;
    assert!(matches!(
        adaptive_simpson(&f, 0.0, 1.0, 0.0),
        Err(Error::InvalidTolerance { .. })
    ));
    assert!(matches!(
        adaptive_simpson(&f, 0.0, 1.0, -1e-3),
        Err(Error::InvalidTolerance { .. })
    ));
    assert!(matches!(
        adaptive_simpson(&f, 0.0, 1.0, f64::NAN),
        Err(Error::InvalidTolerance { .. })
    ));
    // endpoint blow-up is reported, not integrated through
    let blow = |x: f64| 1.0 / x;
    assert!(matches!(
        adaptive_simpson(&blow, 0.0, 1.0, 1e-8),
        Err(Error::DomainError { .. })
    ));
    // a jump discontinuity can never meet the acceptance test: the local
    // Simpson error and the budget shrink at the same rate
    let step = |x: f64| if x < 1.0 / 3.0 { 0.0 } else { 1.0 };
    assert!(matches!(
        adaptive_simpson(&step, 0.0, 1.0, 1e-6),
        Err(Error::QuadratureDepthExceeded)
    ));
}

#[test]
fn power_product_solutions_are_square_roots_of_the_right_factor() {
    let fam = concrete_family();
    for m in ["100", "010", "001", "011", "101", "110"] {
        let f = solve_splitting(&fam, &mask(m)).unwrap();
        let sol = right_solution(&f).unwrap();
        // half-exponent family: every exponent is 1/2, so y_1 = sqrt(L̄)
        assert_eq!(sol.factors().len(), f.right.degree());
        for (_, mu) in sol.factors() {
            assert_eq!(mu.as_rational().unwrap(), rat(1, 2), "mask {m}");
        }
        verify_annihilates(&f.operator, &sol).unwrap();
    }
    let f = solve_splitting(&fam, &mask("110")).unwrap();
    let sol = right_solution(&f).unwrap();
    assert_eq!(sol.to_string(), "(x - 2)^(1/2)");
    let g = solve_splitting(&fam, &mask("100")).unwrap();
    assert_eq!(
        right_solution(&g).unwrap().to_string(),
        "(x - 1)^(1/2)*(x - 2)^(1/2)"
    );
    let h = solve_splitting(&fam, &mask("011")).unwrap();
    assert_eq!(right_solution(&h).unwrap().to_string(), "x^(1/2)");
}

#[test]
fn trivial_solutions_one_sided() {
    let fam = concrete_family();
    let SplittingOutcome::Trivial(all_left) = trivial_splitting(&fam, &mask("111")).unwrap()
    else {
        panic!("one-sided mask must be trivial");
    };
    let sol = trivial_right_solution(&all_left).unwrap();
    assert_eq!(sol.to_string(), "1");
    assert!(sol.factors().is_empty());
    verify_annihilates(&all_left.operator, &sol).unwrap();

    let SplittingOutcome::Trivial(all_right) = trivial_splitting(&fam, &mask("000")).unwrap()
    else {
        panic!("one-sided mask must be trivial");
    };
    let sol = trivial_right_solution(&all_right).unwrap();
    assert_eq!(sol.to_string(), "x^(1/2)*(x - 1)^(1/2)*(x - 2)^(1/2)");
    verify_annihilates(&all_right.operator, &sol).unwrap();
}

fn interior_points(n: usize) -> Vec<f64> {
    // n points strictly inside (1, 2)
    (1..=n).map(|i| 1.0 + i as f64 / (n as f64 + 1.0)).collect()
}

#[test]
fn first_solution_residual_tiny_on_the_interval() {
    let fam = concrete_family();
    let points = interior_points(20);
    for m in ["100", "010", "001", "011", "101", "110"] {
        let f = solve_splitting(&fam, &mask(m)).unwrap();
        let sol = right_solution(&f).unwrap();
        let worst = residual_at_points(&f.operator, &sol, &points).unwrap();
        assert!(worst < 1e-10, "mask {m}: relative residual {worst}");
    }
}

#[test]
fn second_solution_residual_small_on_the_interval() {
    let fam = concrete_family();
    let f = solve_splitting(&fam, &mask("110")).unwrap();
    let q = second_solution(&f, 1.5).unwrap();
    // integrand exponents: -1/2 at the left-factor points, -1/2 - 2*(1/2)
    // at the right-factor point
    for (root, e) in q.integrand.factors() {
        let expected = if f.right.contains_root(root) {
            rat(-3, 2)
        } else {
            rat(-1, 2)
        };
        assert_eq!(e.as_rational().unwrap(), expected);
    }
    for &x in &[1.2, 1.35, 1.55, 1.7, 1.85] {
        let r = second_solution_residual(&f, &q, x, 1e-12).unwrap();
        assert!(r < 1e-6, "residual {r} at x = {x}");
    }
    // antisymmetry around the basepoint is not expected, but the value at
    // the basepoint itself is exactly zero
    assert_eq!(second_solution_eval(&q, 1.5, 1e-10).unwrap(), 0.0);
    let y = second_solution_eval(&q, 1.8, 1e-10).unwrap();
    assert!(y.is_finite() && y != 0.0);
}

#[test]
fn second_solution_respects_singular_boundaries() {
    let fam = concrete_family();
    let f = solve_splitting(&fam, &mask("110")).unwrap();
    let q = second_solution(&f, 1.5).unwrap();
    // crossing the singular points at 1 or 2 is refused
    assert!(matches!(
        second_solution_eval(&q, 0.5, 1e-10),
        Err(Error::DomainError { .. })
    ));
    assert!(matches!(
        second_solution_eval(&q, 2.5, 1e-10),
        Err(Error::DomainError { .. })
    ));
    assert!(matches!(
        second_solution_residual(&f, &q, 2.5, 1e-10),
        Err(Error::DomainError { .. })
    ));
    // a non-finite basepoint is rejected up front
    assert!(matches!(
        second_solution(&f, f64::INFINITY),
        Err(Error::DomainError { .. })
    ));
}

#[test]
fn evaluation_at_singular_points_is_reported() {
    let fam = concrete_family();
    let f = solve_splitting(&fam, &mask("110")).unwrap();
    let q = second_solution(&f, 1.5).unwrap();
    // x = 2 carries a negative integrand exponent
    assert!(matches!(
        q.integrand.eval_f64(2.0),
        Err(Error::DomainError { .. })
    ));
    // the prefactor (x - 2)^(1/2) is fine there
    assert_eq!(q.prefactor.eval_f64(2.0).unwrap(), 0.0);
}

/// The residual bound degrades gracefully with the quadrature tolerance:
/// a crude tolerance must still give a finite, correct-order residual.
#[test]
fn residual_tracks_quadrature_tolerance() {
    let fam = concrete_family();
    let f: Factorization = solve_splitting(&fam, &mask("011")).unwrap();
    let q = second_solution(&f, 1.5).unwrap();
    let fine = second_solution_residual(&f, &q, 1.75, 1e-12).unwrap();
    let crude = second_solution_residual(&f, &q, 1.75, 1e-4).unwrap();
    assert!(fine <= crude.max(1e-9) * 10.0, "fine {fine} crude {crude}");
    assert!(crude < 1e-2, "crude tolerance still bounded: {crude}");
}

#[test]
fn factorize_all_concrete_family_is_fully_ok() {
    let fam = concrete_family();
    let outcomes = factorize_all(&fam, true).unwrap();
    assert_eq!(outcomes.len(), 8);
    let (mut ok, mut trivial) = (0, 0);
    for o in &outcomes {
        match o {
            SplittingOutcome::Proper(_) => ok += 1,
            SplittingOutcome::Trivial(_) => trivial += 1,
            other => panic!("unexpected outcome {}", other.status()),
        }
    }
    assert_eq!((ok, trivial), (6, 2));
    let _: Arc<SymbolTable> = Arc::clone(fam.table());
}
