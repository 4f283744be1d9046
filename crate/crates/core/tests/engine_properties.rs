//! Randomized exact checks of the full engine: for seeded random families
//! (constant rational singular points and exponents, degrees 1 through 4)
//! every splitting must reproduce the family coefficientwise, carry a
//! consistent index pair, be annihilated by its power-product solution,
//! and round-trip through the adjoint.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use heunfac_core::{
    adjoint_factorization, factorize_all, infinity_indices, operator_equal, rat, right_solution,
    trivial_right_solution, verify_annihilates, FamilySpec, Factorization, RationalFunction,
    SplittingOutcome, SymbolTable,
};

fn random_rational(rng: &mut ChaCha8Rng, lo: i64, hi: i64, max_den: i64) -> RationalFunction {
    let t = SymbolTable::empty();
    let n = rng.gen_range(lo..=hi);
    let d = rng.gen_range(1..=max_den);
    RationalFunction::from_rational(&t, rat(n, d))
}

/// `k` extra singular points, pairwise distinct and distinct from 0 and 1.
fn random_points(rng: &mut ChaCha8Rng, k: usize) -> Vec<RationalFunction> {
    let t = SymbolTable::empty();
    let zero = RationalFunction::zero(&t);
    let one = RationalFunction::one(&t);
    let mut points: Vec<RationalFunction> = Vec::with_capacity(k);
    while points.len() < k {
        let p = random_rational(rng, -12, 12, 4);
        if p != zero && p != one && points.iter().all(|q| *q != p) {
            points.push(p);
        }
    }
    points
}

fn check_factor_relations(f: &Factorization) {
    let l = f.left.l_poly();
    let m = f.left.m_poly();
    let lbar = f.right.l_poly();
    let mbar = f.right.m_poly();
    let top = l * lbar;
    let mid = &(&(l * &lbar.derivative()) + &(l * mbar)) + &(m * lbar);
    let low = &(l * &mbar.derivative()) + &(m * mbar);
    assert!(top.eq_poly(f.operator.q_top()).unwrap(), "top relation");
    assert!(mid.eq_poly(f.operator.q_mid()).unwrap(), "middle relation");
    assert!(
        low.eq_poly(f.operator.q_low().unwrap()).unwrap(),
        "lower relation"
    );
}

fn check_index_pair(f: &Factorization, sigma: &RationalFunction) {
    let (nu_r, nu_o) = infinity_indices(f).unwrap();
    assert!(nu_r.eq_rf(&f.index_pair.0).unwrap());
    assert!(nu_o.eq_rf(&f.index_pair.1).unwrap());
    let sum = &nu_r + &nu_o;
    assert!(sum.eq_rf(sigma).unwrap(), "index pair sums to sigma");
    let product = &nu_r * &nu_o;
    assert!(
        product.eq_rf(&f.accessory.alpha_beta).unwrap(),
        "index pair product is the top accessory coefficient"
    );
}

fn check_adjoint_roundtrip(f: &Factorization) {
    let adj = adjoint_factorization(f).unwrap();
    assert_eq!(adj.mask, f.mask.complement());
    let back = adjoint_factorization(&adj).unwrap();
    assert_eq!(back.mask, f.mask);
    assert!(back.left.m_poly().eq_poly(f.left.m_poly()).unwrap());
    assert!(back.right.m_poly().eq_poly(f.right.m_poly()).unwrap());
    assert!(operator_equal(&back.operator, &f.operator).unwrap());
}

#[test]
fn fifty_seeded_random_families_pass_all_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_cafe);
    let t: Arc<SymbolTable> = SymbolTable::empty();
    for trial in 0..50 {
        let k = 1 + trial % 4;
        let points = random_points(&mut rng, k);
        let exponents: Vec<RationalFunction> = (0..k + 2)
            .map(|_| random_rational(&mut rng, -3, 6, 4))
            .collect();
        let fam = FamilySpec::new(&t, points, exponents).unwrap();
        let sigma = fam.sigma();

        let outcomes = factorize_all(&fam, true).unwrap();
        assert_eq!(outcomes.len(), 1 << (k + 2), "trial {trial}");
        for outcome in &outcomes {
            match outcome {
                SplittingOutcome::Proper(f) => {
                    check_factor_relations(f);
                    check_index_pair(f, &sigma);
                    check_adjoint_roundtrip(f);
                    let sol = right_solution(f).unwrap();
                    verify_annihilates(&f.operator, &sol).unwrap();
                }
                SplittingOutcome::Trivial(tr) => {
                    let sol = trivial_right_solution(tr).unwrap();
                    verify_annihilates(&tr.operator, &sol).unwrap();
                }
                other => panic!(
                    "trial {trial}: distinct constant points must split, got {} for mask {}",
                    other.status(),
                    other.mask()
                ),
            }
        }
    }
}

#[test]
fn random_half_exponent_families_keep_their_symmetries() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xba5e_ba11);
    let t: Arc<SymbolTable> = SymbolTable::empty();
    let half = RationalFunction::from_rational(&t, rat(1, 2));
    for trial in 0..12 {
        let k = 1 + trial % 4;
        let points = random_points(&mut rng, k);
        let fam = FamilySpec::new_half_exponent(&t, points).unwrap();
        let outcomes = factorize_all(&fam, false).unwrap();
        for outcome in &outcomes {
            let SplittingOutcome::Proper(f) = outcome else {
                panic!("trial {trial}: proper masks only");
            };
            // closed form: connection polynomials are half the derivatives
            assert!(f
                .left
                .m_poly()
                .eq_poly(&f.left.l_poly().derivative().scale(&half))
                .unwrap());
            assert!(f
                .right
                .m_poly()
                .eq_poly(&(-&f.right.l_poly().derivative().scale(&half)))
                .unwrap());
            assert!(heunfac_core::half_exponent_antisymmetry(f).unwrap());
        }
    }
}
