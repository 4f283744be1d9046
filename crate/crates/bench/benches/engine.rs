//! Engine benchmarks: full splitting sweeps (symbolic and numeric),
//! single-splitting solves, the adjoint round trip, and the solution paths
//! (exact residual and quadrature).

use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};

use heunfac_core::{
    adjoint_factorization, factorize_all, parse_coeff, right_solution, second_solution,
    second_solution_eval, solve_splitting, verify_annihilates, FamilySpec, Factorization,
    SplittingMask, SplittingOutcome, SymbolTable,
};

fn symbolic_half_exponent(k: usize) -> FamilySpec {
    let names = ["a", "b", "c", "d"];
    let table = SymbolTable::new(names[..k].to_vec()).unwrap();
    let extras = names[..k]
        .iter()
        .map(|s| parse_coeff(s, &table).unwrap())
        .collect();
    FamilySpec::new_half_exponent(&table, extras).unwrap()
}

fn symbolic_free_exponents() -> FamilySpec {
    let table = SymbolTable::new(["a", "b", "gamma", "delta", "eps1", "eps2"]).unwrap();
    let extras = vec![
        parse_coeff("a", &table).unwrap(),
        parse_coeff("b", &table).unwrap(),
    ];
    let exps = ["gamma", "delta", "eps1", "eps2"]
        .iter()
        .map(|s| parse_coeff(s, &table).unwrap())
        .collect();
    FamilySpec::new(&table, extras, exps).unwrap()
}

fn numeric_half_exponent(k: usize) -> FamilySpec {
    let points = ["2", "3", "-1", "5/2"];
    let table = SymbolTable::empty();
    let extras = points[..k]
        .iter()
        .map(|s| parse_coeff(s, &table).unwrap())
        .collect();
    FamilySpec::new_half_exponent(&table, extras).unwrap()
}

fn first_proper(fam: &FamilySpec) -> Factorization {
    factorize_all(fam, false)
        .unwrap()
        .into_iter()
        .find_map(|o| match o {
            SplittingOutcome::Proper(f) => Some(f),
            _ => None,
        })
        .expect("family splits")
}

fn sweep_benches(c: &mut Criterion) {
    let lame2 = symbolic_half_exponent(2);
    c.bench_function("factorize_all symbolic half-exponent k=2 (14 masks)", |b| {
        b.iter(|| black_box(factorize_all(black_box(&lame2), false).unwrap()))
    });

    let heun2 = symbolic_free_exponents();
    c.bench_function("factorize_all six-symbol family k=2 (14 masks)", |b| {
        b.iter(|| black_box(factorize_all(black_box(&heun2), false).unwrap()))
    });

    let numeric4 = numeric_half_exponent(4);
    c.bench_function("factorize_all numeric half-exponent k=4 (62 masks)", |b| {
        b.iter(|| black_box(factorize_all(black_box(&numeric4), false).unwrap()))
    });
}

fn single_splitting_benches(c: &mut Criterion) {
    let heun2 = symbolic_free_exponents();
    let mask: SplittingMask = "1100".parse().unwrap();
    c.bench_function("solve_splitting six-symbol k=2 mask 1100", |b| {
        b.iter(|| black_box(solve_splitting(black_box(&heun2), black_box(&mask)).unwrap()))
    });

    let f = solve_splitting(&heun2, &mask).unwrap();
    c.bench_function("adjoint_factorization round trip (six-symbol k=2)", |b| {
        b.iter(|| {
            let adj = adjoint_factorization(black_box(&f)).unwrap();
            black_box(adjoint_factorization(&adj).unwrap())
        })
    });
}

fn solution_benches(c: &mut Criterion) {
    let numeric2 = numeric_half_exponent(2);
    let f = first_proper(&numeric2);
    c.bench_function("right_solution + exact residual (numeric k=2)", |b| {
        b.iter(|| {
            let sol = right_solution(black_box(&f)).unwrap();
            verify_annihilates(&f.operator, &sol).unwrap();
            black_box(sol)
        })
    });

    let numeric1: FamilySpec = {
        let table: Arc<SymbolTable> = SymbolTable::empty();
        let extras = vec![parse_coeff("2", &table).unwrap()];
        FamilySpec::new_half_exponent(&table, extras).unwrap()
    };
    let mask: SplittingMask = "110".parse().unwrap();
    let f = solve_splitting(&numeric1, &mask).unwrap();
    let q = second_solution(&f, 1.5).unwrap();
    c.bench_function("second_solution_eval quadrature (k=1, tol 1e-9)", |b| {
        b.iter(|| black_box(second_solution_eval(black_box(&q), 1.85, 1e-9).unwrap()))
    });
}

criterion_group!(benches, sweep_benches, single_splitting_benches, solution_benches);
criterion_main!(benches);
