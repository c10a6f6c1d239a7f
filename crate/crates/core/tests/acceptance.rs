//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so every criterion executes and reports
//! even when an earlier one fails. Exit status is non-zero if any fails.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use weylpert::combinatorics::factorial;
use weylpert::lie::count_generators_floor_convention;
use weylpert::oracle::{quartic_second_order_closed_form, rs_corrections};
use weylpert::perturbation::{even_first_order_closed_form, ground_state_closed_form};
use weylpert::potentials::solve_multimode;
use weylpert::{
    build_matrix, commutator, compare, count_generators, dagger, exact_harmonic, expand_power, generate_algebra,
    multiply, numeric_spectrum, parse_potential, perturbed_hamiltonian, solve_first_order, solve_higher_order,
    weyl_binomial, ExactOperator, ExactResult, HarmonicCase, NumberPolynomial, Radical2Scalar as R,
};

/// Pinned tolerances and budgets.
mod tol {
    use std::time::Duration;

    pub const WEYL_BINOMIAL_MAX_N: u32 = 12;
    pub const COUNT_RANGE: std::ops::RangeInclusive<u32> = 3..=12;
    pub const SEXTIC_SIZE: usize = 15;
    pub const EVEN_CLOSED_FORM_K: std::ops::RangeInclusive<u32> = 1..=6;
    pub const FIRST_ORDER_LEVELS: std::ops::RangeInclusive<u64> = 0..=10;
    pub const FIRST_ORDER_K: std::ops::RangeInclusive<u32> = 1..=4;
    pub const SECOND_ORDER_LEVELS: std::ops::RangeInclusive<u64> = 0..=6;

    pub const CONVERGENCE_DIM: usize = 80;
    pub const CONVERGENCE_MIN_SLOPE: f64 = 2.5;
    pub const CONVERGENCE_LAMBDA: (f64, f64) = (1e-3, 1e-2);
    pub const CONVERGENCE_POINTS: usize = 6;
    pub const CONVERGENCE_BUDGET: Duration = Duration::from_secs(30);

    pub const HARMONIC_DIM: usize = 200;
    pub const HARMONIC_TOL: f64 = 1e-9;
    pub const HARMONIC_LAMBDAS: [f64; 2] = [0.1, 0.5];
    pub const HARMONIC_MAX_LEVEL: u64 = 5;

    pub const SERIES_TOL: f64 = 1e-12;
    pub const SERIES_CUTOFF: u32 = 24;

    pub const PROPERTY_CASES: usize = 200;
    pub const PROPERTY_MAX_POWER: u32 = 6;
    pub const PROPERTY_SEED: u64 = 0x5eed_0001;
    pub const MATRIX_DIM: usize = 30;
    pub const MATRIX_REL_TOL: f64 = 1e-10;
}

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 13] = [
        ("AC1", "normal ordering golden", ac1),
        ("AC2", "Weyl-binomial symmetry", ac2),
        ("AC3", "algebra counts", ac3),
        ("AC4", "quartic first order", ac4),
        ("AC5", "quintic first order", ac5),
        ("AC6", "even ground-state closed form", ac6),
        ("AC7", "first-order shifts vs oracle", ac7),
        ("AC8", "quartic second order", ac8),
        ("AC9", "numeric convergence", ac9),
        ("AC10", "exact harmonic", ac10),
        ("AC11", "series potential", ac11),
        ("AC12", "multimode", ac12),
        ("AC13", "property suites", ac13),
    ];
    let mut failed = Vec::new();
    for (id, name, run) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|e| Outcome::new(false, format!("panicked: {}", panic_message(&e))));
        let status = if outcome.pass { "PASS" } else { "FAIL" };
        println!("{status} {id} {name} ({:.2}s): {}", start.elapsed().as_secs_f64(), outcome.detail);
        if !outcome.pass {
            failed.push(id);
        }
    }
    println!("\n{} of {} criteria passed", criteria.len() - failed.len(), criteria.len());
    if !failed.is_empty() {
        println!("failed: {}", failed.join(", "));
        std::process::exit(1);
    }
}

fn panic_message(e: &Box<dyn std::any::Any + Send>) -> String {
    e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default()
}

fn alpha(res: &ExactResult, j: usize, p: u32, q: u32) -> R {
    res.generator.coefficient(j, p, q).unwrap_or_else(|| R::integer(0))
}

fn ac1() -> Outcome {
    let op = expand_power::<R>(4, 0);
    let expected = [
        ((4, 0), 1),
        ((3, 1), 4),
        ((2, 2), 6),
        ((1, 3), 4),
        ((0, 4), 1),
        ((2, 0), 6),
        ((1, 1), 12),
        ((0, 2), 6),
        ((0, 0), 3),
    ];
    let want = ExactOperator::from_terms(0, expected.iter().map(|&((p, q), c)| (0, p, q, R::integer(c))));
    Outcome::new(op == want, format!("(a + a†)^4 = {op}"))
}

fn ac2() -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for n in 0..=tol::WEYL_BINOMIAL_MAX_N {
        for m in 0..=n {
            for k in 0..=m.min(n - m) {
                checked += 1;
                if weyl_binomial(n, m, k).ok() != weyl_binomial(n, n - m, k).ok() {
                    bad.push((n, m, k));
                }
            }
        }
    }
    Outcome::new(bad.is_empty(), format!("{checked} triples, asymmetric {bad:?}"))
}

/// Sizes against `(κ+1)κ + 3` with `κ = ⌊n/2⌋`, as the criterion is written.
fn ac3() -> Outcome {
    let mut mismatches = Vec::new();
    let mut ceil_ok = true;
    for n in tol::COUNT_RANGE {
        let size = generate_algebra::<R>(n, 1).unwrap().size();
        let floor = count_generators_floor_convention(n);
        if size != floor {
            mismatches.push(format!("n={n}: {size} vs {floor}"));
        }
        ceil_ok &= count_generators(n).unwrap() == size;
    }
    let sextic = generate_algebra::<R>(6, 1).unwrap().size();
    let pass = mismatches.is_empty() && sextic == tol::SEXTIC_SIZE;
    Outcome::new(
        pass,
        format!(
            "A6 size {sextic}; floor-form mismatches [{}]; ceil form κ = ⌈n/2⌉ matches all: {ceil_ok}",
            mismatches.join(", ")
        ),
    )
}

fn ac4() -> Outcome {
    let res = solve_first_order::<R>(4).unwrap();
    let alphas = [alpha(&res, 1, 4, 0), alpha(&res, 1, 3, 1), alpha(&res, 1, 2, 0)];
    let alphas_ok = alphas == [R::ratio(1, 16), R::ratio(1, 2), R::ratio(3, 4)];
    // 3/4 + (3/2)N + (3/2)N²
    let want =
        NumberPolynomial::from_monomial_basis(vec![vec![], vec![R::ratio(3, 4), R::ratio(3, 2), R::ratio(3, 2)]]);
    let lambda_ok = res.lambda_operator == want;
    let e0 = res.level_series(0).coeff(1);
    let pass = alphas_ok && lambda_ok && e0 == R::ratio(3, 4);
    Outcome::new(pass, format!("α = [{}, {}, {}], Λ exact {lambda_ok}, E0 λ¹ = {e0}", alphas[0], alphas[1], alphas[2]))
}

fn ac5() -> Outcome {
    let res = solve_first_order::<R>(5).unwrap();
    let s = R::sqrt2_power(-5);
    let expected = [
        ((5, 0), R::ratio(1, 5)),
        ((4, 1), R::ratio(5, 3)),
        ((3, 2), R::integer(10)),
        ((3, 0), R::ratio(10, 3)),
        ((2, 1), R::integer(30)),
        ((1, 0), R::integer(15)),
    ];
    let bad: Vec<_> =
        expected.iter().filter(|((p, q), v)| alpha(&res, 1, *p, *q) != v * &s).map(|(pq, _)| *pq).collect();
    let count = res.generator.alphas().len();
    let nonvanishing: Vec<u32> = [3, 5, 7, 9]
        .into_iter()
        .filter(|&n| !solve_first_order::<R>(n).unwrap().lambda_operator.is_order_zero(1))
        .collect();
    let pass = bad.is_empty() && count == 6 && nonvanishing.is_empty();
    Outcome::new(pass, format!("{count} α, wrong {bad:?}; nonzero diagonal for n in {nonvanishing:?}"))
}

fn ac6() -> Outcome {
    let mut bad = Vec::new();
    for k in tol::EVEN_CLOSED_FORM_K {
        let want =
            R::rational(num_rational::BigRational::new(factorial(2 * k), (BigInt::from(1) << (2 * k)) * factorial(k)));
        let solved = solve_higher_order::<R>(2 * k, 1).unwrap().level_series(0).coeff(1);
        let oracle = rs_corrections(2 * k, 0).first_order;
        let closed: R = ground_state_closed_form(k);
        if solved != want || oracle != want || closed != want {
            bad.push(format!("k={k}: solved {solved}, oracle {oracle}, expected {want}"));
        }
    }
    Outcome::new(bad.is_empty(), if bad.is_empty() { "k = 1..6 exact".into() } else { bad.join("; ") })
}

fn ac7() -> Outcome {
    let mut bad = Vec::new();
    let mut checked = 0;
    for k in tol::FIRST_ORDER_K {
        let solved = solve_higher_order::<R>(2 * k, 1).unwrap();
        let closed: NumberPolynomial<R> = even_first_order_closed_form(k);
        for n in tol::FIRST_ORDER_LEVELS {
            checked += 1;
            let oracle = rs_corrections(2 * k, n).first_order;
            let via_closed = closed.level_series(n).coeff(1);
            let via_solver = solved.level_series(n).coeff(1);
            if via_closed != oracle || via_solver != oracle {
                bad.push(format!("x^{} n={n}: closed {via_closed}, solver {via_solver}, oracle {oracle}", 2 * k));
            }
        }
    }
    Outcome::new(bad.is_empty(), format!("{checked} (k, n) pairs; mismatches [{}]", bad.join("; ")))
}

fn ac8() -> Outcome {
    let res = solve_higher_order::<R>(4, 2).unwrap();
    let ground = res.level_series(0);
    let ground_ok = ground.coeffs() == [R::ratio(1, 2), R::ratio(3, 4), R::ratio(-21, 8)];
    let betas = [alpha(&res, 2, 6, 0), alpha(&res, 2, 4, 2), alpha(&res, 2, 3, 1), alpha(&res, 2, 2, 0)];
    let betas_ok = betas == [R::ratio(1, 48), R::ratio(-9, 16), R::ratio(-9, 4), R::ratio(-63, 32)];
    let mut rs_bad = Vec::new();
    let mut info = Vec::new();
    for n in tol::SECOND_ORDER_LEVELS {
        let symbolic = res.level_series(n).coeff(2);
        let oracle = rs_corrections(4, n).second_order;
        if symbolic != oracle {
            rs_bad.push(format!("n={n}: {symbolic} vs {oracle}"));
        }
        let closed = quartic_second_order_closed_form(n);
        info.push(format!("n={n} closed {closed} {}", if closed == oracle { "=" } else { "≠" }));
    }
    println!("  info AC8 closed-form λ² vs RS: {}", info.join(", "));
    let pass = ground_ok && betas_ok && rs_bad.is_empty();
    Outcome::new(
        pass,
        format!(
            "E0 = {} + ({}) λ + ({}) λ², β = [{}, {}, {}, {}], RS mismatches [{}]",
            ground.coeff(0),
            ground.coeff(1),
            ground.coeff(2),
            betas[0],
            betas[1],
            betas[2],
            betas[3],
            rs_bad.join("; ")
        ),
    )
}

fn ac9() -> Outcome {
    let start = Instant::now();
    let res = solve_higher_order::<R>(4, 2).unwrap();
    let (lo, hi) = tol::CONVERGENCE_LAMBDA;
    let steps = tol::CONVERGENCE_POINTS - 1;
    let grid: Vec<f64> = (0..=steps).map(|i| lo * (hi / lo).powf(i as f64 / steps as f64)).collect();
    let report = compare(&res, 0, &grid, Some(tol::CONVERGENCE_DIM)).unwrap();
    let elapsed = start.elapsed();
    let slope = report.slope.unwrap_or(f64::NAN);
    let pass = slope >= tol::CONVERGENCE_MIN_SLOPE && elapsed < tol::CONVERGENCE_BUDGET;
    Outcome::new(
        pass,
        format!("slope {slope:.3} (need ≥ {}), D = {}, {elapsed:.2?}", tol::CONVERGENCE_MIN_SLOPE, report.dimension),
    )
}

fn ac10() -> Outcome {
    let h1 = exact_harmonic(HarmonicCase::H1);
    let solved = solve_higher_order::<R>(1, 2).unwrap();
    let mut h1_ok = h1.series(2) == solved.eigenvalue_series;
    for n in 0..=tol::HARMONIC_MAX_LEVEL {
        let want = [R::integer(n as i64) + R::ratio(1, 2), R::integer(0), R::ratio(-1, 2)];
        h1_ok &= solved.level_series(n).coeffs() == want;
    }
    let h2 = exact_harmonic(HarmonicCase::H2);
    let mut worst: f64 = 0.0;
    for lambda in tol::HARMONIC_LAMBDAS {
        let m = build_matrix(&perturbed_hamiltonian::<R>(2, 1), lambda, tol::HARMONIC_DIM).unwrap();
        let spectrum = numeric_spectrum(&m, tol::HARMONIC_MAX_LEVEL as usize + 1).unwrap();
        for (n, e) in spectrum.iter().enumerate() {
            worst = worst.max((e - h2.energy(n as u64, lambda).unwrap()).abs());
        }
    }
    let pass = h1_ok && worst <= tol::HARMONIC_TOL;
    Outcome::new(pass, format!("H1 series exact {h1_ok}; H2 max |Δ| {worst:.2e} (tol {:e})", tol::HARMONIC_TOL))
}

fn ac11() -> Outcome {
    let ground = |text: &str| {
        let spec = parse_potential(text).unwrap();
        assert_eq!(spec.modes[0].series.as_ref().unwrap().cutoff, tol::SERIES_CUTOFF);
        let result = solve_multimode(&spec).unwrap();
        result.energy_form(&[0]).unwrap().coefficient("lambda", 1)
    };
    let exp = ground("exp(x)");
    let cosh = ground("cosh(x)");
    let err = (exp.to_f64() - 0.25f64.exp()).abs();
    let pass = err <= tol::SERIES_TOL && exp == cosh;
    Outcome::new(pass, format!("|c − e^(1/4)| = {err:.2e} (tol {:e}), cosh identical {}", tol::SERIES_TOL, exp == cosh))
}

fn ac12() -> Outcome {
    let mut spec = parse_potential("x^1; y^4").unwrap();
    spec.order = 1;
    let form = solve_multimode(&spec).unwrap().energy_form(&[0, 0]).unwrap();
    let want: BTreeMap<&str, R> = BTreeMap::from([("lambda1", R::integer(0)), ("lambda2", R::ratio(3, 4))]);
    let ok = form.constant == R::integer(1) && want.iter().all(|(name, c)| &form.coefficient(name, 1) == c);
    Outcome::new(
        ok,
        format!(
            "E = {} + ({}) λ1 + ({}) λ2",
            form.constant,
            form.coefficient("lambda1", 1),
            form.coefficient("lambda2", 1)
        ),
    )
}

fn random_scalar(rng: &mut StdRng) -> R {
    let rat = R::ratio(rng.gen_range(-6..=6), rng.gen_range(1..=4));
    if rng.gen_bool(0.3) {
        rat + R::sqrt2() * R::ratio(rng.gen_range(-3..=3), rng.gen_range(1..=3))
    } else {
        rat
    }
}

fn random_operator(rng: &mut StdRng, order: usize) -> ExactOperator {
    let terms = rng.gen_range(1..=3);
    ExactOperator::from_terms(
        order,
        (0..terms)
            .map(|_| {
                let j = rng.gen_range(0..=order);
                let p = rng.gen_range(0..=tol::PROPERTY_MAX_POWER);
                let q = rng.gen_range(0..=tol::PROPERTY_MAX_POWER);
                (j, p, q, random_scalar(rng))
            })
            .collect::<Vec<_>>(),
    )
}

fn ac13() -> Outcome {
    let mut rng = StdRng::seed_from_u64(tol::PROPERTY_SEED);
    let mut failures: BTreeMap<&str, usize> = BTreeMap::new();
    let mut fail = |name: &'static str, ok: bool| {
        *failures.entry(name).or_default() += usize::from(!ok);
    };
    for _ in 0..tol::PROPERTY_CASES {
        let (a, b, c) = (random_operator(&mut rng, 2), random_operator(&mut rng, 2), random_operator(&mut rng, 2));

        let jacobi = &(&commutator(&a, &commutator(&b, &c)) + &commutator(&b, &commutator(&c, &a)))
            + &commutator(&c, &commutator(&a, &b));
        fail("jacobi", jacobi.is_zero());
        fail("associativity", multiply(&multiply(&a, &b), &c) == multiply(&a, &multiply(&b, &c)));
        fail("dagger", dagger(&multiply(&a, &b)) == multiply(&dagger(&b), &dagger(&a)));

        let (x, y) = (random_operator(&mut rng, 0), random_operator(&mut rng, 0));
        let dim = tol::MATRIX_DIM;
        let mx = build_matrix(&x, 0.0, dim).unwrap();
        let herm = build_matrix(&(&x + &dagger(&x)), 0.0, dim).unwrap();
        fail("hermitian-symmetric", mx.is_symmetric() == x.is_hermitian() && herm.is_symmetric());

        let w = tol::PROPERTY_MAX_POWER as usize;
        let keep = dim - 2 * w;
        let prod = build_matrix(&multiply(&x, &y), 0.0, dim).unwrap().entries;
        let rhs = &mx.entries * &build_matrix(&y, 0.0, dim).unwrap().entries;
        let scale = prod.amax().max(1.0);
        let diff = (prod.view((0, 0), (keep, keep)) - rhs.view((0, 0), (keep, keep))).amax();
        fail("block-homomorphism", diff <= tol::MATRIX_REL_TOL * scale);
    }
    let pass = failures.values().all(|&n| n == 0);
    let summary: Vec<String> =
        failures.iter().map(|(k, n)| format!("{k} {}/{}", tol::PROPERTY_CASES - n, tol::PROPERTY_CASES)).collect();
    Outcome::new(
        pass,
        format!("seed {:#x}, powers ≤ {}: {}", tol::PROPERTY_SEED, tol::PROPERTY_MAX_POWER, summary.join(", ")),
    )
}
