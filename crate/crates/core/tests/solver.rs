use proptest::prelude::*;
use weylpert::oracle::rs_corrections_polynomial;
use weylpert::{
    compare, dagger, polynomial_potential, solve_higher_order, solve_perturbation, FloatResult, Radical2Scalar as R,
};

fn polynomial() -> impl Strategy<Value = Vec<(u32, R)>> {
    prop::collection::btree_map(1u32..=6, (-5i64..=5, 1i64..=4), 1..=3)
        .prop_map(|m| m.into_iter().filter(|(_, (n, _))| *n != 0).map(|(p, (n, d))| (p, R::ratio(n, d))).collect())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn polynomial_second_order_matches_rs(terms in polynomial()) {
        prop_assume!(!terms.is_empty());
        let p = polynomial_potential(&terms, 2);
        let res = solve_perturbation(&p, 2, None).unwrap();
        prop_assert!(res.residual.is_zero());
        let x = res.generator_operator();
        prop_assert_eq!(dagger(&x), -&x);
        for n in 0..4 {
            let rs = rs_corrections_polynomial(&terms, n);
            let s = res.level_series(n);
            prop_assert_eq!(s.coeff(1), rs.first_order, "level {}", n);
            prop_assert_eq!(s.coeff(2), rs.second_order, "level {}", n);
        }
    }
}

#[test]
fn float_path_tracks_exact() {
    for n in 3..=6 {
        for k in 1..=2 {
            let exact = solve_higher_order::<R>(n, k).unwrap();
            let float: FloatResult = solve_higher_order(n, k).unwrap();
            for level in 0..4 {
                let (e, f) = (exact.level_series(level), float.level_series(level));
                for j in 0..=k {
                    let want = e.coeff(j).to_f64();
                    assert!((f.coeff(j) - want).abs() <= 1e-12 * want.abs().max(1.0), "x^{n} k={k} n={level} λ^{j}");
                }
            }
        }
    }
}

#[test]
fn third_order_quartic_against_diagonalization() {
    let res = solve_higher_order::<R>(4, 3).unwrap();
    let report = compare(&res, 0, &[2e-3, 4e-3, 8e-3], Some(80)).unwrap();
    assert!(report.coefficients_match());
    assert_eq!(res.level_series(0).coeff(3), R::ratio(333, 16));
    let slope = report.slope.unwrap();
    assert!(slope > 3.5, "slope {slope}");
}

#[test]
fn mixed_cubic_quartic_numerics() {
    let p = polynomial_potential(&[(3, R::integer(1)), (4, R::ratio(1, 2))], 2);
    let res = solve_perturbation(&p, 2, None).unwrap();
    for level in 0..3 {
        let report = compare(&res, level, &[1e-3, 3e-3, 1e-2], Some(90)).unwrap();
        assert!(report.coefficients_match(), "level {level}");
        assert!(report.slope_ok, "level {level}: {:?}", report.slope);
    }
}
