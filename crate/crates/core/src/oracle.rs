//! Independent checks: truncated Fock matrices with a dense symmetric
//! eigensolver, and exact Rayleigh–Schrödinger sums.
//!
//! The exact sums act with ladder operators on the unnormalized states
//! `|k) = a†ᵏ|0⟩`, where `a†|k) = |k+1)` and `a|k) = k|k−1)`. Every amplitude is
//! then an integer and `⟨m|V|n⟩² = S²·m!/n!` stays inside ℚ(√2).

use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, factorial};
use crate::error::{Error, Result};
use crate::hamiltonian::free_hamiltonian;
use crate::perturbation::PerturbationResult;
use crate::radical::Radical2Scalar;
use crate::scalar::Coefficient;
use crate::weyl::NormalOrderedOperator;

/// Dense `D×D` representation on `|0⟩..|D−1⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct FockMatrix {
    pub dim: usize,
    pub entries: DMatrix<f64>,
    pub max_power: u32,
}

impl FockMatrix {
    /// Rows and columns within this distance of the cutoff are unreliable
    /// for products.
    pub fn corruption_band(&self) -> usize {
        2 * self.max_power as usize
    }

    pub fn max_asymmetry(&self) -> f64 {
        (&self.entries - self.entries.transpose()).amax()
    }

    pub fn is_symmetric(&self) -> bool {
        self.max_asymmetry() <= 1e-12 * self.entries.amax().max(1.0)
    }
}

/// `⟨r|a†ᵖaᑫ|c⟩`, nonzero only for `r = c − q + p`.
fn ladder_element(p: u32, q: u32, c: usize) -> f64 {
    let (p, q) = (p as usize, q as usize);
    let mid = c - q;
    let lower: f64 = (mid + 1..=c).map(|i| i as f64).product();
    let upper: f64 = (mid + 1..=mid + p).map(|i| i as f64).product();
    (lower * upper).sqrt()
}

/// `a†ᵖaᑫ` truncated to dimension `dim`.
pub fn ladder_matrix(p: u32, q: u32, dim: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(dim, dim);
    for c in q as usize..dim {
        let r = c - q as usize + p as usize;
        if r < dim {
            m[(r, c)] = ladder_element(p, q, c);
        }
    }
    m
}

/// Evaluates the λ-series coefficients at `lambda_value` and sums the
/// truncated monomial matrices.
pub fn build_matrix<C: Coefficient>(
    op: &NormalOrderedOperator<C>,
    lambda_value: f64,
    dim: usize,
) -> Result<FockMatrix> {
    let max_power = op.max_power();
    let required = 2 * max_power as usize;
    if dim <= required {
        return Err(Error::Dimension { dim, required });
    }
    let mut entries = DMatrix::zeros(dim, dim);
    for (&(p, q), series) in op.terms() {
        let c = series.evaluate_f64(lambda_value);
        if c == 0.0 {
            continue;
        }
        for col in q as usize..dim {
            let row = col - q as usize + p as usize;
            if row < dim {
                entries[(row, col)] += c * ladder_element(p, q, col);
            }
        }
    }
    Ok(FockMatrix { dim, entries, max_power })
}

/// The `count` lowest eigenvalues, ascending.
pub fn numeric_spectrum(h: &FockMatrix, count: usize) -> Result<Vec<f64>> {
    if count > h.dim {
        return Err(Error::Validation(format!("asked for {count} eigenvalues of a {}-dimensional matrix", h.dim)));
    }
    if !h.is_symmetric() {
        return Err(Error::NotSymmetric(h.max_asymmetry()));
    }
    let mut values: Vec<f64> = SymmetricEigen::new(h.entries.clone()).eigenvalues.iter().copied().collect();
    values.sort_by(|a, b| a.total_cmp(b));
    values.truncate(count);
    Ok(values)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RsCorrection {
    pub level: u64,
    pub first_order: Radical2Scalar,
    pub second_order: Radical2Scalar,
}

/// Amplitudes `c_k` of `a†ᵖaᑫ|n) = c·|n − q + p)` summed over a normal-ordered operator.
fn apply_operator(op: &[(u32, u32, Radical2Scalar)], n: usize) -> Vec<(usize, Radical2Scalar)> {
    let mut out: Vec<(usize, Radical2Scalar)> = Vec::new();
    for (p, q, c) in op {
        let (p, q) = (*p as usize, *q as usize);
        if q > n {
            continue;
        }
        let weight: BigInt = (n - q + 1..=n).map(BigInt::from).product();
        let target = n - q + p;
        let value = c * &Radical2Scalar::rational(weight.into());
        match out.iter_mut().find(|(k, _)| *k == target) {
            Some((_, v)) => *v = &*v + &value,
            None => out.push((target, value)),
        }
    }
    out
}

/// Amplitudes of `(a + a†)ᵖ|n)` by repeated ladder action.
fn apply_position_power(p: u32, n: usize) -> Vec<BigInt> {
    let mut state = vec![BigInt::from(0); n + p as usize + 1];
    state[n] = BigInt::from(1);
    for _ in 0..p {
        let mut next = vec![BigInt::from(0); state.len()];
        for (k, amp) in state.iter().enumerate() {
            if amp == &BigInt::from(0) {
                continue;
            }
            if k + 1 < next.len() {
                next[k + 1] += amp;
            }
            if k > 0 {
                next[k - 1] += amp * BigInt::from(k);
            }
        }
        state = next;
    }
    state
}

/// `⟨m|V|n⟩²` from unnormalized amplitude `s`: `s²·m!/n!`.
fn squared_element(s: &Radical2Scalar, m: usize, n: usize) -> Radical2Scalar {
    let ratio = num_rational::BigRational::new(factorial(m as u32), factorial(n as u32));
    &(s * s) * &Radical2Scalar::rational(ratio)
}

fn rs_from_amplitudes(level: u64, amplitudes: &[(usize, Radical2Scalar)]) -> RsCorrection {
    let n = level as usize;
    let mut first = Radical2Scalar::integer(0);
    let mut second = Radical2Scalar::integer(0);
    for (m, s) in amplitudes {
        if *m == n {
            first = &first + s;
        } else {
            let gap = Radical2Scalar::integer(n as i64 - *m as i64);
            second = &second + &(&squared_element(s, *m, n) / &gap);
        }
    }
    RsCorrection { level, first_order: first, second_order: second }
}

/// First and second Rayleigh–Schrödinger corrections for `V = xᵖ`.
pub fn rs_corrections(power: u32, level: u64) -> RsCorrection {
    rs_corrections_polynomial(&[(power, Radical2Scalar::integer(1))], level)
}

/// Same for `V = Σ cᵢ x^(pᵢ)`.
pub fn rs_corrections_polynomial(terms: &[(u32, Radical2Scalar)], level: u64) -> RsCorrection {
    let n = level as usize;
    let mut amplitudes: Vec<(usize, Radical2Scalar)> = Vec::new();
    for (p, c) in terms {
        let scale = c * &Radical2Scalar::sqrt2_power(-(*p as i32));
        for (m, amp) in apply_position_power(*p, n).into_iter().enumerate() {
            if amp == BigInt::from(0) {
                continue;
            }
            let value = &scale * &Radical2Scalar::rational(amp.into());
            match amplitudes.iter_mut().find(|(k, _)| *k == m) {
                Some((_, v)) => *v = &*v + &value,
                None => amplitudes.push((m, value)),
            }
        }
    }
    rs_from_amplitudes(level, &amplitudes)
}

/// Corrections for a general λ-graded perturbation: the λ¹ slice enters both
/// orders, the λ² slice adds its diagonal to the second.
pub fn rs_corrections_operator(op: &NormalOrderedOperator<Radical2Scalar>, level: u64) -> RsCorrection {
    let slice = |j: usize| -> Vec<(u32, u32, Radical2Scalar)> {
        op.lambda_component(j).into_iter().map(|((p, q), c)| (p, q, c)).collect()
    };
    let mut rs = rs_from_amplitudes(level, &apply_operator(&slice(1), level as usize));
    let direct = rs_from_amplitudes(level, &apply_operator(&slice(2), level as usize));
    rs.second_order = &rs.second_order + &direct.first_order;
    rs
}

/// `51·C(n,3) + (117/2)·C(n,2) + 36n + 21/8`, negated; a closed form for the
/// quartic λ² coefficient that only holds at `n = 0`.
pub fn quartic_second_order_closed_form(level: u64) -> Radical2Scalar {
    let c = |k: u32| Radical2Scalar::rational(binomial(level as u32, k).into());
    let sum = &(&(&c(3) * &Radical2Scalar::integer(51)) + &(&c(2) * &Radical2Scalar::ratio(117, 2)))
        + &(&Radical2Scalar::integer(36 * level as i64) + &Radical2Scalar::ratio(21, 8));
    -sum
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientCheck {
    pub order: usize,
    pub symbolic: String,
    pub oracle: String,
    #[serde(rename = "match")]
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericPoint {
    pub lambda: f64,
    pub series: f64,
    pub eigenvalue: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InformationalCheck {
    pub description: String,
    pub order: usize,
    pub value: String,
    pub oracle: String,
    #[serde(rename = "match")]
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub level: u64,
    pub dimension: usize,
    pub coefficients: Vec<CoefficientCheck>,
    pub numeric: Vec<NumericPoint>,
    pub slope: Option<f64>,
    pub expected_slope: f64,
    pub slope_ok: bool,
    pub informational: Vec<InformationalCheck>,
}

impl ComparisonReport {
    pub fn coefficients_match(&self) -> bool {
        self.coefficients.iter().all(|c| c.matches)
    }
}

/// `n + k·p + 40`.
pub fn default_dimension(level: u64, order: usize, max_power: u32) -> usize {
    level as usize + order * max_power as usize + 40
}

/// Least-squares slope of `ln y` against `ln x`, skipping non-positive `y`.
pub fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    let logs: Vec<(f64, f64)> =
        points.iter().filter(|(x, y)| *x > 0.0 && *y > 0.0).map(|(x, y)| (x.ln(), y.ln())).collect();
    if logs.len() < 2 {
        return None;
    }
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = logs.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = logs.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Checks a solved series against exact RS sums and numeric diagonalization.
///
/// The numeric eigenvalue is the one nearest the series value: odd
/// potentials are unbounded below and their truncated matrices carry
/// spurious deep levels.
pub fn compare(
    result: &PerturbationResult<Radical2Scalar>,
    level: u64,
    lambdas: &[f64],
    dim: Option<usize>,
) -> Result<ComparisonReport> {
    let order = result.order;
    let max_power = result.perturbation.max_power();
    let dimension = dim.unwrap_or_else(|| default_dimension(level, order, max_power));
    let series = result.level_series(level);
    let rs = rs_corrections_operator(&result.perturbation, level);

    let mut coefficients = Vec::new();
    for (j, oracle) in [(1, &rs.first_order), (2, &rs.second_order)] {
        if j > order {
            break;
        }
        let symbolic = series.coeff(j);
        coefficients.push(CoefficientCheck {
            order: j,
            matches: &symbolic == oracle,
            symbolic: symbolic.to_string(),
            oracle: oracle.to_string(),
        });
    }

    let mut informational = Vec::new();
    if result.n == Some(4) && order >= 2 {
        let value = quartic_second_order_closed_form(level);
        informational.push(InformationalCheck {
            description: "closed-form quartic λ² polynomial -(51·C(n,3) + 117/2·C(n,2) + 36n + 21/8)".into(),
            order: 2,
            matches: value == rs.second_order,
            value: value.to_string(),
            oracle: rs.second_order.to_string(),
        });
    }

    let hamiltonian = &free_hamiltonian(order) + &result.perturbation;
    let mut numeric = Vec::new();
    for &lambda in lambdas {
        let matrix = build_matrix(&hamiltonian, lambda, dimension)?;
        let spectrum = numeric_spectrum(&matrix, dimension)?;
        let predicted = series.evaluate_f64(lambda);
        let eigenvalue = spectrum
            .iter()
            .copied()
            .min_by(|a, b| (a - predicted).abs().total_cmp(&(b - predicted).abs()))
            .expect("dimension is positive");
        numeric.push(NumericPoint { lambda, series: predicted, eigenvalue, residual: (predicted - eigenvalue).abs() });
    }
    let slope = log_log_slope(&numeric.iter().map(|p| (p.lambda, p.residual)).collect::<Vec<_>>());
    let expected_slope = (order + 1) as f64;
    Ok(ComparisonReport {
        level,
        dimension,
        coefficients,
        slope_ok: slope.is_some_and(|s| s >= order as f64 + 0.5),
        numeric,
        slope,
        expected_slope,
        informational,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perturbation::solve_higher_order;
    use crate::weyl::{dagger, expand_power, multiply, tests::arb_operator};
    use crate::Radical2Scalar as R;
    use proptest::prelude::*;

    #[test]
    fn number_operator_matrix() {
        let m = build_matrix(&NormalOrderedOperator::<R>::number(0), 0.0, 7).unwrap();
        assert_eq!(m.entries, DMatrix::from_diagonal(&nalgebra::DVector::from_fn(7, |i, _| i as f64)));
    }

    #[test]
    fn annihilation_superdiagonal() {
        let a = ladder_matrix(0, 1, 6);
        for r in 0..6 {
            for c in 0..6 {
                let expected = if c == r + 1 { (c as f64).sqrt() } else { 0.0 };
                assert_eq!(a[(r, c)], expected);
            }
        }
    }

    #[test]
    fn position_matrix_elements() {
        let x4 = build_matrix(&expand_power::<R>(4, 0).scale(&R::ratio(1, 4)), 0.0, 10).unwrap();
        assert!((x4.entries[(0, 0)] - 0.75).abs() < 1e-15);
        let x2 = build_matrix(&expand_power::<R>(2, 0).scale(&R::ratio(1, 2)), 0.0, 10).unwrap();
        assert!((x2.entries[(0, 2)] - 2f64.sqrt() / 2.0).abs() < 1e-15);
        assert!(matches!(
            build_matrix(&expand_power::<R>(4, 0), 0.0, 8),
            Err(Error::Dimension { dim: 8, required: 8 })
        ));
    }

    #[test]
    fn free_spectrum() {
        let h = build_matrix(&free_hamiltonian::<R>(0), 0.0, 50).unwrap();
        let low = numeric_spectrum(&h, 5).unwrap();
        for (n, e) in low.iter().enumerate() {
            assert!((e - (n as f64 + 0.5)).abs() < 1e-12);
        }
        let bad = FockMatrix { dim: 2, entries: DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]), max_power: 0 };
        assert!(matches!(numeric_spectrum(&bad, 1), Err(Error::NotSymmetric(_))));
        assert!(numeric_spectrum(&h, 51).is_err());
    }

    #[test]
    fn rayleigh_schrodinger_values() {
        let q = rs_corrections(4, 0);
        assert_eq!((q.first_order, q.second_order), (R::ratio(3, 4), R::ratio(-21, 8)));
        let c = rs_corrections(3, 0);
        assert_eq!((c.first_order, c.second_order), (R::integer(0), R::ratio(-11, 8)));
        let q1 = rs_corrections(4, 1);
        assert_eq!((q1.first_order, q1.second_order), (R::ratio(15, 4), R::ratio(-165, 8)));
        for p in [1, 3, 5, 7] {
            for n in 0..6 {
                assert_eq!(rs_corrections(p, n).first_order, R::integer(0));
            }
        }
        assert_eq!(rs_corrections(1, 3).second_order, R::ratio(-1, 2));
    }

    #[test]
    fn ground_second_order_is_non_positive() {
        for p in 1..=8 {
            assert!(rs_corrections(p, 0).second_order.to_f64() <= 0.0);
        }
    }

    #[test]
    fn operator_and_power_paths_agree() {
        for p in 1..=6 {
            let op = crate::hamiltonian::potential_term::<R>(p, 2);
            for n in 0..5 {
                assert_eq!(rs_corrections_operator(&op, n), rs_corrections(p, n), "p={p} n={n}");
            }
        }
    }

    #[test]
    fn quartic_ground_numeric() {
        let h = build_matrix(&crate::hamiltonian::perturbed_hamiltonian::<R>(4, 1), 0.01, 80).unwrap();
        let e0 = numeric_spectrum(&h, 1).unwrap()[0];
        // 1/2 + 0.0075 − 0.0002625 + (333/16)·10⁻⁶
        assert!((e0 - 0.5072375).abs() < 2e-5, "{e0}");
        assert!((e0 - 0.507258313).abs() < 5e-6, "{e0}");
    }

    #[test]
    fn truncation_is_stable() {
        let h = crate::hamiltonian::perturbed_hamiltonian::<R>(4, 1);
        for lambda in [0.01, 0.05] {
            let a = numeric_spectrum(&build_matrix(&h, lambda, 80).unwrap(), 1).unwrap()[0];
            let b = numeric_spectrum(&build_matrix(&h, lambda, 100).unwrap(), 1).unwrap()[0];
            assert!((a - b).abs() < 1e-10, "λ = {lambda}: {a} vs {b}");
        }
    }

    #[test]
    fn quartic_comparison() {
        let res = solve_higher_order::<R>(4, 2).unwrap();
        let report = compare(&res, 0, &[1e-3, 3e-3, 1e-2], None).unwrap();
        assert!(report.coefficients_match());
        assert!(report.slope_ok, "{:?}", report.slope);
        assert!(report.informational[0].matches);
        let report2 = compare(&res, 2, &[1e-3, 3e-3, 1e-2], None).unwrap();
        assert!(report2.coefficients_match());
        assert!(!report2.informational[0].matches);
    }

    #[test]
    fn slope_fit() {
        let pts: Vec<(f64, f64)> = [1e-3, 1e-2, 1e-1].iter().map(|&x: &f64| (x, 5.0 * x.powi(3))).collect();
        assert!((log_log_slope(&pts).unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(log_log_slope(&[(1.0, 0.0)]), None);
    }

    proptest! {
        #[test]
        fn hermitian_iff_symmetric(op in arb_operator(4, 0)) {
            let m = build_matrix(&op, 0.0, 4 * 2 + 6).unwrap();
            let sym = build_matrix(&(&op + &dagger(&op)), 0.0, 14).unwrap();
            prop_assert!(sym.is_symmetric());
            prop_assert_eq!(m.is_symmetric(), op.is_hermitian());
        }

        #[test]
        fn matrix_block_homomorphism(p in arb_operator(3, 0), q in arb_operator(3, 0)) {
            let dim = 20;
            let w = 3;
            let prod = build_matrix(&multiply(&p, &q), 0.0, dim).unwrap().entries;
            let mp = build_matrix(&p, 0.0, dim).unwrap().entries;
            let mq = build_matrix(&q, 0.0, dim).unwrap().entries;
            let rhs = &mp * &mq;
            let keep = dim - 2 * w;
            let scale = prod.amax().max(1.0);
            prop_assert!((prod.view((0, 0), (keep, keep)) - rhs.view((0, 0), (keep, keep))).amax() <= 1e-10 * scale);
        }
    }
}
