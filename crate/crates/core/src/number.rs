//! Functions of the number operator, `f(N)`, graded by λ-order.

use num_bigint::BigInt;

use crate::combinatorics::{stirling_first, stirling_second};
use crate::scalar::Coefficient;
use crate::weyl::{LambdaSeries, NormalOrderedOperator};

/// Per-λ-order polynomial in `N` stored in the falling-factorial basis.
///
/// `coeffs[j][i]` multiplies `λʲ · i!·C(N, i) = λʲ · N(N−1)⋯(N−i+1)`, which
/// is exactly the normally ordered monomial `a†ⁱaⁱ`. Converting between the
/// two representations is therefore free.
#[derive(Clone, Debug, PartialEq)]
pub struct NumberPolynomial<C> {
    coeffs: Vec<Vec<C>>,
}

fn falling_factorial(n: u64, i: usize) -> BigInt {
    (0..i as u64).fold(BigInt::from(1), |acc, t| if t > n { BigInt::from(0) } else { acc * (n - t) })
}

impl<C: Coefficient> NumberPolynomial<C> {
    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![Vec::new(); order + 1] }
    }

    /// From falling-factorial coefficients, one row per λ-order.
    pub fn from_falling_factorial(mut coeffs: Vec<Vec<C>>) -> Self {
        assert!(!coeffs.is_empty());
        for row in &mut coeffs {
            trim(row);
        }
        Self { coeffs }
    }

    /// From ordinary power coefficients `Σ c_{j,m} λʲ Nᵐ`.
    pub fn from_monomial_basis(rows: Vec<Vec<C>>) -> Self {
        let degree = rows.iter().map(Vec::len).max().unwrap_or(0);
        let s2 = stirling_second(degree);
        let coeffs = rows
            .into_iter()
            .map(|row| {
                let mut out = vec![C::zero(); row.len()];
                for (m, c) in row.iter().enumerate() {
                    for (i, slot) in out.iter_mut().enumerate().take(m + 1) {
                        *slot = slot.clone() + c.clone() * C::from_integer(&s2[m][i]);
                    }
                }
                out
            })
            .collect();
        Self::from_falling_factorial(coeffs)
    }

    /// Reads the diagonal `a†ⁱaⁱ` terms of an operator; off-diagonal terms are ignored.
    pub fn from_diagonal(op: &NormalOrderedOperator<C>) -> Self {
        let order = op.truncation_order();
        let mut coeffs = vec![Vec::new(); order + 1];
        for (j, p, q, c) in op.flat_terms() {
            if p != q {
                continue;
            }
            let row: &mut Vec<C> = &mut coeffs[j];
            if row.len() <= p as usize {
                row.resize(p as usize + 1, C::zero());
            }
            row[p as usize] = c;
        }
        Self::from_falling_factorial(coeffs)
    }

    pub fn truncation_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Falling-factorial coefficients at λʲ.
    pub fn order_coefficients(&self, power: usize) -> &[C] {
        self.coeffs.get(power).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Coefficient of `λʲ · i!·C(N,i)`.
    pub fn coefficient(&self, power: usize, i: usize) -> C {
        self.order_coefficients(power).get(i).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Vec::is_empty)
    }

    pub fn is_order_zero(&self, power: usize) -> bool {
        self.order_coefficients(power).is_empty()
    }

    /// Ordinary power-basis coefficients `c_{j,m}` of `λʲ Nᵐ`.
    pub fn to_monomial_basis(&self) -> Vec<Vec<C>> {
        let degree = self.coeffs.iter().map(Vec::len).max().unwrap_or(0);
        let s1 = stirling_first(degree);
        self.coeffs
            .iter()
            .map(|row| {
                let mut out = vec![C::zero(); row.len()];
                for (i, c) in row.iter().enumerate() {
                    for (m, slot) in out.iter_mut().enumerate().take(i + 1) {
                        *slot = slot.clone() + c.clone() * C::from_integer(&s1[i][m]);
                    }
                }
                trim(&mut out);
                out
            })
            .collect()
    }

    /// Exact value at `N = n` as a λ-series.
    pub fn evaluate(&self, n: u64) -> LambdaSeries<C> {
        let order = self.truncation_order();
        LambdaSeries::from_coeffs(
            (0..=order)
                .map(|j| {
                    self.coeffs[j]
                        .iter()
                        .enumerate()
                        .fold(C::zero(), |acc, (i, c)| acc + c.clone() * C::from_integer(&falling_factorial(n, i)))
                })
                .collect(),
        )
    }

    /// Energy of level `n` as a λ-series: `n + 1/2 + Σ_j λʲ·f_j(n)`.
    pub fn level_series(&self, n: u64) -> LambdaSeries<C> {
        let baseline = LambdaSeries::constant(C::from_i64(n as i64) + C::from_ratio(1, 2), self.truncation_order());
        &baseline + &self.evaluate(n)
    }

    /// Exact energy at a given λ.
    pub fn eigenvalue(&self, n: u64, lambda: &C) -> C {
        self.level_series(n).evaluate(lambda)
    }

    pub fn eigenvalue_f64(&self, n: u64, lambda: f64) -> f64 {
        self.level_series(n).evaluate_f64(lambda)
    }

    /// Back to an operator `Σ c_{j,i} λʲ a†ⁱaⁱ`.
    pub fn to_operator(&self) -> NormalOrderedOperator<C> {
        let order = self.truncation_order();
        NormalOrderedOperator::from_terms(
            order,
            self.coeffs
                .iter()
                .enumerate()
                .flat_map(|(j, row)| row.iter().enumerate().map(move |(i, c)| (j, i as u32, i as u32, c.clone()))),
        )
    }

    pub fn scale(&self, factor: &C) -> Self {
        Self::from_falling_factorial(
            self.coeffs.iter().map(|row| row.iter().map(|c| c.clone() * factor.clone()).collect()).collect(),
        )
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let order = self.truncation_order().min(rhs.truncation_order());
        Self::from_falling_factorial(
            (0..=order)
                .map(|j| {
                    let (a, b) = (&self.coeffs[j], &rhs.coeffs[j]);
                    (0..a.len().max(b.len()))
                        .map(|i| a.get(i).cloned().unwrap_or_else(C::zero) + b.get(i).cloned().unwrap_or_else(C::zero))
                        .collect()
                })
                .collect(),
        )
    }
}

fn trim<C: Coefficient>(row: &mut Vec<C>) {
    for c in row.iter_mut() {
        if !C::EXACT && c.is_negligible() {
            *c = C::zero();
        }
    }
    while row.last().is_some_and(|c| c.is_negligible()) {
        row.pop();
    }
}

/// Splits an operator into its number-operator part and the off-diagonal remainder.
pub fn to_number_polynomial<C: Coefficient>(
    op: &NormalOrderedOperator<C>,
) -> (NumberPolynomial<C>, NormalOrderedOperator<C>) {
    (NumberPolynomial::from_diagonal(op), op.off_diagonal())
}
