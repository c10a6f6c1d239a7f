//! Order-by-order construction of `U = exp(X)` with `U†H₀U = H₀ + P − Λ`.
//!
//! At λʲ the only place the new generator slice `Xⱼ` enters is through
//! `[H₀, Xⱼ]`, and `[H₀, λʲ(a†ᵖaᑫ − a†ᑫaᵖ)] = (p − q)·λʲ(a†ᵖaᑫ + a†ᑫaᵖ)`.
//! So every off-diagonal monomial is cancelled by one division and whatever
//! stays on the diagonal becomes `Λⱼ`.

use num_bigint::BigInt;

use crate::combinatorics::{factorial, weyl_binomial};
use crate::error::{Error, Result};
use crate::hamiltonian::{free_hamiltonian, potential_term};
use crate::lie::{generate_algebra, LieAlgebra, LieBasisElement, Parity};
use crate::number::NumberPolynomial;
use crate::scalar::Coefficient;
use crate::weyl::{commutator, NormalOrderedOperator};

/// One antisymmetric generator with a possibly unsolved coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorTerm<C> {
    pub element: LieBasisElement,
    pub coefficient: Option<C>,
}

/// `X = Σⱼ Σ α·λʲ(a†ᵖaᑫ − a†ᑫaᵖ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorAnsatz<C> {
    order: usize,
    terms: Vec<GeneratorTerm<C>>,
}

impl<C: Coefficient> GeneratorAnsatz<C> {
    pub fn new(order: usize) -> Self {
        Self { order, terms: Vec::new() }
    }

    /// One unknown for every antisymmetric pair of the algebra at every
    /// λ-power from the pair's own up to the algebra order.
    pub fn from_algebra(algebra: &LieAlgebra<C>) -> Self {
        let order = algebra.order();
        let mut ansatz = Self::new(order);
        for j in 1..=order {
            for e in algebra.pairs(Parity::Antisymmetric) {
                if e.lambda_power <= j {
                    let element = LieBasisElement { lambda_power: j, ..e };
                    if ansatz.position(&element).is_none() {
                        ansatz.terms.push(GeneratorTerm { element, coefficient: None });
                    }
                }
            }
        }
        ansatz.sort();
        ansatz
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> &[GeneratorTerm<C>] {
        &self.terms
    }

    fn position(&self, element: &LieBasisElement) -> Option<usize> {
        self.terms.iter().position(|t| t.element == *element)
    }

    fn sort(&mut self) {
        self.terms.sort_by_key(|t| {
            (
                t.element.lambda_power,
                std::cmp::Reverse(t.element.high + t.element.low),
                std::cmp::Reverse(t.element.high),
            )
        });
    }

    /// Adds an unknown; no-op when already present.
    pub fn push_unknown(&mut self, element: LieBasisElement) -> Result<()> {
        if element.parity != Parity::Antisymmetric {
            return Err(Error::Validation(format!("generator {element} must be antisymmetric")));
        }
        if self.position(&element).is_none() {
            self.terms.push(GeneratorTerm { element, coefficient: None });
            self.sort();
        }
        Ok(())
    }

    pub fn set(&mut self, element: LieBasisElement, value: C) -> Result<()> {
        self.push_unknown(element)?;
        let i = self.position(&element).expect("just inserted");
        self.terms[i].coefficient = Some(value);
        Ok(())
    }

    /// Solved coefficient of `λʲ(a†ᵖaᑫ − a†ᑫaᵖ)`, zero when absent.
    pub fn coefficient(&self, lambda_power: usize, high: u32, low: u32) -> Option<C> {
        self.terms
            .iter()
            .find(|t| t.element.lambda_power == lambda_power && t.element.high == high && t.element.low == low)
            .map_or(Some(C::zero()), |t| t.coefficient.clone())
    }

    pub fn is_solved(&self) -> bool {
        self.terms.iter().all(|t| t.coefficient.is_some())
    }

    fn settle_unknowns(&mut self) {
        for t in &mut self.terms {
            t.coefficient.get_or_insert_with(C::zero);
        }
    }

    /// Nonzero `(λ-power, p, q, α)`.
    pub fn alphas(&self) -> Vec<(usize, u32, u32, C)> {
        self.terms
            .iter()
            .filter_map(|t| {
                let c = t.coefficient.clone()?;
                (!c.is_negligible()).then_some((t.element.lambda_power, t.element.high, t.element.low, c))
            })
            .collect()
    }

    pub fn to_operator(&self) -> Result<NormalOrderedOperator<C>> {
        let mut x = NormalOrderedOperator::zero(self.order);
        for t in &self.terms {
            let c = t.coefficient.clone().ok_or_else(|| Error::UnsolvedGenerator(t.element.to_string()))?;
            x = &x + &t.element.operator::<C>(self.order).scale(&c);
        }
        Ok(x)
    }
}

/// `Σₘ (1/m!)·ad_x^m(h) = e^x h e^(−x)`, for `x` with no λ⁰ content.
pub fn conjugate_by<C: Coefficient>(
    h: &NormalOrderedOperator<C>,
    x: &NormalOrderedOperator<C>,
) -> NormalOrderedOperator<C> {
    let order = h.truncation_order().min(x.truncation_order());
    let h = h.truncate(order);
    let mut total = h.clone();
    let mut term = h;
    for m in 1..=order + 1 {
        term = commutator(x, &term).scale(&(C::one() / C::from_i64(m as i64)));
        if term.is_zero() {
            break;
        }
        total = &total + &term;
    }
    total
}

/// `U†hU = Σₘ (1/m!)[(−X)⁽ᵐ⁾, h]` truncated at λ^order.
pub fn hadamard_conjugate<C: Coefficient>(
    h: &NormalOrderedOperator<C>,
    x: &GeneratorAnsatz<C>,
    order: usize,
) -> Result<NormalOrderedOperator<C>> {
    let x = x.to_operator()?.with_order(order);
    Ok(conjugate_by(&h.with_order(order), &-x))
}

#[derive(Clone, Debug)]
pub struct PerturbationResult<C> {
    /// Potential power for single-monomial problems.
    pub n: Option<u32>,
    pub order: usize,
    pub perturbation: NormalOrderedOperator<C>,
    pub generator: GeneratorAnsatz<C>,
    /// `Λ` as an operator (diagonal by construction).
    pub lambda: NormalOrderedOperator<C>,
    /// Diagonal content of `Λ`.
    pub lambda_operator: NumberPolynomial<C>,
    /// Level shifts: diagonal of `e^X Λ e^(−X)` after re-solving any
    /// off-diagonal remainder. Equals `lambda_operator` through λ².
    pub eigenvalue_series: NumberPolynomial<C>,
    pub dressing_rounds: usize,
    /// `U†H₀U`
    pub conjugated: NormalOrderedOperator<C>,
    /// `U†H₀U − (H₀ + P − Λ)`; zero by construction.
    pub residual: NormalOrderedOperator<C>,
}

impl<C: Coefficient> PerturbationResult<C> {
    pub fn generator_operator(&self) -> NormalOrderedOperator<C> {
        self.generator.to_operator().expect("result generators are solved")
    }

    pub fn level_series(&self, n: u64) -> crate::weyl::LambdaSeries<C> {
        self.eigenvalue_series.level_series(n)
    }

    pub fn eigenvalue(&self, n: u64, lambda: &C) -> C {
        self.eigenvalue_series.eigenvalue(n, lambda)
    }

    pub fn eigenvalue_f64(&self, n: u64, lambda: f64) -> f64 {
        self.eigenvalue_series.eigenvalue_f64(n, lambda)
    }

    /// `H₀ + P`
    pub fn hamiltonian(&self) -> NormalOrderedOperator<C> {
        &free_hamiltonian(self.order) + &self.perturbation
    }
}

fn monomial_label(p: u32, q: u32) -> String {
    match (p, q) {
        (0, 0) => "I".into(),
        (p, 0) => format!("a†^{p}"),
        (0, q) => format!("a^{q}"),
        (p, q) => format!("a†^{p}·a^{q}"),
    }
}

struct Solved<C> {
    generator: GeneratorAnsatz<C>,
    x: NormalOrderedOperator<C>,
    lambda: NormalOrderedOperator<C>,
}

fn solve_core<C: Coefficient>(
    perturbation: &NormalOrderedOperator<C>,
    order: usize,
    algebra: Option<&LieAlgebra<C>>,
) -> Result<Solved<C>> {
    let perturbation = perturbation.with_order(order);
    if !perturbation.lambda_slice(0).is_zero() {
        return Err(Error::Validation("perturbation must vanish at λ = 0".into()));
    }
    let h0 = free_hamiltonian::<C>(order);
    let target = &h0 + &perturbation;
    let mut generator = match algebra {
        Some(a) => GeneratorAnsatz::from_algebra(a),
        None => GeneratorAnsatz::new(order),
    };
    let mut x = NormalOrderedOperator::zero(order);
    let mut lambda = NormalOrderedOperator::zero(order);

    for j in 1..=order {
        let deficit = (&conjugate_by(&h0, &-&x) - &target).lambda_component(j);
        for (&(p, q), c) in &deficit {
            if p == q {
                lambda = &lambda + &NormalOrderedOperator::term(p, p, j, -c.clone(), order);
                continue;
            }
            if p < q {
                continue;
            }
            let partner = deficit.get(&(q, p)).cloned().unwrap_or_else(C::zero);
            if !(partner.clone() - c.clone()).is_negligible() {
                return Err(Error::Validation(format!(
                    "perturbation is not Hermitian: λ^{j} {} has {c} but its adjoint has {partner}",
                    monomial_label(p, q)
                )));
            }
            if let Some(a) = algebra {
                if !a.has_generator(j, p, q) {
                    return Err(Error::ClosureInsufficient { order: j, monomial: monomial_label(p, q) });
                }
            }
            let alpha = -c.clone() / C::from_i64((p - q) as i64);
            let element = LieBasisElement::antisymmetric(j, p, q)?;
            x = &x + &element.operator::<C>(order).scale(&alpha);
            generator.set(element, alpha)?;
        }
    }
    generator.settle_unknowns();
    Ok(Solved { generator, x, lambda })
}

/// Pushes `Λ` through `e^X · e^(−X)` until no off-diagonal part survives.
fn dress<C: Coefficient>(solved: &Solved<C>, order: usize) -> Result<(NumberPolynomial<C>, usize)> {
    let mut effective = conjugate_by(&solved.lambda, &solved.x);
    let mut rounds = 0;
    while !effective.off_diagonal().is_zero() {
        if rounds > order {
            return Err(Error::Validation("eigenvalue dressing did not terminate".into()));
        }
        let next = solve_core(&effective, order, None)?;
        effective = conjugate_by(&next.lambda, &next.x);
        rounds += 1;
    }
    Ok((NumberPolynomial::from_diagonal(&effective), rounds))
}

/// Solves `H₀ + P` through λ^order. With an algebra, every generator used must
/// come from it, otherwise [`Error::ClosureInsufficient`] is returned.
pub fn solve_perturbation<C: Coefficient>(
    perturbation: &NormalOrderedOperator<C>,
    order: usize,
    algebra: Option<&LieAlgebra<C>>,
) -> Result<PerturbationResult<C>> {
    if order == 0 {
        return Err(Error::Validation("order must be at least 1".into()));
    }
    if let Some(a) = algebra {
        if a.order() < order {
            let next = a.order() + 1;
            let unconstrained = solve_core(&perturbation.with_order(next), next, None)?;
            let monomial = unconstrained
                .generator
                .alphas()
                .into_iter()
                .find(|t| t.0 == next)
                .map_or_else(|| format!("beyond order {}", a.order()), |t| monomial_label(t.1, t.2));
            return Err(Error::ClosureInsufficient { order: next, monomial });
        }
    }
    let solved = solve_core(perturbation, order, algebra)?;
    let (eigenvalue_series, dressing_rounds) = dress(&solved, order)?;
    let perturbation = perturbation.with_order(order);
    let h0 = free_hamiltonian::<C>(order);
    let conjugated = conjugate_by(&h0, &-&solved.x);
    let residual = &(&conjugated - &(&h0 + &perturbation)) + &solved.lambda;
    Ok(PerturbationResult {
        n: None,
        order,
        perturbation,
        lambda_operator: NumberPolynomial::from_diagonal(&solved.lambda),
        lambda: solved.lambda,
        generator: solved.generator,
        eigenvalue_series,
        dressing_rounds,
        conjugated,
        residual,
    })
}

/// `H₀ + λxⁿ` at first order, `n ≥ 3`.
pub fn solve_first_order<C: Coefficient>(n: u32) -> Result<PerturbationResult<C>> {
    if n < 3 {
        return Err(Error::HarmonicCase(n));
    }
    solve_higher_order(n, 1)
}

/// `H₀ + λxⁿ` through λᵏ inside `𝒜ₙ⁽ᵏ⁾`.
///
/// `n ∈ {1, 2}` is accepted and runs inside the four-element algebra.
pub fn solve_higher_order<C: Coefficient>(n: u32, order: usize) -> Result<PerturbationResult<C>> {
    let algebra = generate_algebra::<C>(n, order)?;
    solve_with_algebra(n, &algebra, order)
}

pub fn solve_with_algebra<C: Coefficient>(
    n: u32,
    algebra: &LieAlgebra<C>,
    order: usize,
) -> Result<PerturbationResult<C>> {
    let mut result = solve_perturbation(&potential_term::<C>(n, order), order, Some(algebra))?;
    result.n = Some(n);
    Ok(result)
}

/// First-order shift for `x^(2k)`: coefficient `{2k k}_(k−j) / 2ᵏ` on `j!·C(N, j)`.
pub fn even_first_order_closed_form<C: Coefficient>(k: u32) -> NumberPolynomial<C> {
    let row = (0..=k)
        .map(|j| {
            let w = weyl_binomial(2 * k, k, k - j).expect("k − j ≤ k");
            C::from_rational(&w) * C::sqrt2_pow(-2 * k as i32)
        })
        .collect();
    NumberPolynomial::from_falling_factorial(vec![Vec::new(), row])
}

/// `(2k)! / (2^(2k) k!)`, the ground-state first-order shift for `x^(2k)`.
pub fn ground_state_closed_form<C: Coefficient>(k: u32) -> C {
    let denom: BigInt = (BigInt::from(1) << (2 * k)) * factorial(k);
    C::from_integer(&factorial(2 * k)) / C::from_integer(&denom)
}

/// First-order α for `x^(2k−1)` indexed by `(m, ℓ)`, attached to
/// `λ(a†ᵖaᑫ − a†ᑫaᵖ)` with `p = 2m − ℓ − 1`, `q = ℓ`.
///
/// `α·(2m − 2ℓ − 1) = 2^(−(2k−1)/2)·{2k−1  k−m+ℓ}_(k−m)`.
pub fn odd_alpha_closed_form<C: Coefficient>(k: u32, m: u32, l: u32) -> Result<(u32, u32, C)> {
    if k == 0 || m > k || 2 * m < 2 * l + 2 {
        return Err(Error::Domain(format!("odd alpha needs 1 <= k, m <= k, l < m - 1/2; got k={k}, m={m}, l={l}")));
    }
    let n = 2 * k - 1;
    let w = weyl_binomial(n, k - m + l, k - m)?;
    let shift = 2 * m - 2 * l - 1;
    let value = C::from_rational(&w) * C::sqrt2_pow(-(n as i32)) / C::from_i64(shift as i64);
    Ok((2 * m - l - 1, l, value))
}
