use crate::scalar::Coefficient;
use crate::weyl::{position_power, NormalOrderedOperator};

/// `H₀ = a†a + 1/2`.
pub fn free_hamiltonian<C: Coefficient>(order: usize) -> NormalOrderedOperator<C> {
    NormalOrderedOperator::from_terms(order, [(0, 1, 1, C::one()), (0, 0, 0, C::from_ratio(1, 2))])
}

/// `λxⁿ`.
pub fn potential_term<C: Coefficient>(n: u32, order: usize) -> NormalOrderedOperator<C> {
    position_power::<C>(n, order).shift_lambda(1)
}

/// `λ Σ cᵢ x^(pᵢ)`.
pub fn polynomial_potential<C: Coefficient>(terms: &[(u32, C)], order: usize) -> NormalOrderedOperator<C> {
    terms.iter().fold(NormalOrderedOperator::zero(order), |acc, (p, c)| &acc + &potential_term::<C>(*p, order).scale(c))
}

/// `Hₙ = H₀ + λxⁿ`.
pub fn perturbed_hamiltonian<C: Coefficient>(n: u32, order: usize) -> NormalOrderedOperator<C> {
    &free_hamiltonian(order) + &potential_term(n, order)
}
