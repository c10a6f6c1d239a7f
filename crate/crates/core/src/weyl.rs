//! λ-truncated, normally ordered operator algebra on one bosonic mode.
//!
//! An operator is a finite sum `Σ c_{j,p,q} λʲ a†ᵖ aᑫ` stored as a map from
//! the normal-order key `(p, q)` to a [`LambdaSeries`]. The key *is* the
//! normal order, so no rewriting is ever needed after a product: the
//! monomial product rule
//!
//! ```text
//! a†ᵖaᑫ · a†ʳaˢ = Σₖ k!·C(q,k)·C(r,k) · a†^(p+r−k) a^(q+s−k)
//! ```
//!
//! produces normally ordered keys directly.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::combinatorics::{contraction_weight, weyl_binomial};
use crate::scalar::Coefficient;

/// A polynomial in the formal parameter λ with `λ^(K+1) = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaSeries<C> {
    coeffs: Vec<C>,
}

impl<C: Coefficient> LambdaSeries<C> {
    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![C::zero(); order + 1] }
    }

    pub fn constant(value: C, order: usize) -> Self {
        Self::monomial(0, value, order)
    }

    /// `value·λ^power`, or zero when `power` exceeds the truncation order.
    pub fn monomial(power: usize, value: C, order: usize) -> Self {
        let mut s = Self::zero(order);
        if power <= order {
            s.coeffs[power] = value;
        }
        s.canonicalize();
        s
    }

    /// Builds a series from coefficients `c_0..c_K`; `K = len − 1`.
    pub fn from_coeffs(coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty(), "a λ-series needs at least the λ⁰ slot");
        let mut s = Self { coeffs };
        s.canonicalize();
        s
    }

    pub fn truncation_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn coeff(&self, power: usize) -> C {
        self.coeffs.get(power).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_negligible())
    }

    pub fn lowest_power(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_negligible())
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.truncation_order());
        Self { coeffs: self.coeffs[..=order].to_vec() }
    }

    /// Re-embeds at a different order, padding with zeros or truncating.
    pub fn with_order(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, C::zero());
        Self { coeffs }
    }

    pub fn scale(&self, factor: &C) -> Self {
        let mut s = Self { coeffs: self.coeffs.iter().map(|c| c.clone() * factor.clone()).collect() };
        s.canonicalize();
        s
    }

    /// Multiplies by `λ^shift`, discarding anything past the truncation order.
    pub fn shift(&self, shift: usize) -> Self {
        let order = self.truncation_order();
        let mut out = Self::zero(order);
        for (j, c) in self.coeffs.iter().enumerate() {
            if j + shift <= order {
                out.coeffs[j + shift] = c.clone();
            }
        }
        out
    }

    pub fn evaluate(&self, lambda: &C) -> C {
        self.coeffs.iter().rev().fold(C::zero(), |acc, c| acc * lambda.clone() + c.clone())
    }

    pub fn evaluate_f64(&self, lambda: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * lambda + c.to_f64())
    }

    fn canonicalize(&mut self) {
        if !C::EXACT {
            for c in &mut self.coeffs {
                if c.is_negligible() {
                    *c = C::zero();
                }
            }
        }
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(C, C) -> C) -> Self {
        let order = self.truncation_order().min(rhs.truncation_order());
        let mut s = Self { coeffs: (0..=order).map(|j| f(self.coeffs[j].clone(), rhs.coeffs[j].clone())).collect() };
        s.canonicalize();
        s
    }
}

impl<C: Coefficient> Add for &LambdaSeries<C> {
    type Output = LambdaSeries<C>;
    fn add(self, rhs: &LambdaSeries<C>) -> LambdaSeries<C> {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl<C: Coefficient> Sub for &LambdaSeries<C> {
    type Output = LambdaSeries<C>;
    fn sub(self, rhs: &LambdaSeries<C>) -> LambdaSeries<C> {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl<C: Coefficient> Neg for &LambdaSeries<C> {
    type Output = LambdaSeries<C>;
    fn neg(self) -> LambdaSeries<C> {
        LambdaSeries { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }
}

impl<C: Coefficient> Mul for &LambdaSeries<C> {
    type Output = LambdaSeries<C>;
    fn mul(self, rhs: &LambdaSeries<C>) -> LambdaSeries<C> {
        let order = self.truncation_order().min(rhs.truncation_order());
        let mut out = LambdaSeries::<C>::zero(order);
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(order + 1 - i) {
                if b.is_zero() {
                    continue;
                }
                out.coeffs[i + j] = out.coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        out.canonicalize();
        out
    }
}

/// Normal-order key: `(creation power p, annihilation power q)` for `a†ᵖaᑫ`.
pub type Monomial = (u32, u32);

/// A sparse sum of normally ordered monomials with λ-series coefficients.
///
/// Zero coefficients are never stored, so equality is map equality.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalOrderedOperator<C> {
    terms: BTreeMap<Monomial, LambdaSeries<C>>,
    order: usize,
}

impl<C: Coefficient> NormalOrderedOperator<C> {
    pub fn zero(order: usize) -> Self {
        Self { terms: BTreeMap::new(), order }
    }

    pub fn identity(order: usize) -> Self {
        Self::term(0, 0, 0, C::one(), order)
    }

    /// `value·λ^power·a†ᵖaᑫ`.
    pub fn term(p: u32, q: u32, power: usize, value: C, order: usize) -> Self {
        let mut op = Self::zero(order);
        op.accumulate((p, q), LambdaSeries::monomial(power, value, order));
        op
    }

    /// `a†`
    pub fn creation(order: usize) -> Self {
        Self::term(1, 0, 0, C::one(), order)
    }

    /// `a`
    pub fn annihilation(order: usize) -> Self {
        Self::term(0, 1, 0, C::one(), order)
    }

    /// `N = a†a`
    pub fn number(order: usize) -> Self {
        Self::term(1, 1, 0, C::one(), order)
    }

    /// Builds from `(λ-power, p, q, coefficient)` quadruples.
    pub fn from_terms(order: usize, terms: impl IntoIterator<Item = (usize, u32, u32, C)>) -> Self {
        let mut op = Self::zero(order);
        for (j, p, q, c) in terms {
            op.accumulate((p, q), LambdaSeries::monomial(j, c, order));
        }
        op
    }

    pub fn truncation_order(&self) -> usize {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored `(p, q)` keys.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &LambdaSeries<C>)> {
        self.terms.iter()
    }

    pub fn get(&self, p: u32, q: u32) -> Option<&LambdaSeries<C>> {
        self.terms.get(&(p, q))
    }

    /// Coefficient of `λʲ a†ᵖ aᑫ`.
    pub fn coefficient(&self, power: usize, p: u32, q: u32) -> C {
        self.terms.get(&(p, q)).map(|s| s.coeff(power)).unwrap_or_else(C::zero)
    }

    /// All nonzero `(λ-power, p, q, coefficient)` entries.
    pub fn flat_terms(&self) -> Vec<(usize, u32, u32, C)> {
        let mut out = Vec::new();
        for (&(p, q), s) in &self.terms {
            for (j, c) in s.coeffs().iter().enumerate() {
                if !c.is_negligible() {
                    out.push((j, p, q, c.clone()));
                }
            }
        }
        out
    }

    /// The λʲ slice as a map `(p, q) → coefficient`.
    pub fn lambda_component(&self, power: usize) -> BTreeMap<Monomial, C> {
        self.terms
            .iter()
            .filter_map(|(&k, s)| {
                let c = s.coeff(power);
                (!c.is_negligible()).then_some((k, c))
            })
            .collect()
    }

    /// Operator holding only the λʲ slice.
    pub fn lambda_slice(&self, power: usize) -> Self {
        Self::from_terms(self.order, self.lambda_component(power).into_iter().map(|((p, q), c)| (power, p, q, c)))
    }

    pub fn lowest_lambda_power(&self) -> Option<usize> {
        self.terms.values().filter_map(|s| s.lowest_power()).min()
    }

    /// Largest single ladder power `max(p, q)` over all terms.
    pub fn max_power(&self) -> u32 {
        self.terms.keys().map(|&(p, q)| p.max(q)).max().unwrap_or(0)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        let mut op = Self::zero(order);
        for (&k, s) in &self.terms {
            op.accumulate(k, s.truncate(order));
        }
        op
    }

    /// Re-embeds at another truncation order (padding or truncating).
    pub fn with_order(&self, order: usize) -> Self {
        let mut op = Self::zero(order);
        for (&k, s) in &self.terms {
            op.accumulate(k, s.with_order(order));
        }
        op
    }

    pub fn scale(&self, factor: &C) -> Self {
        let mut op = Self::zero(self.order);
        for (&k, s) in &self.terms {
            op.accumulate(k, s.scale(factor));
        }
        op
    }

    pub fn scale_series(&self, factor: &LambdaSeries<C>) -> Self {
        let mut op = Self::zero(self.order.min(factor.truncation_order()));
        for (&k, s) in &self.terms {
            op.accumulate(k, s * factor);
        }
        op
    }

    /// Multiplies by `λ^shift`.
    pub fn shift_lambda(&self, shift: usize) -> Self {
        let mut op = Self::zero(self.order);
        for (&k, s) in &self.terms {
            op.accumulate(k, s.shift(shift));
        }
        op
    }

    /// Terms with `p = q` (functions of the number operator).
    pub fn diagonal(&self) -> Self {
        self.filter(|p, q| p == q)
    }

    /// Terms with `p ≠ q`.
    pub fn off_diagonal(&self) -> Self {
        self.filter(|p, q| p != q)
    }

    fn filter(&self, keep: impl Fn(u32, u32) -> bool) -> Self {
        Self {
            terms: self.terms.iter().filter(|(&(p, q), _)| keep(p, q)).map(|(&k, s)| (k, s.clone())).collect(),
            order: self.order,
        }
    }

    pub fn is_hermitian(&self) -> bool {
        dagger(self) == *self
    }

    fn accumulate(&mut self, key: Monomial, series: LambdaSeries<C>) {
        let series = if series.truncation_order() == self.order { series } else { series.with_order(self.order) };
        let merged = match self.terms.remove(&key) {
            Some(existing) => &existing + &series,
            None => series,
        };
        if !merged.is_zero() {
            self.terms.insert(key, merged);
        }
    }

    fn combine(&self, rhs: &Self, sign: bool) -> Self {
        let order = self.order.min(rhs.order);
        let mut op = self.truncate(order);
        for (&k, s) in &rhs.terms {
            let s = s.truncate(order);
            op.accumulate(k, if sign { s } else { -&s });
        }
        op
    }
}

impl<C: Coefficient> Add for &NormalOrderedOperator<C> {
    type Output = NormalOrderedOperator<C>;
    fn add(self, rhs: &NormalOrderedOperator<C>) -> NormalOrderedOperator<C> {
        self.combine(rhs, true)
    }
}

impl<C: Coefficient> Sub for &NormalOrderedOperator<C> {
    type Output = NormalOrderedOperator<C>;
    fn sub(self, rhs: &NormalOrderedOperator<C>) -> NormalOrderedOperator<C> {
        self.combine(rhs, false)
    }
}

impl<C: Coefficient> Neg for &NormalOrderedOperator<C> {
    type Output = NormalOrderedOperator<C>;
    fn neg(self) -> NormalOrderedOperator<C> {
        NormalOrderedOperator { terms: self.terms.iter().map(|(&k, s)| (k, -s)).collect(), order: self.order }
    }
}

impl<C: Coefficient> Mul for &NormalOrderedOperator<C> {
    type Output = NormalOrderedOperator<C>;
    fn mul(self, rhs: &NormalOrderedOperator<C>) -> NormalOrderedOperator<C> {
        multiply(self, rhs)
    }
}

macro_rules! forward_owned_op {
    ($($tr:ident $m:ident),*) => {$(
        impl<C: Coefficient> $tr for NormalOrderedOperator<C> {
            type Output = NormalOrderedOperator<C>;
            fn $m(self, rhs: NormalOrderedOperator<C>) -> NormalOrderedOperator<C> {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned_op!(Add add, Sub sub, Mul mul);

impl<C: Coefficient> Neg for NormalOrderedOperator<C> {
    type Output = NormalOrderedOperator<C>;
    fn neg(self) -> NormalOrderedOperator<C> {
        -&self
    }
}

/// Normally ordered product, truncated at the smaller λ-order.
pub fn multiply<C: Coefficient>(
    lhs: &NormalOrderedOperator<C>,
    rhs: &NormalOrderedOperator<C>,
) -> NormalOrderedOperator<C> {
    let order = lhs.order.min(rhs.order);
    let mut out = NormalOrderedOperator::zero(order);
    for (&(p, q), sa) in &lhs.terms {
        let low_a = sa.lowest_power().unwrap_or(0);
        for (&(r, s), sb) in &rhs.terms {
            if low_a + sb.lowest_power().unwrap_or(0) > order {
                continue;
            }
            let product = sa * sb;
            if product.is_zero() {
                continue;
            }
            for k in 0..=q.min(r) {
                let weight = C::from_integer(&contraction_weight(q, r, k));
                out.accumulate((p + r - k, q + s - k), product.scale(&weight));
            }
        }
    }
    out
}

/// `[lhs, rhs] = lhs·rhs − rhs·lhs`.
pub fn commutator<C: Coefficient>(
    lhs: &NormalOrderedOperator<C>,
    rhs: &NormalOrderedOperator<C>,
) -> NormalOrderedOperator<C> {
    &multiply(lhs, rhs) - &multiply(rhs, lhs)
}

/// Adjoint: swaps each key `(p, q) → (q, p)`. Coefficients are real.
pub fn dagger<C: Coefficient>(op: &NormalOrderedOperator<C>) -> NormalOrderedOperator<C> {
    NormalOrderedOperator { terms: op.terms.iter().map(|(&(p, q), s)| ((q, p), s.clone())).collect(), order: op.order }
}

/// Normal ordering of `(a + a†)ⁿ` at λ⁰ from Weyl binomial coefficients.
pub fn expand_power<C: Coefficient>(n: u32, order: usize) -> NormalOrderedOperator<C> {
    let mut op = NormalOrderedOperator::zero(order);
    for m in 0..=n {
        for k in 0..=m.min(n - m) {
            let c = weyl_binomial(n, m, k).expect("indices are in range by construction");
            op.accumulate((m - k, n - m - k), LambdaSeries::constant(C::from_rational(&c), order));
        }
    }
    op
}

/// `xⁿ = (a + a†)ⁿ / √2ⁿ` at λ⁰.
pub fn position_power<C: Coefficient>(n: u32, order: usize) -> NormalOrderedOperator<C> {
    expand_power::<C>(n, order).scale(&C::sqrt2_pow(-(n as i32)))
}

/// Renders terms sorted by (λ-power asc, p desc, q desc).
impl<C: Coefficient> fmt::Display for NormalOrderedOperator<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = self.flat_terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        terms.sort_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)).then(b.2.cmp(&a.2)));
        for (i, (j, p, q, c)) in terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            if *j > 0 {
                write!(f, "·λ^{j}")?;
            }
            if *p > 0 {
                write!(f, "·a†^{p}")?;
            }
            if *q > 0 {
                write!(f, "·a^{q}")?;
            }
        }
        Ok(())
    }
}
