//! Truncated Lie algebras generated by `H₀` and `Hₙ = H₀ + λxⁿ`.
//!
//! Structure constants live in the ring `ℚ(√2)[λ]/(λ^(k+1))`: for `n ≥ 3`
//! every constant comes out as a plain scalar, but the harmonic cases
//! `n ∈ {1, 2}` only close on four elements when constants may carry powers
//! of λ.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::{free_hamiltonian, perturbed_hamiltonian};
use crate::scalar::Coefficient;
use crate::span::{Echelon, SparseVector};
use crate::weyl::{commutator, LambdaSeries, NormalOrderedOperator};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Antisymmetric,
    Symmetric,
}

/// `λʲ(a†ᵖaᑫ ∓ a†ᑫaᵖ)` with `p > q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LieBasisElement {
    pub lambda_power: usize,
    pub high: u32,
    pub low: u32,
    pub parity: Parity,
}

impl LieBasisElement {
    pub fn new(lambda_power: usize, high: u32, low: u32, parity: Parity) -> Result<Self> {
        if high <= low {
            return Err(Error::Validation(format!(
                "basis element needs p > q, got ({high}, {low}); diagonal terms are number-operator functions"
            )));
        }
        if lambda_power == 0 {
            return Err(Error::Validation("basis elements carry at least one power of λ".into()));
        }
        Ok(Self { lambda_power, high, low, parity })
    }

    pub fn antisymmetric(lambda_power: usize, high: u32, low: u32) -> Result<Self> {
        Self::new(lambda_power, high, low, Parity::Antisymmetric)
    }

    pub fn symmetric(lambda_power: usize, high: u32, low: u32) -> Result<Self> {
        Self::new(lambda_power, high, low, Parity::Symmetric)
    }

    pub fn partner(&self) -> Self {
        let parity = match self.parity {
            Parity::Antisymmetric => Parity::Symmetric,
            Parity::Symmetric => Parity::Antisymmetric,
        };
        Self { parity, ..*self }
    }

    /// Shift `p − q` in the number-operator eigenvalue.
    pub fn shift(&self) -> u32 {
        self.high - self.low
    }

    pub fn operator<C: Coefficient>(&self, order: usize) -> NormalOrderedOperator<C> {
        let sign = match self.parity {
            Parity::Antisymmetric => -C::one(),
            Parity::Symmetric => C::one(),
        };
        NormalOrderedOperator::from_terms(
            order,
            [(self.lambda_power, self.high, self.low, C::one()), (self.lambda_power, self.low, self.high, sign)],
        )
    }

    fn sort_key(&self) -> (usize, std::cmp::Reverse<u32>, std::cmp::Reverse<u32>, u8) {
        let parity = match self.parity {
            Parity::Antisymmetric => 0,
            Parity::Symmetric => 1,
        };
        (self.lambda_power, std::cmp::Reverse(self.high + self.low), std::cmp::Reverse(self.high), parity)
    }
}

impl fmt::Display for LieBasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.parity {
            Parity::Antisymmetric => '-',
            Parity::Symmetric => '+',
        };
        let lam = if self.lambda_power == 1 { "λ".to_string() } else { format!("λ^{}", self.lambda_power) };
        write!(f, "{lam}({} {sign} {})", ladder_label(self.high, self.low), ladder_label(self.low, self.high))
    }
}

fn ladder_label(p: u32, q: u32) -> String {
    let part = |sym: &str, k: u32| match k {
        0 => String::new(),
        1 => sym.to_string(),
        _ => format!("{sym}^{k}"),
    };
    let text = format!("{}{}", part("a†", p), part("a", q));
    if text.is_empty() {
        "1".into()
    } else {
        text
    }
}

/// One basis member of a truncated algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AlgebraElement {
    /// `L₁ = H₀`
    Free,
    /// `L₂ = Hₙ`
    Perturbed,
    /// Central `I`
    Central,
    Pair(LieBasisElement),
    /// `λʲ a†ⁱaⁱ`, only needed for closure at `k ≥ 2`.
    Diagonal {
        lambda_power: usize,
        power: u32,
    },
}

impl AlgebraElement {
    pub fn lambda_power(&self) -> usize {
        match self {
            Self::Free | Self::Perturbed | Self::Central => 0,
            Self::Pair(e) => e.lambda_power,
            Self::Diagonal { lambda_power, .. } => *lambda_power,
        }
    }

    pub fn as_pair(&self) -> Option<&LieBasisElement> {
        match self {
            Self::Pair(e) => Some(e),
            _ => None,
        }
    }

    fn sort_key(&self) -> (usize, std::cmp::Reverse<u32>, std::cmp::Reverse<u32>, u8) {
        match self {
            Self::Pair(e) => e.sort_key(),
            Self::Diagonal { lambda_power, power } => {
                (*lambda_power, std::cmp::Reverse(2 * power), std::cmp::Reverse(*power), 2)
            }
            _ => (0, std::cmp::Reverse(0), std::cmp::Reverse(0), 0),
        }
    }

    fn label(&self, n: u32) -> String {
        match self {
            Self::Free => "H0".into(),
            Self::Perturbed => format!("H{n}"),
            Self::Central => "I".into(),
            Self::Pair(e) => e.to_string(),
            Self::Diagonal { lambda_power, power } => format!("λ^{lambda_power}({})", ladder_label(*power, *power)),
        }
    }
}

#[derive(Clone, Debug)]
pub struct LieAlgebra<C> {
    n: u32,
    order: usize,
    elements: Vec<AlgebraElement>,
    operators: Vec<NormalOrderedOperator<C>>,
}

impl<C: Coefficient> LieAlgebra<C> {
    pub fn potential_power(&self) -> u32 {
        self.n
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[AlgebraElement] {
        &self.elements
    }

    pub fn operator(&self, index: usize) -> &NormalOrderedOperator<C> {
        &self.operators[index]
    }

    pub fn label(&self, index: usize) -> String {
        self.elements[index].label(self.n)
    }

    pub fn index_of(&self, element: &AlgebraElement) -> Option<usize> {
        self.elements.iter().position(|e| e == element)
    }

    /// Pair elements of a given parity.
    pub fn pairs(&self, parity: Parity) -> Vec<LieBasisElement> {
        self.elements.iter().filter_map(AlgebraElement::as_pair).filter(|e| e.parity == parity).copied().collect()
    }

    /// Whether an antisymmetric generator with key `(p, q)` can appear at λʲ,
    /// i.e. the algebra holds it at some λ-power `≤ j` (multiplied up by λ).
    pub fn has_generator(&self, lambda_power: usize, high: u32, low: u32) -> bool {
        self.pairs(Parity::Antisymmetric)
            .iter()
            .any(|e| e.high == high && e.low == low && e.lambda_power <= lambda_power)
    }

    fn from_elements(n: u32, order: usize, mut extra: Vec<AlgebraElement>) -> Self {
        extra.sort_by_key(AlgebraElement::sort_key);
        let mut elements = vec![AlgebraElement::Free, AlgebraElement::Perturbed, AlgebraElement::Central];
        elements.extend(extra);
        let operators = elements.iter().map(|e| element_operator(n, order, e)).collect();
        Self { n, order, elements, operators }
    }
}

fn element_operator<C: Coefficient>(n: u32, order: usize, element: &AlgebraElement) -> NormalOrderedOperator<C> {
    match element {
        AlgebraElement::Free => free_hamiltonian(order),
        AlgebraElement::Perturbed => perturbed_hamiltonian(n, order),
        AlgebraElement::Central => NormalOrderedOperator::identity(order),
        AlgebraElement::Pair(e) => e.operator(order),
        AlgebraElement::Diagonal { lambda_power, power } => {
            NormalOrderedOperator::term(*power, *power, *lambda_power, C::one(), order)
        }
    }
}

fn pairs_for(lambda_power: usize, high: u32, low: u32) -> [AlgebraElement; 2] {
    [
        AlgebraElement::Pair(LieBasisElement { lambda_power, high, low, parity: Parity::Antisymmetric }),
        AlgebraElement::Pair(LieBasisElement { lambda_power, high, low, parity: Parity::Symmetric }),
    ]
}

/// Builds `𝒜ₙ⁽ᵏ⁾` by repeated commutation, discarding λ-powers above `k`.
///
/// Every off-diagonal monomial `λʲa†ᵖaᑫ` met along the way contributes the
/// pair `λʲ(a†ᵖaᑫ ∓ a†ᑫaᵖ)`; diagonal monomials `λʲa†ⁱaⁱ` with `i ≥ 2`
/// become [`AlgebraElement::Diagonal`] members (`i ≤ 1` is spanned by
/// `λʲH₀` and `λʲI`). For `n ≤ 2` the algebra is `{H₀, Hₙ, I, λ(a†ⁿ − aⁿ)}`
/// at every order.
pub fn generate_algebra<C: Coefficient>(n: u32, order: usize) -> Result<LieAlgebra<C>> {
    if n == 0 || order == 0 {
        return Err(Error::Validation(format!("algebra needs n >= 1 and order >= 1, got n = {n}, k = {order}")));
    }
    if n <= 2 {
        let seed =
            AlgebraElement::Pair(LieBasisElement { lambda_power: 1, high: n, low: 0, parity: Parity::Antisymmetric });
        return Ok(LieAlgebra::from_elements(n, order, vec![seed]));
    }

    let mut members: BTreeSet<AlgebraElementKey> = BTreeSet::new();
    let mut operators: Vec<NormalOrderedOperator<C>> =
        vec![free_hamiltonian(order), perturbed_hamiltonian(n, order), NormalOrderedOperator::identity(order)];
    let mut frontier_start = 0;
    loop {
        let mut discovered: BTreeSet<AlgebraElementKey> = BTreeSet::new();
        let total = operators.len();
        for b in frontier_start..total {
            for a in 0..b {
                for (j, p, q, _) in commutator(&operators[a], &operators[b]).flat_terms() {
                    let key = if p != q {
                        AlgebraElementKey::Pair(j, p.max(q), p.min(q))
                    } else if p >= 2 {
                        AlgebraElementKey::Diagonal(j, p)
                    } else {
                        continue;
                    };
                    if !members.contains(&key) {
                        discovered.insert(key);
                    }
                }
            }
        }
        if discovered.is_empty() {
            break;
        }
        frontier_start = total;
        for key in discovered {
            for element in key.elements() {
                operators.push(element_operator(n, order, &element));
            }
            members.insert(key);
        }
    }
    let extra = members.iter().flat_map(AlgebraElementKey::elements).collect();
    Ok(LieAlgebra::from_elements(n, order, extra))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum AlgebraElementKey {
    Pair(usize, u32, u32),
    Diagonal(usize, u32),
}

impl AlgebraElementKey {
    fn elements(&self) -> Vec<AlgebraElement> {
        match *self {
            Self::Pair(j, p, q) => pairs_for(j, p, q).to_vec(),
            Self::Diagonal(j, i) => vec![AlgebraElement::Diagonal { lambda_power: j, power: i }],
        }
    }
}

/// Size of `𝒜ₙ⁽¹⁾`: `(κ+1)κ + 3` with `κ = ⌈n/2⌉`.
///
/// `(κ+1)κ` counts both parities of every pair and `3` counts `H₀, Hₙ, I`.
/// For even `n` this is the familiar `κ = n/2`; for odd `n = 2κ − 1` the
/// pairs are `(p, q)` with `p + q ∈ {1, 3, …, n}`, giving 15 for `n = 5`.
pub fn count_generators(n: u32) -> Result<usize> {
    if n < 3 {
        return Err(Error::HarmonicCase(n));
    }
    let kappa = n.div_ceil(2) as usize;
    Ok((kappa + 1) * kappa + 3)
}

/// `(κ+1)κ + 3` with `κ = ⌊n/2⌋`; agrees with [`count_generators`] only for even `n`.
pub fn count_generators_floor_convention(n: u32) -> usize {
    let kappa = (n / 2) as usize;
    (kappa + 1) * kappa + 3
}

/// `[L_i, L_j] = Σ_m c_ijm(λ) L_m` for every ordered pair `i ≠ j`.
#[derive(Clone, Debug)]
pub struct StructureConstants<C> {
    entries: BTreeMap<(usize, usize), BTreeMap<usize, LambdaSeries<C>>>,
}

impl<C: Coefficient> StructureConstants<C> {
    /// Expansion of `[L_i, L_j]`; empty for `i = j` or commuting pairs.
    pub fn get(&self, i: usize, j: usize) -> Option<&BTreeMap<usize, LambdaSeries<C>>> {
        self.entries.get(&(i, j))
    }

    pub fn coefficient(&self, i: usize, j: usize, m: usize) -> Option<&LambdaSeries<C>> {
        self.entries.get(&(i, j)).and_then(|row| row.get(&m))
    }

    /// Nonzero `(i, j, m, λ-power, value)` entries with `i < j`.
    pub fn triples(&self) -> Vec<(usize, usize, usize, usize, C)> {
        let mut out = Vec::new();
        for (&(i, j), row) in &self.entries {
            if i >= j {
                continue;
            }
            for (&m, series) in row {
                for (s, c) in series.coeffs().iter().enumerate() {
                    if !c.is_negligible() {
                        out.push((i, j, m, s, c.clone()));
                    }
                }
            }
        }
        out
    }

    /// True when every constant is free of λ.
    pub fn is_scalar(&self) -> bool {
        self.entries.values().flat_map(|row| row.values()).all(|s| s.coeffs().iter().skip(1).all(|c| c.is_negligible()))
    }
}

type MonomialKey = (usize, u32, u32);

fn to_sparse<C: Coefficient>(op: &NormalOrderedOperator<C>) -> SparseVector<MonomialKey, C> {
    op.flat_terms().into_iter().map(|(j, p, q, c)| ((j, p, q), c)).collect()
}

/// Expands every commutator in the basis; errors if any leaves a residual.
///
/// Columns are `λˢ·L_m`. Scalar (`s = 0`) columns are preferred, and within
/// each `s` the pair and diagonal elements come before `I`, `H₀`, `Hₙ`, so
/// expansions use the explicit generators whenever they suffice.
pub fn structure_constants<C: Coefficient>(algebra: &LieAlgebra<C>) -> Result<StructureConstants<C>> {
    let order = algebra.order;
    let size = algebra.size();
    let mut preference: Vec<usize> = (3..size).collect();
    preference.extend([2, 0, 1]);

    let mut columns: Vec<(usize, usize)> = Vec::new();
    let mut echelon = Echelon::new();
    for shift in 0..=order {
        for &m in &preference {
            let lowest = algebra.operators[m].lowest_lambda_power().unwrap_or(0);
            if lowest + shift > order {
                continue;
            }
            let column = algebra.operators[m].shift_lambda(shift);
            echelon.insert(columns.len(), &to_sparse(&column));
            columns.push((m, shift));
        }
    }

    let mut entries = BTreeMap::new();
    for i in 0..size {
        for j in 0..size {
            if i == j {
                continue;
            }
            let bracket = commutator(&algebra.operators[i], &algebra.operators[j]);
            let combination = echelon.express(&to_sparse(&bracket)).map_err(|residual| Error::NotClosed {
                left: algebra.label(i),
                right: algebra.label(j),
                residual: NormalOrderedOperator::from_terms(
                    order,
                    residual.into_iter().map(|((j, p, q), c)| (j, p, q, c)),
                )
                .to_string(),
            })?;
            let mut row: BTreeMap<usize, LambdaSeries<C>> = BTreeMap::new();
            for (column, value) in combination {
                let (m, shift) = columns[column];
                let term = LambdaSeries::monomial(shift, value, order);
                let updated = match row.remove(&m) {
                    Some(existing) => &existing + &term,
                    None => term,
                };
                if !updated.is_zero() {
                    row.insert(m, updated);
                }
            }
            entries.insert((i, j), row);
        }
    }
    Ok(StructureConstants { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weyl::dagger;
    use crate::Radical2Scalar as R;

    fn antisymmetric_keys(alg: &LieAlgebra<R>, j: usize) -> BTreeSet<(u32, u32)> {
        alg.pairs(Parity::Antisymmetric).iter().filter(|e| e.lambda_power == j).map(|e| (e.high, e.low)).collect()
    }

    fn keys(list: &[(u32, u32)]) -> BTreeSet<(u32, u32)> {
        list.iter().copied().collect()
    }

    #[test]
    fn sextic_first_order() {
        let alg = generate_algebra::<R>(6, 1).unwrap();
        assert_eq!(alg.size(), 15);
        assert_eq!(antisymmetric_keys(&alg, 1), keys(&[(6, 0), (5, 1), (4, 2), (4, 0), (3, 1), (2, 0)]));
        assert_eq!(alg.pairs(Parity::Symmetric).len(), 6);
    }

    #[test]
    fn quintic_first_order() {
        let alg = generate_algebra::<R>(5, 1).unwrap();
        assert_eq!(antisymmetric_keys(&alg, 1), keys(&[(5, 0), (4, 1), (3, 2), (3, 0), (2, 1), (1, 0)]));
        assert_eq!(alg.size(), 15);
    }

    #[test]
    fn quartic_second_order_has_lambda_squared_pairs() {
        let alg = generate_algebra::<R>(4, 2).unwrap();
        let second = antisymmetric_keys(&alg, 2);
        for key in [(6, 0), (4, 2), (4, 0), (3, 1), (2, 0)] {
            assert!(second.contains(&key), "missing λ² {key:?}");
            let sym = LieBasisElement::symmetric(2, key.0, key.1).unwrap();
            assert!(alg.index_of(&AlgebraElement::Pair(sym)).is_some());
        }
        structure_constants(&alg).unwrap();
    }

    #[test]
    fn linear_potential_is_four_dimensional() {
        let alg = generate_algebra::<R>(1, 1).unwrap();
        assert_eq!(alg.size(), 4);
        assert_eq!(alg.label(3), "λ(a† - a)");
    }

    #[test]
    fn harmonic_cases_close_at_every_order() {
        for n in [1, 2] {
            for k in 1..=4 {
                let alg = generate_algebra::<R>(n, k).unwrap();
                assert_eq!(alg.size(), 4);
                structure_constants(&alg).unwrap_or_else(|e| panic!("n={n} k={k}: {e}"));
            }
        }
    }

    #[test]
    fn counts_match_generation() {
        assert_eq!(count_generators(6).unwrap(), 15);
        assert_eq!(count_generators(5).unwrap(), 15);
        assert_eq!(count_generators(4).unwrap(), 9);
        assert!(matches!(count_generators(2), Err(Error::HarmonicCase(2))));
        for n in 3..=12 {
            assert_eq!(generate_algebra::<R>(n, 1).unwrap().size(), count_generators(n).unwrap(), "n = {n}");
        }
        for n in (4..=12).step_by(2) {
            assert_eq!(count_generators_floor_convention(n), count_generators(n).unwrap());
        }
    }

    #[test]
    fn quartic_structure_constants() {
        let alg = generate_algebra::<R>(4, 1).unwrap();
        let sc = structure_constants(&alg).unwrap();
        assert!(sc.is_scalar());
        let anti = alg.index_of(&AlgebraElement::Pair(LieBasisElement::antisymmetric(1, 2, 0).unwrap())).unwrap();
        let sym = alg.index_of(&AlgebraElement::Pair(LieBasisElement::symmetric(1, 2, 0).unwrap())).unwrap();
        let row = sc.get(0, anti).unwrap();
        assert_eq!(row.len(), 1);
        assert_eq!(row[&sym].coeffs(), &[R::integer(2), R::integer(0)]);

        let a40 = alg.index_of(&AlgebraElement::Pair(LieBasisElement::antisymmetric(1, 4, 0).unwrap())).unwrap();
        let a31 = alg.index_of(&AlgebraElement::Pair(LieBasisElement::antisymmetric(1, 3, 1).unwrap())).unwrap();
        assert!(sc.get(a40, a31).unwrap().is_empty());

        for i in 0..alg.size() {
            for j in 0..alg.size() {
                if i == j {
                    continue;
                }
                let (a, b) = (sc.get(i, j).unwrap(), sc.get(j, i).unwrap());
                assert_eq!(a.len(), b.len());
                for (m, s) in a {
                    assert_eq!(&-s, &b[m]);
                }
            }
        }
    }

    #[test]
    fn pair_parity_and_free_commutator() {
        let alg = generate_algebra::<R>(6, 1).unwrap();
        let h0 = alg.operator(0);
        for e in alg.pairs(Parity::Antisymmetric) {
            let v = e.operator::<R>(1);
            assert_eq!(dagger(&v), -&v);
            let expected = e.partner().operator::<R>(1).scale(&R::integer(e.shift() as i64));
            assert_eq!(commutator(h0, &v), expected);
        }
        for e in alg.pairs(Parity::Symmetric) {
            let v = e.operator::<R>(1);
            assert_eq!(dagger(&v), v);
        }
    }

    #[test]
    fn invalid_elements() {
        assert!(LieBasisElement::antisymmetric(1, 2, 2).is_err());
        assert!(LieBasisElement::antisymmetric(0, 2, 1).is_err());
        assert!(generate_algebra::<R>(0, 1).is_err());
        assert!(generate_algebra::<R>(3, 0).is_err());
    }
}
