//! Incremental row reduction for sparse vectors over a coefficient field.

use std::collections::BTreeMap;

use crate::scalar::Coefficient;

pub type SparseVector<K, C> = BTreeMap<K, C>;

struct Pivot<K, C> {
    key: K,
    vector: SparseVector<K, C>,
    /// Column combination that produces `vector`.
    combination: BTreeMap<usize, C>,
}

/// Span of a growing list of columns, kept in echelon form.
///
/// Columns are inserted in preference order; a column that is already in the
/// span of earlier ones never becomes a pivot and so always receives a zero
/// coefficient in [`Echelon::express`].
pub struct Echelon<K, C> {
    pivots: Vec<Pivot<K, C>>,
}

fn axpy<K: Ord + Clone, C: Coefficient>(target: &mut SparseVector<K, C>, factor: &C, source: &SparseVector<K, C>) {
    for (k, v) in source {
        let updated = target.get(k).cloned().unwrap_or_else(C::zero) + factor.clone() * v.clone();
        if updated.is_negligible() {
            target.remove(k);
        } else {
            target.insert(k.clone(), updated);
        }
    }
}

impl<K: Ord + Clone, C: Coefficient> Echelon<K, C> {
    pub fn new() -> Self {
        Self { pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    fn reduce(&self, vector: &SparseVector<K, C>) -> (SparseVector<K, C>, BTreeMap<usize, C>) {
        let mut residual = vector.clone();
        let mut combination = BTreeMap::new();
        for pivot in &self.pivots {
            let Some(t) = residual.get(&pivot.key).cloned() else { continue };
            axpy(&mut residual, &(-t.clone()), &pivot.vector);
            axpy(&mut combination, &t, &pivot.combination);
        }
        (residual, combination)
    }

    /// Adds a column; returns false when it was already in the span.
    pub fn insert(&mut self, column: usize, vector: &SparseVector<K, C>) -> bool {
        let (residual, combination) = self.reduce(vector);
        let Some((key, lead)) = residual.iter().next_back().map(|(k, v)| (k.clone(), v.clone())) else {
            return false;
        };
        let inv = C::one() / lead;
        let mut combo: BTreeMap<usize, C> = BTreeMap::new();
        combo.insert(column, C::one());
        axpy(&mut combo, &(-C::one()), &combination);
        let scaled_vector = residual.into_iter().map(|(k, v)| (k, v * inv.clone())).collect();
        let scaled_combo = combo.into_iter().map(|(k, v)| (k, v * inv.clone())).collect();
        self.pivots.push(Pivot { key, vector: scaled_vector, combination: scaled_combo });
        true
    }

    /// Writes `target` as a combination of inserted columns, or returns the
    /// nonzero residual.
    pub fn express(&self, target: &SparseVector<K, C>) -> Result<BTreeMap<usize, C>, SparseVector<K, C>> {
        let (residual, combination) = self.reduce(target);
        if residual.is_empty() {
            Ok(combination)
        } else {
            Err(residual)
        }
    }
}

impl<K: Ord + Clone, C: Coefficient> Default for Echelon<K, C> {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Radical2Scalar as R;

    fn v(entries: &[(u32, i64)]) -> SparseVector<u32, R> {
        entries.iter().map(|&(k, c)| (k, R::integer(c))).collect()
    }

    #[test]
    fn express_and_reject() {
        let mut e = Echelon::new();
        assert!(e.insert(0, &v(&[(0, 1), (1, 1)])));
        assert!(e.insert(1, &v(&[(1, 2)])));
        assert!(!e.insert(2, &v(&[(0, 2), (1, 4)])));
        assert_eq!(e.rank(), 2);
        let combo = e.express(&v(&[(0, 3), (1, 5)])).unwrap();
        assert_eq!(combo.get(&0), Some(&R::integer(3)));
        assert_eq!(combo.get(&1), Some(&R::integer(1)));
        assert!(!combo.contains_key(&2));
        let residual = e.express(&v(&[(2, 1)])).unwrap_err();
        assert_eq!(residual, v(&[(2, 1)]));
    }
}
