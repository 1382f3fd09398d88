//! Exact sparse linear algebra over the rationals: incremental row echelon
//! form, rank, membership and kernels.

use std::collections::BTreeMap;

use num::{One, Zero};

use crate::jetalg::Coeff;

/// Sparse vector: coordinate index to nonzero entry.
pub type SparseVec = BTreeMap<usize, Coeff>;

fn axpy(target: &mut SparseVec, factor: &Coeff, source: &SparseVec) {
    for (k, c) in source {
        let entry = target.entry(*k).or_insert_with(Coeff::zero);
        *entry += factor * c;
        if entry.is_zero() {
            target.remove(k);
        }
    }
}

/// Row echelon basis of a growing subspace. Every stored row has leading
/// entry 1 at its pivot (its smallest index); optionally each row remembers
/// which combination of inserted vectors produced it.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: BTreeMap<usize, (SparseVec, SparseVec)>,
    inserted: usize,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored rows; returns the remainder and the
    /// combination of inserted vectors that was subtracted.
    fn reduce_tracked(&self, mut v: SparseVec) -> (SparseVec, SparseVec) {
        let mut combo = SparseVec::new();
        let mut cursor = 0usize;
        loop {
            let next = v
                .range(cursor..)
                .find(|(k, _)| self.rows.contains_key(k))
                .map(|(k, c)| (*k, c.clone()));
            let Some((pivot, factor)) = next else { break };
            let (row, row_combo) = &self.rows[&pivot];
            let neg = -factor;
            axpy(&mut v, &neg, row);
            axpy(&mut combo, &neg, row_combo);
            cursor = pivot + 1;
        }
        (v, combo)
    }

    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        self.reduce_tracked(v.clone()).0
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Inserts `v`; returns `Ok(())` when it enlarged the span and otherwise
    /// the dependency: coefficients `x` over previously inserted vectors with
    /// `v = Σ x_i v_i`.
    pub fn insert(&mut self, v: &SparseVec) -> Result<(), SparseVec> {
        let id = self.inserted;
        self.inserted += 1;
        let (rest, combo) = self.reduce_tracked(v.clone());
        let Some((&pivot, lead)) = rest.iter().next() else {
            let dependency: SparseVec = combo.into_iter().map(|(k, c)| (k, -c)).collect();
            return Err(dependency);
        };
        let inv = Coeff::one() / lead;
        let mut combo = combo;
        combo.insert(id, Coeff::one());
        let row: SparseVec = rest.into_iter().map(|(k, c)| (k, c * &inv)).collect();
        let combo: SparseVec = combo.into_iter().map(|(k, c)| (k, c * &inv)).collect();
        self.rows.insert(pivot, (row, combo));
        Ok(())
    }
}

/// Rank of a set of vectors.
pub fn rank(vectors: &[SparseVec]) -> usize {
    let mut e = Echelon::new();
    for v in vectors {
        let _ = e.insert(v);
    }
    e.rank()
}

/// Basis of `{x : Σ x_j columns[j] = 0}`.
pub fn kernel(columns: &[SparseVec]) -> Vec<SparseVec> {
    let mut e = Echelon::new();
    let mut out = Vec::new();
    for (j, c) in columns.iter().enumerate() {
        if let Err(mut dep) = e.insert(c) {
            // c_j − Σ x_i c_i = 0
            for v in dep.values_mut() {
                *v = -v.clone();
            }
            dep.insert(j, Coeff::one());
            out.push(dep);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(entries: &[(usize, i64)]) -> SparseVec {
        entries.iter().map(|&(k, c)| (k, Coeff::from_integer(c.into()))).collect()
    }

    fn combine(columns: &[SparseVec], x: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (j, c) in x {
            axpy(&mut out, c, &columns[*j]);
        }
        out
    }

    #[test]
    fn rank_of_dependent_set() {
        let vs = [v(&[(0, 1), (1, 2)]), v(&[(1, 1), (2, 1)]), v(&[(0, 1), (1, 3), (2, 1)])];
        assert_eq!(rank(&vs), 2);
        assert_eq!(rank(&[]), 0);
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let cols = [
            v(&[(0, 1), (1, 2)]),
            v(&[(1, 1), (2, 1)]),
            v(&[(0, 1), (1, 3), (2, 1)]),
            v(&[(0, 2), (1, 4)]),
            v(&[(3, 5)]),
        ];
        let ker = kernel(&cols);
        assert_eq!(ker.len(), 2);
        for x in &ker {
            assert!(combine(&cols, x).is_empty());
        }
        assert_eq!(rank(&ker), 2);
    }

    #[test]
    fn membership_after_reduction() {
        let mut e = Echelon::new();
        e.insert(&v(&[(2, 3), (5, 1)])).unwrap();
        e.insert(&v(&[(1, 1), (2, 1)])).unwrap();
        assert!(e.contains(&v(&[(1, 3), (2, 9), (5, 2)])));
        assert!(!e.contains(&v(&[(5, 1)])));
    }
}
