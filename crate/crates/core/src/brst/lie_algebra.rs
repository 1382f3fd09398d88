use std::collections::BTreeMap;

use num::Zero;

use crate::jetalg::Coeff;

use super::BrstError;

/// Structure constants `c^r_pq` of a finite-dimensional Lie algebra (indices
/// are 0-based). Antisymmetry is enforced on construction; the Jacobi
/// identity is checked and recorded, not assumed.
#[derive(Clone, Debug, PartialEq)]
pub struct LieStructure {
    dim: usize,
    constants: BTreeMap<(usize, usize, usize), Coeff>,
    jacobi_verified: bool,
}

impl LieStructure {
    /// Builds from entries `(r, p, q, c^r_pq)`. The partner `c^r_qp` is filled
    /// in; listing both with inconsistent values is an error.
    pub fn new(dim: usize, entries: &[(usize, usize, usize, Coeff)]) -> Result<Self, BrstError> {
        let mut constants: BTreeMap<(usize, usize, usize), Coeff> = BTreeMap::new();
        for (r, p, q, c) in entries {
            let (r, p, q) = (*r, *p, *q);
            if r >= dim || p >= dim || q >= dim {
                return Err(BrstError::IndexOutOfRange { r, p, q, dim });
            }
            if p == q {
                if !c.is_zero() {
                    return Err(BrstError::NotAntisymmetric { r, p, q });
                }
                continue;
            }
            for (key, val) in [((r, p, q), c.clone()), ((r, q, p), -c.clone())] {
                match constants.get(&key) {
                    Some(old) if *old != val => return Err(BrstError::NotAntisymmetric { r, p, q }),
                    _ => {
                        constants.insert(key, val);
                    }
                }
            }
        }
        constants.retain(|_, c| !c.is_zero());
        let mut g = LieStructure {
            dim,
            constants,
            jacobi_verified: false,
        };
        g.jacobi_verified = g.jacobi_defect().is_empty();
        Ok(g)
    }

    /// `su(2)`: `c^r_pq = ε_rpq`.
    pub fn su2() -> Self {
        let one = Coeff::from_integer(1.into());
        let entries: Vec<_> = [(0, 1, 2), (1, 2, 0), (2, 0, 1)]
            .into_iter()
            .map(|(r, p, q)| (r, p, q, one.clone()))
            .collect();
        Self::new(3, &entries).expect("ε is antisymmetric")
    }

    pub fn abelian(dim: usize) -> Self {
        Self::new(dim, &[]).expect("empty table")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn constant(&self, r: usize, p: usize, q: usize) -> Coeff {
        self.constants.get(&(r, p, q)).cloned().unwrap_or_else(Coeff::zero)
    }

    /// Nonzero constants with `p < q`.
    pub fn independent_entries(&self) -> Vec<(usize, usize, usize, Coeff)> {
        self.constants
            .iter()
            .filter(|((_, p, q), _)| p < q)
            .map(|((r, p, q), c)| (*r, *p, *q, c.clone()))
            .collect()
    }

    /// Replaces `c^r_pq` (and `c^r_qp`) by `value`.
    pub fn with_entry(&self, r: usize, p: usize, q: usize, value: Coeff) -> Result<Self, BrstError> {
        let mut entries: Vec<_> = self
            .independent_entries()
            .into_iter()
            .filter(|&(r2, p2, q2, _)| (r2, p2.min(q2), p2.max(q2)) != (r, p.min(q), p.max(q)))
            .collect();
        entries.push((r, p, q, value));
        Self::new(self.dim, &entries)
    }

    pub fn jacobi_verified(&self) -> bool {
        self.jacobi_verified
    }

    /// Nonzero values of `Σ_s (c^r_ps c^s_qt + c^r_qs c^s_tp + c^r_ts c^s_pq)`
    /// for `p < q < t`.
    pub fn jacobi_defect(&self) -> Vec<((usize, usize, usize, usize), Coeff)> {
        let n = self.dim;
        let mut out = Vec::new();
        for r in 0..n {
            for p in 0..n {
                for q in p + 1..n {
                    for t in q + 1..n {
                        let mut sum = Coeff::zero();
                        for s in 0..n {
                            sum += self.constant(r, p, s) * self.constant(s, q, t);
                            sum += self.constant(r, q, s) * self.constant(s, t, p);
                            sum += self.constant(r, t, s) * self.constant(s, p, q);
                        }
                        if !sum.is_zero() {
                            out.push(((r, p, q, t), sum));
                        }
                    }
                }
            }
        }
        out
    }
}
