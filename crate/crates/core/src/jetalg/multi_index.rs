use std::fmt;

/// Symmetric multi-index over `n` base directions, stored as an exponent vector.
///
/// `Λ = (2, 0, 1)` stands for two derivatives along the first coordinate and
/// one along the third. Two multi-indices are equal iff their exponent vectors
/// are, so no ordering of repeated directions is ever stored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<u16>);

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn from_exponents(exponents: Vec<u16>) -> Self {
        MultiIndex(exponents)
    }

    /// The multi-index with a single derivative along `direction`.
    pub fn unit(n: usize, direction: usize) -> Self {
        let mut e = vec![0; n];
        e[direction] = 1;
        MultiIndex(e)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn get(&self, direction: usize) -> u16 {
        self.0[direction]
    }

    /// `|Λ|`.
    pub fn order(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// `λ + Λ`.
    pub fn raise(&self, direction: usize) -> Self {
        let mut e = self.0.clone();
        e[direction] += 1;
        MultiIndex(e)
    }

    /// `Λ − λ`, if `λ` occurs in `Λ`.
    pub fn lower(&self, direction: usize) -> Option<Self> {
        if self.0[direction] == 0 {
            return None;
        }
        let mut e = self.0.clone();
        e[direction] -= 1;
        Some(MultiIndex(e))
    }

    pub fn add(&self, other: &MultiIndex) -> Self {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `Λ − Σ` when `Σ ≤ Λ` componentwise.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<Self> {
        let mut e = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            e.push(a.checked_sub(*b)?);
        }
        Some(MultiIndex(e))
    }

    /// Directions with a nonzero exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
    }

    /// The sequence of single directions whose product of total derivatives
    /// is `d_Λ`, lowest direction first.
    pub fn directions(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.order());
        for (i, &e) in self.0.iter().enumerate() {
            for _ in 0..e {
                out.push(i);
            }
        }
        out
    }

    /// All multi-indices over `n` directions with `|Λ| = order`.
    pub fn all_of_order(n: usize, order: usize) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut current = vec![0u16; n];
        fn rec(pos: usize, left: usize, current: &mut Vec<u16>, out: &mut Vec<MultiIndex>) {
            let n = current.len();
            if n == 0 {
                if left == 0 {
                    out.push(MultiIndex(Vec::new()));
                }
                return;
            }
            if pos == n - 1 {
                current[pos] = left as u16;
                out.push(MultiIndex(current.clone()));
                return;
            }
            for k in (0..=left).rev() {
                current[pos] = k as u16;
                rec(pos + 1, left - k, current, out);
            }
            current[pos] = 0;
        }
        rec(0, order, &mut current, &mut out);
        out.sort();
        out
    }

    /// All multi-indices with `|Λ| ≤ max_order`, by increasing order.
    pub fn all_up_to(n: usize, max_order: usize) -> Vec<MultiIndex> {
        (0..=max_order)
            .flat_map(|k| Self::all_of_order(n, k))
            .collect()
    }

    /// Every `Σ ≤ Λ` componentwise, including `0` and `Λ`.
    pub fn sub_indices(&self) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex(Vec::with_capacity(self.0.len()))];
        for &e in &self.0 {
            let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
            for prefix in &out {
                for k in 0..=e {
                    let mut p = prefix.0.clone();
                    p.push(k);
                    next.push(MultiIndex(p));
                }
            }
            out = next;
        }
        out
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_counts_match_stars_and_bars() {
        // C(order + n - 1, n - 1)
        assert_eq!(MultiIndex::all_of_order(2, 3).len(), 4);
        assert_eq!(MultiIndex::all_of_order(3, 2).len(), 6);
        assert_eq!(MultiIndex::all_up_to(2, 2).len(), 6);
        assert_eq!(MultiIndex::all_of_order(0, 0).len(), 1);
        assert!(MultiIndex::all_of_order(0, 1).is_empty());
    }

    #[test]
    fn raise_lower_roundtrip() {
        let m = MultiIndex::from_exponents(vec![1, 0, 2]);
        assert_eq!(m.raise(1).lower(1), Some(m.clone()));
        assert_eq!(m.lower(1), None);
        assert_eq!(m.order(), 3);
        assert_eq!(m.directions(), vec![0, 2, 2]);
    }

    #[test]
    fn sub_indices_cover_the_box() {
        let m = MultiIndex::from_exponents(vec![2, 1]);
        let subs = m.sub_indices();
        assert_eq!(subs.len(), 6);
        for s in &subs {
            let rest = m.checked_sub(s).unwrap();
            assert_eq!(rest.add(s), m);
        }
    }
}
