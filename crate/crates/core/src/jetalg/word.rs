use super::{JetVar, Parity};

/// A degree-one generator of the form algebra: `dx^λ` or `θ^a_Λ`.
///
/// The derived order puts every horizontal generator before every contact
/// generator; contact generators sort by field, then multi-index.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum FormGenerator {
    Horizontal(u16),
    Contact(JetVar),
}

impl FormGenerator {
    pub fn parity(&self) -> Parity {
        match self {
            FormGenerator::Horizontal(_) => Parity::Even,
            FormGenerator::Contact(v) => v.parity(),
        }
    }

    pub fn is_contact(&self) -> bool {
        matches!(self, FormGenerator::Contact(_))
    }

    /// A generator may appear more than once iff swapping it with itself is
    /// sign-free: `(−1)^{1·1 + [g][g]} = +1`, i.e. it is a contact form of an
    /// odd field.
    pub fn may_repeat(&self) -> bool {
        self.parity().is_odd()
    }
}

/// Sign of swapping two adjacent degree-one generators.
pub(crate) fn swap_is_negative(a: &FormGenerator, b: &FormGenerator) -> bool {
    // (−1)^{1 + [a][b]}
    !(a.parity().is_odd() && b.parity().is_odd())
}

/// An ordered wedge product of generators with multiplicities, in canonical
/// order. Multiplicity above one only occurs for odd-field contact forms.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Word(pub(crate) Vec<(FormGenerator, u32)>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn single(g: FormGenerator) -> Self {
        Word(vec![(g, 1)])
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(FormGenerator, u32)] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|(_, k)| *k as usize).sum()
    }

    pub fn contact_degree(&self) -> usize {
        self.0
            .iter()
            .filter(|(g, _)| g.is_contact())
            .map(|(_, k)| *k as usize)
            .sum()
    }

    pub fn horizontal_degree(&self) -> usize {
        self.0
            .iter()
            .filter(|(g, _)| !g.is_contact())
            .map(|(_, k)| *k as usize)
            .sum()
    }

    pub fn parity(&self) -> Parity {
        let odd = self
            .0
            .iter()
            .filter(|(g, _)| g.parity().is_odd())
            .map(|(_, k)| *k as usize)
            .sum::<usize>();
        Parity::from_bool(odd % 2 == 1)
    }

    /// Flat generator sequence with multiplicities expanded.
    pub fn expanded(&self) -> Vec<FormGenerator> {
        let mut out = Vec::with_capacity(self.degree());
        for (g, k) in &self.0 {
            for _ in 0..*k {
                out.push(g.clone());
            }
        }
        out
    }

    /// Rebuilds a canonical word from an arbitrary generator sequence.
    /// Returns `None` when the product vanishes.
    pub fn from_sequence(seq: &[FormGenerator]) -> Option<(Word, bool)> {
        let mut acc = (Word::empty(), false);
        for g in seq {
            let (w, neg) = acc.0.mul(&Word::single(g.clone()))?;
            acc = (w, acc.1 ^ neg);
        }
        Some(acc)
    }

    /// `self ∧ other` in canonical order; the flag is the sign of the sort.
    pub fn mul(&self, other: &Word) -> Option<(Word, bool)> {
        let a = &self.0;
        let b = &other.0;
        let mut out = Vec::with_capacity(a.len() + b.len());
        let mut negative = false;
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    // b[j] (with multiplicity) passes every remaining factor of a.
                    let (h, kb) = &b[j];
                    for (g, ka) in &a[i..] {
                        if swap_is_negative(g, h) && (ka * kb) % 2 == 1 {
                            negative = !negative;
                        }
                    }
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let (g, ka) = &a[i];
                    if !g.may_repeat() {
                        return None;
                    }
                    // Equal odd contacts commute with each other, but b[j]
                    // still passes the factors of a after position i.
                    let (h, kb) = &b[j];
                    for (g2, ka2) in &a[i + 1..] {
                        if swap_is_negative(g2, h) && (ka2 * kb) % 2 == 1 {
                            negative = !negative;
                        }
                    }
                    out.push((g.clone(), ka + kb));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Some((Word(out), negative))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jetalg::MultiIndex;

    fn dx(i: u16) -> FormGenerator {
        FormGenerator::Horizontal(i)
    }
    fn th(field: usize, p: Parity) -> FormGenerator {
        FormGenerator::Contact(JetVar::new(field, p, MultiIndex::zero(1)))
    }

    #[test]
    fn horizontal_square_vanishes() {
        assert!(Word::single(dx(0)).mul(&Word::single(dx(0))).is_none());
        let t = th(0, Parity::Even);
        assert!(Word::single(t.clone()).mul(&Word::single(t)).is_none());
    }

    #[test]
    fn odd_contact_may_repeat() {
        let t = th(0, Parity::Odd);
        let (w, neg) = Word::single(t.clone()).mul(&Word::single(t.clone())).unwrap();
        assert!(!neg);
        assert_eq!(w.degree(), 2);
        assert_eq!(w.parity(), Parity::Even);
    }

    #[test]
    fn contact_passing_dx_flips_sign() {
        let (_, neg) = Word::single(th(0, Parity::Even))
            .mul(&Word::single(dx(0)))
            .unwrap();
        assert!(neg);
        let (_, neg) = Word::single(th(0, Parity::Odd))
            .mul(&Word::single(dx(0)))
            .unwrap();
        assert!(neg);
    }

    #[test]
    fn merge_agrees_with_sequential_insertion() {
        let c = th(1, Parity::Odd);
        let seq = vec![c.clone(), dx(1), th(0, Parity::Even), c.clone(), dx(0)];
        let (w1, n1) = Word::from_sequence(&seq).unwrap();
        let (left, nl) = Word::from_sequence(&seq[..2]).unwrap();
        let (right, nr) = Word::from_sequence(&seq[2..]).unwrap();
        let (w2, n2) = left.mul(&right).unwrap();
        assert_eq!(w1, w2);
        assert_eq!(n1, nl ^ nr ^ n2);
    }
}
