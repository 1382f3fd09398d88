use super::{MultiIndex, Parity};

/// A jet coordinate `s^a_Λ`. The parity bit duplicates the field's parity so
/// that products can be normalized without consulting a model.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct JetVar {
    pub field: u32,
    pub odd: bool,
    pub index: MultiIndex,
}

impl JetVar {
    pub fn new(field: usize, parity: Parity, index: MultiIndex) -> Self {
        JetVar {
            field: field as u32,
            odd: parity.is_odd(),
            index,
        }
    }

    pub fn parity(&self) -> Parity {
        Parity::from_bool(self.odd)
    }

    pub fn order(&self) -> usize {
        self.index.order()
    }

    /// `s^a_{λ+Λ}`.
    pub fn raise(&self, direction: usize) -> Self {
        JetVar {
            field: self.field,
            odd: self.odd,
            index: self.index.raise(direction),
        }
    }
}

/// A product of base coordinates, even jet coordinates (with exponents) and a
/// strictly increasing list of odd jet coordinates. The coefficient and the
/// reordering sign live outside, in the polynomial that owns the monomial.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Monomial {
    pub(crate) base: Vec<(u16, u32)>,
    pub(crate) even: Vec<(JetVar, u32)>,
    pub(crate) odd: Vec<JetVar>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn base_coord(direction: usize) -> Self {
        Monomial {
            base: vec![(direction as u16, 1)],
            ..Default::default()
        }
    }

    pub fn jet(var: JetVar) -> Self {
        if var.odd {
            Monomial {
                odd: vec![var],
                ..Default::default()
            }
        } else {
            Monomial {
                even: vec![(var, 1)],
                ..Default::default()
            }
        }
    }

    pub fn is_one(&self) -> bool {
        self.base.is_empty() && self.even.is_empty() && self.odd.is_empty()
    }

    pub fn base_factors(&self) -> &[(u16, u32)] {
        &self.base
    }

    pub fn even_factors(&self) -> &[(JetVar, u32)] {
        &self.even
    }

    pub fn odd_factors(&self) -> &[JetVar] {
        &self.odd
    }

    pub fn parity(&self) -> Parity {
        Parity::from_bool(self.odd.len() % 2 == 1)
    }

    /// Total degree in jet coordinates (even and odd).
    pub fn jet_degree(&self) -> usize {
        self.even.iter().map(|(_, e)| *e as usize).sum::<usize>() + self.odd.len()
    }

    pub fn base_degree(&self) -> usize {
        self.base.iter().map(|(_, e)| *e as usize).sum()
    }

    /// Highest `|Λ|` among the jet factors, `None` without jet factors.
    pub fn jet_order(&self) -> Option<usize> {
        self.jet_vars().map(|v| v.order()).max()
    }

    pub fn jet_vars(&self) -> impl Iterator<Item = &JetVar> {
        self.even.iter().map(|(v, _)| v).chain(self.odd.iter())
    }

    pub fn exponent_of_base(&self, direction: usize) -> u32 {
        self.base
            .iter()
            .find(|(d, _)| *d as usize == direction)
            .map_or(0, |(_, e)| *e)
    }

    /// Product `self · other` in canonical order, with the sign picked up by
    /// sorting odd factors. `None` when an odd factor repeats.
    pub fn mul(&self, other: &Monomial) -> Option<(Monomial, bool)> {
        let odd = merge_odd(&self.odd, &other.odd)?;
        Some((
            Monomial {
                base: merge_exponents(&self.base, &other.base),
                even: merge_exponents(&self.even, &other.even),
                odd: odd.0,
            },
            odd.1,
        ))
    }

    /// Removes one copy of a base coordinate; returns the exponent it had.
    pub(crate) fn without_base(&self, direction: u16) -> Option<(Monomial, u32)> {
        let pos = self.base.iter().position(|(d, _)| *d == direction)?;
        let mut m = self.clone();
        let e = m.base[pos].1;
        if e == 1 {
            m.base.remove(pos);
        } else {
            m.base[pos].1 -= 1;
        }
        Some((m, e))
    }

    pub(crate) fn without_even(&self, var: &JetVar) -> Option<(Monomial, u32)> {
        let pos = self.even.iter().position(|(v, _)| v == var)?;
        let mut m = self.clone();
        let e = m.even[pos].1;
        if e == 1 {
            m.even.remove(pos);
        } else {
            m.even[pos].1 -= 1;
        }
        Some((m, e))
    }

    /// Splits off the odd factor at `pos`: returns (evens + odd prefix, odd
    /// suffix). The factor itself is dropped.
    pub(crate) fn split_odd(&self, pos: usize) -> (Monomial, Monomial) {
        let prefix = Monomial {
            base: self.base.clone(),
            even: self.even.clone(),
            odd: self.odd[..pos].to_vec(),
        };
        let suffix = Monomial {
            odd: self.odd[pos + 1..].to_vec(),
            ..Default::default()
        };
        (prefix, suffix)
    }

    /// Left partial derivative `∂/∂var` of the monomial, as (coefficient
    /// factor, result). Odd factors are moved to the front before removal.
    pub fn partial(&self, var: &JetVar) -> Option<(i64, Monomial)> {
        if var.odd {
            let pos = self.odd.iter().position(|v| v == var)?;
            let mut m = self.clone();
            m.odd.remove(pos);
            let sign = if pos % 2 == 0 { 1 } else { -1 };
            Some((sign, m))
        } else {
            let (m, e) = self.without_even(var)?;
            Some((e as i64, m))
        }
    }

    pub fn base_partial(&self, direction: usize) -> Option<(i64, Monomial)> {
        let (m, e) = self.without_base(direction as u16)?;
        Some((e as i64, m))
    }
}

fn merge_exponents<K: Ord + Clone>(a: &[(K, u32)], b: &[(K, u32)]) -> Vec<(K, u32)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j].clone());
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push((a[i].0.clone(), a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Merges two sorted odd lists. The flag is true when the merge permutation
/// is odd. Each element of `b` passes every element of `a` greater than it.
fn merge_odd(a: &[JetVar], b: &[JetVar]) -> Option<(Vec<JetVar>, bool)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut negative = false;
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                if (a.len() - i) % 2 == 1 {
                    negative = !negative;
                }
                out.push(b[j].clone());
                j += 1;
            }
            std::cmp::Ordering::Equal => return None,
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Some((out, negative))
}
