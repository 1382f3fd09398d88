use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num::{One, Zero};

use super::{Coeff, FormGenerator, JetVar, Monomial, Parity, Word};

/// Polynomial in base coordinates and jet coordinates with exact rational
/// coefficients. Canonical: sorted monomials, no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct ScalarPoly {
    terms: BTreeMap<Monomial, Coeff>,
}

impl ScalarPoly {
    pub fn zero() -> Self {
        ScalarPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(Coeff::one())
    }

    pub fn constant(c: Coeff) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn integer(k: i64) -> Self {
        Self::constant(Coeff::from_integer(k.into()))
    }

    pub fn term(c: Coeff, m: Monomial) -> Self {
        let mut p = ScalarPoly::zero();
        p.add_term(m, c);
        p
    }

    pub fn base_coord(direction: usize) -> Self {
        Self::term(Coeff::one(), Monomial::base_coord(direction))
    }

    pub fn jet(var: JetVar) -> Self {
        Self::term(Coeff::one(), Monomial::jet(var))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, m: Monomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Coeff) -> ScalarPoly {
        if c.is_zero() {
            return ScalarPoly::zero();
        }
        ScalarPoly {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    /// Parity if every monomial agrees; `None` for the zero polynomial or a
    /// mixed one.
    pub fn parity(&self) -> Option<Parity> {
        homogeneous(self.terms.keys().map(|m| m.parity()))
    }

    pub fn is_parity_homogeneous(&self) -> bool {
        self.is_zero() || self.parity().is_some()
    }

    pub fn jet_order(&self) -> Option<usize> {
        self.terms.keys().filter_map(|m| m.jet_order()).max()
    }

    /// True when no monomial contains a jet coordinate.
    pub fn depends_on_base_only(&self) -> bool {
        self.terms.keys().all(|m| m.jet_vars().next().is_none())
    }

    pub fn constant_term(&self) -> Coeff {
        self.terms
            .get(&Monomial::one())
            .cloned()
            .unwrap_or_else(Coeff::zero)
    }

    /// Left partial derivative with respect to a jet coordinate.
    pub fn partial(&self, var: &JetVar) -> ScalarPoly {
        let mut out = ScalarPoly::zero();
        for (m, c) in &self.terms {
            if let Some((k, rest)) = m.partial(var) {
                out.add_term(rest, c * Coeff::from_integer(k.into()));
            }
        }
        out
    }

    /// Partial derivative with respect to the base coordinate `x^λ`.
    pub fn base_partial(&self, direction: usize) -> ScalarPoly {
        let mut out = ScalarPoly::zero();
        for (m, c) in &self.terms {
            if let Some((k, rest)) = m.base_partial(direction) {
                out.add_term(rest, c * Coeff::from_integer(k.into()));
            }
        }
        out
    }

    pub fn jet_vars(&self) -> Vec<JetVar> {
        let mut v: Vec<JetVar> = self
            .terms
            .keys()
            .flat_map(|m| m.jet_vars().cloned())
            .collect();
        v.sort();
        v.dedup();
        v
    }

    /// Splits by total degree in jet coordinates.
    pub fn split_by_jet_degree(&self) -> BTreeMap<usize, ScalarPoly> {
        let mut out: BTreeMap<usize, ScalarPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.jet_degree())
                .or_default()
                .add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn into_form(self) -> GradedForm {
        let mut f = GradedForm::zero();
        for (m, c) in self.terms {
            f.add_term(Word::empty(), m, c);
        }
        f
    }

    pub fn to_form(&self) -> GradedForm {
        self.clone().into_form()
    }

    pub fn pow(&self, k: u32) -> ScalarPoly {
        let mut acc = ScalarPoly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }
}

fn homogeneous(mut it: impl Iterator<Item = Parity>) -> Option<Parity> {
    let first = it.next()?;
    it.all(|p| p == first).then_some(first)
}

impl<'a> Add<&'a ScalarPoly> for &'a ScalarPoly {
    type Output = ScalarPoly;
    fn add(self, rhs: &ScalarPoly) -> ScalarPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&ScalarPoly> for ScalarPoly {
    fn add_assign(&mut self, rhs: &ScalarPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl<'a> Sub<&'a ScalarPoly> for &'a ScalarPoly {
    type Output = ScalarPoly;
    fn sub(self, rhs: &ScalarPoly) -> ScalarPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &ScalarPoly {
    type Output = ScalarPoly;
    fn neg(self) -> ScalarPoly {
        ScalarPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl<'a> Mul<&'a ScalarPoly> for &'a ScalarPoly {
    type Output = ScalarPoly;
    fn mul(self, rhs: &ScalarPoly) -> ScalarPoly {
        let mut out = ScalarPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                if let Some((m, neg)) = m1.mul(m2) {
                    let c = c1 * c2;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        out
    }
}

/// Element of the bigraded algebra of forms: a finite sum of
/// `coefficient · monomial · (g₁ ∧ … ∧ g_k)` with the scalar part written to
/// the left of the wedge word. The zero form is the empty sum.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct GradedForm {
    terms: BTreeMap<(Word, Monomial), Coeff>,
}

impl GradedForm {
    pub fn zero() -> Self {
        GradedForm::default()
    }

    pub fn one() -> Self {
        ScalarPoly::one().into_form()
    }

    pub fn generator(g: FormGenerator) -> Self {
        let mut f = GradedForm::zero();
        f.add_term(Word::single(g), Monomial::one(), Coeff::one());
        f
    }

    pub fn horizontal(direction: usize) -> Self {
        Self::generator(FormGenerator::Horizontal(direction as u16))
    }

    pub fn contact(var: JetVar) -> Self {
        Self::generator(FormGenerator::Contact(var))
    }

    pub fn single(word: Word, m: Monomial, c: Coeff) -> Self {
        let mut f = GradedForm::zero();
        f.add_term(word, m, c);
        f
    }

    /// Builds a form from a raw, possibly unsorted generator sequence.
    pub fn from_raw(c: Coeff, m: Monomial, generators: &[FormGenerator]) -> Self {
        match Word::from_sequence(generators) {
            Some((w, neg)) => Self::single(w, m, if neg { -c } else { c }),
            None => GradedForm::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Monomial, &Coeff)> {
        self.terms.iter().map(|((w, m), c)| (w, m, c))
    }

    pub fn add_term(&mut self, w: Word, m: Monomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry((w, m)) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Rebuilds the canonical representation. Forms built through the public
    /// API are always canonical, so this is the identity on them.
    pub fn normalize(&self) -> GradedForm {
        let mut out = GradedForm::zero();
        for (w, m, c) in self.terms() {
            let seq = w.expanded();
            out += &GradedForm::from_raw(c.clone(), m.clone(), &seq);
        }
        out
    }

    pub fn scale(&self, c: &Coeff) -> GradedForm {
        if c.is_zero() {
            return GradedForm::zero();
        }
        GradedForm {
            terms: self.terms.iter().map(|(k, x)| (k.clone(), x * c)).collect(),
        }
    }

    pub fn scale_int(&self, k: i64) -> GradedForm {
        self.scale(&Coeff::from_integer(k.into()))
    }

    /// Multiplication by a scalar from the left: `f · self`.
    pub fn left_mul_scalar(&self, f: &ScalarPoly) -> GradedForm {
        &f.to_form() * self
    }

    /// The pieces of contact degree `k` and horizontal degree `m`.
    pub fn bidegree_split(&self) -> BTreeMap<(usize, usize), GradedForm> {
        let mut out: BTreeMap<(usize, usize), GradedForm> = BTreeMap::new();
        for ((w, m), c) in &self.terms {
            out.entry((w.contact_degree(), w.horizontal_degree()))
                .or_default()
                .add_term(w.clone(), m.clone(), c.clone());
        }
        out
    }

    fn filter(&self, keep: impl Fn(&Word) -> bool) -> GradedForm {
        GradedForm {
            terms: self
                .terms
                .iter()
                .filter(|((w, _), _)| keep(w))
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    /// `h_k`: projection onto contact degree `k`.
    pub fn contact_part(&self, k: usize) -> GradedForm {
        self.filter(|w| w.contact_degree() == k)
    }

    /// `h^m`: projection onto horizontal degree `m`.
    pub fn horizontal_part(&self, m: usize) -> GradedForm {
        self.filter(|w| w.horizontal_degree() == m)
    }

    /// `h_0`.
    pub fn h0(&self) -> GradedForm {
        self.contact_part(0)
    }

    pub fn degree_part(&self, deg: usize) -> GradedForm {
        self.filter(|w| w.degree() == deg)
    }

    /// Splits by total Grassmann parity (monomial + word).
    pub fn parity_split(&self) -> (GradedForm, GradedForm) {
        let mut even = GradedForm::zero();
        let mut odd = GradedForm::zero();
        for ((w, m), c) in &self.terms {
            let p = w.parity() + m.parity();
            let target = if p.is_odd() { &mut odd } else { &mut even };
            target.add_term(w.clone(), m.clone(), c.clone());
        }
        (even, odd)
    }

    /// Total parity if homogeneous; `None` for zero or mixed forms.
    pub fn parity(&self) -> Option<Parity> {
        homogeneous(self.terms.keys().map(|(w, m)| w.parity() + m.parity()))
    }

    /// Form degree if homogeneous.
    pub fn form_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|(w, _)| w.degree());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn is_horizontal(&self) -> bool {
        self.terms.keys().all(|(w, _)| w.contact_degree() == 0)
    }

    /// Highest `|Λ|` over jet coordinates and contact generators.
    pub fn jet_order(&self) -> Option<usize> {
        self.terms
            .keys()
            .flat_map(|(w, m)| {
                let gens = w.factors().iter().filter_map(|(g, _)| match g {
                    FormGenerator::Contact(v) => Some(v.order()),
                    _ => None,
                });
                m.jet_order().into_iter().chain(gens)
            })
            .max()
    }

    /// The coefficient polynomial of a given word.
    pub fn coefficient_of(&self, word: &Word) -> ScalarPoly {
        let mut p = ScalarPoly::zero();
        for ((w, m), c) in &self.terms {
            if w == word {
                p.add_term(m.clone(), c.clone());
            }
        }
        p
    }

    /// Scalar (form degree 0) part as a polynomial.
    pub fn scalar_part(&self) -> ScalarPoly {
        self.coefficient_of(&Word::empty())
    }

    /// All contact generators occurring in the form.
    pub fn contact_generators(&self) -> Vec<JetVar> {
        let mut v: Vec<JetVar> = self
            .terms
            .keys()
            .flat_map(|(w, _)| {
                w.factors().iter().filter_map(|(g, _)| match g {
                    FormGenerator::Contact(v) => Some(v.clone()),
                    _ => None,
                })
            })
            .collect();
        v.sort();
        v.dedup();
        v
    }

    /// Every jet coordinate and contact generator index, as jet variables.
    pub fn jet_vars(&self) -> Vec<JetVar> {
        let mut v: Vec<JetVar> = self
            .terms
            .keys()
            .flat_map(|(_, m)| m.jet_vars().cloned())
            .collect();
        v.extend(self.contact_generators());
        v.sort();
        v.dedup();
        v
    }

    pub fn pow(&self, k: u32) -> GradedForm {
        let mut acc = GradedForm::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }
}

impl From<ScalarPoly> for GradedForm {
    fn from(p: ScalarPoly) -> Self {
        p.into_form()
    }
}

/// Product of two single terms `(m₁ w₁)·(m₂ w₂) = ± m₁m₂ w₁w₂`.
pub(crate) fn term_product(
    w1: &Word,
    m1: &Monomial,
    w2: &Word,
    m2: &Monomial,
) -> Option<(Word, Monomial, bool)> {
    // Moving the degree-0 scalar m₂ left past w₁ costs (−1)^{[w₁][m₂]}.
    let pass = w1.parity().is_odd() && m2.parity().is_odd();
    let (m, neg_m) = m1.mul(m2)?;
    let (w, neg_w) = w1.mul(w2)?;
    Some((w, m, pass ^ neg_m ^ neg_w))
}

impl<'a> Mul<&'a GradedForm> for &'a GradedForm {
    type Output = GradedForm;
    /// The graded wedge product.
    fn mul(self, rhs: &GradedForm) -> GradedForm {
        let mut out = GradedForm::zero();
        for ((w1, m1), c1) in &self.terms {
            for ((w2, m2), c2) in &rhs.terms {
                if let Some((w, m, neg)) = term_product(w1, m1, w2, m2) {
                    let c = c1 * c2;
                    out.add_term(w, m, if neg { -c } else { c });
                }
            }
        }
        out
    }
}

impl<'a> Add<&'a GradedForm> for &'a GradedForm {
    type Output = GradedForm;
    fn add(self, rhs: &GradedForm) -> GradedForm {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&GradedForm> for GradedForm {
    fn add_assign(&mut self, rhs: &GradedForm) {
        for ((w, m), c) in &rhs.terms {
            self.add_term(w.clone(), m.clone(), c.clone());
        }
    }
}

impl AddAssign<GradedForm> for GradedForm {
    fn add_assign(&mut self, rhs: GradedForm) {
        for ((w, m), c) in rhs.terms {
            self.add_term(w, m, c);
        }
    }
}

impl<'a> Sub<&'a GradedForm> for &'a GradedForm {
    type Output = GradedForm;
    fn sub(self, rhs: &GradedForm) -> GradedForm {
        let mut out = self.clone();
        for ((w, m), c) in &rhs.terms {
            out.add_term(w.clone(), m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &GradedForm {
    type Output = GradedForm;
    fn neg(self) -> GradedForm {
        GradedForm {
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }
}

impl std::iter::Sum for GradedForm {
    fn sum<I: Iterator<Item = GradedForm>>(iter: I) -> Self {
        let mut acc = GradedForm::zero();
        for f in iter {
            acc += f;
        }
        acc
    }
}

macro_rules! owned_ops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(mut self, rhs: $t) -> $t {
                self += &rhs;
                self
            }
        }

        impl Sub for $t {
            type Output = $t;
            fn sub(self, rhs: $t) -> $t {
                &self - &rhs
            }
        }

        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }

        impl SubAssign<&$t> for $t {
            fn sub_assign(&mut self, rhs: &$t) {
                *self = &*self - rhs;
            }
        }

        impl Mul for $t {
            type Output = $t;
            fn mul(self, rhs: $t) -> $t {
                &self * &rhs
            }
        }
    };
}

owned_ops!(GradedForm);
owned_ops!(ScalarPoly);

impl std::iter::Sum for ScalarPoly {
    fn sum<I: Iterator<Item = ScalarPoly>>(iter: I) -> Self {
        let mut acc = ScalarPoly::zero();
        for f in iter {
            acc += &f;
        }
        acc
    }
}
