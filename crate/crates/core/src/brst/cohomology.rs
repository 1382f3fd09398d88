use std::collections::BTreeMap;

use num::One;

use crate::calculus::{d_h, Derivation};
use crate::jetalg::{Coeff, FormGenerator, GradedForm, JetVar, ModelContext, Monomial, MultiIndex, ScalarPoly, Word};
use crate::linalg::{kernel, Echelon, SparseVec};

use super::{nilpotency_check, s_operator, BrstError};

/// Integer charge of every field, extended additively to monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChargeGrading {
    charges: Vec<i64>,
}

impl ChargeGrading {
    /// Charges declared in the model.
    pub fn from_context(ctx: &ModelContext) -> Self {
        ChargeGrading {
            charges: ctx.fields().iter().map(|f| f.charge).collect(),
        }
    }

    pub fn new(charges: Vec<i64>) -> Self {
        ChargeGrading { charges }
    }

    pub fn field_charge(&self, field: usize) -> i64 {
        self.charges[field]
    }

    pub fn monomial_charge(&self, m: &Monomial) -> i64 {
        let even: i64 = m
            .even_factors()
            .iter()
            .map(|(v, e)| self.charges[v.field as usize] * *e as i64)
            .sum();
        let odd: i64 = m.odd_factors().iter().map(|v| self.charges[v.field as usize]).sum();
        even + odd
    }

    /// Charge of a form whose terms all have the same charge.
    pub fn charge_of(&self, form: &GradedForm) -> Option<i64> {
        let mut it = form.terms().map(|(_, m, _)| self.monomial_charge(m));
        let first = it.next()?;
        it.all(|c| c == first).then_some(first)
    }

    /// The fixed shift `charge(υ^a) − charge(s^a)` of a vertical derivation.
    pub fn step(&self, v: &Derivation) -> Result<i64, BrstError> {
        let mut step = None;
        for (a, c) in v.characteristics().iter().enumerate() {
            for (m, _) in c.terms() {
                let s = self.monomial_charge(m) - self.charges[a];
                match step {
                    None => step = Some(s),
                    Some(old) if old != s => return Err(BrstError::NotGraded),
                    _ => {}
                }
            }
        }
        Ok(step.unwrap_or(0))
    }
}

/// Bounds of a finite space of horizontal forms: jet order `≤ max_jet`
/// (`-1` admits no jet variables), at most `max_degree` jet factors, base
/// degree `≤ max_base`, fixed charge and form degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CochainTruncation {
    pub max_jet: i64,
    pub max_degree: usize,
    pub max_base: usize,
    pub charge: i64,
    pub form_degree: usize,
}

impl CochainTruncation {
    fn with(self, charge: i64, form_degree: usize, max_jet: i64) -> Self {
        CochainTruncation {
            charge,
            form_degree,
            max_jet,
            ..self
        }
    }
}

/// Basis of the truncated space: single canonical terms with coefficient 1.
pub fn truncation_basis(ctx: &ModelContext, grading: &ChargeGrading, t: &CochainTruncation) -> Vec<GradedForm> {
    let n = ctx.base_dim();
    if t.form_degree > n {
        return Vec::new();
    }
    let mut vars: Vec<JetVar> = Vec::new();
    if t.max_jet >= 0 {
        for a in 0..ctx.fields().len() {
            for idx in MultiIndex::all_up_to(n, t.max_jet as usize) {
                vars.push(ctx.jet_var(a, idx));
            }
        }
    }
    vars.sort();
    let mut jet_monomials = Vec::new();
    collect_jet_monomials(&vars, 0, t.max_degree, &ScalarPoly::one(), grading, t.charge, &mut jet_monomials);
    let mut base_monomials = vec![ScalarPoly::one()];
    let mut frontier = vec![(ScalarPoly::one(), 0usize)];
    for _ in 0..t.max_base {
        let mut next = Vec::new();
        for (m, start) in &frontier {
            for l in *start..n {
                let p = m * &ScalarPoly::base_coord(l);
                base_monomials.push(p.clone());
                next.push((p, l));
            }
        }
        frontier = next;
    }
    let mut words = Vec::new();
    subsets(n, t.form_degree, 0, &mut Vec::new(), &mut words);
    let mut out = Vec::new();
    for w in &words {
        for b in &base_monomials {
            for j in &jet_monomials {
                let f = &(b * j).into_form() * &GradedForm::from_raw(Coeff::one(), Monomial::one(), w);
                let term = f.terms().next().map(|(w, m, _)| GradedForm::single(w.clone(), m.clone(), Coeff::one()));
                out.extend(term);
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

fn collect_jet_monomials(
    vars: &[JetVar],
    start: usize,
    budget: usize,
    current: &ScalarPoly,
    grading: &ChargeGrading,
    charge: i64,
    out: &mut Vec<ScalarPoly>,
) {
    if let Some((m, _)) = current.terms().next() {
        if grading.monomial_charge(m) == charge {
            out.push(current.clone());
        }
    }
    if budget == 0 {
        return;
    }
    for i in start..vars.len() {
        let next = current * &ScalarPoly::jet(vars[i].clone());
        if next.is_zero() {
            continue;
        }
        // Odd variables may appear once; even ones may repeat.
        let resume = if vars[i].odd { i + 1 } else { i };
        collect_jet_monomials(vars, resume, budget - 1, &next, grading, charge, out);
    }
}

fn subsets(n: usize, k: usize, start: usize, current: &mut Vec<FormGenerator>, out: &mut Vec<Vec<FormGenerator>>) {
    if current.len() == k {
        out.push(current.clone());
        return;
    }
    for l in start..n {
        current.push(FormGenerator::Horizontal(l as u16));
        subsets(n, k, l + 1, current, out);
        current.pop();
    }
}

/// Coordinates of forms with respect to a basis of single terms.
struct Coordinates {
    index: BTreeMap<(Word, Monomial), usize>,
}

impl Coordinates {
    fn new(basis: &[GradedForm]) -> Self {
        let index = basis
            .iter()
            .enumerate()
            .map(|(i, f)| {
                let (w, m, _) = f.terms().next().expect("basis elements are nonzero");
                ((w.clone(), m.clone()), i)
            })
            .collect();
        Coordinates { index }
    }

    /// `None` when the form leaves the span of the basis.
    fn of(&self, f: &GradedForm) -> Option<SparseVec> {
        f.terms()
            .map(|(w, m, c)| self.index.get(&(w.clone(), m.clone())).map(|i| (*i, c.clone())))
            .collect()
    }
}

/// Coordinates in an open-ended registry (for codomain vectors).
#[derive(Default)]
struct Registry {
    index: BTreeMap<(Word, Monomial), usize>,
}

impl Registry {
    fn of(&mut self, f: &GradedForm) -> SparseVec {
        let mut out = SparseVec::new();
        for (w, m, c) in f.terms() {
            let len = self.index.len();
            let i = *self.index.entry((w.clone(), m.clone())).or_insert(len);
            out.insert(i, c.clone());
        }
        out
    }
}

/// Relative `(s/d_H)` cohomology of a truncation.
#[derive(Clone, Debug)]
pub struct RelativeCohomology {
    pub truncation: CochainTruncation,
    /// Charge shift of `s`.
    pub step: i64,
    pub domain_dim: usize,
    pub cocycle_dim: usize,
    pub exact_dim: usize,
    pub dimension: usize,
    /// Cocycles spanning a complement of the exact part.
    pub representatives: Vec<GradedForm>,
    /// At top form degree this is also the iterated cohomology.
    pub iterated: bool,
    basis: Vec<GradedForm>,
    exact: Echelon,
}

impl RelativeCohomology {
    /// Whether a cocycle of the truncation is trivial (`s`-exact plus
    /// `d_H`-exact). Errors when `φ` lies outside the domain.
    pub fn is_trivial(&self, phi: &GradedForm) -> Result<bool, BrstError> {
        let coords = Coordinates::new(&self.basis);
        let x = coords.of(phi).ok_or(BrstError::OutsideTruncation)?;
        Ok(self.exact.contains(&x))
    }

    pub fn basis(&self) -> &[GradedForm] {
        &self.basis
    }
}

fn combine(basis: &[GradedForm], x: &SparseVec) -> GradedForm {
    x.iter().map(|(i, c)| basis[*i].scale(c)).sum()
}

/// Computes `Z/E` with `Z = {φ : sφ ∈ d_H V^{k+step, m−1}(J−1)}` and
/// `E = s V^{k−step, m}(J) + d_H V^{k, m−1}(J−1)`, after verifying that the
/// truncation is closed under `s` and that `E ⊆ Z`.
pub fn relative_cohomology(
    ctx: &ModelContext,
    v: &Derivation,
    grading: &ChargeGrading,
    t: &CochainTruncation,
) -> Result<RelativeCohomology, BrstError> {
    let report = nilpotency_check(ctx, v)?;
    if !report.nilpotent {
        return Err(BrstError::NotNilpotent);
    }
    let step = grading.step(v)?;
    let (k, m) = (t.charge, t.form_degree);
    let domain = truncation_basis(ctx, grading, t);
    let target = truncation_basis(ctx, grading, &t.with(k + step, m, t.max_jet));
    let previous = truncation_basis(ctx, grading, &t.with(k - step, m, t.max_jet));
    let (h_prev, h_next) = if m == 0 {
        (Vec::new(), Vec::new())
    } else {
        (
            truncation_basis(ctx, grading, &t.with(k, m - 1, t.max_jet - 1)),
            truncation_basis(ctx, grading, &t.with(k + step, m - 1, t.max_jet - 1)),
        )
    };
    let dom = Coordinates::new(&domain);
    let tgt = Coordinates::new(&target);

    // Closure of the truncation under s.
    let mut images = Vec::with_capacity(domain.len());
    for b in &domain {
        let sb = s_operator(v, b)?;
        if tgt.of(&sb).is_none() {
            return Err(BrstError::NotClosed {
                operator: "s",
                form: b.clone(),
            });
        }
        images.push(sb);
    }

    // Cocycles: kernel of [S | −W] restricted to the domain part.
    let mut reg = Registry::default();
    let mut columns: Vec<SparseVec> = images.iter().map(|f| reg.of(f)).collect();
    columns.extend(h_next.iter().map(|c| reg.of(&d_h(c))));
    let mut cocycles = Echelon::new();
    let mut cocycle_vectors = Vec::new();
    for x in kernel(&columns) {
        let restricted: SparseVec = x.into_iter().filter(|(i, _)| *i < domain.len()).collect();
        if !restricted.is_empty() && cocycles.insert(&restricted).is_ok() {
            cocycle_vectors.push(restricted);
        }
    }

    // Exact part, which must sit inside the cocycles.
    let mut exact = Echelon::new();
    let mut generators = Vec::new();
    for p in &previous {
        generators.push(("s", p, s_operator(v, p)?));
    }
    for c in &h_prev {
        generators.push(("d_H", c, d_h(c)));
    }
    for (op, src, e) in generators {
        let x = dom
            .of(&e)
            .ok_or_else(|| BrstError::NotClosed {
                operator: op,
                form: src.clone(),
            })?;
        if x.is_empty() {
            continue;
        }
        if !cocycles.contains(&x) {
            return Err(BrstError::NotSubcomplex {
                operator: op,
                form: src.clone(),
            });
        }
        let _ = exact.insert(&x);
    }

    let mut quotient = exact.clone();
    let mut representatives = Vec::new();
    for z in &cocycle_vectors {
        if quotient.insert(z).is_ok() {
            representatives.push(combine(&domain, z));
        }
    }
    Ok(RelativeCohomology {
        truncation: *t,
        step,
        domain_dim: domain.len(),
        cocycle_dim: cocycles.rank(),
        exact_dim: exact.rank(),
        dimension: representatives.len(),
        representatives,
        iterated: m == ctx.base_dim(),
        basis: domain,
        exact,
    })
}
