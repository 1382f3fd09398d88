//! Expansion of a graded derivation from its values on atoms.
//!
//! A graded derivation `D` of form degree `p` and parity `q` obeys
//! `D(φ∧σ) = Dφ∧σ + (−1)^{p|φ| + q[φ]} φ∧Dσ`, so it is determined by its
//! values on base coordinates, jet coordinates, `dx^λ` and `θ^a_Λ`.

use std::collections::HashMap;

use num::One;

use crate::jetalg::{Coeff, FormGenerator, GradedForm, JetVar, Monomial, Parity, Word};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub(crate) enum Atom {
    Base(u16),
    Jet(JetVar),
    Generator(FormGenerator),
}

/// Applies the derivation described by `action` to `form`.
///
/// `odd_degree` is `p mod 2`. Atom values are cached for the duration of the
/// call.
pub(crate) fn apply_derivation<F>(
    form: &GradedForm,
    odd_degree: bool,
    parity: Parity,
    mut action: F,
) -> GradedForm
where
    F: FnMut(&Atom) -> GradedForm,
{
    let q = parity.is_odd();
    let mut cache: HashMap<Atom, GradedForm> = HashMap::new();
    let mut value = |atom: Atom| -> GradedForm {
        if let Some(v) = cache.get(&atom) {
            return v.clone();
        }
        let v = action(&atom);
        cache.insert(atom, v.clone());
        v
    };
    let mut out = GradedForm::zero();
    for (w, m, c) in form.terms() {
        let word_form = GradedForm::single(w.clone(), Monomial::one(), Coeff::one());

        // Base coordinates and even jets: even scalars, commute with everything.
        for &(dir, e) in m.base_factors() {
            let img = value(Atom::Base(dir));
            if img.is_zero() {
                continue;
            }
            let (rest, _) = m.without_base(dir).expect("factor present");
            let scale = c * Coeff::from_integer(e.into());
            out += place(&rest, &img, &word_form, &scale);
        }
        for (var, e) in m.even_factors() {
            let img = value(Atom::Jet(var.clone()));
            if img.is_zero() {
                continue;
            }
            let (rest, _) = m.without_even(var).expect("factor present");
            let scale = c * Coeff::from_integer((*e).into());
            out += place(&rest, &img, &word_form, &scale);
        }
        // Odd jets: passing i odd factors costs (−1)^{q·i}.
        for (i, var) in m.odd_factors().iter().enumerate() {
            let img = value(Atom::Jet(var.clone()));
            if img.is_zero() {
                continue;
            }
            let (prefix, suffix) = m.split_odd(i);
            let negative = q && i % 2 == 1;
            let scale = if negative { -c.clone() } else { c.clone() };
            let prefix = GradedForm::single(Word::empty(), prefix, Coeff::one());
            let suffix = GradedForm::single(w.clone(), suffix, Coeff::one());
            out += (&(&prefix * &img) * &suffix).scale(&scale);
        }

        // Generators, after passing the whole monomial: (−1)^{q[m]}.
        let gens = w.expanded();
        let mut negative = q && m.parity().is_odd();
        for (j, g) in gens.iter().enumerate() {
            let img = value(Atom::Generator(g.clone()));
            if !img.is_zero() {
                let scale = if negative { -c.clone() } else { c.clone() };
                let prefix = GradedForm::from_raw(Coeff::one(), m.clone(), &gens[..j]);
                let suffix = GradedForm::from_raw(Coeff::one(), Monomial::one(), &gens[j + 1..]);
                out += (&(&prefix * &img) * &suffix).scale(&scale);
            }
            // Passing g: (−1)^{p·1 + q·[g]}.
            negative ^= odd_degree ^ (q && g.parity().is_odd());
        }
    }
    out
}

/// `scale · rest_even · img · rest_odd · word`, where `rest` is split into its
/// even part (which commutes with everything) and its ordered odd part.
fn place(rest: &Monomial, img: &GradedForm, word: &GradedForm, scale: &Coeff) -> GradedForm {
    let even = Monomial {
        base: rest.base.clone(),
        even: rest.even.clone(),
        odd: Vec::new(),
    };
    let odd = Monomial {
        odd: rest.odd.clone(),
        ..Default::default()
    };
    let left = GradedForm::single(Word::empty(), even, Coeff::one());
    let right = GradedForm::single(Word::empty(), odd, Coeff::one());
    (&(&(&left * img) * &right) * word).scale(scale)
}
