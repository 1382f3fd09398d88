use num::One;

use crate::jetalg::{Coeff, FormGenerator, GradedForm, JetVar, Monomial, Parity, ScalarPoly};

use super::engine::{apply_derivation, Atom};
use super::Derivation;

/// `d_λ f = ∂_λ f + Σ s_{v+λ} ∂_v f` on a scalar polynomial.
pub fn scalar_total_derivative(direction: usize, f: &ScalarPoly) -> ScalarPoly {
    let mut out = ScalarPoly::zero();
    for (m, c) in f.terms() {
        if let Some((e, rest)) = m.base_partial(direction) {
            out.add_term(rest, c * Coeff::from_integer(e.into()));
        }
        for var in m.jet_vars() {
            let (k, rest) = m.partial(var).expect("variable occurs in monomial");
            let raised = Monomial::jet(var.raise(direction));
            if let Some((prod, negative)) = raised.mul(&rest) {
                let k = if negative { -k } else { k };
                out.add_term(prod, c * Coeff::from_integer(k.into()));
            }
        }
    }
    out
}

/// Total derivative `d_λ` extended to forms: it shifts jets and contact
/// forms, kills `dx^μ`.
pub fn total_derivative(direction: usize, form: &GradedForm) -> GradedForm {
    apply_derivation(form, false, Parity::Even, |atom| match atom {
        Atom::Base(d) if *d as usize == direction => GradedForm::one(),
        Atom::Base(_) => GradedForm::zero(),
        Atom::Jet(v) => jet_form(v.raise(direction)),
        Atom::Generator(FormGenerator::Contact(v)) => GradedForm::contact(v.raise(direction)),
        Atom::Generator(FormGenerator::Horizontal(_)) => GradedForm::zero(),
    })
}

/// `d_Λ` as an iterated total derivative.
pub fn total_derivative_multi(index: &crate::jetalg::MultiIndex, form: &GradedForm) -> GradedForm {
    let mut out = form.clone();
    for dir in index.directions() {
        if out.is_zero() {
            break;
        }
        out = total_derivative(dir, &out);
    }
    out
}

/// Horizontal differential `d_H φ = dx^λ ∧ d_λ φ`.
pub fn d_h(form: &GradedForm) -> GradedForm {
    apply_derivation(form, true, Parity::Even, |atom| match atom {
        Atom::Base(d) => GradedForm::horizontal(*d as usize),
        Atom::Jet(v) => (0..v.index.dim())
            .map(|l| &jet_form(v.raise(l)) * &GradedForm::horizontal(l))
            .sum(),
        Atom::Generator(FormGenerator::Contact(v)) => (0..v.index.dim())
            .map(|l| &GradedForm::horizontal(l) * &GradedForm::contact(v.raise(l)))
            .sum(),
        Atom::Generator(FormGenerator::Horizontal(_)) => GradedForm::zero(),
    })
}

/// Vertical differential: `s_Λ ↦ θ_Λ`, everything else to zero.
pub fn d_v(form: &GradedForm) -> GradedForm {
    apply_derivation(form, true, Parity::Even, |atom| match atom {
        Atom::Jet(v) => GradedForm::contact(v.clone()),
        _ => GradedForm::zero(),
    })
}

/// Exterior differential `d = d_H + d_V`.
pub fn d(form: &GradedForm) -> GradedForm {
    d_h(form) + d_v(form)
}

/// Graded interior product `v ⌋ φ` with the prolongation of `v`.
pub fn contract(v: &Derivation, form: &GradedForm) -> GradedForm {
    apply_derivation(form, true, v.parity(), |atom| match atom {
        Atom::Generator(FormGenerator::Horizontal(l)) => v.horizontal(*l as usize).to_form(),
        Atom::Generator(FormGenerator::Contact(var)) => v.characteristic_jet(var).into_form(),
        _ => GradedForm::zero(),
    })
}

/// `∂^Λ_a ⌋ φ`: contraction with the vector dual to `θ^a_Λ`.
pub fn contract_dual(var: &JetVar, form: &GradedForm) -> GradedForm {
    apply_derivation(form, true, var.parity(), |atom| match atom {
        Atom::Generator(FormGenerator::Contact(w)) if w == var => GradedForm::one(),
        _ => GradedForm::zero(),
    })
}

/// `∂_λ ⌋ φ`: contraction with the vector dual to `dx^λ`.
pub fn contract_horizontal(direction: usize, form: &GradedForm) -> GradedForm {
    apply_derivation(form, true, Parity::Even, |atom| match atom {
        Atom::Generator(FormGenerator::Horizontal(l)) if *l as usize == direction => GradedForm::one(),
        _ => GradedForm::zero(),
    })
}

/// Lie derivative along the prolongation of `v`, expanded from its values
/// on coordinates and generators.
pub fn lie(v: &Derivation, form: &GradedForm) -> GradedForm {
    if v.is_zero() {
        return GradedForm::zero();
    }
    apply_derivation(form, false, v.parity(), |atom| match atom {
        Atom::Base(dir) => v.horizontal(*dir as usize).to_form(),
        Atom::Jet(var) => v.prolonged_component(var).into_form(),
        Atom::Generator(FormGenerator::Horizontal(l)) => d(&v.horizontal(*l as usize).to_form()),
        Atom::Generator(FormGenerator::Contact(var)) => {
            let mut out = d_v(&v.characteristic_jet(var).into_form());
            for (mu, h) in v.horizontal_components().iter().enumerate() {
                if !h.is_zero() {
                    out += &h.to_form() * &GradedForm::contact(var.raise(mu));
                }
            }
            out
        }
    })
}

/// Lie derivative through Cartan's formula `v⌋dφ + d(v⌋φ)`.
pub fn lie_cartan(v: &Derivation, form: &GradedForm) -> GradedForm {
    contract(v, &d(form)) + d(&contract(v, form))
}

/// Alias of [`lie`]: the action of the prolonged derivation on forms.
pub fn prolong_apply(v: &Derivation, form: &GradedForm) -> GradedForm {
    lie(v, form)
}

fn jet_form(v: JetVar) -> GradedForm {
    GradedForm::single(crate::jetalg::Word::empty(), Monomial::jet(v), Coeff::one())
}
