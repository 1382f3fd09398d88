use num::One;

use crate::jetalg::{Coeff, GradedForm, ModelContext};

use super::operators::{contract_dual, d, total_derivative_multi};

/// `ρ̄(φ) = Σ (−1)^{|Λ|} θ^a ∧ d_Λ(∂^Λ_a ⌋ φ)`, summed over the contact
/// generators occurring in `φ`.
fn rho_bar(ctx: &ModelContext, form: &GradedForm) -> GradedForm {
    let mut out = GradedForm::zero();
    for var in form.contact_generators() {
        let inner = contract_dual(&var, form);
        if inner.is_zero() {
            continue;
        }
        let mut term = &GradedForm::contact(ctx.field_var(var.field as usize))
            * &total_derivative_multi(&var.index, &inner);
        if var.order() % 2 == 1 {
            term = -&term;
        }
        out += term;
    }
    out
}

/// Interior Euler operator `ρ = Σ_{k>0} (1/k) ρ̄ ∘ h_k ∘ h^n`.
pub fn interior_euler(ctx: &ModelContext, form: &GradedForm) -> GradedForm {
    let top = form.horizontal_part(ctx.base_dim());
    let mut out = GradedForm::zero();
    for ((k, _), piece) in top.bidegree_split() {
        if k == 0 {
            continue;
        }
        let weight = Coeff::new(One::one(), (k as i64).into());
        out += rho_bar(ctx, &piece).scale(&weight);
    }
    out
}

/// Variational operator `δ = ρ ∘ d`.
pub fn variational(ctx: &ModelContext, form: &GradedForm) -> GradedForm {
    interior_euler(ctx, &d(&form.horizontal_part(ctx.base_dim())))
}
