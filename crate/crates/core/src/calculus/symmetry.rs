use crate::jetalg::{GradedForm, JetVar, ModelContext, MultiIndex};

use super::operators::d_h;
use super::ComponentFamily;

/// A contact generator whose Lie derivative acquires a horizontal part.
#[derive(Clone, Debug, PartialEq)]
pub struct ContactDefect {
    pub generator: JetVar,
    /// `h_0(L_v θ^a_Λ)`, nonzero.
    pub defect: GradedForm,
}

/// Checks `h_0(L_v θ^a_Λ) = 0` for every `θ^a_Λ` whose Lie derivative is
/// fully determined by the family (`|Λ| < order`). Returns the first
/// failing generator in canonical order.
pub fn is_contact_preserving(ctx: &ModelContext, family: &ComponentFamily) -> Result<(), ContactDefect> {
    let n = ctx.base_dim();
    if family.order == 0 {
        return Ok(());
    }
    let horizontal_diffs: Vec<GradedForm> = family.horizontal.iter().map(|h| d_h(&h.to_form())).collect();
    let odd_v = family.parity.is_odd();
    for a in 0..ctx.fields().len() {
        for idx in MultiIndex::all_up_to(n, family.order - 1) {
            let var = ctx.jet_var(a, idx);
            // θ = ds_J − s_{λ+J} dx^λ, so h_0(L_v θ) = d_H(υ_J) − Σ h_0 L_v(s_{λ+J} dx^λ).
            let mut defect = d_h(&family.component(&var).into_form());
            let sign_flip = odd_v && var.odd;
            for (l, dh) in horizontal_diffs.iter().enumerate() {
                let up = var.raise(l);
                defect = &defect - &(&family.component(&up).into_form() * &GradedForm::horizontal(l));
                if dh.is_zero() {
                    continue;
                }
                let s_up = GradedForm::from(crate::jetalg::ScalarPoly::jet(up));
                let t = &s_up * dh;
                defect = if sign_flip { &defect + &t } else { &defect - &t };
            }
            if !defect.is_zero() {
                return Err(ContactDefect { generator: var, defect });
            }
        }
    }
    Ok(())
}
