//! Operators of the variational bicomplex: total derivatives, `d`, `d_H`,
//! `d_V`, graded contraction, prolonged Lie derivatives, the interior Euler
//! operator `ρ` and the variational operator `δ = ρ∘d`.
//!
//! All of them are graded derivations acting from the left and are expanded
//! by one engine from their values on coordinates and generators.

mod derivation;
mod engine;
mod euler;
mod operators;
mod symmetry;

pub use derivation::{ComponentFamily, Derivation};
pub use euler::{interior_euler, variational};
pub use operators::{
    contract, contract_dual, contract_horizontal, d, d_h, d_v, lie, lie_cartan, prolong_apply,
    scalar_total_derivative, total_derivative, total_derivative_multi,
};
pub use symmetry::{is_contact_preserving, ContactDefect};

use crate::jetalg::{AlgebraError, GradedForm, ModelContext};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum CalculusError {
    #[error("expected {expected} {what} components, found {found}")]
    ComponentCount {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("{0} mixes even and odd terms")]
    InhomogeneousComponent(String),
    #[error("derivation is not parity homogeneous ({0} has the wrong parity)")]
    InhomogeneousDerivation(String),
    #[error("base direction #{0} is out of range")]
    UnknownDirection(usize),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Checked total derivative: rejects directions outside the model.
pub fn total_derivative_checked(
    ctx: &ModelContext,
    direction: usize,
    form: &GradedForm,
) -> Result<GradedForm, CalculusError> {
    if direction >= ctx.base_dim() {
        return Err(CalculusError::UnknownDirection(direction));
    }
    ctx.check(form)?;
    Ok(total_derivative(direction, form))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jetalg::{Coeff, Parity, ScalarPoly};

    fn half() -> Coeff {
        Coeff::new(1.into(), 2.into())
    }

    fn particle() -> ModelContext {
        ModelContext::build(&["t"], &[("y", Parity::Even)])
    }

    #[test]
    fn total_derivative_of_product() {
        let ctx = particle();
        let f = &ctx.coord(0) * &ctx.jet(0, &[1]);
        let expected = &ctx.jet(0, &[1]) + &(&ctx.coord(0) * &ctx.jet(0, &[2]));
        assert_eq!(total_derivative(0, &f), expected);
        assert_eq!(total_derivative(0, &ctx.jet(0, &[0])), ctx.jet(0, &[1]));
        assert!(total_derivative_checked(&ctx, 1, &f).is_err());
    }

    #[test]
    fn total_derivatives_commute() {
        let ctx = ModelContext::build(&["t", "x"], &[("y", Parity::Even), ("c", Parity::Odd)]);
        let f = &(&ctx.coord(1) * &ctx.jet(0, &[1, 0])) * &(&ctx.jet(1, &[0, 1]) * &ctx.jet(1, &[0, 0]));
        let a = total_derivative(0, &total_derivative(1, &f));
        let b = total_derivative(1, &total_derivative(0, &f));
        assert_eq!(a, b);
        assert!(!a.is_zero());
    }

    #[test]
    fn scalar_and_form_total_derivatives_agree() {
        let ctx = ModelContext::build(&["t"], &[("y", Parity::Even), ("c", Parity::Odd), ("e", Parity::Odd)]);
        let f = &(&ctx.coord(0) * &ctx.jet(1, &[1])) * &(&ctx.jet(2, &[0]) * &ctx.jet(0, &[2]));
        let scalar = scalar_total_derivative(0, &f.scalar_part());
        assert_eq!(scalar.into_form(), total_derivative(0, &f));
    }

    #[test]
    fn differentials_on_generators() {
        let ctx = particle();
        let y = ctx.jet(0, &[0]);
        assert_eq!(d_v(&y), ctx.theta(0, &[0]));
        assert_eq!(d_h(&y), &ctx.jet(0, &[1]) * &ctx.dx(0));
        assert_eq!(d_h(&ctx.theta(0, &[0])), &ctx.dx(0) * &ctx.theta(0, &[1]));
        assert!(d(&d(&y)).is_zero());
        assert!(d(&ctx.theta(0, &[0])).contact_part(2).is_zero());
    }

    #[test]
    fn contraction_duality_and_sign() {
        let ctx = ModelContext::build(&["t"], &[("y", Parity::Even), ("c", Parity::Odd)]);
        let y0 = ctx.field_var(0);
        assert_eq!(contract_dual(&y0, &ctx.theta(0, &[0])), GradedForm::one());
        assert!(contract_dual(&y0, &ctx.dx(0)).is_zero());
        let c0 = ctx.field_var(1);
        let f = &ctx.theta(1, &[0]) * &ctx.dx(0);
        assert_eq!(contract_dual(&c0, &f), ctx.dx(0));
        // With the factors reversed the sign picks up (−1)^{|dt|} = −1.
        let g = &ctx.dx(0) * &ctx.theta(1, &[0]);
        assert_eq!(contract_dual(&c0, &g), -&ctx.dx(0));
    }

    #[test]
    fn time_translation_contracts_poincare_cartan() {
        let ctx = particle();
        let y1 = ctx.jet(0, &[1]);
        let form = &(&(&y1 * &y1).scale(&half()) * &ctx.dx(0)) + &(&y1 * &ctx.theta(0, &[0]));
        let v = Derivation::translation(&ctx, 0);
        assert_eq!(contract(&v, &form), (&y1 * &y1).scale(&(-half())));
    }

    #[test]
    fn prolongation_examples() {
        let ctx = particle();
        let shift = Derivation::field_shift(&ctx, 0);
        let y1 = ctx.jet(0, &[1]);
        let lagr = &(&y1 * &y1).scale(&half()) * &ctx.omega();
        assert!(lie(&shift, &lagr).is_zero());

        let t = Derivation::translation(&ctx, 0);
        for k in 1..4u16 {
            let var = ctx.jet_var(0, crate::jetalg::MultiIndex::from_exponents(vec![k]));
            assert!(t.characteristic_jet(&var) + ScalarPoly::jet(var.raise(0)) == ScalarPoly::zero());
            assert!(t.prolonged_component(&var).is_zero());
        }
        // Lie derivative along ∂_t acts as ∂_t on coefficients.
        let f = &(&ctx.coord(0) * &ctx.coord(0)) * &ctx.jet(0, &[2]);
        assert_eq!(lie(&t, &f), (&ctx.coord(0) * &ctx.jet(0, &[2])).scale_int(2));

        let s = Derivation::scaling(&ctx);
        assert_eq!(lie(&s, &ctx.jet(0, &[2])), ctx.jet(0, &[2]));
    }

    #[test]
    fn lie_routes_agree_on_odd_fields() {
        let ctx = ModelContext::build(&["t"], &[("y", Parity::Even), ("c", Parity::Odd)]);
        let c = ScalarPoly::jet(ctx.field_var(1));
        let y1 = ScalarPoly::jet(ctx.jet_var(0, crate::jetalg::MultiIndex::from_exponents(vec![1])));
        // Odd derivation: ϑ^y = c·y_(1), ϑ^c = y; υ^t = 0.
        let v = Derivation::new(&ctx, vec![ScalarPoly::zero()], vec![&c * &y1, ScalarPoly::jet(ctx.field_var(0))])
            .unwrap();
        assert_eq!(v.parity(), Parity::Odd);
        let form = &(&ctx.jet(1, &[1]) * &ctx.theta(0, &[1])) * &ctx.theta(1, &[0]);
        let form = &form + &(&ctx.jet(0, &[2]) * &ctx.dx(0));
        assert_eq!(lie(&v, &form), lie_cartan(&v, &form));
    }

    #[test]
    fn inhomogeneous_derivation_is_rejected() {
        let ctx = ModelContext::build(&["t"], &[("y", Parity::Even), ("c", Parity::Odd)]);
        let err = Derivation::new(&ctx, vec![ScalarPoly::zero()], vec![ScalarPoly::one(), ScalarPoly::one()]);
        assert!(err.is_err());
    }

    #[test]
    fn contact_preservation_witness() {
        let ctx = particle();
        let scaling = Derivation::scaling(&ctx);
        let family = ComponentFamily::from_derivation(&ctx, &scaling, 3);
        assert!(is_contact_preserving(&ctx, &family).is_ok());

        let mut raw = family.clone();
        let y1 = ctx.jet_var(0, crate::jetalg::MultiIndex::from_exponents(vec![1]));
        raw.components.insert(y1.clone(), ScalarPoly::zero());
        let err = is_contact_preserving(&ctx, &raw).unwrap_err();
        assert_eq!(err.generator, ctx.field_var(0));
        assert_eq!(err.defect, &ctx.jet(0, &[1]) * &ctx.dx(0));

        let zero = Derivation::zero(&ctx, Parity::Even);
        assert!(is_contact_preserving(&ctx, &ComponentFamily::from_derivation(&ctx, &zero, 2)).is_ok());
    }

    #[test]
    fn interior_euler_examples() {
        let ctx = particle();
        let w = ctx.omega();
        let src = &ctx.theta(0, &[0]) * &w;
        assert_eq!(interior_euler(&ctx, &src), src);
        assert!(interior_euler(&ctx, &(&ctx.theta(0, &[1]) * &w)).is_zero());
        let f = &(&ctx.jet(0, &[0]) * &ctx.theta(0, &[1])) * &w;
        let expected = -&(&(&ctx.jet(0, &[1]) * &ctx.theta(0, &[0])) * &w);
        assert_eq!(interior_euler(&ctx, &f), expected);
    }

    #[test]
    fn variational_free_particle() {
        let ctx = particle();
        let y1 = ctx.jet(0, &[1]);
        let lagr = &(&y1 * &y1).scale(&half()) * &ctx.omega();
        let expected = -&(&(&ctx.jet(0, &[2]) * &ctx.theta(0, &[0])) * &ctx.omega());
        assert_eq!(variational(&ctx, &lagr), expected);
        assert!(variational(&ctx, &variational(&ctx, &lagr)).is_zero());
    }
}
