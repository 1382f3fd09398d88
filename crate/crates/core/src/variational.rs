//! Lagrangian-level algorithms: Euler–Lagrange operators, Lepagean
//! equivalents, the first variational formula, Noether currents and
//! variational triviality.

use std::collections::BTreeMap;

use num::One;

use crate::calculus::{
    contract, contract_dual, d_h, d_v, interior_euler, lie, scalar_total_derivative, variational, Derivation,
};
use crate::jetalg::{Coeff, GradedForm, JetVar, ModelContext, MultiIndex, ScalarPoly, Word};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum VariationalError {
    #[error("form is not a horizontal density (bidegree (0,{0}))")]
    NotDensity(usize),
    #[error("form is not in bidegree (1,{0})")]
    NotContactDensity(usize),
    #[error("Lagrangian is not variationally trivial")]
    NotTrivial { euler_lagrange: EulerLagrangeForm },
    #[error("interior Euler operator does not annihilate the form")]
    NotInKernel { rho: GradedForm },
    #[error("symmetry is not projected onto the base (υ^{0} depends on jet variables)")]
    NotProjected(usize),
    #[error("the base has dimension zero")]
    ZeroBase,
    #[error("internal identity failed: {0}")]
    IdentityFailed(&'static str),
}

/// A density `ℒ` and its horizontal form `L = ℒω`.
#[derive(Clone, Debug, PartialEq)]
pub struct Lagrangian {
    density: ScalarPoly,
    n: usize,
}

impl Lagrangian {
    pub fn new(ctx: &ModelContext, density: ScalarPoly) -> Result<Self, crate::jetalg::AlgebraError> {
        ctx.check(&density.to_form())?;
        Ok(Lagrangian {
            density,
            n: ctx.base_dim(),
        })
    }

    /// Reads a horizontal density `ℒω`.
    pub fn from_form(ctx: &ModelContext, form: &GradedForm) -> Result<Self, VariationalError> {
        let n = ctx.base_dim();
        let omega = volume_word(ctx);
        if form.terms().any(|(w, _, _)| *w != omega) {
            return Err(VariationalError::NotDensity(n));
        }
        Ok(Lagrangian {
            density: form.coefficient_of(&omega),
            n,
        })
    }

    pub fn density(&self) -> &ScalarPoly {
        &self.density
    }

    pub fn form(&self, ctx: &ModelContext) -> GradedForm {
        &self.density.to_form() * &ctx.omega()
    }

    pub fn jet_order(&self) -> usize {
        self.density.jet_order().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.density.is_zero()
    }

    pub fn base_dim(&self) -> usize {
        self.n
    }
}

fn volume_word(ctx: &ModelContext) -> Word {
    ctx.omega().terms().next().map(|(w, _, _)| w.clone()).unwrap_or_default()
}

/// `δL = Σ θ^a ∧ E_a ω`.
#[derive(Clone, Debug, PartialEq)]
pub struct EulerLagrangeForm {
    pub components: Vec<ScalarPoly>,
    pub form: GradedForm,
}

impl EulerLagrangeForm {
    pub fn is_zero(&self) -> bool {
        self.components.iter().all(ScalarPoly::is_zero)
    }
}

/// Lepagean equivalent `Ξ_L = Ξ + L` with its coefficient family `F_a^Λ`.
#[derive(Clone, Debug, PartialEq)]
pub struct LepageanForm {
    /// `F_a^Λ`, keyed by the jet variable `s^a_Λ`, `1 ≤ |Λ| ≤ r`; zero entries
    /// are omitted.
    pub coefficients: BTreeMap<JetVar, ScalarPoly>,
    /// `Ξ`, of bidegree `(1, n−1)`.
    pub xi: GradedForm,
    /// `Ξ_L = Ξ + L`.
    pub xi_l: GradedForm,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NoetherCurrent {
    /// `J = h_0(v⌋Ξ_L) − σ`.
    pub current: GradedForm,
    /// `σ` with `L_v L = d_H σ`.
    pub boundary: GradedForm,
    /// `v_V⌋δL`; the identity `d_H J + v_V⌋δL = 0` has been verified.
    pub defect: GradedForm,
}

#[derive(Clone, Debug, PartialEq)]
pub enum DivergenceSymmetry {
    Yes(NoetherCurrent),
    /// `δ(L_v L) ≠ 0`.
    No { witness: GradedForm },
}

/// `E_a = Σ (−1)^{|Λ|} d_Λ(∂^Λ_a ℒ)`.
pub fn euler_lagrange(ctx: &ModelContext, lagrangian: &Lagrangian) -> EulerLagrangeForm {
    let dens = lagrangian.density();
    let mut components = vec![ScalarPoly::zero(); ctx.fields().len()];
    for var in dens.jet_vars() {
        let mut term = dens.partial(&var);
        for dir in var.index.directions() {
            term = scalar_total_derivative(dir, &term);
        }
        if var.order() % 2 == 1 {
            term = -term;
        }
        components[var.field as usize] += &term;
    }
    let omega = ctx.omega();
    let form = components
        .iter()
        .enumerate()
        .map(|(a, e)| &(&GradedForm::contact(ctx.field_var(a)) * &e.to_form()) * &omega)
        .sum();
    EulerLagrangeForm { components, form }
}

/// Solves the downward recursion
/// `F^M = S^M − Σ_λ (M_λ+1)/(|M|+1) · d_λ F^{M+λ}` for `1 ≤ |M| ≤ r` and
/// assembles `Σ (M_λ/|M|) θ_{M−λ} ∧ F^M ∧ ω_λ`.
fn flux(ctx: &ModelContext, sources: &BTreeMap<JetVar, ScalarPoly>) -> (BTreeMap<JetVar, ScalarPoly>, GradedForm) {
    let n = ctx.base_dim();
    let mut coefficients: BTreeMap<JetVar, ScalarPoly> = BTreeMap::new();
    let mut xi = GradedForm::zero();
    for a in 0..ctx.fields().len() {
        let r = sources
            .keys()
            .filter(|v| v.field as usize == a)
            .map(JetVar::order)
            .max()
            .unwrap_or(0);
        for order in (1..=r).rev() {
            for idx in MultiIndex::all_of_order(n, order) {
                let var = ctx.jet_var(a, idx.clone());
                let mut f = sources.get(&var).cloned().unwrap_or_default();
                for l in 0..n {
                    if let Some(up) = coefficients.get(&var.raise(l)) {
                        let w = Coeff::new((idx.get(l) as i64 + 1).into(), (order as i64 + 1).into());
                        f -= &scalar_total_derivative(l, up).scale(&w);
                    }
                }
                if f.is_zero() {
                    continue;
                }
                let f_form = f.to_form();
                for l in idx.support() {
                    let w = Coeff::new((idx.get(l) as i64).into(), (order as i64).into());
                    let lower = ctx.jet_var(a, idx.lower(l).expect("direction in support"));
                    xi += (&(&GradedForm::contact(lower) * &f_form) * &ctx.omega_lambda(l)).scale(&w);
                }
                coefficients.insert(var, f);
            }
        }
    }
    (coefficients, xi)
}

/// Lepagean equivalent with all free functions set to zero; the identity
/// `d_V L = δL − d_H Ξ` holds exactly.
pub fn lepagean(ctx: &ModelContext, lagrangian: &Lagrangian) -> LepageanForm {
    let dens = lagrangian.density();
    let sources: BTreeMap<JetVar, ScalarPoly> = dens
        .jet_vars()
        .into_iter()
        .filter(|v| v.order() > 0)
        .map(|v| {
            let p = dens.partial(&v);
            (v, p)
        })
        .collect();
    let (coefficients, xi) = flux(ctx, &sources);
    let xi_l = &xi + &lagrangian.form(ctx);
    LepageanForm { coefficients, xi, xi_l }
}

/// `L_v L − v_V⌋δL − d_H(h_0(v⌋Ξ_L)) − d_V(v_H⌋ω) ∧ ℒ`, which vanishes
/// identically.
pub fn fvf_residual(ctx: &ModelContext, lagrangian: &Lagrangian, v: &Derivation) -> GradedForm {
    let l_form = lagrangian.form(ctx);
    let el = euler_lagrange(ctx, lagrangian);
    let lep = lepagean(ctx, lagrangian);
    let lhs = lie(v, &l_form);
    let vertical = contract(&v.vertical_part(), &el.form);
    let boundary = d_h(&contract(v, &lep.xi_l).h0());
    let horizontal = &d_v(&v.horizontal_contract_volume(ctx)) * &lagrangian.density().to_form();
    &(&(&lhs - &vertical) - &boundary) - &horizontal
}

/// Decides whether `v` is a divergence symmetry of `L` and, if so, returns
/// its Noether current.
pub fn divergence_symmetry(
    ctx: &ModelContext,
    lagrangian: &Lagrangian,
    v: &Derivation,
) -> Result<DivergenceSymmetry, VariationalError> {
    if let Some(l) = v.horizontal_components().iter().position(|h| !h.depends_on_base_only()) {
        return Err(VariationalError::NotProjected(l));
    }
    let l_form = lagrangian.form(ctx);
    let change = lie(v, &l_form);
    let witness = variational(ctx, &change);
    if !witness.is_zero() {
        return Ok(DivergenceSymmetry::No { witness });
    }
    let boundary = trivialize(ctx, &Lagrangian::from_form(ctx, &change)?)?;
    let lep = lepagean(ctx, lagrangian);
    let current = &contract(v, &lep.xi_l).h0() - &boundary;
    let defect = contract(&v.vertical_part(), &euler_lagrange(ctx, lagrangian).form);
    if !(&d_h(&current) + &defect).is_zero() {
        return Err(VariationalError::IdentityFailed("d_H J + v_V⌋δL = 0"));
    }
    Ok(DivergenceSymmetry::Yes(NoetherCurrent {
        current,
        boundary,
        defect,
    }))
}

/// Antiderivative of a base polynomial along `x¹`.
fn antiderivative_first(p: &ScalarPoly) -> ScalarPoly {
    let mut out = ScalarPoly::zero();
    for (m, c) in p.terms() {
        let e = m.exponent_of_base(0) as i64;
        let mono = &ScalarPoly::term(Coeff::one(), m.clone()) * &ScalarPoly::base_coord(0);
        out += &mono.scale(&(c / Coeff::from_integer((e + 1).into())));
    }
    out
}

/// Returns `ξ ∈ S^{0,n−1}` with `d_H ξ = L`, or the nonzero Euler–Lagrange
/// form when `L` is not variationally trivial.
pub fn trivialize(ctx: &ModelContext, lagrangian: &Lagrangian) -> Result<GradedForm, VariationalError> {
    let el = euler_lagrange(ctx, lagrangian);
    if !el.is_zero() {
        return Err(VariationalError::NotTrivial { euler_lagrange: el });
    }
    if lagrangian.is_zero() {
        return Ok(GradedForm::zero());
    }
    if ctx.base_dim() == 0 {
        return Err(VariationalError::ZeroBase);
    }
    let scaling = Derivation::scaling(ctx);
    let mut xi = GradedForm::zero();
    for (deg, part) in lagrangian.density().split_by_jet_degree() {
        if deg == 0 {
            xi += &antiderivative_first(&part).into_form() * &ctx.omega_lambda(0);
        } else {
            let piece = Lagrangian::new(ctx, part).expect("part of a checked density");
            let lep = lepagean(ctx, &piece);
            let w = Coeff::new(One::one(), (deg as i64).into());
            xi += contract(&scaling, &lep.xi_l).h0().scale(&w);
        }
    }
    if d_h(&xi) != lagrangian.form(ctx) {
        return Err(VariationalError::IdentityFailed("d_H ξ = L"));
    }
    Ok(xi)
}

/// Returns `ψ ∈ S^{1,n−1}` with `d_H ψ = φ` for `φ ∈ S^{1,n}` with `ρ(φ) = 0`.
pub fn contact_homotopy(ctx: &ModelContext, phi: &GradedForm) -> Result<GradedForm, VariationalError> {
    let n = ctx.base_dim();
    if phi.is_zero() {
        return Ok(GradedForm::zero());
    }
    let split = phi.bidegree_split();
    if split.len() != 1 || !split.contains_key(&(1, n)) {
        return Err(VariationalError::NotContactDensity(n));
    }
    let rho = interior_euler(ctx, phi);
    if !rho.is_zero() {
        return Err(VariationalError::NotInKernel { rho });
    }
    let omega = volume_word(ctx);
    let sources: BTreeMap<JetVar, ScalarPoly> = phi
        .contact_generators()
        .into_iter()
        .filter(|v| v.order() > 0)
        .map(|v| {
            let coeff = contract_dual(&v, phi).coefficient_of(&omega);
            (v, -coeff)
        })
        .collect();
    let (_, psi) = flux(ctx, &sources);
    if d_h(&psi) != *phi {
        return Err(VariationalError::IdentityFailed("d_H ψ = φ"));
    }
    Ok(psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jetalg::Parity;

    fn q(n: i64, d: i64) -> Coeff {
        Coeff::new(n.into(), d.into())
    }

    fn jet(ctx: &ModelContext, a: usize, e: &[u16]) -> ScalarPoly {
        ScalarPoly::jet(ctx.jet_var(a, MultiIndex::from_exponents(e.to_vec())))
    }

    fn particle() -> (ModelContext, Lagrangian) {
        let ctx = ModelContext::build(&["t"], &[("y", Parity::Even)]);
        let y1 = jet(&ctx, 0, &[1]);
        let l = Lagrangian::new(&ctx, (&y1 * &y1).scale(&q(1, 2))).unwrap();
        (ctx, l)
    }

    #[test]
    fn free_particle_and_wave_equations() {
        let (ctx, l) = particle();
        let el = euler_lagrange(&ctx, &l);
        assert_eq!(el.components, vec![-jet(&ctx, 0, &[2])]);
        assert_eq!(el.form, variational(&ctx, &l.form(&ctx)));

        let ctx = ModelContext::build(&["t", "x"], &[("y", Parity::Even)]);
        let (yt, yx) = (jet(&ctx, 0, &[1, 0]), jet(&ctx, 0, &[0, 1]));
        let l = Lagrangian::new(&ctx, (&(&yt * &yt) - &(&yx * &yx)).scale(&q(1, 2))).unwrap();
        let el = euler_lagrange(&ctx, &l);
        assert_eq!(el.components, vec![-(&jet(&ctx, 0, &[2, 0]) - &jet(&ctx, 0, &[0, 2]))]);
        assert_eq!(el.form, variational(&ctx, &l.form(&ctx)));
    }

    #[test]
    fn poincare_cartan_and_second_order_lepagean() {
        let (ctx, l) = particle();
        let lep = lepagean(&ctx, &l);
        let th = |k: u16| ctx.theta(0, &[k]);
        assert_eq!(lep.xi, &jet(&ctx, 0, &[1]).to_form() * &th(0));

        let y2 = jet(&ctx, 0, &[2]);
        let l2 = Lagrangian::new(&ctx, (&y2 * &y2).scale(&q(1, 2))).unwrap();
        let lep2 = lepagean(&ctx, &l2);
        let expected = &(&y2.to_form() * &th(1)) - &(&jet(&ctx, 0, &[3]).to_form() * &th(0));
        assert_eq!(lep2.xi, expected);

        let base_only = Lagrangian::new(&ctx, ScalarPoly::base_coord(0)).unwrap();
        assert!(lepagean(&ctx, &base_only).xi.is_zero());
    }

    #[test]
    fn lepagean_decomposition_with_odd_fields() {
        let ctx = ModelContext::build(&["t", "x"], &[("y", Parity::Even), ("c", Parity::Odd), ("e", Parity::Odd)]);
        let dens = &(&jet(&ctx, 1, &[1, 1]) * &jet(&ctx, 2, &[0, 2])) * &jet(&ctx, 0, &[2, 0]);
        let dens = &dens + &(&jet(&ctx, 0, &[1, 0]) * &jet(&ctx, 0, &[0, 1]));
        let l = Lagrangian::new(&ctx, dens).unwrap();
        let lep = lepagean(&ctx, &l);
        let el = euler_lagrange(&ctx, &l);
        assert_eq!(d_v(&l.form(&ctx)), &el.form - &d_h(&lep.xi));
    }

    #[test]
    fn first_variational_formula_examples() {
        let (ctx, l) = particle();
        assert!(fvf_residual(&ctx, &l, &Derivation::field_shift(&ctx, 0)).is_zero());
        assert!(fvf_residual(&ctx, &l, &Derivation::translation(&ctx, 0)).is_zero());
        let zero = Lagrangian::new(&ctx, ScalarPoly::zero()).unwrap();
        assert!(fvf_residual(&ctx, &zero, &Derivation::scaling(&ctx)).is_zero());
    }

    #[test]
    fn noether_currents_of_free_particle() {
        let (ctx, l) = particle();
        let y1 = jet(&ctx, 0, &[1]);
        match divergence_symmetry(&ctx, &l, &Derivation::field_shift(&ctx, 0)).unwrap() {
            DivergenceSymmetry::Yes(j) => {
                assert!(j.boundary.is_zero());
                assert_eq!(j.current, y1.to_form());
            }
            other => panic!("unexpected {other:?}"),
        }
        match divergence_symmetry(&ctx, &l, &Derivation::translation(&ctx, 0)).unwrap() {
            DivergenceSymmetry::Yes(j) => {
                assert!(j.boundary.is_zero());
                assert_eq!(j.current, (&y1 * &y1).scale(&q(-1, 2)).into_form());
            }
            other => panic!("unexpected {other:?}"),
        }
        match divergence_symmetry(&ctx, &l, &Derivation::scaling(&ctx)).unwrap() {
            DivergenceSymmetry::No { witness } => {
                let expected = &(&jet(&ctx, 0, &[2]).to_form().scale_int(-2) * &ctx.theta(0, &[0])) * &ctx.omega();
                assert_eq!(witness, expected);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn trivialize_examples() {
        let ctx = ModelContext::build(&["t"], &[("y", Parity::Even)]);
        let y = jet(&ctx, 0, &[0]);
        let l = Lagrangian::new(&ctx, &y * &jet(&ctx, 0, &[1])).unwrap();
        assert_eq!(trivialize(&ctx, &l).unwrap(), (&y * &y).scale(&q(1, 2)).into_form());
        let t = Lagrangian::new(&ctx, ScalarPoly::base_coord(0)).unwrap();
        let tt = &ScalarPoly::base_coord(0) * &ScalarPoly::base_coord(0);
        assert_eq!(trivialize(&ctx, &t).unwrap(), tt.scale(&q(1, 2)).into_form());
        let (ctx, free) = particle();
        match trivialize(&ctx, &free) {
            Err(VariationalError::NotTrivial { euler_lagrange }) => {
                assert_eq!(euler_lagrange.components, vec![-jet(&ctx, 0, &[2])]);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(trivialize(&ctx, &Lagrangian::new(&ctx, ScalarPoly::zero()).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn contact_homotopy_examples() {
        let ctx = ModelContext::build(&["t"], &[("y", Parity::Even)]);
        let l = &jet(&ctx, 0, &[0]) * &jet(&ctx, 0, &[1]);
        let phi = d_v(&(&l.to_form() * &ctx.omega()));
        let psi = contact_homotopy(&ctx, &phi).unwrap();
        assert_eq!(d_h(&psi), phi);
        let source = &ctx.theta(0, &[0]) * &ctx.omega();
        match contact_homotopy(&ctx, &source) {
            Err(VariationalError::NotInKernel { rho }) => assert_eq!(rho, source),
            other => panic!("unexpected {other:?}"),
        }
    }
}
