use std::collections::{BTreeMap, HashMap};
use std::sync::RwLock;

use crate::jetalg::{GradedForm, JetVar, ModelContext, MultiIndex, Parity, ScalarPoly};

use super::{scalar_total_derivative, CalculusError};

/// A generalized (super)symmetry, stored through its horizontal components
/// `υ^λ` and vertical characteristics `ϑ^a`.
///
/// The prolonged components `υ^a_Λ = d_Λ ϑ^a + υ^μ s^a_{μ+Λ}` are never
/// stored; the characteristic jets `d_Λ ϑ^a` they are built from are computed
/// on demand and memoized.
#[derive(Debug)]
pub struct Derivation {
    horizontal: Vec<ScalarPoly>,
    characteristics: Vec<ScalarPoly>,
    field_parities: Vec<Parity>,
    parity: Parity,
    memo: RwLock<HashMap<JetVar, ScalarPoly>>,
}

impl Clone for Derivation {
    fn clone(&self) -> Self {
        Derivation {
            horizontal: self.horizontal.clone(),
            characteristics: self.characteristics.clone(),
            field_parities: self.field_parities.clone(),
            parity: self.parity,
            memo: RwLock::new(HashMap::new()),
        }
    }
}

impl PartialEq for Derivation {
    fn eq(&self, other: &Self) -> bool {
        self.horizontal == other.horizontal
            && self.characteristics == other.characteristics
            && self.parity == other.parity
    }
}

impl Derivation {
    /// Builds a derivation, inferring its parity from the first nonzero
    /// component. The zero derivation is even.
    pub fn new(
        ctx: &ModelContext,
        horizontal: Vec<ScalarPoly>,
        characteristics: Vec<ScalarPoly>,
    ) -> Result<Self, CalculusError> {
        Self::build(ctx, horizontal, characteristics, None)
    }

    /// Builds a derivation of a prescribed parity (needed for the zero
    /// derivation, whose parity cannot be inferred).
    pub fn with_parity(
        ctx: &ModelContext,
        horizontal: Vec<ScalarPoly>,
        characteristics: Vec<ScalarPoly>,
        parity: Parity,
    ) -> Result<Self, CalculusError> {
        Self::build(ctx, horizontal, characteristics, Some(parity))
    }

    /// Vertical derivation with the given characteristics.
    pub fn vertical(ctx: &ModelContext, characteristics: Vec<ScalarPoly>) -> Result<Self, CalculusError> {
        Self::new(ctx, vec![ScalarPoly::zero(); ctx.base_dim()], characteristics)
    }

    /// The zero derivation of the given parity.
    pub fn zero(ctx: &ModelContext, parity: Parity) -> Self {
        Self::with_parity(
            ctx,
            vec![ScalarPoly::zero(); ctx.base_dim()],
            vec![ScalarPoly::zero(); ctx.fields().len()],
            parity,
        )
        .expect("zero derivation is well formed")
    }

    /// `∂/∂s^a` lifted to jets: the vertical derivation with `ϑ^a = 1`.
    pub fn field_shift(ctx: &ModelContext, field: usize) -> Self {
        let mut chars = vec![ScalarPoly::zero(); ctx.fields().len()];
        chars[field] = ScalarPoly::one();
        Self::vertical(ctx, chars).expect("field shift is homogeneous")
    }

    /// The lift of `∂/∂x^λ`: `υ^λ = 1`, `ϑ^a = −s^a_λ`.
    pub fn translation(ctx: &ModelContext, direction: usize) -> Self {
        let n = ctx.base_dim();
        let mut hor = vec![ScalarPoly::zero(); n];
        hor[direction] = ScalarPoly::one();
        let chars = (0..ctx.fields().len())
            .map(|a| -&ScalarPoly::jet(ctx.jet_var(a, MultiIndex::unit(n, direction))))
            .collect();
        Self::new(ctx, hor, chars).expect("translation is homogeneous")
    }

    /// The scaling derivation `ϑ^a = s^a`.
    pub fn scaling(ctx: &ModelContext) -> Self {
        let chars = (0..ctx.fields().len())
            .map(|a| ScalarPoly::jet(ctx.field_var(a)))
            .collect();
        Self::vertical(ctx, chars).expect("scaling is homogeneous")
    }

    fn build(
        ctx: &ModelContext,
        horizontal: Vec<ScalarPoly>,
        characteristics: Vec<ScalarPoly>,
        parity: Option<Parity>,
    ) -> Result<Self, CalculusError> {
        if horizontal.len() != ctx.base_dim() {
            return Err(CalculusError::ComponentCount {
                what: "horizontal",
                expected: ctx.base_dim(),
                found: horizontal.len(),
            });
        }
        if characteristics.len() != ctx.fields().len() {
            return Err(CalculusError::ComponentCount {
                what: "vertical",
                expected: ctx.fields().len(),
                found: characteristics.len(),
            });
        }
        let field_parities: Vec<Parity> = ctx.fields().iter().map(|f| f.parity).collect();
        // Each component's own parity shift relative to what it multiplies.
        let mut shifts: Vec<(String, Parity)> = Vec::new();
        for (l, h) in horizontal.iter().enumerate() {
            if h.is_zero() {
                continue;
            }
            let p = h
                .parity()
                .ok_or_else(|| CalculusError::InhomogeneousComponent(format!("horizontal #{l}")))?;
            shifts.push((format!("horizontal #{l}"), p));
        }
        for (a, c) in characteristics.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let name = &ctx.field(a).name;
            let p = c
                .parity()
                .ok_or_else(|| CalculusError::InhomogeneousComponent(format!("characteristic of {name}")))?;
            shifts.push((format!("characteristic of {name}"), p + field_parities[a]));
        }
        let inferred = shifts.first().map(|(_, p)| *p);
        let parity = parity.or(inferred).unwrap_or(Parity::Even);
        if let Some((what, _)) = shifts.iter().find(|(_, p)| *p != parity) {
            return Err(CalculusError::InhomogeneousDerivation(what.clone()));
        }
        for f in horizontal.iter().chain(&characteristics) {
            ctx.check(&f.to_form()).map_err(CalculusError::Algebra)?;
        }
        Ok(Derivation {
            horizontal,
            characteristics,
            field_parities,
            parity,
            memo: RwLock::new(HashMap::new()),
        })
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn base_dim(&self) -> usize {
        self.horizontal.len()
    }

    pub fn field_count(&self) -> usize {
        self.characteristics.len()
    }

    /// `υ^λ`.
    pub fn horizontal(&self, direction: usize) -> &ScalarPoly {
        &self.horizontal[direction]
    }

    pub fn horizontal_components(&self) -> &[ScalarPoly] {
        &self.horizontal
    }

    /// `ϑ^a`.
    pub fn characteristic(&self, field: usize) -> &ScalarPoly {
        &self.characteristics[field]
    }

    pub fn characteristics(&self) -> &[ScalarPoly] {
        &self.characteristics
    }

    pub fn is_vertical(&self) -> bool {
        self.horizontal.iter().all(ScalarPoly::is_zero)
    }

    pub fn is_zero(&self) -> bool {
        self.is_vertical() && self.characteristics.iter().all(ScalarPoly::is_zero)
    }

    /// Every `υ^λ` depends on base coordinates only.
    pub fn is_projected(&self) -> bool {
        self.horizontal.iter().all(ScalarPoly::depends_on_base_only)
    }

    /// `υ_V`: same characteristics, no horizontal part.
    pub fn vertical_part(&self) -> Derivation {
        Derivation {
            horizontal: vec![ScalarPoly::zero(); self.base_dim()],
            characteristics: self.characteristics.clone(),
            field_parities: self.field_parities.clone(),
            parity: self.parity,
            memo: RwLock::new(HashMap::new()),
        }
    }

    /// `υ_H = υ^λ d_λ`: same horizontal components, zero characteristics.
    pub fn horizontal_part(&self) -> Derivation {
        Derivation {
            horizontal: self.horizontal.clone(),
            characteristics: vec![ScalarPoly::zero(); self.field_count()],
            field_parities: self.field_parities.clone(),
            parity: self.parity,
            memo: RwLock::new(HashMap::new()),
        }
    }

    /// Highest jet order among the stored components.
    pub fn jet_order(&self) -> usize {
        self.horizontal
            .iter()
            .chain(&self.characteristics)
            .filter_map(ScalarPoly::jet_order)
            .max()
            .unwrap_or(0)
    }

    /// `d_Λ ϑ^a` for `var = s^a_Λ`, memoized.
    pub fn characteristic_jet(&self, var: &JetVar) -> ScalarPoly {
        if let Some(p) = self.memo.read().expect("memo lock").get(var) {
            return p.clone();
        }
        let value = match var.index.support().next() {
            None => self.characteristics[var.field as usize].clone(),
            Some(dir) => {
                let lower = JetVar {
                    field: var.field,
                    odd: var.odd,
                    index: var.index.lower(dir).expect("direction in support"),
                };
                scalar_total_derivative(dir, &self.characteristic_jet(&lower))
            }
        };
        self.memo
            .write()
            .expect("memo lock")
            .insert(var.clone(), value.clone());
        value
    }

    /// The full prolonged component `υ^a_Λ = d_Λ ϑ^a + υ^μ s^a_{μ+Λ}`.
    pub fn prolonged_component(&self, var: &JetVar) -> ScalarPoly {
        let mut out = self.characteristic_jet(var);
        for (mu, h) in self.horizontal.iter().enumerate() {
            if h.is_zero() {
                continue;
            }
            out += &(h * &ScalarPoly::jet(var.raise(mu)));
        }
        out
    }

    /// All prolonged components with `|Λ| ≤ order`.
    pub fn prolongation(&self, ctx: &ModelContext, order: usize) -> BTreeMap<JetVar, ScalarPoly> {
        let mut out = BTreeMap::new();
        for a in 0..ctx.fields().len() {
            for idx in MultiIndex::all_up_to(ctx.base_dim(), order) {
                let v = ctx.jet_var(a, idx);
                let c = self.prolonged_component(&v);
                out.insert(v, c);
            }
        }
        out
    }

    /// `υ ⌋ ω` style horizontal contraction `Σ υ^λ ω_λ`.
    pub fn horizontal_contract_volume(&self, ctx: &ModelContext) -> GradedForm {
        let mut out = GradedForm::zero();
        for (l, h) in self.horizontal.iter().enumerate() {
            out += &h.to_form() * &ctx.omega_lambda(l);
        }
        out
    }

    /// Componentwise sum of two derivations of the same parity.
    pub fn add(&self, other: &Derivation) -> Result<Derivation, CalculusError> {
        if self.parity != other.parity && !self.is_zero() && !other.is_zero() {
            return Err(CalculusError::InhomogeneousDerivation("sum".into()));
        }
        let parity = if self.is_zero() { other.parity } else { self.parity };
        Ok(Derivation {
            horizontal: self
                .horizontal
                .iter()
                .zip(&other.horizontal)
                .map(|(a, b)| a + b)
                .collect(),
            characteristics: self
                .characteristics
                .iter()
                .zip(&other.characteristics)
                .map(|(a, b)| a + b)
                .collect(),
            field_parities: self.field_parities.clone(),
            parity,
            memo: RwLock::new(HashMap::new()),
        })
    }
}

/// A hand-entered derivation given by its raw component family
/// `(υ^λ, υ^a_Λ)` up to a finite jet order. Components not listed are zero.
#[derive(Clone, Debug)]
pub struct ComponentFamily {
    pub horizontal: Vec<ScalarPoly>,
    pub components: BTreeMap<JetVar, ScalarPoly>,
    /// Components are specified for all `|Λ| ≤ order`.
    pub order: usize,
    pub parity: Parity,
}

impl ComponentFamily {
    /// The family of a prolonged derivation, truncated at `order`.
    pub fn from_derivation(ctx: &ModelContext, v: &Derivation, order: usize) -> Self {
        ComponentFamily {
            horizontal: v.horizontal_components().to_vec(),
            components: v.prolongation(ctx, order),
            order,
            parity: v.parity(),
        }
    }

    pub fn component(&self, var: &JetVar) -> ScalarPoly {
        self.components.get(var).cloned().unwrap_or_default()
    }
}
