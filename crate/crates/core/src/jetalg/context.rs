use num::One;

use super::{AlgebraError, Coeff, FormGenerator, GradedForm, JetVar, Monomial, MultiIndex, Parity, Word};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FieldSpec {
    pub name: String,
    pub parity: Parity,
    /// Integer charge (ghost number); defaults to 1 for odd fields, 0 otherwise.
    pub charge: i64,
}

impl FieldSpec {
    pub fn new(name: impl Into<String>, parity: Parity) -> Self {
        FieldSpec {
            name: name.into(),
            parity,
            charge: if parity.is_odd() { 1 } else { 0 },
        }
    }

    pub fn with_charge(mut self, charge: i64) -> Self {
        self.charge = charge;
        self
    }
}

/// Base dimension, coordinate names and the field roster of a model on a
/// single global chart `X = ℝⁿ`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModelContext {
    coords: Vec<String>,
    fields: Vec<FieldSpec>,
}

impl ModelContext {
    pub fn new(coords: Vec<String>, fields: Vec<FieldSpec>) -> Result<Self, AlgebraError> {
        let mut names: Vec<&str> = coords.iter().map(String::as_str).collect();
        names.extend(fields.iter().map(|f| f.name.as_str()));
        let mut sorted = names.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(AlgebraError::DuplicateName(w[0].to_string()));
        }
        Ok(ModelContext { coords, fields })
    }

    /// Convenience constructor from string slices.
    pub fn build(coords: &[&str], fields: &[(&str, Parity)]) -> Self {
        Self::new(
            coords.iter().map(|s| s.to_string()).collect(),
            fields.iter().map(|(n, p)| FieldSpec::new(*n, *p)).collect(),
        )
        .expect("duplicate names in model context")
    }

    pub fn base_dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn fields(&self) -> &[FieldSpec] {
        &self.fields
    }

    pub fn field(&self, index: usize) -> &FieldSpec {
        &self.fields[index]
    }

    pub fn field_index(&self, name: &str) -> Option<usize> {
        self.fields.iter().position(|f| f.name == name)
    }

    pub fn coord_index(&self, name: &str) -> Option<usize> {
        self.coords.iter().position(|c| c == name)
    }

    pub fn zero_index(&self) -> MultiIndex {
        MultiIndex::zero(self.base_dim())
    }

    /// Jet coordinate `s^a_Λ`.
    pub fn jet_var(&self, field: usize, index: MultiIndex) -> JetVar {
        debug_assert_eq!(index.dim(), self.base_dim());
        JetVar::new(field, self.fields[field].parity, index)
    }

    /// The undifferentiated field variable `s^a`.
    pub fn field_var(&self, field: usize) -> JetVar {
        self.jet_var(field, self.zero_index())
    }

    /// `s^a_Λ` given the exponent vector.
    pub fn jet(&self, field: usize, exponents: &[u16]) -> GradedForm {
        let v = self.jet_var(field, MultiIndex::from_exponents(exponents.to_vec()));
        GradedForm::single(Word::empty(), Monomial::jet(v), Coeff::one())
    }

    pub fn coord(&self, direction: usize) -> GradedForm {
        GradedForm::single(Word::empty(), Monomial::base_coord(direction), Coeff::one())
    }

    pub fn dx(&self, direction: usize) -> GradedForm {
        GradedForm::horizontal(direction)
    }

    /// `θ^a_Λ` given the exponent vector.
    pub fn theta(&self, field: usize, exponents: &[u16]) -> GradedForm {
        GradedForm::contact(self.jet_var(field, MultiIndex::from_exponents(exponents.to_vec())))
    }

    /// Volume form `ω = dx¹ ∧ … ∧ dxⁿ`.
    pub fn omega(&self) -> GradedForm {
        let gens: Vec<FormGenerator> = (0..self.base_dim())
            .map(|i| FormGenerator::Horizontal(i as u16))
            .collect();
        GradedForm::from_raw(Coeff::one(), Monomial::one(), &gens)
    }

    /// `ω_λ = ∂_λ ⌋ ω`.
    pub fn omega_lambda(&self, direction: usize) -> GradedForm {
        let gens: Vec<FormGenerator> = (0..self.base_dim())
            .filter(|&i| i != direction)
            .map(|i| FormGenerator::Horizontal(i as u16))
            .collect();
        let c = if direction % 2 == 0 { Coeff::one() } else { -Coeff::one() };
        GradedForm::from_raw(c, Monomial::one(), &gens)
    }

    fn check_var(&self, v: &JetVar) -> Result<(), AlgebraError> {
        let field = self
            .fields
            .get(v.field as usize)
            .ok_or(AlgebraError::UnknownField(v.field as usize))?;
        if field.parity.is_odd() != v.odd {
            return Err(AlgebraError::ParityMismatch(field.name.clone()));
        }
        if v.index.dim() != self.base_dim() {
            return Err(AlgebraError::IndexArity {
                expected: self.base_dim(),
                found: v.index.dim(),
            });
        }
        Ok(())
    }

    /// Verifies that every coordinate, field and generator of the form belongs
    /// to this model.
    pub fn check(&self, form: &GradedForm) -> Result<(), AlgebraError> {
        let n = self.base_dim();
        for (w, m, _) in form.terms() {
            for (d, _) in m.base_factors() {
                if *d as usize >= n {
                    return Err(AlgebraError::UnknownDirection(*d as usize));
                }
            }
            for v in m.jet_vars() {
                self.check_var(v)?;
            }
            for (g, _) in w.factors() {
                match g {
                    FormGenerator::Horizontal(d) if *d as usize >= n => {
                        return Err(AlgebraError::UnknownDirection(*d as usize))
                    }
                    FormGenerator::Horizontal(_) => {}
                    FormGenerator::Contact(v) => self.check_var(v)?,
                }
            }
        }
        Ok(())
    }
}

/// Checked graded wedge product of two forms over the same model.
pub fn wedge(ctx: &ModelContext, a: &GradedForm, b: &GradedForm) -> Result<GradedForm, AlgebraError> {
    ctx.check(a)?;
    ctx.check(b)?;
    Ok(a * b)
}
