//! Model files: base, fields, Lie algebras, Lagrangians and symmetries.

use std::collections::BTreeMap;

use gradjet::brst::LieStructure;
use gradjet::calculus::Derivation;
use gradjet::jetalg::{Coeff, FieldSpec, GradedForm, ModelContext, Parity, ScalarPoly};
use gradjet::variational::Lagrangian;

use crate::syntax::{parse_expr, Cursor, ParseError, Scope, Tok, Token, RESERVED};

/// A parsed model file.
#[derive(Clone, Debug)]
pub struct ModelFile {
    pub ctx: ModelContext,
    pub algebras: BTreeMap<String, LieStructure>,
    pub lagrangians: BTreeMap<String, Lagrangian>,
    pub symmetries: BTreeMap<String, Derivation>,
}

impl Scope for ModelFile {
    fn ctx(&self) -> &ModelContext {
        &self.ctx
    }

    fn named(&self, name: &str) -> Option<GradedForm> {
        self.lagrangians.get(name).map(|l| l.density().to_form())
    }
}

impl ModelFile {
    pub fn lagrangian(&self, name: &str) -> Option<&Lagrangian> {
        self.lagrangians.get(name)
    }

    pub fn symmetry(&self, name: &str) -> Option<&Derivation> {
        self.symmetries.get(name)
    }

    pub fn algebra(&self, name: &str) -> Option<&LieStructure> {
        self.algebras.get(name)
    }
}

struct Builder {
    coords: Option<Vec<String>>,
    fields: Vec<FieldSpec>,
    model: Option<ModelFile>,
}

impl Builder {
    /// The model as declared so far; fields are frozen at first use.
    fn model(&mut self, cur: &Cursor, at: &Token) -> Result<&mut ModelFile, ParseError> {
        if self.model.is_none() {
            let coords = self
                .coords
                .clone()
                .ok_or_else(|| cur.error_at(at, "`base` must be declared first"))?;
            let ctx = ModelContext::new(coords, self.fields.clone()).map_err(|e| cur.error_at(at, e.to_string()))?;
            self.model = Some(ModelFile {
                ctx,
                algebras: BTreeMap::new(),
                lagrangians: BTreeMap::new(),
                symmetries: BTreeMap::new(),
            });
        }
        Ok(self.model.as_mut().expect("just built"))
    }

    fn taken(&self, name: &str) -> bool {
        let in_base = self.coords.iter().flatten().any(|c| c == name) || self.fields.iter().any(|f| f.name == name);
        let in_model = self.model.as_ref().is_some_and(|m| {
            m.algebras.contains_key(name) || m.lagrangians.contains_key(name) || m.symmetries.contains_key(name)
        });
        in_base || in_model
    }

    fn claim(&self, cur: &Cursor, name: &str, at: &Token) -> Result<(), ParseError> {
        if RESERVED.contains(&name) {
            return Err(cur.error_at(at, format!("`{name}` is reserved")));
        }
        if self.taken(name) {
            return Err(cur.error_at(at, format!("duplicate identifier `{name}`")));
        }
        Ok(())
    }
}

/// Parses a model file.
pub fn parse_model(text: &str) -> Result<ModelFile, ParseError> {
    let mut cur = Cursor::new(text)?;
    let mut b = Builder {
        coords: None,
        fields: Vec::new(),
        model: None,
    };
    while !cur.at_eof() {
        let (kw, at) = cur.expect_ident()?;
        match kw.as_str() {
            "base" => parse_base(&mut cur, &mut b, &at)?,
            "even" | "odd" => parse_fields(&mut cur, &mut b, &at, kw == "odd")?,
            "algebra" => parse_algebra(&mut cur, &mut b)?,
            "lagrangian" => parse_lagrangian(&mut cur, &mut b, &at)?,
            "symmetry" => parse_symmetry(&mut cur, &mut b, &at)?,
            _ => return Err(cur.error_at(&at, format!("unknown statement `{kw}`"))),
        }
        cur.expect_sym(";")?;
    }
    let eof = cur.peek().clone();
    b.model(&cur, &eof).map(|m| m.clone())
}

/// Identifiers separated by whitespace or commas, up to `;` or a keyword.
fn name_list(cur: &mut Cursor, stop: &[&str]) -> Result<Vec<(String, Token)>, ParseError> {
    let mut out = Vec::new();
    while let Tok::Ident(s) = &cur.peek().tok {
        if stop.contains(&s.as_str()) {
            break;
        }
        out.push(cur.expect_ident()?);
        cur.eat_sym(",");
    }
    Ok(out)
}

fn parse_base(cur: &mut Cursor, b: &mut Builder, at: &Token) -> Result<(), ParseError> {
    if b.coords.is_some() {
        return Err(cur.error_at(at, "`base` declared twice"));
    }
    cur.expect_keyword("dim")?;
    let n = cur.expect_int()? as usize;
    let mut names = Vec::new();
    if n > 0 || cur.at_keyword("coords") {
        cur.expect_keyword("coords")?;
        names = name_list(cur, &[])?;
    }
    if names.len() != n {
        return Err(cur.error_at(at, format!("base has dimension {n} but {} coordinates", names.len())));
    }
    b.coords = Some(Vec::new());
    for (name, t) in names {
        b.claim(cur, &name, &t)?;
        b.coords.as_mut().expect("set above").push(name);
    }
    Ok(())
}

fn parse_fields(cur: &mut Cursor, b: &mut Builder, at: &Token, odd: bool) -> Result<(), ParseError> {
    if b.coords.is_none() {
        return Err(cur.error_at(at, "`base` must be declared first"));
    }
    if b.model.is_some() {
        return Err(cur.error_at(at, "fields must be declared before algebras, Lagrangians and symmetries"));
    }
    cur.expect_keyword("field")?;
    let names = name_list(cur, &["charge"])?;
    if names.is_empty() {
        return Err(cur.error("expected a field name"));
    }
    let charge = if cur.at_keyword("charge") {
        cur.next();
        let negative = cur.eat_sym("-");
        let k = cur.expect_int()? as i64;
        Some(if negative { -k } else { k })
    } else {
        None
    };
    for (name, t) in names {
        b.claim(cur, &name, &t)?;
        let mut spec = FieldSpec::new(name, Parity::from_bool(odd));
        if let Some(k) = charge {
            spec = spec.with_charge(k);
        }
        b.fields.push(spec);
    }
    Ok(())
}

fn signed_rational(cur: &mut Cursor) -> Result<Coeff, ParseError> {
    let negative = cur.eat_sym("-");
    let num = cur.expect_int()?;
    let den = if cur.eat_sym("/") { cur.expect_int()? } else { 1 };
    if den == 0 {
        return Err(cur.error("division by zero"));
    }
    let c = Coeff::new(num.into(), den.into());
    Ok(if negative { -c } else { c })
}

fn parse_algebra(cur: &mut Cursor, b: &mut Builder) -> Result<(), ParseError> {
    let (name, at) = cur.expect_ident()?;
    b.claim(cur, &name, &at)?;
    cur.expect_keyword("constants")?;
    let (preset, pt) = cur.expect_ident()?;
    let g = match preset.as_str() {
        "su2" => LieStructure::su2(),
        "abelian" => LieStructure::abelian(cur.expect_int()? as usize),
        "dim" => {
            let dim = cur.expect_int()? as usize;
            cur.expect_sym("{")?;
            let mut entries = Vec::new();
            while !cur.at_sym("}") {
                let open = cur.expect_sym("(")?;
                let mut idx = [0usize; 3];
                for (i, slot) in idx.iter_mut().enumerate() {
                    if i > 0 {
                        cur.expect_sym(",")?;
                    }
                    let k = cur.expect_int()? as usize;
                    if k == 0 || k > dim {
                        return Err(cur.error_at(&open, format!("structure constant indices run from 1 to {dim}")));
                    }
                    *slot = k - 1;
                }
                cur.expect_sym(")")?;
                cur.expect_sym("=")?;
                let c = signed_rational(cur)?;
                entries.push((idx[0], idx[1], idx[2], c));
                if !cur.eat_sym(",") {
                    break;
                }
            }
            cur.expect_sym("}")?;
            LieStructure::new(dim, &entries).map_err(|e| cur.error_at(&pt, e.to_string()))?
        }
        other => return Err(cur.error_at(&pt, format!("unknown structure constants `{other}` (su2, abelian, dim)"))),
    };
    b.model(cur, &at)?.algebras.insert(name, g);
    Ok(())
}

fn scalar_of(f: &GradedForm, at: &Token) -> Result<ScalarPoly, ParseError> {
    if f.terms().any(|(w, _, _)| !w.is_empty()) {
        return Err(ParseError {
            line: at.line,
            column: at.column,
            message: "expected a scalar expression (no d[..], th[..] or omega)".into(),
        });
    }
    Ok(f.scalar_part())
}

fn parse_lagrangian(cur: &mut Cursor, b: &mut Builder, at: &Token) -> Result<(), ParseError> {
    let (name, nt) = cur.expect_ident()?;
    b.claim(cur, &name, &nt)?;
    cur.expect_sym("=")?;
    let start = cur.peek().clone();
    let model = b.model(cur, at)?;
    let density = scalar_of(&parse_expr(cur, model)?, &start)?;
    if density.parity() == Some(Parity::Odd) {
        return Err(cur.error_at(&start, "a Lagrangian density must be even"));
    }
    if !density.is_parity_homogeneous() {
        return Err(cur.error_at(&start, "Lagrangian density mixes even and odd terms"));
    }
    let l = Lagrangian::new(&model.ctx, density).map_err(|e| cur.error_at(&start, e.to_string()))?;
    model.lagrangians.insert(name, l);
    Ok(())
}

fn parse_symmetry(cur: &mut Cursor, b: &mut Builder, at: &Token) -> Result<(), ParseError> {
    let (name, nt) = cur.expect_ident()?;
    b.claim(cur, &name, &nt)?;
    cur.expect_sym(":")?;
    let model = b.model(cur, at)?;
    let n = model.ctx.base_dim();
    let mut horizontal = vec![ScalarPoly::zero(); n];
    let mut characteristics = vec![ScalarPoly::zero(); model.ctx.fields().len()];
    let mut seen_h = false;
    let mut seen_v = false;
    loop {
        if cur.at_keyword("horizontal") && !seen_h {
            let kt = cur.next();
            seen_h = true;
            cur.expect_sym("(")?;
            let mut comps = Vec::new();
            if !cur.at_sym(")") {
                loop {
                    let t = cur.peek().clone();
                    comps.push(scalar_of(&parse_expr(cur, model)?, &t)?);
                    if !cur.eat_sym(",") {
                        break;
                    }
                }
            }
            cur.expect_sym(")")?;
            if comps.len() != n {
                return Err(cur.error_at(&kt, format!("expected {n} horizontal components, found {}", comps.len())));
            }
            horizontal = comps;
        } else if cur.at_keyword("vertical") && !seen_v {
            cur.next();
            seen_v = true;
            cur.expect_sym("(")?;
            if !cur.at_sym(")") {
                loop {
                    let (field, ft) = cur.expect_ident()?;
                    let a = model
                        .ctx
                        .field_index(&field)
                        .ok_or_else(|| cur.error_at(&ft, format!("unknown field `{field}`")))?;
                    cur.expect_sym("->")?;
                    let t = cur.peek().clone();
                    let value = scalar_of(&parse_expr(cur, model)?, &t)?;
                    characteristics[a] = &characteristics[a] + &value;
                    if !cur.eat_sym(",") {
                        break;
                    }
                }
            }
            cur.expect_sym(")")?;
        } else {
            break;
        }
    }
    if !seen_h && !seen_v {
        return Err(cur.error("expected `horizontal (...)` or `vertical (...)`"));
    }
    let v = Derivation::new(&model.ctx, horizontal, characteristics).map_err(|e| cur.error_at(&nt, e.to_string()))?;
    model.symmetries.insert(name, v);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_form;

    #[test]
    fn particle_lagrangian() {
        let m = parse_model("base dim 1 coords t; even field y; lagrangian L = 1/2*y(1)^2;").unwrap();
        let l = m.lagrangian("L").unwrap();
        let y1 = m.ctx.jet(0, &[1]);
        assert_eq!(l.density().to_form(), (&y1 * &y1).scale(&Coeff::new(1.into(), 2.into())));
    }

    #[test]
    fn odd_square_is_zero() {
        let m = parse_model("base dim 1 coords t; odd field c; lagrangian L = c*c;").unwrap();
        assert!(m.lagrangian("L").unwrap().is_zero());
    }

    #[test]
    fn multi_index_arity() {
        let e = parse_model("base dim 1 coords t; even field y;\nlagrangian L = y(1,0);").unwrap_err();
        assert_eq!((e.line, e.column), (2, 16));
        assert!(e.message.contains("dimension 1"), "{e}");
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_model("base dim 1 coords t;\neven field y;\nlagrangian L = y(1) * z;").unwrap_err();
        assert_eq!((e.line, e.column), (3, 23));
        assert!(e.message.contains("unknown identifier `z`"));
        let e = parse_model("base dim 1 coords t; even field d;").unwrap_err();
        assert!(e.message.contains("reserved"));
        let e = parse_model("base dim 1 coords t; even field y; lagrangian y = 1;").unwrap_err();
        assert!(e.message.contains("duplicate"));
        let e = parse_model("base dim 1 coords t; odd field c; lagrangian L = c;").unwrap_err();
        assert!(e.message.contains("even"));
        let e = parse_model("base dim 1 coords t; even field y; lagrangian L = y*d[t];").unwrap_err();
        assert!(e.message.contains("scalar"));
    }

    #[test]
    fn symmetries_and_algebras() {
        let text = "base dim 2 coords t x;\neven field u; odd field c charge 1;\n\
                    algebra g constants dim 2 { (1,1,2) = 1/2 };\n\
                    symmetry v: horizontal (1, 0) vertical (u -> c*c(1,0));\n\
                    symmetry s: vertical (u -> c);";
        let m = parse_model(text).unwrap();
        assert!(m.symmetry("v").unwrap().is_projected());
        assert!(m.symmetry("s").unwrap().parity().is_odd());
        assert_eq!(m.algebra("g").unwrap().constant(0, 1, 0), Coeff::new((-1).into(), 2.into()));
        // Mixed parities are rejected.
        let e = parse_model("base dim 1 coords t; even field u; odd field c; symmetry w: vertical (u -> 1, c -> 1);");
        assert!(e.is_err());
    }

    #[test]
    fn expressions_see_lagrangians() {
        let m = parse_model("base dim 1 coords t; even field y; lagrangian L = y(1)^2;").unwrap();
        let f = parse_form(&m, "L*omega - y(1)*y(1)*d[t]").unwrap();
        assert!(f.is_zero());
        assert!(parse_form(&m, "y / y").is_err());
        assert!(parse_form(&m, "y / 0").is_err());
    }
}
