//! Text, JSON and LaTeX renderings of forms. The text rendering is valid
//! expression syntax and parses back to the same normal form.

use gradjet::jetalg::{Coeff, FormGenerator, GradedForm, JetVar, ModelContext, Monomial, MultiIndex, ScalarPoly, Word};
use num::{One, Signed};
use serde_json::{json, Value};

fn index_text(idx: &MultiIndex) -> String {
    if idx.is_zero() {
        return String::new();
    }
    let parts: Vec<String> = idx.exponents().iter().map(|e| e.to_string()).collect();
    format!("({})", parts.join(","))
}

pub fn jet_var_text(ctx: &ModelContext, v: &JetVar) -> String {
    format!("{}{}", ctx.field(v.field as usize).name, index_text(&v.index))
}

fn power(symbol: String, e: u32) -> String {
    if e == 1 {
        symbol
    } else {
        format!("{symbol}^{e}")
    }
}

/// Scalar factors of a monomial as `(symbol, power)`, in canonical order.
fn monomial_factors(ctx: &ModelContext, m: &Monomial) -> Vec<(String, u32)> {
    let mut out: Vec<(String, u32)> = m
        .base_factors()
        .iter()
        .map(|(l, e)| (ctx.coords()[*l as usize].clone(), *e))
        .collect();
    out.extend(m.even_factors().iter().map(|(v, e)| (jet_var_text(ctx, v), *e)));
    out.extend(m.odd_factors().iter().map(|v| (jet_var_text(ctx, v), 1)));
    out
}

fn generator_text(ctx: &ModelContext, g: &FormGenerator) -> String {
    match g {
        FormGenerator::Horizontal(l) => format!("d[{}]", ctx.coords()[*l as usize]),
        FormGenerator::Contact(v) => format!("th[{}]", jet_var_text(ctx, v)),
    }
}

fn word_factors(ctx: &ModelContext, w: &Word) -> Vec<(String, u32)> {
    w.factors().iter().map(|(g, e)| (generator_text(ctx, g), *e)).collect()
}

fn term_text(ctx: &ModelContext, w: &Word, m: &Monomial, magnitude: &Coeff) -> String {
    let mut parts: Vec<String> = Vec::new();
    let factors: Vec<String> = monomial_factors(ctx, m)
        .into_iter()
        .chain(word_factors(ctx, w))
        .map(|(s, e)| power(s, e))
        .collect();
    if !magnitude.is_one() || factors.is_empty() {
        parts.push(magnitude.to_string());
    }
    parts.extend(factors);
    parts.join("*")
}

/// Canonical text: terms in normal-form order joined by ` + ` / ` - `.
pub fn form_text(ctx: &ModelContext, f: &GradedForm) -> String {
    let mut out = String::new();
    for (i, (w, m, c)) in f.terms().enumerate() {
        let body = term_text(ctx, w, m, &c.abs());
        match (i, c.is_negative()) {
            (0, false) => out.push_str(&body),
            (0, true) => {
                out.push('-');
                out.push_str(&body);
            }
            (_, false) => {
                out.push_str(" + ");
                out.push_str(&body);
            }
            (_, true) => {
                out.push_str(" - ");
                out.push_str(&body);
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn scalar_text(ctx: &ModelContext, p: &ScalarPoly) -> String {
    form_text(ctx, &p.to_form())
}

/// `{"text": .., "terms": [{"coeff": "p/q", "factors": [..], "wedge": [..]}]}`.
pub fn form_json(ctx: &ModelContext, f: &GradedForm) -> Value {
    let factor = |(symbol, power): (String, u32)| json!({ "symbol": symbol, "power": power });
    let terms: Vec<Value> = f
        .terms()
        .map(|(w, m, c)| {
            json!({
                "coeff": c.to_string(),
                "factors": monomial_factors(ctx, m).into_iter().map(factor).collect::<Vec<_>>(),
                "wedge": word_factors(ctx, w).into_iter().map(factor).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "text": form_text(ctx, f), "terms": terms })
}

fn latex_index(idx: &MultiIndex) -> String {
    if idx.is_zero() {
        return String::new();
    }
    let parts: Vec<String> = idx.exponents().iter().map(|e| e.to_string()).collect();
    format!("_{{({})}}", parts.join(","))
}

fn latex_name(name: &str) -> String {
    if name.chars().count() == 1 {
        name.to_string()
    } else {
        format!("\\mathit{{{}}}", name.replace('_', "\\_"))
    }
}

fn latex_var(ctx: &ModelContext, v: &JetVar) -> String {
    format!("{}{}", latex_name(&ctx.field(v.field as usize).name), latex_index(&v.index))
}

fn latex_power(s: String, e: u32) -> String {
    if e == 1 {
        s
    } else {
        format!("{{{s}}}^{{{e}}}")
    }
}

fn latex_coeff(c: &Coeff) -> String {
    if c.is_integer() {
        c.to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", c.numer(), c.denom())
    }
}

fn latex_word(ctx: &ModelContext, w: &Word) -> String {
    let n = ctx.base_dim();
    // A full set of dx's prints as ω.
    let dxs: Vec<u16> = w
        .factors()
        .iter()
        .filter_map(|(g, _)| match g {
            FormGenerator::Horizontal(l) => Some(*l),
            _ => None,
        })
        .collect();
    let mut parts = Vec::new();
    if n > 0 && dxs.len() == n {
        parts.push("\\omega".to_string());
    } else {
        parts.extend(dxs.iter().map(|l| format!("\\mathrm{{d}}{}", latex_name(&ctx.coords()[*l as usize]))));
    }
    for (g, e) in w.factors() {
        if let FormGenerator::Contact(v) = g {
            let field = latex_name(&ctx.field(v.field as usize).name);
            parts.push(latex_power(format!("\\theta^{{{field}}}{}", latex_index(&v.index)), *e));
        }
    }
    parts.join(" \\wedge ")
}

pub fn form_latex(ctx: &ModelContext, f: &GradedForm) -> String {
    let mut out = String::new();
    for (i, (w, m, c)) in f.terms().enumerate() {
        let mut factors: Vec<String> = m
            .base_factors()
            .iter()
            .map(|(l, e)| latex_power(latex_name(&ctx.coords()[*l as usize]), *e))
            .collect();
        factors.extend(m.even_factors().iter().map(|(v, e)| latex_power(latex_var(ctx, v), *e)));
        factors.extend(m.odd_factors().iter().map(|v| latex_var(ctx, v)));
        if !w.is_empty() {
            factors.push(latex_word(ctx, w));
        }
        let magnitude = c.abs();
        let mut body = if !magnitude.is_one() || factors.is_empty() {
            latex_coeff(&magnitude)
        } else {
            String::new()
        };
        for f in factors {
            if !body.is_empty() {
                body.push_str("\\,");
            }
            body.push_str(&f);
        }
        let sign = match (i, c.is_negative()) {
            (0, false) => "",
            (0, true) => "-",
            (_, false) => " + ",
            (_, true) => " - ",
        };
        out.push_str(sign);
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
