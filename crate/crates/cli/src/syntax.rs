//! Lexer and recursive-descent parser for model files and expressions.

use std::fmt;

use gradjet::jetalg::{Coeff, GradedForm, ModelContext, MultiIndex};
use num::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Tok {
    Ident(String),
    Int(u64),
    Sym(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(k) => write!(f, "`{k}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

const SYMBOLS: [&str; 16] = ["->", ";", ":", ",", "(", ")", "[", "]", "{", "}", "+", "-", "*", "/", "^", "="];

pub(crate) fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut column = 1;
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            column += 1;
            i += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start = (line, column);
        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                s.push(chars[i]);
                i += 1;
                column += 1;
            }
            out.push(Token {
                tok: Tok::Ident(s),
                line: start.0,
                column: start.1,
            });
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while i < chars.len() && chars[i].is_ascii_digit() {
                s.push(chars[i]);
                i += 1;
                column += 1;
            }
            let value = s.parse::<u64>().map_err(|_| ParseError {
                line: start.0,
                column: start.1,
                message: format!("integer literal `{s}` is too large"),
            })?;
            out.push(Token {
                tok: Tok::Int(value),
                line: start.0,
                column: start.1,
            });
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            Some(s) => {
                out.push(Token {
                    tok: Tok::Sym(s),
                    line: start.0,
                    column: start.1,
                });
                i += s.len();
                column += s.len();
            }
            None => {
                return Err(ParseError {
                    line,
                    column,
                    message: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

/// Token cursor shared by the model and expression parsers.
pub(crate) struct Cursor {
    tokens: Vec<Token>,
    pos: usize,
}

impl Cursor {
    pub fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Cursor { tokens: lex(text)?, pos: 0 })
    }

    pub fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    pub fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    pub fn error_at(&self, t: &Token, message: impl Into<String>) -> ParseError {
        ParseError {
            line: t.line,
            column: t.column,
            message: message.into(),
        }
    }

    pub fn error(&self, message: impl Into<String>) -> ParseError {
        self.error_at(self.peek(), message)
    }

    pub fn at_sym(&self, s: &str) -> bool {
        matches!(&self.peek().tok, Tok::Sym(x) if *x == s)
    }

    pub fn at_keyword(&self, k: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(x) if x == k)
    }

    pub fn eat_sym(&mut self, s: &str) -> bool {
        if self.at_sym(s) {
            self.next();
            true
        } else {
            false
        }
    }

    pub fn expect_sym(&mut self, s: &str) -> Result<Token, ParseError> {
        if self.at_sym(s) {
            Ok(self.next())
        } else {
            Err(self.error(format!("expected `{s}`, found {}", self.peek().tok)))
        }
    }

    pub fn expect_keyword(&mut self, k: &str) -> Result<(), ParseError> {
        if self.at_keyword(k) {
            self.next();
            Ok(())
        } else {
            Err(self.error(format!("expected `{k}`, found {}", self.peek().tok)))
        }
    }

    pub fn expect_ident(&mut self) -> Result<(String, Token), ParseError> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) => Ok((s.clone(), t.clone())),
            other => Err(self.error_at(&t, format!("expected an identifier, found {other}"))),
        }
    }

    pub fn expect_int(&mut self) -> Result<u64, ParseError> {
        let t = self.next();
        match t.tok {
            Tok::Int(k) => Ok(k),
            ref other => Err(self.error_at(&t, format!("expected an integer, found {other}"))),
        }
    }

    pub fn at_eof(&self) -> bool {
        self.peek().tok == Tok::Eof
    }
}

/// Names visible to expressions besides coordinates and fields.
pub trait Scope {
    fn ctx(&self) -> &ModelContext;
    /// A named scalar (e.g. a Lagrangian density), if any.
    fn named(&self, _name: &str) -> Option<GradedForm> {
        None
    }
}

impl Scope for ModelContext {
    fn ctx(&self) -> &ModelContext {
        self
    }
}

/// Identifiers with built-in meaning in expressions.
pub const RESERVED: [&str; 3] = ["d", "th", "omega"];

pub(crate) fn parse_expr(cur: &mut Cursor, scope: &dyn Scope) -> Result<GradedForm, ParseError> {
    let mut acc = parse_term(cur, scope)?;
    loop {
        if cur.eat_sym("+") {
            acc = &acc + &parse_term(cur, scope)?;
        } else if cur.eat_sym("-") {
            acc = &acc - &parse_term(cur, scope)?;
        } else {
            return Ok(acc);
        }
    }
}

fn parse_term(cur: &mut Cursor, scope: &dyn Scope) -> Result<GradedForm, ParseError> {
    let mut acc = parse_unary(cur, scope)?;
    loop {
        if cur.eat_sym("*") {
            acc = &acc * &parse_unary(cur, scope)?;
        } else if cur.at_sym("/") {
            let t = cur.next();
            let divisor = parse_unary(cur, scope)?;
            let c = constant_value(&divisor)
                .ok_or_else(|| cur.error_at(&t, "division is only allowed by a rational constant"))?;
            if c.is_zero() {
                return Err(cur.error_at(&t, "division by zero"));
            }
            acc = acc.scale(&(Coeff::one() / c));
        } else {
            return Ok(acc);
        }
    }
}

fn constant_value(f: &GradedForm) -> Option<Coeff> {
    if f.is_zero() {
        return Some(Coeff::zero());
    }
    let mut it = f.terms();
    let (w, m, c) = it.next()?;
    (it.next().is_none() && w.is_empty() && m.is_one()).then(|| c.clone())
}

fn parse_unary(cur: &mut Cursor, scope: &dyn Scope) -> Result<GradedForm, ParseError> {
    if cur.eat_sym("-") {
        return Ok(-&parse_unary(cur, scope)?);
    }
    if cur.eat_sym("+") {
        return parse_unary(cur, scope);
    }
    let base = parse_atom(cur, scope)?;
    if cur.eat_sym("^") {
        let k = cur.expect_int()?;
        let k = u32::try_from(k).map_err(|_| cur.error("exponent too large"))?;
        return Ok(base.pow(k));
    }
    Ok(base)
}

fn parse_index(cur: &mut Cursor, n: usize, field: &str, at: &Token) -> Result<MultiIndex, ParseError> {
    let mut exps = Vec::new();
    if cur.eat_sym("(") {
        loop {
            let k = cur.expect_int()?;
            exps.push(u16::try_from(k).map_err(|_| cur.error("multi-index entry too large"))?);
            if cur.eat_sym(")") {
                break;
            }
            cur.expect_sym(",")?;
        }
        if exps.len() != n {
            return Err(cur.error_at(
                at,
                format!("multi-index of `{field}` has {} entries but the base has dimension {n}", exps.len()),
            ));
        }
    } else {
        exps = vec![0; n];
    }
    Ok(MultiIndex::from_exponents(exps))
}

fn parse_atom(cur: &mut Cursor, scope: &dyn Scope) -> Result<GradedForm, ParseError> {
    let ctx = scope.ctx();
    let t = cur.next();
    match &t.tok {
        Tok::Int(k) => Ok(GradedForm::one().scale(&Coeff::from_integer((*k).into()))),
        Tok::Sym("(") => {
            let e = parse_expr(cur, scope)?;
            cur.expect_sym(")")?;
            Ok(e)
        }
        Tok::Ident(name) if name == "d" && cur.at_sym("[") => {
            cur.next();
            let (coord, at) = cur.expect_ident()?;
            let l = ctx
                .coord_index(&coord)
                .ok_or_else(|| cur.error_at(&at, format!("`d[...]` expects a coordinate, found `{coord}`")))?;
            cur.expect_sym("]")?;
            Ok(ctx.dx(l))
        }
        Tok::Ident(name) if name == "th" && cur.at_sym("[") => {
            cur.next();
            let (field, at) = cur.expect_ident()?;
            let a = ctx
                .field_index(&field)
                .ok_or_else(|| cur.error_at(&at, format!("`th[...]` expects a field, found `{field}`")))?;
            let idx = parse_index(cur, ctx.base_dim(), &field, &at)?;
            cur.expect_sym("]")?;
            Ok(GradedForm::contact(ctx.jet_var(a, idx)))
        }
        Tok::Ident(name) if name == "omega" => Ok(ctx.omega()),
        Tok::Ident(name) => {
            if let Some(l) = ctx.coord_index(name) {
                return Ok(ctx.coord(l));
            }
            if let Some(a) = ctx.field_index(name) {
                let idx = parse_index(cur, ctx.base_dim(), name, &t)?;
                return Ok(GradedForm::from(gradjet::ScalarPoly::jet(ctx.jet_var(a, idx))));
            }
            if let Some(f) = scope.named(name) {
                return Ok(f);
            }
            Err(cur.error_at(&t, format!("unknown identifier `{name}`")))
        }
        other => Err(cur.error_at(&t, format!("expected an expression, found {other}"))),
    }
}

/// Parses a standalone expression (e.g. a command-line argument).
pub fn parse_form(scope: &dyn Scope, text: &str) -> Result<GradedForm, ParseError> {
    let mut cur = Cursor::new(text)?;
    let f = parse_expr(&mut cur, scope)?;
    if !cur.at_eof() {
        return Err(cur.error(format!("unexpected {} after expression", cur.peek().tok)));
    }
    Ok(f)
}
