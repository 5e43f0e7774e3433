//! Text formats for Lie algebra laws and representations, plus the
//! scalar expression grammar shared by both.
//!
//! Algebra files (one statement per line, `#` comments):
//! ```text
//! dim <n>
//! param <name> [<name> ...]
//! param <name> rel <name>^2 = <polynomial>
//! constraint <text>
//! bracket <i> <j> -> <k>: <scalar> [, <k>: <scalar> ...]
//! ```
//! Representation files:
//! ```text
//! size <k>
//! param ... (as above, when the images use parameters)
//! e <h> = <scalar> * X <i> <j> [ + <scalar> * X <i> <j> ...]
//! ```
//! Scalars are rational expressions over `i` and declared parameter
//! names, e.g. `-3/2`, `1+2i`, `(beta-1)/gamma`, `2i*alpha`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebra::{Constraint, JacobiReport, LieAlgebra};
use crate::gauss::GaussianRational;
use crate::poly::{Monomial, MonomialOrder, Polynomial};
use crate::scalar::{ParamRing, Scalar};
use crate::solver::Representation;
use crate::triangular::{TriIndex, TriVector, TriangularAlgebra};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("parse error at line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, message: message.into() }
}

// ---------------------------------------------------------------------------
// tokenizer

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
    Colon,
    Arrow,
    Eq,
}

fn tokenize(line: usize, text: &str) -> Result<Vec<Tok>, ParseError> {
    let mut toks = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut pos = 0usize;
    while pos < chars.len() {
        let c = chars[pos];
        match c {
            ' ' | '\t' => pos += 1,
            '0'..='9' => {
                let start = pos;
                while pos < chars.len() && chars[pos].is_ascii_digit() {
                    pos += 1;
                }
                let s: String = chars[start..pos].iter().collect();
                toks.push(Tok::Int(s.parse().expect("digits")));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = pos;
                while pos < chars.len()
                    && (chars[pos].is_ascii_alphanumeric() || chars[pos] == '_')
                {
                    pos += 1;
                }
                toks.push(Tok::Name(chars[start..pos].iter().collect()));
            }
            '+' => {
                toks.push(Tok::Plus);
                pos += 1;
            }
            '-' => {
                if pos + 1 < chars.len() && chars[pos + 1] == '>' {
                    toks.push(Tok::Arrow);
                    pos += 2;
                } else {
                    toks.push(Tok::Minus);
                    pos += 1;
                }
            }
            '*' => {
                toks.push(Tok::Star);
                pos += 1;
            }
            '/' => {
                toks.push(Tok::Slash);
                pos += 1;
            }
            '^' => {
                toks.push(Tok::Caret);
                pos += 1;
            }
            '(' => {
                toks.push(Tok::LParen);
                pos += 1;
            }
            ')' => {
                toks.push(Tok::RParen);
                pos += 1;
            }
            ',' => {
                toks.push(Tok::Comma);
                pos += 1;
            }
            ':' => {
                toks.push(Tok::Colon);
                pos += 1;
            }
            '=' => {
                toks.push(Tok::Eq);
                pos += 1;
            }
            other => return Err(err(line, format!("unexpected character `{other}`"))),
        }
    }
    Ok(toks)
}

// ---------------------------------------------------------------------------
// scalar expression parser (precedence climbing)

struct ExprParser<'a> {
    toks: &'a [Tok],
    pos: usize,
    line: usize,
    ring: &'a Arc<ParamRing>,
}

impl<'a> ExprParser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Scalar, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.next();
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.next();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Scalar, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.next();
                    acc = acc.mul(&self.factor()?);
                }
                Some(Tok::Slash) => {
                    self.next();
                    let d = self.factor()?;
                    acc = acc
                        .div(&d)
                        .map_err(|e| err(self.line, e.to_string()))?;
                }
                // juxtaposition: `2 i`, `3 alpha`, `2 (p - 1)` multiply
                Some(Tok::Name(_)) | Some(Tok::LParen) => {
                    acc = acc.mul(&self.factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Scalar, ParseError> {
        let base = match self.next() {
            Some(Tok::Minus) => return Ok(self.factor()?.neg()),
            Some(Tok::Int(n)) => Scalar::rat(GaussianRational::from_real(
                BigRational::from_integer(n),
            )),
            Some(Tok::Name(name)) if name == "i" => Scalar::i(),
            Some(Tok::Name(name)) => Scalar::param(self.ring, &name)
                .ok_or_else(|| err(self.line, format!("undeclared parameter `{name}`")))?,
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => inner,
                    _ => return Err(err(self.line, "expected `)`")),
                }
            }
            other => return Err(err(self.line, format!("unexpected token {other:?}"))),
        };
        if matches!(self.peek(), Some(Tok::Caret)) {
            self.next();
            match self.next() {
                Some(Tok::Int(e)) => {
                    let e: u32 = e
                        .try_into()
                        .map_err(|_| err(self.line, "exponent too large"))?;
                    return Ok(base.pow(e));
                }
                _ => return Err(err(self.line, "expected integer exponent after `^`")),
            }
        }
        Ok(base)
    }
}

/// Parse a standalone scalar expression against a parameter ring.
pub fn parse_scalar(
    text: &str,
    ring: &Arc<ParamRing>,
    line: usize,
) -> Result<Scalar, ParseError> {
    let toks = tokenize(line, text)?;
    let mut p = ExprParser { toks: &toks, pos: 0, line, ring };
    let s = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(err(line, "trailing tokens after scalar expression"));
    }
    Ok(s)
}

// ---------------------------------------------------------------------------
// scalar rendering

fn render_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Render a Gaussian rational as a factor usable inside a product;
/// mixed complex values get parenthesized.
fn render_gauss_factor(c: &GaussianRational) -> String {
    if c.is_real() {
        render_rational(c.re())
    } else if c.re().is_zero() {
        if c.im().is_one() {
            "i".to_string()
        } else if (-c.im().clone()).is_one() {
            "-i".to_string()
        } else {
            format!("{}i", render_rational(c.im()))
        }
    } else {
        format!("({})", c)
    }
}

fn render_poly(p: &Polynomial, names: &[String]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mono_str = |m: &Monomial| -> String {
        m.exps()
            .iter()
            .map(|&(v, e)| {
                let name = &names[v as usize];
                if e == 1 {
                    name.clone()
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    };
    let mut out = String::new();
    for (idx, (m, c)) in p.terms().iter().enumerate() {
        let negative_real = c.is_real() && c.re().is_negative();
        let (sep, coeff) = if idx == 0 {
            ("", c.clone())
        } else if negative_real {
            (" - ", -c)
        } else {
            (" + ", c.clone())
        };
        out.push_str(sep);
        if m.is_one() {
            let _ = write!(out, "{}", render_gauss_factor(&coeff));
        } else if coeff.is_one() {
            out.push_str(&mono_str(m));
        } else if (-&coeff).is_one() {
            let _ = write!(out, "-{}", mono_str(m));
        } else {
            let _ = write!(out, "{}*{}", render_gauss_factor(&coeff), mono_str(m));
        }
    }
    out
}

/// Canonical textual form of a scalar, parseable by `parse_scalar`.
pub fn render_scalar(s: &Scalar) -> String {
    if let Some(c) = s.constant_value() {
        return c.to_string();
    }
    let names = s.ring().names().to_vec();
    let num = render_poly(s.numerator(), &names);
    if s.denominator().is_one() {
        num
    } else {
        format!("({})/({})", num, render_poly(s.denominator(), &names))
    }
}

/// Render a sparse triangular element in representation-file syntax.
pub fn render_tri_vector(tv: &TriVector) -> String {
    let terms: Vec<String> = tv
        .iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(idx, c)| format!("{} * {}", render_scalar_as_coefficient(c), idx))
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

/// Like `render_scalar` but safe to splice into a `+`-separated list:
/// anything with interior structure gets parenthesized.
fn render_scalar_as_coefficient(s: &Scalar) -> String {
    if let Some(c) = s.constant_value() {
        return render_gauss_factor(&c);
    }
    let plain = render_scalar(s);
    let needs_parens = plain
        .char_indices()
        .any(|(idx, ch)| idx > 0 && (ch == '+' || ch == '-'));
    if needs_parens && !(plain.starts_with('(') && plain.ends_with(')')) {
        format!("({plain})")
    } else {
        plain
    }
}

// ---------------------------------------------------------------------------
// algebra files

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines { inner: text.lines().enumerate() }
    }
}

impl<'a> Iterator for Lines<'a> {
    type Item = (usize, &'a str);
    fn next(&mut self) -> Option<Self::Item> {
        for (idx, raw) in self.inner.by_ref() {
            let body = match raw.find('#') {
                Some(cut) => &raw[..cut],
                None => raw,
            };
            let body = body.trim();
            if !body.is_empty() {
                return Some((idx + 1, body));
            }
        }
        None
    }
}

fn split_first_word(s: &str) -> (&str, &str) {
    match s.find(char::is_whitespace) {
        Some(cut) => (&s[..cut], s[cut..].trim_start()),
        None => (s, ""),
    }
}

/// Gather `param` declarations (including `rel` relations) so the ring
/// exists before any scalar is parsed.
fn collect_ring(text: &str) -> Result<Arc<ParamRing>, ParseError> {
    let mut ring = ParamRing::default();
    let mut relations: Vec<(usize, String, String)> = Vec::new();
    for (line, body) in Lines::new(text) {
        let (word, rest) = split_first_word(body);
        if word != "param" {
            continue;
        }
        if let Some(rel_pos) = rest.find(" rel ") {
            let name = rest[..rel_pos].trim();
            if name.is_empty() || name.split_whitespace().count() != 1 {
                return Err(err(line, "expected `param <name> rel <name>^2 = <poly>`"));
            }
            ring.add_param(name);
            relations.push((line, name.to_string(), rest[rel_pos + 5..].to_string()));
        } else {
            for name in rest.split_whitespace() {
                if name == "i" {
                    return Err(err(line, "`i` is reserved for the imaginary unit"));
                }
                ring.add_param(name);
            }
        }
    }
    // parse relation right-hand sides against the full ring
    let plain = Arc::new(ring.clone());
    for (line, name, spec) in relations {
        let expect = format!("{name}^2");
        let (lhs, rhs) = spec
            .split_once('=')
            .ok_or_else(|| err(line, "relation needs `=`"))?;
        if lhs.trim() != expect {
            return Err(err(line, format!("relation must be `{expect} = <poly>`")));
        }
        let value = parse_scalar(rhs.trim(), &plain, line)?;
        if !value.denominator().is_one() {
            return Err(err(line, "relation right-hand side must be polynomial"));
        }
        let var = ring.index_of(&name).expect("declared above");
        if value.numerator().vars().contains(&var) {
            return Err(err(line, "relation right-hand side mentions its own variable"));
        }
        ring.add_relation(var, value.numerator().clone());
    }
    Ok(Arc::new(ring))
}

fn parse_constraint(
    text: &str,
    ring: &Arc<ParamRing>,
    line: usize,
) -> Result<Constraint, ParseError> {
    let t = text.trim();
    if let Some((lhs, rhs)) = t.split_once("!=") {
        if rhs.trim() == "0" {
            return Ok(Constraint::NonZero(parse_scalar(lhs.trim(), ring, line)?));
        }
    }
    if let Some((lhs, rhs)) = t.split_once(">=") {
        if rhs.trim() == "0" {
            return Ok(Constraint::NonNegative(parse_scalar(lhs.trim(), ring, line)?));
        }
    }
    if let Some((lhs, rhs)) = t.split_once("<=") {
        if rhs.trim() == "0" {
            let s = parse_scalar(lhs.trim(), ring, line)?;
            return Ok(Constraint::NonNegative(s.neg()));
        }
    }
    if let Some((name, rhs)) = t.split_once('=') {
        let name = name.trim();
        if rhs.trim() == "+-1" && ring.index_of(name).is_some() {
            return Ok(Constraint::PlusMinusOne(name.to_string()));
        }
    }
    Ok(Constraint::Other(t.to_string()))
}

/// Parse an algebra file. The Jacobi check runs on the result and its
/// report is returned alongside (violations do not fail the load).
pub fn parse_algebra_file(text: &str) -> Result<(LieAlgebra, JacobiReport), ParseError> {
    let ring = collect_ring(text)?;
    let mut dim: Option<usize> = None;
    let mut algebra: Option<LieAlgebra> = None;
    let mut constraints = Vec::new();
    for (line, body) in Lines::new(text) {
        let (word, rest) = split_first_word(body);
        match word {
            "dim" => {
                if dim.is_some() {
                    return Err(err(line, "duplicate `dim`"));
                }
                let n: usize = rest
                    .parse()
                    .map_err(|_| err(line, "expected `dim <positive integer>`"))?;
                if n == 0 {
                    return Err(err(line, "dimension must be positive"));
                }
                dim = Some(n);
                algebra = Some(LieAlgebra::new(n, ring.clone()));
            }
            "param" => {} // handled in collect_ring
            "constraint" => {
                constraints.push(parse_constraint(rest, &ring, line)?);
            }
            "bracket" => {
                let alg = algebra
                    .as_mut()
                    .ok_or_else(|| err(line, "`bracket` before `dim`"))?;
                let (head, tail) = rest
                    .split_once("->")
                    .ok_or_else(|| err(line, "expected `bracket <i> <j> -> ...`"))?;
                let idx: Vec<&str> = head.split_whitespace().collect();
                if idx.len() != 2 {
                    return Err(err(line, "expected two indices before `->`"));
                }
                let i: usize = idx[0].parse().map_err(|_| err(line, "bad index"))?;
                let j: usize = idx[1].parse().map_err(|_| err(line, "bad index"))?;
                let mut terms = Vec::new();
                for piece in tail.split(',') {
                    let (k_str, scalar_str) = piece
                        .split_once(':')
                        .ok_or_else(|| err(line, "expected `<k>: <scalar>`"))?;
                    let k: usize = k_str
                        .trim()
                        .parse()
                        .map_err(|_| err(line, "bad target index"))?;
                    let c = parse_scalar(scalar_str.trim(), &ring, line)?;
                    terms.push((k, c));
                }
                alg.set_bracket(i, j, terms)
                    .map_err(|e| err(line, e.to_string()))?;
            }
            other => return Err(err(line, format!("unknown statement `{other}`"))),
        }
    }
    let mut algebra = algebra.ok_or_else(|| err(0, "missing `dim` statement"))?;
    algebra.constraints = constraints;
    let jacobi = algebra.jacobi_check();
    Ok((algebra, jacobi))
}

fn render_param_block(ring: &ParamRing) -> String {
    let mut out = String::new();
    let plain: Vec<&String> = ring
        .names()
        .iter()
        .enumerate()
        .filter(|(idx, _)| !ring.relations().contains_key(&(*idx as u32)))
        .map(|(_, n)| n)
        .collect();
    if !plain.is_empty() {
        let _ = writeln!(
            out,
            "param {}",
            plain.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(" ")
        );
    }
    for (&v, rhs) in ring.relations() {
        let name = &ring.names()[v as usize];
        let _ = writeln!(
            out,
            "param {name} rel {name}^2 = {}",
            render_poly(rhs, ring.names())
        );
    }
    out
}

pub fn render_constraint(c: &Constraint) -> String {
    match c {
        Constraint::NonZero(s) => format!("{} != 0", render_scalar(s)),
        Constraint::NonNegative(s) => format!("{} >= 0", render_scalar(s)),
        Constraint::PlusMinusOne(name) => format!("{name} = +-1"),
        Constraint::Other(text) => text.clone(),
    }
}

pub fn serialize_algebra(a: &LieAlgebra) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "dim {}", a.dim());
    out.push_str(&render_param_block(a.ring()));
    for c in &a.constraints {
        let _ = writeln!(out, "constraint {}", render_constraint(c));
    }
    for (i, j, terms) in a.brackets() {
        let rhs = terms
            .iter()
            .map(|(k, c)| format!("{k}: {}", render_scalar(c)))
            .collect::<Vec<_>>()
            .join(", ");
        let _ = writeln!(out, "bracket {i} {j} -> {rhs}");
    }
    out
}

// ---------------------------------------------------------------------------
// representation files

/// Split the tokens of a representation right-hand side into signed
/// `<scalar> * X <i> <j>` groups at top-level `+`/`-`.
fn split_rep_terms(toks: &[Tok]) -> Vec<(bool, Vec<Tok>)> {
    let mut groups = Vec::new();
    let mut current: Vec<Tok> = Vec::new();
    let mut negative = false;
    let mut depth = 0usize;
    for t in toks {
        match t {
            Tok::LParen => {
                depth += 1;
                current.push(t.clone());
            }
            Tok::RParen => {
                depth = depth.saturating_sub(1);
                current.push(t.clone());
            }
            Tok::Plus | Tok::Minus if depth == 0 && !current.is_empty() => {
                groups.push((negative, std::mem::take(&mut current)));
                negative = matches!(t, Tok::Minus);
            }
            Tok::Minus if depth == 0 && current.is_empty() => {
                negative = !negative;
            }
            _ => current.push(t.clone()),
        }
    }
    if !current.is_empty() {
        groups.push((negative, current));
    }
    groups
}

/// Parse a representation file.
pub fn parse_rep_file(text: &str) -> Result<Representation, ParseError> {
    let ring = collect_ring(text)?;
    let mut size: Option<usize> = None;
    let mut images: Vec<TriVector> = Vec::new();
    let mut last_label = 0usize;
    for (line, body) in Lines::new(text) {
        let (word, rest) = split_first_word(body);
        match word {
            "size" => {
                if size.is_some() {
                    return Err(err(line, "duplicate `size`"));
                }
                let k: usize = rest
                    .parse()
                    .map_err(|_| err(line, "expected `size <positive integer>`"))?;
                if k == 0 {
                    return Err(err(line, "size must be positive"));
                }
                size = Some(k);
            }
            "param" => {}
            "e" => {
                let k = size.ok_or_else(|| err(line, "`e` line before `size`"))?;
                let (label, expr) = rest
                    .split_once('=')
                    .ok_or_else(|| err(line, "expected `e <h> = ...`"))?;
                let h: usize = label
                    .trim()
                    .parse()
                    .map_err(|_| err(line, "bad basis label"))?;
                if h <= last_label {
                    return Err(err(line, "basis labels must be strictly increasing"));
                }
                last_label = h;
                let toks = tokenize(line, expr)?;
                let mut image: TriVector = BTreeMap::new();
                for (negative, group) in split_rep_terms(&toks) {
                    // expect `<scalar tokens> * X <i> <j>`; locate the X
                    let x_pos = group
                        .iter()
                        .position(|t| matches!(t, Tok::Name(n) if n == "X"))
                        .ok_or_else(|| err(line, "term is missing `X <i> <j>`"))?;
                    if x_pos + 3 != group.len() {
                        return Err(err(line, "expected `X <i> <j>` at end of term"));
                    }
                    let (ti, tj) = match (&group[x_pos + 1], &group[x_pos + 2]) {
                        (Tok::Int(a), Tok::Int(b)) => {
                            let i: usize = a.try_into().map_err(|_| err(line, "bad index"))?;
                            let j: usize = b.try_into().map_err(|_| err(line, "bad index"))?;
                            (i, j)
                        }
                        _ => return Err(err(line, "expected integer indices after `X`")),
                    };
                    if !(1 <= ti && ti <= tj && tj <= k) {
                        return Err(err(
                            line,
                            format!("index X {ti} {tj} out of range for size {k}"),
                        ));
                    }
                    let scalar_toks = match group[..x_pos].last() {
                        Some(Tok::Star) => &group[..x_pos - 1],
                        _ => {
                            return Err(err(line, "expected `<scalar> * X <i> <j>`"));
                        }
                    };
                    let mut p = ExprParser { toks: scalar_toks, pos: 0, line, ring: &ring };
                    let mut c = p.expr()?;
                    if p.pos != scalar_toks.len() {
                        return Err(err(line, "trailing tokens in coefficient"));
                    }
                    if negative {
                        c = c.neg();
                    }
                    let idx = TriIndex::new(ti, tj);
                    let slot = image.entry(idx).or_insert_with(Scalar::zero);
                    *slot = slot.add(&c);
                }
                image.retain(|_, c| !c.is_zero());
                images.push(image);
            }
            other => return Err(err(line, format!("unknown statement `{other}`"))),
        }
    }
    let k = size.ok_or_else(|| err(0, "missing `size` statement"))?;
    Ok(Representation { k, images, ring })
}

pub fn serialize_rep(rep: &Representation) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "size {}", rep.k);
    out.push_str(&render_param_block(&rep.ring));
    for (h, image) in rep.images.iter().enumerate() {
        let terms: Vec<String> = image
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(idx, c)| format!("{} * {}", render_scalar_as_coefficient(c), idx))
            .collect();
        let rhs = if terms.is_empty() {
            // an explicitly zero image (invalid, but serializable)
            "0 * X 1 1".to_string()
        } else {
            terms.join(" + ")
        };
        let _ = writeln!(out, "e {} = {}", h + 1, rhs);
    }
    out
}

/// Convenience wrapper used by tests: parse text that must be valid.
pub fn algebra_from_str(text: &str) -> LieAlgebra {
    let (algebra, jacobi) = parse_algebra_file(text).expect("valid algebra file");
    assert!(jacobi.passed(), "law violates the Jacobi identity");
    algebra
}

#[allow(dead_code)]
fn order_placeholder() -> MonomialOrder {
    MonomialOrder::GrevLex
}

#[allow(dead_code)]
fn model_placeholder(n: usize) -> TriangularAlgebra {
    TriangularAlgebra::new(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_simple_algebra() {
        let (a, jacobi) = parse_algebra_file("dim 3\nbracket 1 3 -> 2: 1\n").unwrap();
        assert_eq!(a.dim(), 3);
        assert!(jacobi.passed());
        let brackets: Vec<_> = a.brackets().collect();
        assert_eq!(brackets.len(), 1);
        let (i, j, terms) = brackets[0];
        assert_eq!((i, j), (1, 3));
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].0, 2);
        assert!(terms[0].1.is_one());
    }

    #[test]
    fn parse_abelian_and_parametric() {
        let (a, _) = parse_algebra_file("dim 2\n").unwrap();
        assert_eq!(a.brackets().count(), 0);
        let (b, jacobi) =
            parse_algebra_file("dim 3\nparam a\nbracket 1 3 -> 1: a\n").unwrap();
        assert!(jacobi.passed());
        assert!(b.is_parametric());
    }

    #[test]
    fn parse_error_positions() {
        let e = parse_algebra_file("dim 3\nbracket 1 -> 2: 1\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(parse_algebra_file("bracket 1 2 -> 1: 1\n").is_err());
    }

    #[test]
    fn parse_rep_examples() {
        let rep = parse_rep_file(
            "size 3\ne 1 = -1 * X 2 3\ne 2 = 1 * X 1 3\ne 3 = 1 * X 1 2\n",
        )
        .unwrap();
        assert_eq!(rep.k, 3);
        assert_eq!(rep.images.len(), 3);
        assert_eq!(
            rep.images[0].get(&TriIndex::new(2, 3)).unwrap(),
            &Scalar::int(-1)
        );

        let rep = parse_rep_file("size 1\ne 1 = 1 * X 1 1\n").unwrap();
        assert_eq!(rep.images.len(), 1);

        // complex coefficients and multiple terms
        let rep = parse_rep_file("size 3\ne 1 = 1 * X 1 2 + i * X 1 3\n").unwrap();
        assert_eq!(
            rep.images[0].get(&TriIndex::new(1, 3)).unwrap(),
            &Scalar::i()
        );
    }

    #[test]
    fn rep_index_out_of_range() {
        assert!(parse_rep_file("size 2\ne 1 = 1 * X 1 3\n").is_err());
    }

    #[test]
    fn scalar_grammar_forms() {
        let ring = ParamRing::empty();
        let cases = [
            ("0", Scalar::zero()),
            ("1", Scalar::one()),
            ("-3/2", Scalar::rat(GaussianRational::from_ratio(-3, 2))),
            ("i", Scalar::i()),
            ("-i", Scalar::i().neg()),
            ("2 i", Scalar::i().mul(&Scalar::int(2))),
            ("2i", Scalar::i().mul(&Scalar::int(2))),
            (
                "1 - 2 i",
                Scalar::rat(GaussianRational::new(
                    BigRational::from_integer(1.into()),
                    BigRational::from_integer((-2).into()),
                )),
            ),
            ("(1+i)*(1-i)", Scalar::int(2)),
            ("2^3", Scalar::int(8)),
        ];
        for (text, expect) in cases {
            let got = parse_scalar(text, &ring, 1).unwrap();
            assert!(got.equals(&expect), "{text}");
        }
    }

    #[test]
    fn parametric_scalar_roundtrip() {
        let mut ring = ParamRing::new(vec!["alpha".into(), "beta".into(), "gamma".into()]);
        ring.add_param("Z");
        let ring = Arc::new(ring);
        let cases = [
            "alpha",
            "(beta - 1)/(gamma)",
            "(1+alpha) - beta",
            "2i*alpha",
            "(1-2i)*alpha^2*beta + 1/2",
            "Z",
        ];
        for text in cases {
            let s = parse_scalar(text, &ring, 1).unwrap();
            let rendered = render_scalar(&s);
            let back = parse_scalar(&rendered, &ring, 1).unwrap();
            assert!(s.equals(&back), "{text} -> {rendered}");
        }
    }

    #[test]
    fn algebra_roundtrip() {
        let src = "dim 3\nparam a b\nconstraint a*b != 0\nbracket 1 3 -> 1: a, 2: 1-b\nbracket 2 3 -> 2: 1/2\n";
        let (alg, _) = parse_algebra_file(src).unwrap();
        let rendered = serialize_algebra(&alg);
        let (back, _) = parse_algebra_file(&rendered).unwrap();
        assert_eq!(alg.dim(), back.dim());
        let collect = |a: &LieAlgebra| -> Vec<(usize, usize, Vec<(usize, String)>)> {
            a.brackets()
                .map(|(i, j, t)| {
                    (
                        i,
                        j,
                        t.iter().map(|(k, c)| (*k, render_scalar(c))).collect(),
                    )
                })
                .collect()
        };
        assert_eq!(collect(&alg), collect(&back));
        assert_eq!(alg.constraints, back.constraints);
    }

    #[test]
    fn rep_roundtrip_with_radical() {
        let src = "size 4\nparam alpha\nparam Z rel Z^2 = 1 + alpha\ne 1 = 1 * X 1 4\ne 2 = Z * X 2 4 + (1+alpha) * X 3 4\n";
        let rep = parse_rep_file(src).unwrap();
        let rendered = serialize_rep(&rep);
        let back = parse_rep_file(&rendered).unwrap();
        assert_eq!(rep.k, back.k);
        assert_eq!(rep.images.len(), back.images.len());
        for (a, b) in rep.images.iter().zip(&back.images) {
            assert_eq!(a.len(), b.len());
            for (idx, c) in a {
                assert!(b.get(idx).unwrap().equals(c), "{idx:?}");
            }
        }
    }
}
