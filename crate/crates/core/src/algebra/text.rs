//! Text forms for polynomials and presentations.
//!
//! Polynomials print as `c*g1^e1*g2 + ...` with terms in descending
//! canonical order. Presentations use a line-oriented record format:
//!
//! ```text
//! presentation/1
//! field Q
//! gen x4 4 polynomial
//! gen y9 9 exterior
//! rel 8 explicit [2,0]:1
//! rel 16 partial decomposable [0,2]:1
//! fdim 40
//! ```
//!
//! `field` is `Q` or `F<p>`. A `gen` record carries name, degree and
//! whether the generator squares to zero. A `rel` record carries the
//! degree, the body kind and terms as `[exponent vector]:coefficient`
//! pairs in ascending canonical order. Lines starting with `#` are ignored.
//! Printing a parsed presentation reproduces canonical input byte for byte.

use num_traits::{One, Signed};

use super::field::{format_scalar, parse_scalar, FieldSpec};
use super::poly::{Algebra, Generator, Monomial, Poly};
use super::presentation::{Presentation, Relation, RelationBody};
use super::AlgebraError;

pub const PRESENTATION_HEADER: &str = "presentation/1";

pub fn format_monomial(alg: &Algebra, m: &Monomial) -> String {
    if m.is_one() {
        return "1".into();
    }
    m.exponents()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            let name = alg.generator(i).name();
            if e == 1 {
                name.to_string()
            } else {
                format!("{name}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

pub fn format_poly(alg: &Algebra, p: &Poly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms().rev().enumerate() {
        let negative = c.is_negative();
        let abs = c.abs();
        if k == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let mono = format_monomial(alg, m);
        if m.is_one() {
            out.push_str(&format_scalar(&abs));
        } else if abs.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format_scalar(&abs));
            out.push('*');
            out.push_str(&mono);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
}

fn tokenize(s: &str) -> Result<Vec<Token>, String> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1;
            }
            '-' => {
                out.push(Token::Minus);
                i += 1;
            }
            '*' => {
                out.push(Token::Star);
                i += 1;
            }
            '^' => {
                out.push(Token::Caret);
                i += 1;
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '/') {
                    i += 1;
                }
                out.push(Token::Number(chars[start..i].iter().collect()));
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Token::Ident(chars[start..i].iter().collect()));
            }
            other => return Err(format!("unexpected character `{other}`")),
        }
    }
    Ok(out)
}

/// Parses a polynomial written with generator names, e.g. `x8^2 - 3/2*x4*x6`.
/// Products are evaluated in `alg`, so odd factors out of order pick up
/// their Koszul sign.
pub fn parse_poly(alg: &Algebra, s: &str) -> Result<Poly, AlgebraError> {
    let err = |message: String| AlgebraError::Parse { line: 0, message };
    let tokens = tokenize(s).map_err(err)?;
    if tokens.is_empty() {
        return Err(err("empty polynomial".into()));
    }
    let field = alg.field();
    let mut pos = 0;
    let mut total = alg.zero();
    let mut first = true;
    while pos < tokens.len() {
        let mut sign = 1i64;
        match tokens[pos] {
            Token::Plus => pos += 1,
            Token::Minus => {
                sign = -1;
                pos += 1;
            }
            _ if first => {}
            _ => return Err(err("expected `+` or `-` between terms".into())),
        }
        first = false;
        let mut term = alg.constant(sign);
        loop {
            let factor = match tokens.get(pos) {
                Some(Token::Number(n)) => {
                    pos += 1;
                    let c = parse_scalar(n).ok_or_else(|| err(format!("bad coefficient `{n}`")))?;
                    alg.term(alg.unit_monomial(), field.reduce(&c)?)
                }
                Some(Token::Ident(name)) => {
                    pos += 1;
                    let g = alg.gen_named(name).ok_or_else(|| AlgebraError::UnknownGenerator(name.clone()))?;
                    if let Some(Token::Caret) = tokens.get(pos) {
                        pos += 1;
                        match tokens.get(pos) {
                            Some(Token::Number(e)) => {
                                pos += 1;
                                let e: u32 = e.parse().map_err(|_| err(format!("bad exponent `{e}`")))?;
                                alg.pow(&g, e)?
                            }
                            _ => return Err(err("expected exponent after `^`".into())),
                        }
                    } else {
                        g
                    }
                }
                _ => return Err(err("expected a coefficient or generator".into())),
            };
            term = alg.mul(&term, &factor)?;
            if let Some(Token::Star) = tokens.get(pos) {
                pos += 1;
            } else {
                break;
            }
        }
        total = alg.add(&total, &term);
    }
    Ok(total)
}

fn format_terms(p: &Poly) -> String {
    p.terms()
        .map(|(m, c)| {
            let exps: Vec<String> = m.exponents().iter().map(u32::to_string).collect();
            format!("[{}]:{}", exps.join(","), format_scalar(c))
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn parse_terms(alg: &Algebra, fields: &[&str], line: usize) -> Result<Poly, AlgebraError> {
    let err = |message: String| AlgebraError::Parse { line, message };
    let mut terms = Vec::new();
    for f in fields {
        let (exps, coeff) = f.split_once(':').ok_or_else(|| err(format!("term `{f}` lacks `:coefficient`")))?;
        let exps = exps
            .strip_prefix('[')
            .and_then(|e| e.strip_suffix(']'))
            .ok_or_else(|| err(format!("exponent vector `{exps}` must be bracketed")))?;
        let exps: Vec<u32> = if exps.is_empty() {
            vec![]
        } else {
            exps.split(',')
                .map(|e| e.trim().parse().map_err(|_| err(format!("bad exponent `{e}`"))))
                .collect::<Result<_, _>>()?
        };
        let m = alg.monomial(exps).map_err(|e| err(e.to_string()))?;
        let c = parse_scalar(coeff).ok_or_else(|| err(format!("bad coefficient `{coeff}`")))?;
        terms.push((m, c));
    }
    alg.from_terms(terms).map_err(|e| err(e.to_string()))
}

impl Presentation {
    /// Canonical text form.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(PRESENTATION_HEADER);
        out.push('\n');
        out.push_str(&format!("field {}\n", self.field()));
        for g in self.generators() {
            let kind = if g.squares_to_zero() { "exterior" } else { "polynomial" };
            out.push_str(&format!("gen {} {} {}\n", g.name(), g.degree(), kind));
        }
        for r in self.relations() {
            let (kind, terms) = match r.body() {
                RelationBody::Explicit(p) => ("explicit".to_string(), p),
                RelationBody::Partial { certified, decomposable_asserted } => {
                    (if *decomposable_asserted { "partial decomposable".into() } else { "partial".into() }, certified)
                }
            };
            let terms = format_terms(terms);
            if terms.is_empty() {
                out.push_str(&format!("rel {} {}\n", r.degree(), kind));
            } else {
                out.push_str(&format!("rel {} {} {}\n", r.degree(), kind, terms));
            }
        }
        if let Some(fd) = self.formal_dimension() {
            out.push_str(&format!("fdim {fd}\n"));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, AlgebraError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        match lines.next() {
            Some((_, PRESENTATION_HEADER)) => {}
            Some((line, other)) => {
                return Err(AlgebraError::Parse {
                    line,
                    message: format!("expected `{PRESENTATION_HEADER}`, found `{other}`"),
                })
            }
            None => return Err(AlgebraError::Parse { line: 0, message: "empty input".into() }),
        }
        let mut field = None;
        let mut generators = Vec::new();
        let mut raw_relations: Vec<(usize, Vec<String>)> = Vec::new();
        let mut fdim = None;
        for (line, l) in lines {
            let err = |message: String| AlgebraError::Parse { line, message };
            let fields: Vec<&str> = l.split_whitespace().collect();
            match fields[0] {
                "field" => {
                    let tag = fields.get(1).ok_or_else(|| err("missing field tag".into()))?;
                    let f = match *tag {
                        "Q" => FieldSpec::rationals(),
                        t => {
                            let p = t
                                .strip_prefix('F')
                                .and_then(|p| p.parse().ok())
                                .ok_or_else(|| err(format!("unknown field `{t}`")))?;
                            FieldSpec::prime(p).map_err(|e| err(e.to_string()))?
                        }
                    };
                    field = Some(f);
                }
                "gen" => {
                    if fields.len() != 4 {
                        return Err(err("expected `gen <name> <degree> polynomial|exterior`".into()));
                    }
                    let degree: u32 = fields[2].parse().map_err(|_| err(format!("bad degree `{}`", fields[2])))?;
                    let ext = match fields[3] {
                        "exterior" => true,
                        "polynomial" => false,
                        k => return Err(err(format!("unknown generator kind `{k}`"))),
                    };
                    generators.push(Generator::new(fields[1], degree, ext));
                }
                "rel" => raw_relations.push((line, fields.iter().map(|s| s.to_string()).collect())),
                "fdim" => {
                    let d = fields.get(1).and_then(|d| d.parse().ok());
                    fdim = Some(d.ok_or_else(|| err("bad formal dimension".into()))?);
                }
                other => return Err(err(format!("unknown record `{other}`"))),
            }
        }
        let field = field.ok_or(AlgebraError::Parse { line: 0, message: "missing field record".into() })?;
        let alg = Algebra::new(field, generators)?;
        let mut relations = Vec::new();
        for (line, fields) in raw_relations {
            let err = |message: String| AlgebraError::Parse { line, message };
            let degree: u32 =
                fields.get(1).and_then(|d| d.parse().ok()).ok_or_else(|| err("bad relation degree".into()))?;
            let fields: Vec<&str> = fields.iter().map(String::as_str).collect();
            let rel = match fields.get(2) {
                Some(&"explicit") => Relation::explicit(degree, parse_terms(&alg, &fields[3..], line)?),
                Some(&"partial") => {
                    let (asserted, rest) = match fields.get(3) {
                        Some(&"decomposable") => (true, &fields[4..]),
                        _ => (false, &fields[3..]),
                    };
                    Relation::partial(degree, parse_terms(&alg, rest, line)?, asserted)
                }
                _ => return Err(err("relation kind must be `explicit` or `partial`".into())),
            };
            relations.push(rel);
        }
        Presentation::new(alg, relations, fdim)
    }
}
