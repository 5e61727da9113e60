//! The frame description language.
//!
//! ```text
//! # comment
//! vars x y z
//! field X1 = d/dx
//! field X2 = x d/dy
//! field X3 = y^2 d/dz - 1/2 x d/dx
//! weights 1,2,5          # or: weights auto
//! point 0,0,0
//! ```
//!
//! A field is a sum of terms `[rational] {ident[^k]} d/d<ident>`, with
//! multiplication by juxtaposition. The expression `0` is the zero field.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{Frame, VectorField};
use crate::poly::Polynomial;
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub coeff: Rational,
    /// `(variable index, exponent ≥ 1)` in source order.
    pub factors: Vec<(usize, u32)>,
    /// Index of the variable in `d/d<var>`.
    pub direction: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldDef {
    pub name: String,
    pub terms: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightsSetting {
    Auto,
    Explicit(Vec<u32>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameDocument {
    pub var_names: Vec<String>,
    pub fields: Vec<FieldDef>,
    pub weights: Option<WeightsSetting>,
    pub point: Option<Vec<Rational>>,
}

impl FieldDef {
    pub fn to_vector_field(&self, dim: usize) -> VectorField {
        let mut comps = vec![Polynomial::zero(dim); dim];
        for t in &self.terms {
            let mut e = vec![0u32; dim];
            for &(v, k) in &t.factors {
                e[v] += k;
            }
            let term = Polynomial::from_terms(dim, [(t.coeff.clone(), e)]);
            comps[t.direction] = &comps[t.direction] + &term;
        }
        VectorField::new(comps).expect("components share the document dimension")
    }
}

impl FrameDocument {
    pub fn dim(&self) -> usize {
        self.var_names.len()
    }

    pub fn vector_fields(&self) -> Vec<VectorField> {
        self.fields.iter().map(|f| f.to_vector_field(self.dim())).collect()
    }

    pub fn to_frame(&self) -> Result<Frame> {
        let n = self.dim();
        let point = self.point.clone().unwrap_or_else(|| vec![Rational::zero(); n]);
        Frame::with_base_point(self.var_names.clone(), self.vector_fields(), point)
    }

    /// Canonical text; `parse_frame(&doc.to_text()) == Ok(doc)`.
    pub fn to_text(&self) -> String {
        let mut out = format!("vars {}\n", self.var_names.join(" "));
        for f in &self.fields {
            out.push_str(&format!("field {} = {}\n", f.name, self.terms_text(&f.terms)));
        }
        match &self.weights {
            None => {}
            Some(WeightsSetting::Auto) => out.push_str("weights auto\n"),
            Some(WeightsSetting::Explicit(w)) => {
                let w: Vec<String> = w.iter().map(u32::to_string).collect();
                out.push_str(&format!("weights {}\n", w.join(",")));
            }
        }
        if let Some(p) = &self.point {
            let p: Vec<String> = p.iter().map(Rational::to_string).collect();
            out.push_str(&format!("point {}\n", p.join(",")));
        }
        out
    }

    fn terms_text(&self, terms: &[Term]) -> String {
        if terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, t) in terms.iter().enumerate() {
            let neg = t.coeff.is_negative();
            match (i, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let abs = t.coeff.abs();
            if !abs.is_one() {
                out.push_str(&abs.to_string());
                out.push(' ');
            }
            for &(v, k) in &t.factors {
                out.push_str(&self.var_names[v]);
                if k != 1 {
                    out.push_str(&format!("^{k}"));
                }
                out.push(' ');
            }
            out.push_str("d/d");
            out.push_str(&self.var_names[t.direction]);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Deriv(String),
    Slash,
    Caret,
    Plus,
    Minus,
    Comma,
    Eq,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    col: usize,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, column, message: message.into() }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn lex(line_no: usize, text: &str, offset: usize) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = offset + i + 1;
        if c.is_whitespace() || c == '*' {
            i += 1;
            continue;
        }
        if c == '#' {
            break;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && (chars[i] == '.' || chars[i] == 'e' || chars[i] == 'E') {
                return Err(err(line_no, col, "non-rational literal: use integers or n/d fractions"));
            }
            let digits: String = chars[start..i].iter().collect();
            out.push(Spanned { tok: Tok::Num(digits.parse().expect("digits")), col });
            continue;
        }
        if is_ident_start(c) {
            let start = i;
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            let ident: String = chars[start..i].iter().collect();
            if ident == "d"
                && chars.get(i) == Some(&'/')
                && chars.get(i + 1) == Some(&'d')
                && chars.get(i + 2).is_some_and(|&c| is_ident_start(c))
            {
                i += 2;
                let vstart = i;
                while i < chars.len() && is_ident_char(chars[i]) {
                    i += 1;
                }
                out.push(Spanned { tok: Tok::Deriv(chars[vstart..i].iter().collect()), col });
            } else {
                out.push(Spanned { tok: Tok::Ident(ident), col });
            }
            continue;
        }
        let tok = match c {
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            ',' => Tok::Comma,
            '=' => Tok::Eq,
            '.' => return Err(err(line_no, col, "non-rational literal: use integers or n/d fractions")),
            other => return Err(err(line_no, col, format!("unexpected character `{other}`"))),
        };
        out.push(Spanned { tok, col });
        i += 1;
    }
    Ok(out)
}

struct LineParser<'a> {
    line: usize,
    toks: Vec<Spanned>,
    pos: usize,
    end_col: usize,
    vars: &'a [String],
}

impl<'a> LineParser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |s| s.col)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|s| s.tok.clone());
        self.pos += 1;
        t
    }

    fn error(&self, message: impl Into<String>) -> Error {
        err(self.line, self.col(), message)
    }

    fn var_index(&self, name: &str, col: usize) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| err(self.line, col, format!("undeclared variable `{name}`")))
    }

    fn rational(&mut self) -> Result<Rational> {
        let negative = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        let num = match self.next() {
            Some(Tok::Num(n)) => n,
            _ => {
                self.pos -= 1;
                return Err(self.error("expected a rational number"));
            }
        };
        let value = if self.peek() == Some(&Tok::Slash) {
            self.pos += 1;
            let col = self.col();
            match self.next() {
                Some(Tok::Num(d)) if !d.is_zero() => Rational::new(num, d),
                _ => return Err(err(self.line, col, "expected a positive denominator")),
            }
        } else {
            Rational::from_integer(num)
        };
        Ok(if negative { -value } else { value })
    }

    fn expression(&mut self) -> Result<Vec<Term>> {
        if self.toks.len() == self.pos + 1 && self.peek() == Some(&Tok::Num(BigInt::zero())) {
            self.pos += 1;
            return Ok(Vec::new());
        }
        let mut terms = Vec::new();
        let mut sign = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                -Rational::one()
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                Rational::one()
            }
            _ => Rational::one(),
        };
        loop {
            let mut term = self.term()?;
            term.coeff *= &sign;
            terms.push(term);
            match self.next() {
                None => return Ok(terms),
                Some(Tok::Plus) => sign = Rational::one(),
                Some(Tok::Minus) => sign = -Rational::one(),
                Some(_) => {
                    self.pos -= 1;
                    return Err(self.error("expected `+`, `-` or end of line"));
                }
            }
        }
    }

    fn term(&mut self) -> Result<Term> {
        let coeff = if matches!(self.peek(), Some(Tok::Num(_))) {
            self.rational()?
        } else {
            Rational::one()
        };
        let mut factors = Vec::new();
        loop {
            let col = self.col();
            match self.next() {
                Some(Tok::Ident(name)) => {
                    let v = self.var_index(&name, col)?;
                    let mut k = 1u32;
                    if self.peek() == Some(&Tok::Caret) {
                        self.pos += 1;
                        let ecol = self.col();
                        k = match self.next() {
                            Some(Tok::Num(e)) => u32::try_from(&e)
                                .ok()
                                .filter(|&e| e > 0)
                                .ok_or_else(|| err(self.line, ecol, "exponent must be a positive integer"))?,
                            _ => return Err(err(self.line, ecol, "exponent must be a positive integer")),
                        };
                    }
                    factors.push((v, k));
                }
                Some(Tok::Deriv(name)) => {
                    let direction = self.var_index(&name, col)?;
                    return Ok(Term { coeff, factors, direction });
                }
                _ => {
                    self.pos -= 1;
                    return Err(self.error("expected a variable or `d/d<var>`"));
                }
            }
        }
    }

    fn rational_list(&mut self) -> Result<Vec<Rational>> {
        let mut out = vec![self.rational()?];
        while self.peek() == Some(&Tok::Comma) {
            self.pos += 1;
            out.push(self.rational()?);
        }
        self.expect_end()?;
        Ok(out)
    }

    fn expect_end(&self) -> Result<()> {
        if self.pos < self.toks.len() {
            Err(self.error("unexpected trailing input"))
        } else {
            Ok(())
        }
    }
}

/// Parses a frame document. Errors carry 1-based line and column.
pub fn parse_frame(text: &str) -> Result<FrameDocument> {
    let mut vars: Option<Vec<String>> = None;
    let mut fields: Vec<FieldDef> = Vec::new();
    let mut weights = None;
    let mut point = None;
    let mut last_line = 1;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        last_line = line_no;
        let indent = content.len() - trimmed.len();
        let keyword: String = trimmed.chars().take_while(|c| !c.is_whitespace()).collect();
        let rest_offset = indent + keyword.len();
        let rest = &content[rest_offset..];
        let toks = lex(line_no, rest, rest_offset)?;
        let end_col = content.trim_end().chars().count() + 1;
        let empty: Vec<String> = Vec::new();
        let mut p = LineParser { line: line_no, toks, pos: 0, end_col, vars: vars.as_deref().unwrap_or(&empty) };

        match keyword.as_str() {
            "vars" => {
                if vars.is_some() {
                    return Err(err(line_no, indent + 1, "duplicate `vars` line"));
                }
                let mut names: Vec<String> = Vec::new();
                while let Some(t) = p.toks.get(p.pos).cloned() {
                    match t.tok {
                        Tok::Ident(name) => {
                            if names.contains(&name) {
                                return Err(err(line_no, t.col, format!("variable `{name}` declared twice")));
                            }
                            names.push(name);
                            p.pos += 1;
                        }
                        _ => return Err(err(line_no, t.col, "expected a variable name")),
                    }
                }
                if names.is_empty() {
                    return Err(err(line_no, end_col, "`vars` needs at least one variable"));
                }
                vars = Some(names);
            }
            "field" => {
                if vars.is_none() {
                    return Err(err(line_no, indent + 1, "`vars` must come before fields"));
                }
                let name = match p.next() {
                    Some(Tok::Ident(n)) => n,
                    _ => {
                        p.pos -= 1;
                        return Err(p.error("expected a field name"));
                    }
                };
                if fields.iter().any(|f| f.name == name) {
                    return Err(err(line_no, p.toks[0].col, format!("field `{name}` defined twice")));
                }
                if p.next() != Some(Tok::Eq) {
                    p.pos -= 1;
                    return Err(p.error("expected `=`"));
                }
                if p.peek().is_none() {
                    return Err(p.error("expected an expression"));
                }
                let terms = p.expression()?;
                fields.push(FieldDef { name, terms });
            }
            "weights" => {
                let n = vars.as_ref().map(Vec::len).ok_or_else(|| err(line_no, indent + 1, "`vars` must come first"))?;
                if let Some(Tok::Ident(a)) = p.peek() {
                    if a == "auto" {
                        p.pos += 1;
                        p.expect_end()?;
                        weights = Some(WeightsSetting::Auto);
                        continue;
                    }
                }
                let col = p.col();
                let list = p.rational_list()?;
                let mut ws = Vec::with_capacity(list.len());
                for r in list {
                    let w = (r.is_integer() && r.is_positive())
                        .then(|| u32::try_from(r.to_integer()).ok())
                        .flatten()
                        .ok_or_else(|| err(line_no, col, "weights must be positive integers"))?;
                    ws.push(w);
                }
                if ws.len() != n {
                    return Err(err(line_no, col, format!("expected {n} weights, found {}", ws.len())));
                }
                weights = Some(WeightsSetting::Explicit(ws));
            }
            "point" => {
                let n = vars.as_ref().map(Vec::len).ok_or_else(|| err(line_no, indent + 1, "`vars` must come first"))?;
                let col = p.col();
                let list = p.rational_list()?;
                if list.len() != n {
                    return Err(err(line_no, col, format!("expected {n} coordinates, found {}", list.len())));
                }
                point = Some(list);
            }
            other => {
                return Err(err(line_no, indent + 1, format!("unknown directive `{other}`")));
            }
        }
    }

    let var_names = vars.ok_or_else(|| err(1, 1, "missing `vars` line"))?;
    if fields.len() != var_names.len() {
        return Err(err(
            last_line,
            1,
            format!("field-count mismatch: {} variables but {} fields", var_names.len(), fields.len()),
        ));
    }
    Ok(FrameDocument { var_names, fields, weights, point })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::{frac, int};

    #[test]
    fn parses_e1() {
        let doc = parse_frame("vars x y z\nfield X1 = d/dx\nfield X2 = x d/dy\nfield X3 = y^2 d/dz").unwrap();
        let f = doc.to_frame().unwrap();
        assert_eq!(f.fields()[1], VectorField::along(1, Polynomial::var(3, 0)));
        assert_eq!(f.fields()[2], VectorField::along(2, Polynomial::var(3, 1).pow(2)));
    }

    #[test]
    fn exact_half_in_e2() {
        let f = fixtures::e2();
        let x4 = &f.fields()[3];
        assert_eq!(x4.component(3), &Polynomial::var(4, 1).pow(2).scale(&frac(1, 2)));
        assert_eq!(x4.component(2), &Polynomial::var(4, 0));
    }

    #[test]
    fn undeclared_variable() {
        let e = parse_frame("vars x\nfield X1 = d/dy").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, column: 12, .. }), "{e:?}");
        let e = parse_frame("vars x\nfield X1 = q d/dx").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, column: 12, .. }), "{e:?}");
    }

    #[test]
    fn field_count_mismatch() {
        let e = parse_frame("vars x y\nfield X1 = d/dx").unwrap_err();
        assert!(matches!(e, Error::Parse { ref message, .. } if message.contains("field-count")));
    }

    #[test]
    fn non_rational_literal() {
        let e = parse_frame("vars x\nfield X1 = 0.5 d/dx").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, column: 12, ref message } if message.contains("non-rational")));
    }

    #[test]
    fn syntax_error_position() {
        let e = parse_frame("vars x y\nfield X1 = d/dx +\nfield X2 = d/dy").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e:?}");
        let e = parse_frame("vars x y\nfield X1 = x\nfield X2 = d/dy").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, column: 13, .. }), "{e:?}");
    }

    #[test]
    fn signs_comments_weights_point() {
        let doc = parse_frame(
            "# header\nvars x y   # coords\nfield A = -d/dx - 2/3 x y d/dy\nfield B = 0\nweights 1,2\npoint -1/2, 3\n",
        )
        .unwrap();
        assert_eq!(doc.fields[0].terms[0].coeff, int(-1));
        assert_eq!(doc.fields[0].terms[1].coeff, frac(-2, 3));
        assert!(doc.fields[1].terms.is_empty());
        assert_eq!(doc.weights, Some(WeightsSetting::Explicit(vec![1, 2])));
        assert_eq!(doc.point, Some(vec![frac(-1, 2), int(3)]));
        assert_eq!(parse_frame(&doc.to_text()).unwrap(), doc);
    }

    #[test]
    fn bad_weights() {
        assert!(parse_frame("vars x\nfield A = d/dx\nweights 0").is_err());
        assert!(parse_frame("vars x\nfield A = d/dx\nweights 1,2").is_err());
        assert_eq!(
            parse_frame("vars x\nfield A = d/dx\nweights auto").unwrap().weights,
            Some(WeightsSetting::Auto)
        );
    }

    #[test]
    fn print_round_trips_fixtures() {
        for text in [fixtures::E1, fixtures::E2, fixtures::E3] {
            let doc = parse_frame(text).unwrap();
            assert_eq!(parse_frame(&doc.to_text()).unwrap(), doc);
        }
    }
}
