//! Text syntax for elements and classes.
//!
//! An element is a `+`/`-` separated sum of terms; a term is a product of
//! factors joined by `*`, `∧` or `&`. A factor is a generator name with an
//! optional `^k` power, a rational literal `p/q`, `i`, `zeta<n>` or
//! `zeta<n>^k`, a JSON scalar object `{"order": n, "coeffs": [...]}`, or a
//! parenthesized scalar. Generator names shadow the scalar names.

use crate::error::{Error, Result};
use crate::gca::{Algebra, Element, Monomial};
use crate::scalar::{parse_rational, Field, Scalar};

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Number(String),
    Ident(String),
    Json(String),
    Plus,
    Minus,
    Times,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1;
            }
            '-' => {
                out.push(Token::Minus);
                i += 1;
            }
            '*' | '∧' | '&' => {
                out.push(Token::Times);
                i += 1;
            }
            '^' => {
                out.push(Token::Caret);
                i += 1;
            }
            '(' => {
                out.push(Token::LParen);
                i += 1;
            }
            ')' => {
                out.push(Token::RParen);
                i += 1;
            }
            '{' => {
                let start = i;
                let mut depth = 0;
                while i < chars.len() {
                    match chars[i] {
                        '{' => depth += 1,
                        '}' => depth -= 1,
                        _ => {}
                    }
                    i += 1;
                    if depth == 0 {
                        break;
                    }
                }
                if depth != 0 {
                    return Err(Error::Parse(format!("unbalanced `{{` in `{s}`")));
                }
                out.push(Token::Json(chars[start..i].iter().collect()));
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                // a denominator only when a digit follows the slash
                if i + 1 < chars.len() && chars[i] == '/' && chars[i + 1].is_ascii_digit() {
                    i += 1;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                out.push(Token::Number(chars[start..i].iter().collect()));
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                    i += 1;
                }
                out.push(Token::Ident(chars[start..i].iter().collect()));
            }
            other => return Err(Error::Parse(format!("unexpected character `{other}` in `{s}`"))),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    algebra: &'a Algebra,
    source: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} in `{}`", self.source))
    }

    fn field(&self) -> &Field {
        self.algebra.field()
    }

    fn sum(&mut self) -> Result<Element> {
        let mut out = self.algebra.zero();
        let mut sign = match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                -1
            }
            Some(Token::Plus) => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            out = if sign < 0 { &out - &t } else { &out + &t };
            match self.peek() {
                Some(Token::Plus) => sign = 1,
                Some(Token::Minus) => sign = -1,
                None | Some(Token::RParen) => return Ok(out),
                Some(_) => return Err(self.error("expected `+` or `-`")),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<Element> {
        let mut out = self.factor()?;
        // juxtaposition multiplies, as in `2 x1 x2`
        loop {
            match self.peek() {
                Some(Token::Times) => self.pos += 1,
                Some(Token::Ident(_) | Token::Number(_) | Token::Json(_) | Token::LParen) => {}
                _ => return Ok(out),
            }
            out = out.wedge(&self.factor()?)?;
        }
    }

    fn exponent(&mut self) -> Result<Option<i64>> {
        if self.peek() != Some(&Token::Caret) {
            return Ok(None);
        }
        self.pos += 1;
        let neg = if self.peek() == Some(&Token::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        match self.next() {
            Some(Token::Number(n)) if !n.contains('/') => {
                let k: i64 = n.parse().map_err(|_| self.error("exponent too large"))?;
                Ok(Some(if neg { -k } else { k }))
            }
            _ => Err(self.error("expected an integer exponent")),
        }
    }

    fn factor(&mut self) -> Result<Element> {
        match self.next() {
            Some(Token::Ident(name)) => {
                if let Ok(idx) = self.algebra.index_of(&name) {
                    let g = self.algebra.generator(idx);
                    return match self.exponent()? {
                        None => Ok(g),
                        Some(k) if k >= 0 => Ok(g.pow(k as u32)),
                        Some(_) => Err(self.error("negative power of a generator")),
                    };
                }
                let s = self.named_scalar(&name)?;
                Ok(self.algebra.scalar(s))
            }
            Some(Token::Minus) => Ok(-self.factor()?),
            _ => {
                self.pos -= 1;
                let s = self.scalar_atom()?;
                Ok(self.algebra.scalar(s))
            }
        }
    }

    fn named_scalar(&mut self, name: &str) -> Result<Scalar> {
        let base = if name == "i" {
            self.field().imaginary_unit()?
        } else if let Some(n) = name.strip_prefix("zeta").and_then(|n| n.parse::<u32>().ok()) {
            self.field().root_of_unity(n, 1)?
        } else {
            return Err(Error::UnknownGenerator(name.to_string()));
        };
        Ok(match self.exponent()? {
            None => base,
            Some(k) if k >= 0 => base.pow(k as u32),
            Some(k) => base.inv().expect("root of unity").pow(k.unsigned_abs() as u32),
        })
    }

    fn scalar_atom(&mut self) -> Result<Scalar> {
        let base = match self.next() {
            Some(Token::Number(n)) => self.field().from_rational(parse_rational(&n)?),
            Some(Token::Json(j)) => {
                let s: Scalar = serde_json::from_str(&j)?;
                self.field().embed(&s)?
            }
            Some(Token::LParen) => {
                let inner = self.sum()?;
                if self.next() != Some(Token::RParen) {
                    return Err(self.error("expected `)`"));
                }
                if inner.terms().keys().any(|m| !m.indices().is_empty()) {
                    return Err(self.error("parenthesized expressions must be scalars"));
                }
                inner.coefficient(&Monomial::one())
            }
            Some(Token::Ident(name)) => self.named_scalar(&name)?,
            _ => return Err(self.error("expected a factor")),
        };
        Ok(match self.exponent()? {
            None => base,
            Some(k) if k >= 0 => base.pow(k as u32),
            Some(k) => base
                .inv()
                .ok_or_else(|| self.error("division by zero"))?
                .pow(k.unsigned_abs() as u32),
        })
    }
}

/// Parses an element of `algebra`.
pub fn parse_element(algebra: &Algebra, s: &str) -> Result<Element> {
    let tokens = tokenize(s)?;
    if tokens.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser {
        tokens,
        pos: 0,
        algebra,
        source: s,
    };
    let e = p.sum()?;
    if p.pos < p.tokens.len() {
        return Err(p.error("trailing input"));
    }
    Ok(e)
}

/// Splits `"[x1],[x1],[x2]"` into element texts; brackets are optional.
pub fn split_classes(s: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut current = String::new();
    for c in s.chars() {
        match c {
            '[' | '{' | '(' => depth += 1,
            ']' | '}' | ')' => depth -= 1,
            _ => {}
        }
        if depth < 0 {
            return Err(Error::Parse(format!("unbalanced brackets in `{s}`")));
        }
        if c == ',' && depth == 0 {
            out.push(std::mem::take(&mut current));
        } else {
            current.push(c);
        }
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced brackets in `{s}`")));
    }
    out.push(current);
    out.into_iter()
        .map(|item| {
            let t = item.trim();
            let t = t
                .strip_prefix('[')
                .and_then(|r| r.strip_suffix(']'))
                .unwrap_or(t)
                .trim();
            if t.is_empty() {
                Err(Error::Parse(format!("empty class in `{s}`")))
            } else {
                Ok(t.to_string())
            }
        })
        .collect()
}

pub fn parse_elements(algebra: &Algebra, s: &str) -> Result<Vec<Element>> {
    split_classes(s)?.iter().map(|t| parse_element(algebra, t)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn products_and_sums() {
        let c = catalog::kt();
        let a = c.algebra();
        let e = parse_element(a, "x1∧x4 + x2*x3").unwrap();
        assert_eq!(e, catalog::omega_kt(&c));
        let e = parse_element(a, "-2/3 x1 & x2 - x3^1").unwrap();
        let want = &a
            .word(&["x1", "x2"])
            .unwrap()
            .scale(&a.field().from_rational(crate::scalar::rational(-2, 3)))
            - &a.named("x3").unwrap();
        assert_eq!(e, want);
        assert_eq!(parse_element(a, "x2 x1").unwrap(), -a.word(&["x1", "x2"]).unwrap());
        assert!(parse_element(a, "x1 +").is_err());
        assert!(parse_element(a, "x1 )").is_err());
        assert_eq!(parse_element(a, "x2*x1").unwrap(), -a.word(&["x1", "x2"]).unwrap());
        assert!(parse_element(a, "x1^2").unwrap().is_zero());
    }

    #[test]
    fn scalars() {
        let c = catalog::heisenberg_c();
        let a = c.algebra();
        let w = parse_element(a, "i*mu*mubar + nu*theta + nubar*thetabar + i*eta*etabar").unwrap();
        assert_eq!(w, catalog::omega_m(&c).unwrap());
        let z = parse_element(a, "zeta3^2").unwrap();
        assert_eq!(z, a.scalar(a.field().root_of_unity(3, 2).unwrap()));
        let j = parse_element(a, r#"{"order": 4, "coeffs": ["0", "1"]} * mu"#).unwrap();
        assert_eq!(j, parse_element(a, "i*mu").unwrap());
        assert_eq!(parse_element(a, "(1/2 + 1/2)*mu").unwrap(), a.named("mu").unwrap());
        assert!(parse_element(a, "(mu)*nu").is_err());
        assert!(matches!(parse_element(a, "i*q9"), Err(Error::UnknownGenerator(_))));
        assert!(matches!(
            parse_element(catalog::kt().algebra(), "i"),
            Err(Error::MissingRootsOfUnity { .. })
        ));
    }

    #[test]
    fn class_lists() {
        assert_eq!(split_classes("[x1],[x1], [x2]").unwrap(), vec!["x1", "x1", "x2"]);
        assert_eq!(
            split_classes("nu*etabar,mu*mubar").unwrap(),
            vec!["nu*etabar", "mu*mubar"]
        );
        assert!(split_classes("[x1],[x2").is_err());
        assert!(split_classes("[x1],,x2").is_err());
    }
}
