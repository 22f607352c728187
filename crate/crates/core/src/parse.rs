//! Textual grammar for polynomials: parser and canonical printer.
//!
//! ```text
//! expr  := ['+'|'-'] term (('+'|'-') term)*
//! term  := coeff | coeff '*' monos | monos
//! monos := mono ('*' mono)*
//! mono  := var ('^' uint)?
//! coeff := int | int '/' uint        (fractions over Q only)
//! ```
//!
//! Whitespace is insignificant. The printer emits terms in descending
//! graded-lex order with explicit `*` and no unary `+`, so
//! `parse ∘ print` is the identity on canonical forms.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::{Monomial, Poly, VarSet};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push((i, Tok::Plus));
                i += 1;
            }
            '-' => {
                out.push((i, Tok::Minus));
                i += 1;
            }
            '*' => {
                out.push((i, Tok::Star));
                i += 1;
            }
            '/' => {
                out.push((i, Tok::Slash));
                i += 1;
            }
            '^' => {
                out.push((i, Tok::Caret));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Num(text[start..i].to_string())));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
            }
            other => {
                return Err(Error::Syntax {
                    pos: i,
                    msg: format!("unexpected character `{other}`"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser<'a, F: Field> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    field: &'a F,
    vars: &'a VarSet,
    end: usize,
}

impl<'a, F: Field> Parser<'a, F> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(p, _)| *p)
            .unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Poly<F>> {
        let mut acc = Poly::zero(self.field, self.vars);
        let mut sign_neg = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                true
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            let t = self.term()?;
            acc = if sign_neg { acc.sub(&t)? } else { acc.add(&t)? };
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    sign_neg = false;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    sign_neg = true;
                }
                None => break,
                Some(_) => {
                    return Err(Error::Syntax {
                        pos: self.here(),
                        msg: "expected `+` or `-`".into(),
                    })
                }
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly<F>> {
        let coeff = match self.peek() {
            Some(Tok::Num(_)) => Some(self.coeff()?),
            Some(Tok::Minus) => {
                // tolerated inside a term: "-3*x" after a separator
                self.pos += 1;
                let c = self.coeff()?;
                Some(self.field.neg(&c))
            }
            _ => None,
        };
        let mut exps = Monomial::unit(self.vars.len());
        let mut saw_mono = false;
        if coeff.is_some() {
            if matches!(self.peek(), Some(Tok::Star)) {
                self.pos += 1;
                self.monos(&mut exps)?;
                saw_mono = true;
            }
        } else {
            self.monos(&mut exps)?;
            saw_mono = true;
        }
        let c = coeff.unwrap_or_else(|| self.field.one());
        if !saw_mono {
            return Ok(Poly::constant(self.field, self.vars, c));
        }
        Ok(Poly::term(self.field, self.vars, &exps.0, c))
    }

    fn coeff(&mut self) -> Result<F::Elem> {
        let pos = self.here();
        let n = match self.bump() {
            Some(Tok::Num(n)) => n,
            _ => {
                return Err(Error::Syntax {
                    pos,
                    msg: "expected a number".into(),
                })
            }
        };
        if matches!(self.peek(), Some(Tok::Slash)) {
            self.pos += 1;
            let dpos = self.here();
            let d = match self.bump() {
                Some(Tok::Num(d)) => d,
                _ => {
                    return Err(Error::Syntax {
                        pos: dpos,
                        msg: "expected a denominator".into(),
                    })
                }
            };
            return self.field.from_fraction_strs(&n, &d);
        }
        self.field.from_int_str(&n)
    }

    fn monos(&mut self, exps: &mut Monomial) -> Result<()> {
        loop {
            let pos = self.here();
            let name = match self.bump() {
                Some(Tok::Ident(id)) => id,
                _ => {
                    return Err(Error::Syntax {
                        pos,
                        msg: "expected a variable".into(),
                    })
                }
            };
            let idx = self
                .vars
                .index_of(&name)
                .ok_or(Error::UnknownVariable(name))?;
            let mut e: u32 = 1;
            if matches!(self.peek(), Some(Tok::Caret)) {
                self.pos += 1;
                let epos = self.here();
                match self.bump() {
                    Some(Tok::Num(n)) => {
                        e = n.parse().map_err(|_| Error::Syntax {
                            pos: epos,
                            msg: "exponent too large".into(),
                        })?;
                    }
                    _ => {
                        return Err(Error::Syntax {
                            pos: epos,
                            msg: "expected an exponent".into(),
                        })
                    }
                }
            }
            let total = exps.0[idx] as u32 + e;
            exps.0[idx] = u16::try_from(total).map_err(|_| Error::Syntax {
                pos,
                msg: "exponent too large".into(),
            })?;
            if matches!(self.peek(), Some(Tok::Star)) {
                // lookahead: `*` may start a new factor only if an ident follows
                if let Some((_, Tok::Ident(_))) = self.toks.get(self.pos + 1) {
                    self.pos += 1;
                    continue;
                }
            }
            return Ok(());
        }
    }
}

/// Parse `text` into a canonical polynomial.
pub fn parse<F: Field>(text: &str, vars: &VarSet, field: &F) -> Result<Poly<F>> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(Error::Syntax {
            pos: 0,
            msg: "empty input".into(),
        });
    }
    let mut p = Parser {
        toks,
        pos: 0,
        field,
        vars,
        end: text.len(),
    };
    let poly = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Syntax {
            pos: p.here(),
            msg: "trailing input".into(),
        });
    }
    Ok(poly)
}

/// Canonical printer: descending graded-lex, explicit `*`, no unary `+`.
pub fn print<F: Field>(p: &Poly<F>) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let field = p.field();
    let vars = p.vars();
    let mut out = String::new();
    for (idx, (m, c)) in p.terms().collect::<Vec<_>>().into_iter().rev().enumerate() {
        let (neg, mag) = field.display_parts(c);
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else if neg {
            out.push('-');
        } else {
            out.push('+');
        }
        let mut factors: Vec<String> = Vec::new();
        let is_unit_mag = mag == "1";
        let mono_empty = m.degree() == 0;
        if !is_unit_mag || mono_empty {
            factors.push(mag);
        }
        for (i, &e) in m.0.iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(vars.name(i).to_string()),
                _ => factors.push(format!("{}^{}", vars.name(i), e)),
            }
        }
        out.push_str(&factors.join("*"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    #[test]
    fn parses_the_spec_examples() {
        let f = Rationals;
        let v = VarSet::xyz();
        let p = parse("x^2+2*x*y", &v, &f).unwrap();
        assert_eq!(p.num_terms(), 2);
        let terms: Vec<_> = p
            .terms()
            .map(|(m, c)| (m.0.to_vec(), f.format(c)))
            .collect();
        assert!(terms.contains(&(vec![2, 0, 0], "1".to_string())));
        assert!(terms.contains(&(vec![1, 1, 0], "2".to_string())));

        let zero = parse("0", &v, &f).unwrap();
        assert!(zero.is_zero());

        let big = parse("x^2+y^2+z^2-2*x*y-2*x*z-2*y*z", &v, &f).unwrap();
        assert_eq!(big.num_terms(), 6);
        assert_eq!(big.degree(), Some(2));
    }

    #[test]
    fn parse_errors_carry_positions() {
        let f = Rationals;
        let v = VarSet::xyz();
        match parse("x^2 + $", &v, &f) {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 6),
            other => panic!("expected syntax error, got {other:?}"),
        }
        assert!(matches!(
            parse("x+w", &v, &f),
            Err(Error::UnknownVariable(w)) if w == "w"
        ));
    }

    #[test]
    fn fractions_only_over_the_rationals() {
        let v = VarSet::xyz();
        let q = parse("1/2*x", &v, &Rationals).unwrap();
        assert_eq!(print(&q), "1/2*x");
        let fp = PrimeField::new(101).unwrap();
        assert!(matches!(
            parse("1/2*x", &v, &fp),
            Err(Error::NotRepresentable(_))
        ));
    }

    #[test]
    fn print_parse_round_trip() {
        let f = Rationals;
        let v = VarSet::xyz();
        for s in [
            "x^2-2*x*y-2*x*z+y^2-2*y*z+z^2",
            "-x+y",
            "3",
            "0",
            "x^12",
            "2/3*x*y-7",
        ] {
            let p = parse(s, &v, &f).unwrap();
            let printed = print(&p);
            let q = parse(&printed, &v, &f).unwrap();
            assert_eq!(p, q, "round trip failed for {s}: printed {printed}");
        }
    }
}
