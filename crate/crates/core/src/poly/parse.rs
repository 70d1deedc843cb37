//! Recursive-descent parser for polynomial text.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' nat)?
//! atom   := nat | nat '/' nat | var | 'g' | '(' expr ')'
//! var    := 'X' digit+ | 'U' | 'V'
//! ```

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::fields::{FieldSpec, Scalar};

use super::{BinaryForm, MultiPoly};

#[derive(Clone, Copy)]
enum Vars {
    X(usize),
    Uv,
}

impl Vars {
    fn count(self) -> usize {
        match self {
            Vars::X(n) => n,
            Vars::Uv => 2,
        }
    }
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    idx: usize,
    end: usize,
    field: &'a FieldSpec,
    vars: Vars,
}

impl<'a> Parser<'a> {
    fn new(text: &str, field: &'a FieldSpec, vars: Vars) -> Parser<'a> {
        Parser {
            chars: text
                .char_indices()
                .filter(|(_, c)| !c.is_whitespace())
                .collect(),
            idx: 0,
            end: text.len(),
            field,
            vars,
        }
    }

    fn pos(&self) -> usize {
        self.chars.get(self.idx).map_or(self.end, |&(p, _)| p)
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.idx).map(|&(_, c)| c)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    fn nvars(&self) -> usize {
        self.vars.count()
    }

    fn constant(&self, c: Scalar) -> MultiPoly {
        MultiPoly::constant(self.field, self.nvars(), c)
    }

    fn parse_all(&mut self) -> Result<MultiPoly> {
        if self.chars.is_empty() {
            return self.err("empty input");
        }
        let p = self.expr()?;
        if self.idx < self.chars.len() {
            return self.err(format!("unexpected character '{}'", self.peek().unwrap()));
        }
        Ok(p)
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let negate = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if self.eat('^') {
            let Some(e) = self.nat()? else {
                return self.err("expected exponent");
            };
            let e: u32 = match u32::try_from(&e) {
                Ok(e) if e <= 1000 => e,
                _ => return self.err("exponent too large"),
            };
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn nat(&mut self) -> Result<Option<BigInt>> {
        let start = self.idx;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.idx += 1;
        }
        if start == self.idx {
            return Ok(None);
        }
        let s: String = self.chars[start..self.idx]
            .iter()
            .map(|&(_, c)| c)
            .collect();
        Ok(Some(s.parse().unwrap()))
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        let f = self.field;
        let Some(c) = self.peek() else {
            return self.err("unexpected end of input");
        };
        match c {
            '0'..='9' => {
                let n = self.nat()?.unwrap();
                if self.peek() == Some('/') {
                    if !f.is_rational() {
                        return self.err("rational literals are only allowed over Q");
                    }
                    self.idx += 1;
                    let Some(d) = self.nat()? else {
                        return self.err("expected denominator");
                    };
                    if d == BigInt::from(0) {
                        return self.err("zero denominator");
                    }
                    let q = f.div(&f.from_bigint(&n), &f.from_bigint(&d))?;
                    return Ok(self.constant(q));
                }
                Ok(self.constant(f.from_bigint(&n)))
            }
            '(' => {
                self.idx += 1;
                let p = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(p)
            }
            'g' => {
                let Some(g) = f.generator() else {
                    return self.err(format!("'g' is not defined over {f}"));
                };
                self.idx += 1;
                Ok(self.constant(g))
            }
            'X' => {
                let start = self.pos();
                self.idx += 1;
                let Some(i) = self.nat()? else {
                    return self.err("expected variable index after 'X'");
                };
                match self.vars {
                    Vars::X(n) => match usize::try_from(&i) {
                        Ok(i) if i < n => Ok(MultiPoly::var(f, n, i)),
                        _ => Err(Error::Parse {
                            pos: start,
                            msg: format!(
                                "unknown variable X{i} (have X0..X{})",
                                n.saturating_sub(1)
                            ),
                        }),
                    },
                    Vars::Uv => Err(Error::Parse {
                        pos: start,
                        msg: "expected U or V".into(),
                    }),
                }
            }
            'U' | 'V' => match self.vars {
                Vars::Uv => {
                    self.idx += 1;
                    Ok(MultiPoly::var(f, 2, if c == 'U' { 0 } else { 1 }))
                }
                Vars::X(_) => self.err(format!("unknown variable {c}")),
            },
            _ => self.err(format!("unexpected character '{c}'")),
        }
    }
}

/// Parses a homogeneous polynomial in X0..X{nvars−1}.
pub fn parse_poly(text: &str, nvars: usize, field: &FieldSpec) -> Result<MultiPoly> {
    let p = parse_poly_affine(text, nvars, field)?;
    p.check_homogeneous()?;
    Ok(p)
}

/// Parses a polynomial in X0..X{nvars−1} without a homogeneity requirement.
pub fn parse_poly_affine(text: &str, nvars: usize, field: &FieldSpec) -> Result<MultiPoly> {
    Parser::new(text, field, Vars::X(nvars)).parse_all()
}

/// Parses a binary form in U, V. The degree is taken from the text unless
/// the form is zero, in which case `degree` must be given.
pub fn parse_binary_form(text: &str, field: &FieldSpec, degree: Option<i64>) -> Result<BinaryForm> {
    let p = Parser::new(text, field, Vars::Uv).parse_all()?;
    p.check_homogeneous()?;
    let d = match (p.homogeneous_degree(), degree) {
        (Some(d), Some(want)) if d as i64 != want => {
            return Err(Error::Inhomogeneous(d, want.max(0) as u32));
        }
        (Some(d), _) => d as i64,
        (None, Some(want)) => want,
        (None, None) => {
            return Err(Error::InvalidArgument(
                "degree of a zero form is unknown".into(),
            ));
        }
    };
    BinaryForm::from_multipoly(&p, d)
}

/// Parses a curve map "h0;h1;…" of binary forms sharing one degree.
pub fn parse_curve(text: &str, field: &FieldSpec) -> Result<Vec<BinaryForm>> {
    let parts: Vec<&str> = text.split(';').collect();
    let polys = parts
        .iter()
        .map(|s| {
            let p = Parser::new(s, field, Vars::Uv).parse_all()?;
            p.check_homogeneous()?;
            Ok(p)
        })
        .collect::<Result<Vec<_>>>()?;
    let degrees: Vec<u32> = polys
        .iter()
        .filter_map(|p| p.homogeneous_degree())
        .collect();
    let Some(&d) = degrees.first() else {
        return Err(Error::InvalidArgument(
            "curve has only zero components".into(),
        ));
    };
    if degrees.iter().any(|&x| x != d) {
        return Err(Error::InvalidArgument(
            "curve components have mixed degrees".into(),
        ));
    }
    polys
        .iter()
        .map(|p| BinaryForm::from_multipoly(p, d as i64))
        .collect()
}

/// Parses a single field element.
pub fn parse_scalar(text: &str, field: &FieldSpec) -> Result<Scalar> {
    let p = Parser::new(text, field, Vars::X(0)).parse_all()?;
    Ok(p.coeff(&[]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::make_field;

    #[test]
    fn error_positions() {
        let f7 = make_field(7, 1).unwrap();
        match parse_poly("X0 + X9", 4, &f7) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("{other:?}"),
        }
        match parse_poly("X0 + * X1", 4, &f7) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn generator_literal() {
        let f4 = make_field(2, 2).unwrap();
        let p = parse_poly("g*X0 + (g+1)*X1", 2, &f4).unwrap();
        assert_eq!(p.num_terms(), 2);
        assert!(parse_poly("g*X0", 2, &make_field(7, 1).unwrap()).is_err());
    }

    #[test]
    fn fractions_only_over_q() {
        let q = FieldSpec::rational();
        assert_eq!(
            parse_scalar("3/6", &q).unwrap(),
            q.from_ratio(1, 2).unwrap()
        );
        assert!(parse_scalar("3/6", &make_field(7, 1).unwrap()).is_err());
    }

    #[test]
    fn curve_parsing() {
        let f7 = make_field(7, 1).unwrap();
        let h = parse_curve("-U^3-V^3;U^2*V;U*V^2;0", &f7).unwrap();
        assert_eq!(h.len(), 4);
        assert!(h.iter().all(|c| c.degree() == 3));
        assert!(h[3].is_zero());
    }
}
