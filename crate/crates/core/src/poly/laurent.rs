use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::fields::{FieldSpec, Scalar};

use super::BinaryForm;

/// Homogeneous Laurent polynomial in (U, V): every term c·U^i·V^j has
/// i + j equal to the total degree. Keys are (i, j).
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentForm {
    field: FieldSpec,
    degree: i64,
    terms: BTreeMap<(i64, i64), Scalar>,
}

impl LaurentForm {
    pub fn zero(field: &FieldSpec, degree: i64) -> LaurentForm {
        LaurentForm {
            field: field.clone(),
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// c·U^i·V^j.
    pub fn monomial(field: &FieldSpec, c: Scalar, i: i64, j: i64) -> LaurentForm {
        let mut out = LaurentForm::zero(field, i + j);
        out.add_term(i, j, &c);
        out
    }

    /// Sum of integer-coefficient monomials c·U^i·V^j; all must share i + j.
    pub fn from_terms(field: &FieldSpec, terms: &[(i64, i64, i64)]) -> Result<LaurentForm> {
        let (_, i0, j0) = *terms
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty Laurent term list".into()))?;
        let mut out = LaurentForm::zero(field, i0 + j0);
        for &(c, i, j) in terms {
            if i + j != out.degree {
                return Err(Error::Inhomogeneous(
                    (i0 + j0).unsigned_abs() as u32,
                    (i + j).unsigned_abs() as u32,
                ));
            }
            out.add_term(i, j, &field.from_i64(c));
        }
        Ok(out)
    }

    pub fn from_binary(b: &BinaryForm) -> LaurentForm {
        let d = b.degree();
        let mut out = LaurentForm::zero(b.field(), d);
        for (j, c) in b.coeffs().iter().enumerate() {
            out.add_term(d - j as i64, j as i64, c);
        }
        out
    }

    fn add_term(&mut self, i: i64, j: i64, c: &Scalar) {
        let f = &self.field;
        let s = match self.terms.get(&(i, j)) {
            Some(v) => f.add(v, c),
            None => c.clone(),
        };
        if f.is_zero(&s) {
            self.terms.remove(&(i, j));
        } else {
            self.terms.insert((i, j), s);
        }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, i64), &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: i64, j: i64) -> Scalar {
        self.terms
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn add(&self, other: &LaurentForm) -> Result<LaurentForm> {
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::InvalidArgument(format!(
                "adding Laurent forms of degrees {} and {}",
                self.degree, other.degree
            )));
        }
        let mut out = if self.is_zero() {
            other.clone()
        } else {
            self.clone()
        };
        let src = if self.is_zero() { self } else { other };
        for (&(i, j), c) in &src.terms {
            out.add_term(i, j, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &LaurentForm) -> Result<LaurentForm> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> LaurentForm {
        self.scale(&self.field.from_i64(-1))
    }

    pub fn scale(&self, c: &Scalar) -> LaurentForm {
        let mut out = LaurentForm::zero(&self.field, self.degree);
        for (&(i, j), x) in &self.terms {
            out.add_term(i, j, &self.field.mul(x, c));
        }
        out
    }

    pub fn mul(&self, other: &LaurentForm) -> LaurentForm {
        let f = &self.field;
        let mut out = LaurentForm::zero(f, self.degree + other.degree);
        for (&(i1, j1), a) in &self.terms {
            for (&(i2, j2), b) in &other.terms {
                out.add_term(i1 + i2, j1 + j2, &f.mul(a, b));
            }
        }
        out
    }

    pub fn mul_binary(&self, b: &BinaryForm) -> LaurentForm {
        self.mul(&LaurentForm::from_binary(b))
    }

    /// Multiplies by U^{−i}·V^{−j}.
    pub fn div_monomial(&self, i: i64, j: i64) -> LaurentForm {
        let mut out = LaurentForm::zero(&self.field, self.degree - i - j);
        for (&(a, b), c) in &self.terms {
            out.add_term(a - i, b - j, c);
        }
        out
    }

    /// The polynomial form, if no negative exponent occurs.
    pub fn to_binary(&self) -> Option<BinaryForm> {
        if self.terms.keys().any(|&(i, j)| i < 0 || j < 0) {
            return None;
        }
        let mut b = BinaryForm::zero(&self.field, self.degree);
        if self.degree < 0 {
            return Some(b);
        }
        let mut coeffs = b.coeffs().to_vec();
        for (&(_, j), c) in &self.terms {
            coeffs[j as usize] = c.clone();
        }
        b = BinaryForm::new(&self.field, self.degree, coeffs).ok()?;
        Some(b)
    }
}

impl fmt::Display for LaurentForm {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return out.write_str("0");
        }
        let f = &self.field;
        let mut first = true;
        for (&(i, j), c) in self.terms.iter().rev() {
            let s = f.format(c);
            let (neg, mag) = match s.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, s),
            };
            let mag = if f.format_is_compound(c) && !neg {
                format!("({mag})")
            } else {
                mag
            };
            let mut factors = Vec::new();
            for (name, e) in [("U", i), ("V", j)] {
                match e {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            let body = if factors.is_empty() {
                mag
            } else if mag == "1" {
                factors.join("*")
            } else {
                format!("{mag}*{}", factors.join("*"))
            };
            if first {
                if neg {
                    out.write_str("-")?;
                }
            } else {
                out.write_str(if neg { " - " } else { " + " })?;
            }
            out.write_str(&body)?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "LaurentForm[{}; deg {}]({})",
            self.field, self.degree, self
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_division_and_back() {
        let q = FieldSpec::rational();
        let x = LaurentForm::from_terms(&q, &[(1, 2, -4), (-1, 1, -3)]).unwrap();
        assert_eq!(x.degree(), -2);
        let p = x.mul_binary(&BinaryForm::monomial(&q, 4, 4, q.one()));
        assert_eq!(
            p.to_binary().unwrap(),
            BinaryForm::from_i64(&q, &[1, -1, 0])
        );
        assert_eq!(p.div_monomial(0, 4), x);
    }

    #[test]
    fn display_negative_exponents() {
        let q = FieldSpec::rational();
        let x = LaurentForm::from_terms(&q, &[(-1, 0, -2)]).unwrap();
        assert_eq!(x.to_string(), "-V^-2");
    }
}
