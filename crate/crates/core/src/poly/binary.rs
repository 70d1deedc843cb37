use std::fmt;

use crate::error::{Error, Result};
use crate::fields::{embed, FieldSpec, Scalar, UniPoly};
use crate::linalg;

use super::MultiPoly;

/// Binary form of degree d in (U, V); `coeffs[j]` multiplies U^{d−j}V^j.
/// Negative degrees are allowed and carry no coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct BinaryForm {
    field: FieldSpec,
    degree: i64,
    coeffs: Vec<Scalar>,
}

impl BinaryForm {
    pub fn new(field: &FieldSpec, degree: i64, coeffs: Vec<Scalar>) -> Result<BinaryForm> {
        if coeffs.len() as i64 != (degree + 1).max(0) {
            return Err(Error::InvalidArgument(format!(
                "binary form of degree {degree} needs {} coefficients, got {}",
                (degree + 1).max(0),
                coeffs.len()
            )));
        }
        Ok(BinaryForm {
            field: field.clone(),
            degree,
            coeffs,
        })
    }

    pub fn from_i64(field: &FieldSpec, coeffs: &[i64]) -> BinaryForm {
        let c = coeffs.iter().map(|&x| field.from_i64(x)).collect();
        BinaryForm {
            field: field.clone(),
            degree: coeffs.len() as i64 - 1,
            coeffs: c,
        }
    }

    pub fn zero(field: &FieldSpec, degree: i64) -> BinaryForm {
        BinaryForm {
            field: field.clone(),
            degree,
            coeffs: vec![field.zero(); (degree + 1).max(0) as usize],
        }
    }

    pub fn constant(field: &FieldSpec, c: Scalar) -> BinaryForm {
        BinaryForm {
            field: field.clone(),
            degree: 0,
            coeffs: vec![c],
        }
    }

    /// c·U^{d−j}V^j.
    pub fn monomial(field: &FieldSpec, degree: i64, j: usize, c: Scalar) -> BinaryForm {
        let mut b = BinaryForm::zero(field, degree);
        b.coeffs[j] = c;
        b
    }

    pub fn u(field: &FieldSpec) -> BinaryForm {
        BinaryForm::monomial(field, 1, 0, field.one())
    }

    pub fn v(field: &FieldSpec) -> BinaryForm {
        BinaryForm::monomial(field, 1, 1, field.one())
    }

    /// Converts a homogeneous polynomial in two variables (U, V).
    pub fn from_multipoly(p: &MultiPoly, degree: i64) -> Result<BinaryForm> {
        if p.nvars() != 2 {
            return Err(Error::InvalidArgument(
                "binary form needs two variables".into(),
            ));
        }
        let mut b = BinaryForm::zero(p.field(), degree);
        for (e, c) in p.terms() {
            if (e[0] + e[1]) as i64 != degree {
                return Err(Error::Inhomogeneous(e[0] + e[1], degree.max(0) as u32));
            }
            b.coeffs[e[1] as usize] = c.clone();
        }
        Ok(b)
    }

    pub fn to_multipoly(&self) -> MultiPoly {
        MultiPoly::from_terms(
            &self.field,
            2,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(j, c)| (vec![(self.degree as usize - j) as u32, j as u32], c.clone())),
        )
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> &Scalar {
        &self.coeffs[j]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| self.field.is_zero(c))
    }

    pub fn add(&self, other: &BinaryForm) -> Result<BinaryForm> {
        if self.degree != other.degree {
            return Err(Error::InvalidArgument(format!(
                "adding binary forms of degrees {} and {}",
                self.degree, other.degree
            )));
        }
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| f.add(a, b))
            .collect();
        Ok(BinaryForm {
            field: f.clone(),
            degree: self.degree,
            coeffs,
        })
    }

    pub fn sub(&self, other: &BinaryForm) -> Result<BinaryForm> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> BinaryForm {
        self.scale(&self.field.from_i64(-1))
    }

    pub fn scale(&self, c: &Scalar) -> BinaryForm {
        let f = &self.field;
        BinaryForm {
            field: f.clone(),
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|x| f.mul(x, c)).collect(),
        }
    }

    pub fn mul(&self, other: &BinaryForm) -> BinaryForm {
        let f = &self.field;
        let degree = self.degree + other.degree;
        let mut out = BinaryForm::zero(f, degree);
        if self.degree < 0 || other.degree < 0 {
            return out;
        }
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out.coeffs[i + j] = f.add(&out.coeffs[i + j], &f.mul(a, b));
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> BinaryForm {
        let mut out = BinaryForm::constant(&self.field, self.field.one());
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    pub fn eval(&self, u: &Scalar, v: &Scalar) -> Scalar {
        let f = &self.field;
        let d = self.degree.max(0) as u64;
        self.coeffs
            .iter()
            .enumerate()
            .fold(f.zero(), |acc, (j, c)| {
                let t = f.mul(c, &f.mul(&f.pow(u, d - j as u64), &f.pow(v, j as u64)));
                f.add(&acc, &t)
            })
    }

    /// F(U, 1) as a polynomial in U.
    pub fn dehomogenize(&self) -> UniPoly {
        if self.degree < 0 {
            return UniPoly::zero(&self.field);
        }
        UniPoly::new(&self.field, self.coeffs.iter().rev().cloned().collect())
    }

    /// Largest m with V^m | F (`None` for zero).
    pub fn v_valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !self.field.is_zero(c))
    }

    /// Largest m with U^m | F (`None` for zero).
    pub fn u_valuation(&self) -> Option<usize> {
        self.coeffs
            .iter()
            .rev()
            .position(|c| !self.field.is_zero(c))
    }

    /// Scales so the first nonzero coefficient is 1.
    pub fn monic(&self) -> BinaryForm {
        match self.coeffs.iter().find(|c| !self.field.is_zero(c)) {
            Some(c) => self.scale(&self.field.inv(c).unwrap()),
            None => self.clone(),
        }
    }

    /// F(aU + bV, cU + dV).
    pub fn reparametrize(&self, a: &Scalar, b: &Scalar, c: &Scalar, d: &Scalar) -> BinaryForm {
        let f = &self.field;
        let l1 = BinaryForm::new(f, 1, vec![a.clone(), b.clone()]).unwrap();
        let l2 = BinaryForm::new(f, 1, vec![c.clone(), d.clone()]).unwrap();
        let deg = self.degree.max(0) as u32;
        let mut out = BinaryForm::zero(f, self.degree);
        for (j, coef) in self.coeffs.iter().enumerate() {
            if f.is_zero(coef) {
                continue;
            }
            let t = l1.pow(deg - j as u32).mul(&l2.pow(j as u32)).scale(coef);
            out = out.add(&t).unwrap();
        }
        out
    }

    /// Exact division by a nonzero form dividing `self`.
    pub fn div_exact(&self, d: &BinaryForm) -> Result<BinaryForm> {
        let q = self.to_multipoly().div_exact(&d.to_multipoly())?;
        if q.is_zero() {
            return Ok(BinaryForm::zero(&self.field, self.degree - d.degree));
        }
        BinaryForm::from_multipoly(&q, self.degree - d.degree)
    }

    pub fn embed_into(&self, target: &FieldSpec) -> Result<BinaryForm> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| embed(&self.field, c, target))
            .collect::<Result<Vec<_>>>()?;
        BinaryForm::new(target, self.degree, coeffs)
    }

    /// Projective roots (u : v) in the form's own field, normalized so the
    /// first nonzero coordinate is 1, with multiplicities.
    pub fn roots(&self) -> Result<Vec<((Scalar, Scalar), usize)>> {
        let f = &self.field;
        let mut out = Vec::new();
        let vv = self
            .v_valuation()
            .ok_or_else(|| Error::InvalidArgument("roots of the zero binary form".into()))?;
        let g = self.dehomogenize();
        for (r, m) in g.roots()? {
            out.push(((r, f.one()), m));
        }
        out.sort();
        if vv > 0 {
            out.insert(0, ((f.one(), f.zero()), vv));
        }
        Ok(out)
    }

    pub fn format(&self) -> String {
        if self.degree < 0 {
            return "0".to_string();
        }
        self.to_multipoly().format_with(&["U", "V"])
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format())
    }
}

impl fmt::Debug for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "BinaryForm[{}; deg {}]({})",
            self.field, self.degree, self
        )
    }
}

/// Monic gcd of two binary forms, computed on the dehomogenization at V = 1
/// with the V-power content tracked separately.
pub fn gcd_bin(a: &BinaryForm, b: &BinaryForm) -> BinaryForm {
    let f = a.field();
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    let m = a.v_valuation().unwrap().min(b.v_valuation().unwrap());
    let g = a.dehomogenize().gcd(&b.dehomogenize());
    let e = g.degree().unwrap();
    let mut coeffs = vec![f.zero(); e + m + 1];
    for (i, c) in g.coeffs().iter().enumerate() {
        coeffs[m + e - i] = c.clone();
    }
    BinaryForm::new(f, (e + m) as i64, coeffs).unwrap()
}

/// Sylvester resultant of two nonzero binary forms.
pub fn resultant_bin(q: &BinaryForm, c: &BinaryForm) -> Result<Scalar> {
    if q.is_zero() || c.is_zero() {
        return Err(Error::InvalidArgument("resultant of a zero form".into()));
    }
    let f = q.field();
    let (m, n) = (q.degree() as usize, c.degree() as usize);
    let size = m + n;
    let mut s = linalg::zeros(f, size, size);
    for r in 0..n {
        for (j, x) in q.coeffs().iter().enumerate() {
            s[r][r + j] = x.clone();
        }
    }
    for r in 0..m {
        for (j, x) in c.coeffs().iter().enumerate() {
            s[n + r][r + j] = x.clone();
        }
    }
    Ok(linalg::determinant(f, &s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::make_field;

    #[test]
    fn gcd_with_zero_is_monic_input() {
        let f7 = make_field(7, 1).unwrap();
        let a = BinaryForm::from_i64(&f7, &[0, 3, 6]);
        assert_eq!(
            gcd_bin(&a, &BinaryForm::zero(&f7, 4)),
            BinaryForm::from_i64(&f7, &[0, 1, 2])
        );
    }

    #[test]
    fn dehomogenize_reads_u_powers() {
        let q = FieldSpec::rational();
        // U^2 + 2UV + 3V^2 -> U^2 + 2U + 3
        let b = BinaryForm::from_i64(&q, &[1, 2, 3]);
        assert_eq!(b.dehomogenize(), UniPoly::from_i64(&q, &[3, 2, 1]));
    }

    #[test]
    fn roots_include_infinity() {
        let f7 = make_field(7, 1).unwrap();
        // U*V^2: double root (1:0), simple root (0:1)
        let b = BinaryForm::from_i64(&f7, &[0, 0, 1, 0]);
        let r = b.roots().unwrap();
        assert_eq!(r[0], ((f7.one(), f7.zero()), 2));
        assert_eq!(r[1], ((f7.zero(), f7.one()), 1));
    }
}
