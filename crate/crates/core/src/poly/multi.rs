use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::fields::{embed, FieldSpec, Scalar};
use crate::linalg::{self, Matrix};

use super::BinaryForm;

pub type Exponent = Vec<u32>;

/// Sparse polynomial in `nvars` variables over a field. No zero
/// coefficients are stored.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    field: FieldSpec,
    nvars: usize,
    terms: BTreeMap<Exponent, Scalar>,
}

impl MultiPoly {
    pub fn zero(field: &FieldSpec, nvars: usize) -> MultiPoly {
        MultiPoly {
            field: field.clone(),
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &FieldSpec, nvars: usize, c: Scalar) -> MultiPoly {
        MultiPoly::monomial(field, vec![0; nvars], c)
    }

    pub fn monomial(field: &FieldSpec, exp: Exponent, c: Scalar) -> MultiPoly {
        let nvars = exp.len();
        let mut p = MultiPoly::zero(field, nvars);
        if !field.is_zero(&c) {
            p.terms.insert(exp, c);
        }
        p
    }

    pub fn var(field: &FieldSpec, nvars: usize, i: usize) -> MultiPoly {
        let mut e = vec![0; nvars];
        e[i] = 1;
        MultiPoly::monomial(field, e, field.one())
    }

    pub fn from_terms<I>(field: &FieldSpec, nvars: usize, terms: I) -> MultiPoly
    where
        I: IntoIterator<Item = (Exponent, Scalar)>,
    {
        let mut p = MultiPoly::zero(field, nvars);
        for (e, c) in terms {
            debug_assert_eq!(e.len(), nvars);
            p.add_term(e, &c);
        }
        p
    }

    /// Adds c·x^e in place.
    pub fn add_term(&mut self, e: Exponent, c: &Scalar) {
        if self.field.is_zero(c) {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                let s = self.field.add(v, c);
                if self.field.is_zero(&s) {
                    self.terms.remove(&e);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(e, c.clone());
            }
        }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &[u32]) -> Scalar {
        self.terms
            .get(e)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    /// Maximum total degree; `None` for zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Common degree of all terms; `None` for zero or inhomogeneous input.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let d = it.next()?;
        it.all(|x| x == d).then_some(d)
    }

    pub(crate) fn check_homogeneous(&self) -> Result<()> {
        let mut degrees = self.terms.keys().map(|e| e.iter().sum::<u32>());
        if let Some(d) = degrees.next() {
            if let Some(other) = degrees.find(|&x| x != d) {
                return Err(Error::Inhomogeneous(d.min(other), d.max(other)));
            }
        }
        Ok(())
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[i]).max()
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MultiPoly {
        self.map_coeffs(|c| self.field.neg(c))
    }

    pub fn scale(&self, c: &Scalar) -> MultiPoly {
        if self.field.is_zero(c) {
            return MultiPoly::zero(&self.field, self.nvars);
        }
        self.map_coeffs(|x| self.field.mul(x, c))
    }

    fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> MultiPoly {
        MultiPoly::from_terms(
            &self.field,
            self.nvars,
            self.terms.iter().map(|(e, c)| (e.clone(), f(c))),
        )
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        let f = &self.field;
        let mut out = MultiPoly::zero(f, self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, &f.mul(c1, c2));
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> MultiPoly {
        let mut out = MultiPoly::constant(&self.field, self.nvars, self.field.one());
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Formal partial derivative ∂/∂x_i (coefficients multiplied in the field).
    pub fn partial_derivative(&self, i: usize) -> MultiPoly {
        let f = &self.field;
        MultiPoly::from_terms(
            f,
            self.nvars,
            self.terms.iter().filter(|(e, _)| e[i] > 0).map(|(e, c)| {
                let mut e2 = e.clone();
                e2[i] -= 1;
                (e2, f.mul(c, &f.from_i64(e[i] as i64)))
            }),
        )
    }

    pub fn gradient(&self) -> Vec<MultiPoly> {
        (0..self.nvars)
            .map(|i| self.partial_derivative(i))
            .collect()
    }

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        let f = &self.field;
        let mut acc = f.zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t = f.mul(&t, &f.pow(x, k as u64));
                }
            }
            acc = f.add(&acc, &t);
        }
        acc
    }

    /// Composition f(g₀, …, g_{n−1}) with polynomials sharing a variable set.
    pub fn substitute(&self, subs: &[MultiPoly]) -> MultiPoly {
        assert_eq!(subs.len(), self.nvars);
        let f = &self.field;
        let m = subs.first().map_or(0, |s| s.nvars);
        let mut powers: Vec<Vec<MultiPoly>> = subs
            .iter()
            .map(|s| vec![MultiPoly::constant(f, m, f.one()), s.clone()])
            .collect();
        let mut out = MultiPoly::zero(f, m);
        for (e, c) in &self.terms {
            let mut t = MultiPoly::constant(f, m, c.clone());
            for (i, &k) in e.iter().enumerate() {
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap().mul(&subs[i]);
                    powers[i].push(next);
                }
                if k > 0 {
                    t = t.mul(&powers[i][k as usize]);
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// f(M·X): x_i ↦ Σ_j M[i][j]·x_j. M must be square and invertible.
    pub fn linear_substitute(&self, m: &Matrix) -> Result<MultiPoly> {
        let n = self.nvars;
        if m.len() != n || m.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument(
                "substitution matrix has wrong shape".into(),
            ));
        }
        if self.field.is_zero(&linalg::determinant(&self.field, m)) {
            return Err(Error::SingularMatrix);
        }
        Ok(self.linear_map(m))
    }

    /// f(M·Y) for an arbitrary n×m matrix (no invertibility requirement).
    pub fn linear_map(&self, m: &Matrix) -> MultiPoly {
        let f = &self.field;
        let cols = m.first().map_or(0, |r| r.len());
        let subs: Vec<MultiPoly> = m
            .iter()
            .map(|row| {
                MultiPoly::from_terms(
                    f,
                    cols,
                    row.iter().enumerate().map(|(j, c)| {
                        let mut e = vec![0; cols];
                        e[j] = 1;
                        (e, c.clone())
                    }),
                )
            })
            .collect();
        self.substitute(&subs)
    }

    /// The binary form f(h₀(U,V), …, hₙ(U,V)).
    pub fn compose_with_curve(&self, h: &[BinaryForm]) -> Result<BinaryForm> {
        if h.len() != self.nvars {
            return Err(Error::InvalidArgument(format!(
                "curve has {} components, polynomial has {} variables",
                h.len(),
                self.nvars
            )));
        }
        let d = h.first().map_or(0, |c| c.degree());
        if h.iter().any(|c| c.degree() != d) {
            return Err(Error::InvalidArgument(
                "curve components have mixed degrees".into(),
            ));
        }
        let deg = self
            .homogeneous_degree()
            .or_else(|| self.is_zero().then_some(0))
            .ok_or(Error::Inhomogeneous(0, 0))? as i64;
        let f = &self.field;
        let mut out = BinaryForm::zero(f, deg * d);
        let mut powers: Vec<Vec<BinaryForm>> = h
            .iter()
            .map(|c| vec![BinaryForm::constant(f, f.one()), c.clone()])
            .collect();
        for (e, c) in &self.terms {
            let mut t = BinaryForm::constant(f, c.clone());
            for (i, &k) in e.iter().enumerate() {
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().unwrap().mul(&h[i]);
                    powers[i].push(next);
                }
                if k > 0 {
                    t = t.mul(&powers[i][k as usize]);
                }
            }
            out = out.add(&t)?;
        }
        Ok(out)
    }

    /// Sets variable i to 1 and drops it.
    pub fn dehomogenize(&self, i: usize) -> MultiPoly {
        self.specialize(i, &self.field.one())
    }

    /// Sets variable i to `value` and drops it.
    pub fn specialize(&self, i: usize, value: &Scalar) -> MultiPoly {
        let f = &self.field;
        MultiPoly::from_terms(
            f,
            self.nvars - 1,
            self.terms.iter().map(|(e, c)| {
                let mut e2 = e.clone();
                let k = e2.remove(i);
                (e2, f.mul(c, &f.pow(value, k as u64)))
            }),
        )
    }

    pub fn embed_into(&self, target: &FieldSpec) -> Result<MultiPoly> {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| Ok((e.clone(), embed(&self.field, c, target)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(MultiPoly::from_terms(target, self.nvars, terms))
    }

    /// Exact quotient by a nonzero polynomial that divides `self`; multivariate
    /// long division in lex order. Errors when the division is not exact.
    pub fn div_exact(&self, d: &MultiPoly) -> Result<MultiPoly> {
        let f = &self.field;
        let (lead_e, lead_c) = d.terms.iter().next_back().ok_or(Error::DivisionByZero)?;
        let lead_inv = f.inv(lead_c)?;
        let mut rem = self.clone();
        let mut quo = MultiPoly::zero(f, self.nvars);
        while let Some((e, c)) = rem
            .terms
            .iter()
            .next_back()
            .map(|(e, c)| (e.clone(), c.clone()))
        {
            if e.iter().zip(lead_e).any(|(a, b)| a < b) {
                return Err(Error::InvalidArgument(
                    "polynomial division is not exact".into(),
                ));
            }
            let qe: Exponent = e.iter().zip(lead_e).map(|(a, b)| a - b).collect();
            let qc = f.mul(&c, &lead_inv);
            let t = MultiPoly::monomial(f, qe, qc);
            rem = rem.sub(&t.mul(d));
            quo = quo.add(&t);
        }
        Ok(quo)
    }

    /// Prints with custom variable names.
    pub fn format_with(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let f = &self.field;
        let mut out = String::new();
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let (negative, mag) = match c {
                Scalar::Rat(r) if r < &num_rational::BigRational::from_integer(0.into()) => {
                    (true, f.neg(c))
                }
                _ => (false, c.clone()),
            };
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        names[i].to_string()
                    } else {
                        format!("{}^{}", names[i], k)
                    }
                })
                .collect();
            let coeff = f.format(&mag);
            let coeff = if f.format_is_compound(&mag) {
                format!("({coeff})")
            } else {
                coeff
            };
            let body = if mono.is_empty() {
                coeff
            } else if f.is_one(&mag) {
                mono.join("*")
            } else {
                format!("{}*{}", coeff, mono.join("*"))
            };
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("X{i}")).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        f.write_str(&self.format_with(&refs))
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{}]({})", self.field, self)
    }
}
