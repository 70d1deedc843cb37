//! Univariate polynomials over a [`FieldSpec`] and root finding.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{FieldSpec, Scalar};
use crate::error::{Error, Result};

/// Default element-count budget for exhaustive root scans.
pub const DEFAULT_SCAN_BUDGET: u64 = 1_000_000;

/// Dense polynomial, low degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    field: FieldSpec,
    coeffs: Vec<Scalar>,
}

impl UniPoly {
    pub fn new(field: &FieldSpec, mut coeffs: Vec<Scalar>) -> UniPoly {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        UniPoly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn from_i64(field: &FieldSpec, coeffs: &[i64]) -> UniPoly {
        UniPoly::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn zero(field: &FieldSpec) -> UniPoly {
        UniPoly::new(field, Vec::new())
    }

    pub fn constant(field: &FieldSpec, c: Scalar) -> UniPoly {
        UniPoly::new(field, vec![c])
    }

    pub fn x(field: &FieldSpec) -> UniPoly {
        UniPoly::new(field, vec![field.zero(), field.one()])
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new(
            f,
            (0..n)
                .map(|i| f.add(&self.coeff(i), &other.coeff(i)))
                .collect(),
        )
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new(
            f,
            (0..n)
                .map(|i| f.sub(&self.coeff(i), &other.coeff(i)))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Scalar) -> UniPoly {
        UniPoly::new(
            &self.field,
            self.coeffs.iter().map(|x| self.field.mul(x, c)).collect(),
        )
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero(&self.field);
        }
        let f = &self.field;
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(a, b));
            }
        }
        UniPoly::new(f, out)
    }

    /// Quotient and remainder; errors on division by zero.
    pub fn div_rem(&self, d: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        let f = &self.field;
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = f.inv(d.leading().unwrap())?;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((UniPoly::zero(f), self.clone()));
        }
        let mut q = vec![f.zero(); r.len() - dd];
        for shift in (0..r.len() - dd).rev() {
            let top = &r[shift + dd];
            if f.is_zero(top) {
                continue;
            }
            let factor = f.mul(top, &lead_inv);
            for (j, c) in d.coeffs.iter().enumerate() {
                r[shift + j] = f.sub(&r[shift + j], &f.mul(&factor, c));
            }
            q[shift] = factor;
        }
        Ok((UniPoly::new(f, q), UniPoly::new(f, r)))
    }

    pub fn rem(&self, d: &UniPoly) -> Result<UniPoly> {
        Ok(self.div_rem(d)?.1)
    }

    pub fn monic(&self) -> UniPoly {
        match self.leading() {
            None => self.clone(),
            Some(l) => self.scale(&self.field.inv(l).expect("nonzero leading coefficient")),
        }
    }

    /// Monic gcd (zero iff both inputs are zero).
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    pub fn derivative(&self) -> UniPoly {
        let f = &self.field;
        UniPoly::new(
            f,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| f.mul(&f.from_i64(i as i64), c))
                .collect(),
        )
    }

    /// self^e mod m.
    pub fn pow_mod(&self, mut e: u64, m: &UniPoly) -> Result<UniPoly> {
        let mut result = UniPoly::constant(&self.field, self.field.one()).rem(m)?;
        let mut b = self.rem(m)?;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&b).rem(m)?;
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b).rem(m)?;
            }
        }
        Ok(result)
    }

    /// Image of this polynomial in a larger field of the same characteristic.
    pub fn embed_into(&self, target: &FieldSpec) -> Result<UniPoly> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| super::embed(&self.field, c, target))
            .collect::<Result<Vec<_>>>()?;
        Ok(UniPoly::new(target, coeffs))
    }

    /// Multiplicity of `r` as a root.
    pub fn multiplicity(&self, r: &Scalar) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let lin = UniPoly::new(&self.field, vec![self.field.neg(r), self.field.one()]);
        let mut cur = self.clone();
        let mut m = 0;
        loop {
            let (q, rem) = cur.div_rem(&lin).expect("linear divisor");
            if !rem.is_zero() {
                return m;
            }
            m += 1;
            cur = q;
        }
    }

    /// Distinct roots in the polynomial's own field, in canonical order,
    /// with multiplicities. Finite fields use gcd with x^q − x followed by a
    /// deterministic equal-degree split (shifts tried in canonical order);
    /// over ℚ the rational-root test is used.
    pub fn roots(&self) -> Result<Vec<(Scalar, usize)>> {
        if self.is_zero() {
            return Err(Error::InvalidArgument(
                "roots of the zero polynomial".into(),
            ));
        }
        let f = &self.field;
        let mut out: Vec<Scalar> = if f.is_rational() {
            rational_roots(self)?
        } else {
            let q = f.order().unwrap();
            if q <= 64 || self.degree() == Some(0) {
                f.elements().filter(|x| f.is_zero(&self.eval(x))).collect()
            } else {
                let m = self.monic();
                let xq = UniPoly::x(f).pow_mod(q, &m)?;
                let g = m.gcd(&xq.sub(&UniPoly::x(f)));
                let mut acc = Vec::new();
                split_linear(&g, &mut acc)?;
                acc
            }
        };
        out.sort();
        out.dedup();
        Ok(out
            .into_iter()
            .map(|r| {
                let m = self.multiplicity(&r);
                (r, m)
            })
            .collect())
    }
}

fn split_linear(g: &UniPoly, out: &mut Vec<Scalar>) -> Result<()> {
    let f = g.field();
    match g.degree() {
        None | Some(0) => return Ok(()),
        Some(1) => {
            out.push(f.neg(&f.div(&g.coeff(0), &g.coeff(1))?));
            return Ok(());
        }
        _ => {}
    }
    let q = f.order().unwrap();
    let p = f.characteristic();
    let x = UniPoly::x(f);
    for a in f.elements().skip(1) {
        let t = if p == 2 {
            // absolute trace of a·x, reduced mod g
            let ax = x.scale(&a).rem(g)?;
            let mut term = ax.clone();
            let mut acc = ax;
            let m = f.ext_degree();
            for _ in 1..m {
                term = term.mul(&term).rem(g)?;
                acc = acc.add(&term);
            }
            acc
        } else {
            let shifted = UniPoly::new(f, vec![a.clone(), f.one()]);
            shifted
                .pow_mod((q - 1) / 2, g)?
                .sub(&UniPoly::constant(f, f.one()))
        };
        let d = g.gcd(&t);
        let dd = d.degree().unwrap_or(0);
        if dd > 0 && dd < g.degree().unwrap() {
            let (rest, _) = g.div_rem(&d)?;
            split_linear(&d, out)?;
            split_linear(&rest.monic(), out)?;
            return Ok(());
        }
    }
    Err(Error::Integrity("equal-degree split failed".into()))
}

fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let n = n.abs();
    let small = n
        .to_u64()
        .filter(|&v| v <= 1_000_000_000_000)
        .ok_or_else(|| {
            Error::Unsupported("rational roots of polynomials with huge coefficients".into())
        })?;
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= small {
        if small % d == 0 {
            out.push(BigInt::from(d));
            out.push(BigInt::from(small / d));
        }
        d += 1;
    }
    Ok(out)
}

fn rational_roots(poly: &UniPoly) -> Result<Vec<Scalar>> {
    // clear denominators
    let mut lcm = BigInt::one();
    for c in poly.coeffs() {
        if let Scalar::Rat(r) = c {
            lcm = lcm.lcm(r.denom());
        }
    }
    let ints: Vec<BigInt> = poly
        .coeffs()
        .iter()
        .map(|c| match c {
            Scalar::Rat(r) => (r * BigRational::from_integer(lcm.clone())).to_integer(),
            Scalar::Fin(_) => unreachable!(),
        })
        .collect();
    let mut out = Vec::new();
    let low = ints.iter().position(|c| !c.is_zero()).unwrap();
    if low > 0 {
        out.push(Scalar::Rat(BigRational::zero()));
    }
    let ints = &ints[low..];
    if ints.len() < 2 {
        return Ok(out);
    }
    let nums = divisors(&ints[0])?;
    let dens = divisors(ints.last().unwrap())?;
    let f = poly.field();
    for n in &nums {
        for d in &dens {
            for s in [BigInt::one(), -BigInt::one()] {
                let cand = Scalar::Rat(BigRational::new(n * &s, d.clone()));
                if f.is_zero(&poly.eval(&cand)) {
                    out.push(cand);
                }
            }
        }
    }
    Ok(out)
}

/// A root located by [`find_roots`].
#[derive(Clone, Debug, PartialEq)]
pub struct FoundRoot {
    pub root: Scalar,
    /// Field the root is expressed in: F_{p^{k·j}} with j = `ext_degree`.
    pub field: FieldSpec,
    /// Degree j of the minimal extension of the base field holding the root.
    pub ext_degree: u32,
    pub multiplicity: usize,
}

/// All roots of `f` over the extensions F_{p^{k·j}}, j ≤ `max_ext`, by
/// exhaustive scan. Each root is reported once, in its minimal field.
pub fn find_roots(f: &UniPoly, max_ext: u32) -> Result<Vec<FoundRoot>> {
    find_roots_with_budget(f, max_ext, DEFAULT_SCAN_BUDGET)
}

pub fn find_roots_with_budget(f: &UniPoly, max_ext: u32, budget: u64) -> Result<Vec<FoundRoot>> {
    let base = f.field();
    if f.is_zero() {
        return Err(Error::InvalidArgument(
            "find_roots of the zero polynomial".into(),
        ));
    }
    if base.is_rational() {
        return Err(Error::Unsupported(
            "exhaustive root scan needs a finite field".into(),
        ));
    }
    let deg = f.degree().unwrap();
    let mut found: Vec<FoundRoot> = Vec::new();
    for j in 1..=max_ext {
        if found.iter().map(|r| r.multiplicity).sum::<usize>() >= deg {
            break;
        }
        let ext = base.extension(j)?;
        let size = ext.order().unwrap();
        if size > budget {
            return Err(Error::ScanBudgetExceeded { size, budget });
        }
        let g = f.embed_into(&ext)?;
        let proper: Vec<u32> = (1..j).filter(|d| j % d == 0).collect();
        for x in ext.elements() {
            if !ext.is_zero(&g.eval(&x)) {
                continue;
            }
            let k = base.ext_degree();
            if proper.iter().any(|&d| ext.in_subfield(&x, k * d)) {
                continue;
            }
            found.push(FoundRoot {
                multiplicity: g.multiplicity(&x),
                root: x,
                field: ext.clone(),
                ext_degree: j,
            });
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::make_field;

    #[test]
    fn roots_of_x2_minus_1_over_f7() {
        let f7 = make_field(7, 1).unwrap();
        let f = UniPoly::from_i64(&f7, &[-1, 0, 1]);
        let r = find_roots(&f, 1).unwrap();
        let vals: Vec<u64> = r.iter().map(|x| f7.code(&x.root)).collect();
        assert_eq!(vals, vec![1, 6]);
    }

    /// Oracle: scan all nine elements of F₉ by hand-written arithmetic.
    #[test]
    fn x2_plus_1_over_f3_needs_f9() {
        let f3 = make_field(3, 1).unwrap();
        let f = UniPoly::from_i64(&f3, &[1, 0, 1]);
        assert!(find_roots(&f, 1).unwrap().is_empty());
        let r = find_roots(&f, 2).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.iter().all(|x| x.ext_degree == 2 && x.multiplicity == 1));
        let f9 = make_field(3, 2).unwrap();
        let independent: Vec<u64> = (0..9u64)
            .filter(|&c| {
                let x = f9.from_code(c);
                f9.is_zero(&f9.add(&f9.mul(&x, &x), &f9.one()))
            })
            .collect();
        let got: Vec<u64> = r.iter().map(|x| f9.code(&x.root)).collect();
        assert_eq!(got, independent);
    }

    #[test]
    fn cube_roots_of_two_over_f7() {
        // 2 is not a cube in F₇ (cubes are 0, ±1); x³ − 2 splits over F₃₄₃.
        let f7 = make_field(7, 1).unwrap();
        let f = UniPoly::from_i64(&f7, &[-2, 0, 0, 1]);
        let r = find_roots(&f, 3).unwrap();
        assert_eq!(r.len(), 3);
        assert!(r.iter().all(|x| x.ext_degree == 3));
        assert!(find_roots(&f, 2).unwrap().is_empty());
    }

    #[test]
    fn scan_budget_is_enforced() {
        let f7 = make_field(7, 1).unwrap();
        let f = UniPoly::from_i64(&f7, &[-2, 0, 0, 1]);
        assert!(matches!(
            find_roots_with_budget(&f, 3, 100),
            Err(Error::ScanBudgetExceeded { .. })
        ));
    }

    #[test]
    fn algebraic_roots_match_scan() {
        for (p, k) in [(5, 2), (2, 6), (7, 3), (3, 5)] {
            let fld = make_field(p, k).unwrap();
            let f = UniPoly::from_i64(&fld, &[3, 1, 0, 2, 1, 1]);
            let scan: Vec<Scalar> = fld.elements().filter(|x| fld.is_zero(&f.eval(x))).collect();
            let alg: Vec<Scalar> = f.roots().unwrap().into_iter().map(|(r, _)| r).collect();
            assert_eq!(scan, alg);
        }
    }

    #[test]
    fn rational_roots_found() {
        let q = FieldSpec::rational();
        // (2x − 3)(x + 1) x = 2x³ − x² − 3x
        let f = UniPoly::from_i64(&q, &[0, -3, -1, 2]);
        let r = f.roots().unwrap();
        let shown: Vec<String> = r.iter().map(|(x, _)| q.format(x)).collect();
        assert_eq!(shown, vec!["-1", "0", "3/2"]);
    }
}
