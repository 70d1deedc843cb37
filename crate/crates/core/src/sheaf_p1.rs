//! Cohomology of monads O(a) → ⊕ O(bᵢ) → O(c) on P¹.
//!
//! The middle cohomology E is read off graded pieces of
//! T = ker β / im α; twists below the range where T is already saturated
//! go through Hom(𝔪^k, T) with 𝔪 = (U, V).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{find_roots, FieldSpec, Scalar};
use crate::linalg::{self, Matrix};
use crate::poly::{gcd_bin, BinaryForm};

/// Three-term complex of line bundles on P¹. `alpha[i]` has degree
/// `b[i] − a` and `beta[i]` has degree `c − b[i]`; either map may be absent.
#[derive(Clone, Debug, PartialEq)]
pub struct MonadP1 {
    pub field: FieldSpec,
    pub a: i64,
    pub b: Vec<i64>,
    pub c: i64,
    pub alpha: Option<Vec<BinaryForm>>,
    pub beta: Option<Vec<BinaryForm>>,
}

/// Degrees of the summands of a bundle on P¹, in descending order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SplittingType {
    parts: Vec<i64>,
}

impl SplittingType {
    pub fn new(mut parts: Vec<i64>) -> SplittingType {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        SplittingType { parts }
    }

    pub fn parts(&self) -> &[i64] {
        &self.parts
    }

    pub fn rank(&self) -> usize {
        self.parts.len()
    }

    pub fn degree(&self) -> i64 {
        self.parts.iter().sum()
    }

    /// h⁰ of the ℓ-twist of ⊕ O(dᵢ).
    pub fn h0(&self, l: i64) -> i64 {
        self.parts.iter().map(|d| (d + l + 1).max(0)).sum()
    }

    /// h¹ of the ℓ-twist of ⊕ O(dᵢ).
    pub fn h1(&self, l: i64) -> i64 {
        self.parts.iter().map(|d| (-d - l - 1).max(0)).sum()
    }
}

impl fmt::Display for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|d| d.to_string()).collect();
        write!(f, "{{{}}}", s.join(","))
    }
}

pub fn is_very_free_splitting(s: &SplittingType) -> bool {
    s.parts.iter().all(|&d| d >= 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ViolationKind {
    Shape,
    CompositionNonzero,
    AlphaNotInjective,
    BetaNotSurjective,
}

/// Why a monad is invalid, with a common root (u : v) when one was found.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonadViolation {
    pub kind: ViolationKind,
    pub message: String,
    pub witness: Option<String>,
}

impl fmt::Display for MonadViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            Some(w) => write!(f, "{}, root {}", self.message, w),
            None => f.write_str(&self.message),
        }
    }
}

fn shape_error(msg: String) -> MonadViolation {
    MonadViolation {
        kind: ViolationKind::Shape,
        message: msg,
        witness: None,
    }
}

/// A projective root of a nonconstant binary form, searched over small
/// extensions for finite fields and over the base field for ℚ.
pub(crate) fn common_root_witness(g: &BinaryForm) -> Option<String> {
    let f = g.field();
    if g.degree() <= 0 {
        return None;
    }
    if f.is_zero(g.coeff(0)) {
        return Some("(1:0)".to_string());
    }
    let u = g.dehomogenize();
    if f.is_finite() {
        let deg = u.degree().unwrap_or(0) as u32;
        let roots = find_roots(&u, deg.max(1)).ok()?;
        let r = roots.first()?;
        let field = &r.field;
        Some(format!("({}:1) over {}", field.format(&r.root), field))
    } else {
        let (r, _) = u.roots().ok()?.into_iter().next()?;
        Some(format!("({}:1)", f.format(&r)))
    }
}

fn gcd_all(forms: &[BinaryForm]) -> Option<BinaryForm> {
    let mut it = forms.iter();
    let first = it.next()?.clone();
    Some(it.fold(first, |acc, x| gcd_bin(&acc, x)))
}

pub fn validate_monad(m: &MonadP1) -> std::result::Result<(), MonadViolation> {
    let f = &m.field;
    let n = m.b.len();
    if n == 0 {
        return Err(shape_error("monad has no middle summands".into()));
    }
    for (name, maps, expected) in [
        (
            "alpha",
            &m.alpha,
            m.b.iter().map(|b| b - m.a).collect::<Vec<_>>(),
        ),
        (
            "beta",
            &m.beta,
            m.b.iter().map(|b| m.c - b).collect::<Vec<_>>(),
        ),
    ] {
        let Some(maps) = maps else { continue };
        if maps.len() != n {
            return Err(shape_error(format!(
                "{name} has {} entries, expected {n}",
                maps.len()
            )));
        }
        for (i, (form, d)) in maps.iter().zip(&expected).enumerate() {
            if form.degree() != *d {
                return Err(shape_error(format!(
                    "{name}[{i}] has degree {}, expected {d}",
                    form.degree()
                )));
            }
            if form.field() != f {
                return Err(shape_error(format!("{name}[{i}] lives over another field")));
            }
        }
    }
    if let (Some(alpha), Some(beta)) = (&m.alpha, &m.beta) {
        let mut sum = BinaryForm::zero(f, m.c - m.a);
        for (x, y) in alpha.iter().zip(beta) {
            sum = sum.add(&x.mul(y)).expect("degrees checked");
        }
        if !sum.is_zero() {
            return Err(MonadViolation {
                kind: ViolationKind::CompositionNonzero,
                message: format!("β∘α = {sum} is not zero"),
                witness: None,
            });
        }
    }
    for (kind, maps, what) in [
        (
            ViolationKind::AlphaNotInjective,
            &m.alpha,
            "α not injective",
        ),
        (
            ViolationKind::BetaNotSurjective,
            &m.beta,
            "β not surjective",
        ),
    ] {
        let Some(maps) = maps else { continue };
        let nonzero: Vec<BinaryForm> = maps.iter().filter(|x| !x.is_zero()).cloned().collect();
        let Some(g) = gcd_all(&nonzero) else {
            return Err(MonadViolation {
                kind,
                message: format!("{what}: all entries zero"),
                witness: None,
            });
        };
        if g.degree() > 0 {
            return Err(MonadViolation {
                kind,
                message: format!("{what}: entries share the factor {g}"),
                witness: common_root_witness(&g),
            });
        }
    }
    Ok(())
}

fn check(m: &MonadP1) -> Result<()> {
    validate_monad(m).map_err(|v| Error::InvalidMonad(v.to_string()))
}

fn forms_dim(d: i64) -> usize {
    (d + 1).max(0) as usize
}

impl MonadP1 {
    pub fn rank(&self) -> usize {
        self.b.len() - self.alpha.is_some() as usize - self.beta.is_some() as usize
    }

    pub fn degree(&self) -> i64 {
        let mut d: i64 = self.b.iter().sum();
        if self.alpha.is_some() {
            d -= self.a;
        }
        if self.beta.is_some() {
            d -= self.c;
        }
        d
    }

    fn image_dim(&self, s: i64) -> usize {
        if self.alpha.is_some() {
            forms_dim(self.a + s)
        } else {
            0
        }
    }
}

/// Writes the matrix of w ↦ p·w (Forms_s → Forms_{s + deg p}) into `m`.
fn put_mul(
    m: &mut Matrix,
    row0: usize,
    col0: usize,
    p: &BinaryForm,
    s: i64,
    sign: &Scalar,
    field: &FieldSpec,
) {
    for j in 0..forms_dim(s) {
        for (t, c) in p.coeffs().iter().enumerate() {
            if field.is_zero(c) {
                continue;
            }
            let x = &mut m[row0 + j + t][col0 + j];
            *x = field.add(x, &field.mul(sign, c));
        }
    }
}

/// dim (ker β)_ℓ − dim (im α)_ℓ.
pub fn quotient_graded_dim(m: &MonadP1, l: i64) -> Result<i64> {
    check(m)?;
    Ok(quotient_dim_unchecked(m, l))
}

fn quotient_dim_unchecked(m: &MonadP1, l: i64) -> i64 {
    let f = &m.field;
    let sizes: Vec<usize> = m.b.iter().map(|b| forms_dim(b + l)).collect();
    let cols: usize = sizes.iter().sum();
    let kernel = match &m.beta {
        Some(beta) => {
            let rows = forms_dim(m.c + l);
            let mut mat = linalg::zeros(f, rows, cols);
            let mut col = 0;
            for ((bi, size), b) in beta.iter().zip(&sizes).zip(&m.b) {
                if !bi.is_zero() {
                    put_mul(&mut mat, 0, col, bi, b + l, &f.one(), f);
                }
                col += size;
            }
            cols - linalg::rank(f, &mat)
        }
        None => cols,
    };
    kernel as i64 - m.image_dim(l) as i64
}

/// Dimension of Hom(𝔪^k, T)_ℓ.
fn hom_dim(m: &MonadP1, l: i64, k: i64) -> i64 {
    let f = &m.field;
    let s = l + k;
    let nb = m.b.len();
    let ku = k as usize;
    let wsize: Vec<usize> = m.b.iter().map(|b| forms_dim(b + s)).collect();
    let wblock: usize = wsize.iter().sum();
    let esize = if m.alpha.is_some() {
        forms_dim(m.a + s + 1)
    } else {
        0
    };
    let cols = (ku + 1) * wblock + ku * esize;
    let brows = if m.beta.is_some() {
        forms_dim(m.c + s)
    } else {
        0
    };
    let rsize: Vec<usize> = m.b.iter().map(|b| forms_dim(b + s + 1)).collect();
    let rblock: usize = rsize.iter().sum();
    let rows = (ku + 1) * brows + ku * rblock;
    let mut mat = linalg::zeros(f, rows, cols);
    let one = f.one();
    let minus = f.from_i64(-1);
    let wcol = |j: usize, i: usize| j * wblock + wsize[..i].iter().sum::<usize>();
    if let Some(beta) = &m.beta {
        for j in 0..=ku {
            for (i, bi) in beta.iter().enumerate() {
                if !bi.is_zero() {
                    put_mul(&mut mat, j * brows, wcol(j, i), bi, m.b[i] + s, &one, f);
                }
            }
        }
    }
    let u = BinaryForm::u(f);
    let v = BinaryForm::v(f);
    let row_base = (ku + 1) * brows;
    for j in 0..ku {
        let ecol = (ku + 1) * wblock + j * esize;
        for i in 0..nb {
            let r0 = row_base + j * rblock + rsize[..i].iter().sum::<usize>();
            put_mul(&mut mat, r0, wcol(j, i), &v, m.b[i] + s, &one, f);
            put_mul(&mut mat, r0, wcol(j + 1, i), &u, m.b[i] + s, &minus, f);
            if let Some(alpha) = &m.alpha {
                if !alpha[i].is_zero() {
                    put_mul(&mut mat, r0, ecol, &alpha[i], m.a + s + 1, &minus, f);
                }
            }
        }
    }
    let nullity = cols - linalg::rank(f, &mat);
    nullity as i64 - ((ku + 1) * m.image_dim(s)) as i64
}

fn saturation_cap(m: &MonadP1) -> i64 {
    m.a.abs() + m.c.abs() + m.b.iter().map(|b| b.abs()).sum::<i64>() + 8
}

/// h⁰(E(ℓ)) as the stabilized dimension of Hom(𝔪^k, T)_ℓ. The scan starts
/// at the first k with ℓ + k ≥ −a − 1.
pub fn h0_twist(m: &MonadP1, l: i64) -> Result<i64> {
    check(m)?;
    h0_unchecked(m, l)
}

fn h0_unchecked(m: &MonadP1, l: i64) -> Result<i64> {
    if m.rank() == 0 || l < -degree_bounds(m).1 - 1 {
        return Ok(0);
    }
    let start = if m.alpha.is_some() {
        (-m.a - 1 - l).max(0)
    } else {
        0
    };
    if start == 0 {
        return Ok(quotient_dim_unchecked(m, l));
    }
    let cap = saturation_cap(m);
    let mut prev = hom_dim(m, l, start);
    let mut k = start + 1;
    while k <= cap {
        let cur = hom_dim(m, l, k);
        if cur == prev {
            return Ok(cur);
        }
        prev = cur;
        k += 1;
    }
    Err(Error::SaturationUnstable { twist: l })
}

/// h⁰ values used to recover a splitting type, plus the Riemann–Roch
/// cross-check twists.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SplittingReport {
    pub splitting: SplittingType,
    pub h0: Vec<(i64, i64)>,
    pub riemann_roch: Vec<(i64, i64, i64)>,
}

pub fn splitting_type(m: &MonadP1) -> Result<SplittingType> {
    Ok(splitting_report(m)?.splitting)
}

/// Window of twists: every summand lies in [dmin, dmax].
fn degree_bounds(m: &MonadP1) -> (i64, i64) {
    let maxb = *m.b.iter().max().unwrap();
    let rank_k = m.b.len() as i64 - m.beta.is_some() as i64;
    let deg_k: i64 = m.b.iter().sum::<i64>() - if m.beta.is_some() { m.c } else { 0 };
    let dmin = deg_k - (rank_k - 1) * maxb;
    let rank = m.rank() as i64;
    let dmax = m.degree() - (rank - 1) * dmin;
    (dmin, dmax)
}

pub fn splitting_report(m: &MonadP1) -> Result<SplittingReport> {
    check(m)?;
    let rank = m.rank() as i64;
    if rank == 0 {
        return Ok(SplittingReport {
            splitting: SplittingType::new(vec![]),
            h0: vec![],
            riemann_roch: vec![],
        });
    }
    let (dmin, dmax) = degree_bounds(m);
    let lo = -dmax - 1;
    let hi = -dmin;
    let mut table: Vec<(i64, i64)> = Vec::new();
    let mut l = hi;
    while l >= lo - 1 {
        let h = h0_unchecked(m, l)?;
        table.push((l, h));
        if h == 0 {
            break;
        }
        l -= 1;
    }
    let (last, hlast) = *table.last().unwrap();
    if hlast != 0 {
        return Err(Error::WindowAssertion(format!(
            "h0 at twist {last} is {hlast}, expected 0"
        )));
    }
    table.reverse();
    let h = |l: i64| -> i64 { table.iter().find(|(x, _)| *x == l).map_or(0, |(_, v)| *v) };
    let delta = |l: i64| h(l) - h(l - 1);
    if delta(hi) != rank {
        return Err(Error::WindowAssertion(format!(
            "first difference at twist {hi} is {}, expected rank {rank}",
            delta(hi)
        )));
    }
    let mut parts = Vec::new();
    for d in (dmin..=dmax).rev() {
        let count = delta(-d) - delta(-d - 1);
        if count < 0 {
            return Err(Error::WindowAssertion(format!(
                "negative multiplicity for degree {d}"
            )));
        }
        parts.extend(std::iter::repeat(d).take(count as usize));
    }
    let splitting = SplittingType::new(parts);
    if splitting.rank() as i64 != rank || splitting.degree() != m.degree() {
        return Err(Error::Verification(format!(
            "recovered {splitting} has rank {} and degree {}, expected {rank} and {}",
            splitting.rank(),
            splitting.degree(),
            m.degree()
        )));
    }
    for &(l, v) in &table {
        if splitting.h0(l) != v {
            return Err(Error::Verification(format!(
                "reconstruction mismatch at twist {l}: {} vs {v}",
                splitting.h0(l)
            )));
        }
    }
    let mut rr = Vec::new();
    for l in hi + 1..=hi + 5 {
        let v = h0_unchecked(m, l)?;
        let chi = m.degree() + rank * (l + 1);
        if v - splitting.h1(l) != chi || v != splitting.h0(l) {
            return Err(Error::Verification(format!(
                "Riemann–Roch fails at twist {l}: h0 = {v}, h1 = {}, χ = {chi}",
                splitting.h1(l)
            )));
        }
        rr.push((l, v, splitting.h1(l)));
    }
    Ok(SplittingReport {
        splitting,
        h0: table,
        riemann_roch: rr,
    })
}
