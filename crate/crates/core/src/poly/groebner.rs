//! Buchberger's algorithm in degree reverse lexicographic order.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::fields::{FieldSpec, Scalar, UniPoly};
use crate::linalg;

use super::multi::Exponent;
use super::MultiPoly;

/// Exponent vector ordered by degrevlex.
#[derive(Clone, PartialEq, Eq, Debug)]
struct Mon(Exponent);

impl Ord for Mon {
    fn cmp(&self, other: &Self) -> Ordering {
        degrevlex(&self.0, &other.0)
    }
}

impl PartialOrd for Mon {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree reverse lexicographic comparison of exponent vectors.
pub fn degrevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            if x != y {
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

type GPoly = BTreeMap<Mon, Scalar>;

fn to_g(p: &MultiPoly) -> GPoly {
    p.terms()
        .map(|(e, c)| (Mon(e.clone()), c.clone()))
        .collect()
}

fn from_g(field: &FieldSpec, nvars: usize, p: &GPoly) -> MultiPoly {
    MultiPoly::from_terms(
        field,
        nvars,
        p.iter().map(|(m, c)| (m.0.clone(), c.clone())),
    )
}

fn lead(p: &GPoly) -> Option<(&Mon, &Scalar)> {
    p.iter().next_back()
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn lcm(a: &[u32], b: &[u32]) -> Exponent {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn make_monic(f: &FieldSpec, p: &mut GPoly) {
    if let Some((_, c)) = lead(p) {
        let inv = f.inv(c).unwrap();
        if !f.is_one(&inv) {
            for v in p.values_mut() {
                *v = f.mul(v, &inv);
            }
        }
    }
}

/// p −= c·x^shift·g.
fn sub_scaled(f: &FieldSpec, p: &mut GPoly, c: &Scalar, shift: &[u32], g: &GPoly) {
    for (m, gc) in g {
        let e: Exponent = m.0.iter().zip(shift).map(|(a, b)| a + b).collect();
        let key = Mon(e);
        let t = f.mul(c, gc);
        let v = match p.get(&key) {
            Some(old) => f.sub(old, &t),
            None => f.neg(&t),
        };
        if f.is_zero(&v) {
            p.remove(&key);
        } else {
            p.insert(key, v);
        }
    }
}

/// Full reduction of p modulo a list of monic polynomials.
fn reduce(f: &FieldSpec, p: &GPoly, basis: &[GPoly]) -> GPoly {
    let mut rem = GPoly::new();
    let mut p = p.clone();
    while let Some((m, c)) = p.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
        let divisor = basis
            .iter()
            .find(|g| lead(g).is_some_and(|(lm, _)| divides(&lm.0, &m.0)));
        match divisor {
            Some(g) => {
                let lm = &lead(g).unwrap().0 .0;
                let shift: Exponent = m.0.iter().zip(lm).map(|(a, b)| a - b).collect();
                sub_scaled(f, &mut p, &c, &shift, g);
            }
            None => {
                p.remove(&m);
                rem.insert(m, c);
            }
        }
    }
    rem
}

fn s_poly(f: &FieldSpec, a: &GPoly, b: &GPoly) -> GPoly {
    let (la, _) = lead(a).unwrap();
    let (lb, _) = lead(b).unwrap();
    let l = lcm(&la.0, &lb.0);
    let sa: Exponent = l.iter().zip(&la.0).map(|(x, y)| x - y).collect();
    let sb: Exponent = l.iter().zip(&lb.0).map(|(x, y)| x - y).collect();
    let mut out = GPoly::new();
    sub_scaled(f, &mut out, &f.from_i64(-1), &sa, a);
    sub_scaled(f, &mut out, &f.one(), &sb, b);
    out
}

fn is_constant(p: &GPoly) -> bool {
    lead(p).is_some_and(|(m, _)| m.0.iter().all(|&x| x == 0))
}

/// Buchberger with the product criterion; pairs are processed by lcm
/// degree, then lcm exponent lexicographically, then index.
/// Stops early with `{1}` when a nonzero constant appears.
fn buchberger(f: &FieldSpec, gens: &[GPoly]) -> Vec<GPoly> {
    let mut basis: Vec<GPoly> = Vec::new();
    let mut pairs: BTreeSet<(u32, Exponent, usize, usize)> = BTreeSet::new();
    let push = |basis: &mut Vec<GPoly>, pairs: &mut BTreeSet<_>, mut g: GPoly| {
        make_monic(f, &mut g);
        let new = basis.len();
        let lg = lead(&g).unwrap().0 .0.clone();
        for (i, b) in basis.iter().enumerate() {
            let lb = &lead(b).unwrap().0 .0;
            let l = lcm(lb, &lg);
            pairs.insert((l.iter().sum(), l, i, new));
        }
        basis.push(g);
    };
    for g in gens {
        let r = reduce(f, g, &basis);
        if r.is_empty() {
            continue;
        }
        if is_constant(&r) {
            return vec![unit(f, g)];
        }
        push(&mut basis, &mut pairs, r);
    }
    while let Some(pair) = pairs.pop_first() {
        let (_, l, i, j) = pair;
        let (li, lj) = (
            &lead(&basis[i]).unwrap().0 .0,
            &lead(&basis[j]).unwrap().0 .0,
        );
        if li.iter().zip(lj).zip(&l).all(|((a, b), c)| a + b == *c) {
            continue;
        }
        let s = s_poly(f, &basis[i], &basis[j]);
        let r = reduce(f, &s, &basis);
        if r.is_empty() {
            continue;
        }
        if is_constant(&r) {
            return vec![unit(f, &r)];
        }
        push(&mut basis, &mut pairs, r);
    }
    basis
}

fn unit(f: &FieldSpec, like: &GPoly) -> GPoly {
    let n = lead(like).map_or(0, |(m, _)| m.0.len());
    let mut g = GPoly::new();
    g.insert(Mon(vec![0; n]), f.one());
    g
}

/// Minimalizes and inter-reduces; output sorted by leading monomial.
fn auto_reduce(f: &FieldSpec, basis: Vec<GPoly>) -> Vec<GPoly> {
    let mut minimal: Vec<GPoly> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let lg = &lead(g).unwrap().0 .0;
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            let lh = &lead(h).unwrap().0 .0;
            j != i && divides(lh, lg) && (lh != lg || j < i)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut out: Vec<GPoly> = Vec::new();
    for i in 0..minimal.len() {
        let others: Vec<GPoly> = minimal
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let mut r = reduce(f, &minimal[i], &others);
        make_monic(f, &mut r);
        out.push(r);
    }
    out.sort_by(|a, b| lead(a).unwrap().0.cmp(lead(b).unwrap().0));
    out
}

fn check_inputs(gens: &[MultiPoly]) -> Result<Option<(FieldSpec, usize)>> {
    let Some(first) = gens.first() else {
        return Ok(None);
    };
    for g in gens {
        if g.field() != first.field() || g.nvars() != first.nvars() {
            return Err(Error::FieldMismatch(
                "generators live in different rings".into(),
            ));
        }
    }
    Ok(Some((first.field().clone(), first.nvars())))
}

/// Reduced Gröbner basis for degrevlex, sorted by ascending leading monomial.
pub fn groebner_basis(gens: &[MultiPoly]) -> Result<Vec<MultiPoly>> {
    let Some((f, n)) = check_inputs(gens)? else {
        return Ok(Vec::new());
    };
    let g: Vec<GPoly> = gens.iter().map(to_g).collect();
    let basis = auto_reduce(&f, buchberger(&f, &g));
    Ok(basis.iter().map(|p| from_g(&f, n, p)).collect())
}

/// True iff 1 lies in the ideal generated by `gens`.
pub fn is_unit_ideal(gens: &[MultiPoly]) -> Result<bool> {
    let Some((f, _)) = check_inputs(gens)? else {
        return Ok(false);
    };
    let g: Vec<GPoly> = gens.iter().map(to_g).collect();
    Ok(buchberger(&f, &g).iter().any(is_constant))
}

/// Normal form of p modulo a Gröbner basis.
pub fn normal_form(p: &MultiPoly, basis: &[MultiPoly]) -> MultiPoly {
    let g: Vec<GPoly> = basis
        .iter()
        .map(|b| {
            let mut x = to_g(b);
            make_monic(p.field(), &mut x);
            x
        })
        .collect();
    from_g(p.field(), p.nvars(), &reduce(p.field(), &to_g(p), &g))
}

/// Leading exponent of a nonzero polynomial in degrevlex.
pub fn leading_exponent(p: &MultiPoly) -> Option<Exponent> {
    p.terms()
        .map(|(e, _)| e)
        .max_by(|a, b| degrevlex(a, b))
        .cloned()
}

/// Monic generator of I ∩ k[x_var] for a zero-dimensional ideal given by its
/// Gröbner basis, found as the first linear dependency among the normal
/// forms of 1, x, x², … (at most `max_degree` powers).
pub fn eliminant(basis: &[MultiPoly], var: usize, max_degree: usize) -> Result<UniPoly> {
    let first = basis
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty basis".into()))?;
    let f = first.field().clone();
    let n = first.nvars();
    let x = MultiPoly::var(&f, n, var);
    let mut power = MultiPoly::constant(&f, n, f.one());
    let mut forms: Vec<MultiPoly> = Vec::new();
    for d in 0..=max_degree {
        forms.push(normal_form(&power, basis));
        let mut monos: BTreeSet<Exponent> = BTreeSet::new();
        for p in &forms {
            monos.extend(p.terms().map(|(e, _)| e.clone()));
        }
        let monos: Vec<Exponent> = monos.into_iter().collect();
        let m: linalg::Matrix = monos
            .iter()
            .map(|e| forms.iter().map(|p| p.coeff(e)).collect())
            .collect();
        let ns = linalg::nullspace(&f, &m, forms.len());
        if let Some(v) = ns.into_iter().find(|v| !f.is_zero(&v[d])) {
            return Ok(UniPoly::new(&f, v).monic());
        }
        power = power.mul(&x);
    }
    Err(Error::InvalidArgument(format!(
        "no relation of degree ≤ {max_degree}; ideal is not zero-dimensional"
    )))
}

/// Shape-lemma form of a zero-dimensional ideal with respect to `var`: its
/// eliminant u and, for every variable, a polynomial rᵥ with xᵥ ≡ rᵥ(x_var)
/// modulo the ideal. `None` when x_var does not generate the quotient ring.
pub fn shape_form(
    basis: &[MultiPoly],
    var: usize,
    max_degree: usize,
) -> Result<Option<(UniPoly, Vec<UniPoly>)>> {
    let u = eliminant(basis, var, max_degree)?;
    let f = u.field().clone();
    let n = basis[0].nvars();
    let m = u.degree().unwrap_or(0);
    let x = MultiPoly::var(&f, n, var);
    let mut forms = Vec::with_capacity(m);
    let mut power = MultiPoly::constant(&f, n, f.one());
    for _ in 0..m {
        forms.push(normal_form(&power, basis));
        power = power.mul(&x);
    }
    let mut out = Vec::with_capacity(n);
    for v in 0..n {
        if v == var {
            out.push(UniPoly::x(&f));
            continue;
        }
        let target = normal_form(&MultiPoly::var(&f, n, v), basis);
        let mut monos: BTreeSet<Exponent> = target.terms().map(|(e, _)| e.clone()).collect();
        for p in &forms {
            monos.extend(p.terms().map(|(e, _)| e.clone()));
        }
        let mat: linalg::Matrix = monos
            .iter()
            .map(|e| forms.iter().chain([&target]).map(|p| p.coeff(e)).collect())
            .collect();
        let ns = linalg::nullspace(&f, &mat, m + 1);
        let Some(w) = ns.into_iter().find(|w| !f.is_zero(&w[m])) else {
            return Ok(None);
        };
        let scale = f.neg(&f.inv(&w[m])?);
        out.push(UniPoly::new(
            &f,
            w[..m].iter().map(|c| f.mul(c, &scale)).collect(),
        ));
    }
    Ok(Some((u, out)))
}

/// All common zeros in the coefficient field of a system with finitely many
/// solutions over the closure, in lexicographic order. Variables are
/// eliminated one at a time; `max_degree` bounds each eliminant.
pub fn affine_solutions(gens: &[MultiPoly], max_degree: usize) -> Result<Vec<Vec<Scalar>>> {
    let Some((_, n)) = check_inputs(gens)? else {
        return Err(Error::InvalidArgument("empty system".into()));
    };
    let nonzero: Vec<MultiPoly> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    if n == 0 {
        return Ok(if nonzero.is_empty() {
            vec![vec![]]
        } else {
            vec![]
        });
    }
    if nonzero.is_empty() {
        return Err(Error::InvalidArgument(
            "system has infinitely many solutions".into(),
        ));
    }
    let gb = groebner_basis(&nonzero)?;
    if gb.iter().any(|g| g.is_constant()) {
        return Ok(vec![]);
    }
    let u = eliminant(&gb, 0, max_degree)?;
    let mut out = Vec::new();
    for (r, _) in u.roots()? {
        let sub: Vec<MultiPoly> = gb.iter().map(|g| g.specialize(0, &r)).collect();
        for mut rest in affine_solutions(&sub, max_degree)? {
            rest.insert(0, r.clone());
            out.push(rest);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly_affine;

    #[test]
    fn degrevlex_breaks_ties_on_last_variable() {
        // x0*x2 < x1^2 in degrevlex
        assert_eq!(degrevlex(&[1, 0, 1], &[0, 2, 0]), Ordering::Less);
        assert_eq!(degrevlex(&[2, 0, 0], &[0, 2, 0]), Ordering::Greater);
    }

    #[test]
    fn solutions_of_a_small_system() {
        let f7 = crate::fields::make_field(7, 1).unwrap();
        let gens = vec![
            parse_poly_affine("X0^2 - 1", 2, &f7).unwrap(),
            parse_poly_affine("X1^2 - X0", 2, &f7).unwrap(),
        ];
        let sols = affine_solutions(&gens, 10).unwrap();
        // X0 = 1 gives X1 = ±1; X0 = −1 = 6 is not a square mod 7.
        assert_eq!(
            sols,
            vec![vec![f7.one(), f7.one()], vec![f7.one(), f7.from_i64(6)]]
        );
    }

    #[test]
    fn eliminant_of_points() {
        let q = FieldSpec::rational();
        let gens = vec![
            parse_poly_affine("X0^2 - 3*X0 + 2", 2, &q).unwrap(),
            parse_poly_affine("X1 - X0", 2, &q).unwrap(),
        ];
        let gb = groebner_basis(&gens).unwrap();
        let e = eliminant(&gb, 1, 10).unwrap();
        assert_eq!(e, UniPoly::from_i64(&q, &[2, -3, 1]));
    }
}
