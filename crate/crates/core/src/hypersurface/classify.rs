use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{FieldSpec, Scalar};
use crate::linalg;
use crate::poly::{affine_solutions, is_unit_ideal, resultant_bin, BinaryForm, MultiPoly};

use super::ProjPoint;

pub const DEFAULT_EXT_CAP: u32 = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SectionTag {
    SmoothCubic,
    NodalIntegral,
    CuspidalIntegral,
    LineConicTransverse,
    LineConicTangent,
    ThreeLinesTriangle,
    ThreeLinesConcurrent,
    LineDoubleLine,
    TripleLine,
}

impl fmt::Display for SectionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Geometric type of a plane cubic over the algebraic closure.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CubicSectionClass {
    pub tag: SectionTag,
    /// The node or cusp of an integral cubic, the common point of three
    /// concurrent lines, or the tangency point of a line and a conic.
    pub singular_point: Option<ProjPoint>,
    /// Degree of the extension of the base field the decision needed.
    pub ext_degree_used: u32,
}

type Normal = Vec<Scalar>;

/// Splits the exponents of `g` into its first `k` variables and the rest and
/// returns the coefficient polynomials (in the first k) of each monomial in
/// the rest.
pub(super) fn coefficients_in_tail(g: &MultiPoly, k: usize) -> Vec<MultiPoly> {
    let f = g.field();
    let mut groups: BTreeMap<Vec<u32>, MultiPoly> = BTreeMap::new();
    for (e, c) in g.terms() {
        let entry = groups
            .entry(e[k..].to_vec())
            .or_insert_with(|| MultiPoly::zero(f, k));
        entry.add_term(e[..k].to_vec(), c);
    }
    groups.into_values().collect()
}

pub(crate) fn linear_form(field: &FieldSpec, n: &[Scalar]) -> MultiPoly {
    MultiPoly::from_terms(
        field,
        3,
        n.iter().enumerate().map(|(i, c)| {
            let mut e = vec![0; 3];
            e[i] = 1;
            (e, c.clone())
        }),
    )
}

/// Lines (normalized normals) dividing a ternary cubic over its own field,
/// with multiplicities, in canonical order.
pub(crate) fn linear_factors(cub: &MultiPoly) -> Result<Vec<(Normal, usize)>> {
    let f = cub.field();
    let mut normals: Vec<Normal> = Vec::new();
    // normals (1, b, c): X0 = −b·Y1 − c·Y2 in the ring (b, c, Y1, Y2)
    let var = |i| MultiPoly::var(f, 4, i);
    let x0 = var(0).mul(&var(2)).add(&var(1).mul(&var(3))).neg();
    let g = cub.substitute(&[x0, var(2), var(3)]);
    for s in affine_solutions(&coefficients_in_tail(&g, 2), 40)? {
        normals.push(vec![f.one(), s[0].clone(), s[1].clone()]);
    }
    // normals (0, 1, c): X1 = −c·Y2 in the ring (c, Y0, Y2)
    let var = |i| MultiPoly::var(f, 3, i);
    let g = cub.substitute(&[var(1), var(0).mul(&var(2)).neg(), var(2)]);
    for s in affine_solutions(&coefficients_in_tail(&g, 1), 40)? {
        normals.push(vec![f.zero(), f.one(), s[0].clone()]);
    }
    if cub.specialize(2, &f.zero()).is_zero() {
        normals.push(vec![f.zero(), f.zero(), f.one()]);
    }
    let mut out = Vec::new();
    for n in normals {
        let l = linear_form(f, &n);
        let mut rest = cub.clone();
        let mut mult = 0;
        while let Ok(q) = rest.div_exact(&l) {
            rest = q;
            mult += 1;
        }
        out.push((n, mult));
    }
    out.sort();
    Ok(out)
}

fn cross(f: &FieldSpec, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let m = |x: &Scalar, y: &Scalar| f.mul(x, y);
    vec![
        f.sub(&m(&a[1], &b[2]), &m(&a[2], &b[1])),
        f.sub(&m(&a[2], &b[0]), &m(&a[0], &b[2])),
        f.sub(&m(&a[0], &b[1]), &m(&a[1], &b[0])),
    ]
}

/// Two points spanning the line with normal n (kernel basis).
pub(crate) fn line_basis(f: &FieldSpec, n: &[Scalar]) -> (Vec<Scalar>, Vec<Scalar>) {
    let ns = linalg::nullspace(f, &vec![n.to_vec()], 3);
    (ns[0].clone(), ns[1].clone())
}

/// The binary form F(U·p + V·q).
pub(crate) fn restrict_to_line(g: &MultiPoly, p: &[Scalar], q: &[Scalar]) -> BinaryForm {
    let f = g.field();
    let h: Vec<BinaryForm> = p
        .iter()
        .zip(q)
        .map(|(a, b)| BinaryForm::new(f, 1, vec![a.clone(), b.clone()]).unwrap())
        .collect();
    let d = g.homogeneous_degree().unwrap_or(0) as i64;
    if g.is_zero() {
        return BinaryForm::zero(f, d);
    }
    g.compose_with_curve(&h).unwrap()
}

/// Char-free discriminant of a ternary quadric: zero iff it is singular.
pub(crate) fn conic_discriminant(q: &MultiPoly) -> Scalar {
    let f = q.field();
    let c = |e: [u32; 3]| q.coeff(&e);
    let (a, b, cc) = (c([2, 0, 0]), c([0, 2, 0]), c([0, 0, 2]));
    let (d, e, g) = (c([1, 1, 0]), c([1, 0, 1]), c([0, 1, 1]));
    let m = |x: &Scalar, y: &Scalar| f.mul(x, y);
    let mut s = m(&f.from_i64(4), &m(&a, &m(&b, &cc)));
    s = f.add(&s, &m(&d, &m(&e, &g)));
    s = f.sub(&s, &m(&a, &m(&g, &g)));
    s = f.sub(&s, &m(&b, &m(&e, &e)));
    f.sub(&s, &m(&cc, &m(&d, &d)))
}

/// β² − 4αγ for αU² + βUV + γV².
pub(crate) fn quadratic_discriminant(q: &BinaryForm) -> Scalar {
    let f = q.field();
    let c = q.coeffs();
    f.sub(
        &f.mul(&c[1], &c[1]),
        &f.mul(&f.from_i64(4), &f.mul(&c[0], &c[2])),
    )
}

fn point_in_base(base: &FieldSpec, field: &FieldSpec, coords: Vec<Scalar>) -> Result<ProjPoint> {
    let p = ProjPoint::new(field, coords)?;
    Ok(p.restrict_to(base)?.unwrap_or(p))
}

fn classify_lines(
    base: &FieldSpec,
    field: &FieldSpec,
    lines: &[(Normal, usize)],
    ext: u32,
) -> Result<CubicSectionClass> {
    let mut mults: Vec<usize> = lines.iter().map(|(_, m)| *m).collect();
    mults.sort_unstable();
    let tag = match mults.as_slice() {
        [3] => SectionTag::TripleLine,
        [1, 2] => SectionTag::LineDoubleLine,
        [1, 1, 1] => {
            let m: linalg::Matrix = lines.iter().map(|(n, _)| n.clone()).collect();
            if field.is_zero(&linalg::determinant(field, &m)) {
                let pt = point_in_base(base, field, cross(field, &lines[0].0, &lines[1].0))?;
                return Ok(CubicSectionClass {
                    tag: SectionTag::ThreeLinesConcurrent,
                    singular_point: Some(pt),
                    ext_degree_used: ext,
                });
            }
            SectionTag::ThreeLinesTriangle
        }
        _ => {
            return Err(Error::Integrity(format!(
                "line multiplicities {mults:?} do not sum to 3"
            )))
        }
    };
    Ok(CubicSectionClass {
        tag,
        singular_point: None,
        ext_degree_used: ext,
    })
}

fn need_ext(base: &FieldSpec, cap: u32, needed: u32) -> Result<()> {
    if base.is_rational() {
        return Err(Error::Unsupported(format!(
            "this cubic needs a degree {needed} extension; only finite fields are extended"
        )));
    }
    if cap < needed {
        return Err(Error::ExtensionCap(format!(
            "plane cubic classification needs an extension of degree {needed}, cap is {cap}"
        )));
    }
    Ok(())
}

/// Rational singular points of a ternary cubic, in canonical order.
pub fn plane_singular_points(cub: &MultiPoly) -> Result<Vec<ProjPoint>> {
    let f = cub.field();
    let mut polys = cub.gradient();
    polys.push(cub.clone());
    let mut out: Vec<ProjPoint> = Vec::new();
    for i in 0..3 {
        let gens: Vec<MultiPoly> = polys.iter().map(|p| p.dehomogenize(i)).collect();
        if is_unit_ideal(&gens)? {
            continue;
        }
        for s in affine_solutions(&gens, 40)? {
            let mut c = s;
            c.insert(i, f.one());
            let p = ProjPoint::new(f, c)?;
            if !out.contains(&p) {
                out.push(p);
            }
        }
    }
    out.sort();
    Ok(out)
}

fn has_singular_scheme(cub: &MultiPoly) -> Result<bool> {
    let mut polys = cub.gradient();
    polys.push(cub.clone());
    for i in 0..3 {
        let gens: Vec<MultiPoly> = polys.iter().map(|p| p.dehomogenize(i)).collect();
        if !is_unit_ideal(&gens)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Classifies a ternary cubic over the algebraic closure of its coefficient
/// field, extending a finite field by degree ≤ 3 when lines have to be
/// exhibited. Over Q the cases needing irrational lines are unsupported.
pub fn classify_plane_cubic(cub: &MultiPoly, ext_cap: u32) -> Result<CubicSectionClass> {
    let base = cub.field().clone();
    if cub.nvars() != 3 || cub.homogeneous_degree() != Some(3) {
        return Err(Error::InvalidArgument(
            "expected a nonzero ternary cubic form".into(),
        ));
    }
    let lines = linear_factors(cub)?;
    let total: usize = lines.iter().map(|(_, m)| m).sum();
    if total == 3 {
        return classify_lines(&base, &base, &lines, 1);
    }
    if total == 1 {
        let (n, _) = &lines[0];
        let conic = cub.div_exact(&linear_form(&base, n))?;
        if !base.is_zero(&conic_discriminant(&conic)) {
            let (p, q) = line_basis(&base, n);
            let r = restrict_to_line(&conic, &p, &q);
            if !base.is_zero(&quadratic_discriminant(&r)) {
                return Ok(CubicSectionClass {
                    tag: SectionTag::LineConicTransverse,
                    singular_point: None,
                    ext_degree_used: 1,
                });
            }
            let ((u, v), _) = r.roots()?.into_iter().next().ok_or_else(|| {
                Error::Integrity("tangent restriction has no rational double root".into())
            })?;
            let coords = (0..3)
                .map(|i| base.add(&base.mul(&u, &p[i]), &base.mul(&v, &q[i])))
                .collect();
            return Ok(CubicSectionClass {
                tag: SectionTag::LineConicTangent,
                singular_point: Some(ProjPoint::new(&base, coords)?),
                ext_degree_used: 1,
            });
        }
        need_ext(&base, ext_cap, 2)?;
        let l2 = base.extension(2)?;
        let mut all = linear_factors(&conic.embed_into(&l2)?)?;
        let ln = n
            .iter()
            .map(|x| crate::fields::embed(&base, x, &l2))
            .collect::<Result<Vec<_>>>()?;
        match all.iter_mut().find(|(m, _)| *m == ln) {
            Some(entry) => entry.1 += 1,
            None => all.push((ln, 1)),
        }
        return classify_lines(&base, &l2, &all, 2);
    }
    if total != 0 {
        return Err(Error::Integrity(format!(
            "linear factors of total degree {total}"
        )));
    }
    if !has_singular_scheme(cub)? {
        return Ok(CubicSectionClass {
            tag: SectionTag::SmoothCubic,
            singular_point: None,
            ext_degree_used: 1,
        });
    }
    let sing = plane_singular_points(cub)?;
    let conjugate_lines = || -> Result<CubicSectionClass> {
        need_ext(&base, ext_cap, 3)?;
        let l3 = base.extension(3)?;
        let all = linear_factors(&cub.embed_into(&l3)?)?;
        classify_lines(&base, &l3, &all, 3)
    };
    let Some(pt) = sing.first() else {
        return conjugate_lines();
    };
    if sing.len() > 1 {
        return Err(Error::Integrity(format!(
            "{} singular points without a rational line",
            sing.len()
        )));
    }
    let m = linalg::complete_basis(&base, pt.coords());
    let g = cub.linear_map(&m);
    let q = BinaryForm::new(
        &base,
        2,
        vec![
            g.coeff(&[1, 2, 0]),
            g.coeff(&[1, 1, 1]),
            g.coeff(&[1, 0, 2]),
        ],
    )?;
    if q.is_zero() {
        return conjugate_lines();
    }
    let c = BinaryForm::new(&base, 3, (0..4).map(|j| g.coeff(&[0, 3 - j, j])).collect())?;
    if c.is_zero() || base.is_zero(&resultant_bin(&q, &c)?) {
        return Err(Error::Integrity(
            "singular cubic without rational lines is reducible".into(),
        ));
    }
    let tag = if base.is_zero(&quadratic_discriminant(&q)) {
        SectionTag::CuspidalIntegral
    } else {
        SectionTag::NodalIntegral
    };
    Ok(CubicSectionClass {
        tag,
        singular_point: Some(pt.clone()),
        ext_degree_used: 1,
    })
}
