use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{FieldSpec, Scalar, UniPoly};
use crate::hypersurface::{
    classify_plane_cubic, plane_section, tangent_hyperplane, Hypersurface, ProjPoint, SectionTag,
};
use crate::linalg::{self, Matrix};
use crate::poly::{parse_poly, BinaryForm, MultiPoly};

/// A coordinate change X = M·Y taking a nodal plane cubic to
/// Y₀Y₁Y₂ + Y₁³ + Y₂³.
#[derive(Clone, Debug, PartialEq)]
pub struct PlaneNormalForm {
    pub field: FieldSpec,
    pub ext_degree: u32,
    pub change: Matrix,
    pub normal: MultiPoly,
}

fn mat(rows: [[Scalar; 3]; 3]) -> Matrix {
    rows.into_iter().map(|r| r.to_vec()).collect()
}

/// The least root of x³ − a in the field.
fn cube_root(field: &FieldSpec, a: &Scalar) -> Result<Option<Scalar>> {
    let p = UniPoly::new(
        field,
        vec![field.neg(a), field.zero(), field.zero(), field.one()],
    );
    Ok(p.roots()?.into_iter().next().map(|(r, _)| r))
}

fn try_normalize(cub: &MultiPoly, node: &[Scalar]) -> Result<Option<Matrix>> {
    let f = cub.field();
    let m1 = linalg::complete_basis(f, node);
    let g = cub.linear_map(&m1);
    let q = BinaryForm::new(
        f,
        2,
        vec![
            g.coeff(&[1, 2, 0]),
            g.coeff(&[1, 1, 1]),
            g.coeff(&[1, 0, 2]),
        ],
    )?;
    let roots = q.roots()?;
    if roots.len() != 2 {
        return Ok(None);
    }
    let ((u1, v1), _) = &roots[0];
    let ((u2, v2), _) = &roots[1];
    // (v₁X₁ − u₁X₂)(v₂X₁ − u₂X₂) = k⁻¹·q
    let prod = [
        f.mul(v1, v2),
        f.neg(&f.add(&f.mul(v1, u2), &f.mul(u1, v2))),
        f.mul(u1, u2),
    ];
    let pos = (0..3).find(|&i| !f.is_zero(&prod[i])).unwrap();
    let k = f.div(q.coeff(pos), &prod[pos])?;
    let n = mat([
        [f.one(), f.zero(), f.zero()],
        [f.zero(), v1.clone(), f.neg(u1)],
        [f.zero(), v2.clone(), f.neg(u2)],
    ]);
    let mut m2 = linalg::inverse(f, &n)?;
    m2[0][0] = f.inv(&k)?;
    let g = g.linear_map(&m2);
    let alpha: Vec<Scalar> = (0..4).map(|j| g.coeff(&[0, 3 - j, j])).collect();
    let m3 = mat([
        [f.one(), f.neg(&alpha[1]), f.neg(&alpha[2])],
        [f.zero(), f.one(), f.zero()],
        [f.zero(), f.zero(), f.one()],
    ]);
    if f.is_zero(&alpha[0]) || f.is_zero(&alpha[3]) {
        return Err(Error::Integrity(
            "tangent directions meet the cubic part: not integral".into(),
        ));
    }
    let (Some(l), Some(m)) = (
        cube_root(f, &f.inv(&alpha[0])?)?,
        cube_root(f, &f.inv(&alpha[3])?)?,
    ) else {
        return Ok(None);
    };
    let m4 = mat([
        [f.inv(&f.mul(&l, &m))?, f.zero(), f.zero()],
        [f.zero(), l, f.zero()],
        [f.zero(), f.zero(), m],
    ]);
    let total = linalg::mat_mul(
        f,
        &linalg::mat_mul(f, &m1, &m2),
        &linalg::mat_mul(f, &m3, &m4),
    );
    Ok(Some(total))
}

/// Normal form of a nodal plane cubic with its node, over the smallest
/// extension (degree ≤ `ext_cap`) containing the tangent directions and the
/// cube roots that normalize the cubic coefficients.
pub fn nodal_normal_form(
    cub: &MultiPoly,
    node: &ProjPoint,
    ext_cap: u32,
) -> Result<PlaneNormalForm> {
    let base = cub.field().clone();
    let class = classify_plane_cubic(cub, ext_cap)?;
    let node_here = node.embed_into(&base).or_else(|_| {
        node.restrict_to(&base)?.ok_or_else(|| {
            Error::InvalidArgument("node is not defined over the cubic's field".into())
        })
    })?;
    if class.tag != SectionTag::NodalIntegral || class.singular_point.as_ref() != Some(&node_here) {
        return Err(Error::InvalidArgument(format!(
            "expected a nodal integral cubic with node {node_here}, got {:?} at {:?}",
            class.tag, class.singular_point
        )));
    }
    let caps: Vec<u32> = if base.is_finite() {
        (1..=ext_cap).collect()
    } else {
        vec![1]
    };
    for j in caps {
        let l = base.extension(j)?;
        let c = cub.embed_into(&l)?;
        let p = node_here.embed_into(&l)?;
        if let Some(change) = try_normalize(&c, p.coords())? {
            let normal = parse_poly("X0*X1*X2 + X1^3 + X2^3", 3, &l)?;
            if c.linear_map(&change) != normal {
                return Err(Error::Integrity("normal form does not re-expand".into()));
            }
            return Ok(PlaneNormalForm {
                field: l,
                ext_degree: j,
                change,
                normal,
            });
        }
    }
    if base.is_rational() {
        return Err(Error::Unsupported(
            "normal form over Q needs irrational roots".into(),
        ));
    }
    Err(Error::ExtensionCap(format!(
        "normal form needs an extension of degree > {ext_cap}"
    )))
}

/// A cubic surface written, after X = M·Y, as
/// Y₀Y₁Y₂ + Y₁³ + Y₂³ + Y₃·Q + Y₃²·L + A·Y₃³ with tangent plane Y₃ = 0 at
/// the node (1:0:0:0).
#[derive(Clone, Debug, PartialEq)]
pub struct TangentSectionNormalForm {
    pub field: FieldSpec,
    pub ext_degree: u32,
    pub change: Matrix,
    pub quad: MultiPoly,
    pub lin: MultiPoly,
    pub a: Scalar,
}

impl TangentSectionNormalForm {
    /// The normal form itself with given Q, L, A and the identity change.
    pub fn from_parts(
        field: &FieldSpec,
        quad: MultiPoly,
        lin: MultiPoly,
        a: Scalar,
    ) -> Result<TangentSectionNormalForm> {
        if quad.nvars() != 3 || lin.nvars() != 3 {
            return Err(Error::InvalidArgument(
                "Q and L are forms in X0, X1, X2".into(),
            ));
        }
        if !quad.is_zero() && quad.homogeneous_degree() != Some(2)
            || !lin.is_zero() && lin.homogeneous_degree() != Some(1)
        {
            return Err(Error::InvalidArgument(
                "Q must be quadratic and L linear".into(),
            ));
        }
        if field.is_zero(&quad.coeff(&[2, 0, 0])) {
            return Err(Error::InvalidArgument(
                "Q(1,0,0) = 0: the surface is singular at (1:0:0:0)".into(),
            ));
        }
        Ok(TangentSectionNormalForm {
            field: field.clone(),
            ext_degree: 1,
            change: linalg::identity(field, 4),
            quad,
            lin,
            a,
        })
    }

    /// The normal-form polynomial in Y₀…Y₃.
    pub fn surface(&self) -> Hypersurface {
        let f = &self.field;
        let lift = |p: &MultiPoly| {
            MultiPoly::from_terms(
                f,
                4,
                p.terms()
                    .map(|(e, c)| (vec![e[0], e[1], e[2], 0], c.clone())),
            )
        };
        let y3 = MultiPoly::var(f, 4, 3);
        let poly = parse_poly("X0*X1*X2 + X1^3 + X2^3", 4, f)
            .unwrap()
            .add(&y3.mul(&lift(&self.quad)))
            .add(&y3.pow(2).mul(&lift(&self.lin)))
            .add(&y3.pow(3).scale(&self.a));
        Hypersurface::new(poly).unwrap()
    }
}

impl fmt::Display for TangentSectionNormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.surface())
    }
}

#[derive(Serialize)]
struct NormalFormJson {
    field: String,
    ext_degree: u32,
    change: Vec<Vec<String>>,
    quad: String,
    lin: String,
    a: String,
}

impl Serialize for TangentSectionNormalForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let f = &self.field;
        NormalFormJson {
            field: f.spec_string(),
            ext_degree: self.ext_degree,
            change: self
                .change
                .iter()
                .map(|r| r.iter().map(|c| f.format(c)).collect())
                .collect(),
            quad: self.quad.to_string(),
            lin: self.lin.to_string(),
            a: f.format(&self.a),
        }
        .serialize(s)
    }
}

/// Normal form of a cubic surface around a point whose tangent section is
/// nodal with node at that point.
pub fn tangent_section_normal_form(
    x: &Hypersurface,
    pt: &ProjPoint,
    ext_cap: u32,
) -> Result<TangentSectionNormalForm> {
    let xk = x.embed_into(pt.field())?;
    let plane = tangent_hyperplane(&xk, pt)?;
    let sec = plane_section(&xk, &plane)?;
    let internal: Vec<Scalar> = pt
        .coords()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != sec.pivot)
        .map(|(_, c)| c.clone())
        .collect();
    let node = ProjPoint::new(pt.field(), internal)?;
    let pnf = nodal_normal_form(&sec.cubic, &node, ext_cap)?;
    let l = &pnf.field;
    let chart = linalg::embed_matrix(pt.field(), &sec.chart, l)?;
    let mut m = linalg::mat_mul(l, &chart, &pnf.change);
    for (i, row) in m.iter_mut().enumerate() {
        row.push(if i == sec.pivot { l.one() } else { l.zero() });
    }
    let g = xk.f().embed_into(l)?.linear_map(&m);
    let part = |k: u32| {
        MultiPoly::from_terms(
            l,
            3,
            g.terms()
                .filter(|(e, _)| e[3] == k)
                .map(|(e, c)| (e[..3].to_vec(), c.clone())),
        )
    };
    if part(0) != pnf.normal {
        return Err(Error::Integrity(
            "tangent section does not match its normal form".into(),
        ));
    }
    let quad = part(1);
    if l.is_zero(&quad.coeff(&[2, 0, 0])) {
        return Err(Error::Integrity(
            "Q(1,0,0) = 0: the surface is singular at the node".into(),
        ));
    }
    Ok(TangentSectionNormalForm {
        field: l.clone(),
        ext_degree: pnf.ext_degree * pt.field().ext_degree() / x.field().ext_degree().max(1),
        change: m,
        quad,
        lin: part(2),
        a: g.coeff(&[0, 0, 0, 3]),
    })
}
