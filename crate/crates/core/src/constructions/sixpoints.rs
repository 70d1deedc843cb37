use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{FieldSpec, Scalar};
use crate::hypersurface::ProjPoint;
use crate::linalg;

/// One incidence test of the chosen point against a line, point or conic
/// built from the six points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Incidence {
    pub object: String,
    pub incident: bool,
}

/// The chosen point with every incidence check that certifies it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SixPointCertificate {
    #[serde(serialize_with = "ser_field")]
    pub field: FieldSpec,
    pub diagonal_points: Vec<ProjPoint>,
    pub q: ProjPoint,
    /// True when Q is one of the diagonal points of P₀P₁P₂P₃.
    pub from_diagonal: bool,
    /// The two index pairs (i, j) with Q on the line PᵢPⱼ.
    pub lines_through_q: Vec<(usize, usize)>,
    pub incidences: Vec<Incidence>,
}

fn ser_field<S: serde::Serializer>(f: &FieldSpec, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&f.spec_string())
}

fn cross(f: &FieldSpec, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let m = |i: usize, j: usize| f.sub(&f.mul(&a[i], &b[j]), &f.mul(&a[j], &b[i]));
    vec![m(1, 2), m(2, 0), m(0, 1)]
}

fn dot(f: &FieldSpec, a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter()
        .zip(b)
        .fold(f.zero(), |acc, (x, y)| f.add(&acc, &f.mul(x, y)))
}

fn conic_monomials(f: &FieldSpec, p: &[Scalar]) -> Vec<Scalar> {
    let (x, y, z) = (&p[0], &p[1], &p[2]);
    vec![
        f.mul(x, x),
        f.mul(y, y),
        f.mul(z, z),
        f.mul(x, y),
        f.mul(x, z),
        f.mul(y, z),
    ]
}

/// Coefficients of the conic through five points in general position.
fn conic_through(f: &FieldSpec, pts: &[&ProjPoint]) -> Result<Vec<Scalar>> {
    let m: Vec<Vec<Scalar>> = pts.iter().map(|p| conic_monomials(f, p.coords())).collect();
    let ns = linalg::nullspace(f, &m, 6);
    if ns.len() != 1 {
        return Err(Error::Integrity(format!(
            "five points lie on {} independent conics",
            ns.len()
        )));
    }
    Ok(ns.into_iter().next().unwrap())
}

fn pairs() -> Vec<(usize, usize)> {
    (0..6)
        .flat_map(|i| (i + 1..6).map(move |j| (i, j)))
        .collect()
}

struct Config {
    field: FieldSpec,
    points: Vec<ProjPoint>,
    lines: Vec<((usize, usize), Vec<Scalar>)>,
    conics: Vec<(usize, Vec<Scalar>)>,
}

impl Config {
    fn new(points: &[ProjPoint]) -> Result<Config> {
        if points.len() != 6 {
            return Err(Error::InvalidArgument(format!(
                "expected 6 points, got {}",
                points.len()
            )));
        }
        let field = points[0].field().clone();
        if points.iter().any(|p| p.dim() != 2 || *p.field() != field) {
            return Err(Error::InvalidArgument(
                "points must lie in one projective plane over one field".into(),
            ));
        }
        let f = &field;
        for i in 0..6 {
            for j in i + 1..6 {
                for k in j + 1..6 {
                    let m = vec![
                        points[i].coords().to_vec(),
                        points[j].coords().to_vec(),
                        points[k].coords().to_vec(),
                    ];
                    if f.is_zero(&linalg::determinant(f, &m)) {
                        return Err(Error::InvalidArgument(format!(
                            "P{i}, P{j}, P{k} are collinear (or coincide)"
                        )));
                    }
                }
            }
        }
        let m: Vec<Vec<Scalar>> = points
            .iter()
            .map(|p| conic_monomials(f, p.coords()))
            .collect();
        if f.is_zero(&linalg::determinant(f, &m)) {
            return Err(Error::InvalidArgument(
                "the six points lie on a conic".into(),
            ));
        }
        let lines = pairs()
            .into_iter()
            .map(|(i, j)| ((i, j), cross(f, points[i].coords(), points[j].coords())))
            .collect();
        let conics = (0..6)
            .map(|skip| {
                let five: Vec<&ProjPoint> = points
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != skip)
                    .map(|(_, p)| p)
                    .collect();
                Ok((skip, conic_through(f, &five)?))
            })
            .collect::<Result<_>>()?;
        Ok(Config {
            field,
            points: points.to_vec(),
            lines,
            conics,
        })
    }

    fn line(&self, i: usize, j: usize) -> &[Scalar] {
        &self.lines.iter().find(|(k, _)| *k == (i, j)).unwrap().1
    }

    fn meet(&self, a: (usize, usize), b: (usize, usize)) -> Result<ProjPoint> {
        ProjPoint::new(
            &self.field,
            cross(&self.field, self.line(a.0, a.1), self.line(b.0, b.1)),
        )
    }

    fn certify(
        &self,
        q: &ProjPoint,
        diagonal: &[ProjPoint],
        from_diagonal: bool,
    ) -> (bool, SixPointCertificate) {
        let f = &self.field;
        let mut incidences = Vec::new();
        let mut through = Vec::new();
        for ((i, j), l) in &self.lines {
            let on = f.is_zero(&dot(f, l, q.coords()));
            if on {
                through.push((*i, *j));
            }
            incidences.push(Incidence {
                object: format!("line P{i}P{j}"),
                incident: on,
            });
        }
        let mut clean = through.len() == 2;
        for (i, p) in self.points.iter().enumerate() {
            let eq = p == q;
            clean &= !eq;
            incidences.push(Incidence {
                object: format!("point P{i}"),
                incident: eq,
            });
        }
        let mono = conic_monomials(f, q.coords());
        for (skip, c) in &self.conics {
            let on = f.is_zero(&dot(f, c, &mono));
            clean &= !on;
            incidences.push(Incidence {
                object: format!("conic omitting P{skip}"),
                incident: on,
            });
        }
        let cert = SixPointCertificate {
            field: f.clone(),
            diagonal_points: diagonal.to_vec(),
            q: q.clone(),
            from_diagonal,
            lines_through_q: through,
            incidences,
        };
        (clean, cert)
    }
}

/// The three diagonal points of the quadrilateral P₀P₁P₂P₃:
/// P₀P₁ ∩ P₂P₃, P₀P₂ ∩ P₁P₃, P₀P₃ ∩ P₁P₂.
pub fn diagonal_points(p: &[ProjPoint]) -> Result<Vec<ProjPoint>> {
    if p.len() < 4 {
        return Err(Error::InvalidArgument("need four points".into()));
    }
    let f = p[0].field();
    let line = |i: usize, j: usize| cross(f, p[i].coords(), p[j].coords());
    [((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))]
        .iter()
        .map(|(a, b)| ProjPoint::new(f, cross(f, &line(a.0, a.1), &line(b.0, b.1))))
        .collect()
}

/// A point on exactly two of the fifteen lines PᵢPⱼ, distinct from the Pᵢ and
/// off the six conics through five of them. Diagonal points of P₀P₁P₂P₃ are
/// tried first, then every meet of two lines with disjoint indices.
pub fn six_point_diagonal(points: &[ProjPoint]) -> Result<(ProjPoint, SixPointCertificate)> {
    let cfg = Config::new(points)?;
    let diag = diagonal_points(points)?;
    for q in &diag {
        let (ok, cert) = cfg.certify(q, &diag, true);
        if ok {
            return Ok((q.clone(), cert));
        }
    }
    let mut candidates = Vec::new();
    let all = pairs();
    for (x, a) in all.iter().enumerate() {
        for b in &all[x + 1..] {
            if a.0 != b.0 && a.0 != b.1 && a.1 != b.0 && a.1 != b.1 {
                candidates.push(cfg.meet(*a, *b)?);
            }
        }
    }
    candidates.sort();
    candidates.dedup();
    for q in &candidates {
        let (ok, cert) = cfg.certify(q, &diag, false);
        if ok {
            return Ok((q.clone(), cert));
        }
    }
    let on_p4p5 = diag.iter().filter(|q| f_on(&cfg, q, 4, 5)).count();
    Err(Error::NoValidPoint(format!(
        "{} candidate meets checked, none valid; {on_p4p5} of 3 diagonal points lie on P4P5",
        candidates.len()
    )))
}

fn f_on(cfg: &Config, q: &ProjPoint, i: usize, j: usize) -> bool {
    cfg.field
        .is_zero(&dot(&cfg.field, cfg.line(i, j), q.coords()))
}
