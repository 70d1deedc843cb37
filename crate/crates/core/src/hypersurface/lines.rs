use std::collections::BTreeMap;
use std::fmt;

use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{FieldSpec, Scalar, UniPoly};
use crate::linalg::{self, Matrix};
use crate::poly::groebner::{eliminant, shape_form};
use crate::poly::{affine_solutions, groebner_basis, BinaryForm, MultiPoly};

use super::classify::coefficients_in_tail;
use super::{Hypersurface, ProjPoint};

/// Largest order of an element of W(E6); the Galois action on the 27 lines
/// factors through it.
pub const DEFAULT_LINES_EXT_CAP: u32 = 12;

/// A line of P³ as the row space of a 2×4 matrix in reduced row echelon form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LineP3 {
    field: FieldSpec,
    rows: [Vec<Scalar>; 2],
}

impl LineP3 {
    /// The line through two distinct points given by coordinate vectors.
    pub fn through(field: &FieldSpec, p: Vec<Scalar>, q: Vec<Scalar>) -> Result<LineP3> {
        let (m, pivots) = linalg::rref(field, &vec![p, q]);
        if pivots.len() != 2 || m.len() != 2 || m[0].len() != 4 {
            return Err(Error::InvalidArgument(
                "two independent vectors in 4 coordinates expected".into(),
            ));
        }
        Ok(LineP3 {
            field: field.clone(),
            rows: [m[0].clone(), m[1].clone()],
        })
    }

    pub fn from_i64(field: &FieldSpec, p: [i64; 4], q: [i64; 4]) -> Result<LineP3> {
        let v = |a: [i64; 4]| a.iter().map(|&x| field.from_i64(x)).collect();
        LineP3::through(field, v(p), v(q))
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn rows(&self) -> &[Vec<Scalar>; 2] {
        &self.rows
    }

    /// (U:V) ↦ U·r₀ + V·r₁.
    pub fn parametrization(&self) -> Vec<BinaryForm> {
        (0..4)
            .map(|c| {
                BinaryForm::new(
                    &self.field,
                    1,
                    vec![self.rows[0][c].clone(), self.rows[1][c].clone()],
                )
                .unwrap()
            })
            .collect()
    }

    pub fn point_at(&self, u: &Scalar, v: &Scalar) -> Result<ProjPoint> {
        let f = &self.field;
        ProjPoint::new(
            f,
            (0..4)
                .map(|c| f.add(&f.mul(u, &self.rows[0][c]), &f.mul(v, &self.rows[1][c])))
                .collect(),
        )
    }

    pub fn contains(&self, p: &ProjPoint) -> Result<bool> {
        let f = &self.field;
        let p = p.embed_into(f)?;
        let m = vec![
            self.rows[0].clone(),
            self.rows[1].clone(),
            p.coords().to_vec(),
        ];
        Ok(linalg::rank(f, &m) == 2)
    }

    pub fn lies_on(&self, x: &Hypersurface) -> Result<bool> {
        Ok(x.f()
            .embed_into(&self.field)?
            .compose_with_curve(&self.parametrization())?
            .is_zero())
    }

    /// Common point with another line over the same field, if they meet and
    /// are distinct.
    pub fn meet(&self, other: &LineP3) -> Result<Option<ProjPoint>> {
        let f = &self.field;
        if other.field != *f {
            return Err(Error::FieldMismatch("lines over different fields".into()));
        }
        if self == other {
            return Ok(None);
        }
        let cols: Matrix = vec![
            self.rows[0].clone(),
            self.rows[1].clone(),
            other.rows[0].iter().map(|x| f.neg(x)).collect(),
            other.rows[1].iter().map(|x| f.neg(x)).collect(),
        ];
        let ns = linalg::nullspace(f, &linalg::transpose(&cols), 4);
        match ns.first() {
            None => Ok(None),
            Some(w) => self.point_at(&w[0], &w[1]).map(Some),
        }
    }

    pub fn embed_into(&self, target: &FieldSpec) -> Result<LineP3> {
        let m = linalg::embed_matrix(
            &self.field,
            &vec![self.rows[0].clone(), self.rows[1].clone()],
            target,
        )?;
        LineP3::through(target, m[0].clone(), m[1].clone())
    }

    pub fn row_strings(&self) -> [Vec<String>; 2] {
        let s = |r: &Vec<Scalar>| r.iter().map(|x| self.field.format(x)).collect();
        [s(&self.rows[0]), s(&self.rows[1])]
    }
}

impl fmt::Display for LineP3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b] = self.row_strings();
        write!(f, "[{}; {}]", a.join(" "), b.join(" "))
    }
}

impl fmt::Debug for LineP3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}", self, self.field)
    }
}

impl Serialize for LineP3 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(2))?;
        for r in self.row_strings() {
            seq.serialize_element(&r)?;
        }
        seq.end()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinesResult {
    #[serde(serialize_with = "ser_field")]
    pub field: FieldSpec,
    pub ext_degree: u32,
    pub lines: Vec<LineP3>,
}

fn ser_field<S: Serializer>(f: &FieldSpec, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&f.spec_string())
}

#[derive(Clone, Copy)]
enum Entry {
    Zero,
    One,
    Free(usize),
}

/// Schubert cell with pivot columns (i, j): row templates and unknown count.
fn cell(i: usize, j: usize) -> ([[Entry; 4]; 2], usize) {
    let mut rows = [[Entry::Zero; 4]; 2];
    let mut n = 0;
    for (r, p) in [(0, i), (1, j)] {
        rows[r][p] = Entry::One;
        for c in p + 1..4 {
            if c != j {
                rows[r][c] = Entry::Free(n);
                n += 1;
            }
        }
    }
    (rows, n)
}

/// Per cell: (templates, unknowns, Gröbner basis over the base field of the
/// containment conditions, `None` when the cell has no unknowns, and its
/// shape form in the first unknown when that exists).
type CellSystem = (
    [[Entry; 4]; 2],
    usize,
    Option<Vec<MultiPoly>>,
    Option<(UniPoly, Vec<UniPoly>)>,
);

/// Squarefree eliminants of every coordinate of every cell, with the powers
/// x^{q^k} mod each one for the current k.
struct SplitFilter {
    elims: Vec<UniPoly>,
    frob: Vec<UniPoly>,
    q: u64,
}

impl SplitFilter {
    fn new(systems: &[CellSystem], q: u64) -> Result<SplitFilter> {
        let mut elims = Vec::new();
        for (_, n, gb, _) in systems {
            let Some(gb) = gb else { continue };
            if gb.iter().any(|g| g.is_constant()) {
                continue;
            }
            for v in 0..*n {
                let u = eliminant(gb, v, 40)?;
                if u.degree().unwrap_or(0) > 0 && u.gcd(&u.derivative()).degree() == Some(0) {
                    elims.push(u);
                }
            }
        }
        let frob = elims
            .iter()
            .map(|u| UniPoly::x(u.field()).rem(u))
            .collect::<Result<_>>()?;
        Ok(SplitFilter { elims, frob, q })
    }

    /// Advances to the next k and tells whether every eliminant splits into
    /// distinct linear factors over F_{q^k}.
    fn step(&mut self) -> Result<bool> {
        let mut all = true;
        for (u, h) in self.elims.iter().zip(self.frob.iter_mut()) {
            *h = h.pow_mod(self.q, u)?;
            if *h != UniPoly::x(u.field()).rem(u)? {
                all = false;
            }
        }
        Ok(all)
    }
}

fn cell_systems(f: &MultiPoly) -> Result<Vec<CellSystem>> {
    let field = f.field();
    let mut out = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            let (rows, n) = cell(i, j);
            let ring = n + 2;
            let entry = |e: Entry| match e {
                Entry::Zero => MultiPoly::zero(field, ring),
                Entry::One => MultiPoly::constant(field, ring, field.one()),
                Entry::Free(k) => MultiPoly::var(field, ring, k),
            };
            let s = MultiPoly::var(field, ring, n);
            let t = MultiPoly::var(field, ring, n + 1);
            let subs: Vec<MultiPoly> = (0..4)
                .map(|c| entry(rows[0][c]).mul(&s).add(&entry(rows[1][c]).mul(&t)))
                .collect();
            let g = f.substitute(&subs);
            let system = if n == 0 {
                if !g.is_zero() {
                    continue;
                }
                None
            } else {
                let eqs = coefficients_in_tail(&g, n);
                Some(groebner_basis(&eqs)?)
            };
            let shape = match &system {
                Some(gb) if !gb.iter().any(|p| p.is_constant()) => shape_form(gb, 0, 40)?,
                _ => None,
            };
            out.push((rows, n, system, shape));
        }
    }
    Ok(out)
}

fn lines_over(systems: &[CellSystem], l: &FieldSpec) -> Result<Vec<LineP3>> {
    let mut out = Vec::new();
    for (rows, n, system, shape) in systems {
        let sols = match (system, shape) {
            (None, _) => vec![vec![]],
            (Some(_), Some((u, r))) => {
                let r: Vec<UniPoly> = r.iter().map(|p| p.embed_into(l)).collect::<Result<_>>()?;
                u.embed_into(l)?
                    .roots()?
                    .into_iter()
                    .map(|(x, _)| r.iter().map(|p| p.eval(&x)).collect())
                    .collect()
            }
            (Some(gb), None) => {
                if gb.iter().any(|g| g.is_constant()) {
                    continue;
                }
                let gb: Vec<MultiPoly> =
                    gb.iter().map(|g| g.embed_into(l)).collect::<Result<_>>()?;
                affine_solutions(&gb, 40)?
            }
        };
        debug_assert!(sols.iter().all(|s| s.len() == *n));
        for s in sols {
            let val = |e: Entry| match e {
                Entry::Zero => l.zero(),
                Entry::One => l.one(),
                Entry::Free(k) => s[k].clone(),
            };
            out.push(LineP3 {
                field: l.clone(),
                rows: [rows[0].map(val).to_vec(), rows[1].map(val).to_vec()],
            });
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

pub fn lines_on_cubic_surface(x: &Hypersurface) -> Result<LinesResult> {
    lines_on_cubic_surface_with_cap(x, DEFAULT_LINES_EXT_CAP)
}

/// The 27 lines of a smooth cubic surface over the smallest F_{q^k},
/// k ≤ `ext_cap`, over which all of them are defined.
pub fn lines_on_cubic_surface_with_cap(x: &Hypersurface, ext_cap: u32) -> Result<LinesResult> {
    let base = x.field();
    if !base.is_finite() {
        return Err(Error::Unsupported(
            "line enumeration needs a finite field".into(),
        ));
    }
    if x.n() != 3 {
        return Err(Error::InvalidArgument(
            "lines are computed on surfaces in P3".into(),
        ));
    }
    let systems = cell_systems(x.f())?;
    let mut filter = SplitFilter::new(&systems, base.order().unwrap())?;
    let mut best = 0;
    for k in 1..=ext_cap {
        if !filter.step()? {
            continue;
        }
        let l = base.extension(k)?;
        let lines = lines_over(&systems, &l)?;
        for line in &lines {
            if !line.lies_on(x)? {
                return Err(Error::Integrity(format!(
                    "{line} is not contained in the surface"
                )));
            }
        }
        match lines.len() {
            27 => {
                return Ok(LinesResult {
                    field: l,
                    ext_degree: k,
                    lines,
                })
            }
            n if n > 27 => {
                return Err(Error::Integrity(format!(
                    "{n} lines found; the surface is not smooth"
                )))
            }
            n => best = n,
        }
    }
    Err(Error::ExtensionCap(format!(
        "only {best} of 27 lines are defined over extensions of degree ≤ {ext_cap}"
    )))
}

/// An intersection point of lines, with the indices of the lines through it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntersectionPoint {
    pub point: ProjPoint,
    pub lines: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EckardtCensus {
    /// Points on exactly three lines.
    pub eckardt: Vec<IntersectionPoint>,
    /// Points on exactly two lines.
    pub two_line: Vec<IntersectionPoint>,
    /// Number of unordered pairs of meeting lines.
    pub incident_pairs: usize,
}

/// Groups the pairwise intersections of the 27 lines by point.
pub fn eckardt_points(lines: &[LineP3]) -> Result<EckardtCensus> {
    if lines.len() != 27 {
        return Err(Error::InvalidArgument(format!(
            "expected 27 lines, got {}",
            lines.len()
        )));
    }
    let mut at: BTreeMap<ProjPoint, Vec<usize>> = BTreeMap::new();
    let mut degree = [0usize; 27];
    let mut pairs = 0;
    for a in 0..27 {
        for b in a + 1..27 {
            if let Some(p) = lines[a].meet(&lines[b])? {
                pairs += 1;
                degree[a] += 1;
                degree[b] += 1;
                let entry = at.entry(p).or_default();
                for i in [a, b] {
                    if !entry.contains(&i) {
                        entry.push(i);
                    }
                }
            }
        }
    }
    if let Some(i) = degree.iter().position(|&d| d != 10) {
        return Err(Error::Integrity(format!(
            "line {} meets {} others",
            lines[i], degree[i]
        )));
    }
    let mut census = EckardtCensus {
        eckardt: Vec::new(),
        two_line: Vec::new(),
        incident_pairs: pairs,
    };
    for (point, mut through) in at {
        through.sort_unstable();
        let ip = IntersectionPoint {
            point,
            lines: through,
        };
        match ip.lines.len() {
            2 => census.two_line.push(ip),
            3 => census.eckardt.push(ip),
            n => return Err(Error::Integrity(format!("{n} lines through {}", ip.point))),
        }
    }
    if pairs != 3 * census.eckardt.len() + census.two_line.len() {
        return Err(Error::Integrity("pair count identity fails".into()));
    }
    Ok(census)
}
