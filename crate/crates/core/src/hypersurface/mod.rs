//! Cubic hypersurfaces: smoothness, tangent hyperplanes, plane sections,
//! classification of plane cubics, and the lines of a cubic surface.

mod classify;
mod lines;

pub(crate) use classify::{linear_factors, linear_form};

use std::fmt;

use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{embed, restrict, FieldSpec, Scalar};
use crate::linalg::{self, Matrix};
use crate::poly::{is_unit_ideal, parse_poly, MultiPoly};

pub use classify::{
    classify_plane_cubic, plane_singular_points, CubicSectionClass, SectionTag, DEFAULT_EXT_CAP,
};
pub use lines::{
    eckardt_points, lines_on_cubic_surface, lines_on_cubic_surface_with_cap, EckardtCensus,
    IntersectionPoint, LineP3, LinesResult, DEFAULT_LINES_EXT_CAP,
};

/// Projective hypersurface f = 0 in Pⁿ, f a nonzero cubic form.
#[derive(Clone, Debug, PartialEq)]
pub struct Hypersurface {
    f: MultiPoly,
}

impl Hypersurface {
    pub fn new(f: MultiPoly) -> Result<Hypersurface> {
        f.check_homogeneous()?;
        match f.homogeneous_degree() {
            Some(3) => Ok(Hypersurface { f }),
            Some(d) => Err(Error::InvalidArgument(format!(
                "expected a cubic form, got degree {d}"
            ))),
            None => Err(Error::InvalidArgument("the zero polynomial".into())),
        }
    }

    /// Parses a cubic in X0..Xn.
    pub fn parse(text: &str, n: usize, field: &FieldSpec) -> Result<Hypersurface> {
        Hypersurface::new(parse_poly(text, n + 1, field)?)
    }

    pub fn f(&self) -> &MultiPoly {
        &self.f
    }

    pub fn field(&self) -> &FieldSpec {
        self.f.field()
    }

    /// Ambient projective dimension.
    pub fn n(&self) -> usize {
        self.f.nvars() - 1
    }

    pub fn embed_into(&self, target: &FieldSpec) -> Result<Hypersurface> {
        Ok(Hypersurface {
            f: self.f.embed_into(target)?,
        })
    }
}

impl fmt::Display for Hypersurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = 0 over {}", self.f, self.field())
    }
}

fn normalize(field: &FieldSpec, v: &[Scalar]) -> Result<Vec<Scalar>> {
    let lead = v
        .iter()
        .find(|x| !field.is_zero(x))
        .ok_or_else(|| Error::InvalidArgument("all coordinates are zero".into()))?;
    let inv = field.inv(lead)?;
    Ok(v.iter().map(|x| field.mul(x, &inv)).collect())
}

/// A point of projective space, first nonzero coordinate equal to 1.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProjPoint {
    field: FieldSpec,
    coords: Vec<Scalar>,
}

impl ProjPoint {
    pub fn new(field: &FieldSpec, coords: Vec<Scalar>) -> Result<ProjPoint> {
        Ok(ProjPoint {
            field: field.clone(),
            coords: normalize(field, &coords)?,
        })
    }

    pub fn from_i64(field: &FieldSpec, coords: &[i64]) -> Result<ProjPoint> {
        ProjPoint::new(field, coords.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn embed_into(&self, target: &FieldSpec) -> Result<ProjPoint> {
        let c = self
            .coords
            .iter()
            .map(|x| embed(&self.field, x, target))
            .collect::<Result<_>>()?;
        Ok(ProjPoint {
            field: target.clone(),
            coords: c,
        })
    }

    /// The same point over a subfield, when all coordinates lie in it.
    pub fn restrict_to(&self, small: &FieldSpec) -> Result<Option<ProjPoint>> {
        let mut out = Vec::new();
        for x in &self.coords {
            match restrict(&self.field, x, small)? {
                Some(y) => out.push(y),
                None => return Ok(None),
            }
        }
        Ok(Some(ProjPoint {
            field: small.clone(),
            coords: out,
        }))
    }

    /// Image under a linear map given by a matrix acting on coordinate columns.
    pub fn map(&self, m: &Matrix) -> Result<ProjPoint> {
        ProjPoint::new(&self.field, linalg::mat_vec(&self.field, m, &self.coords))
    }

    pub fn coord_strings(&self) -> Vec<String> {
        self.coords.iter().map(|x| self.field.format(x)).collect()
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.coord_strings().join(":"))
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}", self, self.field)
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.coords.len()))?;
        for c in self.coord_strings() {
            seq.serialize_element(&c)?;
        }
        seq.end()
    }
}

/// A hyperplane Σ cᵢXᵢ = 0, coefficients normalized like points.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
#[serde(transparent)]
pub struct Hyperplane(ProjPoint);

impl Hyperplane {
    pub fn new(field: &FieldSpec, coeffs: Vec<Scalar>) -> Result<Hyperplane> {
        Ok(Hyperplane(ProjPoint::new(field, coeffs)?))
    }

    pub fn from_i64(field: &FieldSpec, coeffs: &[i64]) -> Result<Hyperplane> {
        Ok(Hyperplane(ProjPoint::from_i64(field, coeffs)?))
    }

    pub fn coeffs(&self) -> &[Scalar] {
        self.0.coords()
    }

    pub fn field(&self) -> &FieldSpec {
        self.0.field()
    }

    pub fn contains(&self, x: &ProjPoint) -> Result<bool> {
        let f = x.field();
        let c = self.0.embed_into(f)?;
        let s = c
            .coords()
            .iter()
            .zip(x.coords())
            .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)));
        Ok(f.is_zero(&s))
    }

    pub fn embed_into(&self, target: &FieldSpec) -> Result<Hyperplane> {
        Ok(Hyperplane(self.0.embed_into(target)?))
    }
}

impl fmt::Display for Hyperplane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.coeffs().len()).map(|i| format!("X{i}")).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let field = self.field();
        let lin = MultiPoly::from_terms(
            field,
            names.len(),
            self.coeffs().iter().enumerate().map(|(i, c)| {
                let mut e = vec![0; names.len()];
                e[i] = 1;
                (e, c.clone())
            }),
        );
        write!(f, "{} = 0", lin.format_with(&refs))
    }
}

/// Chart ideals (f, ∂₀f, …, ∂ₙf)|_{Xᵢ=1}; smooth iff each is the unit ideal.
pub fn is_smooth(x: &Hypersurface) -> Result<bool> {
    let f = x.f();
    let grad = f.gradient();
    for i in 0..=x.n() {
        let mut gens = vec![f.dehomogenize(i)];
        gens.extend(grad.iter().map(|d| d.dehomogenize(i)));
        if !is_unit_ideal(&gens)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub const DEFAULT_POINT_SCAN_BUDGET: u64 = 1_000_000;

/// Every point of Pⁿ over `field` in canonical order, first nonzero coordinate 1.
pub fn projective_points(field: &FieldSpec, n: usize) -> Result<Vec<ProjPoint>> {
    let q = field
        .order()
        .ok_or_else(|| Error::Unsupported("point enumeration over Q".into()))?;
    let total: u64 = (0..=n as u32)
        .map(|i| q.saturating_pow(i))
        .fold(0u64, |a, b| a.saturating_add(b));
    if total > DEFAULT_POINT_SCAN_BUDGET {
        return Err(Error::ScanBudgetExceeded {
            size: total,
            budget: DEFAULT_POINT_SCAN_BUDGET,
        });
    }
    let mut out = Vec::with_capacity(total as usize);
    for lead in 0..=n {
        let free = n - lead;
        let count = q.pow(free as u32);
        for idx in 0..count {
            let mut coords = vec![field.zero(); n + 1];
            coords[lead] = field.one();
            let mut r = idx;
            for t in (lead + 1..=n).rev() {
                coords[t] = field.from_code(r % q);
                r /= q;
            }
            out.push(ProjPoint {
                field: field.clone(),
                coords,
            });
        }
    }
    Ok(out)
}

/// Singular points with residue degree ≤ `ext_cap`, each reported once over
/// its minimal field. A bounded cross-check, not a smoothness proof.
pub fn singular_points_scan(x: &Hypersurface, ext_cap: u32) -> Result<Vec<ProjPoint>> {
    singular_points_scan_with_budget(x, ext_cap, DEFAULT_POINT_SCAN_BUDGET)
}

pub fn singular_points_scan_with_budget(
    x: &Hypersurface,
    ext_cap: u32,
    budget: u64,
) -> Result<Vec<ProjPoint>> {
    let base = x.field();
    if !base.is_finite() {
        return Err(Error::Unsupported("point scans need a finite field".into()));
    }
    let mut spent = 0u64;
    let mut out = Vec::new();
    for j in 1..=ext_cap {
        let ext = base.extension(j)?;
        let q = ext.order().unwrap();
        let n = x.n() as u32;
        let size: u64 = (0..=n)
            .map(|i| q.saturating_pow(i))
            .fold(0u64, |a, b| a.saturating_add(b));
        spent = spent.saturating_add(size);
        if spent > budget {
            return Err(Error::ScanBudgetExceeded {
                size: spent,
                budget,
            });
        }
        let f = x.f().embed_into(&ext)?;
        let mut polys = f.gradient();
        polys.push(f);
        let proper: Vec<u32> = (1..j).filter(|d| j % d == 0).collect();
        let k = base.ext_degree();
        for p in projective_points(&ext, x.n())? {
            if polys.iter().any(|g| !ext.is_zero(&g.eval(p.coords()))) {
                continue;
            }
            let smaller = proper
                .iter()
                .any(|&d| p.coords().iter().all(|c| ext.in_subfield(c, k * d)));
            if !smaller {
                out.push(p);
            }
        }
    }
    Ok(out)
}

/// The tangent hyperplane Σ ∂ᵢf(x)·Xᵢ = 0 at a smooth point x of X.
pub fn tangent_hyperplane(x: &Hypersurface, pt: &ProjPoint) -> Result<Hyperplane> {
    let field = pt.field();
    let f = x.f().embed_into(field)?;
    if !field.is_zero(&f.eval(pt.coords())) {
        return Err(Error::InvalidArgument(format!(
            "{pt} is not on the hypersurface"
        )));
    }
    let grad: Vec<Scalar> = f.gradient().iter().map(|g| g.eval(pt.coords())).collect();
    if grad.iter().all(|c| field.is_zero(c)) {
        return Err(Error::InvalidArgument(format!("{pt} is a singular point")));
    }
    Hyperplane::new(field, grad)
}

/// Restriction of X to a hyperplane, in internal coordinates Y₀…Y_{n−1}.
#[derive(Clone, Debug, PartialEq)]
pub struct HyperplaneSection {
    /// f restricted to the hyperplane; a form in n variables.
    pub cubic: MultiPoly,
    /// (n+1)×n matrix sending internal coordinates to ambient ones.
    pub chart: Matrix,
    /// Index of the eliminated ambient coordinate.
    pub pivot: usize,
}

impl HyperplaneSection {
    /// Ambient image of a point given in internal coordinates.
    pub fn to_ambient(&self, y: &ProjPoint) -> Result<ProjPoint> {
        let field = y.field();
        let chart = linalg::embed_matrix(self.cubic.field(), &self.chart, field)?;
        y.map(&chart)
    }
}

/// Parametrizes H by the coordinates other than its pivot (first nonzero
/// coefficient) and restricts f.
pub fn hyperplane_section(x: &Hypersurface, h: &Hyperplane) -> Result<HyperplaneSection> {
    let field = h.field().clone();
    let f = x.f().embed_into(&field)?;
    let n = x.n();
    let c = h.coeffs();
    if c.len() != n + 1 {
        return Err(Error::InvalidArgument(
            "hyperplane has the wrong dimension".into(),
        ));
    }
    let pivot = c.iter().position(|v| !field.is_zero(v)).unwrap();
    let mut chart = linalg::zeros(&field, n + 1, n);
    let mut col = 0;
    for i in 0..=n {
        if i == pivot {
            continue;
        }
        chart[i][col] = field.one();
        chart[pivot][col] = field.neg(&c[i]);
        col += 1;
    }
    let cubic = f.linear_map(&chart);
    if cubic.is_zero() {
        return Err(Error::Integrity(format!(
            "the hypersurface contains the hyperplane {h}"
        )));
    }
    Ok(HyperplaneSection {
        cubic,
        chart,
        pivot,
    })
}

/// Plane section of a cubic surface: a ternary cubic plus its 4×3 chart.
pub fn plane_section(x: &Hypersurface, plane: &Hyperplane) -> Result<HyperplaneSection> {
    if x.n() != 3 {
        return Err(Error::InvalidArgument(
            "plane sections need a surface in P3".into(),
        ));
    }
    hyperplane_section(x, plane)
}
