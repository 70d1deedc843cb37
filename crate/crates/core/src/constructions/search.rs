use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{FieldSpec, Scalar, UniPoly};
use crate::hypersurface::{
    classify_plane_cubic, eckardt_points, hyperplane_section, is_smooth, linear_factors,
    linear_form, lines_on_cubic_surface, plane_section, projective_points, tangent_hyperplane,
    CubicSectionClass, Hyperplane, HyperplaneSection, Hypersurface, LineP3, ProjPoint, SectionTag,
    DEFAULT_EXT_CAP,
};
use crate::linalg::{self, Matrix};
use crate::poly::{BinaryForm, MultiPoly};

use super::CurveOnX;

/// Number of tangent sections classified before a search gives up.
pub const DEFAULT_SEARCH_BUDGET: usize = 20_000;

/// How many extensions of the lines' field the walk may climb through.
const WALK_EXTENSIONS: u32 = 2;

/// A tangent plane section with a node at the point of tangency, with the
/// trail (z, D, y) that led to it.
#[derive(Clone, Debug, PartialEq)]
pub struct NodalSection {
    pub field: FieldSpec,
    pub z: ProjPoint,
    pub line: LineP3,
    pub y: ProjPoint,
    pub x: ProjPoint,
    pub section: HyperplaneSection,
    /// x in the section's internal coordinates.
    pub node: ProjPoint,
    pub class: CubicSectionClass,
    pub sections_classified: usize,
}

#[derive(Serialize)]
struct NodalSectionJson<'a> {
    field: String,
    z: &'a ProjPoint,
    line: &'a LineP3,
    y: &'a ProjPoint,
    x: &'a ProjPoint,
    section: String,
    class: &'a CubicSectionClass,
    sections_classified: usize,
}

impl Serialize for NodalSection {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        NodalSectionJson {
            field: self.field.spec_string(),
            z: &self.z,
            line: &self.line,
            y: &self.y,
            x: &self.x,
            section: self.section.cubic.to_string(),
            class: &self.class,
            sections_classified: self.sections_classified,
        }
        .serialize(s)
    }
}

struct Walk {
    budget: usize,
    used: usize,
}

impl Walk {
    fn tangent_class(
        &mut self,
        x: &Hypersurface,
        pt: &ProjPoint,
    ) -> Result<(HyperplaneSection, CubicSectionClass)> {
        if self.used >= self.budget {
            return Err(Error::SearchExhausted(format!(
                "{} tangent sections classified",
                self.used
            )));
        }
        self.used += 1;
        let sec = plane_section(x, &tangent_hyperplane(x, pt)?)?;
        let class = classify_plane_cubic(&sec.cubic, DEFAULT_EXT_CAP)?;
        Ok((sec, class))
    }
}

fn internal(pt: &ProjPoint, pivot: usize) -> Result<ProjPoint> {
    let c: Vec<Scalar> = pt
        .coords()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != pivot)
        .map(|(_, c)| c.clone())
        .collect();
    ProjPoint::new(pt.field(), c)
}

/// Visits points of the line, (1:t) for t in canonical order, then (0:1),
/// until the visitor returns a value.
fn walk_line<T>(
    line: &LineP3,
    mut visit: impl FnMut(ProjPoint) -> Result<Option<T>>,
) -> Result<Option<T>> {
    let f = line.field();
    for t in f.elements() {
        if let Some(r) = visit(line.point_at(&f.one(), &t)?)? {
            return Ok(Some(r));
        }
    }
    visit(line.point_at(&f.zero(), &f.one())?)
}

/// Visits the points of a plane conic over its field, (1:t:s), (0:1:s),
/// (0:0:1) with t in canonical order and s over the roots.
fn walk_conic<T>(
    g: &MultiPoly,
    mut visit: impl FnMut(ProjPoint) -> Result<Option<T>>,
) -> Result<Option<T>> {
    let f = g.field();
    let prefixes = f
        .elements()
        .map(|t| vec![f.one(), t])
        .chain([vec![f.zero(), f.one()], vec![f.zero(), f.zero()]]);
    for prefix in prefixes {
        if f.is_zero(&prefix[0]) && f.is_zero(&prefix[1]) {
            let p = ProjPoint::new(f, vec![f.zero(), f.zero(), f.one()])?;
            return if f.is_zero(&g.eval(p.coords())) {
                visit(p)
            } else {
                Ok(None)
            };
        }
        // g(prefix, s) as a polynomial in s
        let coeffs: Vec<Scalar> = (0..=2u32)
            .map(|e| {
                g.terms()
                    .filter(|(ex, _)| ex[2] == e)
                    .fold(f.zero(), |acc, (ex, c)| {
                        let m = f.mul(
                            &f.mul(c, &f.pow(&prefix[0], ex[0] as u64)),
                            &f.pow(&prefix[1], ex[1] as u64),
                        );
                        f.add(&acc, &m)
                    })
            })
            .collect();
        let u = UniPoly::new(f, coeffs);
        let roots: Vec<Scalar> = if u.is_zero() {
            f.elements().collect()
        } else {
            u.roots()?.into_iter().map(|(r, _)| r).collect()
        };
        for s in roots {
            if let Some(r) = visit(ProjPoint::new(
                f,
                vec![prefix[0].clone(), prefix[1].clone(), s],
            )?)? {
                return Ok(Some(r));
            }
        }
    }
    Ok(None)
}

fn search_over(
    x: &Hypersurface,
    lines: &[LineP3],
    walk: &mut Walk,
) -> Result<Option<NodalSection>> {
    let census = eckardt_points(lines)?;
    if census.two_line.is_empty() {
        return Err(Error::AllIntersectionsEckardt {
            eckardt: census.eckardt.len(),
        });
    }
    for z in &census.two_line {
        for &d in &z.lines {
            let line = &lines[d];
            let found = walk_line(line, |y| {
                let (sec_y, class_y) = walk.tangent_class(x, &y)?;
                if class_y.tag != SectionTag::LineConicTransverse {
                    return Ok(None);
                }
                let factors = linear_factors(&sec_y.cubic)?;
                let [(normal, 1)] = factors.as_slice() else {
                    return Err(Error::Integrity(format!(
                        "line plus conic section at {y} has factors {factors:?}"
                    )));
                };
                let lf = linear_form(sec_y.cubic.field(), normal);
                let conic = sec_y.cubic.div_exact(&lf)?;
                walk_conic(&conic, |p| {
                    if x.field().is_zero(&lf.eval(p.coords())) {
                        return Ok(None);
                    }
                    let xpt = sec_y.to_ambient(&p)?;
                    let (sec, class) = walk.tangent_class(x, &xpt)?;
                    let node = internal(&xpt, sec.pivot)?;
                    if class.tag == SectionTag::NodalIntegral
                        && class.singular_point.as_ref() == Some(&node)
                    {
                        return Ok(Some(NodalSection {
                            y: y.clone(),
                            field: x.field().clone(),
                            z: z.point.clone(),
                            line: line.clone(),
                            x: xpt,
                            section: sec,
                            node,
                            class,
                            sections_classified: walk.used,
                        }));
                    }
                    Ok(None)
                })
            })?;
            if found.is_some() {
                return Ok(found);
            }
        }
    }
    Ok(None)
}

/// Finds x on X whose tangent section is an integral cubic with a node at x:
/// from a point z on exactly two lines, along a line D through z to a point y
/// with C(y) = D ∪ Γ transverse, then along the conic Γ.
pub fn find_nodal_section(x: &Hypersurface) -> Result<NodalSection> {
    find_nodal_section_with_budget(x, DEFAULT_SEARCH_BUDGET)
}

pub fn find_nodal_section_with_budget(x: &Hypersurface, budget: usize) -> Result<NodalSection> {
    if x.n() != 3 {
        return Err(Error::InvalidArgument(
            "nodal sections need a surface in P3".into(),
        ));
    }
    if !x.field().is_finite() {
        return Err(Error::Unsupported("searches run over finite fields".into()));
    }
    if !is_smooth(x)? {
        return Err(Error::InvalidArgument("the surface is singular".into()));
    }
    let lines = lines_on_cubic_surface(x)?;
    let mut walk = Walk { budget, used: 0 };
    for j in 1..=WALK_EXTENSIONS {
        let w = lines.field.extension(j)?;
        let xw = x.embed_into(&w)?;
        let lw: Vec<LineP3> = lines
            .lines
            .iter()
            .map(|l| l.embed_into(&w))
            .collect::<Result<_>>()?;
        if let Some(found) = search_over(&xw, &lw, &mut walk)? {
            return Ok(found);
        }
    }
    Err(Error::SearchExhausted(format!(
        "no nodal tangent section over extensions of degree ≤ {WALK_EXTENSIONS} of F_{}",
        lines.field.order().unwrap_or(0)
    )))
}

fn apply(field: &FieldSpec, m: &Matrix, h: &[BinaryForm]) -> Result<Vec<BinaryForm>> {
    let d = h[0].degree();
    m.iter()
        .map(|row| {
            row.iter()
                .zip(h)
                .try_fold(BinaryForm::zero(field, d), |acc, (c, b)| {
                    acc.add(&b.scale(c))
                })
        })
        .collect()
}

/// The normalization of the nodal section, mapped into X, by projection
/// from the node: with p the node and w = U·e₁ + V·e₂ completing it to a
/// basis, the line through p and w meets the cubic again at
/// −C(w)·p + Q(w)·w, where Q and C are the quadratic and cubic parts at p.
pub fn nodal_section_curve(x: &Hypersurface, ns: &NodalSection) -> Result<CurveOnX> {
    let f = &ns.field;
    let m = linalg::complete_basis(f, ns.node.coords());
    let g = ns.section.cubic.linear_map(&m);
    let q = BinaryForm::new(
        f,
        2,
        vec![
            g.coeff(&[1, 2, 0]),
            g.coeff(&[1, 1, 1]),
            g.coeff(&[1, 0, 2]),
        ],
    )?;
    let c = BinaryForm::new(f, 3, (0..4).map(|j| g.coeff(&[0, 3 - j, j])).collect())?;
    let u = BinaryForm::from_i64(f, &[1, 0]);
    let v = BinaryForm::from_i64(f, &[0, 1]);
    let y = vec![c.neg(), q.mul(&u), q.mul(&v)];
    let total = linalg::mat_mul(f, &ns.section.chart, &m);
    let h = apply(f, &total, &y)?;
    CurveOnX::new(&x.embed_into(f)?, h)
}

/// The very free non-planar curve on the characteristic-2 Fermat surface,
/// (U³+U²V : U³+U²V+V³ : U²V+V³ : UV²).
pub fn char2_fermat_curve() -> Result<CurveOnX> {
    let f = FieldSpec::parse("2")?;
    let x = Hypersurface::parse("X0^3 + X1^3 + X2^3 + X3^3", 3, &f)?;
    let h = vec![
        BinaryForm::from_i64(&f, &[1, 1, 0, 0]),
        BinaryForm::from_i64(&f, &[1, 1, 0, 1]),
        BinaryForm::from_i64(&f, &[0, 1, 0, 1]),
        BinaryForm::from_i64(&f, &[0, 0, 1, 0]),
    ];
    CurveOnX::new(&x, h)
}

fn is_char2_fermat(x: &Hypersurface) -> Result<bool> {
    let f = x.field();
    if f.characteristic() != 2 || x.n() != 3 {
        return Ok(false);
    }
    Ok(*x.f() == crate::poly::parse_poly("X0^3 + X1^3 + X2^3 + X3^3", 4, f)?)
}

/// One stage of the inductive construction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BuildStep {
    pub n: usize,
    pub action: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BuiltCurve {
    pub curve: CurveOnX,
    pub steps: Vec<BuildStep>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BuildOptions {
    /// Shuffles the hyperplane order when set.
    pub seed: Option<u64>,
    pub hyperplane_budget: usize,
    pub search_budget: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            seed: None,
            hyperplane_budget: 500,
            search_budget: DEFAULT_SEARCH_BUDGET,
        }
    }
}

/// A very free plane cubic on a smooth cubic hypersurface of dimension ≥ 2.
pub fn build_very_free_curve(x: &Hypersurface) -> Result<BuiltCurve> {
    build_very_free_curve_with(x, &BuildOptions::default())
}

pub fn build_very_free_curve_with(x: &Hypersurface, opts: &BuildOptions) -> Result<BuiltCurve> {
    if x.n() < 3 {
        return Err(Error::InvalidArgument(
            "need a cubic hypersurface in Pⁿ with n ≥ 3".into(),
        ));
    }
    if !x.field().is_finite() {
        return Err(Error::Unsupported("searches run over finite fields".into()));
    }
    if !is_smooth(x)? {
        return Err(Error::InvalidArgument(
            "the hypersurface is singular".into(),
        ));
    }
    let mut steps = Vec::new();
    let curve = build(x, opts, &mut steps)?;
    Ok(BuiltCurve { curve, steps })
}

fn build(x: &Hypersurface, opts: &BuildOptions, steps: &mut Vec<BuildStep>) -> Result<CurveOnX> {
    let n = x.n();
    if n == 3 {
        return match find_nodal_section_with_budget(x, opts.search_budget) {
            Ok(ns) => {
                steps.push(BuildStep {
                    n,
                    action: "nodal tangent section".into(),
                    detail: format!(
                        "x = {}, section {} over F_{}",
                        ns.x,
                        ns.section.cubic,
                        ns.field.order().unwrap_or(0)
                    ),
                });
                let c = nodal_section_curve(x, &ns)?;
                check_very_free(&c, n)?;
                Ok(c)
            }
            Err(Error::AllIntersectionsEckardt { eckardt }) if is_char2_fermat(x)? => {
                steps.push(BuildStep {
                    n,
                    action: "char-2 Fermat curve".into(),
                    detail: format!("all {eckardt} intersection points are Eckardt points; using the explicit curve"),
                });
                let c = char2_fermat_curve()?;
                check_very_free(&c, n)?;
                Ok(c)
            }
            Err(e) => Err(e),
        };
    }
    let f = x.field();
    let mut candidates = projective_points(f, n)?;
    if let Some(seed) = opts.seed {
        candidates.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    let mut last_err = None;
    for (tried, coeffs) in candidates
        .into_iter()
        .take(opts.hyperplane_budget)
        .enumerate()
    {
        let h = Hyperplane::new(f, coeffs.coords().to_vec())?;
        let sec = match hyperplane_section(x, &h) {
            Ok(s) => s,
            Err(Error::Integrity(_)) => continue,
            Err(e) => return Err(e),
        };
        let y = Hypersurface::new(sec.cubic.clone())?;
        if !is_smooth(&y)? {
            continue;
        }
        let mark = steps.len();
        steps.push(BuildStep {
            n,
            action: "smooth hyperplane section".into(),
            detail: format!(
                "H = {h} after {} candidates; X ∩ H = {}",
                tried + 1,
                sec.cubic
            ),
        });
        let inner = match build(&y, opts, steps) {
            Ok(c) => c,
            Err(e) if e.kind() != crate::error::ErrorKind::Input => {
                steps.truncate(mark);
                last_err = Some(e);
                continue;
            }
            Err(e) => return Err(e),
        };
        let l = inner.field().clone();
        let chart = linalg::embed_matrix(f, &sec.chart, &l)?;
        let h_x = apply(&l, &chart, &inner.h)?;
        let c = CurveOnX::new(&x.embed_into(&l)?, h_x)?;
        steps.push(BuildStep {
            n,
            action: "re-embedded curve".into(),
            detail: format!("splitting {} on X ⊂ P{n}", c.splitting),
        });
        check_very_free(&c, n)?;
        return Ok(c);
    }
    Err(last_err.unwrap_or_else(|| {
        Error::SearchExhausted(format!(
            "no usable hyperplane among the first {}",
            opts.hyperplane_budget
        ))
    }))
}

fn check_very_free(c: &CurveOnX, n: usize) -> Result<()> {
    let sum = c.splitting.degree();
    if !c.is_very_free() || sum != 3 * (n as i64 - 2) {
        return Err(Error::Verification(format!(
            "plane cubic on X ⊂ P{n} has splitting {}, expected all parts ≥ 1 with sum {}",
            c.splitting,
            3 * (n - 2)
        )));
    }
    Ok(())
}
