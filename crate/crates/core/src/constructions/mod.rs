//! Explicit constructions on cubic surfaces: normal forms of nodal tangent
//! sections, tangent-bundle pullbacks, the ξ/η/δ identities, searches for
//! very free curves and the six-point and characteristic-2 analyses.

mod fermat2;
mod identities;
mod normal_form;
mod search;
mod sixpoints;

use std::fmt;

use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fields::{FieldSpec, Scalar};
use crate::hypersurface::Hypersurface;
use crate::poly::{BinaryForm, LaurentForm, MultiPoly};
use crate::sheaf_p1::{
    is_very_free_splitting, splitting_type, validate_monad, MonadP1, SplittingType, ViolationKind,
};

pub use fermat2::{fermat_char2_report, Char2Report, FERMAT2_MAX_EXT, PAPER_ECKARDT_COUNT};
pub use identities::{
    cuspidal_parametrization, verify_cuspidal_delta, verify_cuspidal_delta_with, verify_xi_eta,
};
pub use normal_form::{
    nodal_normal_form, tangent_section_normal_form, PlaneNormalForm, TangentSectionNormalForm,
};
pub use search::{
    build_very_free_curve, build_very_free_curve_with, char2_fermat_curve, find_nodal_section,
    find_nodal_section_with_budget, nodal_section_curve, BuildOptions, BuildStep, BuiltCurve,
    NodalSection, DEFAULT_SEARCH_BUDGET,
};
pub use sixpoints::{diagonal_points, six_point_diagonal, Incidence, SixPointCertificate};

/// One named comparison. Findings record agreement with a printed value
/// and never fail a report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub check_name: String,
    pub pass: bool,
    pub lhs: String,
    pub rhs: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub finding: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct VerificationReport {
    pub title: String,
    pub field: String,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new(title: &str, field: &FieldSpec) -> VerificationReport {
        VerificationReport {
            title: title.into(),
            field: field.spec_string(),
            checks: Vec::new(),
        }
    }

    pub fn check(
        &mut self,
        name: &str,
        pass: bool,
        lhs: impl fmt::Display,
        rhs: impl fmt::Display,
    ) {
        self.checks.push(Check {
            check_name: name.into(),
            pass,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            witness: None,
            finding: false,
        });
    }

    pub fn check_eq<T: PartialEq + fmt::Display>(&mut self, name: &str, lhs: &T, rhs: &T) {
        self.check(name, lhs == rhs, lhs, rhs);
    }

    pub fn finding(
        &mut self,
        name: &str,
        pass: bool,
        lhs: impl fmt::Display,
        rhs: impl fmt::Display,
        witness: Option<String>,
    ) {
        self.checks.push(Check {
            check_name: name.into(),
            pass,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            witness,
            finding: true,
        });
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.check_name == name)
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.finding || c.pass)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks
            .iter()
            .filter(|c| !c.finding && !c.pass)
            .collect()
    }

    pub fn findings(&self) -> Vec<&Check> {
        self.checks
            .iter()
            .filter(|c| c.finding && !c.pass)
            .collect()
    }

    /// The report itself when every check passes, otherwise a verification
    /// error naming the failures.
    pub fn into_result(self) -> Result<VerificationReport> {
        if self.passed() {
            return Ok(self);
        }
        let msg: Vec<String> = self
            .failures()
            .iter()
            .map(|c| format!("{}: {} ≠ {}", c.check_name, c.lhs, c.rhs))
            .collect();
        Err(Error::Verification(format!(
            "{}: {}",
            self.title,
            msg.join("; ")
        )))
    }
}

/// (U:V) ↦ (−U³−V³ : U²V : UV²), the normalization of X₀X₁X₂ + X₁³ + X₂³.
pub fn standard_nodal_parametrization(field: &FieldSpec) -> Vec<BinaryForm> {
    vec![
        BinaryForm::from_i64(field, &[-1, 0, 0, -1]),
        BinaryForm::from_i64(field, &[0, 1, 0, 0]),
        BinaryForm::from_i64(field, &[0, 0, 1, 0]),
    ]
}

/// Quotient of a Laurent form by a binary form, when it is again a Laurent
/// form.
pub fn laurent_div_binary(l: &LaurentForm, b: &BinaryForm) -> Option<LaurentForm> {
    let f = l.field();
    let (s, t) = (b.u_valuation()?, b.v_valuation()?);
    let stripped = b
        .div_exact(
            &BinaryForm::u(f)
                .pow(s as u32)
                .mul(&BinaryForm::v(f).pow(t as u32)),
        )
        .ok()?;
    if l.is_zero() {
        return Some(LaurentForm::zero(f, l.degree() - b.degree()));
    }
    let mi = l.terms().map(|(&(i, _), _)| i).min().unwrap();
    let mj = l.terms().map(|(&(_, j), _)| j).min().unwrap();
    let poly = l.div_monomial(mi, mj).to_binary()?;
    let q = poly.div_exact(&stripped).ok()?;
    Some(LaurentForm::from_binary(&q).div_monomial(-mi + s as i64, -mj + t as i64))
}

/// A rational section Σ cᵢ·∂/∂Xᵢ of h*T(twist), components Laurent forms of
/// common degree deg h + twist.
#[derive(Clone, Debug, PartialEq)]
pub struct LaurentSection {
    pub components: Vec<LaurentForm>,
    pub twist: i64,
}

impl LaurentSection {
    pub fn new(components: Vec<LaurentForm>, twist: i64) -> Result<LaurentSection> {
        let d = components
            .iter()
            .find(|c| !c.is_zero())
            .map(|c| c.degree())
            .ok_or_else(|| Error::InvalidArgument("zero section".into()))?;
        if let Some(bad) = components.iter().find(|c| !c.is_zero() && c.degree() != d) {
            return Err(Error::InvalidArgument(format!(
                "component {bad} has degree {}, expected {d}",
                bad.degree()
            )));
        }
        let f = components[0].field().clone();
        let components = components
            .into_iter()
            .map(|c| {
                if c.is_zero() {
                    LaurentForm::zero(&f, d)
                } else {
                    c
                }
            })
            .collect();
        Ok(LaurentSection { components, twist })
    }

    /// Components given as lists of c·U^i·V^j with integer c.
    pub fn from_terms(
        field: &FieldSpec,
        twist: i64,
        comps: &[&[(i64, i64, i64)]],
    ) -> Result<LaurentSection> {
        let parts = comps
            .iter()
            .map(|t| {
                if t.is_empty() {
                    Ok(LaurentForm::zero(field, 0))
                } else {
                    LaurentForm::from_terms(field, t)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        LaurentSection::new(parts, twist)
    }

    pub fn field(&self) -> &FieldSpec {
        self.components[0].field()
    }

    pub fn degree(&self) -> i64 {
        self.components[0].degree()
    }

    /// Σ cᵢ·βᵢ.
    pub fn contract(&self, beta: &[BinaryForm]) -> Result<LaurentForm> {
        let mut acc = LaurentForm::zero(self.field(), 0);
        for (c, b) in self.components.iter().zip(beta) {
            acc = acc.add(&c.mul_binary(b))?;
        }
        Ok(acc)
    }

    pub fn mul_binary(&self, b: &BinaryForm) -> LaurentSection {
        LaurentSection {
            components: self.components.iter().map(|c| c.mul_binary(b)).collect(),
            twist: self.twist + b.degree(),
        }
    }

    pub fn add(&self, other: &LaurentSection) -> Result<LaurentSection> {
        let comps = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.add(b))
            .collect::<Result<_>>()?;
        Ok(LaurentSection {
            components: comps,
            twist: self.twist,
        })
    }

    pub fn sub(&self, other: &LaurentSection) -> Result<LaurentSection> {
        let comps = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.sub(b))
            .collect::<Result<_>>()?;
        Ok(LaurentSection {
            components: comps,
            twist: self.twist,
        })
    }

    /// λ with self − other = λ·h, if it exists.
    pub fn euler_difference(
        &self,
        other: &LaurentSection,
        h: &[BinaryForm],
    ) -> Result<Option<LaurentForm>> {
        let diff = self.sub(other)?;
        let Some(i) = h.iter().position(|b| !b.is_zero()) else {
            return Err(Error::InvalidArgument("zero curve".into()));
        };
        let Some(lambda) = laurent_div_binary(&diff.components[i], &h[i]) else {
            return Ok(None);
        };
        for (c, b) in diff.components.iter().zip(h) {
            if *c != lambda.mul_binary(b) {
                return Ok(None);
            }
        }
        Ok(Some(lambda))
    }

    /// No pole along V = 0 (only powers of V in denominators) or along U = 0.
    pub fn regular_off(&self, u_chart: bool) -> bool {
        self.components.iter().all(|c| {
            c.terms()
                .all(|(&(i, j), _)| if u_chart { j >= 0 } else { i >= 0 })
        })
    }
}

impl fmt::Display for LaurentSection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

pub(crate) fn curve_strings(h: &[BinaryForm]) -> Vec<Vec<String>> {
    h.iter()
        .map(|b| b.coeffs().iter().map(|c| b.field().format(c)).collect())
        .collect()
}

pub(crate) fn format_curve(h: &[BinaryForm]) -> String {
    let parts: Vec<String> = h.iter().map(|b| b.to_string()).collect();
    parts.join("; ")
}

/// ∇f∘h, with identically zero partials given their expected degree.
pub(crate) fn pullback_gradient(f: &MultiPoly, h: &[BinaryForm]) -> Result<Vec<BinaryForm>> {
    let d = h.first().map_or(0, |c| c.degree());
    let e = f.homogeneous_degree().unwrap_or(1) as i64 - 1;
    f.gradient()
        .iter()
        .map(|g| {
            if g.is_zero() {
                Ok(BinaryForm::zero(f.field(), e * d))
            } else {
                g.compose_with_curve(h)
            }
        })
        .collect()
}

/// The monad O → O(d)^{n+1} → O(3d) with α = h and β = ∇f∘h, whose middle
/// cohomology is h*T_X.
pub fn pullback_tangent(x: &Hypersurface, h: &[BinaryForm]) -> Result<MonadP1> {
    let field = h
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty curve".into()))?
        .field()
        .clone();
    if h.len() != x.n() + 1 {
        return Err(Error::InvalidArgument(format!(
            "curve has {} components, expected {}",
            h.len(),
            x.n() + 1
        )));
    }
    let d = h[0].degree();
    if h.iter().any(|c| c.degree() != d || *c.field() != field) {
        return Err(Error::InvalidArgument(
            "curve components differ in degree or field".into(),
        ));
    }
    if d < 1 {
        return Err(Error::InvalidArgument("constant curve".into()));
    }
    let f = x.f().embed_into(&field)?;
    let image = f.compose_with_curve(h)?;
    if !image.is_zero() {
        return Err(Error::InvalidArgument(format!(
            "curve does not lie on the hypersurface: f∘h = {image}"
        )));
    }
    let beta = pullback_gradient(&f, h)?;
    let m = MonadP1 {
        field,
        a: 0,
        b: vec![d; h.len()],
        c: 3 * d,
        alpha: Some(h.to_vec()),
        beta: Some(beta),
    };
    match validate_monad(&m) {
        Ok(()) => Ok(m),
        Err(v) if v.kind == ViolationKind::BetaNotSurjective => Err(Error::Verification(format!(
            "hypersurface is singular along the curve: {v}"
        ))),
        Err(v) => Err(Error::InvalidArgument(format!("not a curve map: {v}"))),
    }
}

/// Splitting type of h*T_X and whether every summand has degree ≥ 1.
pub fn very_free(x: &Hypersurface, h: &[BinaryForm]) -> Result<(bool, SplittingType)> {
    let s = splitting_type(&pullback_tangent(x, h)?)?;
    Ok((is_very_free_splitting(&s), s))
}

/// A rational curve on a cubic hypersurface with the splitting of h*T_X.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveOnX {
    pub surface: Hypersurface,
    pub h: Vec<BinaryForm>,
    pub splitting: SplittingType,
    /// deg h*O(n−2), the degree against −K_X = O(n−2).
    pub anticanonical_degree: i64,
}

impl CurveOnX {
    pub fn new(x: &Hypersurface, h: Vec<BinaryForm>) -> Result<CurveOnX> {
        let (_, splitting) = very_free(x, &h)?;
        let anticanonical_degree = (x.n() as i64 - 2) * h[0].degree();
        Ok(CurveOnX {
            surface: x.clone(),
            h,
            splitting,
            anticanonical_degree,
        })
    }

    pub fn field(&self) -> &FieldSpec {
        self.h[0].field()
    }

    pub fn is_very_free(&self) -> bool {
        is_very_free_splitting(&self.splitting)
    }

    pub fn point_at(&self, u: &Scalar, v: &Scalar) -> Vec<Scalar> {
        self.h.iter().map(|b| b.eval(u, v)).collect()
    }
}

impl Serialize for CurveOnX {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CurveOnX", 5)?;
        st.serialize_field("surface", &self.surface.f().to_string())?;
        st.serialize_field("field", &self.field().spec_string())?;
        st.serialize_field("h", &curve_strings(&self.h))?;
        st.serialize_field("splitting", &self.splitting)?;
        st.serialize_field("anticanonical_degree", &self.anticanonical_degree)?;
        st.end()
    }
}
