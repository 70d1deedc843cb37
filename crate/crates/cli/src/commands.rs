use freecurve::constructions::{
    build_very_free_curve_with, fermat_char2_report, find_nodal_section_with_budget, nodal_section_curve,
    six_point_diagonal, BuildOptions, CurveOnX,
};
use freecurve::hypersurface::{
    eckardt_points, is_smooth, lines_on_cubic_surface_with_cap, Hypersurface, LineP3, ProjPoint, SectionTag,
};
use freecurve::poly::{parse_curve, parse_scalar};
use freecurve::sheaf_p1::{is_very_free_splitting, splitting_report, SplittingType};
use freecurve::{Error, FieldSpec, Result};
use serde_json::json;

use crate::paper::verify_paper;
use crate::report::Report;
use crate::Command;

pub fn name(c: &Command) -> &'static str {
    match c {
        Command::VerifyPaper => "verify-paper",
        Command::Splitting { .. } => "splitting",
        Command::Smooth { .. } => "smooth",
        Command::Lines { .. } => "lines",
        Command::Eckardt { .. } => "eckardt",
        Command::Construct { .. } => "construct",
        Command::Build { .. } => "build",
        Command::Fermat2 { .. } => "fermat2",
        Command::Sixpoints { .. } => "sixpoints",
    }
}

pub fn run(c: &Command) -> Result<Report> {
    match c {
        Command::VerifyPaper => verify_paper(),
        Command::Splitting { field, surface, curve, expect } => splitting(field, surface, curve, expect.as_deref()),
        Command::Smooth { field, poly, dim } => smooth(field, poly, *dim),
        Command::Lines { field, surface, ext_cap } => lines(field, surface, *ext_cap),
        Command::Eckardt { field, surface, ext_cap } => eckardt(field, surface, *ext_cap),
        Command::Construct { field, surface, budget } => construct(field, surface, *budget),
        Command::Build { field, dim, poly, seed, hyperplane_budget, search_budget } => build(
            field,
            *dim,
            poly,
            &BuildOptions { seed: *seed, hyperplane_budget: *hyperplane_budget, search_budget: *search_budget },
        ),
        Command::Fermat2 { ext } => fermat2(*ext),
        Command::Sixpoints { field, points } => sixpoints(field, points),
    }
}

/// Largest index i with Xi occurring in the text.
pub fn infer_dim(text: &str) -> Option<usize> {
    let b = text.as_bytes();
    let mut best = None;
    for (i, &c) in b.iter().enumerate() {
        if c != b'X' {
            continue;
        }
        let digits: String = text[i + 1..].chars().take_while(|d| d.is_ascii_digit()).collect();
        if let Ok(k) = digits.parse::<usize>() {
            best = best.max(Some(k));
        }
    }
    best
}

fn surface(field: &FieldSpec, text: &str, n: Option<usize>) -> Result<Hypersurface> {
    let n = n.or_else(|| infer_dim(text)).ok_or_else(|| Error::InvalidArgument("no variables X0, X1, … found".into()))?;
    Hypersurface::parse(text, n.max(1), field)
}

pub fn parse_splitting(text: &str) -> Result<Vec<i64>> {
    let mut parts = text
        .split(',')
        .map(|s| s.trim().parse::<i64>().map_err(|_| Error::InvalidArgument(format!("bad splitting entry {s:?}"))))
        .collect::<Result<Vec<i64>>>()?;
    parts.sort_unstable_by(|a, b| b.cmp(a));
    Ok(parts)
}

pub fn curve_json(c: &CurveOnX) -> serde_json::Value {
    let mut v = serde_json::to_value(c).expect("curve serializes");
    v["splitting"] = json!(c.splitting.parts());
    v["very_free"] = json!(c.is_very_free());
    v
}

fn on_surface(x: &Hypersurface, c: &CurveOnX) -> Result<bool> {
    let xl = x.embed_into(c.field())?;
    Ok(xl.f().compose_with_curve(&c.h)?.is_zero())
}

fn splitting(field: &str, surf: &str, curve: &str, expect: Option<&str>) -> Result<Report> {
    let f = FieldSpec::parse(field)?;
    let h = parse_curve(curve, &f)?;
    let x = surface(&f, surf, Some(h.len().saturating_sub(1)))?;
    let mut r = Report::new("splitting", Some(f.spec_string()));
    let image = x.f().compose_with_curve(&h)?;
    r.check("curve_on_hypersurface", None, image.is_zero(), format!("f∘h = {image}"));
    if !image.is_zero() {
        return Ok(r);
    }
    let m = freecurve::constructions::pullback_tangent(&x, &h)?;
    let rep = splitting_report(&m)?;
    let parts = rep.splitting.parts().to_vec();
    if let Some(e) = expect {
        let want = parse_splitting(e)?;
        let want_st = SplittingType::new(want.clone());
        r.check("splitting_as_expected", None, parts == want, format!("{} vs {want_st}", rep.splitting));
    }
    r.result = json!({
        "splitting": parts,
        "very_free": is_very_free_splitting(&rep.splitting),
        "h0": rep.h0,
        "riemann_roch": rep.riemann_roch,
    });
    Ok(r)
}

fn smooth(field: &str, poly: &str, dim: Option<usize>) -> Result<Report> {
    let f = FieldSpec::parse(field)?;
    let x = surface(&f, poly, dim)?;
    let mut r = Report::new("smooth", Some(f.spec_string()));
    r.result = json!(is_smooth(&x)?);
    Ok(r)
}

fn meets(lines: &[LineP3], i: usize) -> Result<usize> {
    let mut n = 0;
    for (j, m) in lines.iter().enumerate() {
        if j != i && lines[i].meet(m)?.is_some() {
            n += 1;
        }
    }
    Ok(n)
}

pub fn line_checks(r: &mut Report, prefix: &str, anchor: Option<&str>, lines: &[LineP3]) -> Result<()> {
    r.check(format!("{prefix}twenty_seven_lines"), anchor, lines.len() == 27, format!("{} lines", lines.len()));
    let degrees = (0..lines.len()).map(|i| meets(lines, i)).collect::<Result<Vec<_>>>()?;
    let bad = degrees.iter().filter(|&&d| d != 10).count();
    r.check(format!("{prefix}each_line_meets_ten"), None, bad == 0, format!("{bad} lines meet other than 10 others"));
    Ok(())
}

fn lines(field: &str, surf: &str, cap: u32) -> Result<Report> {
    let f = FieldSpec::parse(field)?;
    let x = surface(&f, surf, Some(3))?;
    let res = lines_on_cubic_surface_with_cap(&x, cap)?;
    let mut r = Report::new("lines", Some(f.spec_string()));
    line_checks(&mut r, "", None, &res.lines)?;
    r.result = serde_json::to_value(&res).expect("lines serialize");
    Ok(r)
}

fn eckardt(field: &str, surf: &str, cap: u32) -> Result<Report> {
    let f = FieldSpec::parse(field)?;
    let x = surface(&f, surf, Some(3))?;
    let res = lines_on_cubic_surface_with_cap(&x, cap)?;
    let c = eckardt_points(&res.lines)?;
    let mut r = Report::new("eckardt", Some(f.spec_string()));
    let (e, t) = (c.eckardt.len(), c.two_line.len());
    r.check(
        "pair_count_identity",
        None,
        c.incident_pairs == 3 * e + t,
        format!("{} pairs = 3·{e} + {t}", c.incident_pairs),
    );
    r.result = json!({
        "lines_field": res.field.spec_string(),
        "eckardt_count": e,
        "two_line_count": t,
        "incident_pairs": c.incident_pairs,
        "eckardt": c.eckardt.iter().map(|p| p.point.to_string()).collect::<Vec<_>>(),
    });
    Ok(r)
}

fn construct(field: &str, surf: &str, budget: usize) -> Result<Report> {
    let f = FieldSpec::parse(field)?;
    let x = surface(&f, surf, Some(3))?;
    let ns = find_nodal_section_with_budget(&x, budget)?;
    let c = nodal_section_curve(&x, &ns)?;
    let mut r = Report::new("construct", Some(f.spec_string()));
    r.check(
        "nodal_integral_section",
        None,
        ns.class.tag == SectionTag::NodalIntegral,
        format!("{} at {}", ns.class.tag, ns.x),
    );
    r.check("curve_on_surface", None, on_surface(&x, &c)?, "f∘h = 0");
    r.check("splitting", None, c.splitting.parts() == [2, 1], c.splitting.to_string());
    r.check("very_free", None, c.is_very_free(), c.is_very_free().to_string());
    r.result = json!({ "section": ns, "curve": curve_json(&c) });
    Ok(r)
}

fn build(field: &str, dim: usize, poly: &str, opts: &BuildOptions) -> Result<Report> {
    let f = FieldSpec::parse(field)?;
    let x = Hypersurface::parse(poly, dim, &f)?;
    let b = build_very_free_curve_with(&x, opts)?;
    let mut r = Report::new("build", Some(f.spec_string()));
    let parts = b.curve.splitting.parts();
    let expected_degree = 3 * (dim as i64 - 2);
    r.check("curve_on_hypersurface", None, on_surface(&x, &b.curve)?, "f∘h = 0");
    r.check(
        "splitting_degree",
        None,
        b.curve.splitting.degree() == expected_degree,
        format!("{} has degree {}, expected {expected_degree}", b.curve.splitting, b.curve.splitting.degree()),
    );
    r.check("very_free", None, parts.iter().all(|&d| d >= 1), b.curve.splitting.to_string());
    let sections = b.steps.iter().filter(|s| s.action == "smooth hyperplane section").count();
    r.check(
        "smooth_sections_certified",
        None,
        sections == dim.saturating_sub(3),
        format!("{sections} smooth hyperplane sections"),
    );
    r.result = json!({ "curve": curve_json(&b.curve), "steps": b.steps });
    Ok(r)
}

fn fermat2(ext: u32) -> Result<Report> {
    let rep = fermat_char2_report(ext)?;
    let mut r = Report::new("fermat2", Some(rep.report.field.clone()));
    r.absorb("", &rep.report, |_| None);
    r.result = json!({
        "ext": rep.ext,
        "points": rep.points,
        "class_counts": rep.class_counts,
        "exceptions": rep.exceptions.iter().map(|(p, t)| format!("{p}: {t}")).collect::<Vec<_>>(),
        "eckardt_count": rep.census.eckardt.len(),
        "two_line_count": rep.census.two_line.len(),
        "incident_pairs": rep.census.incident_pairs,
    });
    Ok(r)
}

pub fn parse_points(field: &FieldSpec, text: &str) -> Result<Vec<ProjPoint>> {
    text.split(';')
        .map(|p| {
            let coords = p.split(':').map(|c| parse_scalar(c.trim(), field)).collect::<Result<Vec<_>>>()?;
            ProjPoint::new(field, coords)
        })
        .collect()
}

fn sixpoints(field: &str, points: &str) -> Result<Report> {
    let f = FieldSpec::parse(field)?;
    let pts = parse_points(&f, points)?;
    let (q, cert) = six_point_diagonal(&pts)?;
    let mut r = Report::new("sixpoints", Some(f.spec_string()));
    let incident = |prefix: &str| cert.incidences.iter().filter(|i| i.object.starts_with(prefix) && i.incident).count();
    r.check("on_exactly_two_lines", None, incident("line") == 2, format!("{} lines through {q}", incident("line")));
    r.check("not_one_of_the_points", None, incident("point") == 0, format!("{} coincidences", incident("point")));
    r.check("off_the_six_conics", None, incident("conic") == 0, format!("{} conics through {q}", incident("conic")));
    r.result = serde_json::to_value(&cert).expect("certificate serializes");
    Ok(r)
}
