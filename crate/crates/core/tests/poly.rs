use freecurve::fields::{find_roots, make_field, FieldSpec};
use freecurve::linalg;
use freecurve::poly::{
    gcd_bin, groebner_basis, is_unit_ideal, normal_form, parse_curve, parse_poly,
    parse_poly_affine, resultant_bin, BinaryForm, MultiPoly,
};
use freecurve::{Error, Scalar};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_form(f: &FieldSpec, nvars: usize, degree: u32, rng: &mut ChaCha8Rng) -> MultiPoly {
    let mut p = MultiPoly::zero(f, nvars);
    for e in exponents(nvars, degree) {
        p.add_term(e, &f.random(rng));
    }
    p
}

fn exponents(nvars: usize, degree: u32) -> Vec<Vec<u32>> {
    if nvars == 1 {
        return vec![vec![degree]];
    }
    let mut out = Vec::new();
    for k in 0..=degree {
        for mut rest in exponents(nvars - 1, degree - k) {
            rest.insert(0, k);
            out.push(rest);
        }
    }
    out
}

#[test]
fn parses_spec_examples() {
    let f7 = make_field(7, 1).unwrap();
    let p = parse_poly("X0*X1*X2 + X1^3 + X2^3", 4, &f7).unwrap();
    assert_eq!(p.num_terms(), 3);
    assert_eq!(p.homogeneous_degree(), Some(3));
    let f2 = make_field(2, 1).unwrap();
    let fermat = parse_poly("X0^3+X1^3+X2^3+X3^3", 4, &f2).unwrap();
    assert_eq!(fermat.num_terms(), 4);
    assert!(matches!(
        parse_poly("X0+X1^2", 4, &f7),
        Err(Error::Inhomogeneous(1, 2))
    ));
}

#[test]
fn partial_derivatives() {
    let q = FieldSpec::rational();
    let f = parse_poly("X0*X1*X2 + X1^3", 3, &q).unwrap();
    assert_eq!(
        f.partial_derivative(1),
        parse_poly("X0*X2 + 3*X1^2", 3, &q).unwrap()
    );
    let f3 = make_field(3, 1).unwrap();
    assert!(parse_poly("X1^3", 3, &f3)
        .unwrap()
        .partial_derivative(1)
        .is_zero());
}

/// Oracle: expand Σ Xᵢ ∂ᵢf term by term and compare with 3f.
#[test]
fn euler_identity_on_random_cubics() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for p in [7, 2] {
        let f = make_field(p, 1).unwrap();
        for _ in 0..20 {
            let g = random_form(&f, 4, 3, &mut rng);
            let mut lhs = MultiPoly::zero(&f, 4);
            for i in 0..4 {
                lhs = lhs.add(&MultiPoly::var(&f, 4, i).mul(&g.partial_derivative(i)));
            }
            assert_eq!(lhs, g.scale(&f.from_i64(3)));
        }
    }
}

#[test]
fn linear_substitution_examples() {
    let f5 = make_field(5, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let g = random_form(&f5, 4, 3, &mut rng);
    assert_eq!(g.linear_substitute(&linalg::identity(&f5, 4)).unwrap(), g);
    let mut done = 0;
    while done < 10 {
        let m: linalg::Matrix = (0..4)
            .map(|_| (0..4).map(|_| f5.random(&mut rng)).collect())
            .collect();
        let Ok(inv) = linalg::inverse(&f5, &m) else {
            assert!(matches!(
                g.linear_substitute(&m),
                Err(Error::SingularMatrix)
            ));
            continue;
        };
        let back = g
            .linear_substitute(&m)
            .unwrap()
            .linear_substitute(&inv)
            .unwrap();
        assert_eq!(back, g);
        done += 1;
    }
}

#[test]
fn shift_of_x0_removes_mixed_cubic_terms() {
    let q = FieldSpec::rational();
    let (a0, a1, a2, a3) = (2, 5, -3, 7);
    let f = parse_poly(
        &format!("X0*X1*X2 + {a0}*X1^3 + {a1}*X1^2*X2 + ({a2})*X1*X2^2 + {a3}*X2^3"),
        3,
        &q,
    )
    .unwrap();
    let m: linalg::Matrix = vec![
        vec![q.one(), q.from_i64(-a1), q.from_i64(-a2)],
        vec![q.zero(), q.one(), q.zero()],
        vec![q.zero(), q.zero(), q.one()],
    ];
    let g = f.linear_substitute(&m).unwrap();
    assert!(q.is_zero(&g.coeff(&[0, 2, 1])));
    assert!(q.is_zero(&g.coeff(&[0, 1, 2])));
    assert_eq!(g.coeff(&[0, 3, 0]), q.from_i64(a0));
}

#[test]
fn composition_examples() {
    let f7 = make_field(7, 1).unwrap();
    let h = parse_curve("-U^3-V^3;U^2*V;U*V^2", &f7).unwrap();
    let nodal = parse_poly("X0*X1*X2 + X1^3 + X2^3", 3, &f7).unwrap();
    assert!(nodal.compose_with_curve(&h).unwrap().is_zero());
    let q = parse_poly("X1*X2", 3, &f7).unwrap();
    assert_eq!(
        q.compose_with_curve(&h).unwrap(),
        BinaryForm::monomial(&f7, 6, 3, f7.one())
    );
    let f2 = make_field(2, 1).unwrap();
    let fermat = parse_poly("X0^3+X1^3+X2^3+X3^3", 4, &f2).unwrap();
    let h2 = parse_curve("U^3+U^2*V;U^3+U^2*V+V^3;U^2*V+V^3;U*V^2", &f2).unwrap();
    assert!(fermat.compose_with_curve(&h2).unwrap().is_zero());
    let mixed = vec![
        BinaryForm::u(&f7),
        BinaryForm::from_i64(&f7, &[1, 0, 0]),
        BinaryForm::u(&f7),
    ];
    assert!(nodal.compose_with_curve(&mixed).is_err());
}

/// Oracle: Sylvester determinants written out by hand.
#[test]
fn resultant_examples() {
    let q = FieldSpec::rational();
    let uv = BinaryForm::from_i64(&q, &[0, 1, 0]);
    let r = resultant_bin(&uv, &BinaryForm::from_i64(&q, &[1, 0, 0, 1])).unwrap();
    assert!(r == q.one() || r == q.from_i64(-1));
    assert!(q.is_zero(&resultant_bin(&uv, &BinaryForm::from_i64(&q, &[1, 0, 0, 0])).unwrap()));
    let v2 = BinaryForm::from_i64(&q, &[0, 0, 1]);
    assert!(!q.is_zero(&resultant_bin(&v2, &BinaryForm::from_i64(&q, &[1, 0, 0, 0])).unwrap()));
    assert!(resultant_bin(&BinaryForm::zero(&q, 2), &v2).is_err());
}

#[test]
fn gcd_examples() {
    let q = FieldSpec::rational();
    let a = BinaryForm::from_i64(&q, &[0, 1, 0, 0]);
    let b = BinaryForm::from_i64(&q, &[0, 0, 1, 0]);
    assert_eq!(gcd_bin(&a, &b), BinaryForm::from_i64(&q, &[0, 1, 0]));
    let f7 = make_field(7, 1).unwrap();
    let c = BinaryForm::from_i64(&f7, &[-1, 0, 0, -1]);
    let d = BinaryForm::from_i64(&f7, &[0, 1, 0, 0]);
    assert_eq!(gcd_bin(&c, &d), BinaryForm::constant(&f7, f7.one()));
    assert_eq!(gcd_bin(&c, &BinaryForm::zero(&f7, 2)), c.monic());
}

#[test]
fn groebner_examples() {
    let q = FieldSpec::rational();
    let gb = groebner_basis(&[
        parse_poly_affine("X0 - 1", 1, &q).unwrap(),
        parse_poly_affine("X0", 1, &q).unwrap(),
    ])
    .unwrap();
    assert_eq!(gb, vec![MultiPoly::constant(&q, 1, q.one())]);

    // Hand run: S(X0^2, X0X1+X1^2) = X0X1^2 → −X1^3.
    let gb = groebner_basis(&[
        parse_poly("X0^2", 2, &q).unwrap(),
        parse_poly("X0*X1 + X1^2", 2, &q).unwrap(),
    ])
    .unwrap();
    assert!(gb.contains(&parse_poly("X1^3", 2, &q).unwrap()));
    assert!(groebner_basis(&[]).unwrap().is_empty());

    assert!(is_unit_ideal(&[
        parse_poly_affine("X0", 1, &q).unwrap(),
        parse_poly_affine("X0 - 1", 1, &q).unwrap(),
    ])
    .unwrap());
    assert!(!is_unit_ideal(&[
        parse_poly_affine("X0", 2, &q).unwrap(),
        parse_poly_affine("X1", 2, &q).unwrap(),
    ])
    .unwrap());
}

/// Oracle: scan the X0 = 1 chart over F₇ and F₄₉ for common zeros of f and
/// its partials; none exist, and the basis contains a constant.
#[test]
fn fermat_chart_ideal_is_unit_over_f7() {
    let f7 = make_field(7, 1).unwrap();
    let f = parse_poly("X0^3+X1^3+X2^3+X3^3", 4, &f7).unwrap();
    let mut gens = vec![f.dehomogenize(0)];
    gens.extend(f.gradient().iter().map(|d| d.dehomogenize(0)));
    let gb = groebner_basis(&gens).unwrap();
    assert!(gb.iter().any(|g| g.is_constant() && !g.is_zero()));
    for field in [f7.clone(), make_field(7, 2).unwrap()] {
        let g: Vec<MultiPoly> = gens.iter().map(|p| p.embed_into(&field).unwrap()).collect();
        for a in field.elements() {
            for b in field.elements() {
                for c in field.elements() {
                    let pt = [a.clone(), b.clone(), c.clone()];
                    assert!(g.iter().any(|p| !field.is_zero(&p.eval(&pt))));
                }
            }
        }
    }
}

fn check_auto_reduced(gb: &[MultiPoly]) {
    use freecurve::poly::groebner::leading_exponent;
    let leads: Vec<Vec<u32>> = gb.iter().map(|g| leading_exponent(g).unwrap()).collect();
    for (i, a) in leads.iter().enumerate() {
        for (j, b) in leads.iter().enumerate() {
            if i != j {
                assert!(
                    !a.iter().zip(b).all(|(x, y)| x <= y),
                    "lead {a:?} divides {b:?}"
                );
            }
        }
    }
    for a in gb {
        for b in gb {
            let (la, lb) = (leading_exponent(a).unwrap(), leading_exponent(b).unwrap());
            let l: Vec<u32> = la.iter().zip(&lb).map(|(x, y)| *x.max(y)).collect();
            let f = a.field();
            let ma =
                MultiPoly::monomial(f, l.iter().zip(&la).map(|(x, y)| x - y).collect(), f.one());
            let mb =
                MultiPoly::monomial(f, l.iter().zip(&lb).map(|(x, y)| x - y).collect(), f.one());
            let s = ma
                .mul(a)
                .scale(&f.inv(&a.coeff(&la)).unwrap())
                .sub(&mb.mul(b).scale(&f.inv(&b.coeff(&lb)).unwrap()));
            assert!(normal_form(&s, gb).is_zero());
        }
    }
}

#[test]
fn groebner_output_is_auto_reduced() {
    let f5 = make_field(5, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..10 {
        let gens: Vec<MultiPoly> = (0..2).map(|_| random_form(&f5, 3, 2, &mut rng)).collect();
        let gb = groebner_basis(&gens).unwrap();
        check_auto_reduced(&gb);
        for g in &gens {
            assert!(normal_form(g, &gb).is_zero());
        }
    }
}

fn shares_root_by_scan(a: &BinaryForm, b: &BinaryForm) -> bool {
    let f = a.field();
    if f.is_zero(a.coeff(0)) && f.is_zero(b.coeff(0)) {
        return true;
    }
    let cap = (a.degree() * b.degree()) as u32;
    let ra = find_roots(&a.dehomogenize(), cap).unwrap();
    ra.iter().any(|r| {
        let bb = b.dehomogenize().embed_into(&r.field).unwrap();
        r.field.is_zero(&bb.eval(&r.root))
    })
}

fn scalar_strategy(p: u64) -> impl Strategy<Value = i64> {
    0..p as i64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn resultant_gcd_roots_agree(
        a in proptest::collection::vec(scalar_strategy(5), 3),
        b in proptest::collection::vec(scalar_strategy(5), 3),
    ) {
        let f5 = make_field(5, 1).unwrap();
        let a = BinaryForm::from_i64(&f5, &a);
        let b = BinaryForm::from_i64(&f5, &b);
        prop_assume!(!a.is_zero() && !b.is_zero());
        let res_zero = f5.is_zero(&resultant_bin(&a, &b).unwrap());
        let g = gcd_bin(&a, &b);
        prop_assert_eq!(res_zero, g.degree() > 0);
        prop_assert_eq!(res_zero, shares_root_by_scan(&a, &b));
    }

    #[test]
    fn parse_print_round_trip(seed in any::<u64>(), which in 0usize..4) {
        let field = [
            FieldSpec::rational(),
            make_field(7, 1).unwrap(),
            make_field(2, 2).unwrap(),
            make_field(3, 2).unwrap(),
        ][which].clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut p = MultiPoly::zero(&field, 3);
        for e in exponents(3, 3) {
            if rng.gen_bool(0.4) {
                let c: Scalar = if field.is_rational() {
                    field.from_ratio(rng.gen_range(-9..=9), rng.gen_range(1..=4)).unwrap()
                } else {
                    field.random(&mut rng)
                };
                p.add_term(e, &c);
            }
        }
        let text = p.to_string();
        let back = if p.is_zero() {
            parse_poly_affine(&text, 3, &field).unwrap()
        } else {
            parse_poly(&text, 3, &field).unwrap()
        };
        prop_assert_eq!(back, p);
    }
}
