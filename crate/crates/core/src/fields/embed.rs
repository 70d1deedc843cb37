use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use super::univariate::UniPoly;
use super::{FieldSpec, Scalar};
use crate::error::{Error, Result};

fn root_cache() -> &'static Mutex<HashMap<(u64, u32, u32), Scalar>> {
    static C: OnceLock<Mutex<HashMap<(u64, u32, u32), Scalar>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Image of the source generator in `target`: the least root (canonical
/// order) of the source modulus.
fn generator_image(source: &FieldSpec, target: &FieldSpec) -> Result<Scalar> {
    let key = (
        source.characteristic(),
        source.ext_degree(),
        target.ext_degree(),
    );
    if let Some(r) = root_cache().lock().unwrap().get(&key) {
        return Ok(r.clone());
    }
    let m: Vec<Scalar> = source
        .modulus()
        .iter()
        .map(|&c| target.from_i64(c as i64))
        .collect();
    let roots = UniPoly::new(target, m).roots()?;
    let r = roots
        .into_iter()
        .map(|(r, _)| r)
        .min()
        .ok_or_else(|| Error::Integrity("source modulus has no root in target".into()))?;
    root_cache().lock().unwrap().insert(key, r.clone());
    Ok(r)
}

/// Ring embedding F_{p^k} → F_{p^m} (k | m) sending the source generator to
/// the least root of its modulus in the target. ℚ embeds only into itself.
pub fn embed(source: &FieldSpec, x: &Scalar, target: &FieldSpec) -> Result<Scalar> {
    if source == target {
        return Ok(x.clone());
    }
    if source.characteristic() != target.characteristic() {
        return Err(Error::FieldMismatch(format!(
            "cannot embed {source} into {target}: characteristic mismatch"
        )));
    }
    if source.is_rational() {
        return Ok(x.clone());
    }
    let (k, m) = (source.ext_degree(), target.ext_degree());
    if m % k != 0 {
        return Err(Error::FieldMismatch(format!(
            "cannot embed {source} into {target}: {k} does not divide {m}"
        )));
    }
    let p = source.characteristic();
    let mut code = source.code(x);
    if k == 1 {
        return Ok(target.from_i64(code as i64));
    }
    let mut digits = Vec::with_capacity(k as usize);
    for _ in 0..k {
        digits.push(code % p);
        code /= p;
    }
    let r = generator_image(source, target)?;
    let mut acc = target.zero();
    for &d in digits.iter().rev() {
        acc = target.add(&target.mul(&acc, &r), &target.from_i64(d as i64));
    }
    Ok(acc)
}

/// The preimage of `x ∈ big` under the embedding `small → big`, or `None`
/// when x does not lie in the image.
pub fn restrict(big: &FieldSpec, x: &Scalar, small: &FieldSpec) -> Result<Option<Scalar>> {
    if big == small {
        return Ok(Some(x.clone()));
    }
    if big.is_rational() || small.is_rational() {
        return Err(Error::FieldMismatch(format!(
            "cannot restrict from {big} to {small}"
        )));
    }
    let (p, k, m) = (small.characteristic(), small.ext_degree(), big.ext_degree());
    if p != big.characteristic() || m % k != 0 {
        return Err(Error::FieldMismatch(format!(
            "{small} is not a subfield of {big}"
        )));
    }
    let digits = |code: u64| -> Vec<u64> {
        let mut c = code;
        (0..m)
            .map(|_| {
                let d = c % p;
                c /= p;
                d
            })
            .collect()
    };
    let target = digits(big.code(x));
    if k == 1 {
        return Ok(target[1..]
            .iter()
            .all(|&d| d == 0)
            .then(|| small.from_code(target[0])));
    }
    let fp = super::make_field(p, 1)?;
    let g = small.generator().unwrap();
    let cols: Vec<Vec<u64>> = (0..k as u64)
        .map(|i| Ok(digits(big.code(&embed(small, &small.pow(&g, i), big)?))))
        .collect::<Result<_>>()?;
    let mut mat: crate::linalg::Matrix = (0..m as usize)
        .map(|r| {
            let mut row: Vec<Scalar> = cols.iter().map(|c| fp.from_code(c[r])).collect();
            row.push(fp.from_code(target[r]));
            row
        })
        .collect();
    let pivots = crate::linalg::rref_in_place(&fp, &mut mat);
    if pivots.last() == Some(&(k as usize)) {
        return Ok(None);
    }
    let mut coeffs = vec![0u64; k as usize];
    for (r, &c) in pivots.iter().enumerate() {
        coeffs[c] = fp.code(&mat[r][k as usize]);
    }
    let code = coeffs.iter().rev().fold(0u64, |acc, &c| acc * p + c);
    Ok(Some(small.from_code(code)))
}
