//! Exact scalars over ℚ and over finite fields F_{p^k}.
//!
//! A [`FieldSpec`] is a cheap, shareable handle on the arithmetic context;
//! a [`Scalar`] is a bare value whose meaning depends on the field it is
//! used with. Finite-field elements are encoded by the integer
//! Σ cᵢ pⁱ of their coefficient vector in the basis 1, g, g², … where g is a
//! root of the field's modulus. That integer order is the canonical
//! enumeration order used by every search in the crate.

mod embed;
pub(crate) mod fp;
pub mod univariate;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use embed::{embed, restrict};
pub use univariate::{find_roots, FoundRoot, UniPoly};

/// Fields up to this size get log/Zech tables.
const TABLE_CAP: u64 = 1 << 20;
/// Largest field order accepted (codes must fit comfortably in a u64).
const ORDER_CAP: u64 = 1 << 62;
const NO_LOG: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Rat(BigRational),
    Fin(u64),
}

struct Tables {
    log: Vec<u32>,
    exp: Vec<u32>,
    zech: Vec<u32>,
}

struct FieldData {
    p: u64,
    k: u32,
    size: u64,
    modulus: Vec<u64>,
    tables: Option<Tables>,
}

/// Handle on ℚ or on a finite field F_{p^k}. Cloning is cheap.
#[derive(Clone)]
pub struct FieldSpec(Arc<FieldData>);

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.k == other.0.k
    }
}
impl Eq for FieldSpec {}

impl std::hash::Hash for FieldSpec {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        (&self.0.p, self.0.k).hash(state);
    }
}

impl PartialOrd for FieldSpec {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldSpec {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (&self.0.p, self.0.k).cmp(&(&other.0.p, other.0.k))
    }
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldSpec({})", self.spec_string())
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec_string())
    }
}

fn registry() -> &'static Mutex<HashMap<(u64, u32), FieldSpec>> {
    static REG: OnceLock<Mutex<HashMap<(u64, u32), FieldSpec>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Builds ℚ (`p = 0`) or F_{p^k}. Extension moduli are the least monic
/// irreducible polynomials in canonical order, so results are reproducible.
pub fn make_field(p: u64, k: u32) -> Result<FieldSpec> {
    if k < 1 {
        return Err(Error::InvalidField(format!("extension degree {k} < 1")));
    }
    if p == 0 {
        if k != 1 {
            return Err(Error::InvalidField("Q has no extensions here".into()));
        }
    } else if !fp::is_prime(p) {
        return Err(Error::InvalidField(format!("{p} is not prime")));
    } else if p >= 1 << 31 {
        return Err(Error::InvalidField(format!("characteristic {p} too large")));
    }
    if let Some(f) = registry().lock().unwrap().get(&(p, k)) {
        return Ok(f.clone());
    }
    let field = build_field(p, k)?;
    let mut reg = registry().lock().unwrap();
    Ok(reg.entry((p, k)).or_insert(field).clone())
}

fn build_field(p: u64, k: u32) -> Result<FieldSpec> {
    if p == 0 {
        return Ok(FieldSpec(Arc::new(FieldData {
            p: 0,
            k: 1,
            size: 0,
            modulus: Vec::new(),
            tables: None,
        })));
    }
    let mut size: u64 = 1;
    for _ in 0..k {
        size = size
            .checked_mul(p)
            .filter(|&s| s < ORDER_CAP)
            .ok_or_else(|| Error::InvalidField(format!("{p}^{k} is too large")))?;
    }
    let modulus = if k == 1 {
        vec![0, 1]
    } else {
        fp::least_irreducible(p, k)
    };
    let mut data = FieldData {
        p,
        k,
        size,
        modulus,
        tables: None,
    };
    if k > 1 && size <= TABLE_CAP {
        data.tables = Some(build_tables(&data));
    }
    Ok(FieldSpec(Arc::new(data)))
}

fn build_tables(d: &FieldData) -> Tables {
    let q1 = d.size - 1;
    let factors = fp::distinct_prime_factors(q1);
    let mut gamma = 0;
    for c in 2..d.size {
        if factors.iter().all(|r| generic_pow(d, c, q1 / r) != 1) {
            gamma = c;
            break;
        }
    }
    assert!(gamma != 0 || d.size == 2);
    if d.size == 2 {
        gamma = 1;
    }
    let mut exp = Vec::with_capacity(q1 as usize);
    let mut log = vec![NO_LOG; d.size as usize];
    let mut cur = 1u64;
    for i in 0..q1 {
        exp.push(cur as u32);
        log[cur as usize] = i as u32;
        cur = generic_mul(d, cur, gamma);
    }
    let zech = (0..q1)
        .map(|n| {
            let v = generic_add(d, exp[n as usize] as u64, 1);
            if v == 0 {
                NO_LOG
            } else {
                log[v as usize]
            }
        })
        .collect();
    Tables { log, exp, zech }
}

fn decode(d: &FieldData, mut code: u64) -> Vec<u64> {
    let mut out = Vec::with_capacity(d.k as usize);
    for _ in 0..d.k {
        out.push(code % d.p);
        code /= d.p;
    }
    out
}

fn encode(d: &FieldData, digits: &[u64]) -> u64 {
    digits.iter().rev().fold(0u64, |acc, &c| acc * d.p + c)
}

fn generic_add(d: &FieldData, a: u64, b: u64) -> u64 {
    if d.p == 2 {
        return a ^ b;
    }
    if d.k == 1 {
        return (a + b) % d.p;
    }
    let (mut a, mut b) = (a, b);
    let mut out = 0u64;
    let mut place = 1u64;
    for _ in 0..d.k {
        let s = (a % d.p + b % d.p) % d.p;
        out += s * place;
        place = place.wrapping_mul(d.p);
        a /= d.p;
        b /= d.p;
    }
    out
}

fn generic_neg(d: &FieldData, a: u64) -> u64 {
    if d.p == 2 {
        return a;
    }
    if d.k == 1 {
        return (d.p - a) % d.p;
    }
    let digits: Vec<u64> = decode(d, a).into_iter().map(|c| (d.p - c) % d.p).collect();
    encode(d, &digits)
}

fn generic_mul(d: &FieldData, a: u64, b: u64) -> u64 {
    if d.k == 1 {
        return fp::mulmod(a, b, d.p);
    }
    let prod = fp::mul(&decode(d, a), &decode(d, b), d.p);
    let mut r = fp::rem(&prod, &d.modulus, d.p);
    r.resize(d.k as usize, 0);
    encode(d, &r)
}

fn generic_pow(d: &FieldData, a: u64, mut e: u64) -> u64 {
    let mut result = 1u64;
    let mut b = a;
    while e > 0 {
        if e & 1 == 1 {
            result = generic_mul(d, result, b);
        }
        b = generic_mul(d, b, b);
        e >>= 1;
    }
    result
}

impl FieldSpec {
    pub fn rational() -> FieldSpec {
        make_field(0, 1).expect("Q is always constructible")
    }

    /// Parses `"Q"`, `"q"` (a prime) or `"p^k"`. A prime power written as a
    /// plain integer (e.g. `"16"`) is also accepted.
    pub fn parse(text: &str) -> Result<FieldSpec> {
        let t = text.trim();
        if t.eq_ignore_ascii_case("q") {
            return Ok(FieldSpec::rational());
        }
        let bad = || Error::InvalidField(format!("cannot parse field spec {text:?}"));
        if let Some((a, b)) = t.split_once('^') {
            let p: u64 = a.trim().parse().map_err(|_| bad())?;
            let k: u32 = b.trim().parse().map_err(|_| bad())?;
            return make_field(p, k);
        }
        let q: u64 = t.parse().map_err(|_| bad())?;
        if q < 2 {
            return Err(bad());
        }
        let mut p = 2;
        while q % p != 0 {
            p += 1;
        }
        let mut k = 0;
        let mut r = q;
        while r % p == 0 {
            r /= p;
            k += 1;
        }
        if r != 1 {
            return Err(Error::InvalidField(format!("{q} is not a prime power")));
        }
        make_field(p, k)
    }

    pub fn spec_string(&self) -> String {
        match (self.0.p, self.0.k) {
            (0, _) => "Q".to_string(),
            (p, 1) => p.to_string(),
            (p, k) => format!("{p}^{k}"),
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.0.p
    }

    pub fn ext_degree(&self) -> u32 {
        self.0.k
    }

    /// Number of elements; `None` for ℚ.
    pub fn order(&self) -> Option<u64> {
        (self.0.p != 0).then_some(self.0.size)
    }

    pub fn is_rational(&self) -> bool {
        self.0.p == 0
    }

    pub fn is_finite(&self) -> bool {
        self.0.p != 0
    }

    /// Monic modulus, low degree first (`[0, 1]` for prime fields, empty for ℚ).
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    /// The field F_{p^{k·j}} containing this one.
    pub fn extension(&self, j: u32) -> Result<FieldSpec> {
        if self.is_rational() {
            if j == 1 {
                return Ok(self.clone());
            }
            return Err(Error::Unsupported("extensions of Q".into()));
        }
        make_field(self.0.p, self.0.k * j)
    }

    pub fn zero(&self) -> Scalar {
        if self.is_rational() {
            Scalar::Rat(BigRational::zero())
        } else {
            Scalar::Fin(0)
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        if self.is_rational() {
            Scalar::Rat(BigRational::from_integer(BigInt::from(n)))
        } else {
            Scalar::Fin(n.rem_euclid(self.0.p as i64) as u64)
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        if self.is_rational() {
            Scalar::Rat(BigRational::from_integer(n.clone()))
        } else {
            let p = BigInt::from(self.0.p);
            let r = ((n % &p) + &p) % &p;
            Scalar::Fin(r.to_u64().unwrap())
        }
    }

    pub fn from_ratio(&self, num: i64, den: i64) -> Result<Scalar> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        self.div(&self.from_i64(num), &self.from_i64(den))
    }

    /// Element with the given canonical code (finite fields only).
    pub fn from_code(&self, code: u64) -> Scalar {
        debug_assert!(self.is_finite() && code < self.0.size);
        Scalar::Fin(code)
    }

    /// Canonical code of a finite-field element.
    pub fn code(&self, x: &Scalar) -> u64 {
        match x {
            Scalar::Fin(c) => *c,
            Scalar::Rat(_) => panic!("rational scalar used in a finite field"),
        }
    }

    fn rat<'a>(&self, x: &'a Scalar) -> &'a BigRational {
        match x {
            Scalar::Rat(r) => r,
            Scalar::Fin(_) => panic!("finite-field scalar used in Q"),
        }
    }

    /// The root g of the modulus (only meaningful when k > 1).
    pub fn generator(&self) -> Option<Scalar> {
        (self.is_finite() && self.0.k > 1).then(|| Scalar::Fin(self.0.p))
    }

    pub fn is_zero(&self, x: &Scalar) -> bool {
        match x {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Fin(c) => *c == 0,
        }
    }

    pub fn is_one(&self, x: &Scalar) -> bool {
        match x {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Fin(c) => *c == 1,
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        let d = &*self.0;
        if d.p == 0 {
            return Scalar::Rat(self.rat(a) + self.rat(b));
        }
        let (x, y) = (self.code(a), self.code(b));
        if d.p == 2 {
            return Scalar::Fin(x ^ y);
        }
        if d.k == 1 {
            return Scalar::Fin((x + y) % d.p);
        }
        match &d.tables {
            Some(t) => {
                if x == 0 {
                    return Scalar::Fin(y);
                }
                if y == 0 {
                    return Scalar::Fin(x);
                }
                let q1 = d.size - 1;
                let lx = t.log[x as usize] as u64;
                let ly = t.log[y as usize] as u64;
                let z = t.zech[((ly + q1 - lx) % q1) as usize];
                if z == NO_LOG {
                    Scalar::Fin(0)
                } else {
                    Scalar::Fin(t.exp[((lx + z as u64) % q1) as usize] as u64)
                }
            }
            None => Scalar::Fin(generic_add(d, x, y)),
        }
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        let d = &*self.0;
        if d.p == 0 {
            return Scalar::Rat(-self.rat(a));
        }
        let x = self.code(a);
        if x == 0 || d.p == 2 {
            return Scalar::Fin(x);
        }
        match &d.tables {
            Some(t) => {
                let q1 = d.size - 1;
                let l = t.log[x as usize] as u64;
                Scalar::Fin(t.exp[((l + q1 / 2) % q1) as usize] as u64)
            }
            None => Scalar::Fin(generic_neg(d, x)),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        let d = &*self.0;
        if d.p == 0 {
            return Scalar::Rat(self.rat(a) * self.rat(b));
        }
        let (x, y) = (self.code(a), self.code(b));
        if x == 0 || y == 0 {
            return Scalar::Fin(0);
        }
        if d.k == 1 {
            return Scalar::Fin(fp::mulmod(x, y, d.p));
        }
        match &d.tables {
            Some(t) => {
                let q1 = d.size - 1;
                let s = (t.log[x as usize] as u64 + t.log[y as usize] as u64) % q1;
                Scalar::Fin(t.exp[s as usize] as u64)
            }
            None => Scalar::Fin(generic_mul(d, x, y)),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        let d = &*self.0;
        if d.p == 0 {
            return Ok(Scalar::Rat(self.rat(a).recip()));
        }
        let x = self.code(a);
        if d.k == 1 {
            return Ok(Scalar::Fin(fp::inv_mod(x, d.p)));
        }
        match &d.tables {
            Some(t) => {
                let q1 = d.size - 1;
                let l = t.log[x as usize] as u64;
                Ok(Scalar::Fin(t.exp[((q1 - l) % q1) as usize] as u64))
            }
            None => Ok(Scalar::Fin(generic_pow(d, x, d.size - 2))),
        }
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Scalar, mut e: u64) -> Scalar {
        let mut result = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(&b, &b);
            }
        }
        result
    }

    /// Integer power allowing negative exponents for nonzero bases.
    pub fn powi(&self, a: &Scalar, e: i64) -> Result<Scalar> {
        if e >= 0 {
            Ok(self.pow(a, e as u64))
        } else {
            Ok(self.pow(&self.inv(a)?, e.unsigned_abs()))
        }
    }

    /// True iff `x` lies in the subfield F_{p^d} (d must divide k).
    pub fn in_subfield(&self, x: &Scalar, d: u32) -> bool {
        if self.is_rational() {
            return true;
        }
        let mut y = x.clone();
        for _ in 0..d {
            y = self.pow(&y, self.0.p);
        }
        &y == x
    }

    /// All elements in canonical order (finite fields only).
    pub fn elements(&self) -> impl Iterator<Item = Scalar> + '_ {
        let n = if self.is_finite() { self.0.size } else { 0 };
        (0..n).map(Scalar::Fin)
    }

    pub fn format(&self, x: &Scalar) -> String {
        match x {
            Scalar::Rat(r) => {
                if r.is_integer() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fin(code) => {
                if self.0.k == 1 {
                    return code.to_string();
                }
                let digits = decode(&self.0, *code);
                let mut parts = Vec::new();
                for (i, &c) in digits.iter().enumerate().rev() {
                    if c == 0 {
                        continue;
                    }
                    let mono = match i {
                        0 => String::new(),
                        1 => "g".to_string(),
                        _ => format!("g^{i}"),
                    };
                    parts.push(match (c, i) {
                        (_, 0) => c.to_string(),
                        (1, _) => mono,
                        _ => format!("{c}*{mono}"),
                    });
                }
                if parts.is_empty() {
                    "0".to_string()
                } else {
                    parts.join("+")
                }
            }
        }
    }

    /// True if the printed form needs parentheses inside a product.
    pub(crate) fn format_is_compound(&self, x: &Scalar) -> bool {
        match x {
            Scalar::Rat(r) => r.is_negative(),
            Scalar::Fin(_) => self.format(x).contains('+'),
        }
    }

    /// Canonical ordering of elements (code order for finite fields).
    pub fn cmp_canonical(&self, a: &Scalar, b: &Scalar) -> std::cmp::Ordering {
        a.cmp(b)
    }

    /// A uniformly random element; over ℚ a small integer.
    pub fn random<R: rand::Rng>(&self, rng: &mut R) -> Scalar {
        if self.is_rational() {
            self.from_i64(rng.gen_range(-5..=5))
        } else {
            Scalar::Fin(rng.gen_range(0..self.0.size))
        }
    }

    pub fn random_nonzero<R: rand::Rng>(&self, rng: &mut R) -> Scalar {
        loop {
            let x = self.random(rng);
            if !self.is_zero(&x) {
                return x;
            }
        }
    }
}
