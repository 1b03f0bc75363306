//! Exact arithmetic in the cyclotomic field `Q(ω)`, `ω = exp(2πi/e)`.
//!
//! Elements are stored in the power basis `1, ω, …, ω^{φ(e)-1}` of
//! `Q[x]/(Φ_e(x))` as integer numerators over one positive common
//! denominator. The representation is canonical: the numerators and the
//! denominator are coprime as a whole, so two elements are equal exactly
//! when their stored data is equal.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational scalar.
pub type Rational = BigRational;

/// Returns the `e`-th cyclotomic polynomial, lowest degree coefficient first.
///
/// Computed by exact division of `x^e - 1` by `Φ_d` for every proper divisor
/// `d` of `e`.
pub fn cyclotomic_polynomial(e: u32) -> Result<Vec<i64>> {
    if e == 0 {
        return Err(Error::InvalidParameter("cyclotomic order must be positive".into()));
    }
    Ok(cyclotomic_polynomial_cached(e).as_ref().clone())
}

fn cyclotomic_polynomial_cached(e: u32) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&e) {
        return p.clone();
    }
    // x^e - 1
    let mut poly = vec![0i64; e as usize + 1];
    poly[0] = -1;
    poly[e as usize] = 1;
    for d in 1..e {
        if e.is_multiple_of(d) {
            let divisor = cyclotomic_polynomial_cached(d);
            poly = exact_monic_division(&poly, &divisor);
        }
    }
    let poly = Arc::new(poly);
    cache.lock().unwrap().insert(e, poly.clone());
    poly
}

fn exact_monic_division(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; num.len() - dn];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dn];
        quot[k] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[k + j] -= c * dj;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "division by cyclotomic factor is exact");
    quot
}

/// Shared per-order data: the modulus `Φ_e` and reduced powers of `ω`.
#[derive(Debug)]
struct FieldData {
    order: u32,
    modulus: Vec<i64>,
    degree: usize,
    powers: Vec<Vec<i64>>,
}

fn field(e: u32) -> Arc<FieldData> {
    static FIELDS: OnceLock<Mutex<HashMap<u32, Arc<FieldData>>>> = OnceLock::new();
    let fields = FIELDS.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(f) = fields.lock().unwrap().get(&e) {
        return f.clone();
    }
    let modulus = cyclotomic_polynomial_cached(e).as_ref().clone();
    let degree = modulus.len() - 1;
    let mut powers = Vec::with_capacity(e as usize);
    for k in 0..e as usize {
        let mut p = vec![0i64; k.max(degree) + 1];
        p[k] = 1;
        reduce_i64(&mut p, &modulus);
        p.resize(degree, 0);
        powers.push(p);
    }
    let data = Arc::new(FieldData { order: e, modulus, degree, powers });
    fields.lock().unwrap().insert(e, data.clone());
    data
}

fn reduce_i64(poly: &mut Vec<i64>, modulus: &[i64]) {
    let deg = modulus.len() - 1;
    while poly.len() > deg {
        let top = poly.len() - 1;
        let c = poly[top];
        if c != 0 {
            for (j, &mj) in modulus.iter().enumerate() {
                poly[top - deg + j] -= c * mj;
            }
        }
        poly.pop();
    }
}

fn reduce_big(poly: &mut Vec<BigInt>, modulus: &[i64]) {
    let deg = modulus.len() - 1;
    while poly.len() > deg {
        let top = poly.len() - 1;
        let c = std::mem::take(&mut poly[top]);
        if !c.is_zero() {
            for (j, &mj) in modulus.iter().enumerate().take(deg) {
                if mj != 0 {
                    poly[top - deg + j] -= &c * mj;
                }
            }
        }
        poly.pop();
    }
}

/// An exact element of `Q(ω)` for a fixed order `e`.
#[derive(Clone)]
pub struct Cyclotomic {
    field: Arc<FieldData>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl Cyclotomic {
    fn from_parts(field: Arc<FieldData>, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        debug_assert_eq!(num.len(), field.degree);
        if den.is_negative() {
            den = -den;
            for c in num.iter_mut() {
                *c = -std::mem::take(c);
            }
        }
        let mut g = den.clone();
        for c in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if num.iter().all(Zero::is_zero) {
            den = BigInt::one();
        } else if !g.is_one() {
            for c in num.iter_mut() {
                *c /= &g;
            }
            den /= &g;
        }
        Cyclotomic { field, num, den }
    }

    fn from_integer_poly(field: Arc<FieldData>, mut poly: Vec<BigInt>, den: BigInt) -> Self {
        reduce_big(&mut poly, &field.modulus);
        poly.resize(field.degree, BigInt::zero());
        Self::from_parts(field, poly, den)
    }

    pub fn zero(e: u32) -> Self {
        let f = field(e);
        let num = vec![BigInt::zero(); f.degree];
        Cyclotomic { field: f, num, den: BigInt::one() }
    }

    pub fn one(e: u32) -> Self {
        Self::from_integer(e, 1)
    }

    pub fn from_integer(e: u32, value: i64) -> Self {
        Self::from_rational(e, &Rational::from_integer(value.into()))
    }

    pub fn from_rational(e: u32, value: &Rational) -> Self {
        let f = field(e);
        let mut num = vec![BigInt::zero(); f.degree];
        num[0] = value.numer().clone();
        Self::from_parts(f, num, value.denom().clone())
    }

    /// `ω^(k mod e)`, reduced modulo `Φ_e`.
    pub fn root_power(e: u32, k: i64) -> Self {
        let f = field(e);
        let k = k.rem_euclid(e as i64) as usize;
        let num = f.powers[k].iter().map(|&c| BigInt::from(c)).collect();
        Self::from_parts(f, num, BigInt::one())
    }

    /// `Σ_k counts[k] ω^k` for integer multiplicities of each power of `ω`.
    pub fn from_power_counts(e: u32, counts: &[i64]) -> Self {
        let f = field(e);
        let mut acc = vec![0i64; f.degree];
        for (k, &c) in counts.iter().enumerate() {
            if c != 0 {
                for (a, &p) in acc.iter_mut().zip(&f.powers[k % e as usize]) {
                    *a += c * p;
                }
            }
        }
        let num = acc.into_iter().map(BigInt::from).collect();
        Self::from_parts(f, num, BigInt::one())
    }

    pub fn order(&self) -> u32 {
        self.field.order
    }

    /// Degree of `Φ_e`, i.e. the number of power-basis coefficients.
    pub fn degree(&self) -> usize {
        self.field.degree
    }

    /// Power-basis coefficients as reduced rationals.
    pub fn coeffs(&self) -> Vec<Rational> {
        self.num
            .iter()
            .map(|c| Rational::new(c.clone(), self.den.clone()))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    /// The value as a rational, if it lies in `Q`.
    pub fn to_rational(&self) -> Option<Rational> {
        if self.num[1..].iter().all(Zero::is_zero) {
            Some(Rational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    /// The value as an integer, if it lies in `Z`.
    pub fn to_integer(&self) -> Option<BigInt> {
        self.to_rational()
            .filter(|r| r.is_integer())
            .map(|r| r.to_integer())
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.field.order == other.field.order {
            Ok(())
        } else {
            Err(Error::OrderMismatch { left: self.field.order, right: other.field.order })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let num = self
            .num
            .iter()
            .zip(&other.num)
            .map(|(a, b)| a * &other.den + b * &self.den)
            .collect();
        Ok(Self::from_parts(self.field.clone(), num, &self.den * &other.den))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let d = self.field.degree;
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        Ok(Self::from_integer_poly(self.field.clone(), prod, &self.den * &other.den))
    }

    fn neg_ref(&self) -> Self {
        Cyclotomic {
            field: self.field.clone(),
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let num = self.num.iter().map(|c| c * r.numer()).collect();
        Self::from_parts(self.field.clone(), num, &self.den * r.denom())
    }

    /// Complex conjugation, the field automorphism `ω ↦ ω^{e-1}`.
    pub fn conj(&self) -> Self {
        let e = self.field.order as usize;
        let mut poly = vec![BigInt::zero(); e.max(self.field.degree)];
        for (k, c) in self.num.iter().enumerate() {
            poly[(e - k) % e] += c;
        }
        Self::from_integer_poly(self.field.clone(), poly, self.den.clone())
    }

    /// Multiplicative inverse by the extended Euclidean algorithm against `Φ_e`.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let modulus: Vec<Rational> = self
            .field
            .modulus
            .iter()
            .map(|&c| Rational::from_integer(c.into()))
            .collect();
        let a: Vec<Rational> = self.coeffs();
        let (gcd, s) = extended_gcd_cofactor(&modulus, &a);
        // gcd is a nonzero constant because Φ_e is irreducible
        debug_assert_eq!(poly_degree(&gcd), Some(0));
        let c = gcd[0].clone();
        let f = self.field.clone();
        let mut coeffs: Vec<Rational> = s.into_iter().map(|x| x / &c).collect();
        coeffs.resize(f.degree, Rational::zero());
        Ok(Self::from_rational_coeffs(f, &coeffs))
    }

    fn from_rational_coeffs(field: Arc<FieldData>, coeffs: &[Rational]) -> Self {
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Self::from_parts(field, num, den)
    }

    /// Builds an element from explicit power-basis coefficients.
    pub fn from_coeffs(e: u32, coeffs: &[Rational]) -> Result<Self> {
        let f = field(e);
        if coeffs.len() != f.degree {
            return Err(Error::LengthMismatch { expected: f.degree, found: coeffs.len() });
        }
        Ok(Self::from_rational_coeffs(f, coeffs))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.checked_mul(&other.inv()?)
    }

    /// `self^k` for `k ≥ 0`.
    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.order());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }
}

// Remainder sequence for (a, b); returns (gcd, t) with t·b ≡ gcd mod a.
fn extended_gcd_cofactor(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut r0 = trim(a.to_vec());
    let mut r1 = trim(b.to_vec());
    let mut t0: Vec<Rational> = vec![];
    let mut t1: Vec<Rational> = vec![Rational::one()];
    while poly_degree(&r1).is_some() {
        let (q, r) = poly_divrem(&r0, &r1);
        let t2 = poly_sub(&t0, &poly_mul(&q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        t0 = std::mem::replace(&mut t1, t2);
    }
    (r0, t0)
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_degree(p: &[Rational]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|k| {
            let x = a.get(k).cloned().unwrap_or_else(Rational::zero);
            let y = b.get(k).cloned().unwrap_or_else(Rational::zero);
            x - y
        })
        .collect();
    trim(out)
}

fn poly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let db = poly_degree(b).expect("nonzero divisor");
    let lead = b[db].clone();
    let mut rem = trim(a.to_vec());
    let mut quot = vec![Rational::zero(); rem.len().saturating_sub(db).max(1)];
    while let Some(dr) = poly_degree(&rem) {
        if dr < db {
            break;
        }
        let c = &rem[dr] / &lead;
        let shift = dr - db;
        for (j, bj) in b.iter().enumerate().take(db + 1) {
            rem[shift + j] -= &c * bj;
        }
        quot[shift] = c;
        rem = trim(rem);
    }
    (trim(quot), rem)
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        self.field.order == other.field.order && self.den == other.den && self.num == other.num
    }
}

impl Eq for Cyclotomic {}

impl Hash for Cyclotomic {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.order.hash(state);
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &'a Cyclotomic) -> Cyclotomic {
        self.checked_add(rhs).expect("cyclotomic orders agree")
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &'a Cyclotomic) -> Cyclotomic {
        self.checked_sub(rhs).expect("cyclotomic orders agree")
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &'a Cyclotomic) -> Cyclotomic {
        self.checked_mul(rhs).expect("cyclotomic orders agree")
    }
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: Cyclotomic) -> Cyclotomic {
        &self + &rhs
    }
}

impl Sub for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: Cyclotomic) -> Cyclotomic {
        &self - &rhs
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Cyclotomic) -> Cyclotomic {
        &self * &rhs
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        self.neg_ref()
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        self.neg_ref()
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match k {
                0 => write!(f, "{abs}")?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{abs}*")?;
                    }
                    if k == 1 {
                        write!(f, "w")?;
                    } else {
                        write!(f, "w^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic(e={}; {})", self.field.order, self)
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    e: u32,
    coeffs: Vec<[String; 2]>,
}

impl Serialize for Cyclotomic {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs = self
            .coeffs()
            .into_iter()
            .map(|c| [c.numer().to_string(), c.denom().to_string()])
            .collect();
        Wire { e: self.field.order, coeffs }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = Wire::deserialize(deserializer)?;
        if wire.e == 0 {
            return Err(D::Error::custom("cyclotomic order must be positive"));
        }
        let coeffs = wire
            .coeffs
            .iter()
            .map(|[n, d]| {
                let n: BigInt = n.parse().map_err(D::Error::custom)?;
                let d: BigInt = d.parse().map_err(D::Error::custom)?;
                if d.is_zero() {
                    return Err(D::Error::custom("zero denominator"));
                }
                Ok(Rational::new(n, d))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Cyclotomic::from_coeffs(wire.e, &coeffs).map_err(D::Error::custom)
    }
}
