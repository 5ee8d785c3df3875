//! Exact scalar fields: the rationals, the Gaussian rationals and prime fields.
//!
//! A [`Field`] is a small descriptor value (a unit struct, or the modulus for
//! `F_p`) that knows how to do arithmetic on its element type. Polynomials and
//! matrices carry the descriptor alongside their entries, so the same algorithm
//! runs unchanged over every member of the tower.

use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::FieldError;

/// Arithmetic over an exact field.
pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug + Send + Sync;

    fn kind(&self) -> FieldKind;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// Image of `re + i*im` in this field.
    fn from_parts(&self, re: &BigRational, im: &BigRational) -> Result<Self::Elem, FieldError>;
    /// Real and imaginary rational parts. Prime-field elements map to their
    /// least non-negative residue.
    fn to_parts(&self, a: &Self::Elem) -> (BigRational, BigRational);
    fn format(&self, a: &Self::Elem) -> String;

    /// Span-only eliminations avoid division when set; see [`Field::make_primitive`].
    const FRACTION_FREE: bool = false;

    /// Rescales a vector whose span is all that matters. The rationals clear
    /// denominators and divide out the content; other fields leave it alone.
    fn make_primitive(&self, _v: &mut [Self::Elem]) {}

    /// `v <- a*v - b*row`, the fraction-free elimination step.
    fn cross_combine(&self, v: &mut [Self::Elem], a: &Self::Elem, b: &Self::Elem, row: &[Self::Elem]) {
        for (x, r) in v.iter_mut().zip(row) {
            let ax = if self.is_zero(x) { self.zero() } else { self.mul(a, x) };
            *x = if self.is_zero(r) { ax } else { self.sub(&ax, &self.mul(b, r)) };
        }
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn pow(&self, a: &Self::Elem, mut exp: u32) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }
}

/// Serializable selector for a member of the field tower.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldKind {
    Q,
    Qi,
    Fp(u64),
}

impl FieldKind {
    pub fn characteristic(self) -> u64 {
        match self {
            FieldKind::Fp(p) => p,
            _ => 0,
        }
    }
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Q => f.write_str("Q"),
            FieldKind::Qi => f.write_str("Qi"),
            FieldKind::Fp(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for FieldKind {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Q" => Ok(FieldKind::Q),
            "Qi" => Ok(FieldKind::Qi),
            other => {
                let p = other
                    .strip_prefix("Fp:")
                    .and_then(|p| p.parse::<u64>().ok())
                    .ok_or_else(|| FieldError::UnknownField(other.to_string()))?;
                PrimeField::new(p)?;
                Ok(FieldKind::Fp(p))
            }
        }
    }
}

impl Serialize for FieldKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FieldKind {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// The field of rational numbers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn kind(&self) -> FieldKind {
        FieldKind::Q
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn from_parts(&self, re: &BigRational, im: &BigRational) -> Result<BigRational, FieldError> {
        if !im.is_zero() {
            return Err(FieldError::NotReal(format_rational(im)));
        }
        Ok(re.clone())
    }
    fn to_parts(&self, a: &BigRational) -> (BigRational, BigRational) {
        (a.clone(), BigRational::zero())
    }
    fn format(&self, a: &BigRational) -> String {
        format_rational(a)
    }

    const FRACTION_FREE: bool = true;

    fn make_primitive(&self, v: &mut [BigRational]) {
        if v.iter().all(|x| x.is_integer()) {
            // integer rows only need their content divided out
            let mut content = BigInt::zero();
            for x in v.iter().filter(|x| !x.is_zero()) {
                content = content.gcd(x.numer());
                if content.is_one() {
                    return;
                }
            }
            if !content.is_zero() {
                for x in v.iter_mut().filter(|x| !x.is_zero()) {
                    *x = BigRational::from_integer(x.numer() / &content);
                }
            }
            return;
        }
        let mut lcm = BigInt::one();
        let mut content = BigInt::zero();
        for x in v.iter().filter(|x| !x.is_zero()) {
            lcm = lcm.lcm(x.denom());
        }
        for x in v.iter().filter(|x| !x.is_zero()) {
            content = content.gcd(&(x.numer() * (&lcm / x.denom())));
        }
        if content.is_zero() {
            return;
        }
        for x in v.iter_mut().filter(|x| !x.is_zero()) {
            let scaled = x.numer() * (&lcm / x.denom()) / &content;
            *x = BigRational::from_integer(scaled);
        }
    }

    // Integer entries skip the gcd normalisation of `BigRational` arithmetic.
    fn cross_combine(&self, v: &mut [BigRational], a: &BigRational, b: &BigRational, row: &[BigRational]) {
        if !(a.is_integer() && b.is_integer()) {
            for (x, r) in v.iter_mut().zip(row) {
                *x = &(a * &*x) - &(b * r);
            }
            return;
        }
        let (ai, bi) = (a.numer(), b.numer());
        for (x, r) in v.iter_mut().zip(row) {
            if !(x.is_integer() && r.is_integer()) {
                *x = &(a * &*x) - &(b * r);
                continue;
            }
            let (xi, ri) = (x.numer(), r.numer());
            let val = match (xi.is_zero(), ri.is_zero()) {
                (true, true) => continue,
                (false, true) => ai * xi,
                (true, false) => -(bi * ri),
                (false, false) => ai * xi - bi * ri,
            };
            *x = BigRational::from_integer(val);
        }
    }
}

/// An element `re + i*im` of `Q(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussRat {
            re: BigRational::from_integer(re.into()),
            im: BigRational::from_integer(im.into()),
        }
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn conj(&self) -> Self {
        GaussRat { re: self.re.clone(), im: -&self.im }
    }

    pub fn norm(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// A square root inside `Q(i)` when one exists. Of the two roots, returns
    /// the one with positive real part, or positive imaginary part if the real
    /// part vanishes.
    pub fn sqrt(&self) -> Option<GaussRat> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let modulus = rational_sqrt(&self.norm())?;
        let two = BigRational::from_integer(2.into());
        let re = rational_sqrt(&((&modulus + &self.re) / &two))?;
        let mut im = rational_sqrt(&((&modulus - &self.re) / &two))?;
        if self.im.is_negative() {
            im = -im;
        }
        let mut root = GaussRat { re, im };
        if root.re.is_negative() || (root.re.is_zero() && root.im.is_negative()) {
            root = GaussRat { re: -root.re, im: -root.im };
        }
        Some(root)
    }
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| BigRational::new(n, d))
}

/// The field `Q(i)` of Gaussian rationals.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GaussianRationals;

impl Field for GaussianRationals {
    type Elem = GaussRat;

    fn kind(&self) -> FieldKind {
        FieldKind::Qi
    }
    fn zero(&self) -> GaussRat {
        GaussRat::from_ints(0, 0)
    }
    fn one(&self) -> GaussRat {
        GaussRat::from_ints(1, 0)
    }
    fn from_i64(&self, v: i64) -> GaussRat {
        GaussRat::from_ints(v, 0)
    }
    fn add(&self, a: &GaussRat, b: &GaussRat) -> GaussRat {
        GaussRat { re: &a.re + &b.re, im: &a.im + &b.im }
    }
    fn sub(&self, a: &GaussRat, b: &GaussRat) -> GaussRat {
        GaussRat { re: &a.re - &b.re, im: &a.im - &b.im }
    }
    fn mul(&self, a: &GaussRat, b: &GaussRat) -> GaussRat {
        GaussRat {
            re: &a.re * &b.re - &a.im * &b.im,
            im: &a.re * &b.im + &a.im * &b.re,
        }
    }
    fn neg(&self, a: &GaussRat) -> GaussRat {
        GaussRat { re: -&a.re, im: -&a.im }
    }
    fn inv(&self, a: &GaussRat) -> Option<GaussRat> {
        if a.is_zero() {
            return None;
        }
        let n = a.norm();
        Some(GaussRat { re: &a.re / &n, im: -&a.im / &n })
    }
    fn is_zero(&self, a: &GaussRat) -> bool {
        a.is_zero()
    }
    fn from_parts(&self, re: &BigRational, im: &BigRational) -> Result<GaussRat, FieldError> {
        Ok(GaussRat { re: re.clone(), im: im.clone() })
    }
    fn to_parts(&self, a: &GaussRat) -> (BigRational, BigRational) {
        (a.re.clone(), a.im.clone())
    }
    const FRACTION_FREE: bool = true;

    fn make_primitive(&self, v: &mut [GaussRat]) {
        let parts = |x: &GaussRat| [x.re.clone(), x.im.clone()];
        let mut lcm = BigInt::one();
        let mut content = BigInt::zero();
        for r in v.iter().flat_map(parts).filter(|r| !r.is_zero()) {
            lcm = lcm.lcm(r.denom());
        }
        for r in v.iter().flat_map(parts).filter(|r| !r.is_zero()) {
            content = content.gcd(&(r.numer() * (&lcm / r.denom())));
        }
        if content.is_zero() || (lcm.is_one() && content.is_one()) {
            return;
        }
        let scale = |r: &BigRational| {
            BigRational::from_integer(r.numer() * (&lcm / r.denom()) / &content)
        };
        for x in v.iter_mut().filter(|x| !x.is_zero()) {
            *x = GaussRat::new(scale(&x.re), scale(&x.im));
        }
    }

    fn format(&self, a: &GaussRat) -> String {
        let imag = |im: &BigRational| -> String {
            if im.is_one() {
                "i".to_string()
            } else if *im == -BigRational::one() {
                "-i".to_string()
            } else {
                format!("{}i", format_rational(im))
            }
        };
        match (a.re.is_zero(), a.im.is_zero()) {
            (_, true) => format_rational(&a.re),
            (true, false) => imag(&a.im),
            (false, false) => {
                let sign = if a.im.is_negative() { "" } else { "+" };
                format!("{}{}{}", format_rational(&a.re), sign, imag(&a.im))
            }
        }
    }
}

/// The prime field `F_p` for an odd prime `p < 2^62`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if p < 3 || p >= 1 << 62 || !primal::is_prime(p) {
            return Err(FieldError::BadModulus(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Smallest square root of `-1`, present iff `p = 1 mod 4`.
    pub fn sqrt_neg_one(&self) -> Option<u64> {
        if self.p % 4 != 1 {
            return None;
        }
        let exp = (self.p - 1) / 4;
        (2..self.p).find_map(|g| {
            let cand = pow_mod(g, exp, self.p);
            (mul_mod(cand, cand, self.p) == self.p - 1).then(|| cand.min(self.p - cand))
        })
    }

    fn reduce_int(&self, v: &BigInt) -> u64 {
        let m = BigInt::from(self.p);
        let r = v.mod_floor(&m);
        r.to_u64().expect("residue fits in u64")
    }

    fn reduce_rational(&self, r: &BigRational) -> Result<u64, FieldError> {
        let den = self.reduce_int(r.denom());
        if den == 0 {
            return Err(FieldError::DenominatorDivisible { prime: self.p, value: format_rational(r) });
        }
        let num = self.reduce_int(r.numer());
        Ok(mul_mod(num, pow_mod(den, self.p - 2, self.p), self.p))
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

impl Field for PrimeField {
    type Elem = u64;

    fn kind(&self) -> FieldKind {
        FieldKind::Fp(self.p)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, v: i64) -> u64 {
        (v as i128).rem_euclid(self.p as i128) as u64
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.p)
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        (*a != 0).then(|| pow_mod(*a, self.p - 2, self.p))
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn from_parts(&self, re: &BigRational, im: &BigRational) -> Result<u64, FieldError> {
        let re = self.reduce_rational(re)?;
        if im.is_zero() {
            return Ok(re);
        }
        let im = self.reduce_rational(im)?;
        let i = self.sqrt_neg_one().ok_or(FieldError::NoImaginaryUnit(self.p))?;
        Ok(self.add(&re, &mul_mod(im, i, self.p)))
    }
    fn to_parts(&self, a: &u64) -> (BigRational, BigRational) {
        (BigRational::from_integer((*a).into()), BigRational::zero())
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
}

/// Parses `"3"`, `"-3/4"` as an exact rational.
pub fn parse_rational(num: &str, den: &str) -> Result<BigRational, FieldError> {
    let bad = || FieldError::BadNumber(format!("{num}/{den}"));
    let n: BigInt = num.trim().parse().map_err(|_| bad())?;
    let d: BigInt = den.trim().parse().map_err(|_| bad())?;
    if d.sign() == Sign::NoSign {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}
