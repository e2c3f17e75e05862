//! Exact scalar fields: the rationals and prime fields `Z/pZ`.
//!
//! A [`Scalar`] is a tagged value. Rationals are kept in lowest terms with a
//! positive denominator (guaranteed by `BigRational`); residues are kept in
//! `[0, p)` and carry their modulus so that arithmetic never needs a separate
//! field context. Mixing values from different fields is a programming error
//! and panics.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The ground field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    PrimeField(u64),
}

impl FieldSpec {
    /// Builds `F_p`, rejecting composite or out-of-range moduli.
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        // residues are multiplied in u128, so any u64 prime is fine
        Ok(FieldSpec::PrimeField(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::PrimeField(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::zero()),
            FieldSpec::PrimeField(p) => Scalar::Residue { value: 0, modulus: *p },
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(n.into())),
            FieldSpec::PrimeField(p) => {
                Scalar::Residue { value: (n as i128).rem_euclid(*p as i128) as u64, modulus: *p }
            }
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(n.clone())),
            FieldSpec::PrimeField(p) => {
                let r = n.mod_floor(&BigInt::from(*p));
                Scalar::Residue { value: r.to_u64().expect("residue below modulus"), modulus: *p }
            }
        }
    }

    /// Builds `num/den` in this field; `None` if `den` vanishes in the field.
    pub fn from_fraction(&self, num: &BigInt, den: &BigInt) -> Option<Scalar> {
        match self {
            FieldSpec::Rationals => {
                if den.is_zero() {
                    None
                } else {
                    Some(Scalar::Rational(BigRational::new(num.clone(), den.clone())))
                }
            }
            FieldSpec::PrimeField(_) => {
                let d = self.from_bigint(den);
                let inv = d.inv()?;
                Some(&self.from_bigint(num) * &inv)
            }
        }
    }

    /// Parses `"n"` or `"n/d"` into this field. Residues are reduced mod p.
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar> {
        let (num, den) = parse_fraction(text)?;
        self.from_fraction(&num, &den)
            .ok_or_else(|| Error::InvalidScalar(format!("denominator of {text:?} vanishes in {self}")))
    }

    /// Whether `s` lives in this field.
    pub fn owns(&self, s: &Scalar) -> bool {
        match (self, s) {
            (FieldSpec::Rationals, Scalar::Rational(_)) => true,
            (FieldSpec::PrimeField(p), Scalar::Residue { modulus, .. }) => p == modulus,
            _ => false,
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::PrimeField(p) => write!(f, "F_{p}"),
        }
    }
}

/// Splits `"n"` / `"n/d"` into integers without interpreting them in a field.
pub fn parse_fraction(text: &str) -> Result<(BigInt, BigInt)> {
    let t = text.trim();
    let bad = || Error::InvalidScalar(format!("cannot parse {text:?} as an integer or fraction"));
    match t.split_once('/') {
        None => Ok((BigInt::from_str(t).map_err(|_| bad())?, BigInt::one())),
        Some((n, d)) => {
            let num = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let den = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if den.is_zero() {
                return Err(Error::InvalidScalar(format!("zero denominator in {text:?}")));
            }
            Ok((num, den))
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// An exact field element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
        }
    }

    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rationals,
            Scalar::Residue { modulus, .. } => FieldSpec::PrimeField(*modulus),
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        match self {
            Scalar::Rational(r) => Some(Scalar::Rational(r.recip())),
            Scalar::Residue { value, modulus } => {
                Some(Scalar::Residue { value: pow_mod(*value, modulus - 2, *modulus), modulus: *modulus })
            }
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Residue { .. } => None,
        }
    }
}

fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    let m = m as u128;
    let mut acc = 1u128 % m;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

fn field_mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("scalar field mismatch: {} vs {}", a.field(), b.field())
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => {
                if a.is_zero() {
                    Scalar::Rational(b.clone())
                } else if b.is_zero() {
                    Scalar::Rational(a.clone())
                } else {
                    Scalar::Rational(a + b)
                }
            }
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, modulus: q }) if p == q => {
                Scalar::Residue { value: ((*a as u128 + *b as u128) % *p as u128) as u64, modulus: *p }
            }
            _ => field_mismatch(self, rhs),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => {
                if b.is_zero() {
                    Scalar::Rational(a.clone())
                } else {
                    Scalar::Rational(a - b)
                }
            }
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, modulus: q }) if p == q => {
                Scalar::Residue { value: ((*a as u128 + *p as u128 - *b as u128) % *p as u128) as u64, modulus: *p }
            }
            _ => field_mismatch(self, rhs),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => {
                if a.is_zero() || b.is_zero() {
                    Scalar::Rational(BigRational::zero())
                } else if a.is_one() {
                    Scalar::Rational(b.clone())
                } else if b.is_one() {
                    Scalar::Rational(a.clone())
                } else {
                    Scalar::Rational(a * b)
                }
            }
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, modulus: q }) if p == q => {
                Scalar::Residue { value: ((*a as u128 * *b as u128) % *p as u128) as u64, modulus: *p }
            }
            _ => field_mismatch(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Residue { value, modulus } => {
                Scalar::Residue { value: (modulus - value) % modulus, modulus: *modulus }
            }
        }
    }
}

impl fmt::Display for Scalar {
    /// `"n"` or `"n/d"` for rationals, the residue in `[0, p)` otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

/// Absolute bit length of a rational's numerator and denominator, for growth checks.
pub fn rational_bits(r: &BigRational) -> u64 {
    r.numer().abs().bits() + r.denom().bits()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_validation() {
        assert!(FieldSpec::prime(2).is_ok());
        assert!(FieldSpec::prime(101).is_ok());
        assert!(FieldSpec::prime(1).is_err());
        assert!(FieldSpec::prime(91).is_err());
        assert_eq!(FieldSpec::prime(7).unwrap().characteristic(), 7);
        assert_eq!(FieldSpec::Rationals.characteristic(), 0);
    }

    #[test]
    fn rationals_are_lowest_terms() {
        let q = FieldSpec::Rationals;
        let s = q.parse_scalar("6/-4").unwrap();
        assert_eq!(s.to_string(), "-3/2");
        assert_eq!(q.parse_scalar(" 8 / 4 ").unwrap().to_string(), "2");
        assert!(q.parse_scalar("1/0").is_err());
        assert!(q.parse_scalar("x").is_err());
    }

    #[test]
    fn residues_reduce_and_invert() {
        let f = FieldSpec::prime(7).unwrap();
        assert_eq!(f.parse_scalar("-1").unwrap().to_string(), "6");
        assert_eq!(f.parse_scalar("1/3").unwrap().to_string(), "5");
        assert!(f.parse_scalar("1/14").is_err());
        let three = f.from_i64(3);
        assert!((&three * &three.inv().unwrap()).is_one());
        assert!(f.zero().inv().is_none());
        assert_eq!((-&f.one()).to_string(), "6");
        assert_eq!((&f.from_i64(2) - &f.from_i64(5)).to_string(), "4");
    }

    #[test]
    #[should_panic(expected = "field mismatch")]
    fn mixing_fields_panics() {
        let _ = &FieldSpec::Rationals.one() + &FieldSpec::PrimeField(5).one();
    }
}
