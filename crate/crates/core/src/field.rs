//! Exact coefficient fields: the rationals and prime fields 𝔽_p.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::EquationError;

/// Largest accepted prime modulus. Products of two residues must fit in `u128`,
/// and primality is checked by trial division.
pub const MAX_PRIME: u64 = 1 << 32;

/// The coefficient field of an equation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "field", content = "p", rename_all = "lowercase")]
pub enum Field {
    #[default]
    Rational,
    Prime(u64),
}

impl Field {
    /// Builds 𝔽_p after checking that `p` is a prime below [`MAX_PRIME`].
    pub fn prime(p: u64) -> Result<Self, EquationError> {
        if p >= MAX_PRIME || !is_prime(p) {
            return Err(EquationError::NotPrime(p));
        }
        Ok(Field::Prime(p))
    }

    /// Parses `q` / `Q` or `fp:<p>`.
    pub fn parse(text: &str) -> Result<Self, EquationError> {
        let t = text.trim();
        if t.eq_ignore_ascii_case("q") {
            return Ok(Field::Rational);
        }
        if let Some(p) = t.strip_prefix("fp:").or_else(|| t.strip_prefix("Fp:")) {
            let p: u64 = p
                .trim()
                .parse()
                .map_err(|_| EquationError::BadField(text.to_string()))?;
            return Field::prime(p);
        }
        Err(EquationError::BadField(text.to_string()))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn zero(&self) -> FieldScalar {
        match self {
            Field::Rational => FieldScalar::Rational(BigRational::zero()),
            Field::Prime(p) => FieldScalar::Modular { value: 0, modulus: *p },
        }
    }

    pub fn one(&self) -> FieldScalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> FieldScalar {
        self.from_integer(&BigInt::from(v))
    }

    pub fn from_integer(&self, v: &BigInt) -> FieldScalar {
        match self {
            Field::Rational => FieldScalar::Rational(BigRational::from_integer(v.clone())),
            Field::Prime(p) => {
                let r = v.mod_floor(&BigInt::from(*p));
                FieldScalar::Modular {
                    value: r.to_u64().expect("residue fits"),
                    modulus: *p,
                }
            }
        }
    }

    /// Maps a rational into the field; fails when the denominator vanishes mod p.
    pub fn from_rational(&self, v: &BigRational) -> Result<FieldScalar, EquationError> {
        match self {
            Field::Rational => Ok(FieldScalar::Rational(v.clone())),
            Field::Prime(_) => {
                let num = self.from_integer(v.numer());
                let den = self.from_integer(v.denom());
                den.inverse()
                    .map(|inv| &num * &inv)
                    .ok_or_else(|| EquationError::DenominatorVanishes(v.to_string()))
            }
        }
    }

    /// Every element of a prime field, in increasing representative order.
    /// Only meaningful for small `p`; callers bound the size.
    pub fn elements(&self) -> Option<impl Iterator<Item = FieldScalar>> {
        match self {
            Field::Rational => None,
            Field::Prime(p) => {
                let p = *p;
                Some((0..p).map(move |value| FieldScalar::Modular { value, modulus: p }))
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "q"),
            Field::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// An element of ℚ or of 𝔽_p. Rationals are kept in lowest terms by
/// `BigRational`; residues lie in `0..modulus`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldScalar {
    Rational(BigRational),
    Modular { value: u64, modulus: u64 },
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
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

impl FieldScalar {
    pub fn field(&self) -> Field {
        match self {
            FieldScalar::Rational(_) => Field::Rational,
            FieldScalar::Modular { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldScalar::Rational(r) => r.is_zero(),
            FieldScalar::Modular { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldScalar::Rational(r) => r.is_one(),
            FieldScalar::Modular { value, .. } => *value == 1,
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inverse(&self) -> Option<FieldScalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            FieldScalar::Rational(r) => FieldScalar::Rational(r.recip()),
            FieldScalar::Modular { value, modulus } => FieldScalar::Modular {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }

    pub fn checked_div(&self, rhs: &FieldScalar) -> Option<FieldScalar> {
        rhs.inverse().map(|inv| self * &inv)
    }

    pub fn pow(&self, exp: u32) -> FieldScalar {
        match self {
            FieldScalar::Rational(r) => FieldScalar::Rational(num_traits::pow(r.clone(), exp as usize)),
            FieldScalar::Modular { value, modulus } => FieldScalar::Modular {
                value: pow_mod(*value, exp as u64, *modulus),
                modulus: *modulus,
            },
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            FieldScalar::Rational(r) => Some(r),
            FieldScalar::Modular { .. } => None,
        }
    }

    /// True when the canonical rendering needs a leading minus sign.
    pub(crate) fn is_negative_display(&self) -> bool {
        match self {
            FieldScalar::Rational(r) => r.is_negative(),
            FieldScalar::Modular { .. } => false,
        }
    }
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldScalar::Rational(r) => write!(f, "{r}"),
            FieldScalar::Modular { value, .. } => write!(f, "{value}"),
        }
    }
}

fn same_modulus(a: u64, b: u64) -> u64 {
    assert_eq!(a, b, "mixing residues of different prime fields");
    a
}

impl Add for &FieldScalar {
    type Output = FieldScalar;
    fn add(self, rhs: &FieldScalar) -> FieldScalar {
        match (self, rhs) {
            (FieldScalar::Rational(a), FieldScalar::Rational(b)) => FieldScalar::Rational(a + b),
            (
                FieldScalar::Modular { value: a, modulus: p },
                FieldScalar::Modular { value: b, modulus: q },
            ) => {
                let p = same_modulus(*p, *q);
                FieldScalar::Modular {
                    value: ((*a as u128 + *b as u128) % p as u128) as u64,
                    modulus: p,
                }
            }
            _ => panic!("mixing rational and modular scalars"),
        }
    }
}

impl Neg for &FieldScalar {
    type Output = FieldScalar;
    fn neg(self) -> FieldScalar {
        match self {
            FieldScalar::Rational(a) => FieldScalar::Rational(-a),
            FieldScalar::Modular { value, modulus } => FieldScalar::Modular {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }
}

impl Sub for &FieldScalar {
    type Output = FieldScalar;
    fn sub(self, rhs: &FieldScalar) -> FieldScalar {
        self + &(-rhs)
    }
}

impl Mul for &FieldScalar {
    type Output = FieldScalar;
    fn mul(self, rhs: &FieldScalar) -> FieldScalar {
        match (self, rhs) {
            (FieldScalar::Rational(a), FieldScalar::Rational(b)) => FieldScalar::Rational(a * b),
            (
                FieldScalar::Modular { value: a, modulus: p },
                FieldScalar::Modular { value: b, modulus: q },
            ) => {
                let p = same_modulus(*p, *q);
                FieldScalar::Modular { value: mul_mod(*a, *b, p), modulus: p }
            }
            _ => panic!("mixing rational and modular scalars"),
        }
    }
}

/// Parses `a`, `a/b` or a finite decimal such as `-0.125` as an exact rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let t = text.trim();
    if let Some((int, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || int.contains('/') {
            return None;
        }
        // The digits of "-0.5" read as -05, which keeps the sign.
        let whole: BigInt = format!("{int}{frac}").parse().ok()?;
        return Some(BigRational::new(whole, num_traits::pow(BigInt::from(10), frac.len())));
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

/// `p/q` or `p` for integers.
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_validation() {
        assert!(Field::prime(7).is_ok());
        assert!(Field::prime(2).is_ok());
        assert!(matches!(Field::prime(9), Err(EquationError::NotPrime(9))));
        assert!(Field::prime(1).is_err());
        assert_eq!(Field::parse("fp:5").unwrap(), Field::Prime(5));
        assert_eq!(Field::parse("q").unwrap(), Field::Rational);
        assert!(Field::parse("fp:x").is_err());
    }

    #[test]
    fn modular_arithmetic() {
        let f = Field::Prime(7);
        let a = f.from_i64(5);
        let b = f.from_i64(4);
        assert_eq!(&a + &b, f.from_i64(2));
        assert_eq!(&a * &b, f.from_i64(6));
        assert_eq!(&b - &a, f.from_i64(6));
        assert_eq!(&a * &a.inverse().unwrap(), f.one());
        assert!(f.zero().inverse().is_none());
        assert_eq!(f.from_i64(-1), f.from_i64(6));
    }

    #[test]
    fn modular_rationals() {
        let f = Field::Prime(5);
        let half = f.from_rational(&BigRational::new(1.into(), 2.into())).unwrap();
        assert_eq!(&half * &f.from_i64(2), f.one());
        assert!(f.from_rational(&BigRational::new(1.into(), 5.into())).is_err());
    }

    #[test]
    fn rationals_stay_reduced() {
        let r = parse_rational("6/-4").unwrap();
        assert_eq!(format_rational(&r), "-3/2");
        assert!(parse_rational("1/0").is_none());
        assert_eq!(parse_rational("-0.125"), Some(BigRational::new((-1).into(), 8.into())));
        assert_eq!(parse_rational("2.50"), Some(BigRational::new(5.into(), 2.into())));
        assert!(parse_rational("1.").is_none() && parse_rational("1/2.5").is_none());
    }
}
