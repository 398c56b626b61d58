//! Roots in the coefficient field: d-th roots of scalars and roots of
//! univariate polynomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::field::{Field, FieldScalar};
use crate::upoly::UPoly;

/// Prime fields up to this size are searched exhaustively.
pub const BRUTE_FORCE_LIMIT: u64 = 1 << 16;

fn exact_root(v: &BigInt, d: u32) -> Option<BigInt> {
    let r = v.nth_root(d);
    (num_traits::pow(r.clone(), d as usize) == *v).then_some(r)
}

/// All x in the field with x^d = t, or a reason why they cannot be found.
pub fn nth_roots(t: &FieldScalar, d: u32) -> Result<Vec<FieldScalar>, String> {
    if d == 0 {
        return Err("zeroth root".into());
    }
    match t {
        FieldScalar::Rational(r) => {
            if r.is_zero() {
                return Ok(vec![t.clone()]);
            }
            if r.is_negative() && d.is_multiple_of(2) {
                return Ok(Vec::new());
            }
            let (Some(a), Some(b)) = (exact_root(&r.numer().abs(), d), exact_root(r.denom(), d)) else {
                return Ok(Vec::new());
            };
            let root = BigRational::new(a, b);
            Ok(if r.is_negative() {
                vec![FieldScalar::Rational(-root)]
            } else if d.is_multiple_of(2) {
                vec![FieldScalar::Rational(-root.clone()), FieldScalar::Rational(root)]
            } else {
                vec![FieldScalar::Rational(root)]
            })
        }
        FieldScalar::Modular { value, modulus } => {
            let p = *modulus;
            if p <= BRUTE_FORCE_LIMIT {
                let field = Field::Prime(p);
                return Ok(field.elements().expect("prime field").filter(|x| x.pow(d) == *t).collect());
            }
            if *value == 0 {
                return Ok(vec![t.clone()]);
            }
            let Some(inv) = inverse_mod(d as u64, p - 1) else {
                return Err(format!("{d}-th roots in F_{p} need more than exponent inversion"));
            };
            // With d invertible mod p−1, x = t^(d⁻¹) is the unique root.
            Ok(vec![pow_u64(t, inv)])
        }
    }
}

fn inverse_mod(a: u64, n: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(n as i128));
    (e.gcd == 1).then(|| e.x.rem_euclid(n as i128) as u64)
}

fn pow_u64(t: &FieldScalar, mut exp: u64) -> FieldScalar {
    let mut acc = t.field().one();
    let mut base = t.clone();
    while exp > 0 {
        if exp & 1 == 1 {
            acc = &acc * &base;
        }
        base = &base * &base;
        exp >>= 1;
    }
    acc
}

/// Distinct roots in the field of Σ c_i y^i, or `None` when the search is out
/// of reach (large coefficients over ℚ, large p).
pub fn polynomial_roots(coeffs: &[FieldScalar], field: Field) -> Option<Vec<FieldScalar>> {
    match field {
        Field::Rational => {
            let l = coeffs
                .iter()
                .fold(BigInt::one(), |acc, c| acc.lcm(c.as_rational().expect("rational coefficient").denom()));
            let ints: Vec<BigInt> = coeffs
                .iter()
                .map(|c| (c.as_rational().unwrap() * BigRational::from_integer(l.clone())).to_integer())
                .collect();
            let roots = UPoly::new(ints).rational_roots()?;
            Some(roots.into_iter().map(FieldScalar::Rational).collect())
        }
        Field::Prime(p) => {
            if p > BRUTE_FORCE_LIMIT {
                return None;
            }
            Some(field.elements().unwrap().filter(|x| horner(coeffs, x, field).is_zero()).collect())
        }
    }
}

pub(crate) fn horner(coeffs: &[FieldScalar], x: &FieldScalar, field: Field) -> FieldScalar {
    coeffs.iter().rev().fold(field.zero(), |acc, c| &(&acc * x) + c)
}

/// Divides by (y − r), returning the quotient when the remainder vanishes.
pub(crate) fn divide_linear(coeffs: &[FieldScalar], r: &FieldScalar, field: Field) -> Option<Vec<FieldScalar>> {
    if coeffs.len() < 2 {
        return None;
    }
    let mut q = vec![field.zero(); coeffs.len() - 1];
    let mut carry = field.zero();
    for i in (0..coeffs.len()).rev() {
        let v = &coeffs[i] + &(&carry * r);
        if i == 0 {
            return v.is_zero().then_some(q);
        }
        q[i - 1] = v.clone();
        carry = v;
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> FieldScalar {
        FieldScalar::Rational(BigRational::new(n.into(), d.into()))
    }

    #[test]
    fn rational_roots_of_scalars() {
        assert_eq!(nth_roots(&rat(4, 9), 2).unwrap(), vec![rat(-2, 3), rat(2, 3)]);
        assert_eq!(nth_roots(&rat(-8, 1), 3).unwrap(), vec![rat(-2, 1)]);
        assert!(nth_roots(&rat(2, 1), 2).unwrap().is_empty());
        assert!(nth_roots(&rat(-1, 1), 2).unwrap().is_empty());
    }

    #[test]
    fn prime_field_roots() {
        let f = Field::Prime(7);
        let roots = nth_roots(&f.from_i64(2), 2).unwrap();
        assert_eq!(roots, vec![f.from_i64(3), f.from_i64(4)]);
        let big = Field::Prime(1_000_003);
        // gcd(3, 1_000_002) = 3, so cube roots are out of reach.
        assert!(nth_roots(&big.from_i64(5), 3).is_err());
        let r = nth_roots(&big.from_i64(5), 5).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].pow(5), big.from_i64(5));
    }

    #[test]
    fn synthetic_division() {
        let f = Field::Rational;
        // y^2 − 1 = (y − 1)(y + 1)
        let c = vec![f.from_i64(-1), f.zero(), f.one()];
        assert_eq!(divide_linear(&c, &f.one(), f).unwrap(), vec![f.one(), f.one()]);
        assert!(divide_linear(&c, &f.from_i64(2), f).is_none());
        assert_eq!(polynomial_roots(&c, f).unwrap(), vec![f.from_i64(-1), f.one()]);
    }
}
