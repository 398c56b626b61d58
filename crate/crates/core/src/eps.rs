//! The ordered field ℚ(ε) and the two orderings used on it.
//!
//! Infinitesimal mode orders ℚ(ε) as if ε were an arbitrarily small positive
//! irrational: the sign of `num/den` is the product of the signs of the
//! lowest-degree nonzero coefficients. Concrete mode `At(q)` evaluates at a
//! positive rational.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::EpsError;
use crate::field::{format_rational, parse_rational};
use crate::upoly::{sign_of, UPoly};

/// Misuse guard on ε-degrees; real predicates stay at degree ≤ m+1.
pub const MAX_EPS_DEGREE: usize = 64;

/// An element `num(ε)/den(ε)` of ℚ(ε) in canonical form: coprime over ℚ[ε],
/// joint integer content 1, and positive lowest-degree coefficient of `den`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EpsNumber {
    num: UPoly,
    den: UPoly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

impl EpsNumber {
    pub fn zero() -> Self {
        Self { num: UPoly::zero(), den: UPoly::one() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(v: i64) -> Self {
        Self { num: UPoly::constant(v.into()), den: UPoly::one() }
    }

    pub fn from_rational(r: &BigRational) -> Self {
        Self {
            num: UPoly::constant(r.numer().clone()),
            den: UPoly::constant(r.denom().clone()),
        }
    }

    /// The indeterminate ε itself.
    pub fn eps() -> Self {
        Self { num: UPoly::from_i64s(&[0, 1]), den: UPoly::one() }
    }

    pub fn from_polys(num: UPoly, den: UPoly) -> Result<Self, EpsError> {
        if den.is_zero() {
            return Err(EpsError::DivisionByZero);
        }
        let degree = num.degree().unwrap_or(0).max(den.degree().unwrap_or(0));
        if degree > MAX_EPS_DEGREE {
            return Err(EpsError::DegreeCap(degree));
        }
        Ok(Self::canonical(num, den))
    }

    /// `a / (b + c·ε)`; the shape of every perturbed coordinate.
    pub fn ratio_linear(a: i64, b: i64, c: i64) -> Self {
        Self::from_polys(UPoly::constant(a.into()), UPoly::linear(b, c)).expect("nonzero denominator")
    }

    fn canonical(mut num: UPoly, mut den: UPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if !den.is_constant() && !num.is_constant() {
            let g = num.gcd(&den);
            if !g.is_constant() {
                num = num.exact_div(&g).expect("gcd divides numerator");
                den = den.exact_div(&g).expect("gcd divides denominator");
            }
        }
        let c = num.content().gcd(&den.content());
        if !c.is_one() {
            num = divide_coeffs(&num, &c);
            den = divide_coeffs(&den, &c);
        }
        if den.lowest().is_some_and(|(_, l)| l.is_negative()) {
            num = num.neg();
            den = den.neg();
        }
        Self { num, den }
    }

    pub fn num(&self) -> &UPoly {
        &self.num
    }

    pub fn den(&self) -> &UPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True when the value does not involve ε.
    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.is_constant().then(|| {
            BigRational::new(self.num.constant_term(), self.den.constant_term())
        })
    }

    pub fn degree(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self, EpsError> {
        if self.den == rhs.den {
            return Self::from_polys(self.num.add(&rhs.num), self.den.clone());
        }
        Self::from_polys(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self, EpsError> {
        self.checked_add(&rhs.neg_ref())
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, EpsError> {
        Self::from_polys(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, EpsError> {
        if rhs.is_zero() {
            return Err(EpsError::DivisionByZero);
        }
        Self::from_polys(self.num.mul(&rhs.den), self.den.mul(&rhs.num))
    }

    /// Field operation by name.
    pub fn apply(&self, op: Op, rhs: &Self) -> Result<Self, EpsError> {
        match op {
            Op::Add => self.checked_add(rhs),
            Op::Sub => self.checked_sub(rhs),
            Op::Mul => self.checked_mul(rhs),
            Op::Div => self.checked_div(rhs),
        }
    }

    fn neg_ref(&self) -> Self {
        Self { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn recip(&self) -> Result<Self, EpsError> {
        Self::one().checked_div(self)
    }

    /// Exact value at ε = q.
    pub fn eval(&self, q: &BigRational) -> Result<BigRational, EpsError> {
        let d = self.den.eval(q);
        if d.is_zero() {
            return Err(EpsError::Pole(format_rational(q)));
        }
        Ok(self.num.eval(q) / d)
    }

    /// Sign in the given ordering: −1, 0 or +1.
    pub fn sign(&self, ctx: &OrderingContext) -> Result<i8, EpsError> {
        match ctx {
            OrderingContext::Infinitesimal => {
                Ok(self.num.sign_at_zero_plus() * self.den.sign_at_zero_plus())
            }
            OrderingContext::At(q) => Ok(sign_of(&self.eval(q)?)),
        }
    }

    pub fn cmp_in(&self, other: &Self, ctx: &OrderingContext) -> Result<Ordering, EpsError> {
        Ok(match self.checked_sub(other)?.sign(ctx)? {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        })
    }

    /// Correctly rounded decimal of the value at `q`.
    pub fn to_decimal_at(&self, q: &BigRational, digits: u32) -> Result<String, EpsError> {
        Ok(decimal_string(&self.eval(q)?, digits))
    }

    /// Decimal in a context; infinitesimal mode needs a display sample.
    pub fn to_decimal(
        &self,
        ctx: &OrderingContext,
        digits: u32,
        sample: Option<&BigRational>,
    ) -> Result<String, EpsError> {
        match (ctx, sample) {
            (OrderingContext::At(q), _) => self.to_decimal_at(q, digits),
            (OrderingContext::Infinitesimal, Some(q)) => self.to_decimal_at(q, digits),
            (OrderingContext::Infinitesimal, None) => Err(EpsError::BadContext(
                "decimal rendering in infinitesimal mode needs a sample value".into(),
            )),
        }
    }
}

fn divide_coeffs(p: &UPoly, c: &BigInt) -> UPoly {
    UPoly::new(p.coeffs().iter().map(|a| a / c).collect())
}

/// Rounds half away from zero to `digits` fractional digits.
pub fn decimal_string(r: &BigRational, digits: u32) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits as usize);
    let scaled = r * BigRational::from_integer(scale.clone());
    let half = BigRational::new(1.into(), 2.into());
    let rounded = if scaled.is_negative() {
        -((-scaled) + half).floor()
    } else {
        (scaled + half).floor()
    }
    .to_integer();
    let negative = rounded.is_negative();
    let mag = rounded.abs();
    let (int_part, frac_part) = mag.div_rem(&scale);
    let mut s = String::new();
    if negative {
        s.push('-');
    }
    s.push_str(&int_part.to_string());
    if digits > 0 {
        s.push('.');
        s.push_str(&format!("{:0>width$}", frac_part.to_string(), width = digits as usize));
    }
    s
}

impl fmt::Display for EpsNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.as_rational() {
            return write!(f, "{}", format_rational(&r));
        }
        if self.den == UPoly::one() {
            write!(f, "{}", self.num)
        } else if self.num.is_constant() {
            write!(f, "{}/({})", self.num, self.den)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

macro_rules! forward_op {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for &EpsNumber {
            type Output = EpsNumber;
            /// Panics on division by zero or when the ε-degree cap is exceeded;
            /// use the `checked_*` form to handle those.
            fn $method(self, rhs: &EpsNumber) -> EpsNumber {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait for EpsNumber {
            type Output = EpsNumber;
            fn $method(self, rhs: EpsNumber) -> EpsNumber {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_op!(Add, add, checked_add);
forward_op!(Sub, sub, checked_sub);
forward_op!(Mul, mul, checked_mul);
forward_op!(Div, div, checked_div);

impl Neg for &EpsNumber {
    type Output = EpsNumber;
    fn neg(self) -> EpsNumber {
        self.neg_ref()
    }
}

impl Neg for EpsNumber {
    type Output = EpsNumber;
    fn neg(self) -> EpsNumber {
        self.neg_ref()
    }
}

/// How signs in ℚ(ε) are decided.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum OrderingContext {
    Infinitesimal,
    At(BigRational),
}

impl OrderingContext {
    /// `At(q)` for a positive rational `q`.
    pub fn at(q: BigRational) -> Result<Self, EpsError> {
        if !q.is_positive() {
            return Err(EpsError::BadContext(format!(
                "epsilon must be positive, got {}",
                format_rational(&q)
            )));
        }
        Ok(OrderingContext::At(q))
    }

    /// Parses `inf` or a positive rational.
    pub fn parse(text: &str) -> Result<Self, EpsError> {
        let t = text.trim();
        if matches!(t, "inf" | "infinitesimal" | "0+") {
            return Ok(OrderingContext::Infinitesimal);
        }
        let q = parse_rational(t).ok_or_else(|| EpsError::BadContext(format!("bad epsilon `{t}`")))?;
        Self::at(q)
    }

    /// Conditions under which a concrete ε leaves the range 0 < ε < 1 that the band and permissibility checks assume.
    pub fn warnings(&self) -> Vec<String> {
        match self {
            OrderingContext::Infinitesimal => Vec::new(),
            OrderingContext::At(q) if *q >= BigRational::one() => vec![format!(
                "epsilon = {} is not below 1; tangent-cone and permissibility bands assume 0 < eps < 1",
                format_rational(q)
            )],
            OrderingContext::At(_) => Vec::new(),
        }
    }

    /// A tie (sign 0 of a non-constant function) at a rational ε, which the
    /// irrational-ε statements exclude.
    pub fn is_rational_tie(&self, value: &EpsNumber) -> bool {
        matches!(self, OrderingContext::At(_))
            && !value.is_constant()
            && value.sign(self).map(|s| s == 0).unwrap_or(false)
    }
}

impl fmt::Display for OrderingContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderingContext::Infinitesimal => write!(f, "infinitesimal"),
            OrderingContext::At(q) => write!(f, "eps={}", format_rational(q)),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
enum ContextRepr {
    Infinitesimal,
    At { q: String },
}

impl Serialize for OrderingContext {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            OrderingContext::Infinitesimal => ContextRepr::Infinitesimal,
            OrderingContext::At(q) => ContextRepr::At { q: format_rational(q) },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for OrderingContext {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match ContextRepr::deserialize(d)? {
            ContextRepr::Infinitesimal => Ok(OrderingContext::Infinitesimal),
            ContextRepr::At { q } => {
                let q = parse_rational(&q).ok_or_else(|| D::Error::custom("bad rational"))?;
                OrderingContext::at(q).map_err(D::Error::custom)
            }
        }
    }
}

/// Integer coefficient as a JSON number when it fits in i64, else a string.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Small(i64),
    Big(String),
}

fn int_repr(v: &BigInt) -> IntRepr {
    match v.to_i64() {
        Some(s) => IntRepr::Small(s),
        None => IntRepr::Big(v.to_string()),
    }
}

fn int_from_repr<E: serde::de::Error>(r: IntRepr) -> Result<BigInt, E> {
    match r {
        IntRepr::Small(v) => Ok(v.into()),
        IntRepr::Big(s) => s.parse().map_err(E::custom),
    }
}

#[derive(Serialize, Deserialize)]
struct EpsRepr {
    num: Vec<IntRepr>,
    den: Vec<IntRepr>,
}

impl Serialize for EpsNumber {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut num: Vec<IntRepr> = self.num.coeffs().iter().map(int_repr).collect();
        if num.is_empty() {
            num.push(IntRepr::Small(0));
        }
        EpsRepr { num, den: self.den.coeffs().iter().map(int_repr).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for EpsNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = EpsRepr::deserialize(d)?;
        let num = repr.num.into_iter().map(int_from_repr::<D::Error>).collect::<Result<Vec<_>, _>>()?;
        let den = repr.den.into_iter().map(int_from_repr::<D::Error>).collect::<Result<Vec<_>, _>>()?;
        EpsNumber::from_polys(UPoly::new(num), UPoly::new(den)).map_err(D::Error::custom)
    }
}
