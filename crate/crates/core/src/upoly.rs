//! Dense univariate polynomials over ℤ, in the perturbation parameter ε.
//!
//! Besides ring arithmetic this provides the exact tools the rest of the
//! crate leans on: primitive gcd, Sturm sequences and real-root isolation.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Coefficients in ascending degree, never with a trailing zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UPoly {
    coeffs: Vec<BigInt>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64s(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `a + b·ε`.
    pub fn linear(a: i64, b: i64) -> Self {
        Self::from_i64s(&[a, b])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeffs.first().cloned().unwrap_or_default()
    }

    /// Lowest-degree nonzero coefficient with its degree.
    pub fn lowest(&self) -> Option<(usize, &BigInt)> {
        self.coeffs.iter().enumerate().find(|(_, c)| !c.is_zero())
    }

    /// Sign of p(ε) for every sufficiently small ε > 0.
    pub fn sign_at_zero_plus(&self) -> i8 {
        match self.lowest() {
            None => 0,
            Some((_, c)) if c.is_positive() => 1,
            Some(_) => -1,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for d in 0..n {
            let a = self.coeffs.get(d);
            let b = other.coeffs.get(d);
            out.push(match (a, b) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Self::new(out)
    }

    pub fn neg(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    pub fn sign_at(&self, x: &BigRational) -> i8 {
        sign_of(&self.eval(x))
    }

    /// Gcd of the coefficients, nonnegative.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content; keeps the sign of every coefficient.
    pub fn primitive(&self) -> Self {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            return self.clone();
        }
        Self { coeffs: self.coeffs.iter().map(|a| a / &c).collect() }
    }

    /// Primitive part with positive leading coefficient.
    pub fn normalized(&self) -> Self {
        let p = self.primitive();
        if p.leading().is_some_and(|l| l.is_negative()) {
            p.neg()
        } else {
            p
        }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(d, c)| c * BigInt::from(d))
                .collect(),
        )
    }

    /// lc(d)^(deg a − deg d + 1) · a mod d, which stays in ℤ[ε].
    pub fn pseudo_rem(&self, d: &Self) -> Self {
        assert!(!d.is_zero(), "pseudo-remainder by zero");
        let dd = d.degree().unwrap();
        let lc = d.leading().unwrap().clone();
        let mut r = self.clone();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let factor = r.leading().unwrap().clone();
            let shift = rd - dd;
            let mut sub = vec![BigInt::zero(); shift];
            sub.extend(d.coeffs.iter().map(|c| c * &factor));
            r = r.scale(&lc).sub(&Self::new(sub));
        }
        r
    }

    /// Exact quotient in ℤ[ε]; `None` when `d` does not divide `self` there.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        let dd = d.degree().unwrap();
        let lc = d.leading().unwrap();
        let mut r = self.clone();
        let Some(rd) = r.degree() else { return Some(Self::zero()) };
        if rd < dd {
            return None;
        }
        let mut q = vec![BigInt::zero(); rd - dd + 1];
        while let Some(rd) = r.degree() {
            if rd < dd {
                return None;
            }
            let (quot, rem) = r.leading().unwrap().div_rem(lc);
            if !rem.is_zero() {
                return None;
            }
            let shift = rd - dd;
            let mut sub = vec![BigInt::zero(); shift];
            sub.extend(d.coeffs.iter().map(|c| c * &quot));
            q[shift] = quot;
            r = r.sub(&Self::new(sub));
        }
        Some(Self::new(q))
    }

    /// Gcd over ℚ[ε], returned primitive with positive leading coefficient.
    /// The gcd of two zero polynomials is zero.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.normalized();
        }
        if other.is_zero() {
            return self.normalized();
        }
        let mut a = self.primitive();
        let mut b = other.primitive();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            if b.degree() == Some(0) {
                return Self::one();
            }
            let r = a.pseudo_rem(&b).primitive();
            a = b;
            b = r;
        }
        a.normalized()
    }

    pub fn square_free(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.normalized();
        }
        let g = self.gcd(&self.derivative());
        self.exact_div(&g)
            .or_else(|| self.scale(g.leading().unwrap()).exact_div(&g))
            .expect("gcd divides")
            .normalized()
    }

    /// Sturm sequence of a square-free polynomial, with sign-preserving
    /// pseudo-remainders.
    pub fn sturm_sequence(&self) -> Vec<Self> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let len = seq.len();
            let (prev, cur) = (&seq[len - 2], &seq[len - 1]);
            if cur.is_zero() {
                seq.pop();
                break;
            }
            let rd = prev.degree().unwrap();
            let cd = cur.degree().unwrap();
            if cd == 0 {
                break;
            }
            let delta = (rd - cd + 1) as u32;
            let mut r = prev.pseudo_rem(cur);
            // prem = lc^delta · rem; undo a negative multiplier, then negate.
            if cur.leading().unwrap().is_negative() && delta % 2 == 1 {
                r = r.neg();
            }
            let next = r.neg().primitive();
            if next.is_zero() {
                break;
            }
            seq.push(next);
        }
        seq
    }

    /// Cauchy bound: every real root has absolute value below it.
    pub fn root_bound(&self) -> BigRational {
        let lc = BigRational::from_integer(self.leading().cloned().unwrap_or_else(BigInt::one).abs());
        let m = self
            .coeffs
            .iter()
            .map(|c| BigRational::from_integer(c.abs()) / &lc)
            .fold(BigRational::zero(), |a, b| if b > a { b } else { a });
        m + BigRational::one()
    }

    /// Rational roots of a polynomial whose extreme coefficients are small
    /// enough for divisor enumeration; `None` when they are not.
    pub fn rational_roots(&self) -> Option<Vec<BigRational>> {
        let p = self.square_free();
        let Some(deg) = p.degree() else { return Some(Vec::new()) };
        if deg == 0 {
            return Some(Vec::new());
        }
        let mut roots = Vec::new();
        let (low, _) = p.lowest().unwrap();
        let stripped = Self::new(p.coeffs[low..].to_vec());
        if low > 0 {
            roots.push(BigRational::zero());
        }
        if stripped.degree() == Some(0) {
            return Some(roots);
        }
        let a0 = stripped.constant_term().abs();
        let an = stripped.leading().unwrap().abs();
        let nums = small_divisors(&a0)?;
        let dens = small_divisors(&an)?;
        for n in &nums {
            for d in &dens {
                if !n.gcd(d).is_one() {
                    continue;
                }
                for s in [1, -1] {
                    let r = BigRational::new(n * BigInt::from(s), d.clone());
                    if stripped.eval(&r).is_zero() {
                        roots.push(r);
                    }
                }
            }
        }
        roots.sort();
        roots.dedup();
        Some(roots)
    }

    /// Isolates the distinct real roots in the half-open interval (lo, hi].
    pub fn real_roots_in(&self, lo: &BigRational, hi: &BigRational) -> Vec<RealRoot> {
        if self.degree().unwrap_or(0) == 0 || lo >= hi {
            return Vec::new();
        }
        let sf = self.square_free();
        let mut out = Vec::new();
        let mut rest = sf.clone();
        if let Some(rats) = sf.rational_roots() {
            for r in rats {
                let lin = Self::new(vec![-r.numer().clone(), r.denom().clone()]);
                rest = rest.exact_div(&lin).expect("rational root divides");
                if &r > lo && &r <= hi {
                    out.push(RealRoot::Exact(r));
                }
            }
        }
        if rest.degree().unwrap_or(0) > 0 {
            let seq = rest.sturm_sequence();
            isolate(&rest, &seq, lo.clone(), hi.clone(), &mut out);
        }
        out.sort_by(|a, b| a.cmp_value(b));
        out
    }
}

fn small_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let v = n.to_u64().filter(|v| *v <= 1_000_000_000_000)?;
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= v {
        if v % d == 0 {
            out.push(BigInt::from(d));
            if d * d != v {
                out.push(BigInt::from(v / d));
            }
        }
        d += 1;
    }
    Some(out)
}

pub(crate) fn sign_of(r: &BigRational) -> i8 {
    match r.cmp(&BigRational::zero()) {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

fn sign_changes(seq: &[UPoly], x: &BigRational) -> usize {
    let mut changes = 0;
    let mut last = 0i8;
    for p in seq {
        let s = p.sign_at(x);
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

/// Bisection driven by Sturm counts over (lo, hi]. `poly` has no rational roots.
fn isolate(poly: &UPoly, seq: &[UPoly], lo: BigRational, hi: BigRational, out: &mut Vec<RealRoot>) {
    let count = sign_changes(seq, &lo) as isize - sign_changes(seq, &hi) as isize;
    if count <= 0 {
        return;
    }
    if count == 1 {
        out.push(RealRoot::Isolated { poly: poly.clone(), lo, hi });
        return;
    }
    let mid = (&lo + &hi) / BigRational::from_integer(2.into());
    isolate(poly, seq, lo, mid.clone(), out);
    isolate(poly, seq, mid, hi, out);
}

/// A real algebraic number: an exact rational, or the unique root of a
/// square-free `poly` in the open interval (lo, hi).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealRoot {
    Exact(BigRational),
    Isolated { poly: UPoly, lo: BigRational, hi: BigRational },
}

impl RealRoot {
    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            RealRoot::Exact(r) => Some(r),
            RealRoot::Isolated { .. } => None,
        }
    }

    /// Lower and upper rational bounds (equal for exact roots).
    pub fn bounds(&self) -> (BigRational, BigRational) {
        match self {
            RealRoot::Exact(r) => (r.clone(), r.clone()),
            RealRoot::Isolated { lo, hi, .. } => (lo.clone(), hi.clone()),
        }
    }

    /// Halves the isolating interval.
    pub fn refine(&mut self) {
        if let RealRoot::Isolated { poly, lo, hi } = self {
            let mid = (&*lo + &*hi) / BigRational::from_integer(2.into());
            let s_mid = poly.sign_at(&mid);
            if s_mid == 0 {
                *self = RealRoot::Exact(mid);
                return;
            }
            if poly.sign_at(lo) * s_mid < 0 || poly.sign_at(lo) == 0 {
                *hi = mid;
            } else {
                *lo = mid;
            }
        }
    }

    /// Refines until the interval is narrower than `width`.
    pub fn refine_to(&mut self, width: &BigRational) {
        loop {
            let (lo, hi) = self.bounds();
            if &(hi - lo) < width {
                return;
            }
            self.refine();
        }
    }

    /// The root is also a root of `other`.
    pub fn is_root_of(&self, other: &UPoly) -> bool {
        match self {
            RealRoot::Exact(r) => other.eval(r).is_zero(),
            RealRoot::Isolated { poly, lo, hi } => {
                let g = poly.gcd(other);
                if g.degree().unwrap_or(0) == 0 {
                    return false;
                }
                // g is square-free as a factor of poly; count its roots in (lo, hi).
                let seq = g.sturm_sequence();
                let c = sign_changes(&seq, lo) as isize - sign_changes(&seq, hi) as isize;
                c > 0
            }
        }
    }

    /// Exact comparison, refining copies of both as needed.
    pub fn cmp_value(&self, other: &RealRoot) -> Ordering {
        if let (RealRoot::Exact(a), RealRoot::Exact(b)) = (self, other) {
            return a.cmp(b);
        }
        if self.equals(other) {
            return Ordering::Equal;
        }
        let mut a = self.clone();
        let mut b = other.clone();
        loop {
            let (alo, ahi) = a.bounds();
            let (blo, bhi) = b.bounds();
            if ahi <= blo {
                return Ordering::Less;
            }
            if bhi <= alo {
                return Ordering::Greater;
            }
            a.refine();
            b.refine();
        }
    }

    pub fn equals(&self, other: &RealRoot) -> bool {
        match (self, other) {
            (RealRoot::Exact(a), RealRoot::Exact(b)) => a == b,
            (RealRoot::Exact(v), RealRoot::Isolated { poly, lo, hi })
            | (RealRoot::Isolated { poly, lo, hi }, RealRoot::Exact(v)) => {
                v > lo && v < hi && poly.eval(v).is_zero()
            }
            (RealRoot::Isolated { poly: pa, lo: alo, hi: ahi }, RealRoot::Isolated { poly: pb, lo: blo, hi: bhi }) => {
                if ahi <= blo || bhi <= alo {
                    return false;
                }
                let g = pa.gcd(pb);
                if g.degree().unwrap_or(0) == 0 {
                    return false;
                }
                // pa has a single root in its interval, so g has at most one
                // root in the overlap; if it has one, it is both a and b.
                let lo = if alo > blo { alo } else { blo };
                let hi = if ahi < bhi { ahi } else { bhi };
                let seq = g.sturm_sequence();
                sign_changes(&seq, lo) > sign_changes(&seq, hi)
            }
        }
    }
}

impl fmt::Display for RealRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealRoot::Exact(r) => write!(f, "{r}"),
            RealRoot::Isolated { poly, lo, hi } => write!(f, "root of {poly} in ({lo}, {hi})"),
        }
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            match d {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if d == 1 {
                        write!(f, "eps")?;
                    } else {
                        write!(f, "eps^{d}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
