//! Sparse multivariate polynomials in X_1..X_m and Z over an exact field.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::field::{Field, FieldScalar};

/// Exponents `(i_1, …, i_m, k)` of a monomial X_1^{i_1}⋯X_m^{i_m} Z^k.
///
/// Ordered graded-lexicographically, X_1 most significant and Z last.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExponentVector {
    pub i: Vec<u32>,
    pub k: u32,
}

impl ExponentVector {
    pub fn new(i: Vec<u32>, k: u32) -> Self {
        Self { i, k }
    }

    pub fn zero(m: usize) -> Self {
        Self { i: vec![0; m], k: 0 }
    }

    pub fn m(&self) -> usize {
        self.i.len()
    }

    /// i_1 + ⋯ + i_m.
    pub fn x_degree(&self) -> u32 {
        self.i.iter().sum()
    }

    pub fn total_degree(&self) -> u32 {
        self.x_degree() + self.k
    }

    fn add(&self, other: &Self) -> Self {
        Self {
            i: self.i.iter().zip(&other.i).map(|(a, b)| a + b).collect(),
            k: self.k + other.k,
        }
    }

    /// Flat form `[i_1, …, i_m, k]`.
    pub fn to_vec(&self) -> Vec<u32> {
        let mut v = self.i.clone();
        v.push(self.k);
        v
    }
}

impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.i.cmp(&other.i))
            .then_with(|| self.k.cmp(&other.k))
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for v in &self.i {
            write!(f, "{v},")?;
        }
        write!(f, "{})", self.k)
    }
}

impl Serialize for ExponentVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_vec().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExponentVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let mut v = Vec::<u32>::deserialize(d)?;
        let k = v.pop().ok_or_else(|| D::Error::custom("empty exponent vector"))?;
        Ok(Self { i: v, k })
    }
}

/// Variable names used for rendering: `X, Y` when m ≤ 2, otherwise `X1..Xm`.
pub fn variable_name(m: usize, index: usize) -> String {
    if m <= 2 {
        ["X", "Y"][index].to_string()
    } else {
        format!("X{}", index + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    m: usize,
    terms: BTreeMap<ExponentVector, FieldScalar>,
}

impl Poly {
    pub fn zero(field: Field, m: usize) -> Self {
        Self { field, m, terms: BTreeMap::new() }
    }

    pub fn constant(field: Field, m: usize, c: FieldScalar) -> Self {
        Self::monomial(field, ExponentVector::zero(m), c)
    }

    pub fn monomial(field: Field, e: ExponentVector, c: FieldScalar) -> Self {
        let mut p = Self::zero(field, e.m());
        if !c.is_zero() {
            p.terms.insert(e, c);
        }
        p
    }

    /// The variable X_{index+1}.
    pub fn x(field: Field, m: usize, index: usize) -> Self {
        let mut e = ExponentVector::zero(m);
        e.i[index] = 1;
        Self::monomial(field, e, field.one())
    }

    pub fn z(field: Field, m: usize) -> Self {
        let mut e = ExponentVector::zero(m);
        e.k = 1;
        Self::monomial(field, e, field.one())
    }

    pub fn from_terms(
        field: Field,
        m: usize,
        terms: impl IntoIterator<Item = (ExponentVector, FieldScalar)>,
    ) -> Self {
        let mut p = Self::zero(field, m);
        for (e, c) in terms {
            assert_eq!(e.m(), m, "exponent vector of wrong length");
            p.add_term(e, c);
        }
        p
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExponentVector, &FieldScalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &ExponentVector) -> Option<&FieldScalar> {
        self.terms.get(e)
    }

    pub fn add_term(&mut self, e: ExponentVector, c: FieldScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(existing) => {
                let s = &*existing + &c;
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn z_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.k).max()
    }

    /// Coefficient a_k(X) of Z^k, as a polynomial with no Z.
    pub fn z_coefficient(&self, k: u32) -> Poly {
        Poly::from_terms(
            self.field,
            self.m,
            self.terms
                .iter()
                .filter(|(e, _)| e.k == k)
                .map(|(e, c)| (ExponentVector::new(e.i.clone(), 0), c.clone())),
        )
    }

    pub fn has_constant_term(&self) -> bool {
        self.terms.contains_key(&ExponentVector::zero(self.m))
    }

    pub fn scale(&self, c: &FieldScalar) -> Poly {
        Poly::from_terms(
            self.field,
            self.m,
            self.terms.iter().map(|(e, a)| (e.clone(), a * c)),
        )
    }

    pub fn neg(&self) -> Poly {
        self.scale(&(-&self.field.one()))
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.check_compatible(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.check_compatible(other);
        let mut out = Poly::zero(self.field, self.m);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea.add(eb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, mut exp: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::constant(self.field, self.m, self.field.one());
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// F(X, Z + alpha), expanded. `alpha` must not involve Z.
    pub fn substitute_z(&self, alpha: &Poly) -> Poly {
        self.check_compatible(alpha);
        let shifted = Poly::z(self.field, self.m).add(alpha);
        let top = match self.z_degree() {
            Some(d) => d,
            None => return self.clone(),
        };
        // Horner in Z: (((a_n)(Z+α) + a_{n-1})(Z+α) + …)
        let mut acc = self.z_coefficient(top);
        for k in (0..top).rev() {
            acc = acc.mul(&shifted).add(&self.z_coefficient(k));
        }
        acc
    }

    fn check_compatible(&self, other: &Poly) {
        assert_eq!(self.field, other.field, "polynomials over different fields");
        assert_eq!(self.m, other.m, "polynomials in different numbers of variables");
    }

    /// Canonical rendering, terms in descending graded-lex order.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative_display();
            let magnitude = if negative { -c } else { c.clone() };
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let mono = render_monomial(self.m, e);
            if mono.is_empty() {
                out.push_str(&magnitude.to_string());
            } else if magnitude.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{magnitude}*{mono}"));
            }
        }
        out
    }
}

fn render_monomial(m: usize, e: &ExponentVector) -> String {
    let mut factors = Vec::new();
    for (idx, &p) in e.i.iter().enumerate() {
        push_power(&mut factors, variable_name(m, idx), p);
    }
    push_power(&mut factors, "Z".to_string(), e.k);
    factors.join("*")
}

fn push_power(factors: &mut Vec<String>, name: String, p: u32) {
    match p {
        0 => {}
        1 => factors.push(name),
        _ => factors.push(format!("{name}^{p}")),
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}
