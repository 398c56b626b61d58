//! Weierstrass equations Z^n + Σ a_k(X) Z^k and their Z-substitutions.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::EquationError;
use crate::field::{Field, FieldScalar};
use crate::parse::parse_polynomial;
use crate::poly::{ExponentVector, Poly};

/// A monic polynomial in Z of degree n whose support satisfies
/// i_1+⋯+i_m+k ≥ n for every term. Immutable once validated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassEquation {
    poly: Poly,
    n: u32,
}

/// N(F) and N*(F).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportSet {
    pub full: BTreeSet<ExponentVector>,
    pub reduced: BTreeSet<ExponentVector>,
}

impl WeierstrassEquation {
    /// Validates an expanded polynomial: monic in Z with the support condition.
    pub fn from_poly(poly: Poly) -> Result<Self, EquationError> {
        let n = poly
            .z_degree()
            .ok_or_else(|| EquationError::NotMonic("the zero polynomial".into()))?;
        let m = poly.m();
        let mut lead = ExponentVector::zero(m);
        lead.k = n;
        for (e, c) in poly.terms() {
            if e.k == n && (e != &lead || !c.is_one()) {
                return Err(EquationError::NotMonic(format!(
                    "the Z^{n} coefficient must be exactly 1, found term {c} at {e}"
                )));
            }
        }
        if poly.coefficient(&lead).is_none() {
            return Err(EquationError::NotMonic(format!("missing Z^{n}")));
        }
        if let Some(bad) = first_support_violation(&poly, n) {
            return Err(EquationError::SupportViolation {
                offending: bad,
                n,
                result: Some(Box::new(poly)),
            });
        }
        Ok(Self { poly, n })
    }

    pub fn parse(text: &str, field: Field, m: Option<usize>) -> Result<Self, EquationError> {
        Self::from_poly(parse_polynomial(text, field, m)?)
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    /// Multiplicity (Z-degree).
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> usize {
        self.poly.m()
    }

    pub fn field(&self) -> Field {
        self.poly.field()
    }

    /// The exponent (0,…,0,n) of the leading Z^n.
    pub fn leading_exponent(&self) -> ExponentVector {
        let mut e = ExponentVector::zero(self.m());
        e.k = self.n;
        e
    }

    /// Terms of N*(F) with coefficients, ascending monomial order.
    pub fn reduced_terms(&self) -> impl Iterator<Item = (&ExponentVector, &FieldScalar)> {
        let lead = self.leading_exponent();
        self.poly.terms().filter(move |(e, _)| **e != lead)
    }

    pub fn support(&self) -> SupportSet {
        let reduced: BTreeSet<_> = self.reduced_terms().map(|(e, _)| e.clone()).collect();
        let mut full = reduced.clone();
        full.insert(self.leading_exponent());
        SupportSet { full, reduced }
    }

    /// a_k(X).
    pub fn a(&self, k: u32) -> Poly {
        self.poly.z_coefficient(k)
    }

    pub fn is_tchirnhausen_reduced(&self) -> bool {
        self.n == 0 || self.a(self.n - 1).is_zero()
    }

    /// F(X, Z + alpha). `alpha` must be free of Z and have no constant term.
    ///
    /// A result that breaks the support condition comes back as
    /// [`EquationError::SupportViolation`] carrying the expanded polynomial.
    pub fn substitute_z(&self, alpha: &Poly) -> Result<Self, EquationError> {
        if alpha.m() != self.m() || alpha.field() != self.field() {
            return Err(EquationError::Dimension(
                "substitution polynomial has a different ring".into(),
            ));
        }
        if alpha.terms().any(|(e, _)| e.k > 0) {
            return Err(EquationError::Dimension(
                "substitution polynomial must not involve Z".into(),
            ));
        }
        if alpha.has_constant_term() {
            return Err(EquationError::AlphaHasConstantTerm);
        }
        Self::from_poly(self.poly.substitute_z(alpha))
    }

    /// Z ↦ Z − a_{n−1}/n.
    pub fn tchirnhausen(&self) -> Result<Self, EquationError> {
        let field = self.field();
        let inv_n = field
            .from_i64(self.n as i64)
            .inverse()
            .ok_or(EquationError::NotInvertible { n: self.n, p: field.characteristic() })?;
        if self.n == 0 {
            return Ok(self.clone());
        }
        let alpha = self.a(self.n - 1).scale(&(-&inv_n));
        self.substitute_z(&alpha)
    }

    pub fn render(&self) -> String {
        self.poly.render()
    }
}

fn first_support_violation(poly: &Poly, n: u32) -> Option<ExponentVector> {
    poly.terms()
        .map(|(e, _)| e)
        .find(|e| e.total_degree() < n)
        .cloned()
}

impl std::fmt::Display for WeierstrassEquation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq(text: &str) -> WeierstrassEquation {
        WeierstrassEquation::parse(text, Field::Rational, None).unwrap()
    }

    fn ev(v: &[u32]) -> ExponentVector {
        let (k, i) = v.split_last().unwrap();
        ExponentVector::new(i.to_vec(), *k)
    }

    #[test]
    fn hidden_point_equation_has_fifteen_terms() {
        let f = eq("Z^4 + (Y-X)^4*Z^2 + (Y+3*X)^8");
        assert_eq!(f.n(), 4);
        assert_eq!(f.m(), 2);
        assert_eq!(f.poly().len(), 15);
        assert_eq!(f.support().reduced.len(), 14);
    }

    #[test]
    fn support_sets() {
        let f = eq("Z^3 + (X^2+X*Y^2)*Z + X^2*Y");
        let expect: BTreeSet<_> = [ev(&[2, 0, 1]), ev(&[1, 2, 1]), ev(&[2, 1, 0])].into();
        assert_eq!(f.support().reduced, expect);

        let g = eq("Z^2 + X^3");
        assert_eq!(g.support().reduced, [ev(&[3, 0])].into());
        assert!(g.support().full.contains(&ev(&[0, 2])));

        let h = eq("Z^4+(Y^2+X*Y)*Z^2+X^4");
        let expect: BTreeSet<_> = [ev(&[0, 2, 2]), ev(&[1, 1, 2]), ev(&[4, 0, 0])].into();
        assert_eq!(h.support().reduced, expect);

        let bare = WeierstrassEquation::parse("Z^2", Field::Rational, Some(2)).unwrap();
        assert!(bare.support().reduced.is_empty());
        assert_eq!(bare.m(), 2);
    }

    #[test]
    fn validation_errors() {
        match WeierstrassEquation::parse("Z^2 + X", Field::Rational, None) {
            Err(EquationError::SupportViolation { offending, n: 2, .. }) => {
                assert_eq!(offending, ev(&[1, 0]))
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            WeierstrassEquation::parse("2*Z^2 + X^3", Field::Rational, None),
            Err(EquationError::NotMonic(_))
        ));
        assert!(matches!(
            WeierstrassEquation::parse("Z^2 + X*Z^2", Field::Rational, None),
            Err(EquationError::NotMonic(_))
        ));
        assert!(matches!(
            WeierstrassEquation::parse("X^3", Field::Rational, None),
            Err(EquationError::NotMonic(_))
        ));
    }

    #[test]
    fn substitution_examples() {
        let f = eq("Z^2+2*X*Z+X^2");
        let minus_x = parse_polynomial("-X", Field::Rational, Some(1)).unwrap();
        assert_eq!(f.substitute_z(&minus_x).unwrap(), eq("Z^2"));

        let g = eq("Z^2+2*X*Z+X^3");
        assert_eq!(g.substitute_z(&minus_x).unwrap(), eq("Z^2 - X^2 + X^3"));

        let h = eq("Z^2+X^3");
        assert_eq!(h.substitute_z(&Poly::zero(Field::Rational, 1)).unwrap(), h);

        let unit = parse_polynomial("1 + X", Field::Rational, Some(1)).unwrap();
        assert_eq!(h.substitute_z(&unit), Err(EquationError::AlphaHasConstantTerm));
    }

    #[test]
    fn tchirnhausen_examples() {
        assert_eq!(eq("Z^2+2*X*Z+X^3").tchirnhausen().unwrap(), eq("Z^2 - X^2 + X^3"));
        let reduced = eq("Z^3 + X^2*Z + X^2*Y");
        assert_eq!(reduced.tchirnhausen().unwrap(), reduced);
        let f2 = WeierstrassEquation::parse("Z^2+2*X*Z+X^2", Field::Prime(2), None).unwrap();
        assert_eq!(f2.tchirnhausen(), Err(EquationError::NotInvertible { n: 2, p: 2 }));
    }
}
