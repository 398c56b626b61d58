//! Binomial segments of Δ_0(F) for surfaces (m = 2).

use std::collections::BTreeMap;

use serde::Serialize;

use super::faces::face_polynomial;
use super::projection::build_delta;
use super::roots::{divide_linear, polynomial_roots};
use crate::eps::EpsNumber;
use crate::equation::WeierstrassEquation;
use crate::error::AnalysisError;
use crate::field::{Field, FieldScalar};
use crate::hull::PolytopeContext;
use crate::poly::{ExponentVector, Poly};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearFactor {
    /// The factor is (Y − αX).
    pub alpha: String,
    pub multiplicity: u32,
}

/// One Z^k part of F_τ written as X^a · Y^b · ∏ (Y − α X)^e · R(X, Y).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SegmentComponent {
    pub k: u32,
    pub x_power: u32,
    pub y_power: u32,
    pub factors: Vec<LinearFactor>,
    /// R, homogenized back in X and Y.
    pub residual: String,
    pub residual_degree: usize,
    /// false when the root search was out of reach.
    pub roots_complete: bool,
    /// c·X^a (Y − αX)^e Z^k with α ≠ 0 and e ≥ 1.
    pub binomial: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BinomialSegmentReport {
    /// Face index in Δ_0(F).
    pub face: usize,
    pub endpoints: Vec<Vec<String>>,
    pub face_polynomial: String,
    pub components: Vec<SegmentComponent>,
    /// The common α when every component is binomial in the same factor.
    pub alpha: Option<String>,
    pub is_binomial: bool,
    /// F_τ is itself a single expression c·X^a (Y − αX)^e Z^k.
    pub exact_binomial: bool,
}

fn component(k: u32, terms: &[(ExponentVector, FieldScalar)], field: Field) -> SegmentComponent {
    let a = terms.iter().map(|(e, _)| e.i[0]).min().unwrap_or(0);
    let b = terms.iter().map(|(e, _)| e.i[1]).min().unwrap_or(0);
    let top = terms.iter().map(|(e, _)| e.i[1] - b).max().unwrap_or(0) as usize;
    let mut coeffs = vec![field.zero(); top + 1];
    for (e, c) in terms {
        coeffs[(e.i[1] - b) as usize] = c.clone();
    }
    let roots = polynomial_roots(&coeffs, field);
    let roots_complete = roots.is_some();
    let mut factors = Vec::new();
    for r in roots.unwrap_or_default() {
        let mut e = 0;
        while let Some(q) = divide_linear(&coeffs, &r, field) {
            coeffs = q;
            e += 1;
        }
        if e > 0 {
            factors.push(LinearFactor { alpha: r.to_string(), multiplicity: e });
        }
    }
    // R(X, Y) = Σ c_j X^{d−j} Y^j with d its degree.
    let rdeg = coeffs.len() - 1;
    let mut residual = Poly::zero(field, 2);
    for (j, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            residual.add_term(ExponentVector::new(vec![(rdeg - j) as u32, j as u32], 0), c.clone());
        }
    }
    let binomial = b == 0 && factors.len() == 1 && rdeg == 0;
    SegmentComponent {
        k,
        x_power: a,
        y_power: b,
        factors,
        residual: residual.render(),
        residual_degree: rdeg,
        roots_complete,
        binomial,
    }
}

/// Compact edges of Δ_0(F) on lines x + y = c, with F_τ factored per power
/// of Z over the coefficient field.
pub fn detect_binomial_segments(f: &WeierstrassEquation) -> Result<Vec<BinomialSegmentReport>, AnalysisError> {
    if f.m() != 2 {
        return Err(AnalysisError::Unsupported("binomial segments are defined for m = 2".into()));
    }
    let delta = build_delta(f, &PolytopeContext::Classical)?;
    let slope = vec![EpsNumber::one(), EpsNumber::one()];
    let mut out = Vec::new();
    for (idx, face) in delta.compact_facets() {
        if face.facets.iter().all(|&fi| delta.facets()[fi].normal != slope) {
            continue;
        }
        let ft = face_polynomial(&delta, face, f);
        let mut groups: BTreeMap<u32, Vec<(ExponentVector, FieldScalar)>> = BTreeMap::new();
        for (e, c) in ft.terms() {
            groups.entry(e.k).or_default().push((e.clone(), c.clone()));
        }
        let components: Vec<SegmentComponent> =
            groups.iter().map(|(&k, terms)| component(k, terms, f.field())).collect();
        let alphas: Vec<&String> = components.iter().flat_map(|c| c.factors.iter().map(|x| &x.alpha)).collect();
        let single = alphas.first().filter(|a| alphas.iter().all(|b| b == *a)).map(|a| (*a).clone());
        let is_binomial = !components.is_empty() && components.iter().all(|c| c.binomial) && single.is_some();
        let endpoints = face
            .generators
            .iter()
            .filter(|g| delta.vertices().contains(g))
            .map(|&g| delta.points()[g].coords.iter().map(ToString::to_string).collect())
            .collect();
        out.push(BinomialSegmentReport {
            face: idx,
            endpoints,
            face_polynomial: ft.render(),
            alpha: if is_binomial { single } else { None },
            is_binomial,
            exact_binomial: is_binomial && components.len() == 1,
            components,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eq(s: &str) -> WeierstrassEquation {
        WeierstrassEquation::parse(s, Field::Rational, None).unwrap()
    }

    #[test]
    fn two_different_roots() {
        let r = detect_binomial_segments(&eq("Z^4 + (Y-X)^4*Z^2 + (Y+3*X)^8")).unwrap();
        assert_eq!(r.len(), 1);
        let s = &r[0];
        assert!(!s.is_binomial);
        assert_eq!(s.components.len(), 2);
        assert!(s.components.iter().all(|c| c.binomial));
        let alphas: Vec<_> = s.components.iter().map(|c| (c.k, c.factors[0].alpha.clone(), c.factors[0].multiplicity)).collect();
        assert_eq!(alphas, vec![(0, "-3".to_string(), 8), (2, "1".to_string(), 4)]);
    }

    #[test]
    fn square_of_a_linear_form() {
        let r = detect_binomial_segments(&eq("Z^2 + (Y-X)^2")).unwrap();
        assert_eq!(r.len(), 1);
        assert!(r[0].is_binomial && r[0].exact_binomial);
        assert_eq!(r[0].alpha.as_deref(), Some("1"));
    }

    #[test]
    fn edge_without_factor() {
        let r = detect_binomial_segments(&eq("Z^3 + (X^2 + X*Y^2)*Z + X^2*Y")).unwrap();
        assert_eq!(r.len(), 1);
        assert!(!r[0].is_binomial);
        assert_eq!(r[0].face_polynomial, "X^2*Y + X^2*Z");
        let r = detect_binomial_segments(&eq("Z^2 + X^2*Y^2 + X^5 + Y^5")).unwrap();
        assert!(r.is_empty());
    }
}
