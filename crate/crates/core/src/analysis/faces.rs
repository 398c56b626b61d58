//! Face rationality, face polynomials and the audit of non-rational faces.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::linalg::{all_positive, dot, nullspace, primitive_integer, rank};
use crate::eps::{EpsNumber, OrderingContext};
use crate::equation::WeierstrassEquation;
use crate::error::{AnalysisError, EpsError};
use crate::hull::{Face, NHPolytope, PolytopeContext};
use crate::poly::{ExponentVector, Poly};
use crate::upoly::UPoly;

fn ser_ints<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

/// `a · x = b` with `a` a nonnegative integer vector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegerHyperplane {
    #[serde(serialize_with = "ser_ints")]
    pub a: Vec<BigInt>,
    pub b: EpsNumber,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RationalityVerdict {
    Rational { k: u32, system: Vec<IntegerHyperplane> },
    NonRational { witness: (ExponentVector, ExponentVector) },
    NotApplicable { reason: String },
}

impl RationalityVerdict {
    pub fn is_rational(&self) -> bool {
        matches!(self, RationalityVerdict::Rational { .. })
    }

    pub fn is_non_rational(&self) -> bool {
        matches!(self, RationalityVerdict::NonRational { .. })
    }
}

/// Both rationality criteria for one face. `agree` is false only if the
/// single-k test and the integer-system test contradict each other.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceClassification {
    pub verdict: RationalityVerdict,
    pub k_criterion: Option<bool>,
    pub integer_criterion: Option<bool>,
    pub agree: bool,
}

fn not_applicable(reason: &str) -> FaceClassification {
    FaceClassification {
        verdict: RationalityVerdict::NotApplicable { reason: reason.into() },
        k_criterion: None,
        integer_criterion: None,
        agree: true,
    }
}

/// Classifies a compact face of an infinitesimal polytope as rational or
/// not, by the Z-exponents of its generators and independently by searching
/// for an integer hyperplane system through it.
pub fn classify_face(poly: &NHPolytope, face: &Face) -> Result<FaceClassification, AnalysisError> {
    if poly.context() != &PolytopeContext::infinitesimal() {
        return Ok(not_applicable("rationality needs an infinitesimal perturbation"));
    }
    if !face.compact {
        return Ok(not_applicable("face is not compact"));
    }
    let pts: Vec<&[EpsNumber]> = face.generators.iter().map(|&g| poly.points()[g].coords.as_slice()).collect();
    let m = poly.m();
    if face.dim >= 1 {
        for j in 0..m {
            if pts.iter().all(|p| p[j] == pts[0][j]) {
                return Ok(not_applicable("face is parallel to a coordinate hyperplane"));
            }
        }
    }

    let prov = poly.face_provenance(face);
    let first = prov.first().expect("compact faces have generators").clone();
    let witness = prov.iter().find(|e| e.k != first.k).cloned();
    let k_rational = witness.is_none();

    let system = integer_system(poly, face)?;
    let integer_rational = system.is_some();

    let verdict = match (witness, system) {
        (None, system) => RationalityVerdict::Rational { k: first.k, system: system.unwrap_or_default() },
        (Some(w), _) => RationalityVerdict::NonRational { witness: (first, w) },
    };
    Ok(FaceClassification {
        verdict,
        k_criterion: Some(k_rational),
        integer_criterion: Some(integer_rational),
        agree: k_rational == integer_rational,
    })
}

/// Coefficient rows, over powers of ε, of the numerators of `p − p0` after
/// clearing denominators. An ε-free vector is orthogonal to `p − p0` iff it
/// is orthogonal to all of them.
fn difference_rows(p: &[EpsNumber], p0: &[EpsNumber]) -> Vec<Vec<BigRational>> {
    let diff: Vec<EpsNumber> = p.iter().zip(p0).map(|(a, b)| a - b).collect();
    let den = diff.iter().fold(UPoly::one(), |acc, d| acc.mul(d.den()));
    let nums: Vec<UPoly> = diff
        .iter()
        .map(|d| d.num().mul(&den.exact_div(d.den()).expect("product of denominators")))
        .collect();
    let deg = nums.iter().filter_map(UPoly::degree).max();
    let Some(deg) = deg else { return Vec::new() };
    (0..=deg)
        .map(|t| {
            nums.iter()
                .map(|n| BigRational::from_integer(n.coeffs().get(t).cloned().unwrap_or_default()))
                .collect()
        })
        .collect()
}

fn integer_system(poly: &NHPolytope, face: &Face) -> Result<Option<Vec<IntegerHyperplane>>, AnalysisError> {
    let m = poly.m();
    let pts: Vec<&[EpsNumber]> = face.generators.iter().map(|&g| poly.points()[g].coords.as_slice()).collect();
    let p0 = pts[0];
    let rows: Vec<Vec<BigRational>> = pts[1..].iter().flat_map(|p| difference_rows(p, p0)).collect();
    let basis = nullspace(&rows, m);
    if basis.len() != m - face.dim {
        return Ok(None);
    }

    // A strictly positive vector in the rational orthogonal complement: the
    // summed facet normals at a small enough sample, checked for membership.
    let normal_sum = face.facets.iter().try_fold(vec![EpsNumber::zero(); m], |acc, &fi| {
        acc.iter()
            .zip(&poly.facets()[fi].normal)
            .map(|(a, b)| a.checked_add(b))
            .collect::<Result<Vec<_>, EpsError>>()
    })?;
    let mut q = BigRational::new(1.into(), 2.into());
    let mut positive = None;
    for _ in 0..64 {
        let s: Option<Vec<BigRational>> = normal_sum.iter().map(|c| c.eval(&q).ok()).collect();
        if let Some(s) = s {
            if all_positive(&s) && rows.iter().all(|r| dot(r, &s).is_zero()) {
                positive = Some(s);
                break;
            }
        }
        q /= BigRational::from_integer(2.into());
    }
    let Some(s) = positive else {
        return Err(AnalysisError::Invariant("no positive normal found for a compact face".into()));
    };

    let mut chosen: Vec<Vec<BigRational>> = vec![s.clone()];
    for b in &basis {
        if chosen.len() == basis.len() {
            break;
        }
        // Shift b along s until every component is positive.
        let mut t = BigRational::zero();
        for (bj, sj) in b.iter().zip(&s) {
            let need = -bj / sj + BigRational::one();
            if need > t {
                t = need;
            }
        }
        let v: Vec<BigRational> = b.iter().zip(&s).map(|(bj, sj)| bj + &t * sj).collect();
        let mut trial = chosen.clone();
        trial.push(v);
        if rank(&trial) == trial.len() {
            chosen = trial;
        }
    }
    let mut system = Vec::new();
    for v in chosen {
        let a = primitive_integer(&v);
        let b = a
            .iter()
            .zip(p0)
            .try_fold(EpsNumber::zero(), |acc, (ai, x)| {
                acc.checked_add(&x.checked_mul(&EpsNumber::from_rational(&BigRational::from_integer(ai.clone())))?)
            })?;
        if b.sign(&OrderingContext::Infinitesimal)? <= 0 || a.iter().any(Signed::is_negative) {
            return Err(AnalysisError::Invariant("integer system with a non-positive right-hand side".into()));
        }
        system.push(IntegerHyperplane { a, b });
    }
    Ok(Some(system))
}

/// F_τ: the terms of F whose projections lie on the face.
pub fn face_polynomial(poly: &NHPolytope, face: &Face, f: &WeierstrassEquation) -> Poly {
    let field = f.field();
    let mut out = Poly::zero(field, f.m());
    if poly.is_empty() {
        return out;
    }
    for e in poly.face_provenance(face) {
        if let Some(c) = f.poly().coefficient(&e) {
            out.add_term(e, c.clone());
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditEntry {
    pub face: usize,
    pub dim: usize,
    pub generator_count: usize,
    /// Generators in the relative interior of the face.
    pub interior_points: Vec<usize>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub entries: Vec<AuditEntry>,
    pub not_applicable: usize,
    pub violations: Vec<String>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Points of `face` lying on none of its proper faces.
pub fn relative_interior_points(poly: &NHPolytope, face: &Face) -> Vec<usize> {
    if face.dim == 0 {
        return face.generators.clone();
    }
    let gens: BTreeSet<usize> = face.generators.iter().copied().collect();
    let boundary: BTreeSet<usize> = poly
        .faces()
        .iter()
        .filter(|g| g.dim < face.dim && g.directions.is_empty())
        .filter(|g| g.generators.iter().all(|p| gens.contains(p)))
        .flat_map(|g| g.generators.iter().copied())
        .collect();
    gens.difference(&boundary).copied().collect()
}

/// Checks every non-rational compact face for exactly dim+1 generators and
/// an empty relative interior.
pub fn nonrational_face_audit(poly: &NHPolytope) -> Result<AuditReport, AnalysisError> {
    if poly.context() != &PolytopeContext::infinitesimal() {
        return Err(AnalysisError::Unsupported("the audit runs on infinitesimal polytopes".into()));
    }
    let mut report = AuditReport { entries: Vec::new(), not_applicable: 0, violations: Vec::new() };
    for (idx, face) in poly.compact_faces() {
        let c = classify_face(poly, face)?;
        match c.verdict {
            RationalityVerdict::NonRational { .. } => {}
            RationalityVerdict::NotApplicable { .. } => {
                report.not_applicable += 1;
                continue;
            }
            RationalityVerdict::Rational { .. } => continue,
        }
        let count = face.generators.len();
        let interior = if face.dim == 0 { Vec::new() } else { relative_interior_points(poly, face) };
        let ok = count == face.dim + 1 && interior.is_empty();
        if count != face.dim + 1 {
            report.violations.push(format!(
                "non-rational face {idx} of dimension {} carries {count} points",
                face.dim
            ));
        }
        if !interior.is_empty() {
            report.violations.push(format!("non-rational face {idx} has points {interior:?} in its interior"));
        }
        report.entries.push(AuditEntry { face: idx, dim: face.dim, generator_count: count, interior_points: interior, ok });
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::build_delta;
    use crate::field::Field;

    fn eq(s: &str) -> WeierstrassEquation {
        WeierstrassEquation::parse(s, Field::Rational, None).unwrap()
    }

    #[test]
    fn mixed_facet_of_the_surface_example() {
        let f = eq("Z^4 + (Y^2 + X*Y)*Z^2 + X^4");
        let d = build_delta(&f, &PolytopeContext::infinitesimal()).unwrap();
        let mut kinds = Vec::new();
        for (_, face) in d.compact_facets() {
            let c = classify_face(&d, face).unwrap();
            assert!(c.agree);
            kinds.push(c.verdict);
        }
        assert_eq!(kinds.len(), 2);
        assert!(kinds.iter().any(|v| matches!(v, RationalityVerdict::Rational { k: 2, .. })));
        assert!(kinds.iter().any(RationalityVerdict::is_non_rational));
        assert!(nonrational_face_audit(&d).unwrap().passed());
    }

    #[test]
    fn rational_system_contains_the_face() {
        let f = eq("Z^4 + (Y-X)^4*Z^2 + (Y+3*X)^8");
        let d = build_delta(&f, &PolytopeContext::infinitesimal()).unwrap();
        let (_, facet) = d.compact_facets().next().unwrap();
        let c = classify_face(&d, facet).unwrap();
        let RationalityVerdict::Rational { k, system } = c.verdict else { panic!("expected rational") };
        assert_eq!(k, 2);
        assert_eq!(system.len(), 1);
        assert_eq!(system[0].a, vec![BigInt::from(1), BigInt::from(1)]);
        for &g in &facet.generators {
            let p = &d.points()[g].coords;
            let lhs = &p[0] + &p[1];
            assert_eq!(lhs, system[0].b);
        }
        let fp = face_polynomial(&d, facet, &f);
        assert_eq!(fp.len(), 5);
        assert!(fp.terms().all(|(e, _)| e.k == 2));
    }

    #[test]
    fn collinear_mixed_points_stay_collinear() {
        // Three points with weights 1, 2, 3 along x + y = 4 are collinear
        // for every ε, so this non-rational facet carries three points.
        let f = eq("Z^4 + X^4*Z^3 + X^2*Y^2*Z^2 + Y^4*Z");
        let d = build_delta(&f, &PolytopeContext::infinitesimal()).unwrap();
        let facets: Vec<_> = d.compact_facets().collect();
        assert_eq!(facets.len(), 1);
        let c = classify_face(&d, facets[0].1).unwrap();
        assert!(c.verdict.is_non_rational());
        assert!(c.agree);
        let audit = nonrational_face_audit(&d).unwrap();
        assert!(!audit.passed());
        assert_eq!(audit.entries[0].generator_count, 3);
    }
}
