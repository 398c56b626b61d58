//! Matching compact faces of two polytopes of the same equation.

use std::collections::BTreeSet;

use serde::Serialize;

use super::projection::build_delta;
use crate::equation::WeierstrassEquation;
use crate::error::AnalysisError;
use crate::hull::{NHPolytope, PolytopeContext};
use crate::poly::ExponentVector;

/// A compact face reduced to what survives a change of context: its
/// dimension and the exponent vectors on it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct FaceKey {
    pub dim: usize,
    pub provenance: Vec<ExponentVector>,
}

impl FaceKey {
    fn contains(&self, other: &FaceKey) -> bool {
        let mine: BTreeSet<&ExponentVector> = self.provenance.iter().collect();
        other.provenance.iter().all(|e| mine.contains(e))
    }
}

/// Compact faces of `poly` as sorted keys.
pub fn face_keys(poly: &NHPolytope) -> Vec<FaceKey> {
    let mut keys: Vec<FaceKey> = poly
        .compact_faces()
        .map(|(_, f)| FaceKey { dim: f.dim, provenance: poly.face_provenance(f).into_iter().collect() })
        .collect();
    keys.sort();
    keys
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Split {
    /// A face on one side.
    pub face: FaceKey,
    /// The faces of equal dimension on the other side supported inside it.
    pub parts: Vec<FaceKey>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComparisonReport {
    pub context_a: PolytopeContext,
    pub context_b: PolytopeContext,
    pub counts_a: Vec<usize>,
    pub counts_b: Vec<usize>,
    pub matched: Vec<FaceKey>,
    /// Faces of A that correspond to several smaller faces of B.
    pub splits_a_to_b: Vec<Split>,
    pub splits_b_to_a: Vec<Split>,
    pub unmatched_a: Vec<FaceKey>,
    pub unmatched_b: Vec<FaceKey>,
    /// Identical keys on both sides.
    pub bijection: bool,
    /// Every face of A has a face of equal dimension in B supported inside it.
    pub every_a_covered: bool,
}

fn splits(from: &[FaceKey], to: &[FaceKey], exact: &BTreeSet<&FaceKey>) -> Vec<Split> {
    from.iter()
        .filter(|f| !exact.contains(f))
        .filter_map(|f| {
            let parts: Vec<FaceKey> = to.iter().filter(|g| g.dim == f.dim && f.contains(g)).cloned().collect();
            (!parts.is_empty()).then(|| Split { face: f.clone(), parts })
        })
        .collect()
}

/// Compares two built polytopes by face provenance.
pub fn compare_built(a: &NHPolytope, b: &NHPolytope) -> ComparisonReport {
    let ka = face_keys(a);
    let kb = face_keys(b);
    let set_a: BTreeSet<&FaceKey> = ka.iter().collect();
    let set_b: BTreeSet<&FaceKey> = kb.iter().collect();
    let matched: Vec<FaceKey> = set_a.intersection(&set_b).map(|k| (*k).clone()).collect();
    let splits_a_to_b = splits(&ka, &kb, &set_b);
    let splits_b_to_a = splits(&kb, &ka, &set_a);
    let covered = |k: &&FaceKey| set_b.contains(k) || splits_a_to_b.iter().any(|s| &&s.face == k);
    let every_a_covered = ka.iter().all(|k| covered(&k));
    let in_split = |k: &FaceKey, s: &[Split]| s.iter().any(|x| &x.face == k || x.parts.contains(k));
    let unmatched_a: Vec<FaceKey> = ka
        .iter()
        .filter(|k| !set_b.contains(k) && !in_split(k, &splits_a_to_b) && !in_split(k, &splits_b_to_a))
        .cloned()
        .collect();
    let unmatched_b: Vec<FaceKey> = kb
        .iter()
        .filter(|k| !set_a.contains(k) && !in_split(k, &splits_a_to_b) && !in_split(k, &splits_b_to_a))
        .cloned()
        .collect();
    ComparisonReport {
        context_a: a.context().clone(),
        context_b: b.context().clone(),
        counts_a: a.compact_face_counts(),
        counts_b: b.compact_face_counts(),
        bijection: ka == kb,
        matched,
        splits_a_to_b,
        splits_b_to_a,
        unmatched_a,
        unmatched_b,
        every_a_covered,
    }
}

/// Builds Δ in both contexts and compares them.
pub fn compare_polytopes(
    f: &WeierstrassEquation,
    a: &PolytopeContext,
    b: &PolytopeContext,
) -> Result<ComparisonReport, AnalysisError> {
    Ok(compare_built(&build_delta(f, a)?, &build_delta(f, b)?))
}

#[cfg(test)]
mod tests {
    use num_rational::BigRational;

    use super::*;
    use crate::field::Field;

    fn eq(s: &str) -> WeierstrassEquation {
        WeierstrassEquation::parse(s, Field::Rational, None).unwrap()
    }

    #[test]
    fn classical_facet_splits() {
        let f = eq("Z^4 + (Y^2 + X*Y)*Z^2 + X^4");
        let r = compare_polytopes(&f, &PolytopeContext::Classical, &PolytopeContext::infinitesimal()).unwrap();
        assert_eq!(r.counts_a, vec![2, 1]);
        assert_eq!(r.counts_b, vec![3, 2]);
        let facet_split = r.splits_a_to_b.iter().find(|s| s.face.dim == 1).unwrap();
        assert_eq!(facet_split.parts.len(), 2);
        assert!(r.every_a_covered && !r.bijection);
    }

    #[test]
    fn small_and_large_epsilon() {
        let f = eq("Z^3 + (X^2 + X*Y^2)*Z + X^2*Y");
        let inf = PolytopeContext::infinitesimal();
        let small = PolytopeContext::at(BigRational::new(1.into(), 10.into())).unwrap();
        let large = PolytopeContext::at(BigRational::from_integer(3.into())).unwrap();
        assert!(compare_polytopes(&f, &inf, &small).unwrap().bijection);
        let r = compare_polytopes(&f, &inf, &large).unwrap();
        assert!(!r.bijection);
        assert_eq!((r.counts_a[1], r.counts_b[1]), (2, 1));
    }
}
