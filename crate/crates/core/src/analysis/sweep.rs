//! Exact ε-thresholds of the compact face combinatorics of Δ_ε(F).
//!
//! The combinatorial type of Δ_ε is fixed by the signs of the determinants of
//! (m+1)-subsets of the rows `[n−k+ε, i_1, …, i_m]` and `[0, e_j]`, so it can
//! only change at positive roots of those polynomials. Each open interval
//! between consecutive roots is sampled once.

use itertools::Itertools;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::compare::{face_keys, FaceKey};
use super::projection::build_delta;
use crate::eps::decimal_string;
use crate::equation::WeierstrassEquation;
use crate::error::{AnalysisError, EpsError};
use crate::field::format_rational;
use crate::hull::kernel::{det, Inf};
use crate::hull::{NHPolytope, PolytopeContext};
use crate::upoly::{RealRoot, UPoly};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Signature {
    /// Compact faces per dimension.
    pub counts: Vec<usize>,
    pub faces: Vec<FaceKey>,
}

pub fn signature(poly: &NHPolytope) -> Signature {
    Signature { counts: poly.compact_face_counts(), faces: face_keys(poly) }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Threshold {
    /// Exact value, or an isolating description for irrational roots.
    pub value: String,
    pub decimal: String,
    pub rational: bool,
    /// The combinatorics at ε equal to the threshold, for rational ones.
    pub tie_signature: Option<Signature>,
    pub tie_matches_right: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepInterval {
    /// `None` stands for 0.
    pub lower: Option<String>,
    pub upper: String,
    pub lower_closed: bool,
    pub upper_closed: bool,
    pub sample: String,
    pub signature: Signature,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub q_max: String,
    pub thresholds: Vec<Threshold>,
    pub intervals: Vec<SweepInterval>,
    pub infinitesimal: Signature,
    pub leftmost_matches_infinitesimal: bool,
}

impl SweepReport {
    /// Exact thresholds, when all are rational.
    pub fn rational_thresholds(&self) -> Option<Vec<String>> {
        self.thresholds.iter().map(|t| t.rational.then(|| t.value.clone())).collect()
    }
}

/// The nonconstant predicate polynomials in ε, primitive and deduplicated.
pub fn predicate_polynomials(f: &WeierstrassEquation) -> Vec<UPoly> {
    let m = f.m();
    let n = f.n();
    let mut rows: Vec<(bool, Vec<Inf>)> = f
        .reduced_terms()
        .map(|(e, _)| {
            let mut r = vec![Inf(UPoly::linear((n - e.k) as i64, 1))];
            r.extend(e.i.iter().map(|&i| Inf(UPoly::from_i64s(&[i as i64]))));
            (true, r)
        })
        .collect();
    for j in 0..m {
        let mut r = vec![Inf(UPoly::zero()); m + 1];
        r[j + 1] = Inf(UPoly::one());
        rows.push((false, r));
    }
    let mut polys: Vec<UPoly> = rows
        .iter()
        .combinations(m + 1)
        .filter(|c| c.iter().any(|(is_point, _)| *is_point))
        .map(|c| det(&c.iter().map(|(_, r)| r.clone()).collect::<Vec<_>>()).0)
        .filter(|p| p.degree().unwrap_or(0) > 0)
        .map(|p| p.square_free().normalized())
        .collect();
    polys.sort_by(|a, b| a.coeffs().cmp(b.coeffs()));
    polys.dedup();
    polys
}

/// Sorted distinct roots of the predicates in (0, q_max].
pub fn candidate_thresholds(f: &WeierstrassEquation, q_max: &BigRational) -> Vec<RealRoot> {
    let mut roots: Vec<RealRoot> = predicate_polynomials(f)
        .iter()
        .flat_map(|p| p.real_roots_in(&BigRational::zero(), q_max))
        .collect();
    roots.sort_by(|a, b| a.cmp_value(b));
    roots.dedup_by(|a, b| a.equals(b));
    roots
}

/// A rational strictly between two distinct algebraic numbers a < b.
fn between(a: &RealRoot, b: &RealRoot) -> BigRational {
    let mut a = a.clone();
    let mut b = b.clone();
    loop {
        let (_, ahi) = a.bounds();
        let (blo, _) = b.bounds();
        if ahi < blo {
            return (ahi + blo) / BigRational::from_integer(2.into());
        }
        a.refine();
        b.refine();
    }
}

fn describe(r: &RealRoot) -> (String, String, bool) {
    match r {
        RealRoot::Exact(q) => (format_rational(q), decimal_string(q, 6), true),
        RealRoot::Isolated { .. } => {
            let mut t = r.clone();
            t.refine_to(&BigRational::new(1.into(), 10_000_000_000u64.into()));
            let (lo, hi) = t.bounds();
            let mid = (lo + hi) / BigRational::from_integer(2.into());
            (t.to_string(), decimal_string(&mid, 6), false)
        }
    }
}

fn signature_at(f: &WeierstrassEquation, q: &BigRational) -> Result<Signature, AnalysisError> {
    Ok(signature(&build_delta(f, &PolytopeContext::at(q.clone())?)?))
}

/// Thresholds of Δ_ε(F) up to `q_max`, one signature per interval. Each
/// threshold belongs to the interval on its right.
pub fn epsilon_sweep(f: &WeierstrassEquation, q_max: &BigRational) -> Result<SweepReport, AnalysisError> {
    if q_max <= &BigRational::zero() {
        return Err(EpsError::BadContext("the sweep needs a positive upper bound".into()).into());
    }
    let roots = candidate_thresholds(f, q_max);
    let top = RealRoot::Exact(q_max.clone());
    let zero = RealRoot::Exact(BigRational::zero());

    // One piece below each candidate root and one above the last. When the
    // last root is q_max itself the top piece is the single value q_max.
    let samples: Vec<BigRational> = (0..=roots.len())
        .map(|i| {
            let lo = if i == 0 { &zero } else { &roots[i - 1] };
            let hi = roots.get(i).unwrap_or(&top);
            if lo.equals(hi) {
                q_max.clone()
            } else {
                between(lo, hi)
            }
        })
        .collect();
    let sigs: Vec<Signature> = samples.iter().map(|q| signature_at(f, q)).collect::<Result<_, _>>()?;

    // Keep the roots where the signature changes.
    let mut thresholds = Vec::new();
    let mut intervals: Vec<SweepInterval> = Vec::new();
    let mut lower: Option<&RealRoot> = None;
    let mut start = 0;
    for i in 0..samples.len() {
        let last = i + 1 == samples.len();
        if !last && sigs[i] == sigs[i + 1] {
            continue;
        }
        let (upper_text, upper_closed) = if last {
            (format_rational(q_max), true)
        } else {
            (describe(&roots[i]).0, false)
        };
        intervals.push(SweepInterval {
            lower: lower.map(|r| describe(r).0),
            upper: upper_text,
            lower_closed: lower.is_some(),
            upper_closed,
            sample: format_rational(&samples[start]),
            signature: sigs[start].clone(),
        });
        if !last {
            let r = &roots[i];
            let (value, decimal, rational) = describe(r);
            let tie = match r.as_exact() {
                Some(q) => Some(signature_at(f, q)?),
                None => None,
            };
            let tie_matches_right = tie.as_ref().map(|t| t == &sigs[i + 1]);
            thresholds.push(Threshold { value, decimal, rational, tie_signature: tie, tie_matches_right });
            lower = Some(r);
            start = i + 1;
        }
    }

    let infinitesimal = signature(&build_delta(f, &PolytopeContext::infinitesimal())?);
    let leftmost_matches_infinitesimal = intervals.first().is_some_and(|i| i.signature == infinitesimal);
    Ok(SweepReport {
        q_max: format_rational(q_max),
        thresholds,
        intervals,
        infinitesimal,
        leftmost_matches_infinitesimal,
    })
}

/// A rational in the leftmost open interval: below every positive predicate
/// root up to 1.
pub fn default_sample(f: &WeierstrassEquation) -> BigRational {
    let one = BigRational::one();
    let roots = candidate_thresholds(f, &one);
    let zero = RealRoot::Exact(BigRational::zero());
    match roots.first() {
        Some(r) if !r.equals(&RealRoot::Exact(one.clone())) => between(&zero, r),
        _ => one / BigRational::from_integer(2.into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn eq(s: &str) -> WeierstrassEquation {
        WeierstrassEquation::parse(s, Field::Rational, None).unwrap()
    }

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn single_threshold_at_two() {
        let r = epsilon_sweep(&eq("Z^3 + (X^2 + X*Y^2)*Z + X^2*Y"), &q(10)).unwrap();
        assert_eq!(r.rational_thresholds(), Some(vec!["2".to_string()]));
        assert_eq!(r.intervals.len(), 2);
        assert_eq!(r.intervals[0].signature.counts[1], 2);
        assert_eq!(r.intervals[1].signature.counts[1], 1);
        assert!(r.intervals[1].lower_closed);
        assert!(r.leftmost_matches_infinitesimal);
        assert_eq!(r.thresholds[0].tie_signature.as_ref().unwrap().counts[1], 1);
    }

    #[test]
    fn single_point_has_no_threshold() {
        let r = epsilon_sweep(&eq("Z^2 + X^3"), &q(10)).unwrap();
        assert!(r.thresholds.is_empty());
        assert_eq!(r.intervals.len(), 1);
        assert!(epsilon_sweep(&eq("Z^2 + X^3"), &q(0)).is_err());
    }

    #[test]
    fn surface_example_keeps_two_facets_near_zero() {
        let f = eq("Z^4 + (Y^2 + X*Y)*Z^2 + X^4");
        let r = epsilon_sweep(&f, &q(10)).unwrap();
        assert_eq!(r.intervals[0].signature.counts[1], 2);
        assert!(r.leftmost_matches_infinitesimal);
        let s = default_sample(&f);
        assert!(s > q(0) && s < q(1));
    }
}
