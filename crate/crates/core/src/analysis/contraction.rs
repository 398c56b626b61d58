//! Vertex contractions Z ↦ Z + λX^b of the classical polytope.

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Serialize, Serializer};

use super::projection::build_delta;
use super::roots::nth_roots;
use crate::eps::EpsNumber;
use crate::equation::WeierstrassEquation;
use crate::error::AnalysisError;
use crate::field::{format_rational, FieldScalar};
use crate::hull::{Membership, NHPolytope, PolytopeContext};
use crate::poly::{ExponentVector, Poly};

/// Default number of contraction steps before giving up.
pub const DEFAULT_BUDGET: usize = 32;

fn ser_scalar<S: Serializer>(c: &FieldScalar, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&c.to_string())
}

fn ser_equation<S: Serializer>(f: &WeierstrassEquation, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&f.render())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Contraction {
    /// Index of the vertex in Δ_0(F).
    pub vertex: usize,
    pub b: Vec<u32>,
    #[serde(serialize_with = "ser_scalar")]
    pub lambda: FieldScalar,
    #[serde(serialize_with = "ser_equation")]
    pub result: WeierstrassEquation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CandidateStatus {
    Verified,
    Rejected { reason: String },
    Unresolvable { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CandidateReport {
    pub vertex: usize,
    pub coords: Vec<String>,
    pub lambda: Option<String>,
    #[serde(flatten)]
    pub status: CandidateStatus,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContractionSearch {
    pub candidates: Vec<CandidateReport>,
    pub contractions: Vec<Contraction>,
}

fn binomial(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::from(1), |acc, j| acc * BigInt::from(n - j) / BigInt::from(j + 1))
}

/// Δ_0(G) misses p and sits inside Δ_0(F).
fn verify(old: &NHPolytope, p: &[EpsNumber], g: &WeierstrassEquation) -> Result<Option<String>, AnalysisError> {
    let new = build_delta(g, &PolytopeContext::Classical)?;
    if new.membership(p)? != Membership::Outside {
        return Ok(Some("the vertex survives the substitution".into()));
    }
    for v in new.vertex_points() {
        if old.membership(&v.coords)? == Membership::Outside {
            return Ok(Some("the substitution creates a point outside the old polytope".into()));
        }
    }
    Ok(None)
}

/// Searches the integral vertices of Δ_0(F) for verified contractions.
pub fn find_contractible_vertices(f: &WeierstrassEquation) -> Result<ContractionSearch, AnalysisError> {
    let delta = build_delta(f, &PolytopeContext::Classical)?;
    let field = f.field();
    let n = f.n();
    let mut candidates = Vec::new();
    let mut contractions = Vec::new();
    for &vi in delta.vertices() {
        let point = &delta.points()[vi];
        let coords: Vec<_> = point.coords.iter().map(|c| c.as_rational().expect("classical coordinate")).collect();
        let shown: Vec<String> = coords.iter().map(format_rational).collect();
        let mut report = |lambda: Option<&FieldScalar>, status| {
            candidates.push(CandidateReport {
                vertex: vi,
                coords: shown.clone(),
                lambda: lambda.map(ToString::to_string),
                status,
            })
        };
        if coords.iter().any(|c| !c.is_integer() || c.is_negative()) {
            report(None, CandidateStatus::Rejected { reason: "vertex is not integral".into() });
            continue;
        }
        let b: Vec<u32> = coords.iter().map(|c| c.to_integer().try_into().expect("small exponent")).collect();

        // The highest k < n whose binomial coefficient survives in the field.
        let Some((k, binom)) = (0..n)
            .rev()
            .map(|k| (k, field.from_integer(&binomial(n, k))))
            .find(|(_, c)| !c.is_zero())
        else {
            report(None, CandidateStatus::Unresolvable { reason: "every binomial coefficient vanishes".into() });
            continue;
        };
        let d = n - k;
        let e = ExponentVector::new(b.iter().map(|&x| x * d).collect(), k);
        let a = f.poly().coefficient(&e).cloned().unwrap_or_else(|| field.zero());
        let target = a.checked_div(&binom).expect("nonzero binomial");
        if target.is_zero() {
            report(None, CandidateStatus::Rejected { reason: format!("no term at {e}") });
            continue;
        }
        let mus = match nth_roots(&target, d) {
            Ok(r) => r,
            Err(reason) => {
                report(None, CandidateStatus::Unresolvable { reason });
                continue;
            }
        };
        if mus.is_empty() {
            report(None, CandidateStatus::Rejected { reason: format!("{target} has no {d}-th root in the field") });
            continue;
        }
        for mu in mus {
            let lambda = -&mu;
            let alpha = Poly::monomial(field, ExponentVector::new(b.clone(), 0), lambda.clone());
            let g = match f.substitute_z(&alpha) {
                Ok(g) => g,
                Err(err) => {
                    report(Some(&lambda), CandidateStatus::Rejected { reason: err.to_string() });
                    continue;
                }
            };
            match verify(&delta, &point.coords, &g)? {
                None => {
                    report(Some(&lambda), CandidateStatus::Verified);
                    contractions.push(Contraction { vertex: vi, b: b.clone(), lambda, result: g });
                }
                Some(reason) => report(Some(&lambda), CandidateStatus::Rejected { reason }),
            }
        }
    }
    Ok(ContractionSearch { candidates, contractions })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContractionStep {
    pub b: Vec<u32>,
    #[serde(serialize_with = "ser_scalar")]
    pub lambda: FieldScalar,
    #[serde(serialize_with = "ser_equation")]
    pub result: WeierstrassEquation,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IterationReport {
    pub steps: Vec<ContractionStep>,
    #[serde(serialize_with = "ser_equation")]
    pub result: WeierstrassEquation,
    /// No contractible vertex is left.
    pub terminated: bool,
    pub budget: usize,
}

/// Applies the first verified contraction until none is left or the budget
/// runs out.
pub fn contract_iteratively(f: &WeierstrassEquation, budget: usize) -> Result<IterationReport, AnalysisError> {
    let mut current = f.clone();
    let mut steps = Vec::new();
    for _ in 0..budget {
        let search = find_contractible_vertices(&current)?;
        let Some(c) = search.contractions.into_iter().next() else {
            return Ok(IterationReport { steps, result: current, terminated: true, budget });
        };
        current = c.result.clone();
        steps.push(ContractionStep { b: c.b, lambda: c.lambda, result: c.result });
    }
    let terminated = find_contractible_vertices(&current)?.contractions.is_empty();
    Ok(IterationReport { steps, result: current, terminated, budget })
}
