//! The classical projection ρ and the perturbed projection ρ_ε of N*(F).

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::eps::EpsNumber;
use crate::equation::WeierstrassEquation;
use crate::error::{AnalysisError, EpsError};
use crate::exec::Strategy;
use crate::field::format_rational;
use crate::hull::{orthant_hull_with, NHPolytope, PolytopeContext, ProjectedPoint};
use crate::poly::ExponentVector;

/// Which scaling is applied to the exponents of X.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProjectionKind {
    /// i / (n − k)
    Classical,
    /// i / (n − k + ε)
    Perturbed,
}

impl ProjectionKind {
    pub fn of(ctx: &PolytopeContext) -> Self {
        match ctx {
            PolytopeContext::Classical => ProjectionKind::Classical,
            PolytopeContext::Perturbed(_) => ProjectionKind::Perturbed,
        }
    }
}

/// ρ(e) as exact rationals.
pub fn classical_coords(e: &ExponentVector, n: u32) -> Vec<BigRational> {
    let d = BigRational::from_integer((n - e.k).into());
    e.i.iter().map(|&i| BigRational::from_integer(i.into()) / &d).collect()
}

/// ρ_ε(e) in ℚ(ε).
pub fn perturbed_coords(e: &ExponentVector, n: u32) -> Vec<EpsNumber> {
    e.i.iter()
        .map(|&i| EpsNumber::ratio_linear(i as i64, (n - e.k) as i64, 1))
        .collect()
}

/// Projection of one support element in the given context.
pub fn project_exponent(e: &ExponentVector, n: u32, ctx: &PolytopeContext) -> Vec<EpsNumber> {
    match ctx {
        PolytopeContext::Classical => classical_coords(e, n).iter().map(EpsNumber::from_rational).collect(),
        PolytopeContext::Perturbed(_) => perturbed_coords(e, n),
    }
}

/// One point per distinct image of N*(F), with its preimages as provenance.
/// Images are compared in the context, so at a concrete ε colliding points
/// merge. Points are ordered by their smallest exponent vector.
pub fn project(f: &WeierstrassEquation, ctx: &PolytopeContext) -> Result<Vec<ProjectedPoint>, EpsError> {
    let n = f.n();
    let mut out: Vec<ProjectedPoint> = Vec::new();
    for (e, _) in f.reduced_terms() {
        let coords = project_exponent(e, n, ctx);
        let mut merged = false;
        for p in out.iter_mut() {
            let mut same = true;
            for (a, b) in p.coords.iter().zip(&coords) {
                if ctx.sign(&(a - b))? != 0 {
                    same = false;
                    break;
                }
            }
            if same {
                p.provenance.insert(e.clone());
                merged = true;
                break;
            }
        }
        if !merged {
            out.push(ProjectedPoint::new(coords, [e.clone()]));
        }
    }
    out.sort_by(|a, b| a.provenance.first().cmp(&b.provenance.first()));
    Ok(out)
}

/// Δ(F) for the classical context, Δ_ε(F) otherwise.
pub fn build_delta(f: &WeierstrassEquation, ctx: &PolytopeContext) -> Result<NHPolytope, EpsError> {
    build_delta_with(f, ctx, Strategy::default())
}

pub fn build_delta_with(
    f: &WeierstrassEquation,
    ctx: &PolytopeContext,
    strategy: Strategy,
) -> Result<NHPolytope, EpsError> {
    orthant_hull_with(project(f, ctx)?, f.m(), ctx.clone(), strategy)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistanceRow {
    pub exponent: ExponentVector,
    /// |ρ(P) − ρ_q(P)|².
    pub distance_squared: String,
    /// q·(i_1+⋯+i_m)/(n−k).
    pub bound: String,
    pub holds: bool,
    /// The halved bound, meaningful when a_{n−1} = 0.
    pub refined_bound: Option<String>,
    pub refined_holds: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistanceReport {
    pub q: String,
    pub rows: Vec<DistanceRow>,
    pub all_hold: bool,
}

/// Compares the squared distance between ρ(P) and ρ_q(P) with the square of
/// q·(i_1+⋯+i_m)/(n−k), for every P in N*(F).
pub fn distance_bound_report(f: &WeierstrassEquation, q: &BigRational) -> Result<DistanceReport, AnalysisError> {
    if q <= &BigRational::zero() {
        return Err(EpsError::BadContext("the distance bound needs a positive epsilon".into()).into());
    }
    let reduced = f.is_tchirnhausen_reduced();
    let n = f.n();
    let mut rows = Vec::new();
    for (e, _) in f.reduced_terms() {
        let classical = classical_coords(e, n);
        let perturbed: Vec<BigRational> = perturbed_coords(e, n)
            .iter()
            .map(|c| c.eval(q))
            .collect::<Result<_, _>>()?;
        let d2: BigRational = classical
            .iter()
            .zip(&perturbed)
            .map(|(a, b)| (a - b) * (a - b))
            .fold(BigRational::zero(), |s, t| s + t);
        let sum_i = BigRational::from_integer(e.x_degree().into());
        let nk = BigRational::from_integer((n - e.k).into());
        let bound = q * &sum_i / &nk;
        let holds = d2 < &bound * &bound;
        let (refined_bound, refined_holds) = if reduced {
            let r = &bound / BigRational::from_integer(2.into());
            let h = d2 < &r * &r;
            (Some(format_rational(&r)), Some(h))
        } else {
            (None, None)
        };
        rows.push(DistanceRow {
            exponent: e.clone(),
            distance_squared: format_rational(&d2),
            bound: format_rational(&bound),
            holds,
            refined_bound,
            refined_holds,
        });
    }
    let all_hold = rows.iter().all(|r| r.holds);
    Ok(DistanceReport { q: format_rational(q), rows, all_hold })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn eq(s: &str) -> WeierstrassEquation {
        WeierstrassEquation::parse(s, Field::Rational, None).unwrap()
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn hidden_points_in_the_classical_projection() {
        let f = eq("Z^4 + (Y-X)^4*Z^2 + (Y+3*X)^8");
        let pts = project(&f, &PolytopeContext::Classical).unwrap();
        assert_eq!(pts.len(), 9);
        let one = EpsNumber::one();
        let p = pts.iter().find(|p| p.coords == vec![one.clone(), one.clone()]).unwrap();
        let expect = [ExponentVector::new(vec![2, 2], 2), ExponentVector::new(vec![4, 4], 0)];
        assert_eq!(p.provenance, expect.into_iter().collect());
        assert_eq!(project(&f, &PolytopeContext::infinitesimal()).unwrap().len(), 14);
        assert!(project(&eq("Z^3"), &PolytopeContext::Classical).unwrap().is_empty());
    }

    #[test]
    fn distance_bound_examples() {
        let rep = distance_bound_report(&eq("Z^2 + X^3"), &r(1, 2)).unwrap();
        assert_eq!(rep.rows[0].distance_squared, "9/100");
        assert_eq!(rep.rows[0].bound, "3/4");
        assert!(rep.all_hold);
        let rep = distance_bound_report(&eq("Z^3+(X^2+X*Y^2)*Z+X^2*Y"), &r(1, 7)).unwrap();
        assert_eq!(rep.rows.len(), 3);
        assert!(rep.all_hold);
        assert!(rep.rows.iter().all(|row| row.refined_holds == Some(true)));
    }
}
