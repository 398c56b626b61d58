//! The tangent cone and coordinate permissibility.

use itertools::Itertools;
use serde::{Serialize, Serializer};

use super::projection::perturbed_coords;
use crate::eps::{EpsNumber, OrderingContext};
use crate::equation::WeierstrassEquation;
use crate::error::EpsError;
use crate::poly::{variable_name, ExponentVector, Poly};

fn ser_poly<S: Serializer>(p: &Poly, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&p.render())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BandRow {
    pub exponent: ExponentVector,
    /// x_1 + ⋯ + x_m of the perturbed projection.
    pub coordinate_sum: EpsNumber,
    pub in_tangent_cone: bool,
    pub below_one: bool,
    pub above_one_minus_eps: bool,
    /// Σx > 1 − ε/2, reported for Tchirnhausen-reduced equations.
    pub above_half_band: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TangentConeReport {
    #[serde(serialize_with = "ser_poly")]
    pub initial_form: Poly,
    pub rows: Vec<BandRow>,
    /// Tangent-cone points lie in 1−ε < Σx < 1 and all others in Σx > 1.
    pub band_holds: bool,
    /// The points with Σx < 1 are exactly the tangent-cone points.
    pub sets_equal: bool,
    pub half_band_holds: Option<bool>,
}

/// The initial form F̄ (terms of total degree n) and the infinitesimal band
/// check on the perturbed projections.
pub fn tangent_cone(f: &WeierstrassEquation) -> Result<TangentConeReport, EpsError> {
    let n = f.n();
    let ctx = OrderingContext::Infinitesimal;
    let mut initial = Poly::zero(f.field(), f.m());
    for (e, c) in f.poly().terms() {
        if e.total_degree() == n {
            initial.add_term(e.clone(), c.clone());
        }
    }
    let reduced = f.is_tchirnhausen_reduced();
    let one = EpsNumber::one();
    let floor = one.checked_sub(&EpsNumber::eps())?;
    let half_floor = one.checked_sub(&EpsNumber::eps().checked_div(&EpsNumber::from_int(2))?)?;
    let mut rows = Vec::new();
    for (e, _) in f.reduced_terms() {
        let sum = perturbed_coords(e, n).iter().try_fold(EpsNumber::zero(), |a, c| a.checked_add(c))?;
        let below_one = sum.cmp_in(&one, &ctx)?.is_lt();
        let above = sum.cmp_in(&floor, &ctx)?.is_gt();
        let half = if reduced { Some(sum.cmp_in(&half_floor, &ctx)?.is_gt()) } else { None };
        rows.push(BandRow {
            exponent: e.clone(),
            coordinate_sum: sum,
            in_tangent_cone: e.total_degree() == n,
            below_one,
            above_one_minus_eps: above,
            above_half_band: half,
        });
    }
    let band_holds = rows.iter().all(|r| {
        if r.in_tangent_cone {
            r.below_one && r.above_one_minus_eps
        } else {
            !r.below_one && r.coordinate_sum != one
        }
    });
    let sets_equal = rows.iter().all(|r| r.below_one == r.in_tangent_cone);
    let half_band_holds = reduced.then(|| rows.iter().filter(|r| r.in_tangent_cone).all(|r| r.above_half_band == Some(true)));
    Ok(TangentConeReport { initial_form: initial, rows, band_holds, sets_equal, half_band_holds })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PermissibilityReport {
    /// Zero-based indices of the X variables in the ideal (Z, X_i, …).
    pub vars: Vec<usize>,
    pub ideal: String,
    pub permissible: bool,
    pub violating_terms: Vec<ExponentVector>,
    pub region_check: bool,
    pub agree: bool,
}

/// Whether F lies in (Z, X_{i_1}, …, X_{i_r})^n, decided from the support
/// and independently from the position of the perturbed points.
pub fn is_permissible(f: &WeierstrassEquation, vars: &[usize]) -> Result<PermissibilityReport, EpsError> {
    let n = f.n();
    let m = f.m();
    let mut vars: Vec<usize> = vars.to_vec();
    vars.sort_unstable();
    vars.dedup();
    if vars.is_empty() || vars.iter().any(|&v| v >= m) {
        return Err(EpsError::InvalidInput(format!("variable subset {vars:?} is not a nonempty subset of 0..{m}")));
    }
    let ctx = OrderingContext::Infinitesimal;
    let one = EpsNumber::one();
    let floor = one.checked_sub(&EpsNumber::eps())?;
    let mut violating = Vec::new();
    let mut region_ok = true;
    for (e, _) in f.reduced_terms() {
        let order: u32 = vars.iter().map(|&v| e.i[v]).sum::<u32>() + e.k;
        if order < n {
            violating.push(e.clone());
        }
        let coords = perturbed_coords(e, n);
        let s = vars.iter().try_fold(EpsNumber::zero(), |a, &v| a.checked_add(&coords[v]))?;
        let inside = !s.cmp_in(&one, &ctx)?.is_lt() || s.cmp_in(&floor, &ctx)?.is_gt();
        region_ok &= inside;
    }
    let ideal = std::iter::once("Z".to_string()).chain(vars.iter().map(|&v| variable_name(m, v))).join(", ");
    let permissible = violating.is_empty();
    Ok(PermissibilityReport {
        vars,
        ideal: format!("({ideal})"),
        permissible,
        violating_terms: violating,
        region_check: region_ok,
        agree: permissible == region_ok,
    })
}

/// Reports for every nonempty subset of the X variables, smallest first.
pub fn permissibility_table(f: &WeierstrassEquation) -> Result<Vec<PermissibilityReport>, EpsError> {
    let m = f.m();
    let mut out = Vec::new();
    for r in 1..=m {
        for vars in (0..m).combinations(r) {
            out.push(is_permissible(f, &vars)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    fn eq(s: &str) -> WeierstrassEquation {
        WeierstrassEquation::parse(s, Field::Rational, None).unwrap()
    }

    #[test]
    fn band_examples() {
        let r = tangent_cone(&eq("Z^3 + (X^2 + X*Y^2)*Z + X^2*Y")).unwrap();
        assert_eq!(r.initial_form.len(), 3);
        assert!(r.band_holds && r.sets_equal);
        assert_eq!(r.rows.iter().filter(|row| row.in_tangent_cone).count(), 2);
        assert_eq!(r.half_band_holds, Some(true));

        let r = tangent_cone(&eq("Z^4 + (Y-X)^4*Z^2 + (Y+3*X)^8")).unwrap();
        assert_eq!(r.initial_form.render(), "Z^4");
        assert!(r.rows.iter().all(|row| !row.in_tangent_cone && !row.below_one));
        assert!(r.band_holds && r.sets_equal);
    }

    #[test]
    fn permissibility_examples() {
        let r = is_permissible(&eq("Z^2 + X^3"), &[0]).unwrap();
        assert!(r.permissible && r.agree);
        let r = is_permissible(&eq("Z^3 + (X^2 + X*Y^2)*Z + X^2*Y"), &[0]).unwrap();
        assert!(!r.permissible && r.agree);
        assert_eq!(
            r.violating_terms,
            vec![ExponentVector::new(vec![2, 1], 0), ExponentVector::new(vec![1, 2], 1)]
        );
        assert_eq!(r.ideal, "(Z, X)");
        // (1,1,1) sits in the band with a nonzero Y coordinate and is still
        // of order 2 in (Z, X).
        let r = is_permissible(&eq("Z^2 + X*Y*Z"), &[0]).unwrap();
        assert!(r.permissible && r.region_check);
        let table = permissibility_table(&WeierstrassEquation::parse("Z^2", Field::Rational, Some(3)).unwrap()).unwrap();
        assert_eq!(table.len(), 7);
        assert!(table.iter().all(|t| t.permissible && t.agree));
    }
}
