//! Exact values computed beforehand with an independent computer-algebra
//! session (sympy: symbolic determinants, `solve`, exact rationals) and
//! frozen here.

mod common;

use common::eq;
use nhpoly::analysis::{build_delta, distance_bound_report, epsilon_sweep, nonrational_face_audit};
use nhpoly::eps::{EpsNumber, OrderingContext};
use nhpoly::field::Field;
use nhpoly::hull::{Membership, PolytopeContext};
use nhpoly::poly::Poly;
use nhpoly::upoly::UPoly;
use num_rational::BigRational;

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[test]
fn difference_of_projected_sums() {
    // 8/(4+e) - 4/(2+e) = 4e/((4+e)(2+e))
    let a = EpsNumber::ratio_linear(8, 4, 1);
    let b = EpsNumber::ratio_linear(4, 2, 1);
    let want = EpsNumber::from_polys(UPoly::from_i64s(&[0, 4]), UPoly::from_i64s(&[8, 6, 1])).unwrap();
    assert_eq!(&a - &b, want);
    assert_eq!(want.sign(&OrderingContext::Infinitesimal).unwrap(), 1);
}

#[test]
fn first_surface_example_has_no_threshold() {
    // Every orientation determinant is a nonzero constant times a power of
    // e over positive factors, e.g. 2e/((e+2)^2 (e+4)), so no root in (0, 10].
    let r10 = epsilon_sweep(&eq("Z^4+(Y^2+X*Y)*Z^2+X^4"), &r(10, 1)).unwrap();
    assert!(r10.thresholds.is_empty());
    assert_eq!(r10.intervals.len(), 1);
    assert_eq!(r10.intervals[0].signature.counts, vec![3, 2]);
}

#[test]
fn curve_threshold_candidates() {
    // The only positive root of any cofactor polynomial up to 10 is 2.
    let s = epsilon_sweep(&eq("Z^3+(X^2+X*Y^2)*Z+X^2*Y"), &r(10, 1)).unwrap();
    let values: Vec<_> = s.thresholds.iter().map(|t| t.value.as_str()).collect();
    assert_eq!(values, ["2"]);
}

#[test]
fn curve_distance_table_at_one_seventh() {
    let rep = distance_bound_report(&eq("Z^3+(X^2+X*Y^2)*Z+X^2*Y"), &r(1, 7)).unwrap();
    let rows: Vec<(Vec<u32>, &str, &str)> = rep
        .rows
        .iter()
        .map(|row| (row.exponent.to_vec(), row.distance_squared.as_str(), row.bound.as_str()))
        .collect();
    let mut rows = rows;
    rows.sort();
    assert_eq!(
        rows,
        vec![
            (vec![1, 2, 1], "1/180", "3/14"),
            (vec![2, 0, 1], "1/225", "1/7"),
            (vec![2, 1, 0], "5/4356", "1/7"),
        ]
    );
    assert!(rep.all_hold);
}

#[test]
fn shared_vertex_of_the_two_curve_facets() {
    let f = eq("Z^3+(X^2+X*Y^2)*Z+X^2*Y");
    let d = build_delta(&f, &PolytopeContext::infinitesimal()).unwrap();
    let x = vec![EpsNumber::ratio_linear(2, 3, 1), EpsNumber::ratio_linear(1, 3, 1)];
    match d.membership(&x).unwrap() {
        Membership::Boundary(fi) => assert_eq!(d.faces()[fi].dim, 0),
        other => panic!("{other:?}"),
    }
}

#[test]
fn shift_by_minus_x() {
    let f = eq("Z^2+2*X*Z+X^3");
    let alpha = Poly::x(Field::Rational, 1, 0).neg();
    assert_eq!(f.substitute_z(&alpha).unwrap(), eq("Z^2-X^2+X^3"));
}

#[test]
fn three_collinear_generators_with_distinct_k() {
    // (1,3)/(2+e), (2,3)/(3+e), (3,3)/(4+e) are collinear for every e and
    // span a compact non-rational facet; found in the seeded corpus.
    let f = eq("Z^5-4*X*Y^3*Z^3+4*X^2*Y^3*Z^2+4*X^4*Y^4*Z^2-2*X^4*Y*Z^2+X^3*Y^3*Z");
    let d = build_delta(&f, &PolytopeContext::infinitesimal()).unwrap();
    let audit = nonrational_face_audit(&d).unwrap();
    assert!(!audit.passed());
    let entry = audit.entries.iter().find(|e| !e.ok).unwrap();
    assert_eq!((entry.dim, entry.generator_count), (1, 3));
}
