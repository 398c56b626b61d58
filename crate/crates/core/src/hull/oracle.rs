//! Independent recomputation of a polytope's face lattice.
//!
//! Facets are rediscovered from kernel vectors found by Gauss–Jordan
//! elimination, faces as closures of small point/direction subsets, face
//! dimensions from the rank of the containing facet normals and compactness
//! from whether those normals have a strictly positive combination.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;

use super::kernel::{dot, null_vector, rank, Scalar};
use super::{direction_row, homogeneous_rows, Face, NHPolytope, Rows};

type Key = (Vec<usize>, Vec<usize>);

struct OracleFacet<S> {
    normal: Vec<S>,
    points: BTreeSet<usize>,
    directions: BTreeSet<usize>,
}

fn oracle_facets<S: Scalar>(rows: &[Vec<S>], m: usize) -> BTreeMap<Key, OracleFacet<S>> {
    let mut out = BTreeMap::new();
    let n = rows.len();
    for size in 1..=m.min(n) {
        for pts in (0..n).combinations(size) {
            for dirs in (0..m).combinations(m - size) {
                let chosen: Vec<Vec<S>> = pts
                    .iter()
                    .map(|&p| rows[p].clone())
                    .chain(dirs.iter().map(|&j| direction_row(m, j)))
                    .collect();
                let Some(mut v) = null_vector(&chosen) else { continue };
                let pos = v[1..].iter().filter(|c| c.sign() > 0).count();
                let neg = v[1..].iter().filter(|c| c.sign() < 0).count();
                if (pos > 0 && neg > 0) || pos + neg == 0 {
                    continue;
                }
                if neg > 0 {
                    v = v.iter().map(Scalar::neg).collect();
                }
                let values: Vec<i8> = rows.iter().map(|r| dot(r, &v).sign()).collect();
                if values.iter().any(|&s| s < 0) {
                    continue;
                }
                let points: BTreeSet<usize> = (0..n).filter(|&i| values[i] == 0).collect();
                let directions: BTreeSet<usize> = (0..m).filter(|&j| v[j + 1].is_zero()).collect();
                let key = (points.iter().copied().collect(), directions.iter().copied().collect());
                out.entry(key).or_insert(OracleFacet { normal: v[1..].to_vec(), points, directions });
            }
        }
    }
    out
}

fn containing<'a, S>(facets: &'a BTreeMap<Key, OracleFacet<S>>, pts: &[usize], dirs: &[usize]) -> Vec<&'a OracleFacet<S>> {
    facets
        .values()
        .filter(|f| pts.iter().all(|p| f.points.contains(p)) && dirs.iter().all(|d| f.directions.contains(d)))
        .collect()
}

fn check_with<S: Scalar>(poly: &NHPolytope, rows: &[Vec<S>], report: &mut Vec<String>) {
    let m = poly.m();
    let facets = oracle_facets(rows, m);

    let stored: BTreeSet<Key> = poly.facets().iter().map(|f| (f.points.clone(), f.directions.clone())).collect();
    let found: BTreeSet<Key> = facets.keys().cloned().collect();
    for k in found.difference(&stored) {
        report.push(format!("facet with points {:?} and directions {:?} is missing", k.0, k.1));
    }
    for k in stored.difference(&found) {
        report.push(format!("reported facet with points {:?} and directions {:?} is not a facet", k.0, k.1));
    }

    // Closures of every small subset of points and directions.
    let n = rows.len();
    let mut closures: BTreeMap<Key, usize> = BTreeMap::new();
    for size in 1..=m {
        for np in 1..=size.min(n) {
            for pts in (0..n).combinations(np) {
                for dirs in (0..m).combinations(size - np) {
                    let cont = containing(&facets, &pts, &dirs);
                    if cont.is_empty() {
                        continue;
                    }
                    let mut cp: BTreeSet<usize> = cont[0].points.clone();
                    let mut cd: BTreeSet<usize> = cont[0].directions.clone();
                    for f in &cont[1..] {
                        cp = cp.intersection(&f.points).copied().collect();
                        cd = cd.intersection(&f.directions).copied().collect();
                    }
                    let normals: Vec<Vec<S>> = cont.iter().map(|f| f.normal.clone()).collect();
                    let dim = m - rank(&normals);
                    closures.insert((cp.into_iter().collect(), cd.into_iter().collect()), dim);
                }
            }
        }
    }

    let stored_faces: BTreeMap<Key, &Face> =
        poly.faces().iter().map(|f| ((f.generators.clone(), f.directions.clone()), f)).collect();
    for (k, dim) in &closures {
        match stored_faces.get(k) {
            None => report.push(format!("face with points {:?} and directions {:?} is missing", k.0, k.1)),
            Some(f) if f.dim != *dim => {
                report.push(format!("face with points {:?} has dimension {} but {} was reported", k.0, dim, f.dim))
            }
            _ => {}
        }
    }
    for k in stored_faces.keys() {
        if !closures.contains_key(k) {
            report.push(format!("reported face with points {:?} and directions {:?} is not a face", k.0, k.1));
        }
    }

    for (idx, face) in poly.faces().iter().enumerate() {
        let cont = containing(&facets, &face.generators, &face.directions);
        let sum = cont.iter().fold(vec![S::zero(); m], |acc, f| {
            acc.iter().zip(&f.normal).map(|(a, b)| a.add(b)).collect()
        });
        let positive = !cont.is_empty() && sum.iter().all(|c| c.sign() > 0);
        if positive != face.compact {
            report.push(format!("face {idx} has compact = {} but its normal cone says {positive}", face.compact));
        }
        if face.compact != face.directions.is_empty() {
            report.push(format!("face {idx} compactness disagrees with its recession directions"));
        }
        let expect: Vec<usize> = poly
            .facets()
            .iter()
            .enumerate()
            .filter(|(_, f)| {
                face.generators.iter().all(|p| f.points.contains(p))
                    && face.directions.iter().all(|d| f.directions.contains(d))
            })
            .map(|(i, _)| i)
            .collect();
        if expect != face.facets {
            report.push(format!("face {idx} lists facets {:?}, expected {:?}", face.facets, expect));
        }
    }

    let vertex_faces: Vec<usize> = poly
        .faces()
        .iter()
        .filter(|f| f.dim == 0)
        .flat_map(|f| f.generators.iter().copied())
        .sorted()
        .collect();
    if vertex_faces != poly.vertices() {
        report.push(format!("vertex list {:?} does not match the 0-faces {:?}", poly.vertices(), vertex_faces));
    }
    for &v in poly.vertices() {
        let normals: Vec<Vec<S>> = containing(&facets, &[v], &[]).iter().map(|f| f.normal.clone()).collect();
        if rank(&normals) != m {
            report.push(format!("vertex {v} is not cut out by {m} independent facets"));
        }
    }
}

/// Recomputes the facets and faces of `poly` by an independent route and
/// compares. Returns human-readable discrepancies; empty means consistent.
pub fn face_lattice_check(poly: &NHPolytope) -> Vec<String> {
    let mut report = Vec::new();
    if poly.is_empty() {
        if !poly.facets().is_empty() || !poly.faces().is_empty() {
            report.push("empty polytope carries facets or faces".into());
        }
        return report;
    }
    let ctx = poly.context();
    let m = poly.m();

    // Stored inequalities, checked in ℚ(ε) rather than in the kernel.
    for (fi, f) in poly.facets().iter().enumerate() {
        for (j, c) in f.normal.iter().enumerate() {
            match ctx.sign(c) {
                Ok(s) if s < 0 => report.push(format!("facet {fi} has a negative normal component {j}")),
                Ok(0) if !f.directions.contains(&j) => {
                    report.push(format!("facet {fi} is parallel to direction {j} but does not list it"))
                }
                Ok(s) if s > 0 && f.directions.contains(&j) => {
                    report.push(format!("facet {fi} lists direction {j} but is not parallel to it"))
                }
                Err(e) => report.push(format!("facet {fi}: {e}")),
                _ => {}
            }
        }
        for (pi, p) in poly.points().iter().enumerate() {
            match ctx.sign(&f.slack(&p.coords)) {
                Ok(s) if s < 0 => report.push(format!("point {pi} violates facet {fi}")),
                Ok(0) if !f.points.contains(&pi) => {
                    report.push(format!("point {pi} lies on facet {fi} but is not listed"))
                }
                Ok(s) if s > 0 && f.points.contains(&pi) => {
                    report.push(format!("facet {fi} lists point {pi} which is not on it"))
                }
                Err(e) => report.push(format!("facet {fi}, point {pi}: {e}")),
                _ => {}
            }
        }
    }

    for (idx, face) in poly.compact_faces() {
        if face.dim > 0 {
            let has_sub = poly.compact_faces().any(|(_, g)| {
                g.dim + 1 == face.dim && g.generators.iter().all(|p| face.generators.contains(p))
            });
            if !has_sub {
                report.push(format!("compact face {idx} of dimension {} has no compact subface", face.dim));
            }
        }
    }
    // In one dimension the only unbounded face is the polytope itself.
    for j in (0..m).filter(|_| m > 1) {
        if !poly.faces().iter().any(|f| f.directions.contains(&j)) {
            report.push(format!("no face is unbounded along direction {j}"));
        }
    }

    match homogeneous_rows(poly.points(), ctx) {
        Ok(Rows::Inf(rows)) => check_with(poly, &rows, &mut report),
        Ok(Rows::Rat(rows)) => check_with(poly, &rows, &mut report),
        Err(e) => report.push(format!("points cannot be evaluated: {e}")),
    }
    report
}

#[cfg(test)]
mod tests {
    use num_rational::BigRational;

    use super::super::{orthant_hull, PolytopeContext, ProjectedPoint};
    use super::*;

    #[test]
    fn corrupted_facet_list_is_detected() {
        let pts: Vec<_> = [(0, 3), (1, 1), (3, 0)]
            .iter()
            .map(|&(a, b)| ProjectedPoint::rational(&[BigRational::from_integer(a.into()), BigRational::from_integer(b.into())]))
            .collect();
        let good = orthant_hull(pts, 2, PolytopeContext::Classical).unwrap();
        assert!(face_lattice_check(&good).is_empty());

        let mut facets = good.facets().to_vec();
        facets.remove(0);
        let broken = NHPolytope::from_parts(
            good.context().clone(),
            2,
            good.points().to_vec(),
            facets,
            good.faces().to_vec(),
        );
        assert!(!face_lattice_check(&broken).is_empty());

        let mut faces = good.faces().to_vec();
        faces.retain(|f| f.dim != 0 || f.generators != vec![1]);
        let broken = NHPolytope::from_parts(good.context().clone(), 2, good.points().to_vec(), good.facets().to_vec(), faces);
        assert!(!face_lattice_check(&broken).is_empty());
    }
}
