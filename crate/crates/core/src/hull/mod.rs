//! Upward-closed polyhedra `conv(S) + ℝ_{≥0}^m` over ℚ or the ordered field ℚ(ε).
//!
//! Facets come from brute-force enumeration: every choice of `j ≥ 1` input
//! points and `m − j` coordinate directions spans a candidate hyperplane,
//! which is kept when its normal is componentwise nonnegative and every input
//! point lies on its nonnegative side. Lower faces are intersections of
//! facets. Faces are identified by their incidence: the input points and
//! recession directions they contain.

pub(crate) mod kernel;
mod oracle;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::eps::{EpsNumber, OrderingContext};
use crate::error::EpsError;
use crate::exec::{self, Strategy};
use crate::poly::ExponentVector;
use crate::upoly::{sign_of, UPoly};
use kernel::{cofactors, dot, rank, Inf, Scalar};

pub use oracle::face_lattice_check;

/// The ordering a polytope is built in. `Classical` means exact rational
/// coordinates with no ε at all.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PolytopeContext {
    Classical,
    Perturbed(OrderingContext),
}

impl PolytopeContext {
    pub fn infinitesimal() -> Self {
        PolytopeContext::Perturbed(OrderingContext::Infinitesimal)
    }

    pub fn at(q: BigRational) -> Result<Self, EpsError> {
        Ok(PolytopeContext::Perturbed(OrderingContext::at(q)?))
    }

    pub fn is_infinitesimal(&self) -> bool {
        matches!(self, PolytopeContext::Perturbed(OrderingContext::Infinitesimal))
    }

    /// The concrete ε of an `At(q)` context.
    pub fn sample(&self) -> Option<&BigRational> {
        match self {
            PolytopeContext::Perturbed(OrderingContext::At(q)) => Some(q),
            _ => None,
        }
    }

    /// Sign of `v` in this context. Classical signs need ε-free values.
    pub fn sign(&self, v: &EpsNumber) -> Result<i8, EpsError> {
        match self {
            PolytopeContext::Classical => v.as_rational().map(|r| sign_of(&r)).ok_or(EpsError::NotConstant),
            PolytopeContext::Perturbed(ctx) => v.sign(ctx),
        }
    }

    /// Parses `classical`, `inf` or a positive rational.
    pub fn parse(text: &str) -> Result<Self, EpsError> {
        match text.trim() {
            "classical" | "0" => Ok(PolytopeContext::Classical),
            other => Ok(PolytopeContext::Perturbed(OrderingContext::parse(other)?)),
        }
    }
}

impl fmt::Display for PolytopeContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolytopeContext::Classical => write!(f, "classical"),
            PolytopeContext::Perturbed(c) => write!(f, "{c}"),
        }
    }
}

impl Serialize for PolytopeContext {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            PolytopeContext::Classical => {
                use serde::ser::SerializeMap;
                let mut map = s.serialize_map(Some(1))?;
                map.serialize_entry("mode", "classical")?;
                map.end()
            }
            PolytopeContext::Perturbed(c) => c.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for PolytopeContext {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let value = serde_json::Value::deserialize(d)?;
        if value.get("mode").and_then(|m| m.as_str()) == Some("classical") {
            return Ok(PolytopeContext::Classical);
        }
        OrderingContext::deserialize(value).map(PolytopeContext::Perturbed).map_err(D::Error::custom)
    }
}

/// A projected support point and the exponent vectors that map onto it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProjectedPoint {
    pub coords: Vec<EpsNumber>,
    pub provenance: BTreeSet<ExponentVector>,
}

impl ProjectedPoint {
    pub fn new(coords: Vec<EpsNumber>, provenance: impl IntoIterator<Item = ExponentVector>) -> Self {
        Self { coords, provenance: provenance.into_iter().collect() }
    }

    /// An ε-free point with empty provenance, handy for ad-hoc hulls.
    pub fn rational(coords: &[BigRational]) -> Self {
        Self { coords: coords.iter().map(EpsNumber::from_rational).collect(), provenance: BTreeSet::new() }
    }
}

/// `normal · x ≥ offset`, with the incident input points and directions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FacetInequality {
    pub normal: Vec<EpsNumber>,
    pub offset: EpsNumber,
    pub points: Vec<usize>,
    pub directions: Vec<usize>,
}

impl FacetInequality {
    pub fn is_compact(&self) -> bool {
        self.directions.is_empty()
    }

    /// `normal · x − offset`.
    pub fn slack(&self, x: &[EpsNumber]) -> EpsNumber {
        self.normal
            .iter()
            .zip(x)
            .fold(-&self.offset, |acc, (a, b)| &acc + &(a * b))
    }

    pub fn has_integer_normal(&self) -> bool {
        self.normal.iter().all(|c| c.as_rational().is_some_and(|r| r.is_integer()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Face {
    pub dim: usize,
    /// Indices of the input points on the face.
    pub generators: Vec<usize>,
    /// Coordinate directions along which the face is unbounded.
    pub directions: Vec<usize>,
    /// Facets containing the face.
    pub facets: Vec<usize>,
    pub compact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Interior,
    /// On the boundary; the index names the smallest face containing the point.
    Boundary(usize),
    Outside,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NHPolytope {
    context: PolytopeContext,
    m: usize,
    points: Vec<ProjectedPoint>,
    vertices: Vec<usize>,
    facets: Vec<FacetInequality>,
    faces: Vec<Face>,
}

impl NHPolytope {
    /// The polytope of an empty support. It contains no point at all.
    pub fn empty(m: usize, context: PolytopeContext) -> Self {
        Self { context, m, points: Vec::new(), vertices: Vec::new(), facets: Vec::new(), faces: Vec::new() }
    }

    /// Assembles a polytope from precomputed parts; vertices are read off the
    /// 0-dimensional faces. No validation happens here, so this is also the
    /// way to build deliberately broken fixtures for [`face_lattice_check`].
    pub fn from_parts(
        context: PolytopeContext,
        m: usize,
        points: Vec<ProjectedPoint>,
        facets: Vec<FacetInequality>,
        faces: Vec<Face>,
    ) -> Self {
        let vertices = faces
            .iter()
            .filter(|f| f.dim == 0)
            .filter_map(|f| f.generators.first().copied())
            .sorted()
            .dedup()
            .collect();
        Self { context, m, points, vertices, facets, faces }
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn context(&self) -> &PolytopeContext {
        &self.context
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn points(&self) -> &[ProjectedPoint] {
        &self.points
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn facets(&self) -> &[FacetInequality] {
        &self.facets
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn compact_faces(&self) -> impl Iterator<Item = (usize, &Face)> {
        self.faces.iter().enumerate().filter(|(_, f)| f.compact)
    }

    /// Compact faces of dimension m−1.
    pub fn compact_facets(&self) -> impl Iterator<Item = (usize, &Face)> {
        let top = self.m.saturating_sub(1);
        self.compact_faces().filter(move |(_, f)| f.dim == top)
    }

    /// Number of compact faces in each dimension 0..m−1.
    pub fn compact_face_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.m];
        for (_, f) in self.compact_faces() {
            counts[f.dim] += 1;
        }
        counts
    }

    /// All exponent vectors whose projections lie on the face.
    pub fn face_provenance(&self, face: &Face) -> BTreeSet<ExponentVector> {
        face.generators
            .iter()
            .flat_map(|&g| self.points[g].provenance.iter().cloned())
            .collect()
    }

    pub fn vertex_points(&self) -> impl Iterator<Item = &ProjectedPoint> {
        self.vertices.iter().map(|&v| &self.points[v])
    }

    /// Index of the face with the given incidence, if it is one.
    pub fn find_face(&self, generators: &[usize], directions: &[usize]) -> Option<usize> {
        self.faces
            .iter()
            .position(|f| f.generators == generators && f.directions == directions)
    }

    /// Exact classification of `x` by the signs of all facet slacks.
    pub fn membership(&self, x: &[EpsNumber]) -> Result<Membership, EpsError> {
        if x.len() != self.m {
            return Err(EpsError::InvalidInput(format!("expected {} coordinates, got {}", self.m, x.len())));
        }
        if self.is_empty() {
            return Ok(Membership::Outside);
        }
        let mut tight = Vec::new();
        for (idx, facet) in self.facets.iter().enumerate() {
            match self.context.sign(&facet.slack(x))? {
                s if s < 0 => return Ok(Membership::Outside),
                0 => tight.push(idx),
                _ => {}
            }
        }
        if tight.is_empty() {
            return Ok(Membership::Interior);
        }
        let mut pts: BTreeSet<usize> = self.facets[tight[0]].points.iter().copied().collect();
        let mut dirs: BTreeSet<usize> = self.facets[tight[0]].directions.iter().copied().collect();
        for &t in &tight[1..] {
            let f = &self.facets[t];
            pts.retain(|p| f.points.contains(p));
            dirs.retain(|d| f.directions.contains(d));
        }
        let pts: Vec<usize> = pts.into_iter().collect();
        let dirs: Vec<usize> = dirs.into_iter().collect();
        self.find_face(&pts, &dirs)
            .map(Membership::Boundary)
            .ok_or_else(|| EpsError::InvalidInput("boundary point outside the face lattice".into()))
    }

    /// Point coordinates rounded to `digits`, when the context fixes ε
    /// (classical or a concrete value).
    pub fn point_decimals(&self, digits: u32) -> Option<Vec<Vec<String>>> {
        let at = |c: &EpsNumber| match &self.context {
            PolytopeContext::Classical => c.as_rational().map(|r| crate::eps::decimal_string(&r, digits)),
            PolytopeContext::Perturbed(OrderingContext::At(q)) => c.to_decimal_at(q, digits).ok(),
            PolytopeContext::Perturbed(OrderingContext::Infinitesimal) => None,
        };
        self.points.iter().map(|p| p.coords.iter().map(at).collect()).collect()
    }

    /// Deterministic JSON dump.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(PolytopeDump {
            context: &self.context,
            m: self.m,
            empty: self.is_empty(),
            points: &self.points,
            point_decimals: self.point_decimals(6),
            vertices: &self.vertices,
            facets: self
                .facets
                .iter()
                .map(|f| FacetDump { inequality: f, compact: f.is_compact() })
                .collect(),
            faces: &self.faces,
        })
        .expect("polytope dump serializes")
    }
}

#[derive(Serialize)]
struct FacetDump<'a> {
    #[serde(flatten)]
    inequality: &'a FacetInequality,
    compact: bool,
}

#[derive(Serialize)]
struct PolytopeDump<'a> {
    context: &'a PolytopeContext,
    m: usize,
    empty: bool,
    points: &'a [ProjectedPoint],
    #[serde(skip_serializing_if = "Option::is_none")]
    point_decimals: Option<Vec<Vec<String>>>,
    vertices: &'a [usize],
    facets: Vec<FacetDump<'a>>,
    faces: &'a [Face],
}

/// Homogeneous rows of the input points in the scalar kernel of a context.
pub(crate) enum Rows {
    Inf(Vec<Vec<Inf>>),
    Rat(Vec<Vec<BigRational>>),
}

pub(crate) fn homogeneous_rows(points: &[ProjectedPoint], context: &PolytopeContext) -> Result<Rows, EpsError> {
    match context {
        PolytopeContext::Perturbed(OrderingContext::Infinitesimal) => {
            Ok(Rows::Inf(points.iter().map(|p| infinitesimal_row(&p.coords)).collect()))
        }
        PolytopeContext::Perturbed(OrderingContext::At(q)) => points
            .iter()
            .map(|p| {
                let mut row = vec![<BigRational as One>::one()];
                for c in &p.coords {
                    row.push(c.eval(q)?);
                }
                Ok(row)
            })
            .collect::<Result<_, _>>()
            .map(Rows::Rat),
        PolytopeContext::Classical => points
            .iter()
            .map(|p| {
                let mut row = vec![<BigRational as One>::one()];
                for c in &p.coords {
                    row.push(c.as_rational().ok_or(EpsError::NotConstant)?);
                }
                Ok(row)
            })
            .collect::<Result<_, _>>()
            .map(Rows::Rat),
    }
}

/// `[w, w·x_1, …, w·x_m]` with `w` a common denominator, positive at 0⁺.
fn infinitesimal_row(coords: &[EpsNumber]) -> Vec<Inf> {
    let mut w = UPoly::one();
    for c in coords {
        let g = w.gcd(c.den());
        let extra = c.den().exact_div(&g).expect("primitive gcd divides");
        w = w.mul(&extra);
    }
    let mut row = vec![Inf(w.clone())];
    for c in coords {
        let cofactor = w.exact_div(c.den()).expect("common denominator");
        row.push(Inf(c.num().mul(&cofactor)));
    }
    row
}

pub(crate) fn direction_row<S: Scalar>(m: usize, j: usize) -> Vec<S> {
    let mut row = vec![S::zero(); m + 1];
    row[j + 1] = S::one();
    row
}

/// A supporting hyperplane `Σ c_t r_t ≥ 0` and the rows it contains.
pub(crate) struct RawFacet<S> {
    pub coeffs: Vec<S>,
    pub points: Vec<usize>,
    pub directions: Vec<usize>,
}

/// All ways to pick `j ≥ 1` points and `m − j` directions.
pub(crate) fn candidate_subsets(n_points: usize, m: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    for j in 1..=m.min(n_points) {
        for pts in (0..n_points).combinations(j) {
            for dirs in (0..m).combinations(m - j) {
                out.push((pts.clone(), dirs));
            }
        }
    }
    out
}

fn test_candidate<S: Scalar>(
    rows: &[Vec<S>],
    m: usize,
    pts: &[usize],
    dirs: &[usize],
) -> Option<RawFacet<S>> {
    let chosen: Vec<Vec<S>> = pts
        .iter()
        .map(|&p| rows[p].clone())
        .chain(dirs.iter().map(|&j| direction_row(m, j)))
        .collect();
    let mut c = cofactors(&chosen);
    let signs: Vec<i8> = c[1..].iter().map(Scalar::sign).collect();
    let has_pos = signs.iter().any(|&s| s > 0);
    let has_neg = signs.iter().any(|&s| s < 0);
    if has_pos && has_neg || !has_pos && !has_neg {
        return None;
    }
    if has_neg {
        c = c.iter().map(Scalar::neg).collect();
    }
    let mut incident = Vec::new();
    for (idx, r) in rows.iter().enumerate() {
        match dot(r, &c).sign() {
            s if s < 0 => return None,
            0 => incident.push(idx),
            _ => {}
        }
    }
    let directions = (0..m).filter(|&j| c[j + 1].is_zero()).collect();
    Some(RawFacet { coeffs: c, points: incident, directions })
}

pub(crate) fn enumerate_facets<S: Scalar>(rows: &[Vec<S>], m: usize, strategy: Strategy) -> Vec<RawFacet<S>> {
    let candidates = candidate_subsets(rows.len(), m);
    let found = exec::filter_map(&candidates, strategy, |(pts, dirs)| test_candidate(rows, m, pts, dirs));
    let mut unique: BTreeMap<(Vec<usize>, Vec<usize>), RawFacet<S>> = BTreeMap::new();
    for f in found {
        unique.entry((f.directions.clone(), f.points.clone())).or_insert(f);
    }
    unique.into_values().collect()
}

/// Divides by the first nonzero normal component; an ε-free normal is then
/// scaled to coprime integers.
fn canonical_inequality(coeffs: &[EpsNumber]) -> (Vec<EpsNumber>, EpsNumber) {
    let first = coeffs[1..].iter().find(|c| !c.is_zero()).expect("nonzero normal").clone();
    let mut normal: Vec<EpsNumber> = coeffs[1..].iter().map(|c| c / &first).collect();
    let mut offset = -(&coeffs[0] / &first);
    if let Some(ratios) = normal.iter().map(EpsNumber::as_rational).collect::<Option<Vec<_>>>() {
        let lcm = ratios.iter().fold(num_bigint::BigInt::one(), |l, r| l.lcm(r.denom()));
        let gcd = ratios
            .iter()
            .map(|r| r.numer() * (&lcm / r.denom()))
            .fold(num_bigint::BigInt::zero(), |g, v| g.gcd(&v));
        let scale = EpsNumber::from_rational(&BigRational::new(lcm, gcd.abs()));
        normal = normal.iter().map(|c| c * &scale).collect();
        offset = &offset * &scale;
    }
    (normal, offset)
}

fn assemble<S: Scalar>(
    rows: &[Vec<S>],
    m: usize,
    raw: Vec<RawFacet<S>>,
) -> (Vec<FacetInequality>, Vec<Face>) {
    let facets: Vec<FacetInequality> = raw
        .iter()
        .map(|f| {
            let eps: Vec<EpsNumber> = f.coeffs.iter().map(Scalar::to_eps).collect();
            let (normal, offset) = canonical_inequality(&eps);
            FacetInequality { normal, offset, points: f.points.clone(), directions: f.directions.clone() }
        })
        .collect();

    type Key = (Vec<usize>, Vec<usize>);
    let intersect = |a: &Key, b: &Key| -> Key {
        (
            a.0.iter().filter(|p| b.0.contains(p)).copied().collect(),
            a.1.iter().filter(|d| b.1.contains(d)).copied().collect(),
        )
    };
    let facet_keys: Vec<Key> = facets.iter().map(|f| (f.points.clone(), f.directions.clone())).collect();
    let mut keys: BTreeSet<Key> = facet_keys.iter().cloned().collect();
    let mut frontier: Vec<Key> = facet_keys.clone();
    while let Some(k) = frontier.pop() {
        for fk in &facet_keys {
            let i = intersect(&k, fk);
            if !i.0.is_empty() && keys.insert(i.clone()) {
                frontier.push(i);
            }
        }
    }

    let mut faces: Vec<Face> = keys
        .into_iter()
        .map(|(pts, dirs)| {
            let span: Vec<Vec<S>> = pts
                .iter()
                .map(|&p| rows[p].clone())
                .chain(dirs.iter().map(|&j| direction_row(m, j)))
                .collect();
            let containing = facet_keys
                .iter()
                .enumerate()
                .filter(|(_, (fp, fd))| pts.iter().all(|p| fp.contains(p)) && dirs.iter().all(|d| fd.contains(d)))
                .map(|(i, _)| i)
                .collect();
            Face { dim: rank(&span) - 1, compact: dirs.is_empty(), generators: pts, directions: dirs, facets: containing }
        })
        .collect();
    faces.sort_by(|a, b| {
        (a.dim, &a.directions, &a.generators).cmp(&(b.dim, &b.directions, &b.generators))
    });
    (facets, faces)
}

/// Merges points that coincide in the context, uniting their provenance.
fn merge_coincident(points: Vec<ProjectedPoint>, context: &PolytopeContext) -> Result<Vec<ProjectedPoint>, EpsError> {
    let mut out: Vec<ProjectedPoint> = Vec::with_capacity(points.len());
    'next: for p in points {
        for q in out.iter_mut() {
            let mut same = true;
            for (a, b) in p.coords.iter().zip(&q.coords) {
                if context.sign(&(a - b))? != 0 {
                    same = false;
                    break;
                }
            }
            if same {
                q.provenance.extend(p.provenance.iter().cloned());
                continue 'next;
            }
        }
        out.push(p);
    }
    Ok(out)
}

/// `conv(points) + ℝ_{≥0}^m` with vertices, facet inequalities and the full
/// face lattice. Coincident points are merged.
pub fn orthant_hull(points: Vec<ProjectedPoint>, m: usize, context: PolytopeContext) -> Result<NHPolytope, EpsError> {
    orthant_hull_with(points, m, context, Strategy::default())
}

pub fn orthant_hull_with(
    points: Vec<ProjectedPoint>,
    m: usize,
    context: PolytopeContext,
    strategy: Strategy,
) -> Result<NHPolytope, EpsError> {
    if m == 0 {
        return Err(EpsError::InvalidInput("dimension must be at least 1".into()));
    }
    for (i, p) in points.iter().enumerate() {
        if p.coords.len() != m {
            return Err(EpsError::InvalidInput(format!("point {i} has {} coordinates, expected {m}", p.coords.len())));
        }
        for c in &p.coords {
            if context.sign(c)? < 0 {
                return Err(EpsError::InvalidInput(format!("point {i} has a negative coordinate")));
            }
        }
    }
    let points = merge_coincident(points, &context)?;
    if points.is_empty() {
        return Ok(NHPolytope::empty(m, context));
    }
    let (facets, faces) = match homogeneous_rows(&points, &context)? {
        Rows::Inf(rows) => {
            let raw = enumerate_facets(&rows, m, strategy);
            assemble(&rows, m, raw)
        }
        Rows::Rat(rows) => {
            let raw = enumerate_facets(&rows, m, strategy);
            assemble(&rows, m, raw)
        }
    };
    Ok(NHPolytope::from_parts(context, m, points, facets, faces))
}
