//! Projections of the support, the classical and perturbed polytopes, and
//! the predicates built on them.

mod compare;
mod contraction;
mod faces;
mod linalg;
mod projection;
mod report;
mod roots;
mod segments;
mod sweep;
mod tangent;

pub use faces::{
    classify_face, face_polynomial, nonrational_face_audit, relative_interior_points, AuditEntry, AuditReport,
    FaceClassification, IntegerHyperplane, RationalityVerdict,
};
pub use projection::{
    build_delta, build_delta_with, classical_coords, distance_bound_report, perturbed_coords, project,
    project_exponent, DistanceReport, DistanceRow, ProjectionKind,
};
pub use tangent::{is_permissible, permissibility_table, tangent_cone, BandRow, PermissibilityReport, TangentConeReport};
pub use contraction::{
    contract_iteratively, find_contractible_vertices, CandidateReport, CandidateStatus, Contraction,
    ContractionSearch, ContractionStep, IterationReport, DEFAULT_BUDGET,
};
pub use roots::{nth_roots, polynomial_roots, BRUTE_FORCE_LIMIT};
pub use segments::{detect_binomial_segments, BinomialSegmentReport, LinearFactor, SegmentComponent};
pub use compare::{compare_built, compare_polytopes, face_keys, ComparisonReport, FaceKey, Split};
pub use sweep::{
    candidate_thresholds, default_sample, epsilon_sweep, predicate_polynomials, signature, Signature, SweepInterval,
    SweepReport, Threshold,
};
pub use report::{analyze, AnalysisReport, AnalyzeOptions, EquationEcho, FaceEntry, MAX_TABLE_DIM};
