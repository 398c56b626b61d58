//! The combined report behind `nhpoly analyze`.

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use serde_json::Value;

use super::faces::{classify_face, face_polynomial, nonrational_face_audit, AuditReport, FaceClassification};
use super::projection::{build_delta_with, ProjectionKind};
use super::sweep::{epsilon_sweep, predicate_polynomials, SweepReport};
use super::tangent::{permissibility_table, tangent_cone, PermissibilityReport, TangentConeReport};
use crate::eps::OrderingContext;
use crate::equation::WeierstrassEquation;
use crate::error::AnalysisError;
use crate::exec::Strategy;
use crate::field::format_rational;
use crate::hull::{face_lattice_check, PolytopeContext};
use crate::poly::ExponentVector;

/// Permissibility tables are produced up to this many X variables.
pub const MAX_TABLE_DIM: usize = 4;

#[derive(Clone, Debug, Serialize)]
pub struct EquationEcho {
    pub text: String,
    pub n: u32,
    pub m: usize,
    pub field: String,
    pub tchirnhausen_reduced: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FaceEntry {
    pub face: usize,
    pub dim: usize,
    pub rationality: FaceClassification,
    pub face_polynomial: String,
    pub provenance: Vec<ExponentVector>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub equation: EquationEcho,
    pub projection: ProjectionKind,
    pub context: PolytopeContext,
    pub warnings: Vec<String>,
    pub polytope: Value,
    pub compact_face_counts: Vec<usize>,
    pub faces: Vec<FaceEntry>,
    pub audit: Option<AuditReport>,
    pub band: TangentConeReport,
    pub permissibility: Option<Vec<PermissibilityReport>>,
    pub sweep: Option<SweepReport>,
    /// Discrepancies from the independent face-lattice recomputation.
    pub self_check: Vec<String>,
}

impl AnalysisReport {
    /// Internal invariants that must hold on every input.
    pub fn invariant_violations(&self) -> Vec<String> {
        let mut out = self.self_check.clone();
        for f in &self.faces {
            if !f.rationality.agree {
                out.push(format!("face {}: rationality criteria disagree", f.face));
            }
        }
        if !self.band.band_holds || !self.band.sets_equal {
            out.push("tangent-cone band check failed".into());
        }
        if let Some(t) = &self.permissibility {
            for r in t.iter().filter(|r| !r.agree) {
                out.push(format!("permissibility criteria disagree for {}", r.ideal));
            }
        }
        if let Some(s) = &self.sweep {
            if !s.leftmost_matches_infinitesimal {
                out.push("leftmost sweep interval differs from the infinitesimal polytope".into());
            }
        }
        out
    }
}

/// Options for [`analyze`].
#[derive(Clone, Debug)]
pub struct AnalyzeOptions {
    pub context: PolytopeContext,
    /// Upper end for the ε-sweep; `None` skips it.
    pub q_max: Option<BigRational>,
    pub strategy: Strategy,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        Self {
            context: PolytopeContext::infinitesimal(),
            q_max: Some(BigRational::from_integer(1.into())),
            strategy: Strategy::default(),
        }
    }
}

pub fn analyze(f: &WeierstrassEquation, opts: &AnalyzeOptions) -> Result<AnalysisReport, AnalysisError> {
    let ctx = &opts.context;
    let delta = build_delta_with(f, ctx, opts.strategy)?;
    let mut warnings = Vec::new();
    if let PolytopeContext::Perturbed(oc) = ctx {
        warnings.extend(oc.warnings());
        if let OrderingContext::At(q) = oc {
            if predicate_polynomials(f).iter().any(|p| p.eval(q).is_zero()) {
                warnings.push(format!("epsilon = {} is a root of a face predicate; ties are resolved as equalities", format_rational(q)));
            }
        }
    }
    let mut faces = Vec::new();
    for (idx, face) in delta.compact_faces() {
        faces.push(FaceEntry {
            face: idx,
            dim: face.dim,
            rationality: classify_face(&delta, face)?,
            face_polynomial: face_polynomial(&delta, face, f).render(),
            provenance: delta.face_provenance(face).into_iter().collect(),
        });
    }
    let audit = if ctx == &PolytopeContext::infinitesimal() { Some(nonrational_face_audit(&delta)?) } else { None };
    let permissibility = if f.m() <= MAX_TABLE_DIM { Some(permissibility_table(f)?) } else { None };
    let sweep = match &opts.q_max {
        Some(q) => Some(epsilon_sweep(f, q)?),
        None => None,
    };
    Ok(AnalysisReport {
        equation: EquationEcho {
            text: f.render(),
            n: f.n(),
            m: f.m(),
            field: f.field().to_string(),
            tchirnhausen_reduced: f.is_tchirnhausen_reduced(),
        },
        projection: ProjectionKind::of(ctx),
        context: ctx.clone(),
        warnings,
        polytope: delta.to_json(),
        compact_face_counts: delta.compact_face_counts(),
        faces,
        audit,
        band: tangent_cone(f)?,
        permissibility,
        sweep,
        self_check: face_lattice_check(&delta),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::RationalityVerdict;
    use crate::field::Field;

    #[test]
    fn mixed_facets_of_the_curve_example() {
        let f = WeierstrassEquation::parse("Z^3+(X^2+X*Y^2)*Z+X^2*Y", Field::Rational, None).unwrap();
        let r = analyze(&f, &AnalyzeOptions::default()).unwrap();
        assert_eq!(r.compact_face_counts, vec![3, 2]);
        let facets: Vec<_> = r.faces.iter().filter(|e| e.dim == 1).collect();
        assert!(facets.iter().all(|e| matches!(e.rationality.verdict, RationalityVerdict::NonRational { .. })));
        assert!(r.invariant_violations().is_empty());
        assert!(serde_json::to_string(&r).is_ok());
        assert!(r.warnings.is_empty());
    }
}
