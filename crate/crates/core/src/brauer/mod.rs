//! Galois action on the Picard lattice, the flex map to the plane section,
//! and the analysis report built from them.

pub mod f3;
mod flexmap;
mod report;

use thiserror::Error;

use crate::curve::{group_structure, CurveError, PlaneCubic};
use crate::lattice::{action_from_line_permutation, LatticeAction, LatticeError, PicLattice};
use crate::lines::{LineConfiguration, LineTriple, LinesError};
use crate::model::ModelError;

pub use f3::{dual_surjectivity, DualSurjection};
pub use flexmap::{
    check_image_contains_three_torsion, check_kernel_tate_vanishes, flex_map, to_i64_vectors, verify_witnesses,
    FlexMap, KernelCheck, ThreeTorsionCheck, TorsionWitness,
};
pub use report::{
    analyze, classify, curve_summary, plane_cubic_mod_p, AnalysisReport, Check, CheckKind, ClassificationReport,
    CohomologySummary, ConeSummary, CurveSummary, FlexSummary, LineSummary, LinesSummary, Outcome, TripleSummary,
    Verdict, SCHEMA_VERSION,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BrauerError {
    #[error("p = {0} is not a prime >= 5")]
    InvalidPrime(u64),
    #[error("σ is not nine 3-cycles, one on each triple")]
    NotCyclicOnTriples,
    #[error("flex indices do not cover the 27 lines")]
    FlexIndex,
    #[error("a flex difference is not in the span of the chosen torsion basis")]
    FlexNotTorsion,
    #[error("flex map is inconsistent with the lattice relations at line {0}")]
    InconsistentRelations(usize),
    #[error("kernel of the flex map is not stable under the action")]
    KernelNotStable,
    #[error("functionals are linearly dependent")]
    DependentFunctionals,
    #[error("functionals must have {expected} entries in 0..3")]
    DimensionMismatch { expected: usize },
    #[error("model stage: {0}")]
    Model(#[from] ModelError),
    #[error("lines stage: {0}")]
    Lines(#[from] LinesError),
    #[error("curve stage: {0}")]
    Curve(#[from] CurveError),
    #[error("lattice stage: {0}")]
    Lattice(#[from] LatticeError),
}

/// Whether `perm` consists of nine 3-cycles, each permuting one triple.
pub fn is_cyclic_on_triples(perm: &[usize], triples: &[LineTriple]) -> bool {
    let mut covered = vec![false; perm.len()];
    for t in triples {
        let [a, b, c] = t.lines;
        let cycles = (perm[a] == b && perm[b] == c && perm[c] == a) || (perm[a] == c && perm[c] == b && perm[b] == a);
        if !cycles {
            return false;
        }
        for i in t.lines {
            if std::mem::replace(&mut covered[i], true) {
                return false;
            }
        }
    }
    perm.len() == 27 && triples.len() == 9 && covered.iter().all(|&c| c)
}

/// The isometry of the abstract Picard lattice induced by σ.
pub fn galois_action_on_pic(conf: &LineConfiguration) -> Result<LatticeAction, BrauerError> {
    if !is_cyclic_on_triples(&conf.sigma, &conf.triples) {
        return Err(BrauerError::NotCyclicOnTriples);
    }
    Ok(action_from_line_permutation(
        &conf.abstract_sigma(),
        &PicLattice::build(),
    )?)
}

/// Whether the `F_p`-points of the curve's Jacobian have no 3-torsion.
pub fn remark_triviality_condition(curve: &PlaneCubic) -> Result<bool, CurveError> {
    Ok(group_structure(curve, 1)?.three_torsion_order() == 1)
}
