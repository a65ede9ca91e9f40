//! The analysis report: classification, the line and cohomology data for
//! cone reductions, a list of checks, and the conclusions those checks permit.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::arith::rational::{p_power, signed_parts, valuation};
use crate::arith::{EisensteinRing, FieldElement, HomogeneousForm};
use crate::curve::{flexes, group_structure, is_smooth, rational_points, PlaneCubic};
use crate::lattice::{h1_cyclic, PicLattice};
use crate::lines::{compute_line_configuration, omega_lift, residual_valuation, sigma_action_exact, LineConfiguration};
use crate::model::{
    classify_reduction, cone_normal_form, normalize_flat, reduce_mod_p, reduce_s_fully, vertex_no_lift_check,
    ConeNormalForm, CubicSurfaceModel, NoLiftOutcome, ReduceOutcome, ReductionType,
};

use super::f3::{all_vectors, dual_surjectivity, evaluate, rank};
use super::flexmap::{check_image_contains_three_torsion, check_kernel_tate_vanishes, flex_map, verify_witnesses};
use super::{galois_action_on_pic, is_cyclic_on_triples, BrauerError};

pub const SCHEMA_VERSION: u32 = 1;

/// The exhaustive vertex search visits `p^6` classes; larger searches are skipped.
const VERTEX_SEARCH_CAP: u64 = 100_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    /// Conclusions were reached and every check they rely on passed.
    Verdict,
    /// The reduction is a cone but `a` is divisible by `p`.
    TheoremInapplicable,
    /// The reduction type is outside the cases analyzed.
    ClassifiedOnly,
    /// A consistency check failed; no conclusions are drawn.
    ChecksFailed,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Verdict => 0,
            Outcome::TheoremInapplicable | Outcome::ClassifiedOnly => 2,
            Outcome::ChecksFailed => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// Must hold for every valid input; a failure means a computation is wrong.
    Consistency,
    /// A hypothesis that may or may not hold for a given surface.
    Condition,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub kind: CheckKind,
    pub statement: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub id: String,
    pub statement: String,
    /// Ids of the checks this conclusion depends on; all of them passed.
    pub requires: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeSummary {
    pub vertex_transform: Vec<Vec<i64>>,
    /// `s` of the first normal form, before any rescaling.
    pub s_initial: u32,
    pub s: u32,
    pub a: String,
    pub a_unit: bool,
    /// Power of `p` removed by rescaling the vertex coordinates.
    pub rescaled_by: u32,
    pub normal_form: String,
    pub vertex_no_lift: Option<NoLiftOutcome>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineSummary {
    pub name: String,
    /// Plücker coordinates of the reduction on the original model.
    pub reduction: Vec<String>,
    /// Plücker coordinates of the reduction on the smooth triple-cover model.
    pub cover_reduction: Vec<String>,
    pub flex: usize,
    pub residual_valuation: u32,
    pub newton_iterations: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleSummary {
    pub lines: Vec<String>,
    pub flex: usize,
    pub plane: Vec<String>,
    pub coplanar: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinesSummary {
    pub residue_field_degree: u32,
    pub precision: u32,
    pub cover_model: String,
    pub base_curve: String,
    pub flexes: Vec<Vec<String>>,
    pub lines: Vec<LineSummary>,
    pub triples: Vec<TripleSummary>,
    /// σ on abstract line names: `sigma[i]` is the image of the line named `lines[i].name`.
    pub sigma: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologySummary {
    pub action_order: u32,
    /// Matrix of σ on the basis `(L, E1, ..., E6)`; columns are images.
    pub action_matrix: Vec<Vec<i64>>,
    pub h0_rank: usize,
    pub h0_basis: Vec<Vec<i64>>,
    pub h1_invariants: Vec<u64>,
    pub flex_map_matrix: Vec<Vec<i64>>,
    pub kernel_rank: usize,
    pub kernel_h0_rank: usize,
    pub kernel_tate_invariants: Vec<u64>,
    pub three_torsion_generated: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlexSummary {
    pub point: Vec<String>,
    pub degree: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveSummary {
    pub equation: String,
    pub prime: u64,
    pub smooth: bool,
    pub point_count: Option<u64>,
    /// Invariants `d_i > 1` of the group of rational points.
    pub group: Option<Vec<u64>>,
    pub rational_three_torsion: Option<u64>,
    pub flex_field_degree: Option<u32>,
    pub flexes: Vec<FlexSummary>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub schema_version: u32,
    pub input: String,
    pub prime: u64,
    pub scaled_by: i64,
    pub reduction: ReductionType,
    pub cone: Option<ConeSummary>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub input: String,
    pub prime: u64,
    pub precision: u32,
    pub reduction: ReductionType,
    pub outcome: Outcome,
    pub cone: Option<ConeSummary>,
    pub lines: Option<LinesSummary>,
    pub cohomology: Option<CohomologySummary>,
    pub curve: Option<CurveSummary>,
    pub checks: Vec<Check>,
    pub verdicts: Vec<Verdict>,
    pub notes: Vec<String>,
    pub elapsed_ms: u64,
}

impl AnalysisReport {
    pub fn exit_code(&self) -> i32 {
        self.outcome.exit_code()
    }

    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn verdict(&self, id: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.id == id)
    }

    /// Every verdict cites only checks that are present and passed.
    pub fn verdicts_are_gated(&self) -> bool {
        self.verdicts
            .iter()
            .all(|v| v.requires.iter().all(|id| self.check(id).is_some_and(|c| c.passed)))
    }

    /// The report with timing removed, for comparisons.
    pub fn without_timing(&self) -> Self {
        AnalysisReport {
            elapsed_ms: 0,
            ..self.clone()
        }
    }

    fn push_check(&mut self, id: &str, kind: CheckKind, statement: &str, passed: bool, detail: String) {
        self.checks.push(Check {
            id: id.into(),
            kind,
            statement: statement.into(),
            passed,
            detail,
        });
    }

    /// Adds a verdict when every required check passed.
    fn conclude(&mut self, id: &str, statement: &str, requires: &[&str]) {
        let ok = requires.iter().all(|r| self.check(r).is_some_and(|c| c.passed));
        if ok {
            self.verdicts.push(Verdict {
                id: id.into(),
                statement: statement.into(),
                requires: requires.iter().map(|s| s.to_string()).collect(),
            });
        }
    }

    /// Plain-text rendering with the same check outcomes as the JSON form.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut line = |s: String| {
            out.push_str(&s);
            out.push('\n');
        };
        line(format!("input:     {}", self.input));
        line(format!("prime:     {}", self.prime));
        line(format!("reduction: {}", describe_reduction(&self.reduction)));
        if let Some(c) = &self.cone {
            line(format!(
                "cone:      s = {} (initially {}), a = {} ({})",
                c.s,
                c.s_initial,
                c.a,
                if c.a_unit { "unit" } else { "not a unit" }
            ));
            line(format!("normal form: {}", c.normal_form));
        }
        if let Some(l) = &self.lines {
            line(format!(
                "lines:     {} lifted over F_{}^{} to precision Π^{}, {} triples",
                l.lines.len(),
                self.prime,
                l.residue_field_degree,
                l.precision,
                l.triples.len()
            ));
        }
        if let Some(h) = &self.cohomology {
            line(format!("action:    order {}", h.action_order));
            line(format!("H^0:       rank {} spanned by {:?}", h.h0_rank, h.h0_basis));
            line(format!("H^1:       {}", invariants_string(&h.h1_invariants)));
        }
        if let Some(c) = &self.curve {
            if let Some(g) = &c.group {
                line(format!("curve:     {} ; C(F_p) = {}", c.equation, invariants_string(g)));
            }
        }
        line(String::new());
        line("checks:".into());
        for c in &self.checks {
            line(format!(
                "  [{}] {}: {} ({})",
                if c.passed { "pass" } else { "FAIL" },
                c.id,
                c.statement,
                c.detail
            ));
        }
        if !self.verdicts.is_empty() {
            line(String::new());
            line("conclusions:".into());
            for v in &self.verdicts {
                line(format!("  - {}", v.statement));
            }
        }
        for n in &self.notes {
            line(format!("note: {n}"));
        }
        line(format!("outcome:   {:?}", self.outcome));
        out
    }
}

impl ClassificationReport {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "input:     {}\nprime:     {}\nreduction: {}\n",
            self.input,
            self.prime,
            describe_reduction(&self.reduction)
        );
        if self.scaled_by != 0 {
            out.push_str(&format!("scaled by: p^{}\n", self.scaled_by));
        }
        if let Some(c) = &self.cone {
            out.push_str(&format!(
                "cone:      s = {}, a = {} ({})\nnormal form: {}\n",
                c.s,
                c.a,
                if c.a_unit { "unit" } else { "not a unit" },
                c.normal_form
            ));
        }
        out
    }
}

impl CurveSummary {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "curve:     {} over F_{}\nsmooth:    {}\n",
            self.equation,
            self.prime,
            if self.smooth { "yes" } else { "no" }
        );
        if let Some(n) = self.point_count {
            out.push_str(&format!("points:    {n}\n"));
        }
        if let Some(g) = &self.group {
            out.push_str(&format!("group:     {}\n", invariants_string(g)));
        }
        if let Some(t) = self.rational_three_torsion {
            out.push_str(&format!("3-torsion: order {t}\n"));
        }
        if let Some(d) = self.flex_field_degree {
            out.push_str(&format!("flexes:    {} over F_{}^{d}\n", self.flexes.len(), self.prime));
            for f in &self.flexes {
                out.push_str(&format!("  ({}) degree {}\n", f.point.join(" : "), f.degree));
            }
        }
        out
    }
}

/// Wall-clock timing; `wasm32-unknown-unknown` has no clock, so it reports 0 there.
struct Stopwatch(#[cfg(not(all(target_arch = "wasm32", target_os = "unknown")))] std::time::Instant);

impl Stopwatch {
    fn start() -> Self {
        #[cfg(not(all(target_arch = "wasm32", target_os = "unknown")))]
        return Stopwatch(std::time::Instant::now());
        #[cfg(all(target_arch = "wasm32", target_os = "unknown"))]
        return Stopwatch();
    }

    fn elapsed_ms(&self) -> u64 {
        #[cfg(not(all(target_arch = "wasm32", target_os = "unknown")))]
        return self.0.elapsed().as_millis() as u64;
        #[cfg(all(target_arch = "wasm32", target_os = "unknown"))]
        return 0;
    }
}

fn invariants_string(inv: &[u64]) -> String {
    if inv.is_empty() {
        "0".into()
    } else {
        inv.iter().map(|d| format!("Z/{d}")).collect::<Vec<_>>().join(" x ")
    }
}

fn describe_reduction(r: &ReductionType) -> String {
    match r {
        ReductionType::ConeOverSmoothCubic { vertex, base_curve } => {
            format!("cone over a smooth cubic, vertex {vertex:?}, base {base_curve}")
        }
        ReductionType::OtherSingular { reason } => format!("other singular ({reason})"),
        other => other.name().to_string(),
    }
}

fn show_form(f: &HomogeneousForm<BigRational>) -> String {
    f.to_string_with(signed_parts)
}

fn show_vec(v: &[FieldElement]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn validate_prime(p: u64) -> Result<(), BrauerError> {
    if p < 5 || crate::arith::GaloisField::prime(p).is_err() {
        return Err(BrauerError::InvalidPrime(p));
    }
    Ok(())
}

fn cone_summary(nf: &ConeNormalForm) -> ConeSummary {
    ConeSummary {
        vertex_transform: nf.transform.clone(),
        s_initial: nf.s,
        s: nf.s,
        a: nf.a.to_string(),
        a_unit: nf.a_is_unit(),
        rescaled_by: nf.reductions,
        normal_form: show_form(&nf.form()),
        vertex_no_lift: None,
    }
}

/// Classification of the reduction, with the cone normal form when it applies.
pub fn classify(form: &HomogeneousForm<BigRational>, p: u64) -> Result<ClassificationReport, BrauerError> {
    validate_prime(p)?;
    let model = normalize_flat(form, p)?;
    let reduction = classify_reduction(&model);
    let cone = match reduction {
        ReductionType::ConeOverSmoothCubic { .. } => Some(cone_summary(&cone_normal_form(&model)?)),
        _ => None,
    };
    Ok(ClassificationReport {
        schema_version: SCHEMA_VERSION,
        input: show_form(form),
        prime: p,
        scaled_by: model.scale,
        reduction,
        cone,
    })
}

/// The reduction mod `p` of a rational ternary cubic, after dividing by the
/// power of `p` that makes the coefficients primitive.
pub fn plane_cubic_mod_p(form: &HomogeneousForm<BigRational>, p: u64) -> Result<PlaneCubic, BrauerError> {
    validate_prime(p)?;
    let v = form
        .terms()
        .values()
        .filter_map(|c| valuation(c, p))
        .min()
        .ok_or(BrauerError::Model(crate::model::ModelError::ZeroForm))?;
    let field = crate::arith::GaloisField::prime(p).map_err(|_| BrauerError::InvalidPrime(p))?;
    let scale = p_power(p, -v);
    let primitive = form.map(|c| c * &scale);
    Ok(PlaneCubic::new(field.clone(), reduce_mod_p(&primitive, &field))?)
}

/// Point count, group structure and flexes of a plane cubic over `F_p`.
pub fn curve_summary(c: &PlaneCubic) -> Result<CurveSummary, BrauerError> {
    let smooth = is_smooth(c).is_smooth();
    let mut summary = CurveSummary {
        equation: c.to_string(),
        prime: c.p(),
        smooth,
        point_count: None,
        group: None,
        rational_three_torsion: None,
        flex_field_degree: None,
        flexes: Vec::new(),
    };
    if smooth {
        let g = group_structure(c, 1)?;
        summary.point_count = Some(g.order);
        summary.group = Some(g.structure());
        summary.rational_three_torsion = Some(g.three_torsion_order());
        let fd = flexes(c)?;
        summary.flex_field_degree = Some(fd.field_degree());
        summary.flexes = fd
            .flexes
            .iter()
            .map(|f| FlexSummary {
                point: show_vec(&f.point.coords),
                degree: f.degree,
            })
            .collect();
    } else {
        summary.point_count = Some(rational_points(c, c.field())?.len() as u64);
    }
    Ok(summary)
}

/// Runs the analysis at `p`, lifting lines to precision `Π^precision` when
/// the reduction is a cone.
pub fn analyze(form: &HomogeneousForm<BigRational>, p: u64, precision: u32) -> Result<AnalysisReport, BrauerError> {
    let start = Stopwatch::start();
    validate_prime(p)?;
    let model = normalize_flat(form, p)?;
    let reduction = classify_reduction(&model);
    let mut r = AnalysisReport {
        schema_version: SCHEMA_VERSION,
        input: show_form(form),
        prime: p,
        precision,
        reduction: reduction.clone(),
        outcome: Outcome::ClassifiedOnly,
        cone: None,
        lines: None,
        cohomology: None,
        curve: None,
        checks: Vec::new(),
        verdicts: Vec::new(),
        notes: Vec::new(),
        elapsed_ms: 0,
    };
    match reduction {
        ReductionType::Smooth => good_reduction(&mut r, "the special fibre of the normalized model is smooth"),
        ReductionType::ConeOverSmoothCubic { .. } => analyze_cone(&mut r, &model, precision)?,
        other => r.notes.push(format!(
            "reduction type {} is outside the good and cone cases; only the classification is reported",
            other.name()
        )),
    }
    r.elapsed_ms = start.elapsed_ms();
    Ok(r)
}

fn good_reduction(r: &mut AnalysisReport, detail: &str) {
    r.push_check(
        "smooth_special_fibre",
        CheckKind::Consistency,
        "the partial derivatives of the reduction have no common zero",
        true,
        detail.into(),
    );
    r.conclude(
        "constant_evaluation",
        "X has good reduction, so the evaluation map of every element of Br_1 X is constant on X(Q_p).",
        &["smooth_special_fibre"],
    );
    r.outcome = Outcome::Verdict;
}

fn analyze_cone(r: &mut AnalysisReport, model: &CubicSurfaceModel, precision: u32) -> Result<(), BrauerError> {
    let nf0 = cone_normal_form(model)?;
    let mut summary = cone_summary(&nf0);
    if !nf0.a_is_unit() {
        r.cone = Some(summary);
        r.outcome = Outcome::TheoremInapplicable;
        r.notes.push(format!(
            "a = g(0,0,0,1) = {} is divisible by p = {}: the vertex lies on the smooth model's reduction and the \
             cone analysis does not apply. The line configuration and Brauer group in this case are not computed.",
            nf0.a, r.prime
        ));
        return Ok(());
    }
    let nf = if nf0.s >= 3 {
        match reduce_s_fully(&nf0)? {
            ReduceOutcome::GoodReduction(m) => {
                summary.s = 0;
                summary.normal_form = show_form(&m.form);
                summary.rescaled_by = (nf0.s / 3) * 3;
                r.cone = Some(summary);
                r.notes.push(format!(
                    "s = {} is divisible by 3; rescaling the vertex coordinates gives a model with good reduction",
                    nf0.s
                ));
                good_reduction(r, "the rescaled model's special fibre is smooth");
                return Ok(());
            }
            ReduceOutcome::Cone(nf) => {
                summary.s = nf.s;
                summary.rescaled_by = nf.reductions;
                summary.normal_form = show_form(&nf.form());
                r.notes.push(format!(
                    "rescaled the vertex coordinates: s = {} became s = {}",
                    nf0.s, nf.s
                ));
                nf
            }
        }
    } else {
        nf0
    };
    let search_size = nf.p.checked_pow(6).unwrap_or(u64::MAX);
    if search_size <= VERTEX_SEARCH_CAP {
        let outcome = vertex_no_lift_check(&nf)?;
        let passed = matches!(outcome, NoLiftOutcome::Verified { .. });
        r.push_check(
            "vertex_no_lift",
            CheckKind::Consistency,
            "no point mod p^3 reduces to the vertex",
            passed,
            format!("{outcome:?}"),
        );
        summary.vertex_no_lift = Some(outcome);
    } else {
        r.notes
            .push(format!("vertex search skipped: p^6 = {search_size} classes"));
    }
    r.cone = Some(summary);

    let conf = compute_line_configuration(&nf, precision)?;
    line_checks(r, &nf, &conf);
    let lat = PicLattice::build();
    let action = galois_action_on_pic(&conf)?;
    r.push_check(
        "galois_action",
        CheckKind::Consistency,
        "σ induces an isometry of order 3 of the Picard lattice",
        action.order == 3,
        format!("order {}", action.order),
    );
    let coh = h1_cyclic(&action, None)?;
    let h = lat.hyperplane.to_vec();
    let neg_h: Vec<i64> = h.iter().map(|x| -x).collect();
    let plane_only = coh.h0_rank == 1 && (coh.h0_basis[0] == h || coh.h0_basis[0] == neg_h);
    r.push_check(
        "h0_plane_class",
        CheckKind::Consistency,
        "the invariant classes are the multiples of the plane section",
        plane_only,
        format!("rank {}, basis {:?}", coh.h0_rank, coh.h0_basis),
    );
    r.push_check(
        "h1_invariants",
        CheckKind::Consistency,
        "H^1 of the inertia action is (Z/3)^2",
        coh.h1.free_rank == 0 && coh.h1.invariants == [3, 3],
        coh.h1.to_string(),
    );

    let fm = flex_map(&conf)?;
    let tt = check_image_contains_three_torsion(&fm)?;
    let witnessed = verify_witnesses(&fm, &tt);
    r.push_check(
        "three_torsion_image",
        CheckKind::Consistency,
        "the flex differences generate the full 3-torsion of the plane section's Jacobian",
        tt.holds && witnessed,
        format!(
            "subgroup of order {}, {} witnesses re-verified, enumeration {}",
            tt.generated_order,
            tt.witnesses.len(),
            match tt.enumeration_agrees {
                Some(true) => "agrees",
                Some(false) => "disagrees",
                None => "skipped",
            }
        ),
    );
    let kc = check_kernel_tate_vanishes(&fm, &action)?;
    r.push_check(
        "kernel_h0",
        CheckKind::Consistency,
        "the kernel of the flex map has no invariant vectors",
        kc.h0_rank == 0,
        format!("kernel rank {}, invariant rank {}", kc.kernel_rank, kc.h0_rank),
    );
    r.push_check(
        "kernel_tate",
        CheckKind::Consistency,
        "the Tate group of the kernel vanishes",
        kc.tate_h0.is_trivial(),
        kc.tate_h0.to_string(),
    );

    let group = group_structure(&conf.base_curve, 1)?;
    let dim = group.invariants.iter().filter(|&&d| d % 3 == 0).count();
    let (lemma_ok, families) = surjectivity_lemma_exhaustive(dim);
    r.push_check(
        "surjectivity_lemma",
        CheckKind::Consistency,
        "independent functionals on C(F_p)/3 jointly take every value",
        lemma_ok,
        format!("dim C(F_p)/3 = {dim}, {families} independent families verified"),
    );
    let trivial = group.three_torsion_order() == 1;
    r.push_check(
        "rational_three_torsion_trivial",
        CheckKind::Condition,
        "the plane section's Jacobian has no nontrivial F_p-rational 3-torsion",
        trivial,
        format!("C(F_p) = {group}"),
    );

    r.cohomology = Some(CohomologySummary {
        action_order: action.order,
        action_matrix: action.generator.clone(),
        h0_rank: coh.h0_rank,
        h0_basis: coh.h0_basis.clone(),
        h1_invariants: coh.h1.invariants.clone(),
        flex_map_matrix: fm.matrix.clone(),
        kernel_rank: kc.kernel_rank,
        kernel_h0_rank: kc.h0_rank,
        kernel_tate_invariants: kc.tate_h0.invariants.clone(),
        three_torsion_generated: tt.generated_order,
    });
    r.curve = Some(curve_summary(&conf.base_curve)?);
    r.lines = Some(lines_summary(&conf, &lat));

    let failed: Vec<String> = r
        .checks
        .iter()
        .filter(|c| c.kind == CheckKind::Consistency && !c.passed)
        .map(|c| c.id.clone())
        .collect();
    if !failed.is_empty() {
        r.outcome = Outcome::ChecksFailed;
        r.notes.push(format!("failed checks: {}", failed.join(", ")));
        return Ok(());
    }
    cone_verdicts(r);
    r.outcome = Outcome::Verdict;
    Ok(())
}

fn line_checks(r: &mut AnalysisReport, nf: &ConeNormalForm, conf: &LineConfiguration) {
    let ring: &EisensteinRing = &conf.ring;
    let x_form = nf
        .form()
        .map_into(ring, |c| ring.from_rational(c).expect("integral coefficients"));
    let y_min = conf.lifted.iter().map(|l| l.residual_valuation).min().unwrap_or(0);
    let x_min = conf
        .surface
        .iter()
        .map(|l| residual_valuation(ring, &x_form, &l.rows))
        .min()
        .unwrap_or(0);
    r.push_check(
        "line_residuals",
        CheckKind::Consistency,
        "27 lines satisfy both models to the working precision",
        conf.lifted.len() == 27 && y_min >= conf.precision && x_min >= conf.precision,
        format!(
            "{} lines, residual valuations >= {} (cover) and {} (surface)",
            conf.lifted.len(),
            y_min,
            x_min
        ),
    );
    let flexes: std::collections::BTreeSet<usize> = conf.triples.iter().map(|t| t.flex).collect();
    let distinct_reductions: std::collections::BTreeSet<&Vec<FieldElement>> =
        conf.surface.iter().map(|l| &l.reduction).collect();
    r.push_check(
        "triples",
        CheckKind::Consistency,
        "the lines reduce 3-to-1 onto the 9 lines joining the vertex to the flexes",
        conf.triples.len() == 9
            && flexes.len() == 9
            && distinct_reductions.len() == 9
            && conf.triples.iter().all(|t| t.through_vertex_and_flex),
        format!(
            "{} triples over {} flexes, {} distinct reductions",
            conf.triples.len(),
            flexes.len(),
            distinct_reductions.len()
        ),
    );
    r.push_check(
        "coplanarity",
        CheckKind::Consistency,
        "the three lines of each triple are coplanar",
        conf.triples.iter().all(|t| t.coplanar),
        format!(
            "{} of {} coplanar",
            conf.triples.iter().filter(|t| t.coplanar).count(),
            conf.triples.len()
        ),
    );
    let exact = sigma_action_exact(ring, &conf.surface, &omega_lift(ring, &conf.omega));
    let agrees = exact.as_ref().is_ok_and(|s| *s == conf.sigma);
    r.push_check(
        "cyclicity",
        CheckKind::Consistency,
        "Π -> ωΠ permutes each triple cyclically",
        is_cyclic_on_triples(&conf.sigma, &conf.triples) && agrees,
        format!(
            "residue and exact computations {}",
            if agrees { "agree" } else { "differ" }
        ),
    );
}

fn cone_verdicts(r: &mut AnalysisReport) {
    const LINES: [&str; 4] = ["line_residuals", "triples", "coplanarity", "cyclicity"];
    let with = |extra: &[&'static str]| -> Vec<&'static str> { LINES.iter().chain(extra).copied().collect() };
    let injection = with(&[
        "galois_action",
        "h1_invariants",
        "three_torsion_image",
        "kernel_h0",
        "kernel_tate",
    ]);
    let mut all = injection.clone();
    all.extend(["h0_plane_class", "surjectivity_lemma"]);
    r.conclude(
        "plane_class_only",
        "H^0(Q_p, Pic X̄) ≅ Z: the only divisor classes defined over Q_p are multiples of a plane section.",
        &with(&["galois_action", "h0_plane_class"]),
    );
    r.conclude(
        "h1_bound",
        "H^1 over the maximal unramified extension is (Z/3)^2, so Br X/Br Q_p is trivial, Z/3 or (Z/3)^2.",
        &with(&["galois_action", "h1_invariants"]),
    );
    r.conclude(
        "splitting_field",
        "Every element of Br X splits over Q_p^nr(p^(1/3)), where all 27 lines are defined.",
        &["line_residuals", "triples", "cyclicity"],
    );
    r.conclude(
        "injection",
        "Restriction Br X/Br Q_p -> Br C/Br Q_p to the good plane section C is injective.",
        &injection,
    );
    let mut surj = injection.clone();
    surj.push("surjectivity_lemma");
    r.conclude(
        "surjectivity",
        "For classes independent in Br X/Br Q_p the joint evaluation map X(Q_p) -> (1/3 Z/Z)^n is onto; \
         any non-constant class takes three values.",
        &surj,
    );
    r.conclude(
        "no_obstruction_to_points",
        "Over a number field with this reduction at a place above p, Br X gives no Brauer-Manin obstruction \
         to the existence of rational points.",
        &all,
    );
    r.conclude(
        "weak_approximation",
        "In that setting there is a Brauer-Manin obstruction to weak approximation exactly when Br X/Br L is nontrivial.",
        &all,
    );
    let mut triv = injection;
    triv.push("rational_three_torsion_trivial");
    r.conclude("trivial_brauer", "Br X = Br Q_p.", &triv);
}

/// Runs the dual-basis construction for every independent family of at most
/// `dim` functionals on `F_3^dim` and checks every target is hit.
fn surjectivity_lemma_exhaustive(dim: usize) -> (bool, usize) {
    let nonzero: Vec<Vec<u8>> = all_vectors(dim).filter(|v| v.iter().any(|&x| x != 0)).collect();
    let mut families = 0;
    let mut ok = true;
    let mut stack: Vec<Vec<Vec<u8>>> = nonzero.iter().map(|v| vec![v.clone()]).collect();
    while let Some(fam) = stack.pop() {
        if rank(&fam) < fam.len() {
            continue;
        }
        families += 1;
        match dual_surjectivity(&fam, dim) {
            Ok(d) => {
                ok &= all_vectors(fam.len()).all(|t| evaluate(&fam, &d.preimage(&t)) == t);
            }
            Err(_) => ok = false,
        }
        if fam.len() < dim {
            for v in &nonzero {
                let mut next = fam.clone();
                next.push(v.clone());
                stack.push(next);
            }
        }
    }
    (ok, families)
}

fn lines_summary(conf: &LineConfiguration, lat: &PicLattice) -> LinesSummary {
    let name = |i: usize| lat.names[conf.labels[i]].clone();
    let mut flex_of = vec![0; conf.lifted.len()];
    for t in &conf.triples {
        for &i in &t.lines {
            flex_of[i] = t.flex;
        }
    }
    let mut order: Vec<usize> = (0..conf.lifted.len()).collect();
    order.sort_by_key(|&i| conf.labels[i]);
    let lines = order
        .iter()
        .map(|&i| LineSummary {
            name: name(i),
            reduction: show_vec(&conf.surface[i].reduction),
            cover_reduction: show_vec(&conf.lifted[i].reduction.plucker),
            flex: flex_of[i],
            residual_valuation: conf.lifted[i].residual_valuation,
            newton_iterations: conf.lifted[i].iterations,
        })
        .collect();
    let triples = conf
        .triples
        .iter()
        .map(|t| TripleSummary {
            lines: t.lines.iter().map(|&i| name(i)).collect(),
            flex: t.flex,
            plane: show_vec(&t.plane),
            coplanar: t.coplanar,
        })
        .collect();
    LinesSummary {
        residue_field_degree: conf.residue_field().k(),
        precision: conf.precision,
        cover_model: conf.model.to_string(),
        base_curve: conf.base_curve.to_string(),
        flexes: conf.flexes.iter().map(|p| show_vec(&p.coords)).collect(),
        lines,
        triples,
        sigma: order.iter().map(|&i| name(conf.sigma[i])).collect(),
    }
}
