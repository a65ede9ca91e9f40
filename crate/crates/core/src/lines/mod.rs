//! The 27 lines of a cubic surface whose reduction is a cone over a smooth
//! plane cubic.
//!
//! Starting from a cone normal form `f + p^s g` with `a = g(0,0,0,1)` a unit and
//! `s` in `{1, 2}`, the substitution `X_i -> Π^s X_i` (`i <= 2`) over the
//! extension `Π^3 = p` gives a model `Y` with smooth reduction
//! `f + a X3^3`. Its lines are written down over a finite field, lifted by
//! Newton iteration, and carried back to the original coordinates.

mod config;
mod hensel;
pub mod plucker;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::rational::{residue_mod_p, signed_parts};
use crate::arith::{
    embed_element, field_embedding, linalg, roots, teichmuller_lift, ArithError, EisensteinElement, EisensteinRing,
    Field, FieldElement, GaloisField, HomogeneousForm, Monomial, PolyRing, Ring,
};
use crate::curve::{self, CurveError, CurvePoint, PlaneCubic};
use crate::model::{good_plane_section, ConeNormalForm, ModelError};

pub use config::{identify_configuration, incidence_matrix};
pub use hensel::hensel_lift_line;
use plucker::{normalize_eisenstein, normalize_field, pairing, plane_through};

/// Default Π-adic precision.
pub const DEFAULT_PRECISION: u32 = 24;
/// Largest residue degree used for the common field of definition.
pub const MAX_RESIDUE_DEGREE: u32 = 36;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinesError {
    #[error("a = g(0,0,0,1) is not a p-adic unit")]
    UnitConditionViolated,
    #[error("s = {0} is divisible by 3; reduce it first")]
    SDivisibleByThree(u32),
    #[error("s = {0} is outside the supported range {{1, 2}}")]
    SOutOfRange(u32),
    #[error("the base curve is singular")]
    CurveSingular,
    #[error("the lines are not defined over an extension of degree <= {0}")]
    NoCommonField(u32),
    #[error("Newton iteration for line {line} met a singular Jacobian")]
    JacobianSingular { line: usize },
    #[error("line {line} did not converge to precision {target} (reached {reached})")]
    PrecisionExhausted { line: usize, target: u32, reached: u32 },
    #[error("expected 9 groups of 3 lines, found sizes {0:?}")]
    GroupingFailure(Vec<usize>),
    #[error("triple {0} is not coplanar to the working precision")]
    NotCoplanar(usize),
    #[error("the image of line {0} under the Galois action is not among the computed lines")]
    ActionMismatch(usize),
    #[error("the incidence graph is not the 27-line configuration")]
    NoIsomorphism,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// A line over a finite field, spanned by two rows.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueLine {
    pub rows: [Vec<FieldElement>; 2],
    /// Normalized Plücker coordinates.
    pub plucker: Vec<FieldElement>,
    /// Degree over `F_p` of the field generated by the Plücker coordinates.
    pub degree: u32,
    /// Index of the flex of the base curve that the line passes over.
    pub flex: usize,
}

impl ResidueLine {
    fn new(field: &GaloisField, r1: Vec<FieldElement>, r2: Vec<FieldElement>, flex: usize) -> Self {
        let pl = normalize_field(field, &plucker::plucker(field, &r1, &r2));
        let degree = pl.iter().map(|c| field.element_degree(c)).fold(1, num_integer::lcm);
        ResidueLine {
            rows: [r1, r2],
            plucker: pl,
            degree,
            flex,
        }
    }
}

/// The 27 lines of `f + a X3^3 = 0` over a field containing them and the
/// cube roots of unity.
#[derive(Clone, Debug)]
pub struct TripleCoverLines {
    pub field: GaloisField,
    /// Flexes of the base curve, in the order used by [`ResidueLine::flex`].
    pub flexes: Vec<CurvePoint>,
    /// Three lines per flex, consecutive.
    pub lines: Vec<ResidueLine>,
}

/// `Σ c_m Π^e_m X^m`: the model obtained from `F` by `X_i -> Π^s X_i`
/// (`i <= 2`) followed by division by `Π^{3s}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothCoverModel {
    pub p: u64,
    pub s: u32,
    pub terms: Vec<(Monomial, BigRational, u32)>,
}

impl SmoothCoverModel {
    pub fn over(&self, ring: &EisensteinRing) -> Result<HomogeneousForm<EisensteinElement>, ArithError> {
        let mut out = HomogeneousForm::zero(4, 3);
        for (m, c, e) in &self.terms {
            let x = ring.mul_pi_power(&ring.from_rational(c)?, *e);
            out.add_term(ring, *m, x);
        }
        Ok(out)
    }

    /// The reduction `f + a X3^3` over `F_p`.
    pub fn reduction(&self) -> HomogeneousForm<FieldElement> {
        let field = GaloisField::prime(self.p).expect("validated prime");
        let terms = self
            .terms
            .iter()
            .filter(|(_, _, e)| *e == 0)
            .map(|(m, c, _)| (*m, field.embed_prime(residue_mod_p(c, self.p).expect("integral"))));
        HomogeneousForm::from_terms(&field, 4, 3, terms)
    }
}

impl std::fmt::Display for SmoothCoverModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut by_power: std::collections::BTreeMap<u32, Vec<(Monomial, BigRational)>> = Default::default();
        for (m, c, e) in &self.terms {
            by_power.entry(*e).or_default().push((*m, c.clone()));
        }
        let parts: Vec<String> = by_power
            .into_iter()
            .map(|(e, terms)| {
                let form = HomogeneousForm::from_terms(&crate::arith::Rationals, 4, 3, terms);
                let body = form.to_string_with(signed_parts);
                match e {
                    0 => body,
                    1 => format!("Π*({body})"),
                    _ => format!("Π^{e}*({body})"),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

pub fn construct_smooth_cover_model(nf: &ConeNormalForm) -> Result<SmoothCoverModel, LinesError> {
    if !nf.a_is_unit() {
        return Err(LinesError::UnitConditionViolated);
    }
    match nf.s {
        1 | 2 => {}
        s if s % 3 == 0 => return Err(LinesError::SDivisibleByThree(s)),
        s => return Err(LinesError::SOutOfRange(s)),
    }
    let s = nf.s;
    // f(Π^s X) / Π^{3s} = f(X); p^s c X^m with X3-degree j becomes c Π^{s(3-j)} X^m
    let mut terms: Vec<(Monomial, BigRational, u32)> = nf.f.terms().iter().map(|(m, c)| (*m, c.clone(), 0)).collect();
    terms.extend(nf.g.terms().iter().map(|(m, c)| (*m, c.clone(), s * (3 - m[3] as u32))));
    terms.sort_by_key(|a| (a.2, a.0));
    Ok(SmoothCoverModel { p: nf.p, s, terms })
}

fn tangent_and_second_point(
    field: &GaloisField,
    f: &HomogeneousForm<FieldElement>,
    pt: &CurvePoint,
) -> Vec<FieldElement> {
    let grad: Vec<FieldElement> = (0..3).map(|i| f.partial(field, i).eval(field, &pt.coords)).collect();
    let basis = linalg::nullspace(field, &[grad], 3);
    basis
        .into_iter()
        .find(|q| linalg::rank(field, &[pt.coords.to_vec(), q.clone()]) == 2)
        .expect("the tangent line contains a second point")
}

/// For each flex `P` with tangent line through a second point `Q`, the lines
/// are spanned by `(P, 0)` and `(Q, μ)` with `μ^3 = -f(Q)/a`.
fn lines_over(
    field: &GaloisField,
    curve: &PlaneCubic,
    abar: &FieldElement,
    flexes: &[CurvePoint],
) -> Option<Vec<ResidueLine>> {
    let f = curve.form_over(field);
    let pr = PolyRing::new(field);
    let minus_inv_a = field.neg(&field.inv(abar)?);
    let mut out = Vec::with_capacity(27);
    for (k, pt) in flexes.iter().enumerate() {
        let q = tangent_and_second_point(field, &f, pt);
        let b = field.mul(&f.eval(field, &q), &minus_inv_a);
        let cubic = pr.from_coeffs(vec![field.neg(&b), field.zero(), field.zero(), field.one()]);
        let mus = roots(field, &cubic);
        if mus.len() != 3 {
            return None;
        }
        for mu in mus {
            let r1 = vec![
                pt.coords[0].clone(),
                pt.coords[1].clone(),
                pt.coords[2].clone(),
                field.zero(),
            ];
            let r2 = vec![q[0].clone(), q[1].clone(), q[2].clone(), mu];
            out.push(ResidueLine::new(field, r1, r2, k));
        }
    }
    Some(out)
}

/// The 27 lines of `f + a X3^3` over the smallest field `F_{p^D}` that
/// contains the flexes, the cube roots of unity and all the `μ`.
pub fn lines_on_triple_cover(curve: &PlaneCubic, abar: &FieldElement) -> Result<TripleCoverLines, LinesError> {
    if !curve::is_smooth(curve).is_smooth() {
        return Err(LinesError::CurveSingular);
    }
    if curve.field().is_zero(abar) {
        return Err(LinesError::UnitConditionViolated);
    }
    let p = curve.p();
    let d = curve::flexes(curve)?.field_degree();
    for m in [1, 2, 3, 6] {
        let deg = d * m;
        if deg > MAX_RESIDUE_DEGREE {
            break;
        }
        let q_mod_3 = (0..deg).fold(1u64, |acc, _| acc * (p % 3) % 3);
        if q_mod_3 != 1 {
            continue;
        }
        let field = GaloisField::new(p, deg)?;
        let flexes = curve::flexes_over(curve, &field)?;
        let a = field.embed_prime(abar.constant());
        if let Some(lines) = lines_over(&field, curve, &a, &flexes) {
            return Ok(TripleCoverLines { field, flexes, lines });
        }
    }
    Err(LinesError::NoCommonField(MAX_RESIDUE_DEGREE))
}

/// A line on the smooth model over the Eisenstein ring, with its image in
/// the original coordinates.
#[derive(Clone, Debug)]
pub struct LiftedLine {
    /// Spanning rows on the smooth model, in the Newton chart.
    pub rows: [Vec<EisensteinElement>; 2],
    pub plucker: Vec<EisensteinElement>,
    pub reduction: ResidueLine,
    /// Columns of the 2x2 identity block of the chart.
    pub chart: (usize, usize),
    pub iterations: u32,
    /// Valuation of the substitution residual (at least the target precision).
    pub residual_valuation: u32,
}

/// The same line in the original coordinates `X_i = Π^s Y_i` (`i <= 2`).
#[derive(Clone, Debug)]
pub struct SurfaceLine {
    pub rows: [Vec<EisensteinElement>; 2],
    pub plucker: Vec<EisensteinElement>,
    /// Normalized Plücker coordinates modulo `Π`.
    pub reduction: Vec<FieldElement>,
}

pub fn pull_back_lines(ring: &EisensteinRing, lines: &[LiftedLine], s: u32) -> Result<Vec<SurfaceLine>, LinesError> {
    lines
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let rows: [Vec<EisensteinElement>; 2] = std::array::from_fn(|r| {
                (0..4)
                    .map(|j| {
                        if j < 3 {
                            ring.mul_pi_power(&l.rows[r][j], s)
                        } else {
                            l.rows[r][j].clone()
                        }
                    })
                    .collect()
            });
            let raw = plucker::plucker(ring, &rows[0], &rows[1]);
            let pl = normalize_eisenstein(ring, &raw).ok_or(LinesError::PrecisionExhausted {
                line: i,
                target: ring.working_precision(),
                reached: 0,
            })?;
            let reduction = pl.iter().map(|x| ring.residue(x)).collect();
            Ok(SurfaceLine {
                rows,
                plucker: pl,
                reduction,
            })
        })
        .collect()
}

/// Three lines with a common reduction, lying in one plane.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineTriple {
    pub lines: [usize; 3],
    pub flex: usize,
    /// Normalized Plücker coordinates of the common reduction.
    pub reduced_line: Vec<FieldElement>,
    /// The reduced line joins the vertex `(0:0:0:1)` to `(flex : 0)`.
    pub through_vertex_and_flex: bool,
    /// Residues of the normalized coefficients of the plane containing the
    /// three lines, in the original coordinates.
    pub plane: Vec<FieldElement>,
    pub coplanar: bool,
}

/// Partition by common reduction in the original coordinates.
pub fn group_into_triples(
    ring: &EisensteinRing,
    lifted: &[LiftedLine],
    surface: &[SurfaceLine],
    flexes: &[CurvePoint],
    s: u32,
) -> Result<Vec<LineTriple>, LinesError> {
    let field = ring.residue_field();
    let mut groups: Vec<(Vec<FieldElement>, Vec<usize>)> = Vec::new();
    for (i, l) in surface.iter().enumerate() {
        match groups.iter_mut().find(|(r, _)| *r == l.reduction) {
            Some((_, members)) => members.push(i),
            None => groups.push((l.reduction.clone(), vec![i])),
        }
    }
    let sizes: Vec<usize> = groups.iter().map(|(_, m)| m.len()).collect();
    if groups.len() != 9 || sizes.iter().any(|&n| n != 3) {
        return Err(LinesError::GroupingFailure(sizes));
    }
    let half = ring.working_precision() / 2;
    groups
        .into_iter()
        .enumerate()
        .map(|(t, (reduced, members))| {
            let flex = lifted[members[0]].reduction.flex;
            let pt = &flexes[flex];
            let expected = normalize_field(
                field,
                &plucker::plucker(
                    field,
                    &[
                        pt.coords[0].clone(),
                        pt.coords[1].clone(),
                        pt.coords[2].clone(),
                        field.zero(),
                    ],
                    &[field.zero(), field.zero(), field.zero(), field.one()],
                ),
            );
            let through = expected == reduced && members.iter().all(|&m| lifted[m].reduction.flex == flex);
            let plane = triple_plane(ring, lifted, &members, s).ok_or(LinesError::NotCoplanar(t))?;
            let coplanar = members.iter().all(|&m| {
                surface[m]
                    .rows
                    .iter()
                    .all(|r| ring.valuation(&plucker::dot(ring, &plane, r)) >= half)
            });
            Ok(LineTriple {
                lines: [members[0], members[1], members[2]],
                flex,
                reduced_line: reduced,
                through_vertex_and_flex: through,
                plane: plane.iter().map(|x| ring.residue(x)).collect(),
                coplanar,
            })
        })
        .collect()
}

/// The plane through the first line and one row of the second, on the
/// smooth model, moved to the original coordinates and normalized.
fn triple_plane(
    ring: &EisensteinRing,
    lifted: &[LiftedLine],
    members: &[usize],
    s: u32,
) -> Option<Vec<EisensteinElement>> {
    let a = &lifted[members[0]].rows;
    let b = &lifted[members[1]].rows;
    let candidates = [
        plane_through(ring, &a[0], &a[1], &b[0]),
        plane_through(ring, &a[0], &a[1], &b[1]),
    ];
    let best = candidates
        .into_iter()
        .filter_map(|h| normalize_eisenstein(ring, &h))
        .min_by_key(|h| h.iter().map(|x| ring.valuation(x)).min().unwrap_or(u32::MAX))?;
    // h(Y) = 0 with Y_i = X_i / Π^s (i <= 2) becomes (h0, h1, h2, Π^s h3)(X) = 0
    let moved: Vec<EisensteinElement> = (0..4)
        .map(|j| {
            if j < 3 {
                best[j].clone()
            } else {
                ring.mul_pi_power(&best[3], s)
            }
        })
        .collect();
    normalize_eisenstein(ring, &moved)
}

/// The automorphism `Π -> ω Π` on lines, read off from reductions on the
/// smooth model: it acts there as `Y3 -> ω^{-s} Y3`.
pub fn sigma_action(
    lines: &[LiftedLine],
    omega: &FieldElement,
    field: &GaloisField,
    s: u32,
) -> Result<Vec<usize>, LinesError> {
    let w = field.pow(&field.inv(omega).expect("ω is a unit"), s as u64);
    let reductions: Vec<&Vec<FieldElement>> = lines.iter().map(|l| &l.reduction.plucker).collect();
    lines
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let moved: [Vec<FieldElement>; 2] = std::array::from_fn(|r| {
                let mut row = l.reduction.rows[r].clone();
                row[3] = field.mul(&row[3], &w);
                row
            });
            let pl = normalize_field(field, &plucker::plucker(field, &moved[0], &moved[1]));
            reductions
                .iter()
                .position(|r| **r == pl)
                .ok_or(LinesError::ActionMismatch(i))
        })
        .collect()
}

/// The same permutation computed by conjugating the Π-adic Plücker
/// coordinates of the lines in the original coordinates.
pub fn sigma_action_exact(
    ring: &EisensteinRing,
    lines: &[SurfaceLine],
    omega: &crate::arith::UnramifiedInteger,
) -> Result<Vec<usize>, LinesError> {
    let half = ring.working_precision() / 2;
    lines
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let conj: Vec<EisensteinElement> = l.plucker.iter().map(|x| ring.conjugate(x, omega)).collect();
            let conj = normalize_eisenstein(ring, &conj).ok_or(LinesError::ActionMismatch(i))?;
            lines
                .iter()
                .position(|m| {
                    m.plucker
                        .iter()
                        .zip(&conj)
                        .all(|(a, b)| ring.valuation(&ring.sub(a, b)) >= half)
                })
                .ok_or(LinesError::ActionMismatch(i))
        })
        .collect()
}

/// Everything computed about the lines of one surface.
#[derive(Clone, Debug)]
pub struct LineConfiguration {
    pub p: u64,
    pub s: u32,
    pub precision: u32,
    pub model: SmoothCoverModel,
    pub ring: EisensteinRing,
    pub base_curve: PlaneCubic,
    pub flexes: Vec<CurvePoint>,
    /// Primitive cube root of unity in the residue field; its Teichmüller lift
    /// defines the automorphism `Π -> ω Π`.
    pub omega: FieldElement,
    pub lifted: Vec<LiftedLine>,
    pub surface: Vec<SurfaceLine>,
    pub triples: Vec<LineTriple>,
    pub sigma: Vec<usize>,
    pub incidence: Vec<Vec<bool>>,
    /// `labels[i]` is the index in the abstract configuration of line `i`.
    pub labels: Vec<usize>,
}

impl LineConfiguration {
    pub fn residue_field(&self) -> &GaloisField {
        self.ring.residue_field()
    }

    /// The σ-permutation transported to the abstract line indices.
    pub fn abstract_sigma(&self) -> Vec<usize> {
        let mut perm = vec![0; self.labels.len()];
        for (i, &j) in self.sigma.iter().enumerate() {
            perm[self.labels[i]] = self.labels[j];
        }
        perm
    }
}

/// Runs the whole construction for a cone normal form.
pub fn compute_line_configuration(nf: &ConeNormalForm, precision: u32) -> Result<LineConfiguration, LinesError> {
    let model = construct_smooth_cover_model(nf)?;
    let s = nf.s;
    let base_curve = good_plane_section(nf)?;
    let abar = base_curve
        .field()
        .embed_prime(residue_mod_p(&nf.a, nf.p).expect("a is integral"));
    let cover = lines_on_triple_cover(&base_curve, &abar)?;
    let field = cover.field.clone();
    let ring = EisensteinRing::new(field.clone(), precision)?;
    let form = model.over(&ring)?;
    let lifted = cover
        .lines
        .iter()
        .enumerate()
        .map(|(i, l)| hensel_lift_line(&ring, &form, l, precision).map_err(|e| e.for_line(i)))
        .collect::<Result<Vec<_>, _>>()?;
    let surface = pull_back_lines(&ring, &lifted, s)?;
    let triples = group_into_triples(&ring, &lifted, &surface, &cover.flexes, s)?;
    let omega = crate::arith::cube_roots_of_unity(&field)
        .into_iter()
        .next()
        .expect("the residue field contains the cube roots of unity");
    let sigma = sigma_action(&lifted, &omega, &field, s)?;
    let incidence = incidence_matrix(&ring, &lifted);
    let labels = identify_configuration(&incidence)?;
    Ok(LineConfiguration {
        p: nf.p,
        s,
        precision,
        model,
        ring,
        base_curve,
        flexes: cover.flexes,
        omega,
        lifted,
        surface,
        triples,
        sigma,
        incidence,
        labels,
    })
}

/// The Teichmüller lift of `ω` in the base of the Eisenstein ring.
pub fn omega_lift(ring: &EisensteinRing, omega: &FieldElement) -> crate::arith::UnramifiedInteger {
    teichmuller_lift(ring.base(), omega)
}

/// Maps points of a smaller field into `big` (used to compare flexes).
pub fn embed_point(small: &GaloisField, big: &GaloisField, pt: &CurvePoint) -> Option<CurvePoint> {
    let t = field_embedding(small, big)?;
    let coords: Vec<FieldElement> = pt.coords.iter().map(|c| embed_element(c, &t, big)).collect();
    CurvePoint::normalize(big, &coords)
}

/// Residual valuation of `form` on the line spanned by two rows.
pub fn residual_valuation(
    ring: &EisensteinRing,
    form: &HomogeneousForm<EisensteinElement>,
    rows: &[Vec<EisensteinElement>; 2],
) -> u32 {
    form.binary_restriction(ring, &rows[0], &rows[1])
        .iter()
        .map(|c| ring.valuation(c))
        .min()
        .unwrap()
}

/// Whether two lines on the smooth model meet, to half the working precision.
pub fn lines_meet(ring: &EisensteinRing, a: &LiftedLine, b: &LiftedLine) -> bool {
    ring.valuation(&pairing(ring, &a.plucker, &b.plucker)) >= ring.working_precision() / 2
}
