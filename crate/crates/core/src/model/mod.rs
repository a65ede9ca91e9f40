//! Integral models of cubic surfaces at a prime and the classification of
//! their special fibres.
//!
//! A surface is given by a quaternary cubic form with rational coefficients.
//! [`normalize_flat`] rescales it by a power of `p` so that all coefficients
//! are `p`-integral and at least one is a unit. When the reduction is a cone
//! over a smooth plane cubic, [`cone_normal_form`] moves the vertex to
//! `(0:0:0:1)` and splits the form as `f(X0,X1,X2) + p^s g(X0,...,X3)`.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::groebner::forms_have_no_common_zero;
use crate::arith::rational::{p_power, residue_mod_p, valuation};
use crate::arith::{
    check_prime, linalg, ArithError, FieldElement, GaloisField, HomogeneousForm, Monomial, Rationals, Ring,
    UnramifiedRing,
};
use crate::curve::{self, CurveError, PlaneCubic};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("the zero form does not define a surface")]
    ZeroForm,
    #[error("expected a homogeneous cubic in 4 variables")]
    NotQuaternaryCubic,
    #[error("special fibre is not a cone over a smooth cubic curve ({0})")]
    NotACone(String),
    #[error("the form does not involve the vertex coordinate: it is a cone over the rationals")]
    DegenerateCone,
    #[error("a = g(0,0,0,1) is not a p-adic unit")]
    UnitConditionViolated,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// A quaternary cubic with `p`-integral coefficients, not all divisible by `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicSurfaceModel {
    pub p: u64,
    pub form: HomogeneousForm<BigRational>,
    /// The normalized form equals `p^scale` times the input.
    pub scale: i64,
}

impl CubicSurfaceModel {
    /// The special fibre as a form over `F_p`.
    pub fn reduction(&self) -> HomogeneousForm<FieldElement> {
        reduce_mod_p(&self.form, &GaloisField::prime(self.p).expect("validated prime"))
    }
}

/// Reduces a `p`-integral rational form modulo `p`.
pub fn reduce_mod_p(form: &HomogeneousForm<BigRational>, field: &GaloisField) -> HomogeneousForm<FieldElement> {
    let p = field.p();
    form.map_into(field, |c| {
        field.embed_prime(residue_mod_p(c, p).expect("coefficient is p-integral"))
    })
}

pub fn normalize_flat(form: &HomogeneousForm<BigRational>, p: u64) -> Result<CubicSurfaceModel, ModelError> {
    check_prime(p)?;
    if form.nvars() != 4 || form.degree() != 3 {
        return Err(ModelError::NotQuaternaryCubic);
    }
    let v = form
        .terms()
        .values()
        .filter_map(|c| valuation(c, p))
        .min()
        .ok_or(ModelError::ZeroForm)?;
    let factor = p_power(p, -v);
    Ok(CubicSurfaceModel {
        p,
        form: form.scale(&Rationals, &factor),
        scale: -v,
    })
}

/// Type of the special fibre, with the data certifying it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum ReductionType {
    /// The partials of the reduction have no common zero over the algebraic
    /// closure (Gröbner certificate).
    Smooth,
    /// The reduction depends on exactly three linear forms, and the plane
    /// cubic they define is smooth.
    ConeOverSmoothCubic {
        vertex: [u64; 4],
        base_curve: String,
    },
    /// The reduction is a squarefree binary cubic in two linear forms: three
    /// distinct planes through a common line.
    ThreePlanes {
        /// The binary cubic split over `F_p`, as `(factor, multiplicity)`.
        binary_factors: Vec<(Vec<u64>, u32)>,
    },
    /// The reduction is a constant times the cube of a linear form.
    TriplePlane {
        plane: [u64; 4],
    },
    OtherSingular {
        reason: String,
    },
}

impl ReductionType {
    pub fn name(&self) -> &'static str {
        match self {
            ReductionType::Smooth => "Smooth",
            ReductionType::ConeOverSmoothCubic { .. } => "ConeOverSmoothCubic",
            ReductionType::ThreePlanes { .. } => "ThreePlanes",
            ReductionType::TriplePlane { .. } => "TriplePlane",
            ReductionType::OtherSingular { .. } => "OtherSingular",
        }
    }
}

/// Directions `v` with `sum_i v_i dF/dx_i = 0`: the form is unchanged by
/// translation along `v`, so it depends only on `4 - dim` linear forms.
fn vertex_space(field: &GaloisField, fbar: &HomogeneousForm<FieldElement>) -> Vec<Vec<FieldElement>> {
    let partials: Vec<_> = (0..4).map(|i| fbar.partial(field, i)).collect();
    let rows: Vec<Vec<FieldElement>> = crate::arith::form::monomials(4, 2)
        .iter()
        .map(|m| partials.iter().map(|d| d.coeff_or_zero(field, m)).collect())
        .collect();
    linalg::nullspace(field, &rows, 4)
}

/// Integer representatives in `[0, p)`.
fn residues(v: &[FieldElement]) -> Vec<u64> {
    v.iter().map(|c| c.constant()).collect()
}

/// Scales a vector over `F_p` so that its first nonzero entry is 1.
fn normalized(field: &GaloisField, v: &[FieldElement]) -> Vec<FieldElement> {
    use crate::arith::Field;
    let lead = v.iter().find(|c| !field.is_zero(c)).expect("nonzero vector");
    let inv = field.inv(lead).unwrap();
    v.iter().map(|c| field.mul(c, &inv)).collect()
}

/// Columns `e_j` (`j != i`, increasing) followed by `v`; unimodular when `v_i = 1`.
fn completion_matrix(v: &[i64; 4], i: usize) -> Vec<Vec<i64>> {
    let mut cols: Vec<[i64; 4]> = (0..4)
        .filter(|&j| j != i)
        .map(|j| {
            let mut e = [0; 4];
            e[j] = 1;
            e
        })
        .collect();
    cols.push(*v);
    (0..4).map(|r| cols.iter().map(|c| c[r]).collect()).collect()
}

fn to_field_matrix(field: &GaloisField, t: &[Vec<i64>]) -> Vec<Vec<FieldElement>> {
    t.iter()
        .map(|r| r.iter().map(|&x| field.from_int(x)).collect())
        .collect()
}

fn to_rational_matrix(t: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    t.iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect()
}

/// The ternary form obtained by dropping the (absent) last variable.
fn ternary_part(field: &GaloisField, f: &HomogeneousForm<FieldElement>) -> Result<PlaneCubic, CurveError> {
    let terms = f
        .terms()
        .iter()
        .filter(|(m, _)| m[3] == 0)
        .map(|(m, c)| (*m, c.clone()));
    PlaneCubic::new(field.clone(), HomogeneousForm::from_terms(field, 3, 3, terms))
}

pub fn classify_reduction(model: &CubicSurfaceModel) -> ReductionType {
    let field = GaloisField::prime(model.p).expect("validated prime");
    let fbar = model.reduction();
    let kernel = vertex_space(&field, &fbar);
    match kernel.len() {
        0 => {
            let partials: Vec<_> = (0..4).map(|i| fbar.partial(&field, i)).collect();
            if forms_have_no_common_zero(&field, &partials) {
                ReductionType::Smooth
            } else {
                ReductionType::OtherSingular {
                    reason: "the partial derivatives have a common zero".into(),
                }
            }
        }
        1 => {
            let v = normalized(&field, &kernel[0]);
            let i = v.iter().position(|c| field.is_one(c)).unwrap();
            let vi: Vec<u64> = residues(&v);
            let vertex = [vi[0], vi[1], vi[2], vi[3]];
            let t = completion_matrix(&vertex.map(|x| x as i64), i);
            let moved = fbar.substitute(&field, &to_field_matrix(&field, &t));
            match ternary_part(&field, &moved) {
                Ok(c) if curve::is_smooth(&c).is_smooth() => ReductionType::ConeOverSmoothCubic {
                    vertex,
                    base_curve: c.to_string(),
                },
                _ => ReductionType::OtherSingular {
                    reason: format!("cone with vertex {vertex:?} over a singular plane cubic"),
                },
            }
        }
        2 => three_planes_or_other(&field, &fbar, &kernel),
        _ => {
            // rank one: the cube of a linear form; the plane is read off a nonzero
            // first partial, which is proportional to the square of that form
            let plane = triple_plane(&field, &fbar);
            ReductionType::TriplePlane { plane }
        }
    }
}

fn three_planes_or_other(
    field: &GaloisField,
    fbar: &HomogeneousForm<FieldElement>,
    kernel: &[Vec<FieldElement>],
) -> ReductionType {
    use crate::arith::{ff_factor, PolyRing};
    // complete the kernel to a basis; the last two basis vectors span the vertex line
    let mut basis: Vec<Vec<FieldElement>> = Vec::new();
    for j in 0..4 {
        let mut e = vec![field.zero(); 4];
        e[j] = field.one();
        let mut trial = basis.clone();
        trial.extend(kernel.iter().cloned());
        trial.push(e.clone());
        if linalg::rank(field, &trial) == basis.len() + kernel.len() + 1 {
            basis.push(e);
        }
        if basis.len() == 2 {
            break;
        }
    }
    let binary = fbar.binary_restriction(field, &basis[0], &basis[1]);
    // coefficient of u^(3-i) v^i, as a polynomial in t = v/u (plus a root at infinity
    // when the u^3-degree drops)
    let poly = PolyRing::new(field).from_coeffs(binary.clone());
    let at_infinity = 3 - poly.degree().expect("nonzero binary cubic") as u32;
    let fac = ff_factor(field, &poly).expect("nonzero binary cubic");
    let mut binary_factors: Vec<(Vec<u64>, u32)> = fac.factors.iter().map(|(q, e)| (residues(&q.coeffs), *e)).collect();
    if at_infinity > 0 {
        binary_factors.push((vec![1, 0], at_infinity));
    }
    let squarefree = at_infinity <= 1 && fac.factors.iter().all(|(_, e)| *e == 1);
    if squarefree {
        ReductionType::ThreePlanes { binary_factors }
    } else {
        ReductionType::OtherSingular {
            reason: "the reduction is a double plane together with another plane".into(),
        }
    }
}

fn triple_plane(field: &GaloisField, fbar: &HomogeneousForm<FieldElement>) -> [u64; 4] {
    // if F = c L^3 then grad F = 3 c L^2 (l_0, ..., l_3); evaluate at a point off
    // the plane to read the coefficients of L
    for probe in 0..4 {
        let mut pt = vec![field.zero(); 4];
        pt[probe] = field.one();
        let grad: Vec<FieldElement> = (0..4).map(|i| fbar.partial(field, i).eval(field, &pt)).collect();
        if grad.iter().any(|c| !field.is_zero(c)) {
            let l = residues(&normalized(field, &grad));
            return [l[0], l[1], l[2], l[3]];
        }
    }
    unreachable!("a nonzero cube of a linear form is nonzero at some unit vector")
}

/// `F(T x) = f(x0, x1, x2) + p^s g(x0, ..., x3)` with the vertex of the
/// reduction at `(0:0:0:1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeNormalForm {
    pub p: u64,
    /// The part of `F(T x)` free of `x3`; its reduction is a smooth plane cubic.
    pub f: HomogeneousForm<BigRational>,
    /// Every monomial involves `x3`, and some coefficient is a `p`-unit.
    pub g: HomogeneousForm<BigRational>,
    pub s: u32,
    /// `g(0, 0, 0, 1)`.
    pub a: BigRational,
    /// Columns are the images of the coordinate vectors.
    pub transform: Vec<Vec<i64>>,
    /// Total power of `p` divided out by [`reduce_s`] steps.
    pub reductions: u32,
}

impl ConeNormalForm {
    pub fn a_is_unit(&self) -> bool {
        valuation(&self.a, self.p) == Some(0)
    }

    /// `f + p^s g`.
    pub fn form(&self) -> HomogeneousForm<BigRational> {
        self.f
            .add(&Rationals, &self.g.scale(&Rationals, &p_power(self.p, self.s as i64)))
    }
}

pub fn cone_normal_form(model: &CubicSurfaceModel) -> Result<ConeNormalForm, ModelError> {
    let reduction = classify_reduction(model);
    let ReductionType::ConeOverSmoothCubic { vertex, .. } = reduction else {
        return Err(ModelError::NotACone(reduction.name().into()));
    };
    let i = vertex.iter().position(|&x| x == 1).expect("normalized vertex");
    let transform = completion_matrix(&vertex.map(|x| x as i64), i);
    let moved = model.form.substitute(&Rationals, &to_rational_matrix(&transform));
    split_cone(model.p, &moved, transform, 0)
}

fn split_cone(
    p: u64,
    moved: &HomogeneousForm<BigRational>,
    transform: Vec<Vec<i64>>,
    reductions: u32,
) -> Result<ConeNormalForm, ModelError> {
    let (with_x3, without): (Vec<_>, Vec<_>) = moved.terms().iter().partition(|(m, _)| m[3] > 0);
    let s = with_x3
        .iter()
        .filter_map(|(_, c)| valuation(c, p))
        .min()
        .ok_or(ModelError::DegenerateCone)?;
    if s <= 0 {
        return Err(ModelError::Precondition(
            "the vertex coordinate survives in the reduction".into(),
        ));
    }
    let scale = p_power(p, -s);
    let f = HomogeneousForm::from_terms(&Rationals, 4, 3, without.into_iter().map(|(m, c)| (*m, c.clone())));
    let g = HomogeneousForm::from_terms(&Rationals, 4, 3, with_x3.into_iter().map(|(m, c)| (*m, c * &scale)));
    let a = g.coeff_or_zero(&Rationals, &[0, 0, 0, 3]);
    Ok(ConeNormalForm {
        p,
        f,
        g,
        s: s as u32,
        a,
        transform,
        reductions,
    })
}

/// Result of one step of [`reduce_s`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReduceOutcome {
    Cone(ConeNormalForm),
    /// `s` reached zero: the model `f + a x3^3 + p(...)` has smooth reduction.
    GoodReduction(CubicSurfaceModel),
}

/// Substitutes `x_i -> p x_i` for `i <= 2` and divides by `p^3`, lowering `s` by 3.
pub fn reduce_s(nf: &ConeNormalForm) -> Result<ReduceOutcome, ModelError> {
    if !nf.a_is_unit() {
        return Err(ModelError::UnitConditionViolated);
    }
    if nf.s < 3 {
        return Err(ModelError::Precondition(format!("reduce_s needs s >= 3, got {}", nf.s)));
    }
    let p = nf.p;
    let pr = BigRational::from_integer(p.into());
    let one = BigRational::one();
    let zero = BigRational::zero();
    let diag: Vec<Vec<BigRational>> = (0..4)
        .map(|i| {
            (0..4)
                .map(|j| match (i == j, i < 3) {
                    (true, true) => pr.clone(),
                    (true, false) => one.clone(),
                    _ => zero.clone(),
                })
                .collect()
        })
        .collect();
    let form = nf
        .form()
        .substitute(&Rationals, &diag)
        .scale(&Rationals, &p_power(p, -3));
    let mut transform = nf.transform.clone();
    for row in transform.iter_mut() {
        for x in row.iter_mut().take(3) {
            *x *= p as i64;
        }
    }
    if nf.s == 3 {
        let model = CubicSurfaceModel { p, form, scale: 0 };
        return match classify_reduction(&model) {
            ReductionType::Smooth => Ok(ReduceOutcome::GoodReduction(model)),
            other => Err(ModelError::Precondition(format!(
                "reduced model is not smooth ({})",
                other.name()
            ))),
        };
    }
    split_cone(p, &form, transform, nf.reductions + 3).map(ReduceOutcome::Cone)
}

/// Applies [`reduce_s`] while `s >= 3`.
pub fn reduce_s_fully(nf: &ConeNormalForm) -> Result<ReduceOutcome, ModelError> {
    let mut cur = nf.clone();
    loop {
        if cur.s < 3 {
            return Ok(ReduceOutcome::Cone(cur));
        }
        match reduce_s(&cur)? {
            ReduceOutcome::Cone(next) => cur = next,
            done => return Ok(done),
        }
    }
}

/// A plane `sum c_i x_i = 0` (in normal-form coordinates) is good when its
/// reduction misses the vertex `(0:0:0:1)`.
pub fn is_good_plane(plane: &[BigRational; 4], nf: &ConeNormalForm) -> Result<bool, ModelError> {
    let p = nf.p;
    let res: Vec<u64> = plane
        .iter()
        .map(|c| residue_mod_p(c, p).ok_or_else(|| ArithError::NotIntegral(c.to_string())))
        .collect::<Result<_, _>>()?;
    if res.iter().all(|&r| r == 0) {
        return Err(ModelError::Precondition("plane vanishes modulo p".into()));
    }
    Ok(res[3] != 0)
}

/// The reduction of the section `x3 = 0`, a smooth plane cubic over `F_p`.
pub fn good_plane_section(nf: &ConeNormalForm) -> Result<PlaneCubic, ModelError> {
    let field = GaloisField::prime(nf.p)?;
    let fbar = reduce_mod_p(&nf.f, &field);
    Ok(ternary_part(&field, &fbar)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NoLiftOutcome {
    /// No solution exists; `searched` residue classes were checked.
    Verified {
        searched: u64,
    },
    Counterexample {
        point: [u64; 4],
    },
}

/// Searches for `x` modulo `p^3` with `x0, x1, x2` divisible by `p`, `x3` a
/// unit, and `F(x) = 0 mod p^3`.
///
/// Scaling by a unit multiplies `F` by its cube, so the search fixes `x3 = 1`
/// without loss.
pub fn vertex_no_lift_check(nf: &ConeNormalForm) -> Result<NoLiftOutcome, ModelError> {
    if !(1..=2).contains(&nf.s) {
        return Err(ModelError::Precondition(format!(
            "vertex check needs s in {{1, 2}}, got {}",
            nf.s
        )));
    }
    if !nf.a_is_unit() {
        return Err(ModelError::UnitConditionViolated);
    }
    let p = nf.p;
    let ring = UnramifiedRing::new(GaloisField::prime(p)?, 3)?;
    let p3 = ring.pn();
    let terms: Vec<(Monomial, u64)> = nf
        .form()
        .terms()
        .iter()
        .map(|(m, c)| Ok((*m, ring.from_rational(c)?.0[0])))
        .collect::<Result<_, ArithError>>()?;
    let steps = p * p;
    let mut searched = 0u64;
    for t0 in 0..steps {
        for t1 in 0..steps {
            for t2 in 0..steps {
                let x = [t0 * p, t1 * p, t2 * p, 1];
                searched += 1;
                let mut acc: u128 = 0;
                for (m, c) in &terms {
                    let mut t = *c as u128;
                    for (xi, &e) in x.iter().zip(m.iter()) {
                        for _ in 0..e {
                            t = t * (*xi as u128) % p3 as u128;
                        }
                    }
                    acc = (acc + t) % p3 as u128;
                }
                if acc == 0 {
                    return Ok(NoLiftOutcome::Counterexample { point: x });
                }
            }
        }
    }
    Ok(NoLiftOutcome::Verified { searched })
}
