//! Plane cubic curves over finite fields.
//!
//! A [`PlaneCubic`] has coefficients in a prime field `F_p`; points, flexes and
//! the group law may live in any extension `F_{p^k}`, in which case the
//! coefficients are embedded as constants.

mod flex;
mod group;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::groebner::forms_have_no_common_zero;
use crate::arith::{FieldElement, FiniteField, GaloisField, HomogeneousForm, Ring};

pub use flex::{flexes, flexes_over, Flex, FlexData};
pub use group::{
    flex_difference_subgroup, group_structure, rational_points, three_torsion, CurveGroup, GroupLaw, ENUMERATION_CAP,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("expected a nonzero ternary cubic form")]
    NotATernaryCubic,
    #[error("curve coefficients must lie in the prime field")]
    NotOverPrimeField,
    #[error("curve is singular")]
    Singular,
    #[error("field of size {0} exceeds the enumeration cap")]
    EnumerationTooLarge(u128),
    #[error("flexes not all rational over F_{p}^{k}: residue degrees {missing:?}")]
    FlexesNotRational { p: u64, k: u32, missing: Vec<u32> },
    #[error("no flex field found up to degree {0}")]
    FlexFieldNotFound(u32),
    #[error("no rational point over F_{p}^{k}")]
    NoRationalPoint { p: u64, k: u32 },
    #[error("no good projection centre over the prime field")]
    NoProjectionCentre,
    #[error(transparent)]
    Arith(#[from] crate::arith::ArithError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneCubic {
    field: GaloisField,
    form: HomogeneousForm<FieldElement>,
}

/// Projective point with its first nonzero coordinate equal to one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CurvePoint {
    pub coords: [FieldElement; 3],
}

impl CurvePoint {
    /// Normalizes a nonzero vector; returns `None` for the zero vector.
    pub fn normalize(field: &GaloisField, v: &[FieldElement]) -> Option<Self> {
        use crate::arith::Field;
        let lead = v.iter().find(|c| !field.is_zero(c))?;
        let inv = field.inv(lead).unwrap();
        Some(CurvePoint {
            coords: std::array::from_fn(|i| field.mul(&v[i], &inv)),
        })
    }

    /// Residue degree: the degree of the field generated by the coordinates.
    pub fn degree(&self, field: &GaloisField) -> u32 {
        self.coords
            .iter()
            .map(|c| field.element_degree(c))
            .fold(1, num_integer::lcm)
    }
}

impl std::fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({} : {} : {})", self.coords[0], self.coords[1], self.coords[2])
    }
}

impl PlaneCubic {
    pub fn new(field: GaloisField, form: HomogeneousForm<FieldElement>) -> Result<Self, CurveError> {
        if form.nvars() != 3 || form.degree() != 3 || form.is_zero() {
            return Err(CurveError::NotATernaryCubic);
        }
        if field.k() != 1 || !form.terms().values().all(|c| c.is_prime_field_element()) {
            return Err(CurveError::NotOverPrimeField);
        }
        Ok(PlaneCubic { field, form })
    }

    /// Convenience constructor from integer coefficients.
    pub fn from_int_terms(p: u64, terms: &[([u8; 3], i64)]) -> Result<Self, CurveError> {
        let field = GaloisField::prime(p)?;
        let form = HomogeneousForm::from_terms(
            &field,
            3,
            3,
            terms.iter().map(|(m, c)| ([m[0], m[1], m[2], 0], field.from_int(*c))),
        );
        Self::new(field, form)
    }

    pub fn field(&self) -> &GaloisField {
        &self.field
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn form(&self) -> &HomogeneousForm<FieldElement> {
        &self.form
    }

    /// The defining form with coefficients embedded in `ext`.
    pub fn form_over(&self, ext: &GaloisField) -> HomogeneousForm<FieldElement> {
        assert_eq!(ext.p(), self.p());
        self.form.map(|c| ext.embed_prime(c.constant()))
    }

    pub fn contains(&self, ext: &GaloisField, pt: &CurvePoint) -> bool {
        ext.is_zero(&self.form_over(ext).eval(ext, &pt.coords))
    }

    /// Singular points over `F_{p^k}`, by exhaustive search.
    pub fn singular_points_over(&self, ext: &GaloisField) -> Result<Vec<CurvePoint>, CurveError> {
        let f = self.form_over(ext);
        let partials: Vec<_> = (0..3).map(|i| f.partial(ext, i)).collect();
        let pts = projective_points(ext, ENUMERATION_CAP)?;
        Ok(pts
            .into_iter()
            .filter(|pt| {
                ext.is_zero(&f.eval(ext, &pt.coords)) && partials.iter().all(|d| ext.is_zero(&d.eval(ext, &pt.coords)))
            })
            .collect())
    }
}

impl std::fmt::Display for PlaneCubic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.form.to_string_with(|c| (false, c.constant().to_string())))
    }
}

/// All points of `P^2(F_q)`, for `q^2 + q + 1` up to `cap`.
pub fn projective_points(field: &GaloisField, cap: u128) -> Result<Vec<CurvePoint>, CurveError> {
    let q = field.size().unwrap_or(u128::MAX);
    if q.saturating_mul(q) > cap {
        return Err(CurveError::EnumerationTooLarge(q));
    }
    let elems = field.elements();
    let (zero, one) = (field.zero(), field.one());
    let mut out = Vec::with_capacity((q * q + q + 1) as usize);
    for a in &elems {
        for b in &elems {
            out.push(CurvePoint {
                coords: [one.clone(), a.clone(), b.clone()],
            });
        }
    }
    for b in &elems {
        out.push(CurvePoint {
            coords: [zero.clone(), one.clone(), b.clone()],
        });
    }
    out.push(CurvePoint {
        coords: [zero.clone(), zero, one],
    });
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SmoothnessCertificate {
    /// The partial derivatives generate an ideal whose Gröbner basis contains a
    /// pure power of every variable, so they have no common projective zero.
    Smooth,
    /// Singular; a witness point is attached when one was found over a small field.
    Singular { witness: Option<(CurvePoint, u32)> },
}

impl SmoothnessCertificate {
    pub fn is_smooth(&self) -> bool {
        matches!(self, SmoothnessCertificate::Smooth)
    }
}

/// Smoothness over the algebraic closure. In characteristic `p >= 5` the
/// curve is contained in the common zeros of its partials (Euler's formula),
/// so it suffices to test that the partials have no common projective zero.
pub fn is_smooth(c: &PlaneCubic) -> SmoothnessCertificate {
    let partials: Vec<_> = (0..3).map(|i| c.form.partial(&c.field, i)).collect();
    if forms_have_no_common_zero(&c.field, &partials) {
        return SmoothnessCertificate::Smooth;
    }
    let mut witness = None;
    for k in 1..=4 {
        let Ok(ext) = GaloisField::new(c.p(), k) else { break };
        match c.singular_points_over(&ext) {
            Ok(pts) if !pts.is_empty() => {
                witness = Some((pts[0].clone(), k));
                break;
            }
            Ok(_) => {}
            Err(_) => break,
        }
    }
    SmoothnessCertificate::Singular { witness }
}

/// Determinant of the matrix of second partial derivatives, over any ring.
pub fn hessian_form<R: Ring>(ring: &R, f: &HomogeneousForm<R::Elem>) -> HomogeneousForm<R::Elem> {
    assert_eq!(f.nvars(), 3);
    let second: Vec<Vec<_>> = (0..3)
        .map(|i| {
            let fi = f.partial(ring, i);
            (0..3).map(|j| fi.partial(ring, j)).collect()
        })
        .collect();
    let minor = |a: usize, b: usize, c: usize, d: usize| {
        second[1][a]
            .mul(ring, &second[2][b])
            .sub(ring, &second[1][c].mul(ring, &second[2][d]))
    };
    let t0 = second[0][0].mul(ring, &minor(1, 2, 2, 1));
    let t1 = second[0][1].mul(ring, &minor(0, 2, 2, 0));
    let t2 = second[0][2].mul(ring, &minor(0, 1, 1, 0));
    t0.sub(ring, &t1).add(ring, &t2)
}

pub fn hessian(c: &PlaneCubic) -> HomogeneousForm<FieldElement> {
    hessian_form(&c.field, &c.form)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn fermat(p: u64) -> PlaneCubic {
        PlaneCubic::from_int_terms(p, &[([3, 0, 0], 1), ([0, 3, 0], 1), ([0, 0, 3], 1)]).unwrap()
    }

    #[test]
    fn smoothness_examples() {
        assert!(is_smooth(&fermat(5)).is_smooth());
        let c = PlaneCubic::from_int_terms(5, &[([3, 0, 0], 1), ([0, 3, 0], 1)]).unwrap();
        match is_smooth(&c) {
            SmoothnessCertificate::Singular { witness: Some((pt, 1)) } => {
                let f = c.field();
                assert_eq!(pt.coords, [f.zero(), f.zero(), f.one()]);
            }
            other => panic!("unexpected {other:?}"),
        }
        let xyz = PlaneCubic::from_int_terms(7, &[([1, 1, 1], 1)]).unwrap();
        assert!(!is_smooth(&xyz).is_smooth());
        assert_eq!(xyz.singular_points_over(xyz.field()).unwrap().len(), 3);
    }

    #[test]
    fn exhaustive_search_agrees_on_fermat() {
        // no singular point over F_{5^k}, k <= 2 (independent of the Gröbner certificate)
        let c = fermat(5);
        for k in 1..=2 {
            let ext = GaloisField::new(5, k).unwrap();
            assert!(c.singular_points_over(&ext).unwrap().is_empty());
        }
    }

    #[test]
    fn hessian_of_fermat_is_xyz() {
        let c = fermat(5);
        let h = hessian(&c);
        // 216 xyz, and 216 = 1 mod 5
        assert_eq!(h.terms().len(), 1);
        assert_eq!(h.coeff(&[1, 1, 1, 0]), Some(&c.field().one()));
        let cube = PlaneCubic::from_int_terms(5, &[([3, 0, 0], 1)]).unwrap();
        assert!(hessian(&cube).is_zero());
    }

    #[test]
    fn rejects_bad_forms() {
        let f5 = GaloisField::prime(5).unwrap();
        let quad = HomogeneousForm::from_terms(&f5, 3, 2, [([2, 0, 0, 0], f5.one())]);
        assert_eq!(PlaneCubic::new(f5, quad), Err(CurveError::NotATernaryCubic));
    }
}
