//! Flexes: the nine common zeros of a smooth cubic and its Hessian.
//!
//! After a change of coordinates over `F_p` putting a point off both curves at
//! `(1:0:0)`, both forms have full degree in `x`; the `y`-coordinates of the
//! affine flexes are roots of the resultant in `x`, and for each such root the
//! `x`-coordinates are roots of a gcd. Points on `z = 0` are handled directly.

use crate::arith::{ff_factor, roots, FieldElement, GaloisField, HomogeneousForm, Poly, PolyRing, Ring};

use super::{hessian_form, is_smooth, projective_points, CurveError, CurvePoint, PlaneCubic};

/// Flex fields of larger degree are not searched.
pub const MAX_FLEX_FIELD_DEGREE: u32 = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flex {
    pub point: CurvePoint,
    /// Degree over `F_p` of the point's field of definition.
    pub degree: u32,
}

/// All nine flexes, with coordinates in the smallest field containing them.
#[derive(Clone, Debug)]
pub struct FlexData {
    pub field: GaloisField,
    pub flexes: Vec<Flex>,
}

impl FlexData {
    pub fn field_degree(&self) -> u32 {
        self.field.k()
    }

    pub fn rational(&self) -> impl Iterator<Item = &Flex> {
        self.flexes.iter().filter(|f| f.degree == 1)
    }
}

struct Projection {
    /// `T[i][j]`: coordinate change `x_i -> sum_j T[i][j] x_j` over `F_p`.
    t: [[u64; 3]; 3],
    /// Coefficients (in `F_p[y]`) of `x^0..x^3` in `g(x, y, 1)` and `h(x, y, 1)`.
    g_affine: [Poly<FieldElement>; 4],
    h_affine: [Poly<FieldElement>; 4],
    /// `g(x, 1, 0)` and `h(x, 1, 0)` as polynomials in `x` over `F_p`.
    g_inf: Poly<FieldElement>,
    h_inf: Poly<FieldElement>,
    resultant: Poly<FieldElement>,
}

fn x_coefficients(fp: &GaloisField, f: &HomogeneousForm<FieldElement>) -> [Poly<FieldElement>; 4] {
    let pr = PolyRing::new(fp);
    let mut dense = vec![vec![fp.zero(); 4]; 4];
    for (m, c) in f.terms() {
        dense[m[0] as usize][m[1] as usize] = c.clone();
    }
    std::array::from_fn(|i| pr.from_coeffs(dense[i].clone()))
}

fn at_infinity(fp: &GaloisField, f: &HomogeneousForm<FieldElement>) -> Poly<FieldElement> {
    let pr = PolyRing::new(fp);
    let mut dense = vec![fp.zero(); 4];
    for (m, c) in f.terms() {
        if m[2] == 0 {
            dense[m[0] as usize] = c.clone();
        }
    }
    pr.from_coeffs(dense)
}

/// Determinant over `F_p[y]` by expansion over column subsets.
fn poly_det(fp: &GaloisField, m: &[Vec<Poly<FieldElement>>]) -> Poly<FieldElement> {
    let pr = PolyRing::new(fp);
    let n = m.len();
    let mut dp: Vec<Option<Poly<FieldElement>>> = vec![None; 1 << n];
    dp[0] = Some(pr.one());
    for mask in 0usize..(1 << n) {
        let Some(acc) = dp[mask].clone() else { continue };
        let row = mask.count_ones() as usize;
        if row == n {
            continue;
        }
        for col in 0..n {
            if mask & (1 << col) != 0 || m[row][col].is_zero() {
                continue;
            }
            let inversions = (mask >> (col + 1)).count_ones();
            let mut term = pr.mul(&acc, &m[row][col]);
            if inversions % 2 == 1 {
                term = pr.neg(&term);
            }
            let slot = &mut dp[mask | (1 << col)];
            *slot = Some(match slot.take() {
                Some(s) => pr.add(&s, &term),
                None => term,
            });
        }
    }
    dp[(1 << n) - 1].clone().unwrap_or_else(|| pr.zero())
}

fn sylvester_resultant(
    fp: &GaloisField,
    a: &[Poly<FieldElement>; 4],
    b: &[Poly<FieldElement>; 4],
) -> Poly<FieldElement> {
    let pr = PolyRing::new(fp);
    let mut m = vec![vec![pr.zero(); 6]; 6];
    for r in 0..3 {
        for i in 0..4 {
            m[r][r + 3 - i] = a[i].clone();
            m[3 + r][r + 3 - i] = b[i].clone();
        }
    }
    poly_det(fp, &m)
}

fn projection(c: &PlaneCubic) -> Result<Projection, CurveError> {
    let fp = c.field();
    let f = c.form();
    let h = hessian_form(fp, f);
    let centre = projective_points(fp, u128::MAX)?
        .into_iter()
        .find(|pt| !fp.is_zero(&f.eval(fp, &pt.coords)) && !fp.is_zero(&h.eval(fp, &pt.coords)))
        .ok_or(CurveError::NoProjectionCentre)?;
    let lead = (0..3).find(|&i| !fp.is_zero(&centre.coords[i])).unwrap();
    let others: Vec<usize> = (0..3).filter(|&i| i != lead).collect();
    let mut t = [[0u64; 3]; 3];
    for i in 0..3 {
        t[i][0] = centre.coords[i].constant();
    }
    t[others[0]][1] = 1;
    t[others[1]][2] = 1;
    let matrix: Vec<Vec<FieldElement>> = t
        .iter()
        .map(|row| row.iter().map(|&x| fp.embed_prime(x)).collect())
        .collect();
    let g = f.substitute(fp, &matrix);
    let hg = hessian_form(fp, &g);
    let g_affine = x_coefficients(fp, &g);
    let h_affine = x_coefficients(fp, &hg);
    let resultant = sylvester_resultant(fp, &g_affine, &h_affine);
    Ok(Projection {
        t,
        g_inf: at_infinity(fp, &g),
        h_inf: at_infinity(fp, &hg),
        g_affine,
        h_affine,
        resultant,
    })
}

fn embed_poly(ext: &GaloisField, f: &Poly<FieldElement>) -> Poly<FieldElement> {
    PolyRing::new(ext).from_coeffs(f.coeffs.iter().map(|c| ext.embed_prime(c.constant())).collect())
}

/// Flexes with coordinates in `ext` (possibly fewer than nine).
fn collect_flexes(proj: &Projection, ext: &GaloisField) -> Vec<CurvePoint> {
    let pr = PolyRing::new(ext);
    let mut raw: Vec<[FieldElement; 3]> = Vec::new();
    for y0 in roots(ext, &embed_poly(ext, &proj.resultant)) {
        let at = |coeffs: &[Poly<FieldElement>; 4]| {
            pr.from_coeffs(coeffs.iter().map(|a| pr.eval(&embed_poly(ext, a), &y0)).collect())
        };
        let common = pr.gcd(&at(&proj.g_affine), &at(&proj.h_affine));
        for x0 in roots(ext, &common) {
            raw.push([x0, y0.clone(), ext.one()]);
        }
    }
    let common = pr.gcd(&embed_poly(ext, &proj.g_inf), &embed_poly(ext, &proj.h_inf));
    for x0 in roots(ext, &common) {
        raw.push([x0, ext.one(), ext.zero()]);
    }
    let mut pts: Vec<CurvePoint> = raw
        .iter()
        .map(|v| {
            let w: Vec<FieldElement> = (0..3)
                .map(|i| {
                    (0..3).fold(ext.zero(), |acc, j| {
                        ext.add(&acc, &ext.mul(&ext.embed_prime(proj.t[i][j]), &v[j]))
                    })
                })
                .collect();
            CurvePoint::normalize(ext, &w).expect("invertible coordinate change")
        })
        .collect();
    pts.sort();
    pts.dedup();
    pts
}

/// The nine flexes with their residue degrees.
pub fn flexes(c: &PlaneCubic) -> Result<FlexData, CurveError> {
    if !is_smooth(c).is_smooth() {
        return Err(CurveError::Singular);
    }
    let proj = projection(c)?;
    let fp = c.field();
    let pr = PolyRing::new(fp);
    let mut d0 = 1u32;
    for poly in [&proj.resultant, &pr.gcd(&proj.g_inf, &proj.h_inf)] {
        if poly.degree().unwrap_or(0) == 0 {
            continue;
        }
        for (g, _) in ff_factor(fp, poly)?.factors {
            d0 = num_integer::lcm(d0, g.degree().unwrap() as u32);
        }
    }
    let mut d = d0;
    while d <= MAX_FLEX_FIELD_DEGREE {
        let ext = GaloisField::new(c.p(), d)?;
        let pts = collect_flexes(&proj, &ext);
        if pts.len() == 9 {
            let flexes = pts
                .into_iter()
                .map(|point| Flex {
                    degree: point.degree(&ext),
                    point,
                })
                .collect();
            return Ok(FlexData { field: ext, flexes });
        }
        d += d0;
    }
    Err(CurveError::FlexFieldNotFound(MAX_FLEX_FIELD_DEGREE))
}

/// All nine flexes with coordinates in `ext`, which must contain them.
pub fn flexes_over(c: &PlaneCubic, ext: &GaloisField) -> Result<Vec<CurvePoint>, CurveError> {
    if !is_smooth(c).is_smooth() {
        return Err(CurveError::Singular);
    }
    let pts = collect_flexes(&projection(c)?, ext);
    if pts.len() == 9 {
        return Ok(pts);
    }
    let data = flexes(c)?;
    let mut missing: Vec<u32> = data
        .flexes
        .iter()
        .map(|f| f.degree)
        .filter(|d| !ext.k().is_multiple_of(*d))
        .collect();
    missing.sort();
    Err(CurveError::FlexesNotRational {
        p: c.p(),
        k: ext.k(),
        missing,
    })
}
