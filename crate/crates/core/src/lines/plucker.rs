//! Plücker coordinates of lines in projective 3-space, over any ring.

use crate::arith::{EisensteinElement, EisensteinRing, Field, FieldElement, GaloisField, Ring};

/// Index pairs in the order `p01, p02, p03, p12, p13, p23`.
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

pub fn plucker<R: Ring>(ring: &R, r1: &[R::Elem], r2: &[R::Elem]) -> Vec<R::Elem> {
    PAIRS
        .iter()
        .map(|&(i, j)| ring.sub(&ring.mul(&r1[i], &r2[j]), &ring.mul(&r1[j], &r2[i])))
        .collect()
}

/// The bilinear form whose vanishing means two lines meet:
/// `p01 q23 - p02 q13 + p03 q12 + p12 q03 - p13 q02 + p23 q01`.
pub fn pairing<R: Ring>(ring: &R, p: &[R::Elem], q: &[R::Elem]) -> R::Elem {
    let terms = [
        (0, 5, false),
        (1, 4, true),
        (2, 3, false),
        (3, 2, false),
        (4, 1, true),
        (5, 0, false),
    ];
    terms.iter().fold(ring.zero(), |acc, &(i, j, neg)| {
        let t = ring.mul(&p[i], &q[j]);
        if neg {
            ring.sub(&acc, &t)
        } else {
            ring.add(&acc, &t)
        }
    })
}

/// Scales a nonzero vector over a field so its first nonzero entry is 1.
pub fn normalize_field(field: &GaloisField, v: &[FieldElement]) -> Vec<FieldElement> {
    let lead = v.iter().find(|c| !field.is_zero(c)).expect("nonzero vector");
    let inv = field.inv(lead).unwrap();
    v.iter().map(|c| field.mul(c, &inv)).collect()
}

/// Divides by the largest power of `Π` and scales the first unit entry to 1.
/// Returns `None` when every entry vanishes to its precision.
pub fn normalize_eisenstein(ring: &EisensteinRing, v: &[EisensteinElement]) -> Option<Vec<EisensteinElement>> {
    let vmin = v.iter().filter(|x| !ring.is_zero(x)).map(|x| ring.valuation(x)).min()?;
    let shifted: Vec<EisensteinElement> = v
        .iter()
        .map(|x| {
            if ring.valuation(x) >= vmin {
                ring.div_pi_power(x, vmin).ok()
            } else {
                None
            }
        })
        .collect::<Option<_>>()?;
    let lead = shifted.iter().find(|x| ring.is_unit(x))?;
    let inv = ring.invert(lead).ok()?;
    Some(shifted.iter().map(|x| ring.mul(x, &inv)).collect())
}

/// The plane `h` through three points, `h_k = (-1)^k det(minor without column k)`.
pub fn plane_through<R: Ring>(ring: &R, a: &[R::Elem], b: &[R::Elem], c: &[R::Elem]) -> Vec<R::Elem> {
    (0..4)
        .map(|k| {
            let cols: Vec<usize> = (0..4).filter(|&j| j != k).collect();
            let m = |r: &[R::Elem], i: usize| r[cols[i]].clone();
            let det3 = {
                let t0 = ring.mul(
                    &m(a, 0),
                    &ring.sub(&ring.mul(&m(b, 1), &m(c, 2)), &ring.mul(&m(b, 2), &m(c, 1))),
                );
                let t1 = ring.mul(
                    &m(a, 1),
                    &ring.sub(&ring.mul(&m(b, 0), &m(c, 2)), &ring.mul(&m(b, 2), &m(c, 0))),
                );
                let t2 = ring.mul(
                    &m(a, 2),
                    &ring.sub(&ring.mul(&m(b, 0), &m(c, 1)), &ring.mul(&m(b, 1), &m(c, 0))),
                );
                ring.add(&ring.sub(&t0, &t1), &t2)
            };
            if k % 2 == 0 {
                det3
            } else {
                ring.neg(&det3)
            }
        })
        .collect()
}

pub fn dot<R: Ring>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> R::Elem {
    a.iter()
        .zip(b)
        .fold(ring.zero(), |acc, (x, y)| ring.add(&acc, &ring.mul(x, y)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Rationals;
    use num_rational::BigRational;

    fn v(xs: &[i64]) -> Vec<BigRational> {
        xs.iter().map(|&x| BigRational::from_integer(x.into())).collect()
    }

    #[test]
    fn plucker_relation_and_pairing() {
        let r = Rationals;
        let l = plucker(&r, &v(&[1, 2, 0, 3]), &v(&[0, 1, 5, -1]));
        // a line meets itself
        assert_eq!(pairing(&r, &l, &l), BigRational::from_integer(0.into()));
        // the coordinate axes x-y and z-w are skew; x-y and y-z meet
        let xy = plucker(&r, &v(&[1, 0, 0, 0]), &v(&[0, 1, 0, 0]));
        let zw = plucker(&r, &v(&[0, 0, 1, 0]), &v(&[0, 0, 0, 1]));
        let yz = plucker(&r, &v(&[0, 1, 0, 0]), &v(&[0, 0, 1, 0]));
        assert_ne!(pairing(&r, &xy, &zw), BigRational::from_integer(0.into()));
        assert_eq!(pairing(&r, &xy, &yz), BigRational::from_integer(0.into()));
    }

    #[test]
    fn plane_contains_its_points() {
        let r = Rationals;
        let (a, b, c) = (v(&[1, 2, 0, 3]), v(&[0, 1, 5, -1]), v(&[2, 0, 1, 1]));
        let h = plane_through(&r, &a, &b, &c);
        for pt in [&a, &b, &c] {
            assert_eq!(dot(&r, &h, pt), BigRational::from_integer(0.into()));
        }
        assert_ne!(dot(&r, &h, &v(&[1, 0, 0, 0])), BigRational::from_integer(0.into()));
    }
}
