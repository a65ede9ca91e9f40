//! The totally ramified cubic extension `W[Π] / (Π^3 - p)` of a truncated
//! unramified ring `W`.
//!
//! An element `c0 + c1 Π + c2 Π^2` is stored with each `c_i` modulo `p^N`,
//! which pins it down modulo `Π^(3N)`. Each element also carries its own
//! absolute Π-adic precision (at most `3N`); divisions by `Π` consume it.

use num_rational::BigRational;

use super::{ArithError, FieldElement, GaloisField, Ring, UnramifiedInteger, UnramifiedRing};

#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct EisensteinElement {
    pub c: [UnramifiedInteger; 3],
    /// Known modulo `Π^prec`.
    pub prec: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EisensteinRing {
    base: UnramifiedRing,
    working_precision: u32,
}

/// Storage p-adic precision giving `M` Π-adic digits plus room for dividing by `p^2`.
pub fn storage_precision_for(m: u32) -> u32 {
    m.div_ceil(3) + 2
}

impl EisensteinRing {
    /// Ring with Π-adic working precision `m` over the unramified extension
    /// with residue field `residue`.
    pub fn new(residue: GaloisField, m: u32) -> Result<Self, ArithError> {
        let base = UnramifiedRing::new(residue, storage_precision_for(m))?;
        Ok(EisensteinRing {
            base,
            working_precision: m,
        })
    }

    pub fn base(&self) -> &UnramifiedRing {
        &self.base
    }

    pub fn residue_field(&self) -> &GaloisField {
        self.base.residue_field()
    }

    pub fn p(&self) -> u64 {
        self.base.p()
    }

    /// The target precision `M` of computations in this ring.
    pub fn working_precision(&self) -> u32 {
        self.working_precision
    }

    /// `3N`: the largest precision any element can carry.
    pub fn max_precision(&self) -> u32 {
        3 * self.base.precision()
    }

    pub fn from_unramified(&self, w: &UnramifiedInteger) -> EisensteinElement {
        EisensteinElement {
            c: [w.clone(), self.base.zero(), self.base.zero()],
            prec: self.max_precision(),
        }
    }

    pub fn from_rational(&self, q: &BigRational) -> Result<EisensteinElement, ArithError> {
        Ok(self.from_unramified(&self.base.from_rational(q)?))
    }

    pub fn lift(&self, x: &FieldElement) -> EisensteinElement {
        self.from_unramified(&self.base.lift(x))
    }

    /// The uniformizer `Π`.
    pub fn pi(&self) -> EisensteinElement {
        EisensteinElement {
            c: [self.base.zero(), self.base.one(), self.base.zero()],
            prec: self.max_precision(),
        }
    }

    pub fn pi_power(&self, e: u32) -> EisensteinElement {
        self.mul_pi_power(&self.one(), e)
    }

    /// `min_i (3 v_p(c_i) + i)`, capped at the element's precision.
    pub fn valuation(&self, x: &EisensteinElement) -> u32 {
        let n = self.base.precision();
        (0..3)
            .map(|i| {
                let v = self.base.valuation(&x.c[i]);
                if v >= n {
                    u32::MAX
                } else {
                    3 * v + i as u32
                }
            })
            .min()
            .unwrap()
            .min(x.prec)
    }

    pub fn is_unit(&self, x: &EisensteinElement) -> bool {
        x.prec > 0 && self.base.is_unit(&x.c[0])
    }

    pub fn residue(&self, x: &EisensteinElement) -> FieldElement {
        self.base.reduce(&x.c[0])
    }

    /// Equality modulo `Π^min(prec)`.
    pub fn eq_at_precision(&self, a: &EisensteinElement, b: &EisensteinElement) -> bool {
        self.is_zero(&self.sub(a, b))
    }

    pub fn with_precision(&self, x: &EisensteinElement, prec: u32) -> EisensteinElement {
        EisensteinElement {
            c: x.c.clone(),
            prec: prec.min(x.prec),
        }
    }

    pub fn mul_pi_power(&self, x: &EisensteinElement, e: u32) -> EisensteinElement {
        let b = &self.base;
        let mut c = x.c.clone();
        for _ in 0..e {
            // Π (c0 + c1 Π + c2 Π^2) = p c2 + c0 Π + c1 Π^2
            c = [b.mul_p_power(&c[2], 1), c[0].clone(), c[1].clone()];
        }
        EisensteinElement {
            c,
            prec: x.prec.saturating_add(e).min(self.max_precision()),
        }
    }

    /// Exact division by `Π^e`; requires `val(x) >= e`.
    pub fn div_pi_power(&self, x: &EisensteinElement, e: u32) -> Result<EisensteinElement, ArithError> {
        if e > x.prec {
            return Err(ArithError::PrecisionExhausted {
                needed: e,
                available: x.prec,
            });
        }
        if self.valuation(x) < e {
            return Err(ArithError::InexactDivision);
        }
        let b = &self.base;
        let mut c = x.c.clone();
        for _ in 0..e {
            // (c0 + c1 Π + c2 Π^2)/Π = c1 + c2 Π + (c0/p) Π^2
            let c0 = b.div_p_power(&c[0], 1)?;
            c = [c[1].clone(), c[2].clone(), c0];
        }
        Ok(EisensteinElement { c, prec: x.prec - e })
    }

    /// Inverse of a unit, by Newton iteration from the inverse of `c0`.
    pub fn invert(&self, x: &EisensteinElement) -> Result<EisensteinElement, ArithError> {
        if !self.is_unit(x) {
            return Err(ArithError::NotAUnit {
                valuation: self.valuation(x),
            });
        }
        let mut y = self.from_unramified(&self.base.inv(&x.c[0])?);
        y.prec = x.prec;
        let two = self.from_int(2);
        let mut known = 1u32;
        while known < x.prec {
            y = self.mul(&y, &self.sub(&two, &self.mul(x, &y)));
            known *= 2;
        }
        y.prec = x.prec;
        Ok(y)
    }

    /// The automorphism `Π -> ω Π` fixing `W`.
    pub fn conjugate(&self, x: &EisensteinElement, omega: &UnramifiedInteger) -> EisensteinElement {
        let b = &self.base;
        let w2 = b.mul(omega, omega);
        EisensteinElement {
            c: [x.c[0].clone(), b.mul(&x.c[1], omega), b.mul(&x.c[2], &w2)],
            prec: x.prec,
        }
    }
}

impl Ring for EisensteinRing {
    type Elem = EisensteinElement;

    fn zero(&self) -> EisensteinElement {
        self.from_int(0)
    }

    fn one(&self) -> EisensteinElement {
        self.from_int(1)
    }

    fn from_int(&self, n: i64) -> EisensteinElement {
        self.from_unramified(&self.base.from_int(n))
    }

    fn add(&self, a: &EisensteinElement, b: &EisensteinElement) -> EisensteinElement {
        let r = &self.base;
        EisensteinElement {
            c: [
                r.add(&a.c[0], &b.c[0]),
                r.add(&a.c[1], &b.c[1]),
                r.add(&a.c[2], &b.c[2]),
            ],
            prec: a.prec.min(b.prec),
        }
    }

    fn neg(&self, a: &EisensteinElement) -> EisensteinElement {
        let r = &self.base;
        EisensteinElement {
            c: [r.neg(&a.c[0]), r.neg(&a.c[1]), r.neg(&a.c[2])],
            prec: a.prec,
        }
    }

    fn mul(&self, a: &EisensteinElement, b: &EisensteinElement) -> EisensteinElement {
        let r = &self.base;
        let (a0, a1, a2) = (&a.c[0], &a.c[1], &a.c[2]);
        let (b0, b1, b2) = (&b.c[0], &b.c[1], &b.c[2]);
        let c0 = r.add(
            &r.mul(a0, b0),
            &r.mul_p_power(&r.add(&r.mul(a1, b2), &r.mul(a2, b1)), 1),
        );
        let c1 = r.add(
            &r.add(&r.mul(a0, b1), &r.mul(a1, b0)),
            &r.mul_p_power(&r.mul(a2, b2), 1),
        );
        let c2 = r.add(&r.add(&r.mul(a0, b2), &r.mul(a1, b1)), &r.mul(a2, b0));
        let va = self.valuation(a);
        let vb = self.valuation(b);
        let prec = a
            .prec
            .saturating_add(vb)
            .min(b.prec.saturating_add(va))
            .min(self.max_precision());
        EisensteinElement { c: [c0, c1, c2], prec }
    }

    fn is_zero(&self, a: &EisensteinElement) -> bool {
        self.valuation(a) >= a.prec
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ring() -> EisensteinRing {
        EisensteinRing::new(GaloisField::prime(5).unwrap(), 9).unwrap()
    }

    fn elem(r: &EisensteinRing, c: [i64; 3]) -> EisensteinElement {
        let b = r.base();
        EisensteinElement {
            c: [b.from_int(c[0]), b.from_int(c[1]), b.from_int(c[2])],
            prec: r.max_precision(),
        }
    }

    #[test]
    fn pi_cubed_is_p() {
        let r = ring();
        let pi = r.pi();
        let pi3 = r.mul(&r.mul(&pi, &pi), &pi);
        assert!(r.eq_at_precision(&pi3, &r.from_int(5)));
        assert_eq!(r.valuation(&pi), 1);
        assert_eq!(r.valuation(&r.from_int(25)), 6);
        assert_eq!(r.valuation(&elem(&r, [10, 5, 5])), 3);
    }

    #[test]
    fn invert_one_plus_pi() {
        let r = ring();
        let x = r.add(&r.one(), &r.pi());
        let y = r.invert(&r.with_precision(&x, 9)).unwrap();
        let prod = r.mul(&x, &y);
        assert!(r.eq_at_precision(&prod, &r.one()));
        assert!(prod.prec >= 9);
        // the geometric series 1 - Π + Π^2 - ... agrees
        let mut series = r.zero();
        for i in 0..9 {
            let term = r.pi_power(i);
            series = if i % 2 == 0 {
                r.add(&series, &term)
            } else {
                r.sub(&series, &term)
            };
        }
        assert!(r.eq_at_precision(&r.with_precision(&series, 9), &y));
    }

    #[test]
    fn invert_one_is_one() {
        let r = ring();
        assert!(r.eq_at_precision(&r.invert(&r.one()).unwrap(), &r.one()));
    }

    #[test]
    fn pi_is_not_a_unit() {
        let r = ring();
        assert_eq!(r.invert(&r.pi()), Err(ArithError::NotAUnit { valuation: 1 }));
    }

    #[test]
    fn division_by_pi_tracks_precision() {
        let r = ring();
        let x = r.mul(&r.pi_power(4), &elem(&r, [2, 3, 1]));
        let y = r.div_pi_power(&x, 4).unwrap();
        assert!(r.eq_at_precision(&y, &elem(&r, [2, 3, 1])));
        assert_eq!(y.prec, r.max_precision() - 4);
        assert!(r.div_pi_power(&r.pi(), 2).is_err());
    }

    #[test]
    fn conjugation_is_an_automorphism() {
        use crate::arith::{cube_roots_of_unity, teichmuller_lift};
        let f = GaloisField::new(5, 2).unwrap();
        let r = EisensteinRing::new(f.clone(), 12).unwrap();
        let w = teichmuller_lift(r.base(), &cube_roots_of_unity(&f)[0]);
        let x = elem(&r, [3, 1, 4]);
        let y = elem(&r, [1, 7, 2]);
        let lhs = r.conjugate(&r.mul(&x, &y), &w);
        let rhs = r.mul(&r.conjugate(&x, &w), &r.conjugate(&y, &w));
        assert!(r.eq_at_precision(&lhs, &rhs));
        // order three
        let z = r.conjugate(&r.conjugate(&r.conjugate(&x, &w), &w), &w);
        assert!(r.eq_at_precision(&z, &x));
    }

    proptest! {
        #[test]
        fn ring_axioms(a in prop::array::uniform3(-500i64..500),
                       b in prop::array::uniform3(-500i64..500),
                       c in prop::array::uniform3(-500i64..500)) {
            let r = ring();
            let (x, y, z) = (elem(&r, a), elem(&r, b), elem(&r, c));
            let assoc_l = r.mul(&r.mul(&x, &y), &z);
            let assoc_r = r.mul(&x, &r.mul(&y, &z));
            prop_assert!(r.eq_at_precision(&assoc_l, &assoc_r));
            let dist_l = r.mul(&x, &r.add(&y, &z));
            let dist_r = r.add(&r.mul(&x, &y), &r.mul(&x, &z));
            prop_assert!(r.eq_at_precision(&dist_l, &dist_r));
            prop_assert!(r.eq_at_precision(&r.mul(&x, &y), &r.mul(&y, &x)));
        }

        #[test]
        fn double_inverse(a in prop::array::uniform3(-500i64..500)) {
            let r = ring();
            let mut x = elem(&r, a);
            if !r.is_unit(&x) {
                x = r.add(&x, &r.one());
            }
            prop_assume!(r.is_unit(&x));
            let x = r.with_precision(&x, r.working_precision());
            let y = r.invert(&r.invert(&x).unwrap()).unwrap();
            prop_assert!(r.eq_at_precision(&x, &y));
        }

        #[test]
        fn product_expansion_matches_relation(a in prop::array::uniform3(0i64..25),
                                              b in prop::array::uniform3(0i64..25)) {
            // independent expansion: multiply as polynomials in Π over Z, then
            // substitute Π^3 = 5 by hand
            let mut full = [0i64; 5];
            for i in 0..3 { for j in 0..3 { full[i + j] += a[i] * b[j]; } }
            let expect = [full[0] + 5 * full[3], full[1] + 5 * full[4], full[2]];
            let r = ring();
            prop_assert!(r.eq_at_precision(&r.mul(&elem(&r, a), &elem(&r, b)), &elem(&r, expect)));
        }
    }
}
