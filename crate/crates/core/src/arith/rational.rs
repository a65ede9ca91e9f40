//! The rational numbers as a [`Ring`], with p-adic valuation helpers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Field, Ring};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_int(&self, n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
}

impl Field for Rationals {
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
}

/// `v_p(n)` for a nonzero integer.
pub fn valuation_int(n: &BigInt, p: u64) -> u32 {
    assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// `v_p(q)`, or `None` for zero.
pub fn valuation(q: &BigRational, p: u64) -> Option<i64> {
    if q.is_zero() {
        return None;
    }
    Some(valuation_int(q.numer(), p) as i64 - valuation_int(q.denom(), p) as i64)
}

pub fn p_power(p: u64, e: i64) -> BigRational {
    let base = BigInt::from(p).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        BigRational::from_integer(base)
    } else {
        BigRational::new(BigInt::one(), base)
    }
}

/// Residue of a p-integral rational in `[0, p)`.
pub fn residue_mod_p(q: &BigRational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    if q.denom().mod_floor(&pb).is_zero() {
        return None;
    }
    let n = q.numer().mod_floor(&pb);
    let d = q.denom().mod_floor(&pb);
    let dinv = d.extended_gcd(&pb).x.mod_floor(&pb);
    let r = (n * dinv).mod_floor(&pb);
    Some(r.try_into().unwrap())
}

/// `(negative, |q|)` rendering used when printing forms.
pub fn signed_parts(q: &BigRational) -> (bool, String) {
    (q.is_negative(), q.abs().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(&r(125, 3), 5), Some(3));
        assert_eq!(valuation(&r(2, 25), 5), Some(-2));
        assert_eq!(valuation(&r(0, 1), 5), None);
        assert_eq!(p_power(5, -2), r(1, 25));
    }

    #[test]
    fn residues() {
        assert_eq!(residue_mod_p(&r(1, 2), 5), Some(3));
        assert_eq!(residue_mod_p(&r(-1, 1), 7), Some(6));
        assert_eq!(residue_mod_p(&r(1, 5), 5), None);
    }
}
