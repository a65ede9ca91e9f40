//! Exact arithmetic: finite fields, unramified p-adic integers, the cubic
//! Eisenstein tower over them, univariate polynomials with factorization
//! over finite fields, and homogeneous forms over any of these rings.
//!
//! Rings follow the context pattern: a ring value (e.g. [`GaloisField`])
//! carries the modulus and precision data, and elements are plain values
//! manipulated through it.

use std::fmt::Debug;

use thiserror::Error;

pub mod eisenstein;
pub mod factor;
pub mod form;
pub mod gf;
pub mod groebner;
pub mod linalg;
pub mod padic;
pub mod poly;
pub mod rational;

pub use eisenstein::{EisensteinElement, EisensteinRing};
pub use factor::{
    cube_roots_of_unity, embed_element, ff_factor, field_embedding, roots, set_factorization_seed, Factorization,
};
pub use form::{HomogeneousCubicForm, HomogeneousForm, Monomial};
pub use gf::{FieldElement, GaloisField};
pub use padic::{teichmuller_lift, UnramifiedInteger, UnramifiedRing};
pub use poly::{Poly, PolyRing};
pub use rational::Rationals;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("residue characteristic {0} is not supported (need p >= 5)")]
    UnsupportedPrime(u64),
    #[error("polynomial is zero")]
    ZeroPolynomial,
    #[error("element is not a unit (valuation {valuation})")]
    NotAUnit { valuation: u32 },
    #[error("precision exhausted: needed {needed}, have {available}")]
    PrecisionExhausted { needed: u32, available: u32 },
    #[error("p^N = {p}^{n} does not fit in machine words")]
    PrecisionTooLarge { p: u64, n: u32 },
    #[error("division is not exact")]
    InexactDivision,
    #[error("{0} is not p-integral")]
    NotIntegral(String),
    #[error("no irreducible polynomial of degree {0} found")]
    NoIrreducible(u32),
}

/// A commutative ring with identity, accessed through a context value.
pub trait Ring {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    #[allow(clippy::wrong_self_convention)]
    fn from_int(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        self.is_zero(&self.sub(a, &self.one()))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn sum<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }
}

pub trait Field: Ring {
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }
}

/// Finite fields `F_{p^k}`.
pub trait FiniteField: Field
where
    Self::Elem: Eq + std::hash::Hash,
{
    fn characteristic(&self) -> u64;
    fn degree(&self) -> u32;

    /// Number of elements, `None` when it overflows `u128`.
    fn size(&self) -> Option<u128> {
        (self.characteristic() as u128).checked_pow(self.degree())
    }

    /// `x -> x^p`.
    fn frobenius(&self, a: &Self::Elem) -> Self::Elem {
        self.pow(a, self.characteristic())
    }

    /// All elements, in a fixed order. Only sensible for small fields.
    fn elements(&self) -> Vec<Self::Elem>;

    fn random<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factors of `n`, without multiplicity.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Checks `p` is a prime the pipeline supports (odd, not 3).
pub fn check_prime(p: u64) -> Result<(), ArithError> {
    if !is_prime(p) {
        return Err(ArithError::NotPrime(p));
    }
    if p < 5 {
        return Err(ArithError::UnsupportedPrime(p));
    }
    if p >= 1 << 31 {
        return Err(ArithError::UnsupportedPrime(p));
    }
    Ok(())
}
