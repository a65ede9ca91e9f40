//! Dense univariate polynomials over a field.

use super::Field;

/// Coefficients, lowest degree first, with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<E> {
    pub coeffs: Vec<E>,
}

impl<E> Poly<E> {
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&E> {
        self.coeffs.last()
    }
}

/// Operations on [`Poly`] over a field `F`.
#[derive(Clone, Copy)]
pub struct PolyRing<'a, F: Field> {
    pub field: &'a F,
}

impl<'a, F: Field> PolyRing<'a, F> {
    pub fn new(field: &'a F) -> Self {
        PolyRing { field }
    }

    pub fn from_coeffs(&self, coeffs: Vec<F::Elem>) -> Poly<F::Elem> {
        let mut p = Poly { coeffs };
        self.trim(&mut p);
        p
    }

    fn trim(&self, p: &mut Poly<F::Elem>) {
        while p.coeffs.last().is_some_and(|c| self.field.is_zero(c)) {
            p.coeffs.pop();
        }
    }

    pub fn zero(&self) -> Poly<F::Elem> {
        Poly { coeffs: Vec::new() }
    }

    pub fn one(&self) -> Poly<F::Elem> {
        self.constant(self.field.one())
    }

    pub fn constant(&self, c: F::Elem) -> Poly<F::Elem> {
        self.from_coeffs(vec![c])
    }

    /// `x`.
    pub fn x(&self) -> Poly<F::Elem> {
        self.from_coeffs(vec![self.field.zero(), self.field.one()])
    }

    /// `x - a`.
    pub fn linear(&self, a: &F::Elem) -> Poly<F::Elem> {
        self.from_coeffs(vec![self.field.neg(a), self.field.one()])
    }

    pub fn add(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        let f = self.field;
        let n = a.coeffs.len().max(b.coeffs.len());
        let z = f.zero();
        let coeffs = (0..n)
            .map(|i| f.add(a.coeffs.get(i).unwrap_or(&z), b.coeffs.get(i).unwrap_or(&z)))
            .collect();
        self.from_coeffs(coeffs)
    }

    pub fn neg(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        Poly {
            coeffs: a.coeffs.iter().map(|c| self.field.neg(c)).collect(),
        }
    }

    pub fn sub(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &Poly<F::Elem>, c: &F::Elem) -> Poly<F::Elem> {
        self.from_coeffs(a.coeffs.iter().map(|x| self.field.mul(x, c)).collect())
    }

    pub fn mul(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        let f = self.field;
        let mut out = vec![f.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(x, y));
            }
        }
        self.from_coeffs(out)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> (Poly<F::Elem>, Poly<F::Elem>) {
        let f = self.field;
        let db = b.degree().expect("division by zero polynomial");
        let lead_inv = f.inv(b.leading().unwrap()).expect("leading coefficient not invertible");
        let mut r = a.coeffs.clone();
        if r.len() <= db {
            return (self.zero(), a.clone());
        }
        let mut q = vec![f.zero(); r.len() - db];
        for top in (db..r.len()).rev() {
            let c = f.mul(&r[top], &lead_inv);
            if f.is_zero(&c) {
                continue;
            }
            for (i, bc) in b.coeffs.iter().enumerate() {
                let idx = top - db + i;
                r[idx] = f.sub(&r[idx], &f.mul(&c, bc));
            }
            q[top - db] = c;
        }
        r.truncate(db);
        (self.from_coeffs(q), self.from_coeffs(r))
    }

    pub fn rem(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        self.div_rem(a, b).1
    }

    pub fn monic(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        match a.leading() {
            None => a.clone(),
            Some(l) => {
                let li = self.field.inv(l).unwrap();
                self.scale(a, &li)
            }
        }
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>) -> Poly<F::Elem> {
        let mut a = a.clone();
        let mut b = b.clone();
        while !b.is_zero() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    pub fn derivative(&self, a: &Poly<F::Elem>) -> Poly<F::Elem> {
        let f = self.field;
        let coeffs = a
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| f.mul(c, &f.from_int(i as i64)))
            .collect();
        self.from_coeffs(coeffs)
    }

    pub fn eval(&self, a: &Poly<F::Elem>, x: &F::Elem) -> F::Elem {
        let f = self.field;
        a.coeffs.iter().rev().fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    pub fn mulmod(&self, a: &Poly<F::Elem>, b: &Poly<F::Elem>, m: &Poly<F::Elem>) -> Poly<F::Elem> {
        self.rem(&self.mul(a, b), m)
    }

    /// `a^e mod m` with the exponent given as little-endian bits.
    pub fn powmod_bits(&self, a: &Poly<F::Elem>, bits: &[bool], m: &Poly<F::Elem>) -> Poly<F::Elem> {
        let base = self.rem(a, m);
        let mut acc = self.rem(&self.one(), m);
        for &bit in bits.iter().rev() {
            acc = self.mulmod(&acc, &acc, m);
            if bit {
                acc = self.mulmod(&acc, &base, m);
            }
        }
        acc
    }

    pub fn powmod(&self, a: &Poly<F::Elem>, e: u128, m: &Poly<F::Elem>) -> Poly<F::Elem> {
        self.powmod_bits(a, &u128_bits(e), m)
    }

    /// Product of linear factors `x - r`.
    pub fn from_roots(&self, roots: &[F::Elem]) -> Poly<F::Elem> {
        roots.iter().fold(self.one(), |acc, r| self.mul(&acc, &self.linear(r)))
    }
}

pub(crate) fn u128_bits(mut e: u128) -> Vec<bool> {
    let mut bits = Vec::new();
    while e > 0 {
        bits.push(e & 1 == 1);
        e >>= 1;
    }
    bits
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{FiniteField, GaloisField, Ring};

    #[test]
    fn division_identity() {
        let f = GaloisField::prime(7).unwrap();
        let pr = PolyRing::new(&f);
        let a = pr.from_coeffs([1, 2, 3, 4, 5].iter().map(|&c| f.from_int(c)).collect());
        let b = pr.from_coeffs([3, 0, 1].iter().map(|&c| f.from_int(c)).collect());
        let (q, r) = pr.div_rem(&a, &b);
        assert_eq!(pr.add(&pr.mul(&q, &b), &r), a);
        assert!(r.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn gcd_of_products() {
        let f = GaloisField::prime(11).unwrap();
        let pr = PolyRing::new(&f);
        let r = |n| f.from_int(n);
        let a = pr.from_roots(&[r(1), r(2), r(3)]);
        let b = pr.from_roots(&[r(2), r(3), r(5)]);
        assert_eq!(pr.gcd(&a, &b), pr.from_roots(&[r(2), r(3)]));
    }

    #[test]
    fn fermat_little_theorem_as_polynomials() {
        let f = GaloisField::prime(5).unwrap();
        let pr = PolyRing::new(&f);
        let x = pr.x();
        let m = pr.from_roots(&f.elements());
        // x^5 = x mod (x^5 - x)
        assert_eq!(pr.powmod(&x, 5, &m), x);
    }
}
