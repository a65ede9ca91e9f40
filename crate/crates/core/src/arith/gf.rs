//! Finite fields `F_{p^k} = F_p[t] / (m(t))`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{check_prime, prime_factors, ArithError, Field, FiniteField, Ring};

/// An element of `F_{p^k}`: `k` coefficients of `1, t, ..., t^{k-1}`, each in `[0, p)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FieldElement(pub Vec<u64>);

impl FieldElement {
    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    /// The constant coefficient; equals the element when it lies in `F_p`.
    pub fn constant(&self) -> u64 {
        self.0[0]
    }

    pub fn is_prime_field_element(&self) -> bool {
        self.0[1..].iter().all(|&c| c == 0)
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_prime_field_element() {
            return write!(f, "{}", self.0[0]);
        }
        let mut first = true;
        for (i, &c) in self.0.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "t")?,
                (1, c) => write!(f, "{c}t")?,
                (i, 1) => write!(f, "t^{i}")?,
                (i, c) => write!(f, "{c}t^{i}")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, PartialEq, Eq)]
struct Descriptor {
    p: u64,
    k: u32,
    /// Monic, length `k + 1`, low degree first.
    modulus: Vec<u64>,
}

/// The field `F_{p^k}` with a stored monic irreducible modulus.
///
/// Cloning is cheap; the descriptor is shared.
#[derive(Clone, PartialEq, Eq)]
pub struct GaloisField {
    desc: Arc<Descriptor>,
}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {:?}", self.desc.p, self.desc.k, self.desc.modulus)
    }
}

impl GaloisField {
    /// The prime field `F_p`, represented with modulus `t`.
    pub fn prime(p: u64) -> Result<Self, ArithError> {
        check_prime(p)?;
        Ok(Self::from_parts(p, vec![0, 1]))
    }

    /// `F_{p^k}` with the smallest irreducible modulus: monic polynomials of
    /// degree `k` are ordered by the integer whose base-`p` digits are their
    /// coefficients, top coefficient most significant.
    pub fn new(p: u64, k: u32) -> Result<Self, ArithError> {
        check_prime(p)?;
        assert!(k >= 1, "extension degree must be positive");
        if k == 1 {
            return Ok(Self::from_parts(p, vec![0, 1]));
        }
        let total = (p as u128).checked_pow(k).ok_or(ArithError::NoIrreducible(k))?;
        let mut n: u128 = 0;
        while n < total {
            let mut modulus = Vec::with_capacity(k as usize + 1);
            let mut rest = n;
            for _ in 0..k {
                modulus.push((rest % p as u128) as u64);
                rest /= p as u128;
            }
            modulus.push(1);
            if modulus[0] != 0 && fp::is_irreducible(&modulus, p) {
                return Ok(Self::from_parts(p, modulus));
            }
            n += 1;
        }
        Err(ArithError::NoIrreducible(k))
    }

    /// `F_p[t]/(modulus)`; the modulus must be monic and irreducible.
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Self, ArithError> {
        check_prime(p)?;
        let m: Vec<u64> = modulus.iter().map(|c| c % p).collect();
        let m = fp::trim(m);
        if m.len() < 2 || *m.last().unwrap() != 1 || !fp::is_irreducible(&m, p) {
            return Err(ArithError::NoIrreducible(m.len().saturating_sub(1) as u32));
        }
        Ok(Self::from_parts(p, m))
    }

    fn from_parts(p: u64, modulus: Vec<u64>) -> Self {
        let k = (modulus.len() - 1) as u32;
        GaloisField {
            desc: Arc::new(Descriptor { p, k, modulus }),
        }
    }

    pub fn p(&self) -> u64 {
        self.desc.p
    }

    pub fn k(&self) -> u32 {
        self.desc.k
    }

    pub fn modulus(&self) -> &[u64] {
        &self.desc.modulus
    }

    /// The image of an integer residue in the prime subfield.
    pub fn embed_prime(&self, c: u64) -> FieldElement {
        let mut v = vec![0; self.desc.k as usize];
        v[0] = c % self.desc.p;
        FieldElement(v)
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> FieldElement {
        let k = self.desc.k as usize;
        let p = self.desc.p;
        let mut v: Vec<u64> = coeffs.iter().map(|c| c % p).collect();
        if v.len() > k {
            v = fp::rem(&v, &self.desc.modulus, p);
        }
        v.resize(k, 0);
        FieldElement(v)
    }

    /// The generator `t` of the extension.
    pub fn generator(&self) -> FieldElement {
        self.from_coeffs(&[0, 1])
    }

    /// Element with index `n` in the enumeration order of [`FiniteField::elements`].
    pub fn element_at(&self, mut n: u128) -> FieldElement {
        let p = self.desc.p as u128;
        let v = (0..self.desc.k)
            .map(|_| {
                let c = (n % p) as u64;
                n /= p;
                c
            })
            .collect();
        FieldElement(v)
    }

    pub fn index_of(&self, a: &FieldElement) -> u128 {
        let p = self.desc.p as u128;
        a.0.iter().rev().fold(0u128, |acc, &c| acc * p + c as u128)
    }

    /// Exponentiation by an arbitrary-size exponent given as little-endian bits.
    pub fn pow_bits(&self, a: &FieldElement, bits: &[bool]) -> FieldElement {
        let mut acc = self.one();
        for &b in bits.iter().rev() {
            acc = self.mul(&acc, &acc);
            if b {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    /// Degree over `F_p` of the subfield generated by `a`.
    pub fn element_degree(&self, a: &FieldElement) -> u32 {
        let mut x = self.frobenius(a);
        let mut d = 1;
        while &x != a {
            x = self.frobenius(&x);
            d += 1;
        }
        d
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: &FieldElement) -> Option<u128> {
        if self.is_zero(a) {
            return None;
        }
        let q1 = self.size()? - 1;
        let mut ord = q1;
        for f in prime_factors_u128(q1) {
            while ord % f == 0 && self.is_one(&self.pow_u128(a, ord / f)) {
                ord /= f;
            }
        }
        Some(ord)
    }

    pub fn pow_u128(&self, a: &FieldElement, mut e: u128) -> FieldElement {
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
}

fn prime_factors_u128(n: u128) -> Vec<u128> {
    if n <= u64::MAX as u128 {
        return prime_factors(n as u64).into_iter().map(|x| x as u128).collect();
    }
    let mut n = n;
    let mut out = Vec::new();
    let mut d = 2u128;
    while d * d <= n && d < 1 << 40 {
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

impl Ring for GaloisField {
    type Elem = FieldElement;

    fn zero(&self) -> FieldElement {
        FieldElement(vec![0; self.desc.k as usize])
    }

    fn one(&self) -> FieldElement {
        self.embed_prime(1)
    }

    fn from_int(&self, n: i64) -> FieldElement {
        let p = self.desc.p as i64;
        self.embed_prime(n.rem_euclid(p) as u64)
    }

    fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let p = self.desc.p;
        FieldElement(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| {
                    let s = x + y;
                    if s >= p {
                        s - p
                    } else {
                        s
                    }
                })
                .collect(),
        )
    }

    fn neg(&self, a: &FieldElement) -> FieldElement {
        let p = self.desc.p;
        FieldElement(a.0.iter().map(|&x| if x == 0 { 0 } else { p - x }).collect())
    }

    fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let p = self.desc.p;
        FieldElement(
            a.0.iter()
                .zip(&b.0)
                .map(|(&x, &y)| if x >= y { x - y } else { x + p - y })
                .collect(),
        )
    }

    fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let p = self.desc.p;
        let k = self.desc.k as usize;
        if k == 1 {
            return FieldElement(vec![a.0[0] * b.0[0] % p]);
        }
        let mut prod = vec![0u128; 2 * k - 1];
        for (i, &x) in a.0.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.0.iter().enumerate() {
                prod[i + j] += (x * y) as u128;
            }
        }
        let mut r: Vec<u64> = prod.iter().map(|&c| (c % p as u128) as u64).collect();
        let m = &self.desc.modulus;
        for top in (k..r.len()).rev() {
            let c = r[top];
            if c == 0 {
                continue;
            }
            r[top] = 0;
            for i in 0..k {
                let sub = c * m[i] % p;
                let idx = top - k + i;
                r[idx] = (r[idx] + p - sub) % p;
            }
        }
        r.truncate(k);
        FieldElement(r)
    }

    fn is_zero(&self, a: &FieldElement) -> bool {
        a.0.iter().all(|&c| c == 0)
    }
}

impl Field for GaloisField {
    fn inv(&self, a: &FieldElement) -> Option<FieldElement> {
        if self.is_zero(a) {
            return None;
        }
        let p = self.desc.p;
        if self.desc.k == 1 {
            return Some(FieldElement(vec![fp::inv_mod(a.0[0], p)]));
        }
        let inv = fp::inv_mod_poly(&a.0, &self.desc.modulus, p)?;
        Some(self.from_coeffs(&inv))
    }
}

impl FiniteField for GaloisField {
    fn characteristic(&self) -> u64 {
        self.desc.p
    }

    fn degree(&self) -> u32 {
        self.desc.k
    }

    fn elements(&self) -> Vec<FieldElement> {
        let q = self.size().expect("field too large to enumerate");
        (0..q).map(|n| self.element_at(n)).collect()
    }

    fn random<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        let p = self.desc.p;
        FieldElement((0..self.desc.k).map(|_| rng.gen_range(0..p)).collect())
    }
}

/// Dense polynomial helpers over `F_p` on coefficient vectors (low degree first).
pub(crate) mod fp {
    pub fn inv_mod(a: u64, p: u64) -> u64 {
        let (mut t, mut new_t) = (0i128, 1i128);
        let (mut r, mut new_r) = (p as i128, a as i128);
        while new_r != 0 {
            let q = r / new_r;
            (t, new_t) = (new_t, t - q * new_t);
            (r, new_r) = (new_r, r - q * new_r);
        }
        debug_assert_eq!(r, 1, "{a} not invertible mod {p}");
        t.rem_euclid(p as i128) as u64
    }

    pub fn trim(mut v: Vec<u64>) -> Vec<u64> {
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = trim(a.to_vec());
        let m = trim(m.to_vec());
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p);
        while r.len() > dm {
            let top = r.len() - 1;
            let c = r[top] * lead_inv % p;
            for i in 0..=dm {
                let idx = top - dm + i;
                r[idx] = (r[idx] + p - c * m[i] % p) % p;
            }
            r = trim(r);
        }
        r
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u128; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] += (x * y) as u128;
            }
        }
        trim(out.into_iter().map(|c| (c % p as u128) as u64).collect())
    }

    pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        rem(&mul(a, b, p), m, p)
    }

    pub fn powmod(a: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut base = rem(a, m, p);
        let mut acc = vec![1];
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(&acc, &base, m, p);
            }
            e >>= 1;
            if e > 0 {
                base = mulmod(&base, &base, m, p);
            }
        }
        acc
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let v = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(v)
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        if let Some(&lead) = a.last() {
            let li = inv_mod(lead, p);
            a.iter_mut().for_each(|c| *c = *c * li % p);
        }
        a
    }

    /// Inverse of `a` modulo `m`, `None` when they are not coprime.
    pub fn inv_mod_poly(a: &[u64], m: &[u64], p: u64) -> Option<Vec<u64>> {
        // extended Euclid tracking the coefficient of `a`
        let mut r0 = trim(m.to_vec());
        let mut r1 = rem(a, m, p);
        let mut s0: Vec<u64> = Vec::new();
        let mut s1: Vec<u64> = vec![1];
        while !r1.is_empty() {
            // polynomial long division r0 = q r1 + r
            let mut q = vec![0u64; r0.len().saturating_sub(r1.len()) + 1];
            let mut r = r0.clone();
            let d1 = r1.len() - 1;
            let li = inv_mod(r1[d1], p);
            while r.len() > d1 && !r.is_empty() {
                let top = r.len() - 1;
                let c = r[top] * li % p;
                q[top - d1] = c;
                for i in 0..=d1 {
                    let idx = top - d1 + i;
                    r[idx] = (r[idx] + p - c * r1[i] % p) % p;
                }
                r = trim(r);
            }
            let s2 = sub(&s0, &mul(&q, &s1, p), p);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
        }
        if r0.len() != 1 {
            return None;
        }
        let li = inv_mod(r0[0], p);
        Some(s0.into_iter().map(|c| c * li % p).collect())
    }

    /// Rabin's irreducibility test for a monic polynomial.
    pub fn is_irreducible(m: &[u64], p: u64) -> bool {
        let k = m.len() as u64 - 1;
        if k == 1 {
            return true;
        }
        let x = vec![0, 1];
        // frob[i] = x^{p^i} mod m
        let mut frob = vec![x.clone()];
        for i in 1..=k as usize {
            let next = powmod(&frob[i - 1], p, m, p);
            frob.push(next);
        }
        if !sub(&frob[k as usize], &x, p).is_empty() {
            return false;
        }
        for q in super::prime_factors(k) {
            let h = sub(&frob[(k / q) as usize], &x, p);
            if gcd(m, &h, p).len() != 1 {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f = GaloisField::prime(7).unwrap();
        let a = f.from_int(3);
        let b = f.from_int(5);
        assert_eq!(f.mul(&a, &b), f.from_int(1));
        assert_eq!(f.inv(&a).unwrap(), b);
        assert_eq!(f.add(&a, &b), f.from_int(1));
        assert_eq!(f.neg(&a), f.from_int(4));
        assert!(f.inv(&f.zero()).is_none());
    }

    #[test]
    fn smallest_modulus_is_deterministic() {
        // x^2 + 2 is the first irreducible quadratic over F_5 in digit order
        // (x^2, x^2+1, x^2+2 ... with x^2+1 = (x-2)(x+2)).
        let f = GaloisField::new(5, 2).unwrap();
        assert_eq!(f.modulus(), &[2, 0, 1]);
        let g = GaloisField::new(5, 2).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn extension_field_axioms() {
        let f = GaloisField::new(5, 3).unwrap();
        let elems = f.elements();
        assert_eq!(elems.len(), 125);
        for a in elems.iter().step_by(7) {
            if f.is_zero(a) {
                continue;
            }
            let ai = f.inv(a).unwrap();
            assert!(f.is_one(&f.mul(a, &ai)));
            // a^(q-1) = 1
            assert!(f.is_one(&f.pow(a, 124)));
        }
    }

    #[test]
    fn element_degree_and_order() {
        let f = GaloisField::new(5, 2).unwrap();
        assert_eq!(f.element_degree(&f.from_int(3)), 1);
        assert_eq!(f.element_degree(&f.generator()), 2);
        let orders: Vec<u128> = f.elements().iter().filter_map(|a| f.multiplicative_order(a)).collect();
        assert_eq!(orders.iter().filter(|&&o| o == 3).count(), 2);
        assert_eq!(orders.iter().filter(|&&o| o == 24).count(), 8);
    }

    #[test]
    fn rejects_reducible_modulus() {
        assert!(GaloisField::with_modulus(5, vec![1, 0, 1]).is_err());
        assert!(GaloisField::with_modulus(5, vec![2, 0, 1]).is_ok());
    }
}
