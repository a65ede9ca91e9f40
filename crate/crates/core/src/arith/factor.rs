//! Factorization of univariate polynomials over finite fields: square-free
//! decomposition, distinct-degree splitting, then Cantor–Zassenhaus
//! equal-degree splitting driven by a seeded generator.

use std::sync::atomic::{AtomicU64, Ordering};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::poly::{Poly, PolyRing};
use super::{ArithError, FieldElement, FiniteField, GaloisField, Ring};

pub const DEFAULT_SEED: u64 = 0x5eed_c0b1c;

static SEED: AtomicU64 = AtomicU64::new(DEFAULT_SEED);

/// Sets the seed used by [`ff_factor`] and [`roots`] for the rest of the
/// process. Results are sorted, so they do not depend on it.
pub fn set_factorization_seed(seed: u64) {
    SEED.store(seed, Ordering::Relaxed);
}

pub fn factorization_seed() -> u64 {
    SEED.load(Ordering::Relaxed)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Factorization {
    /// Leading coefficient of the input.
    pub unit: FieldElement,
    /// Monic irreducible factors with multiplicities, sorted by degree and then
    /// coefficients.
    pub factors: Vec<(Poly<FieldElement>, u32)>,
}

impl Factorization {
    pub fn expand(&self, field: &GaloisField) -> Poly<FieldElement> {
        let pr = PolyRing::new(field);
        let mut acc = pr.constant(self.unit.clone());
        for (g, m) in &self.factors {
            for _ in 0..*m {
                acc = pr.mul(&acc, g);
            }
        }
        acc
    }
}

/// Factor `poly` over `field` into monic irreducibles.
pub fn ff_factor(field: &GaloisField, poly: &Poly<FieldElement>) -> Result<Factorization, ArithError> {
    ff_factor_seeded(field, poly, factorization_seed())
}

pub fn ff_factor_seeded(
    field: &GaloisField,
    poly: &Poly<FieldElement>,
    seed: u64,
) -> Result<Factorization, ArithError> {
    let pr = PolyRing::new(field);
    let unit = poly.leading().ok_or(ArithError::ZeroPolynomial)?.clone();
    let f = pr.monic(poly);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut factors = Vec::new();
    for (sqf, mult) in square_free(field, &f) {
        for (g, d) in distinct_degree(field, &sqf) {
            for h in equal_degree(field, &g, d, &mut rng) {
                factors.push((h, mult));
            }
        }
    }
    // merge equal factors (square-free parts are coprime, but keep it tidy)
    factors.sort_by(|a, b| (a.0.coeffs.len(), &a.0.coeffs).cmp(&(b.0.coeffs.len(), &b.0.coeffs)));
    let mut merged: Vec<(Poly<FieldElement>, u32)> = Vec::new();
    for (g, m) in factors {
        match merged.last_mut() {
            Some((h, n)) if *h == g => *n += m,
            _ => merged.push((g, m)),
        }
    }
    Ok(Factorization { unit, factors: merged })
}

/// Roots of `poly` lying in `field`, sorted, without multiplicity.
pub fn roots(field: &GaloisField, poly: &Poly<FieldElement>) -> Vec<FieldElement> {
    roots_seeded(field, poly, factorization_seed())
}

pub fn roots_seeded(field: &GaloisField, poly: &Poly<FieldElement>, seed: u64) -> Vec<FieldElement> {
    let pr = PolyRing::new(field);
    if poly.is_zero() {
        return Vec::new();
    }
    let f = pr.monic(poly);
    if f.degree() == Some(0) {
        return Vec::new();
    }
    let xq = frobenius_power(field, &pr.x(), &f, 1);
    let g = pr.gcd(&f, &pr.sub(&xq, &pr.x()));
    if g.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<FieldElement> = equal_degree(field, &g, 1, &mut rng)
        .into_iter()
        .map(|l| field.neg(&l.coeffs[0]))
        .collect();
    out.sort();
    out
}

/// The roots of `x^2 + x + 1` in the field: the primitive cube roots of unity.
pub fn cube_roots_of_unity(field: &GaloisField) -> Vec<FieldElement> {
    let pr = PolyRing::new(field);
    let one = field.one();
    roots(field, &pr.from_coeffs(vec![one.clone(), one.clone(), one]))
}

/// An embedding `F_{p^k} -> F_{p^K}` (for `k | K`), given by the image of the
/// generator `t`: the smallest root of the small field's modulus.
pub fn field_embedding(small: &GaloisField, big: &GaloisField) -> Option<FieldElement> {
    if small.p() != big.p() || !big.k().is_multiple_of(small.k()) {
        return None;
    }
    if small.k() == 1 {
        return Some(big.generator());
    }
    let pr = PolyRing::new(big);
    let modulus = pr.from_coeffs(small.modulus().iter().map(|&c| big.embed_prime(c)).collect());
    roots(big, &modulus).into_iter().next()
}

/// The image of `x` under the embedding sending `t` to `image`.
pub fn embed_element(x: &FieldElement, image: &FieldElement, big: &GaloisField) -> FieldElement {
    if x.coeffs().len() == 1 {
        return big.embed_prime(x.constant());
    }
    x.coeffs().iter().rev().fold(big.zero(), |acc, &c| {
        big.add(&big.mul(&acc, image), &big.embed_prime(c))
    })
}

/// `a^(q^times) mod m` where `q` is the field size, by repeated p-th powers.
fn frobenius_power(
    field: &GaloisField,
    a: &Poly<FieldElement>,
    m: &Poly<FieldElement>,
    times: u32,
) -> Poly<FieldElement> {
    let pr = PolyRing::new(field);
    let mut x = pr.rem(a, m);
    for _ in 0..times * field.k() {
        x = pr.powmod(&x, field.p() as u128, m);
    }
    x
}

fn pth_root(field: &GaloisField, f: &Poly<FieldElement>) -> Poly<FieldElement> {
    let pr = PolyRing::new(field);
    let p = field.p() as usize;
    let coeffs = f
        .coeffs
        .iter()
        .step_by(p)
        .map(|c| {
            // c^(1/p) = c^(p^(k-1))
            let mut r = c.clone();
            for _ in 1..field.k() {
                r = field.frobenius(&r);
            }
            r
        })
        .collect();
    pr.from_coeffs(coeffs)
}

fn square_free(field: &GaloisField, f: &Poly<FieldElement>) -> Vec<(Poly<FieldElement>, u32)> {
    let pr = PolyRing::new(field);
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let df = pr.derivative(f);
    let mut c = pr.gcd(f, &df);
    let mut w = pr.div_rem(f, &c).0;
    let mut i = 1;
    while w.degree().unwrap_or(0) > 0 {
        let y = pr.gcd(&w, &c);
        let fac = pr.div_rem(&w, &y).0;
        if fac.degree().unwrap_or(0) > 0 {
            out.push((pr.monic(&fac), i));
        }
        w = y;
        c = pr.div_rem(&c, &w).0;
        i += 1;
    }
    if c.degree().unwrap_or(0) > 0 {
        let root = pth_root(field, &pr.monic(&c));
        let p = field.p() as u32;
        for (g, m) in square_free(field, &root) {
            out.push((g, m * p));
        }
    }
    out
}

fn distinct_degree(field: &GaloisField, f: &Poly<FieldElement>) -> Vec<(Poly<FieldElement>, u32)> {
    let pr = PolyRing::new(field);
    let mut out = Vec::new();
    let mut g = f.clone();
    let x = pr.x();
    let mut h = pr.rem(&x, &g);
    let mut d = 1u32;
    while g.degree().unwrap_or(0) >= 2 * d as usize {
        h = frobenius_power(field, &h, &g, 1);
        let fac = pr.gcd(&g, &pr.sub(&h, &x));
        if fac.degree().unwrap_or(0) > 0 {
            g = pr.div_rem(&g, &fac).0;
            h = pr.rem(&h, &g);
            out.push((fac, d));
        }
        d += 1;
    }
    if g.degree().unwrap_or(0) > 0 {
        let deg = g.degree().unwrap() as u32;
        out.push((g, deg));
    }
    out
}

/// Split a product of distinct monic irreducibles, each of degree `d`.
fn equal_degree(field: &GaloisField, f: &Poly<FieldElement>, d: u32, rng: &mut ChaCha8Rng) -> Vec<Poly<FieldElement>> {
    let pr = PolyRing::new(field);
    let n = f.degree().unwrap_or(0) as u32;
    if n == 0 {
        return Vec::new();
    }
    if n == d {
        return vec![pr.monic(f)];
    }
    if n == 1 {
        return vec![pr.monic(f)];
    }
    let q = field.size().expect("field too large");
    loop {
        let a = pr.from_coeffs((0..n).map(|_| field.random(rng)).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        // a^((q^d - 1)/2) = (a * a^q * ... * a^(q^(d-1)))^((q-1)/2)
        let mut norm = pr.rem(&a, f);
        let mut conj = norm.clone();
        for _ in 1..d {
            conj = frobenius_power(field, &conj, f, 1);
            norm = pr.mulmod(&norm, &conj, f);
        }
        let b = pr.powmod(&norm, (q - 1) / 2, f);
        let g = pr.gcd(f, &pr.sub(&b, &pr.one()));
        let dg = g.degree().unwrap_or(0) as u32;
        if dg > 0 && dg < n {
            let h = pr.div_rem(f, &g).0;
            let mut out = equal_degree(field, &g, d, rng);
            out.extend(equal_degree(field, &h, d, rng));
            return out;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(field: &GaloisField, c: &[i64]) -> Poly<FieldElement> {
        PolyRing::new(field).from_coeffs(c.iter().map(|&x| field.from_int(x)).collect())
    }

    /// Exhaustive root search, independent of the splitting code.
    fn brute_roots(field: &GaloisField, f: &Poly<FieldElement>) -> Vec<FieldElement> {
        let pr = PolyRing::new(field);
        let mut v: Vec<_> = field
            .elements()
            .into_iter()
            .filter(|x| field.is_zero(&pr.eval(f, x)))
            .collect();
        v.sort();
        v
    }

    #[test]
    fn results_do_not_depend_on_the_seed() {
        let f = GaloisField::new(7, 2).unwrap();
        let p = poly(&f, &[3, 0, 5, 1, 0, 2, 1]);
        let base = ff_factor_seeded(&f, &p, DEFAULT_SEED).unwrap();
        for seed in [1, 2, 99, u64::MAX] {
            assert_eq!(ff_factor_seeded(&f, &p, seed).unwrap(), base);
            assert_eq!(roots_seeded(&f, &p, seed), brute_roots(&f, &p));
        }
    }

    #[test]
    fn x2_x_1_irreducible_over_f5() {
        let f = GaloisField::prime(5).unwrap();
        let p = poly(&f, &[1, 1, 1]);
        assert!(brute_roots(&f, &p).is_empty());
        let fac = ff_factor(&f, &p).unwrap();
        assert_eq!(fac.factors, vec![(p, 1)]);
    }

    #[test]
    fn x3_minus_1_over_f7() {
        let f = GaloisField::prime(7).unwrap();
        let p = poly(&f, &[-1, 0, 0, 1]);
        let fac = ff_factor(&f, &p).unwrap();
        // sorted by coefficients: x-4 = x+3, x-2 = x+5, x-1 = x+6
        let expect: Vec<_> = [4, 2, 1].iter().map(|&r| (poly(&f, &[-r, 1]), 1)).collect();
        assert_eq!(fac.factors, expect);
        assert_eq!(brute_roots(&f, &p), roots(&f, &p));
    }

    #[test]
    fn x_is_irreducible() {
        for p in [5, 7, 11, 13] {
            let f = GaloisField::prime(p).unwrap();
            let x = poly(&f, &[0, 1]);
            assert_eq!(ff_factor(&f, &x).unwrap().factors, vec![(x, 1)]);
        }
    }

    #[test]
    fn zero_polynomial_rejected() {
        let f = GaloisField::prime(5).unwrap();
        assert_eq!(
            ff_factor(&f, &PolyRing::new(&f).zero()),
            Err(ArithError::ZeroPolynomial)
        );
    }

    #[test]
    fn repeated_and_pth_power_factors() {
        let f = GaloisField::prime(5).unwrap();
        let pr = PolyRing::new(&f);
        // (x+1)^5 (x^2+2)^2 (x-3)
        let a = (0..5).fold(pr.one(), |acc, _| pr.mul(&acc, &poly(&f, &[1, 1])));
        let b = pr.mul(&poly(&f, &[2, 0, 1]), &poly(&f, &[2, 0, 1]));
        let g = pr.mul(&pr.mul(&a, &b), &poly(&f, &[-3, 1]));
        let fac = ff_factor(&f, &pr.scale(&g, &f.from_int(3))).unwrap();
        assert_eq!(fac.unit, f.from_int(3));
        assert_eq!(fac.expand(&f), pr.scale(&g, &f.from_int(3)));
        let mults: Vec<u32> = fac.factors.iter().map(|x| x.1).collect();
        assert_eq!(mults, vec![5, 1, 2]);
    }

    #[test]
    fn cube_roots_of_unity_examples() {
        assert!(cube_roots_of_unity(&GaloisField::prime(5).unwrap()).is_empty());
        let f7 = GaloisField::prime(7).unwrap();
        assert_eq!(cube_roots_of_unity(&f7), vec![f7.from_int(2), f7.from_int(4)]);
        let f25 = GaloisField::new(5, 2).unwrap();
        let w = cube_roots_of_unity(&f25);
        assert_eq!(w.len(), 2);
        for x in &w {
            assert_eq!(f25.multiplicative_order(x), Some(3));
        }
    }

    #[test]
    fn roots_in_extension_match_brute_force() {
        let f = GaloisField::new(7, 2).unwrap();
        let pr = PolyRing::new(&f);
        for c in 1..6 {
            // x^3 - c, plus x^4 + x + c
            let a = poly(&f, &[-c, 0, 0, 1]);
            assert_eq!(roots(&f, &a), brute_roots(&f, &a));
            let b = pr.add(&poly(&f, &[c, 1, 0, 0, 1]), &pr.constant(f.generator()));
            assert_eq!(roots(&f, &b), brute_roots(&f, &b));
        }
    }

    #[test]
    fn factors_recombine_over_extension() {
        let f = GaloisField::new(5, 2).unwrap();
        let pr = PolyRing::new(&f);
        let t = f.generator();
        let g = pr.from_coeffs(vec![
            t.clone(),
            f.one(),
            t.clone(),
            f.zero(),
            f.zero(),
            f.one(),
            f.one(),
        ]);
        let fac = ff_factor(&f, &g).unwrap();
        assert_eq!(fac.expand(&f), g);
        for (h, _) in &fac.factors {
            let d = h.degree().unwrap() as u32;
            // irreducible of degree d: no roots in F_{25^j} for j < d dividing... check j = 1
            if d > 1 {
                assert!(brute_roots(&f, h).is_empty());
            }
        }
    }

    #[test]
    fn embedding_is_a_ring_homomorphism() {
        let small = GaloisField::new(5, 2).unwrap();
        let big = GaloisField::new(5, 6).unwrap();
        let t = field_embedding(&small, &big).unwrap();
        let elems = small.elements();
        for a in elems.iter().step_by(3) {
            for b in elems.iter().step_by(5) {
                let lhs = embed_element(&small.mul(a, b), &t, &big);
                let rhs = big.mul(&embed_element(a, &t, &big), &embed_element(b, &t, &big));
                assert_eq!(lhs, rhs);
                let lhs = embed_element(&small.add(a, b), &t, &big);
                let rhs = big.add(&embed_element(a, &t, &big), &embed_element(b, &t, &big));
                assert_eq!(lhs, rhs);
            }
        }
        assert!(field_embedding(&GaloisField::new(5, 4).unwrap(), &big).is_none());
    }
}
