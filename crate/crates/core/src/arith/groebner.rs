//! Buchberger's algorithm over a prime field, in at most four variables with
//! the graded reverse lexicographic order.
//!
//! Used to certify that a system of homogeneous polynomials has no common
//! projective zero over the algebraic closure: this happens exactly when the
//! ideal is zero-dimensional, i.e. every variable has a pure power among the
//! leading monomials of a Gröbner basis.

use std::cmp::Ordering;

use super::form::{monomial_degree, HomogeneousForm, Monomial};
use super::gf::fp;
use super::{FieldElement, GaloisField};

/// Terms sorted by decreasing grevlex order; coefficients in `[1, p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePoly {
    terms: Vec<(Monomial, u64)>,
}

pub fn grevlex(a: &Monomial, b: &Monomial) -> Ordering {
    let (da, db) = (monomial_degree(a), monomial_degree(b));
    if da != db {
        return da.cmp(&db);
    }
    for i in (0..4).rev() {
        if a[i] != b[i] {
            // smaller exponent in the last differing variable wins
            return b[i].cmp(&a[i]);
        }
    }
    Ordering::Equal
}

fn divides(a: &Monomial, b: &Monomial) -> bool {
    (0..4).all(|i| a[i] <= b[i])
}

fn lcm(a: &Monomial, b: &Monomial) -> Monomial {
    std::array::from_fn(|i| a[i].max(b[i]))
}

fn quotient(a: &Monomial, b: &Monomial) -> Monomial {
    std::array::from_fn(|i| a[i] - b[i])
}

impl SparsePoly {
    fn from_map(mut terms: Vec<(Monomial, u64)>) -> Self {
        terms.retain(|(_, c)| *c != 0);
        terms.sort_by(|a, b| grevlex(&b.0, &a.0));
        SparsePoly { terms }
    }

    /// Converts a form with prime-field coefficients.
    pub fn from_form(f: &HomogeneousForm<FieldElement>) -> Self {
        assert!(f.terms().values().all(|c| c.is_prime_field_element()));
        Self::from_map(f.terms().iter().map(|(m, c)| (*m, c.constant())).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    fn monic(mut self, p: u64) -> Self {
        if let Some(&(_, c)) = self.terms.first() {
            let ci = fp::inv_mod(c, p);
            for t in &mut self.terms {
                t.1 = t.1 * ci % p;
            }
        }
        self
    }

    /// `self - c * x^shift * other`
    fn sub_scaled(&self, other: &Self, c: u64, shift: &Monomial, p: u64) -> Self {
        let mut out: Vec<(Monomial, u64)> = Vec::with_capacity(self.terms.len() + other.terms.len());
        let shifted = other.terms.iter().map(|(m, k)| {
            let mm: Monomial = std::array::from_fn(|i| m[i] + shift[i]);
            (mm, (p - k * c % p) % p)
        });
        let mut a = self.terms.iter().cloned().peekable();
        let mut b = shifted.peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => out.push(a.next().unwrap()),
                (None, Some(_)) => out.push(b.next().unwrap()),
                (Some(x), Some(y)) => match grevlex(&x.0, &y.0) {
                    Ordering::Greater => out.push(a.next().unwrap()),
                    Ordering::Less => out.push(b.next().unwrap()),
                    Ordering::Equal => {
                        let (m, c1) = a.next().unwrap();
                        let (_, c2) = b.next().unwrap();
                        let s = (c1 + c2) % p;
                        if s != 0 {
                            out.push((m, s));
                        }
                    }
                },
            }
        }
        out.retain(|t| t.1 != 0);
        SparsePoly { terms: out }
    }

    /// Full reduction modulo a list of monic polynomials.
    fn reduce(&self, basis: &[SparsePoly], p: u64) -> SparsePoly {
        let mut f = self.clone();
        let mut rem: Vec<(Monomial, u64)> = Vec::new();
        while let Some(&(m, c)) = f.terms.first() {
            match basis.iter().find(|g| divides(g.leading_monomial().unwrap(), &m)) {
                Some(g) => {
                    let shift = quotient(&m, g.leading_monomial().unwrap());
                    f = f.sub_scaled(g, c, &shift, p);
                }
                None => {
                    rem.push((m, c));
                    f.terms.remove(0);
                }
            }
        }
        SparsePoly { terms: rem }
    }
}

fn s_poly(f: &SparsePoly, g: &SparsePoly, p: u64) -> SparsePoly {
    let (lf, lg) = (f.leading_monomial().unwrap(), g.leading_monomial().unwrap());
    let l = lcm(lf, lg);
    // both monic
    let a = SparsePoly {
        terms: f
            .terms
            .iter()
            .map(|(m, c)| (std::array::from_fn(|i| m[i] + l[i] - lf[i]), *c))
            .collect(),
    };
    a.sub_scaled(g, 1, &quotient(&l, lg), p)
}

/// A Gröbner basis (monic, not necessarily reduced) of the ideal generated by `polys`.
pub fn groebner_basis(polys: &[SparsePoly], p: u64) -> Vec<SparsePoly> {
    let mut basis: Vec<SparsePoly> = Vec::new();
    for f in polys {
        let r = f.reduce(&basis, p);
        if !r.is_zero() {
            basis.push(r.monic(p));
        }
    }
    let mut pairs: Vec<(usize, usize)> = (0..basis.len()).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    while let Some((i, j)) = pairs.pop() {
        let (li, lj) = (
            basis[i].leading_monomial().unwrap(),
            basis[j].leading_monomial().unwrap(),
        );
        // coprime leading monomials reduce to zero
        if (0..4).all(|v| li[v] == 0 || lj[v] == 0) {
            continue;
        }
        let r = s_poly(&basis[i], &basis[j], p).reduce(&basis, p);
        if !r.is_zero() {
            let k = basis.len();
            basis.push(r.monic(p));
            pairs.extend((0..k).map(|i| (i, k)));
        }
    }
    basis
}

/// Whether homogeneous polynomials in `nvars` variables over F_p have only the
/// trivial common zero over the algebraic closure.
pub fn only_trivial_common_zero(polys: &[SparsePoly], nvars: usize, p: u64) -> bool {
    let basis = groebner_basis(polys, p);
    (0..nvars).all(|v| {
        basis.iter().any(|g| {
            let m = g.leading_monomial().unwrap();
            (0..4).all(|i| i == v || m[i] == 0)
        })
    })
}

/// Convenience wrapper for forms over a prime field.
pub fn forms_have_no_common_zero(field: &GaloisField, forms: &[HomogeneousForm<FieldElement>]) -> bool {
    assert_eq!(field.k(), 1, "Gröbner certificates are implemented over prime fields");
    let nvars = forms.iter().map(|f| f.nvars()).max().unwrap_or(0);
    let polys: Vec<SparsePoly> = forms.iter().map(SparsePoly::from_form).collect();
    only_trivial_common_zero(&polys, nvars, field.p())
}
