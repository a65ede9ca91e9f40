//! Homogeneous forms in up to four variables over any [`Ring`].

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::Ring;

/// Exponent vector; unused trailing variables carry exponent zero.
pub type Monomial = [u8; 4];

pub const VAR_NAMES_4: [&str; 4] = ["x", "y", "z", "w"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomogeneousForm<E> {
    nvars: usize,
    degree: u32,
    terms: BTreeMap<Monomial, E>,
}

/// A form of degree three; construction sites check the degree.
pub type HomogeneousCubicForm<E> = HomogeneousForm<E>;

pub fn monomial_degree(m: &Monomial) -> u32 {
    m.iter().map(|&e| e as u32).sum()
}

/// All exponent vectors of total degree `d` in `n` variables, in lexicographic order.
pub fn monomials(n: usize, d: u32) -> Vec<Monomial> {
    fn rec(n: usize, i: usize, left: u32, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if i == n - 1 {
            cur[i] = left as u8;
            out.push(*cur);
            cur[i] = 0;
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e as u8;
            rec(n, i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    rec(n, 0, d, &mut [0; 4], &mut out);
    out
}

impl<E: Clone + PartialEq> HomogeneousForm<E> {
    pub fn zero(nvars: usize, degree: u32) -> Self {
        assert!((1..=4).contains(&nvars), "between one and four variables");
        HomogeneousForm {
            nvars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Builds a form, dropping zero coefficients and summing repeated monomials.
    /// Panics if a monomial has the wrong degree or uses too many variables.
    pub fn from_terms<R, I>(ring: &R, nvars: usize, degree: u32, terms: I) -> Self
    where
        R: Ring<Elem = E>,
        I: IntoIterator<Item = (Monomial, E)>,
    {
        let mut f = Self::zero(nvars, degree);
        for (m, c) in terms {
            f.add_term(ring, m, c);
        }
        f
    }

    pub fn add_term<R: Ring<Elem = E>>(&mut self, ring: &R, m: Monomial, c: E) {
        assert_eq!(monomial_degree(&m), self.degree, "monomial {m:?} has wrong degree");
        assert!(
            m[self.nvars..].iter().all(|&e| e == 0),
            "monomial {m:?} uses too many variables"
        );
        let new = match self.terms.get(&m) {
            Some(old) => ring.add(old, &c),
            None => c,
        };
        if ring.is_zero(&new) {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, new);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, E> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&E> {
        self.terms.get(m)
    }

    pub fn coeff_or_zero<R: Ring<Elem = E>>(&self, ring: &R, m: &Monomial) -> E {
        self.terms.get(m).cloned().unwrap_or_else(|| ring.zero())
    }

    pub fn involves_var(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m[i] > 0)
    }

    pub fn map<F, T>(&self, mut f: F) -> HomogeneousForm<T>
    where
        F: FnMut(&E) -> T,
    {
        HomogeneousForm {
            nvars: self.nvars,
            degree: self.degree,
            terms: self.terms.iter().map(|(m, c)| (*m, f(c))).collect(),
        }
    }

    pub fn try_map<F, T, Err>(&self, mut f: F) -> Result<HomogeneousForm<T>, Err>
    where
        F: FnMut(&E) -> Result<T, Err>,
    {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| Ok((*m, f(c)?)))
            .collect::<Result<_, Err>>()?;
        Ok(HomogeneousForm {
            nvars: self.nvars,
            degree: self.degree,
            terms,
        })
    }

    /// Maps coefficients into another ring, dropping those that become zero.
    pub fn map_into<R2: Ring, F>(&self, ring: &R2, mut f: F) -> HomogeneousForm<R2::Elem>
    where
        F: FnMut(&E) -> R2::Elem,
    {
        HomogeneousForm::from_terms(
            ring,
            self.nvars,
            self.degree,
            self.terms.iter().map(|(m, c)| (*m, f(c))),
        )
    }

    /// Same form viewed in `n >= nvars` variables.
    pub fn with_nvars(&self, n: usize) -> Self {
        assert!(n >= self.nvars && n <= 4);
        HomogeneousForm {
            nvars: n,
            degree: self.degree,
            terms: self.terms.clone(),
        }
    }

    pub fn eval<R: Ring<Elem = E>>(&self, ring: &R, point: &[E]) -> E {
        assert_eq!(point.len(), self.nvars);
        let mut acc = ring.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.iter().enumerate().take(self.nvars) {
                if e > 0 {
                    t = ring.mul(&t, &ring.pow(&point[i], e as u64));
                }
            }
            acc = ring.add(&acc, &t);
        }
        acc
    }

    pub fn add<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree);
        let mut out = self.with_nvars(self.nvars.max(other.nvars));
        for (m, c) in &other.terms {
            out.add_term(ring, *m, c.clone());
        }
        out
    }

    pub fn neg<R: Ring<Elem = E>>(&self, ring: &R) -> Self {
        self.map(|c| ring.neg(c))
    }

    pub fn sub<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        self.add(ring, &other.neg(ring))
    }

    pub fn scale<R: Ring<Elem = E>>(&self, ring: &R, s: &E) -> Self {
        Self::from_terms(
            ring,
            self.nvars,
            self.degree,
            self.terms.iter().map(|(m, c)| (*m, ring.mul(c, s))),
        )
    }

    pub fn mul<R: Ring<Elem = E>>(&self, ring: &R, other: &Self) -> Self {
        let n = self.nvars.max(other.nvars);
        let mut out = Self::zero(n, self.degree + other.degree);
        for (ma, a) in &self.terms {
            for (mb, b) in &other.terms {
                let mut m = [0u8; 4];
                for i in 0..4 {
                    m[i] = ma[i] + mb[i];
                }
                out.add_term(ring, m, ring.mul(a, b));
            }
        }
        out
    }

    /// `∂F/∂x_i`.
    pub fn partial<R: Ring<Elem = E>>(&self, ring: &R, i: usize) -> Self {
        assert!(self.degree >= 1);
        let mut out = Self::zero(self.nvars, self.degree - 1);
        for (m, c) in &self.terms {
            if m[i] == 0 {
                continue;
            }
            let mut m2 = *m;
            m2[i] -= 1;
            out.add_term(ring, m2, ring.mul(c, &ring.from_int(m[i] as i64)));
        }
        out
    }

    /// The form `x -> F(A x)`: variable `i` is replaced by `sum_j A[i][j] x_j`.
    pub fn substitute<R: Ring<Elem = E>>(&self, ring: &R, matrix: &[Vec<E>]) -> Self {
        let n = self.nvars;
        assert_eq!(matrix.len(), n, "substitution matrix must be square of size n");
        let linear: Vec<Self> = matrix
            .iter()
            .map(|row| {
                assert_eq!(row.len(), n);
                Self::from_terms(
                    ring,
                    n,
                    1,
                    row.iter().enumerate().map(|(j, c)| {
                        let mut m = [0u8; 4];
                        m[j] = 1;
                        (m, c.clone())
                    }),
                )
            })
            .collect();
        // powers of each linear form, computed lazily
        let mut powers: Vec<Vec<Self>> = linear
            .iter()
            .map(|l| vec![Self::constant(ring, n, ring.one()), l.clone()])
            .collect();
        let mut out = Self::zero(n, self.degree);
        for (m, c) in &self.terms {
            let mut t = Self::constant(ring, n, c.clone());
            for i in 0..n {
                let e = m[i] as usize;
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap().mul(ring, &linear[i]);
                    powers[i].push(next);
                }
                if e > 0 {
                    t = t.mul(ring, &powers[i][e]);
                }
            }
            for (mm, cc) in t.terms {
                out.add_term(ring, mm, cc);
            }
        }
        out
    }

    fn constant<R: Ring<Elem = E>>(ring: &R, n: usize, c: E) -> Self {
        Self::from_terms(ring, n, 0, [([0u8; 4], c)])
    }

    /// Coefficients of the binary form `F(u r1 + v r2)`; entry `i` is the
    /// coefficient of `u^(d-i) v^i`.
    pub fn binary_restriction<R: Ring<Elem = E>>(&self, ring: &R, r1: &[E], r2: &[E]) -> Vec<E> {
        let d = self.degree as usize;
        let n = self.nvars;
        // powers[i][e] = (r1_i u + r2_i v)^e as dense binary coefficients
        let mut powers: Vec<Vec<Vec<E>>> = (0..n)
            .map(|i| vec![vec![ring.one()], vec![r1[i].clone(), r2[i].clone()]])
            .collect();
        let mut out = vec![ring.zero(); d + 1];
        for (m, c) in &self.terms {
            let mut t = vec![c.clone()];
            for i in 0..n {
                let e = m[i] as usize;
                while powers[i].len() <= e {
                    let next = binary_mul(ring, powers[i].last().unwrap(), &powers[i][1]);
                    powers[i].push(next);
                }
                if e > 0 {
                    t = binary_mul(ring, &t, &powers[i][e]);
                }
            }
            for (k, x) in t.iter().enumerate() {
                out[k] = ring.add(&out[k], x);
            }
        }
        out
    }

    pub fn to_string_with<F>(&self, mut coeff: F) -> String
    where
        F: FnMut(&E) -> (bool, String),
    {
        let names = &VAR_NAMES_4;
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let (negative, mag) = coeff(c);
            let mono: Vec<String> = (0..self.nvars)
                .filter(|&i| m[i] > 0)
                .map(|i| {
                    if m[i] == 1 {
                        names[i].to_string()
                    } else {
                        format!("{}^{}", names[i], m[i])
                    }
                })
                .collect();
            if idx == 0 {
                if negative {
                    s.push('-');
                }
            } else {
                s.push_str(if negative { " - " } else { " + " });
            }
            let mono = mono.join("*");
            if mono.is_empty() {
                s.push_str(&mag);
            } else if mag == "1" {
                s.push_str(&mono);
            } else {
                s.push_str(&mag);
                s.push('*');
                s.push_str(&mono);
            }
        }
        s
    }
}

fn binary_mul<R: Ring>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
    let mut out = vec![ring.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = ring.add(&out[i + j], &ring.mul(x, y));
        }
    }
    out
}
