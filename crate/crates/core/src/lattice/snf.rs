//! Integer matrices: Smith normal form with unimodular witnesses, kernels,
//! and exact solving in lattices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Row-major integer matrix.
pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn from_i64(rows: &[Vec<i64>]) -> IntMatrix {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

pub fn to_i64(m: &IntMatrix) -> Vec<Vec<i64>> {
    m.iter()
        .map(|r| r.iter().map(|x| x.to_i64().expect("entry fits in i64")).collect())
        .collect()
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

pub fn zeros(m: usize, n: usize) -> IntMatrix {
    vec![vec![BigInt::zero(); n]; m]
}

pub fn ncols(a: &IntMatrix, fallback: usize) -> usize {
    a.first().map_or(fallback, |r| r.len())
}

pub fn mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    row.iter()
                        .zip(b.iter())
                        .fold(BigInt::zero(), |acc, (x, brow)| acc + x * &brow[j])
                })
                .collect()
        })
        .collect()
}

pub fn mul_vec(a: &IntMatrix, v: &[BigInt]) -> Vec<BigInt> {
    a.iter()
        .map(|row| row.iter().zip(v).fold(BigInt::zero(), |acc, (x, y)| acc + x * y))
        .collect()
}

pub fn sub(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x - y).collect())
        .collect()
}

pub fn add(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect())
        .collect()
}

pub fn transpose(a: &IntMatrix) -> IntMatrix {
    let n = a.first().map_or(0, |r| r.len());
    (0..n).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Matrix whose columns are the given vectors (`rows` rows when empty).
pub fn from_columns(cols: &[Vec<BigInt>], rows: usize) -> IntMatrix {
    (0..rows).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect()
}

pub fn columns(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    transpose(a)
}

pub fn pow(a: &IntMatrix, e: u32) -> IntMatrix {
    (0..e).fold(identity(a.len()), |acc, _| mul(&acc, a))
}

pub fn is_identity(a: &IntMatrix) -> bool {
    *a == identity(a.len())
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det(a: &IntMatrix) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// `U A V = D` with `U`, `V` unimodular and `D` diagonal, `d_i | d_(i+1)`, `d_i >= 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<BigInt> {
        let r = self.d.len().min(ncols(&self.d, 0));
        (0..r).map(|i| self.d[i][i].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

/// Smith normal form of an `m x n` matrix (`n` is needed when `m = 0`).
pub fn smith_normal_form(a: &IntMatrix, n: usize) -> Snf {
    let m = a.len();
    let mut d = a.clone();
    let mut u = identity(m);
    let mut v = identity(n);
    for t in 0..m.min(n) {
        loop {
            // smallest nonzero entry of the trailing block as pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if !d[i][j].is_zero() && best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return Snf { u, d, v };
            };
            d.swap(t, pi);
            u.swap(t, pi);
            for row in d.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }
            let mut clean = true;
            for i in t + 1..m {
                if d[i][t].is_zero() {
                    continue;
                }
                let q = d[i][t].div_floor(&d[t][t]);
                for j in 0..n {
                    let x = &q * &d[t][j];
                    d[i][j] -= x;
                }
                for j in 0..m {
                    let x = &q * &u[t][j];
                    u[i][j] -= x;
                }
                clean &= d[i][t].is_zero();
            }
            for j in t + 1..n {
                if d[t][j].is_zero() {
                    continue;
                }
                let q = d[t][j].div_floor(&d[t][t]);
                for i in 0..m {
                    let x = &q * &d[i][t];
                    d[i][j] -= x;
                }
                for i in 0..n {
                    let x = &q * &v[i][t];
                    v[i][j] -= x;
                }
                clean &= d[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            let bad_row = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d[i][j].is_multiple_of(&d[t][t])));
            match bad_row {
                Some(i) => {
                    for j in 0..n {
                        let x = d[i][j].clone();
                        d[t][j] += x;
                    }
                    for j in 0..m {
                        let x = u[i][j].clone();
                        u[t][j] += x;
                    }
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            for j in 0..n {
                d[t][j] = -d[t][j].clone();
            }
            for j in 0..m {
                u[t][j] = -u[t][j].clone();
            }
        }
    }
    Snf { u, d, v }
}

/// A basis (as columns of the returned vectors) of `{x in Z^n : A x = 0}`.
/// The basis is saturated: it spans the kernel as a lattice.
pub fn kernel(a: &IntMatrix, n: usize) -> Vec<Vec<BigInt>> {
    let s = smith_normal_form(a, n);
    let r = s.rank();
    (r..n).map(|j| s.v.iter().map(|row| row[j].clone()).collect()).collect()
}

/// An integer solution of `A x = b`, if one exists.
pub fn solve(a: &IntMatrix, b: &[BigInt], n: usize) -> Option<Vec<BigInt>> {
    let s = smith_normal_form(a, n);
    let ub = mul_vec(&s.u, b);
    let diag = s.diagonal();
    let mut y = vec![BigInt::zero(); n];
    for (i, c) in ub.iter().enumerate() {
        match diag.get(i) {
            Some(d) if !d.is_zero() => {
                let (q, r) = c.div_rem(d);
                if !r.is_zero() {
                    return None;
                }
                y[i] = q;
            }
            _ => {
                if !c.is_zero() {
                    return None;
                }
            }
        }
    }
    Some(mul_vec(&s.v, &y))
}

/// Divide a nonzero vector by the gcd of its entries and make the first
/// nonzero entry positive.
pub fn primitive(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    let sign = match v.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => -BigInt::one(),
        _ => BigInt::one(),
    };
    v.iter().map(|x| x / &g * &sign).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check_witness(a: &IntMatrix, n: usize) -> Snf {
        let s = smith_normal_form(a, n);
        assert_eq!(mul(&mul(&s.u, a), &s.v), s.d);
        assert!(det(&s.u).abs().is_one());
        assert!(det(&s.v).abs().is_one());
        let diag = s.diagonal();
        for i in 0..s.d.len() {
            for j in 0..n {
                if i != j {
                    assert!(s.d[i][j].is_zero());
                }
            }
        }
        for w in diag.windows(2) {
            if !w[1].is_zero() {
                assert!(w[1].is_multiple_of(&w[0]));
            } else {
                // zeros trail
                assert!(diag.iter().skip_while(|x| !x.is_zero()).all(|x| x.is_zero()));
            }
        }
        s
    }

    #[test]
    fn identity_matrix() {
        let s = check_witness(&identity(3), 3);
        assert_eq!(s.u, identity(3));
        assert_eq!(s.d, identity(3));
        assert_eq!(s.v, identity(3));
    }

    #[test]
    fn two_three() {
        let s = check_witness(&from_i64(&[vec![2, 0], vec![0, 3]]), 2);
        assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn zero_matrix() {
        let s = check_witness(&zeros(2, 3), 3);
        assert_eq!(s.d, zeros(2, 3));
        assert_eq!(s.u, identity(2));
        assert_eq!(s.v, identity(3));
    }

    #[test]
    fn kernel_and_solve() {
        let a = from_i64(&[vec![1, 1, 1]]);
        let k = kernel(&a, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(mul_vec(&a, v).iter().all(|x| x.is_zero()));
        }
        let b = from_i64(&[vec![2, 4]]);
        assert!(solve(&b, &[BigInt::from(3)], 2).is_none());
        let x = solve(&b, &[BigInt::from(6)], 2).unwrap();
        assert_eq!(mul_vec(&b, &x), vec![BigInt::from(6)]);
    }

    #[test]
    fn determinant() {
        assert_eq!(det(&from_i64(&[vec![2, 1], vec![7, 4]])), BigInt::from(1));
        assert_eq!(
            det(&from_i64(&[vec![0, 2, 1], vec![1, 0, 0], vec![3, 1, 5]])),
            BigInt::from(-9)
        );
    }

    proptest! {
        #[test]
        fn snf_witnesses_hold(rows in prop::collection::vec(prop::collection::vec(-9i64..10, 4), 1..5)) {
            let a = from_i64(&rows);
            let s = check_witness(&a, 4);
            // product of nonzero invariants equals the gcd of maximal minors for full rank square input
            if rows.len() == 4 {
                let prod = s.diagonal().iter().fold(BigInt::one(), |p, x| p * x);
                prop_assert_eq!(prod, det(&a).abs());
            }
        }
    }
}
