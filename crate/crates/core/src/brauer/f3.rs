//! The dual-basis construction for a family of independent functionals on a
//! vector space over `F_3`.
//!
//! Elements of `F_3` are stored as `u8` in `0..3`. The general finite field
//! type starts at characteristic 5, and mod-3 arithmetic is short enough to
//! write out.

use super::BrauerError;

fn reduce(x: i64) -> u8 {
    x.rem_euclid(3) as u8
}

/// `x^-1` for `x` in `{1, 2}`: both are their own inverse.
fn inv(x: u8) -> u8 {
    debug_assert!(x != 0);
    x
}

/// Row echelon form in place; returns the pivot columns.
fn row_reduce(m: &mut [Vec<u8>]) -> Vec<usize> {
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(pr) = (row..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(row, pr);
        let s = inv(m[row][col]);
        for x in m[row].iter_mut() {
            *x = reduce(*x as i64 * s as i64);
        }
        for r in 0..m.len() {
            if r != row && m[r][col] != 0 {
                let f = m[r][col] as i64;
                for c in 0..cols {
                    m[r][c] = reduce(m[r][c] as i64 - f * m[row][c] as i64);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<u8>]) -> usize {
    let mut m = rows.to_vec();
    row_reduce(&mut m).len()
}

/// `(α_1(v), ..., α_n(v))`.
pub fn evaluate(functionals: &[Vec<u8>], v: &[u8]) -> Vec<u8> {
    functionals
        .iter()
        .map(|a| reduce(a.iter().zip(v).map(|(&x, &y)| x as i64 * y as i64).sum()))
        .collect()
}

/// A right inverse of `v -> (α_1(v), ..., α_n(v))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualSurjection {
    pub functionals: Vec<Vec<u8>>,
    /// `dual_basis[i]` is the vector `v_i` with `α_j(v_i) = δ_ij` for the
    /// completed basis `α_1, ..., α_m` of the dual space.
    pub dual_basis: Vec<Vec<u8>>,
}

impl DualSurjection {
    pub fn dim(&self) -> usize {
        self.dual_basis.len()
    }

    /// `x_1 v_1 + ... + x_n v_n`, which maps to `target`.
    pub fn preimage(&self, target: &[u8]) -> Vec<u8> {
        assert_eq!(target.len(), self.functionals.len(), "one target value per functional");
        let mut v = vec![0u8; self.dim()];
        for (x, vi) in target.iter().zip(&self.dual_basis) {
            for (acc, &c) in v.iter_mut().zip(vi) {
                *acc = reduce(*acc as i64 + *x as i64 * c as i64);
            }
        }
        v
    }
}

/// Extends independent functionals on `F_3^dim` to a basis of the dual space
/// by adding coordinate functionals, then inverts the resulting matrix.
pub fn dual_surjectivity(functionals: &[Vec<u8>], dim: usize) -> Result<DualSurjection, BrauerError> {
    if functionals.iter().any(|a| a.len() != dim || a.iter().any(|&x| x > 2)) {
        return Err(BrauerError::DimensionMismatch { expected: dim });
    }
    if rank(functionals) != functionals.len() {
        return Err(BrauerError::DependentFunctionals);
    }
    let mut basis = functionals.to_vec();
    for j in 0..dim {
        if basis.len() == dim {
            break;
        }
        let mut e = vec![0u8; dim];
        e[j] = 1;
        basis.push(e);
        if rank(&basis) < basis.len() {
            basis.pop();
        }
    }
    // invert the square matrix whose rows are the α_i: its columns are the v_i
    let mut aug: Vec<Vec<u8>> = basis
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..dim).map(|j| u8::from(i == j)));
            r
        })
        .collect();
    row_reduce(&mut aug);
    let dual_basis = (0..dim).map(|i| (0..dim).map(|r| aug[r][dim + i]).collect()).collect();
    Ok(DualSurjection {
        functionals: functionals.to_vec(),
        dual_basis,
    })
}

/// All vectors of `F_3^dim`, in lexicographic order.
pub fn all_vectors(dim: usize) -> impl Iterator<Item = Vec<u8>> {
    (0..3usize.pow(dim as u32)).map(move |mut n| {
        let mut v = vec![0u8; dim];
        for x in v.iter_mut().rev() {
            *x = (n % 3) as u8;
            n /= 3;
        }
        v
    })
}
