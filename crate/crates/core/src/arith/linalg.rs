//! Dense linear algebra over a field.

use super::Field;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn row_reduce<F: Field>(field: &F, m: &mut [Vec<F::Elem>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !field.is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(r, pr);
        let inv = field.inv(&m[r][c]).expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = field.mul(x, &inv);
        }
        for i in 0..rows {
            if i != r && !field.is_zero(&m[i][c]) {
                let factor = m[i][c].clone();
                for j in 0..cols {
                    let t = field.mul(&factor, &m[r][j]);
                    m[i][j] = field.sub(&m[i][j], &t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(field: &F, m: &[Vec<F::Elem>]) -> usize {
    row_reduce(field, &mut m.to_vec()).len()
}

/// Basis of `{x : M x = 0}` for a matrix with `cols` columns.
pub fn nullspace<F: Field>(field: &F, m: &[Vec<F::Elem>], cols: usize) -> Vec<Vec<F::Elem>> {
    let mut a = m.to_vec();
    let pivots = row_reduce(field, &mut a);
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![field.zero(); cols];
            v[free] = field.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = field.neg(&a[r][free]);
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{GaloisField, Ring};

    #[test]
    fn nullspace_over_f7() {
        let f = GaloisField::prime(7).unwrap();
        let m: Vec<Vec<_>> = [[1, 2, 3], [2, 4, 6]]
            .iter()
            .map(|r| r.iter().map(|&x| f.from_int(x)).collect())
            .collect();
        assert_eq!(rank(&f, &m), 1);
        let ns = nullspace(&f, &m, 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            let dot = (0..3).fold(f.zero(), |acc, i| f.add(&acc, &f.mul(&m[0][i], &v[i])));
            assert!(f.is_zero(&dot));
        }
    }
}
