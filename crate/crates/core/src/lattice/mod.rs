//! The Picard lattice of a smooth cubic surface over an algebraically closed
//! field, its 27 line classes, and cyclic groups acting on it.
//!
//! Basis: `(L, E1, ..., E6)` with intersection form `diag(1, -1, ..., -1)`.
//! Lines are indexed as `E1..E6` (0..6), `F_ij = L - E_i - E_j` for `i < j`
//! (6..21, lexicographic), and `G_j = 2L - sum_{i != j} E_i` (21..27).

pub mod cohomology;
pub mod snf;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use cohomology::{h0, h1_cyclic, tate_h0_cyclic, AbelianGroup, CohomologyResult, H0};
pub use snf::{smith_normal_form, IntMatrix, Snf};

pub const RANK: usize = 7;
pub const NUM_LINES: usize = 27;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("not a permutation of the 27 lines")]
    NotAPermutation,
    #[error("permutation does not preserve incidence: lines {0} and {1}")]
    PairingNotPreserved(usize, usize),
    #[error("permutation does not extend to a linear map (line {0})")]
    NoConsistentMatrix(usize),
    #[error("matrix is not an isometry of the intersection form")]
    NotAnIsometry,
    #[error("action has no finite order up to {0}")]
    InfiniteOrder(u32),
    #[error("sublattice is not stable under the action")]
    SublatticeNotStable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PicLattice {
    pub gram: Vec<Vec<i64>>,
    pub lines: Vec<[i64; RANK]>,
    pub names: Vec<String>,
    pub triples: Vec<[usize; 3]>,
    pub hyperplane: [i64; RANK],
}

fn pair_index(i: usize, j: usize) -> usize {
    // position of F_ij (i < j, zero-based) among the 15 pairs
    let mut idx = 0;
    for a in 0..6 {
        for b in a + 1..6 {
            if (a, b) == (i, j) {
                return idx;
            }
            idx += 1;
        }
    }
    unreachable!()
}

impl PicLattice {
    pub fn build() -> Self {
        let mut gram = vec![vec![0i64; RANK]; RANK];
        gram[0][0] = 1;
        for (i, row) in gram.iter_mut().enumerate().skip(1) {
            row[i] = -1;
        }
        let mut lines = Vec::with_capacity(NUM_LINES);
        let mut names = Vec::with_capacity(NUM_LINES);
        for i in 0..6 {
            let mut v = [0i64; RANK];
            v[i + 1] = 1;
            lines.push(v);
            names.push(format!("E{}", i + 1));
        }
        for i in 0..6 {
            for j in i + 1..6 {
                let mut v = [0i64; RANK];
                v[0] = 1;
                v[i + 1] = -1;
                v[j + 1] = -1;
                lines.push(v);
                names.push(format!("F{}{}", i + 1, j + 1));
            }
        }
        for j in 0..6 {
            let mut v = [-1i64; RANK];
            v[0] = 2;
            v[j + 1] = 0;
            lines.push(v);
            names.push(format!("G{}", j + 1));
        }
        let mut hyperplane = [-1i64; RANK];
        hyperplane[0] = 3;
        let mut lat = PicLattice {
            gram,
            lines,
            names,
            triples: Vec::new(),
            hyperplane,
        };
        let mut triples = Vec::new();
        for a in 0..NUM_LINES {
            for b in a + 1..NUM_LINES {
                if !lat.meets(a, b) {
                    continue;
                }
                for c in b + 1..NUM_LINES {
                    if lat.meets(a, c) && lat.meets(b, c) {
                        let s: Vec<i64> = (0..RANK)
                            .map(|k| lat.lines[a][k] + lat.lines[b][k] + lat.lines[c][k])
                            .collect();
                        if s == hyperplane {
                            triples.push([a, b, c]);
                        }
                    }
                }
            }
        }
        lat.triples = triples;
        lat
    }

    pub fn intersect(&self, a: &[i64], b: &[i64]) -> i64 {
        (0..RANK).map(|i| a[i] * self.gram[i][i] * b[i]).sum()
    }

    pub fn line_intersection(&self, i: usize, j: usize) -> i64 {
        self.intersect(&self.lines[i], &self.lines[j])
    }

    /// Distinct lines meeting in a point.
    pub fn meets(&self, i: usize, j: usize) -> bool {
        i != j && self.line_intersection(i, j) == 1
    }

    pub fn e(i: usize) -> usize {
        i
    }

    pub fn f(i: usize, j: usize) -> usize {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        6 + pair_index(a, b)
    }

    pub fn g(j: usize) -> usize {
        21 + j
    }

    pub fn index_of(&self, v: &[i64]) -> Option<usize> {
        self.lines.iter().position(|l| l[..] == *v)
    }

    pub fn gram_matrix(&self) -> IntMatrix {
        snf::from_i64(&self.gram)
    }

    pub fn line_vector(&self, i: usize) -> Vec<BigInt> {
        self.lines[i].iter().map(|&x| BigInt::from(x)).collect()
    }

    pub fn hyperplane_vector(&self) -> Vec<BigInt> {
        self.hyperplane.iter().map(|&x| BigInt::from(x)).collect()
    }
}

/// A finite cyclic group acting on `Z^7` through `generator` (columns are
/// images of basis vectors), together with the permutation of lines it induces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeAction {
    pub generator: Vec<Vec<i64>>,
    pub order: u32,
    pub permutation: Vec<usize>,
}

impl LatticeAction {
    pub fn matrix(&self) -> IntMatrix {
        snf::from_i64(&self.generator)
    }

    pub fn trivial() -> Self {
        LatticeAction {
            generator: snf::to_i64(&snf::identity(RANK)),
            order: 1,
            permutation: (0..NUM_LINES).collect(),
        }
    }
}

const MAX_ORDER: u32 = 1000;

/// Order of a matrix of finite order.
pub fn matrix_order(g: &IntMatrix) -> Result<u32, LatticeError> {
    let mut acc = g.clone();
    for n in 1..=MAX_ORDER {
        if snf::is_identity(&acc) {
            return Ok(n);
        }
        acc = snf::mul(&acc, g);
    }
    Err(LatticeError::InfiniteOrder(MAX_ORDER))
}

/// The isometry of the lattice inducing a given permutation of the lines.
pub fn action_from_line_permutation(perm: &[usize], lattice: &PicLattice) -> Result<LatticeAction, LatticeError> {
    let mut seen = [false; NUM_LINES];
    if perm.len() != NUM_LINES
        || perm
            .iter()
            .any(|&i| i >= NUM_LINES || std::mem::replace(&mut seen[i], true))
    {
        return Err(LatticeError::NotAPermutation);
    }
    for i in 0..NUM_LINES {
        for j in i + 1..NUM_LINES {
            if lattice.line_intersection(i, j) != lattice.line_intersection(perm[i], perm[j]) {
                return Err(LatticeError::PairingNotPreserved(i, j));
            }
        }
    }
    let img = |i: usize| lattice.lines[perm[i]];
    // L = F12 + E1 + E2
    let (f12, e1, e2) = (img(PicLattice::f(0, 1)), img(0), img(1));
    let mut cols: Vec<[i64; RANK]> = vec![std::array::from_fn(|k| f12[k] + e1[k] + e2[k])];
    cols.extend((0..6).map(img));
    let generator: Vec<Vec<i64>> = (0..RANK).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
    let g = snf::from_i64(&generator);
    for i in 0..NUM_LINES {
        let image = snf::mul_vec(&g, &lattice.line_vector(i));
        if image != lattice.line_vector(perm[i]) {
            return Err(LatticeError::NoConsistentMatrix(i));
        }
    }
    let gram = lattice.gram_matrix();
    if snf::mul(&snf::mul(&snf::transpose(&g), &gram), &g) != gram {
        return Err(LatticeError::NotAnIsometry);
    }
    let order = matrix_order(&g)?;
    Ok(LatticeAction {
        generator,
        order,
        permutation: perm.to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn configuration_counts() {
        let lat = PicLattice::build();
        assert_eq!(lat.lines.len(), 27);
        assert_eq!(lat.triples.len(), 45);
        for i in 0..27 {
            assert_eq!(lat.line_intersection(i, i), -1);
            assert_eq!((0..27).filter(|&j| lat.meets(i, j)).count(), 10);
            for j in 0..27 {
                if i != j {
                    assert!(matches!(lat.line_intersection(i, j), 0 | 1));
                }
            }
        }
        // each line lies in exactly five tritangent planes
        for i in 0..27 {
            assert_eq!(lat.triples.iter().filter(|t| t.contains(&i)).count(), 5);
        }
        assert_eq!(lat.intersect(&lat.hyperplane, &lat.hyperplane), 3);
    }

    #[test]
    fn lines_generate_the_lattice() {
        let lat = PicLattice::build();
        let m = snf::from_columns(&(0..27).map(|i| lat.line_vector(i)).collect::<Vec<_>>(), RANK);
        let s = smith_normal_form(&m, 27);
        assert_eq!(s.rank(), 7);
        assert!(s.diagonal().iter().all(|d| *d == BigInt::from(1)));
    }

    #[test]
    fn named_indices() {
        let lat = PicLattice::build();
        assert_eq!(lat.names[PicLattice::f(2, 4)], "F35");
        assert_eq!(lat.names[PicLattice::g(5)], "G6");
        assert!(lat.meets(PicLattice::e(0), PicLattice::g(1)));
        assert!(!lat.meets(PicLattice::e(0), PicLattice::g(0)));
    }

    #[test]
    fn identity_permutation() {
        let lat = PicLattice::build();
        let perm: Vec<usize> = (0..27).collect();
        let a = action_from_line_permutation(&perm, &lat).unwrap();
        assert_eq!(a, LatticeAction::trivial());
    }

    #[test]
    fn swapping_two_meeting_lines_is_rejected() {
        let lat = PicLattice::build();
        let mut perm: Vec<usize> = (0..27).collect();
        let (a, b) = (PicLattice::e(0), PicLattice::f(0, 1));
        assert!(lat.meets(a, b));
        perm.swap(a, b);
        assert!(matches!(
            action_from_line_permutation(&perm, &lat),
            Err(LatticeError::PairingNotPreserved(..))
        ));
    }

    #[test]
    fn permuting_the_blowup_indices() {
        // the symmetric group on {1..6} acts on the labels
        let lat = PicLattice::build();
        let sigma = [1usize, 2, 0, 3, 4, 5];
        let mut perm = vec![0; 27];
        for i in 0..6 {
            perm[PicLattice::e(i)] = PicLattice::e(sigma[i]);
            perm[PicLattice::g(i)] = PicLattice::g(sigma[i]);
            for j in i + 1..6 {
                perm[PicLattice::f(i, j)] = PicLattice::f(sigma[i], sigma[j]);
            }
        }
        let a = action_from_line_permutation(&perm, &lat).unwrap();
        assert_eq!(a.order, 3);
    }

    #[test]
    fn non_permutation_rejected() {
        let lat = PicLattice::build();
        let mut perm: Vec<usize> = (0..27).collect();
        perm[3] = 4;
        assert_eq!(
            action_from_line_permutation(&perm, &lat),
            Err(LatticeError::NotAPermutation)
        );
    }
}
