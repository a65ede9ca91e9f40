//! Cohomology of finite cyclic groups acting on lattices.
//!
//! For a generator `g` of order `n` and norm `N = 1 + g + ... + g^(n-1)`:
//! `H^0 = ker(g - 1)`, `H^1 = ker N / im(g - 1)` and the Tate group
//! `Ĥ^0 = ker(g - 1) / im N`, all computed with Smith normal forms.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::snf::{self, IntMatrix};
use super::{LatticeAction, LatticeError};

/// `Z^free_rank x Z/d_1 x ... x Z/d_r` with `d_i > 1`, `d_i | d_(i+1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub free_rank: usize,
    pub invariants: Vec<u64>,
}

impl AbelianGroup {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariants.is_empty()
    }

    /// Order of a finite group.
    pub fn order(&self) -> Option<u64> {
        (self.free_rank == 0).then(|| self.invariants.iter().product())
    }

    /// `Z^k / (column span of b)` where `b` has `k` rows and `c` columns.
    pub fn cokernel(b: &IntMatrix, k: usize, c: usize) -> Self {
        let s = snf::smith_normal_form(b, c);
        let diag = s.diagonal();
        let rank = s.rank();
        AbelianGroup {
            free_rank: k - rank,
            invariants: diag
                .iter()
                .filter(|d| !d.is_zero() && !d.is_one())
                .map(|d| d.to_u64().expect("invariant fits in u64"))
                .collect(),
        }
    }
}

impl std::fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = self.invariants.iter().map(|d| format!("Z/{d}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.insert(0, "Z".into()),
            r => parts.insert(0, format!("Z^{r}")),
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct H0 {
    pub rank: usize,
    /// Saturated basis in ambient coordinates.
    pub basis: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyResult {
    pub h0_rank: usize,
    pub h0_basis: Vec<Vec<i64>>,
    pub h1: AbelianGroup,
}

impl CohomologyResult {
    pub fn h1_invariants(&self) -> &[u64] {
        &self.h1.invariants
    }
}

fn norm(g: &IntMatrix, order: u32) -> IntMatrix {
    let k = g.len();
    let mut acc = snf::zeros(k, k);
    let mut pw = snf::identity(k);
    for _ in 0..order {
        acc = snf::add(&acc, &pw);
        pw = snf::mul(&pw, g);
    }
    acc
}

fn g_minus_one(g: &IntMatrix) -> IntMatrix {
    snf::sub(g, &snf::identity(g.len()))
}

/// Coordinates of each column of `targets` in the lattice basis `basis`;
/// `None` if some column is outside the span.
fn coordinates(basis: &[Vec<BigInt>], targets: &[Vec<BigInt>], ambient: usize) -> Option<IntMatrix> {
    let b = snf::from_columns(basis, ambient);
    let cols = targets
        .iter()
        .map(|t| snf::solve(&b, t, basis.len()))
        .collect::<Option<Vec<_>>>()?;
    Some(snf::from_columns(&cols, basis.len()))
}

/// The matrix of `g` on the sublattice spanned by `basis`.
pub fn restrict(g: &IntMatrix, basis: &[Vec<BigInt>]) -> Result<IntMatrix, LatticeError> {
    let n = g.len();
    let images: Vec<Vec<BigInt>> = basis.iter().map(|b| snf::mul_vec(g, b)).collect();
    coordinates(basis, &images, n).ok_or(LatticeError::SublatticeNotStable)
}

/// Fixed sublattice of `g` as a saturated basis.
pub fn fixed_basis(g: &IntMatrix) -> Vec<Vec<BigInt>> {
    snf::kernel(&g_minus_one(g), g.len())
        .into_iter()
        .map(|v| snf::primitive(&v))
        .collect()
}

pub fn h1_matrix(g: &IntMatrix, order: u32) -> AbelianGroup {
    let k = g.len();
    let kern = snf::kernel(&norm(g, order), k);
    let image = snf::columns(&g_minus_one(g));
    let coords = coordinates(&kern, &image, k).expect("(g - 1) maps into ker N");
    AbelianGroup::cokernel(&coords, kern.len(), k)
}

pub fn tate_h0_matrix(g: &IntMatrix, order: u32) -> AbelianGroup {
    let k = g.len();
    let fixed = fixed_basis(g);
    let image = snf::columns(&norm(g, order));
    let coords = coordinates(&fixed, &image, k).expect("N maps into the fixed lattice");
    AbelianGroup::cokernel(&coords, fixed.len(), k)
}

fn on_sublattice(
    action: &LatticeAction,
    sub: Option<&[Vec<BigInt>]>,
) -> Result<(IntMatrix, Option<IntMatrix>), LatticeError> {
    let g = action.matrix();
    match sub {
        None => Ok((g, None)),
        Some(basis) => {
            let r = restrict(&g, basis)?;
            Ok((r, Some(snf::from_columns(basis, g.len()))))
        }
    }
}

/// `H^0` of the action, optionally restricted to a stable sublattice given by a basis.
pub fn h0(action: &LatticeAction, sub: Option<&[Vec<BigInt>]>) -> Result<H0, LatticeError> {
    let (g, embed) = on_sublattice(action, sub)?;
    let basis: Vec<Vec<i64>> = fixed_basis(&g)
        .into_iter()
        .map(|v| {
            let v = match &embed {
                Some(b) => snf::primitive(&snf::mul_vec(b, &v)),
                None => v,
            };
            v.iter().map(|x| x.to_i64().expect("small entries")).collect()
        })
        .collect();
    Ok(H0 {
        rank: basis.len(),
        basis,
    })
}

pub fn h1_cyclic(action: &LatticeAction, sub: Option<&[Vec<BigInt>]>) -> Result<CohomologyResult, LatticeError> {
    let zero = h0(action, sub)?;
    let (g, _) = on_sublattice(action, sub)?;
    Ok(CohomologyResult {
        h0_rank: zero.rank,
        h0_basis: zero.basis,
        h1: h1_matrix(&g, action.order),
    })
}

pub fn tate_h0_cyclic(action: &LatticeAction, sub: &[Vec<BigInt>]) -> Result<AbelianGroup, LatticeError> {
    let (g, _) = on_sublattice(action, Some(sub))?;
    Ok(tate_h0_matrix(&g, action.order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{action_from_line_permutation, PicLattice};

    fn unit_vector(n: usize, i: usize) -> Vec<BigInt> {
        (0..n)
            .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
            .collect()
    }

    fn shift3() -> IntMatrix {
        snf::from_i64(&[vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]])
    }

    #[test]
    fn trivial_action() {
        let a = LatticeAction::trivial();
        let r = h1_cyclic(&a, None).unwrap();
        assert_eq!(r.h0_rank, 7);
        assert!(r.h1.is_trivial());
    }

    #[test]
    fn cyclic_shift_on_z3() {
        assert!(h1_matrix(&shift3(), 3).is_trivial());
        // fixed = Z(1,1,1), norms = Z(1,1,1): Tate group trivial
        assert!(tate_h0_matrix(&shift3(), 3).is_trivial());
        assert_eq!(fixed_basis(&shift3()), vec![vec![BigInt::one(); 3]]);
    }

    #[test]
    fn trivial_action_on_z_has_tate_group_z_mod_n() {
        let g = snf::identity(1);
        assert_eq!(
            tate_h0_matrix(&g, 3),
            AbelianGroup {
                free_rank: 0,
                invariants: vec![3]
            }
        );
        assert!(h1_matrix(&g, 3).is_trivial());
    }

    #[test]
    fn negation_has_h1_z_mod_2() {
        let g = snf::from_i64(&[vec![-1]]);
        assert_eq!(h1_matrix(&g, 2).invariants, vec![2]);
        assert!(tate_h0_matrix(&g, 2).is_trivial());
    }

    #[test]
    fn relabelling_action_on_pic() {
        // a 3-cycle of the exceptional labels: H^1 is trivial for a
        // permutation module-like action; H^0 has rank 5
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
        let r = h1_cyclic(&a, None).unwrap();
        assert_eq!(r.h0_rank, 5);
        assert!(r.h1.is_trivial());
    }

    #[test]
    fn unstable_sublattice() {
        let a = LatticeAction {
            generator: snf::to_i64(&shift3()),
            order: 3,
            permutation: vec![],
        };
        let sub = vec![unit_vector(3, 0)];
        assert_eq!(h0(&a, Some(&sub)), Err(LatticeError::SublatticeNotStable));
    }
}
