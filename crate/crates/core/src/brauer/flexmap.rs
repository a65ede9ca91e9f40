//! The map from the Picard lattice to `Pic` of the special fibre's plane
//! section: reduce a line to the line of the cone through its flex, then
//! restrict to the curve.
//!
//! `Pic` of the curve is written as `Z ⊕ J` with the flex `O` as origin, and
//! each line goes to `(1, [P - O])` for its flex `P`. The flex differences
//! lie in the 3-torsion of `J`, so only their coordinates in a basis of the
//! subgroup they generate are stored, modulo 3.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::arith::{FiniteField, GaloisField};
use crate::curve::{three_torsion, CurvePoint, GroupLaw, PlaneCubic};
use crate::lattice::{self, snf, AbelianGroup, LatticeAction, LatticeError, PicLattice, NUM_LINES, RANK};
use crate::lines::LineConfiguration;

use super::BrauerError;

/// Point enumeration over fields larger than this is skipped when cross-checking
/// the 3-torsion.
const ENUMERATION_CAP: u128 = 20_000;

#[derive(Clone, Debug)]
pub struct FlexMap {
    pub field: GaloisField,
    pub curve: PlaneCubic,
    pub origin: CurvePoint,
    pub flexes: Vec<CurvePoint>,
    /// Basis of the subgroup generated by the differences of the flexes that
    /// some line passes over.
    pub torsion_basis: Vec<CurvePoint>,
    /// `line_flex[i]` is the flex of abstract line `i`.
    pub line_flex: Vec<usize>,
    /// Image of each abstract line: degree, then coordinates mod 3.
    pub columns: Vec<Vec<i64>>,
    /// The same map on the lattice basis `(L, E1, ..., E6)`.
    pub matrix: Vec<Vec<i64>>,
}

impl FlexMap {
    /// Builds the map from the flex of every abstract line.
    pub fn from_line_flexes(
        curve: &PlaneCubic,
        field: &GaloisField,
        flexes: Vec<CurvePoint>,
        line_flex: Vec<usize>,
    ) -> Result<Self, BrauerError> {
        if line_flex.len() != NUM_LINES || line_flex.iter().any(|&f| f >= flexes.len()) {
            return Err(BrauerError::FlexIndex);
        }
        let origin = flexes.iter().min().cloned().ok_or(BrauerError::FlexIndex)?;
        let law = GroupLaw::new(curve, field, origin.clone());
        let mut torsion_basis: Vec<CurvePoint> = Vec::new();
        let mut span = law.subgroup_generated(&[]);
        let used: std::collections::BTreeSet<usize> = line_flex.iter().copied().collect();
        for p in used.iter().map(|&f| &flexes[f]) {
            if !span.contains(p) {
                torsion_basis.push(p.clone());
                span = law.subgroup_generated(&torsion_basis);
            }
        }
        let mut coords = vec![Vec::new(); flexes.len()];
        for &f in &used {
            coords[f] = coordinates(&law, &torsion_basis, &flexes[f]).ok_or(BrauerError::FlexNotTorsion)?;
        }
        let columns: Vec<Vec<i64>> = line_flex
            .iter()
            .map(|&f| std::iter::once(1).chain(coords[f].iter().copied()).collect())
            .collect();
        let rows = 1 + torsion_basis.len();
        let col = |i: usize| &columns[i];
        let f12 = PicLattice::f(0, 1);
        let mut basis_images: Vec<Vec<i64>> = vec![(0..rows).map(|r| col(f12)[r] + col(0)[r] + col(1)[r]).collect()];
        basis_images.extend((0..6).map(|k| col(k).clone()));
        let matrix: Vec<Vec<i64>> = (0..rows)
            .map(|r| basis_images.iter().map(|c| normalize_row(r, c[r])).collect())
            .collect();
        let fm = FlexMap {
            field: field.clone(),
            curve: curve.clone(),
            origin,
            flexes,
            torsion_basis,
            line_flex,
            columns,
            matrix,
        };
        fm.verify_relations()?;
        Ok(fm)
    }

    /// The image of a lattice vector: degree exactly, torsion part mod 3.
    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        self.matrix
            .iter()
            .enumerate()
            .map(|(r, row)| normalize_row(r, row.iter().zip(v).map(|(a, b)| a * b).sum()))
            .collect()
    }

    /// The linear extension agrees with the prescribed image of every line.
    fn verify_relations(&self) -> Result<(), BrauerError> {
        let lat = PicLattice::build();
        for (i, line) in lat.lines.iter().enumerate() {
            let expected: Vec<i64> = self.columns[i]
                .iter()
                .enumerate()
                .map(|(r, &x)| normalize_row(r, x))
                .collect();
            if self.apply(line) != expected {
                return Err(BrauerError::InconsistentRelations(i));
            }
        }
        Ok(())
    }

    /// A saturated basis of the kernel `M`: vectors of degree 0 whose torsion
    /// coordinates vanish mod 3.
    pub fn kernel_basis(&self) -> Vec<Vec<BigInt>> {
        let t = self.torsion_basis.len();
        let rows = 1 + t;
        let n = RANK + t;
        let a: Vec<Vec<BigInt>> = (0..rows)
            .map(|r| {
                let mut row: Vec<BigInt> = self.matrix[r].iter().map(|&x| BigInt::from(x)).collect();
                row.extend((0..t).map(|j| BigInt::from(if r == j + 1 { -3 } else { 0 })));
                row
            })
            .collect();
        snf::kernel(&a, n).into_iter().map(|v| v[..RANK].to_vec()).collect()
    }
}

fn normalize_row(r: usize, x: i64) -> i64 {
    if r == 0 {
        x
    } else {
        x.rem_euclid(3)
    }
}

/// `c` with `sum c_i b_i = p`, each `c_i` in `0..3`.
fn coordinates(law: &GroupLaw, basis: &[CurvePoint], p: &CurvePoint) -> Option<Vec<i64>> {
    let n = basis.len() as u32;
    (0..3i64.pow(n)).find_map(|mut code| {
        let mut c = vec![0i64; basis.len()];
        for x in c.iter_mut() {
            *x = code % 3;
            code /= 3;
        }
        (combine(law, basis, &c) == *p).then_some(c)
    })
}

fn combine(law: &GroupLaw, basis: &[CurvePoint], c: &[i64]) -> CurvePoint {
    basis
        .iter()
        .zip(c)
        .fold(law.origin().clone(), |acc, (b, &k)| law.add(&acc, &law.mul(k, b)))
}

/// The flex map of a computed line configuration. The residue field of the
/// configuration contains every flex.
pub fn flex_map(conf: &LineConfiguration) -> Result<FlexMap, BrauerError> {
    let mut line_flex = vec![usize::MAX; NUM_LINES];
    for t in &conf.triples {
        for &i in &t.lines {
            line_flex[conf.labels[i]] = t.flex;
        }
    }
    FlexMap::from_line_flexes(&conf.base_curve, conf.residue_field(), conf.flexes.clone(), line_flex)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionWitness {
    pub point: CurvePoint,
    /// Coefficients on the basis of flex differences.
    pub combination: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreeTorsionCheck {
    pub holds: bool,
    pub generated_order: usize,
    pub witnesses: Vec<TorsionWitness>,
    /// Agreement with a full enumeration of the 3-torsion, when the field is
    /// small enough to enumerate.
    pub enumeration_agrees: Option<bool>,
}

/// Whether the flex differences generate the full 3-torsion of the curve.
///
/// A subgroup of order 9 consisting of 3-torsion points is all of `J[3]`,
/// which needs no enumeration; when the field is small the set is also
/// compared with the enumerated 3-torsion.
pub fn check_image_contains_three_torsion(fm: &FlexMap) -> Result<ThreeTorsionCheck, BrauerError> {
    let law = GroupLaw::new(&fm.curve, &fm.field, fm.origin.clone());
    let generated = law.subgroup_generated(&fm.torsion_basis);
    let all_torsion = generated.iter().all(|p| law.is_identity(&law.mul(3, p)));
    let witnesses = generated
        .iter()
        .map(|p| {
            let combination = coordinates(&law, &fm.torsion_basis, p).expect("generated by the basis");
            TorsionWitness {
                point: p.clone(),
                combination,
            }
        })
        .collect();
    let enumeration_agrees = match fm.field.size() {
        Some(q) if q <= ENUMERATION_CAP => {
            let enumerated = three_torsion(&fm.curve, &fm.field)?;
            // three_torsion uses the smallest flex over the field as origin
            let same_origin = crate::curve::flexes_over(&fm.curve, &fm.field)?.first() == Some(&fm.origin);
            same_origin.then(|| enumerated == generated)
        }
        _ => None,
    };
    Ok(ThreeTorsionCheck {
        holds: all_torsion && generated.len() == 9 && enumeration_agrees != Some(false),
        generated_order: generated.len(),
        witnesses,
        enumeration_agrees,
    })
}

/// Recomputes every witness with the group law.
pub fn verify_witnesses(fm: &FlexMap, check: &ThreeTorsionCheck) -> bool {
    let law = GroupLaw::new(&fm.curve, &fm.field, fm.origin.clone());
    check.witnesses.iter().all(|w| {
        w.combination.len() == fm.torsion_basis.len() && combine(&law, &fm.torsion_basis, &w.combination) == w.point
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelCheck {
    pub holds: bool,
    pub kernel_rank: usize,
    pub h0_rank: usize,
    pub tate_h0: AbelianGroup,
}

/// `H^0` and the Tate group `Ĥ^0` of the action restricted to the kernel of
/// the flex map; the check holds when both vanish.
pub fn check_kernel_tate_vanishes(fm: &FlexMap, action: &LatticeAction) -> Result<KernelCheck, BrauerError> {
    let m = fm.kernel_basis();
    let stable = |e: LatticeError| match e {
        LatticeError::SublatticeNotStable => BrauerError::KernelNotStable,
        other => BrauerError::Lattice(other),
    };
    let h0 = lattice::h0(action, Some(&m)).map_err(stable)?;
    let tate = lattice::tate_h0_cyclic(action, &m).map_err(stable)?;
    Ok(KernelCheck {
        holds: h0.rank == 0 && tate.is_trivial(),
        kernel_rank: m.len(),
        h0_rank: h0.rank,
        tate_h0: tate,
    })
}

/// Integer entries of a kernel basis, for reports.
pub fn to_i64_vectors(vs: &[Vec<BigInt>]) -> Vec<Vec<i64>> {
    vs.iter()
        .map(|v| v.iter().map(|x| x.to_i64().expect("small entries")).collect())
        .collect()
}
