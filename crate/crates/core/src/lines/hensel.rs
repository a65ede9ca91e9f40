//! Newton iteration for lines on a surface with smooth reduction.
//!
//! A line near a given reduction is written in a Grassmannian chart as the
//! row span of `e_i + a e_k + b e_l` and `e_j + c e_k + d e_l`. The four
//! coefficients of the binary cubic `F(u r1 + v r2)` are the equations; their
//! Jacobian in `(a, b, c, d)` is invertible modulo `Π` because the Fano
//! scheme of a smooth cubic surface is reduced.

use super::plucker::{normalize_eisenstein, plucker};
use super::{residual_valuation, LiftedLine, LinesError, ResidueLine};
use crate::arith::{EisensteinElement, EisensteinRing, Field, FieldElement, GaloisField, HomogeneousForm, Ring};

const MAX_ITERATIONS: u32 = 16;

impl LinesError {
    /// Attaches a line index to errors raised while lifting a single line.
    pub(crate) fn for_line(self, i: usize) -> Self {
        match self {
            LinesError::JacobianSingular { .. } => LinesError::JacobianSingular { line: i },
            LinesError::PrecisionExhausted { target, reached, .. } => LinesError::PrecisionExhausted {
                line: i,
                target,
                reached,
            },
            other => other,
        }
    }
}

/// Chart columns `(i, j)` with a nonzero 2x2 minor, and the rows rewritten
/// so that this minor is the identity.
fn chart(field: &GaloisField, rows: &[Vec<FieldElement>; 2]) -> ((usize, usize), [Vec<FieldElement>; 2]) {
    for (i, j) in super::plucker::PAIRS {
        let det = field.sub(
            &field.mul(&rows[0][i], &rows[1][j]),
            &field.mul(&rows[0][j], &rows[1][i]),
        );
        if field.is_zero(&det) {
            continue;
        }
        let inv = field.inv(&det).unwrap();
        // left-multiply by the inverse of [[r0i, r0j], [r1i, r1j]]
        let m00 = field.mul(&rows[1][j], &inv);
        let m01 = field.neg(&field.mul(&rows[0][j], &inv));
        let m10 = field.neg(&field.mul(&rows[1][i], &inv));
        let m11 = field.mul(&rows[0][i], &inv);
        let combine = |x: &FieldElement, y: &FieldElement, r: usize| {
            let (cx, cy) = if r == 0 { (&m00, &m01) } else { (&m10, &m11) };
            field.add(&field.mul(cx, x), &field.mul(cy, y))
        };
        let new: [Vec<FieldElement>; 2] =
            std::array::from_fn(|r| (0..4).map(|c| combine(&rows[0][c], &rows[1][c], r)).collect());
        return ((i, j), new);
    }
    unreachable!("two independent rows have a nonzero 2x2 minor")
}

/// Solves `A x = b` for a matrix invertible modulo `Π`, pivoting on units.
fn solve_unit_pivot(
    ring: &EisensteinRing,
    mut a: Vec<Vec<EisensteinElement>>,
    mut b: Vec<EisensteinElement>,
) -> Option<Vec<EisensteinElement>> {
    let n = b.len();
    for col in 0..n {
        let pr = (col..n).find(|&r| ring.is_unit(&a[r][col]))?;
        a.swap(col, pr);
        b.swap(col, pr);
        let inv = ring.invert(&a[col][col]).ok()?;
        for x in a[col].iter_mut() {
            *x = ring.mul(x, &inv);
        }
        b[col] = ring.mul(&b[col], &inv);
        for r in 0..n {
            if r == col {
                continue;
            }
            let factor = a[r][col].clone();
            if ring.is_zero(&factor) {
                continue;
            }
            for c in 0..n {
                let t = ring.mul(&factor, &a[col][c]);
                a[r][c] = ring.sub(&a[r][c], &t);
            }
            let t = ring.mul(&factor, &b[col]);
            b[r] = ring.sub(&b[r], &t);
        }
    }
    Some(b)
}

/// Lifts a line on the reduction of `form` to a line on `form` modulo
/// `Π^precision`.
pub fn hensel_lift_line(
    ring: &EisensteinRing,
    form: &HomogeneousForm<EisensteinElement>,
    line: &ResidueLine,
    precision: u32,
) -> Result<LiftedLine, LinesError> {
    let field = ring.residue_field();
    let ((i, j), start) = chart(field, &line.rows);
    let (k, l) = {
        let rest: Vec<usize> = (0..4).filter(|&c| c != i && c != j).collect();
        (rest[0], rest[1])
    };
    let mut rows: [Vec<EisensteinElement>; 2] =
        std::array::from_fn(|r| start[r].iter().map(|x| ring.lift(x)).collect());
    let partials = [form.partial(ring, k), form.partial(ring, l)];
    let mut iterations = 0;
    loop {
        let residual = form.binary_restriction(ring, &rows[0], &rows[1]);
        let val = residual.iter().map(|c| ring.valuation(c)).min().unwrap();
        if val >= precision {
            break;
        }
        if iterations == MAX_ITERATIONS {
            return Err(LinesError::PrecisionExhausted {
                line: 0,
                target: precision,
                reached: val,
            });
        }
        iterations += 1;
        let dk = partials[0].binary_restriction(ring, &rows[0], &rows[1]);
        let dl = partials[1].binary_restriction(ring, &rows[0], &rows[1]);
        let zero = ring.zero();
        // derivatives in a, b carry a factor u; those in c, d a factor v
        let col_u = |d: &[EisensteinElement]| vec![d[0].clone(), d[1].clone(), d[2].clone(), zero.clone()];
        let col_v = |d: &[EisensteinElement]| vec![zero.clone(), d[0].clone(), d[1].clone(), d[2].clone()];
        let cols = [col_u(&dk), col_u(&dl), col_v(&dk), col_v(&dl)];
        let jac: Vec<Vec<EisensteinElement>> = (0..4).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
        let rhs: Vec<EisensteinElement> = residual.iter().map(|c| ring.neg(c)).collect();
        let delta = solve_unit_pivot(ring, jac, rhs).ok_or(LinesError::JacobianSingular { line: 0 })?;
        rows[0][k] = ring.add(&rows[0][k], &delta[0]);
        rows[0][l] = ring.add(&rows[0][l], &delta[1]);
        rows[1][k] = ring.add(&rows[1][k], &delta[2]);
        rows[1][l] = ring.add(&rows[1][l], &delta[3]);
    }
    let pl = normalize_eisenstein(ring, &plucker(ring, &rows[0], &rows[1])).ok_or(LinesError::PrecisionExhausted {
        line: 0,
        target: precision,
        reached: 0,
    })?;
    let residual_valuation = residual_valuation(ring, form, &rows);
    Ok(LiftedLine {
        rows,
        plucker: pl,
        reduction: line.clone(),
        chart: (i, j),
        iterations,
        residual_valuation,
    })
}
