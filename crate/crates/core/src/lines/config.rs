//! Incidence of the computed lines and its identification with the abstract
//! configuration of 27 lines.

use super::{lines_meet, LiftedLine, LinesError};
use crate::arith::EisensteinRing;
use crate::lattice::{PicLattice, NUM_LINES};

pub fn incidence_matrix(ring: &EisensteinRing, lines: &[LiftedLine]) -> Vec<Vec<bool>> {
    (0..lines.len())
        .map(|i| {
            (0..lines.len())
                .map(|j| i != j && lines_meet(ring, &lines[i], &lines[j]))
                .collect()
        })
        .collect()
}

/// An incidence-preserving bijection from the given lines to the abstract
/// lines of [`PicLattice`]: `result[i]` is the abstract index of line `i`.
///
/// Six pairwise skew lines are sent to `E1..E6`; every other line then meets
/// exactly two of them (an `F_ij`) or five (a `G_j`).
pub fn identify_configuration(meets: &[Vec<bool>]) -> Result<Vec<usize>, LinesError> {
    if meets.len() != NUM_LINES {
        return Err(LinesError::NoIsomorphism);
    }
    let lattice = PicLattice::build();
    let mut chosen = Vec::with_capacity(6);
    search(meets, &lattice, &mut chosen, 0).ok_or(LinesError::NoIsomorphism)
}

fn search(meets: &[Vec<bool>], lattice: &PicLattice, chosen: &mut Vec<usize>, from: usize) -> Option<Vec<usize>> {
    if chosen.len() == 6 {
        return labels_from_sixer(meets, lattice, chosen);
    }
    for c in from..NUM_LINES {
        if chosen.iter().all(|&e| !meets[e][c]) {
            chosen.push(c);
            if let Some(found) = search(meets, lattice, chosen, c + 1) {
                return Some(found);
            }
            chosen.pop();
        }
    }
    None
}

fn labels_from_sixer(meets: &[Vec<bool>], lattice: &PicLattice, sixer: &[usize]) -> Option<Vec<usize>> {
    let mut labels = vec![usize::MAX; NUM_LINES];
    for (k, &e) in sixer.iter().enumerate() {
        labels[e] = PicLattice::e(k);
    }
    for l in 0..NUM_LINES {
        if sixer.contains(&l) {
            continue;
        }
        let hit: Vec<usize> = (0..6).filter(|&k| meets[l][sixer[k]]).collect();
        labels[l] = match hit.len() {
            2 => PicLattice::f(hit[0], hit[1]),
            5 => PicLattice::g((0..6).find(|k| !hit.contains(k)).unwrap()),
            _ => return None,
        };
    }
    let mut seen = [false; NUM_LINES];
    for &x in &labels {
        if std::mem::replace(&mut seen[x], true) {
            return None;
        }
    }
    for i in 0..NUM_LINES {
        for j in 0..NUM_LINES {
            if meets[i][j] != lattice.meets(labels[i], labels[j]) {
                return None;
            }
        }
    }
    Some(labels)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abstract_meets(lat: &PicLattice) -> Vec<Vec<bool>> {
        (0..27).map(|i| (0..27).map(|j| lat.meets(i, j)).collect()).collect()
    }

    #[test]
    fn identity_on_the_abstract_configuration() {
        let lat = PicLattice::build();
        let labels = identify_configuration(&abstract_meets(&lat)).unwrap();
        assert_eq!(labels, (0..27).collect::<Vec<_>>());
    }

    #[test]
    fn relabelled_configuration() {
        // shuffle the lines; the result must preserve incidence
        let lat = PicLattice::build();
        let shuffle: Vec<usize> = (0..27).map(|i| (i * 10 + 7) % 27).collect();
        let base = abstract_meets(&lat);
        let meets: Vec<Vec<bool>> = (0..27)
            .map(|i| (0..27).map(|j| base[shuffle[i]][shuffle[j]]).collect())
            .collect();
        let labels = identify_configuration(&meets).unwrap();
        for i in 0..27 {
            for j in 0..27 {
                assert_eq!(meets[i][j], lat.meets(labels[i], labels[j]));
            }
        }
    }

    #[test]
    fn broken_incidence_is_rejected() {
        let lat = PicLattice::build();
        let mut meets = abstract_meets(&lat);
        meets[0][1] = true;
        meets[1][0] = true;
        assert_eq!(identify_configuration(&meets), Err(LinesError::NoIsomorphism));
    }
}
