//! Braid words and their deterministic geometric realization as long
//! diagrams.
//!
//! The layout puts the braid in a grid: strand rows at integer heights
//! 1..=strands, crossing j in its own column, traversed right to left.
//! Closure strands return above the braid box at nested heights and the
//! bottom strand is cut and extended to the two infinities. The integer grid
//! is then sheared by `x += y/N` (smallest valid N >= 1000) which removes the
//! vertical closure channels without disturbing any incidence.

use crate::diagram::{LongDiagram, Resolution};
use crate::error::{Error, Result};
use crate::exactgeom::{frac, rat, Point};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraidWord {
    pub strands: usize,
    pub letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<i32>) -> Result<Self> {
        if strands < 1 {
            return Err(Error::InvalidBraid("need at least one strand".into()));
        }
        for &l in &letters {
            if l == 0 || l.unsigned_abs() as usize >= strands {
                return Err(Error::InvalidBraid(format!(
                    "letter {l} out of range for {strands} strands"
                )));
            }
        }
        Ok(BraidWord { strands, letters })
    }

    /// Strand permutation of the word: position `i` (0-based) maps to
    /// `perm[i]` after all letters are applied.
    pub fn permutation(&self) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..self.strands).collect();
        for &l in &self.letters {
            let i = l.unsigned_abs() as usize - 1;
            perm.swap(i, i + 1);
        }
        perm
    }

    pub fn cycle_count(&self) -> usize {
        let perm = self.permutation();
        let mut seen = vec![false; perm.len()];
        let mut cycles = 0;
        for start in 0..perm.len() {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = perm[i];
            }
        }
        cycles
    }

    pub fn is_knot(&self) -> bool {
        self.cycle_count() == 1
    }
}

impl std::fmt::Display for BraidWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{} strands;", self.strands)?;
        for l in &self.letters {
            write!(f, " {l}")?;
        }
        write!(f, "]")
    }
}

const SHEAR_START: i64 = 1000;
const SHEAR_TRIES: i64 = 200;

/// Deterministic geometric realization of a braid closure as a long diagram.
///
/// Fails with [`Error::NotAKnot`] when the strand permutation is not a single
/// cycle.
pub fn braid_to_diagram(b: &BraidWord) -> Result<LongDiagram> {
    let cycles = b.cycle_count();
    if cycles != 1 {
        return Err(Error::NotAKnot { cycles });
    }
    let (corners, asc_over) = grid_layout(b);

    let mut last_err = None;
    for n in SHEAR_START..SHEAR_START + SHEAR_TRIES {
        let shear = |p: &Point| Point::new(&p.x + &p.y / rat(n), p.y.clone());
        let sheared: Vec<Point> = corners.iter().map(&shear).collect();
        let resolution: BTreeMap<Point, bool> = asc_over
            .iter()
            .map(|(p, &over)| (shear(p), over))
            .collect();
        match LongDiagram::from_polyline(sheared, Resolution::ByAscending(resolution)) {
            Ok(d) => {
                if d.crossing_count() != b.letters.len() {
                    return Err(Error::Internal(format!(
                        "braid layout produced {} crossings, expected {}",
                        d.crossing_count(),
                        b.letters.len()
                    )));
                }
                return Ok(d);
            }
            Err(e @ (Error::Degenerate(_) | Error::InvalidDiagram(_))) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap_or(Error::PerturbationExhausted))
}

/// Integer-grid corners (traversal order) plus, per crossing center, whether
/// the passage travelling upwards is the over-pass.
fn grid_layout(b: &BraidWord) -> (Vec<Point>, BTreeMap<Point, bool>) {
    let n = b.strands as i64;
    let k = b.letters.len();
    // Letter j sits in the column centered at x = k - j, so it is the j-th
    // crossing met when travelling right to left.
    let col_x = |j: usize| rat(k as i64 - j as i64);
    let x_right = rat(k as i64 + 1);
    let half = frac(1, 2);

    let mut corners: Vec<Point> = vec![Point::new(x_right.clone(), rat(1))];
    let mut asc_over: BTreeMap<Point, bool> = BTreeMap::new();

    let mut row: i64 = 1;
    loop {
        // One pass through the box, right to left.
        for (j, &l) in b.letters.iter().enumerate() {
            let i = l.unsigned_abs() as i64;
            if row != i && row != i + 1 {
                continue;
            }
            let x = col_x(j);
            let row_out = if row == i { i + 1 } else { i };
            corners.push(Point::new(&x + &half, rat(row)));
            corners.push(Point::new(&x - &half, rat(row_out)));
            asc_over.insert(Point::new(x, rat(i) + &half), l > 0);
            row = row_out;
        }
        if row == 1 {
            break;
        }
        // Closure arc back over the box; outermost for the lowest rows.
        let a = rat(n + 1 - row);
        let h = rat(2 * n + 1 - row);
        let y = rat(row);
        corners.push(Point::new(-a.clone(), y.clone()));
        corners.push(Point::new(-a.clone(), h.clone()));
        corners.push(Point::new(&x_right + &a, h));
        corners.push(Point::new(&x_right + &a, y));
    }
    (corners, asc_over)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::decompose_bridges;

    #[test]
    fn word_validation() {
        assert!(BraidWord::new(2, vec![1, 1, 1]).is_ok());
        assert!(BraidWord::new(2, vec![2]).is_err());
        assert!(BraidWord::new(2, vec![0]).is_err());
        assert!(BraidWord::new(0, vec![]).is_err());
    }

    #[test]
    fn knot_detection() {
        assert!(BraidWord::new(2, vec![1, 1, 1]).unwrap().is_knot());
        assert!(BraidWord::new(1, vec![]).unwrap().is_knot());
        assert!(!BraidWord::new(2, vec![]).unwrap().is_knot());
        assert!(!BraidWord::new(3, vec![1]).unwrap().is_knot());
        assert!(BraidWord::new(3, vec![1, -2, 1, -2]).unwrap().is_knot());
    }

    #[test]
    fn trefoil_braid_layout() {
        let b = BraidWord::new(2, vec![1, 1, 1]).unwrap();
        let d = braid_to_diagram(&b).unwrap();
        assert_eq!(d.crossing_count(), 3);
        let bridges = decompose_bridges(&d);
        assert_eq!(bridges.len(), 4);
        // every non-infinite bridge of this diagram carries exactly one
        // over-pass
        let finite_overs: Vec<usize> = bridges
            .iter()
            .map(|br| br.over_passes.len())
            .collect();
        assert_eq!(finite_overs.iter().sum::<usize>(), 3);
    }

    #[test]
    fn figure_eight_braid_layout() {
        let b = BraidWord::new(3, vec![1, -2, 1, -2]).unwrap();
        let d = braid_to_diagram(&b).unwrap();
        assert_eq!(d.crossing_count(), 4);
        assert_eq!(decompose_bridges(&d).len(), 5);
    }

    #[test]
    fn unknot_braid_layout() {
        let b = BraidWord::new(1, vec![]).unwrap();
        let d = braid_to_diagram(&b).unwrap();
        assert_eq!(d.crossing_count(), 0);
        assert_eq!(decompose_bridges(&d).len(), 1);
    }

    #[test]
    fn not_a_knot_rejected() {
        let b = BraidWord::new(3, vec![1]).unwrap();
        assert!(matches!(
            braid_to_diagram(&b),
            Err(Error::NotAKnot { cycles: 2 })
        ));
    }

    #[test]
    fn mirror_flips_resolutions_only() {
        let b = BraidWord::new(3, vec![1, -2, 1, -2]).unwrap();
        let m = BraidWord::new(3, vec![-1, 2, -1, 2]).unwrap();
        let db = braid_to_diagram(&b).unwrap();
        let dm = braid_to_diagram(&m).unwrap();
        assert_eq!(db.points, dm.points);
        for (cb, cm) in db.crossings.iter().zip(&dm.crossings) {
            assert_eq!(cb.position, cm.position);
            assert_eq!(cb.chirality, -cm.chirality);
            assert_eq!((cb.over_in, cb.over_out), (cm.under_in, cm.under_out));
        }
    }
}
