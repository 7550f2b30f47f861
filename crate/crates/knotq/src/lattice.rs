//! Exact integer linear algebra for the constraint lattice: Smith normal
//! form with transformation certificates, and the solution group of the
//! torus-valued constraints (invariant factors, torsion generator lifts and
//! the free direction).

use crate::error::{Error, Result};
use crate::exactgeom::Rat;
use crate::forms::LinearForm;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix, rows = vertical lines, columns = bridges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = IntMatrix::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c);
            for (j, v) in row.iter().enumerate() {
                *m.at_mut(i, j) = BigInt::from(*v);
            }
        }
        m
    }

    /// Constraint matrix of the auxiliary forms: one row per vertical line,
    /// one column per bridge.
    pub fn from_forms(forms: &[LinearForm], bridges: usize) -> Self {
        let mut m = IntMatrix::zero(forms.len(), bridges);
        for (i, f) in forms.iter().enumerate() {
            for (b, c) in &f.coeffs {
                *m.at_mut(i, b.0) = c.clone();
            }
        }
        m
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for t in 0..self.cols {
                let a = self.at(i, t);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(t, j);
                    if !b.is_zero() {
                        *out.at_mut(i, j) += a * b;
                    }
                }
            }
        }
        out
    }

    /// Matrix-vector product over the rationals.
    pub fn apply(&self, x: &[Rat]) -> Vec<Rat> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = Rat::zero();
                for j in 0..self.cols {
                    let a = self.at(i, j);
                    if !a.is_zero() {
                        acc += Rat::from_integer(a.clone()) * &x[j];
                    }
                }
                acc
            })
            .collect()
    }

    /// Determinant by fraction-free elimination; only used on the small
    /// transformation certificates.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut prev = BigInt::one();
        let mut sign = BigInt::one();
        for k in 0..n - 1 {
            if a.at(k, k).is_zero() {
                let Some(swap) = (k + 1..n).find(|&i| !a.at(i, k).is_zero()) else {
                    return BigInt::zero();
                };
                for j in 0..n {
                    let tmp = a.at(k, j).clone();
                    *a.at_mut(k, j) = a.at(swap, j).clone();
                    *a.at_mut(swap, j) = tmp;
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j)).div_floor(&prev);
                    *a.at_mut(i, j) = v;
                }
                *a.at_mut(i, k) = BigInt::zero();
            }
            prev = a.at(k, k).clone();
        }
        sign * a.at(n - 1, n - 1).clone()
    }
}

/// Smith normal form `U * M * V = S` with unimodular certificates.
#[derive(Clone, Debug)]
pub struct SNFResult {
    pub u: IntMatrix,
    pub v: IntMatrix,
    /// Invariant factors d_1 | d_2 | ... | d_r, all >= 1.
    pub factors: Vec<BigInt>,
    pub rank: usize,
}

/// Exact Smith normal form by elimination with pivoting on the minimal
/// non-zero absolute value. The result is verified (U M V = S, divisibility
/// chain, |det U| = |det V| = 1) before being returned.
pub fn smith_normal_form(m: &IntMatrix) -> SNFResult {
    let rows = m.rows;
    let cols = m.cols;
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    let min_dim = rows.min(cols);
    let mut k = 0;
    while k < min_dim {
        let Some((pi, pj)) = min_abs_pivot(&a, k) else {
            break;
        };
        swap_rows(&mut a, &mut u, k, pi);
        swap_cols(&mut a, &mut v, k, pj);

        // Clear row and column k, re-pivoting when remainders appear.
        loop {
            let mut dirty = false;
            for i in k + 1..rows {
                if a.at(i, k).is_zero() {
                    continue;
                }
                let q = a.at(i, k).div_floor(a.at(k, k));
                row_op(&mut a, &mut u, i, k, &q);
                if !a.at(i, k).is_zero() {
                    swap_rows(&mut a, &mut u, k, i);
                    dirty = true;
                }
            }
            for j in k + 1..cols {
                if a.at(k, j).is_zero() {
                    continue;
                }
                let q = a.at(k, j).div_floor(a.at(k, k));
                col_op(&mut a, &mut v, j, k, &q);
                if !a.at(k, j).is_zero() {
                    swap_cols(&mut a, &mut v, k, j);
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }

        // Divisibility: the pivot must divide every remaining entry.
        if let Some((i, j)) = non_divisible(&a, k) {
            // Fold row i into row k and restart the elimination of this pivot.
            let one = BigInt::one();
            add_row(&mut a, &mut u, k, i, &one);
            let _ = j;
            continue;
        }

        if a.at(k, k).is_negative() {
            negate_row(&mut a, &mut u, k);
        }
        k += 1;
    }

    let rank = k;
    let factors: Vec<BigInt> = (0..rank).map(|i| a.at(i, i).clone()).collect();

    let result = SNFResult {
        u,
        v,
        factors,
        rank,
    };
    verify_snf(m, &result);
    result
}

fn verify_snf(m: &IntMatrix, r: &SNFResult) {
    let product = r.u.mul(m).mul(&r.v);
    for i in 0..m.rows {
        for j in 0..m.cols {
            let expected = if i == j && i < r.rank {
                r.factors[i].clone()
            } else {
                BigInt::zero()
            };
            assert_eq!(*product.at(i, j), expected, "U*M*V is not the SNF");
        }
    }
    for w in r.factors.windows(2) {
        assert!(
            (&w[1] % &w[0]).is_zero(),
            "invariant factors must form a divisibility chain"
        );
    }
    assert!(r.factors.iter().all(|d| d.is_positive()));
    assert!(r.u.det().abs().is_one(), "U must be unimodular");
    assert!(r.v.det().abs().is_one(), "V must be unimodular");
}

fn min_abs_pivot(a: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(BigInt, usize, usize)> = None;
    for i in k..a.rows {
        for j in k..a.cols {
            let v = a.at(i, j);
            if v.is_zero() {
                continue;
            }
            let mag = v.abs();
            match &best {
                Some((m, _, _)) if *m <= mag => {}
                _ => best = Some((mag, i, j)),
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

fn non_divisible(a: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let d = a.at(k, k);
    for i in k + 1..a.rows {
        for j in k + 1..a.cols {
            if !(a.at(i, j) % d).is_zero() {
                return Some((i, j));
            }
        }
    }
    None
}

fn swap_rows(a: &mut IntMatrix, u: &mut IntMatrix, i: usize, j: usize) {
    if i == j {
        return;
    }
    for c in 0..a.cols {
        let tmp = a.at(i, c).clone();
        *a.at_mut(i, c) = a.at(j, c).clone();
        *a.at_mut(j, c) = tmp;
    }
    for c in 0..u.cols {
        let tmp = u.at(i, c).clone();
        *u.at_mut(i, c) = u.at(j, c).clone();
        *u.at_mut(j, c) = tmp;
    }
}

fn swap_cols(a: &mut IntMatrix, v: &mut IntMatrix, i: usize, j: usize) {
    if i == j {
        return;
    }
    for r in 0..a.rows {
        let tmp = a.at(r, i).clone();
        *a.at_mut(r, i) = a.at(r, j).clone();
        *a.at_mut(r, j) = tmp;
    }
    for r in 0..v.rows {
        let tmp = v.at(r, i).clone();
        *v.at_mut(r, i) = v.at(r, j).clone();
        *v.at_mut(r, j) = tmp;
    }
}

/// row_i -= q * row_k
fn row_op(a: &mut IntMatrix, u: &mut IntMatrix, i: usize, k: usize, q: &BigInt) {
    for c in 0..a.cols {
        let d = a.at(k, c) * q;
        *a.at_mut(i, c) -= d;
    }
    for c in 0..u.cols {
        let d = u.at(k, c) * q;
        *u.at_mut(i, c) -= d;
    }
}

/// row_k += q * row_i
fn add_row(a: &mut IntMatrix, u: &mut IntMatrix, k: usize, i: usize, q: &BigInt) {
    for c in 0..a.cols {
        let d = a.at(i, c) * q;
        *a.at_mut(k, c) += d;
    }
    for c in 0..u.cols {
        let d = u.at(i, c) * q;
        *u.at_mut(k, c) += d;
    }
}

/// col_j -= q * col_k
fn col_op(a: &mut IntMatrix, v: &mut IntMatrix, j: usize, k: usize, q: &BigInt) {
    for r in 0..a.rows {
        let d = a.at(r, k) * q;
        *a.at_mut(r, j) -= d;
    }
    for r in 0..v.rows {
        let d = v.at(r, k) * q;
        *v.at_mut(r, j) -= d;
    }
}

fn negate_row(a: &mut IntMatrix, u: &mut IntMatrix, k: usize) {
    for c in 0..a.cols {
        let v = -a.at(k, c).clone();
        *a.at_mut(k, c) = v;
    }
    for c in 0..u.cols {
        let v = -u.at(k, c).clone();
        *u.at_mut(k, c) = v;
    }
}

/// The solution group of `M x in Z^lines` on the torus: invariant factors
/// > 1 with explicit rational generator lifts, plus the rank-one free
/// direction (proportional to the all-ones vector for knot diagrams).
#[derive(Clone, Debug)]
pub struct SolutionGroup {
    pub matrix: IntMatrix,
    pub cert: SNFResult,
    /// Invariant factors > 1, in divisibility order.
    pub torsion_factors: Vec<BigInt>,
    /// One rational lift per torsion factor; `M * g` is integral and `d * g`
    /// lies in `Z^B + free span`.
    pub torsion_gen_lifts: Vec<Vec<Rat>>,
    pub free_basis: Vec<Vec<Rat>>,
}

impl SolutionGroup {
    pub fn torsion_order(&self) -> BigInt {
        self.torsion_factors
            .iter()
            .fold(BigInt::one(), |acc, d| acc * d)
    }

    pub fn bridge_count(&self) -> usize {
        self.matrix.cols
    }

    /// Exact membership test for the constraint set: `M x` integral.
    pub fn contains_lift(&self, x: &[Rat]) -> Result<()> {
        for (row, value) in self.matrix.apply(x).iter().enumerate() {
            if !crate::exactgeom::is_integer(value) {
                return Err(Error::LiftNotInSolutionSet {
                    row,
                    value: crate::exactgeom::rat_string(value),
                });
            }
        }
        Ok(())
    }
}

/// Solves the constraints cut out by the auxiliary forms.
///
/// Fails with [`Error::UnexpectedFreeRank`] when the kernel's free rank is
/// not exactly one, and [`Error::EvenTorsion`] when the torsion order is
/// even; both signal a malformed diagram rather than a valid knot input.
pub fn solve_constraints(m: IntMatrix) -> Result<SolutionGroup> {
    let snf = smith_normal_form(&m);
    let free_rank = m.cols - snf.rank;
    if free_rank != 1 {
        return Err(Error::UnexpectedFreeRank(free_rank));
    }

    let mut torsion_factors = Vec::new();
    let mut torsion_gen_lifts = Vec::new();
    for (i, d) in snf.factors.iter().enumerate() {
        if d.is_one() {
            continue;
        }
        torsion_factors.push(d.clone());
        let lift: Vec<Rat> = (0..m.cols)
            .map(|r| Rat::new(snf.v.at(r, i).clone(), d.clone()))
            .collect();
        torsion_gen_lifts.push(lift);
    }

    let order = torsion_factors
        .iter()
        .fold(BigInt::one(), |acc, d| acc * d);
    if (&order % BigInt::from(2)).is_zero() {
        return Err(Error::EvenTorsion(order.to_string()));
    }

    let free_col = snf.rank;
    let free: Vec<Rat> = (0..m.cols)
        .map(|r| Rat::from_integer(snf.v.at(r, free_col).clone()))
        .collect();
    // For a knot diagram every row sums to zero, so the rank-one kernel is
    // spanned by the all-ones vector; the certificate column must agree.
    if free.iter().any(|c| *c != free[0]) || free[0].is_zero() {
        return Err(Error::Internal(
            "free direction is not proportional to the all-ones vector".into(),
        ));
    }

    let group = SolutionGroup {
        matrix: m,
        cert: snf,
        torsion_factors,
        torsion_gen_lifts,
        free_basis: vec![free],
    };

    for g in &group.torsion_gen_lifts {
        group.contains_lift(g)?;
    }
    Ok(group)
}

/// One element of the torsion dual: coordinates with respect to the
/// enumeration generators and the canonical rational lift.
#[derive(Clone, Debug)]
pub struct TorsionElement {
    pub coords: Vec<u64>,
    pub lift: Vec<Rat>,
}

/// Enumerates all torsion elements in lexicographic coordinate order.
pub fn torsion_elements(sg: &SolutionGroup, cap: u64) -> Result<Vec<TorsionElement>> {
    let order = sg.torsion_order();
    if order > BigInt::from(cap) {
        return Err(Error::GroupTooLarge {
            order: order.to_string(),
            cap,
        });
    }
    let dims: Vec<u64> = sg
        .torsion_factors
        .iter()
        .map(|d| u64::try_from(d).expect("factor fits u64 under the cap"))
        .collect();
    let total: u64 = dims.iter().product();
    let n = sg.bridge_count();

    let mut out = Vec::with_capacity(total as usize);
    let mut coords = vec![0u64; dims.len()];
    loop {
        let mut lift = vec![Rat::zero(); n];
        for (i, &c) in coords.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let c_rat = crate::exactgeom::rat(c as i64);
            for (r, v) in sg.torsion_gen_lifts[i].iter().enumerate() {
                lift[r] += &c_rat * v;
            }
        }
        out.push(TorsionElement {
            coords: coords.clone(),
            lift,
        });
        // lexicographic increment; full wrap-around means we are done
        let mut i = dims.len();
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            coords[i] += 1;
            if coords[i] < dims[i] {
                break;
            }
            coords[i] = 0;
        }
    }
}
