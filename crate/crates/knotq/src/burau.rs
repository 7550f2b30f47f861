//! Determinant oracle through the reduced Burau representation.
//!
//! `|Delta(-1)|` of the braid closure is computed symbolically: the reduced
//! Burau matrices over integer Laurent polynomials, a fraction-free
//! determinant of `rho(b) - I`, exact division by `1 + t + ... + t^(n-1)`,
//! and only then evaluation at `t = -1`. Dividing first avoids the vanishing
//! of the cyclotomic factor at `t = -1` for even strand counts.

use crate::braid::BraidWord;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Integer Laurent polynomial: coefficients for exponents `lo..lo+len`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    lo: i64,
    coeffs: Vec<BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly {
            lo: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn one() -> Self {
        LaurentPoly::term(1, 0)
    }

    /// `c * t^e`
    pub fn term(c: i64, e: i64) -> Self {
        LaurentPoly {
            lo: e,
            coeffs: vec![BigInt::from(c)],
        }
        .normalized()
    }

    pub fn from_coeffs(lo: i64, coeffs: Vec<BigInt>) -> Self {
        LaurentPoly { lo, coeffs }.normalized()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn normalized(mut self) -> Self {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let leading_zeros = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if leading_zeros > 0 {
            self.coeffs.drain(..leading_zeros);
            self.lo += leading_zeros as i64;
        }
        if self.coeffs.is_empty() {
            self.lo = 0;
        }
        self
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let lo = self.lo.min(other.lo);
        let hi = (self.lo + self.coeffs.len() as i64).max(other.lo + other.coeffs.len() as i64);
        let mut coeffs = vec![BigInt::zero(); (hi - lo) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[(self.lo - lo) as usize + i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[(other.lo - lo) as usize + i] += c;
        }
        LaurentPoly { lo, coeffs }.normalized()
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly {
            lo: self.lo,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || other.is_zero() {
            return LaurentPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        LaurentPoly {
            lo: self.lo + other.lo,
            coeffs,
        }
        .normalized()
    }

    /// Exact division; panics if `other` does not divide `self` in Z[t, 1/t].
    pub fn div_exact(&self, other: &LaurentPoly) -> LaurentPoly {
        assert!(!other.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return LaurentPoly::zero();
        }
        let mut rem = self.coeffs.clone();
        let n = self.coeffs.len();
        let m = other.coeffs.len();
        assert!(n >= m, "degree too small for exact division");
        let lead = other.coeffs.last().unwrap();
        let mut quot = vec![BigInt::zero(); n - m + 1];
        for k in (0..=n - m).rev() {
            let (q, r) = num_integer::Integer::div_rem(&rem[k + m - 1], lead);
            assert!(r.is_zero(), "inexact leading division");
            if q.is_zero() {
                continue;
            }
            for (j, c) in other.coeffs.iter().enumerate() {
                rem[k + j] -= &q * c;
            }
            quot[k] = q;
        }
        assert!(rem.iter().all(|c| c.is_zero()), "non-zero remainder");
        LaurentPoly {
            lo: self.lo - other.lo,
            coeffs: quot,
        }
        .normalized()
    }

    pub fn eval_neg_one(&self) -> BigInt {
        let mut acc = BigInt::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            let e = self.lo + i as i64;
            if e.rem_euclid(2) == 0 {
                acc += c;
            } else {
                acc -= c;
            }
        }
        acc
    }
}

type Matrix = Vec<Vec<LaurentPoly>>;

fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        LaurentPoly::one()
                    } else {
                        LaurentPoly::zero()
                    }
                })
                .collect()
        })
        .collect()
}

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = LaurentPoly::zero();
                    for (t, row) in b.iter().enumerate() {
                        if !a[i][t].is_zero() && !row[j].is_zero() {
                            acc = acc.add(&a[i][t].mul(&row[j]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Reduced Burau matrix of one generator on `strands` strands
/// ((strands-1) x (strands-1); `inverse` for the negative letter).
fn burau_generator(strands: usize, index: usize, inverse: bool) -> Matrix {
    let m = strands - 1;
    let mut a = identity(m);
    let t = |c: i64, e: i64| LaurentPoly::term(c, e);
    let i = index - 1; // 0-based row of the generator
    if !inverse {
        // columns/rows (i-1, i, i+1) of [[1, t, 0], [0, -t, 0], [0, 1, 1]]
        a[i][i] = t(-1, 1);
        if i > 0 {
            a[i - 1][i] = t(1, 1);
        }
        if i + 1 < m {
            a[i + 1][i] = t(1, 0);
        }
    } else {
        a[i][i] = t(-1, -1);
        if i > 0 {
            a[i - 1][i] = t(1, 0);
        }
        if i + 1 < m {
            a[i + 1][i] = t(1, -1);
        }
    }
    a
}

fn burau_matrix(b: &BraidWord) -> Matrix {
    let mut acc = identity(b.strands - 1);
    for &l in &b.letters {
        let g = burau_generator(b.strands, l.unsigned_abs() as usize, l < 0);
        acc = mat_mul(&acc, &g);
    }
    acc
}

/// Fraction-free (Bareiss) determinant over Z[t] after clearing the Laurent
/// offsets row by row; the discarded unit `t^k` is irrelevant for |eval(-1)|.
fn det_up_to_unit(mut a: Matrix) -> LaurentPoly {
    let n = a.len();
    if n == 0 {
        return LaurentPoly::one();
    }
    for row in a.iter_mut() {
        let lo = row
            .iter()
            .filter(|p| !p.is_zero())
            .map(|p| p.lo)
            .min()
            .unwrap_or(0);
        if lo != 0 {
            for p in row.iter_mut() {
                if !p.is_zero() {
                    p.lo -= lo;
                }
            }
        }
    }
    let mut sign = false;
    let mut prev = LaurentPoly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(s) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return LaurentPoly::zero();
            };
            a.swap(k, s);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = num.div_exact(&prev);
            }
            a[i][k] = LaurentPoly::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        d.neg()
    } else {
        d
    }
}

/// `|Delta(-1)|` of the closure of `b`: the order of the torsion homology of
/// the double cyclic cover. Exact for every knot braid.
pub fn burau_determinant(b: &BraidWord) -> Result<BigInt> {
    let cycles = b.cycle_count();
    if cycles != 1 {
        return Err(Error::NotAKnot { cycles });
    }
    if b.strands == 1 {
        return Ok(BigInt::one());
    }
    let mut shifted = burau_matrix(b);
    for i in 0..b.strands - 1 {
        shifted[i][i] = shifted[i][i].sub(&LaurentPoly::one());
    }
    let det = det_up_to_unit(shifted);
    // 1 + t + ... + t^(strands-1)
    let cyclo = LaurentPoly::from_coeffs(0, vec![BigInt::one(); b.strands]);
    let alexander = det.div_exact(&cyclo);
    Ok(alexander.eval_neg_one().abs())
}
