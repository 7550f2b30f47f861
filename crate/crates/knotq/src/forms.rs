//! Linear and quadratic forms in bridge variables, with exact rational
//! coefficients.
//!
//! `LinearForm` is the integer-coefficient form attached to a vertical line;
//! its constant term is provably an integer and both properties are enforced
//! at construction. `QuadraticForm` is the action functional and its
//! summands: coefficient denominators always divide 4.

use crate::diagram::BridgeId;
use crate::error::{Error, Result};
use crate::exactgeom::{is_integer, mod1, rat_string, Rat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

/// Degree-one polynomial in bridge variables over the rationals.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LinPoly {
    pub coeffs: BTreeMap<BridgeId, Rat>,
    pub constant: Rat,
}

impl LinPoly {
    pub fn variable(b: BridgeId) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(b, Rat::one());
        LinPoly {
            coeffs,
            constant: Rat::zero(),
        }
    }

    pub fn constant(c: Rat) -> Self {
        LinPoly {
            coeffs: BTreeMap::new(),
            constant: c,
        }
    }

    pub fn add(&self, other: &LinPoly) -> LinPoly {
        let mut out = self.clone();
        for (b, c) in &other.coeffs {
            let e = out.coeffs.entry(*b).or_insert_with(Rat::zero);
            *e += c;
        }
        out.constant += &other.constant;
        out.prune();
        out
    }

    pub fn sub(&self, other: &LinPoly) -> LinPoly {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn scale(&self, k: &Rat) -> LinPoly {
        let mut out = LinPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|(b, c)| (*b, c * k))
                .collect(),
            constant: &self.constant * k,
        };
        out.prune();
        out
    }

    fn prune(&mut self) {
        self.coeffs.retain(|_, c| !c.is_zero());
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        let mut acc = self.constant.clone();
        for (b, c) in &self.coeffs {
            acc += c * &x[b.0];
        }
        acc
    }
}

/// Auxiliary form of a vertical line: integer coefficients summing to zero,
/// integer constant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm {
    pub coeffs: BTreeMap<BridgeId, BigInt>,
    pub constant: BigInt,
}

impl LinearForm {
    /// Builds from a rational linear polynomial, checking integrality of all
    /// coefficients and the zero coefficient sum.
    pub fn from_poly(p: &LinPoly) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        let mut sum = BigInt::zero();
        for (b, c) in &p.coeffs {
            if !is_integer(c) {
                return Err(Error::Internal(format!(
                    "auxiliary form has non-integer coefficient {} on bridge {}",
                    rat_string(c),
                    b.0
                )));
            }
            sum += c.numer();
            coeffs.insert(*b, c.numer().clone());
        }
        if !sum.is_zero() {
            return Err(Error::Internal(format!(
                "auxiliary form coefficients sum to {sum}, expected 0"
            )));
        }
        if !is_integer(&p.constant) {
            return Err(Error::Internal(format!(
                "auxiliary form has non-integer constant {}",
                rat_string(&p.constant)
            )));
        }
        Ok(LinearForm {
            coeffs,
            constant: p.constant.numer().clone(),
        })
    }

    pub fn as_poly(&self) -> LinPoly {
        LinPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|(b, c)| (*b, Rat::from_integer(c.clone())))
                .collect(),
            constant: Rat::from_integer(self.constant.clone()),
        }
    }

    /// Homogeneous part evaluated at a rational point.
    pub fn eval_homogeneous(&self, x: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for (b, c) in &self.coeffs {
            acc += Rat::from_integer(c.clone()) * &x[b.0];
        }
        acc
    }

    pub fn dump(&self) -> String {
        let poly = self.as_poly();
        dump_terms(
            poly.coeffs
                .iter()
                .map(|(b, c)| (format!("b{}", b.0), c.clone()))
                .chain(if poly.constant.is_zero() {
                    None
                } else {
                    Some((String::new(), poly.constant.clone()))
                }),
        )
    }
}

/// Quadratic polynomial in bridge variables. `quad` holds monomial
/// coefficients keyed by `(i, j)` with `i <= j`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct QuadraticForm {
    pub quad: BTreeMap<(BridgeId, BridgeId), Rat>,
    pub lin: BTreeMap<BridgeId, Rat>,
    pub constant: Rat,
}

impl QuadraticForm {
    pub fn zero() -> Self {
        QuadraticForm::default()
    }

    pub fn is_zero(&self) -> bool {
        self.quad.is_empty() && self.lin.is_empty() && self.constant.is_zero()
    }

    /// Product of two degree-one polynomials.
    pub fn from_linear_product(a: &LinPoly, b: &LinPoly) -> Self {
        let mut out = QuadraticForm::zero();
        for (i, ci) in &a.coeffs {
            for (j, cj) in &b.coeffs {
                let key = if i <= j { (*i, *j) } else { (*j, *i) };
                let e = out.quad.entry(key).or_insert_with(Rat::zero);
                *e += ci * cj;
            }
            if !b.constant.is_zero() {
                let e = out.lin.entry(*i).or_insert_with(Rat::zero);
                *e += ci * &b.constant;
            }
        }
        if !a.constant.is_zero() {
            for (j, cj) in &b.coeffs {
                let e = out.lin.entry(*j).or_insert_with(Rat::zero);
                *e += &a.constant * cj;
            }
        }
        out.constant = &a.constant * &b.constant;
        out.prune();
        out
    }

    pub fn add(&self, other: &QuadraticForm) -> QuadraticForm {
        let mut out = self.clone();
        for (k, c) in &other.quad {
            let e = out.quad.entry(*k).or_insert_with(Rat::zero);
            *e += c;
        }
        for (b, c) in &other.lin {
            let e = out.lin.entry(*b).or_insert_with(Rat::zero);
            *e += c;
        }
        out.constant += &other.constant;
        out.prune();
        out
    }

    pub fn scale(&self, k: &Rat) -> QuadraticForm {
        let mut out = QuadraticForm {
            quad: self.quad.iter().map(|(key, c)| (*key, c * k)).collect(),
            lin: self.lin.iter().map(|(b, c)| (*b, c * k)).collect(),
            constant: &self.constant * k,
        };
        out.prune();
        out
    }

    fn prune(&mut self) {
        self.quad.retain(|_, c| !c.is_zero());
        self.lin.retain(|_, c| !c.is_zero());
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        let mut acc = self.constant.clone();
        for ((i, j), c) in &self.quad {
            acc += c * &x[i.0] * &x[j.0];
        }
        for (b, c) in &self.lin {
            acc += c * &x[b.0];
        }
        acc
    }

    /// `eval(x) mod 1` through a common-denominator integer path.
    ///
    /// All coefficient denominators divide 4, so with `x_i = n_i / d` the
    /// value is `N / (4 d^2)` for an integer `N`; only `N mod 4 d^2` is
    /// needed.
    pub fn eval_mod1(&self, x: &[Rat]) -> Rat {
        let mut den = BigInt::one();
        for v in x {
            den = den.lcm(v.denom());
        }
        let nums: Vec<BigInt> = x.iter().map(|v| v.numer() * (&den / v.denom())).collect();
        let four = BigInt::from(4);
        let scale = |c: &Rat| -> BigInt {
            let (q, r) = (&four * c.numer()).div_rem(c.denom());
            debug_assert!(r.is_zero(), "coefficient denominator must divide 4");
            q
        };
        let mut n = BigInt::zero();
        for ((i, j), c) in &self.quad {
            n += scale(c) * &nums[i.0] * &nums[j.0];
        }
        for (b, c) in &self.lin {
            n += scale(c) * &nums[b.0] * &den;
        }
        n += scale(&self.constant) * &den * &den;
        let modulus = &four * &den * &den;
        let r = n.mod_floor(&modulus);
        mod1(&Rat::new(r, modulus))
    }

    /// Canonical text dump with sorted monomials, for golden tests.
    pub fn dump(&self) -> String {
        let name = |b: BridgeId| format!("b{}", b.0);
        dump_terms(
            self.quad
                .iter()
                .map(|((i, j), c)| {
                    let m = if i == j {
                        format!("{}^2", name(*i))
                    } else {
                        format!("{}*{}", name(*i), name(*j))
                    };
                    (m, c.clone())
                })
                .chain(self.lin.iter().map(|(b, c)| (name(*b), c.clone())))
                .chain(if self.constant.is_zero() {
                    None
                } else {
                    Some((String::new(), self.constant.clone()))
                }),
        )
    }
}

fn dump_terms(terms: impl Iterator<Item = (String, Rat)>) -> String {
    let mut out = String::new();
    for (monomial, coeff) in terms {
        if coeff.is_zero() {
            continue;
        }
        let sign = if coeff.is_negative() { "-" } else { "+" };
        let mag = coeff.abs();
        if out.is_empty() {
            if sign == "-" {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        if monomial.is_empty() {
            out.push_str(&rat_string(&mag));
        } else if mag.is_one() {
            out.push_str(&monomial);
        } else {
            out.push_str(&format!("{}*{}", rat_string(&mag), monomial));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
