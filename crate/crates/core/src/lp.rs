//! Dense two-phase simplex for `min c·x  s.t.  A x = b, x ≥ 0`.
//!
//! The arithmetic is abstracted behind [`Field`]: exact big rationals give
//! bit-exact optima, `f64` trades exactness for speed with a fixed
//! tolerance. Bland's rule guarantees termination in both.

use std::cmp::Ordering;
use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub trait Field: Clone + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    /// Sign with the field's tolerance: values within it count as zero.
    fn sign(&self) -> Ordering;
    fn cmp_value(&self, o: &Self) -> Ordering;
    fn to_f64(&self) -> f64;
    /// Exact rational image (for floats, of the binary value itself).
    fn to_rational(&self) -> BigRational;

    fn is_zero_tol(&self) -> bool {
        self.sign() == Ordering::Equal
    }
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn sign(&self) -> Ordering {
        if self.is_positive() {
            Ordering::Greater
        } else if self.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
    fn cmp_value(&self, o: &Self) -> Ordering {
        self.cmp(o)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn to_rational(&self) -> BigRational {
        self.clone()
    }
}

/// Tolerance for the floating-point field.
pub const FLOAT_EPS: f64 = 1e-9;

impl Field for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn sign(&self) -> Ordering {
        if *self > FLOAT_EPS {
            Ordering::Greater
        } else if *self < -FLOAT_EPS {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
    fn cmp_value(&self, o: &Self) -> Ordering {
        self.partial_cmp(o).unwrap_or(Ordering::Equal)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn to_rational(&self) -> BigRational {
        BigRational::from_float(*self).unwrap_or_else(Zero::zero)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("simplex did not finish within {0} pivots")]
    IterationLimit(usize),
    #[error("malformed program: {0}")]
    Malformed(String),
}

/// `min c·x` subject to `A x = b`, `x ≥ 0`, with `b ≥ 0`.
#[derive(Debug, Clone)]
pub struct EqualityLp<F> {
    pub a: Vec<Vec<F>>,
    pub b: Vec<F>,
    pub c: Vec<F>,
}

#[derive(Debug, Clone)]
pub struct LpSolution<F> {
    pub x: Vec<F>,
    pub objective: F,
    pub pivots: usize,
}

struct Tableau<F> {
    /// `rows × (cols + 1)`; the last column is the right-hand side.
    t: Vec<Vec<F>>,
    /// reduced-cost row, same width; last entry is `−objective`
    z: Vec<F>,
    basis: Vec<usize>,
    cols: usize,
    pivots: usize,
}

impl<F: Field> Tableau<F> {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.t[r][c].clone();
        for v in self.t[r].iter_mut() {
            *v = v.div(&p);
        }
        let row = self.t[r].clone();
        let eliminate = |target: &mut Vec<F>| {
            let f = target[c].clone();
            if !f.is_zero_tol() {
                for (v, rv) in target.iter_mut().zip(&row) {
                    if !rv.is_zero_tol() {
                        *v = v.sub(&f.mul(rv));
                    }
                }
            }
            target[c] = F::zero();
        };
        for (i, other) in self.t.iter_mut().enumerate() {
            if i != r {
                eliminate(other);
            }
        }
        eliminate(&mut self.z);
        self.basis[r] = c;
        self.pivots += 1;
    }

    /// Bland's rule: the lowest-index improving column, then the lowest
    /// basis index among tied ratio-test rows.
    fn run(&mut self, allowed: &dyn Fn(usize) -> bool, limit: usize) -> Result<(), LpError> {
        loop {
            if self.pivots >= limit {
                return Err(LpError::IterationLimit(limit));
            }
            let Some(c) =
                (0..self.cols).find(|&j| allowed(j) && self.z[j].sign() == Ordering::Less)
            else {
                return Ok(());
            };
            let ratios: Vec<(usize, F)> = self
                .t
                .iter()
                .enumerate()
                .filter(|(_, row)| row[c].sign() == Ordering::Greater)
                .map(|(i, row)| (i, row[self.cols].div(&row[c])))
                .collect();
            let Some(min) = ratios
                .iter()
                .map(|(_, r)| r)
                .min_by(|a, b| a.cmp_value(b))
                .cloned()
            else {
                return Err(LpError::Unbounded);
            };
            let r = ratios
                .iter()
                .filter(|(_, v)| v.sub(&min).is_zero_tol())
                .min_by_key(|(i, _)| self.basis[*i])
                .map(|(i, _)| *i)
                .expect("minimum ratio row exists");
            self.pivot(r, c);
        }
    }
}

/// Default pivot budget.
pub const PIVOT_LIMIT: usize = 200_000;

pub fn solve<F: Field>(lp: &EqualityLp<F>) -> Result<LpSolution<F>, LpError> {
    let m = lp.a.len();
    let n = lp.c.len();
    if lp.b.len() != m || lp.a.iter().any(|r| r.len() != n) {
        return Err(LpError::Malformed("dimension mismatch".into()));
    }
    if lp.b.iter().any(|v| v.sign() == Ordering::Less) {
        return Err(LpError::Malformed("negative right-hand side".into()));
    }
    // columns: n structural, then m artificials
    let cols = n + m;
    let mut t: Vec<Vec<F>> = Vec::with_capacity(m);
    for (i, row) in lp.a.iter().enumerate() {
        let mut r = row.clone();
        r.extend((0..m).map(|j| if j == i { F::one() } else { F::zero() }));
        r.push(lp.b[i].clone());
        t.push(r);
    }
    // phase 1 objective: sum of artificials, priced out against the basis
    let mut z = vec![F::zero(); cols + 1];
    for row in &t {
        for (j, v) in row.iter().enumerate() {
            if j < n || j == cols {
                z[j] = z[j].sub(v);
            }
        }
    }
    let mut tab = Tableau {
        t,
        z,
        basis: (n..n + m).collect(),
        cols,
        pivots: 0,
    };
    tab.run(&|_| true, PIVOT_LIMIT)?;
    if tab.z[cols].sign() != Ordering::Equal {
        return Err(LpError::Infeasible);
    }

    // drive artificials out of the basis; rows where that is impossible are
    // redundant and get dropped
    let mut r = 0;
    while r < tab.t.len() {
        if tab.basis[r] >= n {
            if let Some(c) = (0..n).find(|&j| !tab.t[r][j].is_zero_tol()) {
                tab.pivot(r, c);
            } else {
                tab.t.remove(r);
                tab.basis.remove(r);
                continue;
            }
        }
        r += 1;
    }

    // phase 2: real costs, artificial columns barred
    let mut z = vec![F::zero(); cols + 1];
    z[..n].clone_from_slice(&lp.c);
    for (row, &b) in tab.t.iter().zip(&tab.basis) {
        let cb = lp.c[b].clone();
        if cb.is_zero_tol() {
            continue;
        }
        for (j, v) in row.iter().enumerate() {
            z[j] = z[j].sub(&cb.mul(v));
        }
    }
    tab.z = z;
    tab.run(&|j| j < n, PIVOT_LIMIT)?;

    let mut x = vec![F::zero(); n];
    for (row, &b) in tab.t.iter().zip(&tab.basis) {
        if b < n {
            x[b] = row[cols].clone();
        }
    }
    let objective = x
        .iter()
        .zip(&lp.c)
        .fold(F::zero(), |acc, (xi, ci)| acc.add(&xi.mul(ci)));
    Ok(LpSolution {
        x,
        objective,
        pivots: tab.pivots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn int(v: i64) -> BigRational {
        Field::from_i64(v)
    }

    #[test]
    fn small_exact_program() {
        // min -x - y  s.t.  x + 2y + s1 = 4,  3x + y + s2 = 6
        let lp = EqualityLp {
            a: vec![
                vec![int(1), int(2), int(1), int(0)],
                vec![int(3), int(1), int(0), int(1)],
            ],
            b: vec![int(4), int(6)],
            c: vec![int(-1), int(-1), int(0), int(0)],
        };
        let s = solve(&lp).unwrap();
        assert_eq!(s.x[0], q(8, 5));
        assert_eq!(s.x[1], q(6, 5));
        assert_eq!(s.objective, q(-14, 5));
    }

    #[test]
    fn float_matches_exact() {
        let lp = EqualityLp {
            a: vec![vec![1.0, 2.0, 1.0, 0.0], vec![3.0, 1.0, 0.0, 1.0]],
            b: vec![4.0, 6.0],
            c: vec![-1.0, -1.0, 0.0, 0.0],
        };
        let s = solve(&lp).unwrap();
        assert!((s.objective + 2.8).abs() < 1e-9);
    }

    #[test]
    fn redundant_rows_are_dropped() {
        // x + y = 1 stated twice
        let lp = EqualityLp {
            a: vec![vec![int(1), int(1)], vec![int(1), int(1)]],
            b: vec![int(1), int(1)],
            c: vec![int(2), int(3)],
        };
        let s = solve(&lp).unwrap();
        assert_eq!(s.objective, int(2));
    }

    #[test]
    fn infeasible_and_unbounded() {
        let lp = EqualityLp {
            a: vec![vec![int(1), int(1)]],
            b: vec![int(-1)],
            c: vec![int(0), int(0)],
        };
        assert!(matches!(solve(&lp), Err(LpError::Malformed(_))));
        let lp = EqualityLp {
            a: vec![vec![int(1), int(1)], vec![int(1), int(1)]],
            b: vec![int(1), int(2)],
            c: vec![int(0), int(0)],
        };
        assert_eq!(solve(&lp).unwrap_err(), LpError::Infeasible);
        let lp = EqualityLp {
            a: vec![vec![int(1), int(-1)]],
            b: vec![int(1)],
            c: vec![int(0), int(-1)],
        };
        assert_eq!(solve(&lp).unwrap_err(), LpError::Unbounded);
    }
}
