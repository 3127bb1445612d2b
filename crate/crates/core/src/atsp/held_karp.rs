//! Cutting-plane solver for the Held-Karp relaxation
//!
//! ```text
//! min Σ c_a x_a   s.t.  x(δ⁺(v)) = x(δ⁻(v)) = 1  for every v,
//!                       x(δ⁺(S)) ≥ 1              for every ∅ ≠ S ⊊ V,
//!                       x ≥ 0.
//! ```
//!
//! The degree rows already force `x ≤ 1`, so no explicit upper bounds are
//! added. Subtour rows are generated lazily: after each LP solve the most
//! violated cut among the `n − 1` minimum `0`–`t` cuts is added and the LP
//! is solved again from scratch.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{cost_to_big, serialize_big_q, AtspError, AtspInstance, BigQ};
use crate::flow::{self, FlowNetwork};
use crate::lp::{self, EqualityLp, FLOAT_EPS};

/// Largest instance the dense formulation accepts (cuts are bit masks).
pub const MAX_HK_VERTICES: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct HkOptions {
    /// Exact rational arithmetic; `None` picks exact for `n ≤ 10`.
    pub exact: Option<bool>,
    /// Feasibility tolerance of the floating-point mode.
    pub epsilon: f64,
    pub max_rounds: usize,
}

impl Default for HkOptions {
    fn default() -> Self {
        HkOptions {
            exact: None,
            epsilon: FLOAT_EPS,
            max_rounds: 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HkArc {
    pub from: usize,
    pub to: usize,
    #[serde(serialize_with = "serialize_big_q")]
    pub value: BigRational,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HkSolution {
    pub n: usize,
    /// Arcs with nonzero value, in `(from, to)` order.
    pub arcs: Vec<HkArc>,
    /// Objective in cost units.
    #[serde(serialize_with = "serialize_big_q")]
    pub objective: BigRational,
    /// Vertex sets of the subtour rows that were added.
    pub cuts: Vec<Vec<usize>>,
    pub exact: bool,
    /// Tolerance used for feasibility decisions (zero in exact mode).
    pub epsilon: f64,
    pub rounds: usize,
    pub pivots: usize,
}

impl HkSolution {
    pub fn value(&self, i: usize, j: usize) -> BigRational {
        self.arcs
            .binary_search_by(|a| (a.from, a.to).cmp(&(i, j)))
            .map(|k| self.arcs[k].value.clone())
            .unwrap_or_else(|_| <BigRational as Zero>::zero())
    }

    pub fn cuts_added(&self) -> usize {
        self.cuts.len()
    }

    /// Unordered pairs `(min, max)` carrying positive value in either
    /// direction, sorted.
    pub fn support_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs: Vec<(usize, usize)> = self
            .arcs
            .iter()
            .map(|a| (a.from.min(a.to), a.from.max(a.to)))
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        pairs
    }

    /// Dense `f64` copy of `x`, for tolerance-based checks.
    pub fn matrix_f64(&self) -> Vec<Vec<f64>> {
        let mut m = vec![vec![0.0; self.n]; self.n];
        for a in &self.arcs {
            m[a.from][a.to] = ToPrimitive::to_f64(&a.value).unwrap_or(f64::NAN);
        }
        m
    }

    pub fn objective_f64(&self) -> f64 {
        ToPrimitive::to_f64(&self.objective).unwrap_or(f64::NAN)
    }

    pub fn objective_string(&self) -> String {
        BigQ(&self.objective).to_string()
    }
}

/// Minimum `x(δ⁺(S))` over sets `S ∋ 0`, with the smallest mask among ties.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CutCheck {
    #[serde(serialize_with = "serialize_big_q")]
    pub value: BigRational,
    pub set: Vec<usize>,
}

/// Exact separation sweep over a finished solution. Because `x` balances
/// at every vertex, `x(δ⁺(S)) = x(δ⁺(V∖S))`, so sets containing vertex 0
/// cover every cut.
pub fn separate(sol: &HkSolution) -> CutCheck {
    let mut x = vec![vec![<BigRational as Zero>::zero(); sol.n]; sol.n];
    for a in &sol.arcs {
        x[a.from][a.to] = a.value.clone();
    }
    let (value, mask) = min_out_cut(&x);
    CutCheck {
        value,
        set: mask_members(mask, sol.n),
    }
}

fn mask_members(mask: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|&v| mask >> v & 1 == 1).collect()
}

fn min_out_cut<F: lp::Field + flow::Capacity>(x: &[Vec<F>]) -> (F, u64) {
    let n = x.len();
    let mut best: Option<(F, u64)> = None;
    for t in 1..n {
        let mut net = FlowNetwork::<F>::new(n);
        for (i, row) in x.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if i != j && flow::Capacity::is_positive(v) {
                    net.add_arc(i, j, v.clone());
                }
            }
        }
        let value = net.max_flow(0, t);
        let side = net.source_side(0);
        let mask = side
            .iter()
            .enumerate()
            .filter(|(_, &s)| s)
            .fold(0u64, |m, (v, _)| m | 1 << v);
        let better = match &best {
            None => true,
            Some((bv, bm)) => match lp::Field::sub(&value, bv).sign() {
                Ordering::Less => true,
                Ordering::Equal => mask < *bm,
                Ordering::Greater => false,
            },
        };
        if better {
            best = Some((value, mask));
        }
    }
    best.expect("at least two vertices")
}

pub fn solve_held_karp(inst: &AtspInstance, opts: &HkOptions) -> Result<HkSolution, AtspError> {
    let n = inst.n();
    if n < 3 {
        return Err(AtspError::TooSmall { need: 3, got: n });
    }
    if n > MAX_HK_VERTICES {
        return Err(AtspError::TooLarge {
            limit: MAX_HK_VERTICES,
            got: n,
        });
    }
    let exact = opts.exact.unwrap_or(n <= 10);
    if exact {
        cutting_plane::<BigRational>(inst, opts, cost_to_big, 0.0, <BigRational as One>::one())
    } else {
        cutting_plane::<f64>(inst, opts, |c| c.to_f64(), opts.epsilon, 1.0 - opts.epsilon)
    }
}

fn cutting_plane<F: lp::Field + flow::Capacity>(
    inst: &AtspInstance,
    opts: &HkOptions,
    cost: impl Fn(crate::numeric::Cost) -> F,
    eps: f64,
    threshold: F,
) -> Result<HkSolution, AtspError> {
    let n = inst.n();
    let arcs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let m = arcs.len();
    let mut cuts: Vec<u64> = Vec::new();
    let mut pivots = 0;

    for round in 1..=opts.max_rounds {
        let cols = m + cuts.len();
        let mut a = Vec::with_capacity(2 * n + cuts.len());
        for v in 0..n {
            a.push(row_of(
                cols,
                arcs.iter()
                    .enumerate()
                    .filter(|(_, &(i, _))| i == v)
                    .map(|(k, _)| k),
            ));
        }
        for v in 0..n {
            a.push(row_of(
                cols,
                arcs.iter()
                    .enumerate()
                    .filter(|(_, &(_, j))| j == v)
                    .map(|(k, _)| k),
            ));
        }
        for (ci, &mask) in cuts.iter().enumerate() {
            let inside = |v: usize| mask >> v & 1 == 1;
            let mut row = row_of(
                cols,
                arcs.iter()
                    .enumerate()
                    .filter(|(_, &(i, j))| inside(i) && !inside(j))
                    .map(|(k, _)| k),
            );
            row[m + ci] = F::from_i64(-1);
            a.push(row);
        }
        let mut c: Vec<F> = arcs.iter().map(|&(i, j)| cost(inst.cost(i, j))).collect();
        c.resize(cols, <F as lp::Field>::zero());
        let lp = EqualityLp {
            b: vec![<F as lp::Field>::one(); a.len()],
            a,
            c,
        };
        let sol = lp::solve(&lp).map_err(AtspError::Lp)?;
        pivots += sol.pivots;

        let mut x = vec![vec![<F as lp::Field>::zero(); n]; n];
        for (k, &(i, j)) in arcs.iter().enumerate() {
            if !sol.x[k].is_zero_tol() {
                x[i][j] = sol.x[k].clone();
            }
        }
        let (value, mask) = min_out_cut(&x);
        if lp::Field::sub(&value, &threshold).sign() != Ordering::Less {
            return Ok(finish(inst, &x, &cuts, eps, round, pivots));
        }
        if cuts.contains(&mask) {
            // an added row cannot be violated again beyond tolerance; this
            // only happens if the LP arithmetic has broken down
            return Err(AtspError::IterationLimit(round));
        }
        cuts.push(mask);
    }
    Err(AtspError::IterationLimit(opts.max_rounds))
}

fn row_of<F: lp::Field>(cols: usize, ones: impl Iterator<Item = usize>) -> Vec<F> {
    let mut row = vec![<F as lp::Field>::zero(); cols];
    for k in ones {
        row[k] = <F as lp::Field>::one();
    }
    row
}

fn finish<F: lp::Field>(
    inst: &AtspInstance,
    x: &[Vec<F>],
    cuts: &[u64],
    eps: f64,
    rounds: usize,
    pivots: usize,
) -> HkSolution {
    let n = x.len();
    let mut arcs = Vec::new();
    let mut objective = <BigRational as Zero>::zero();
    for (i, row) in x.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let value = v.to_rational();
            if i == j || !Signed::is_positive(&value) {
                continue;
            }
            objective += &value * cost_to_big(inst.cost(i, j));
            arcs.push(HkArc {
                from: i,
                to: j,
                value,
            });
        }
    }
    HkSolution {
        n,
        arcs,
        objective,
        cuts: cuts.iter().map(|&m| mask_members(m, n)).collect(),
        exact: eps == 0.0,
        epsilon: eps,
        rounds,
        pivots,
    }
}
