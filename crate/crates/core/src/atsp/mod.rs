//! Asymmetric TSP: instances, the Held-Karp relaxation and its rounding to
//! a Hamiltonian tour through a thin spanning tree.

mod format;
mod held_karp;
mod rounding;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::embed::EmbedError;
use crate::lp::LpError;
use crate::numeric::{Cost, DecimalError};
use crate::pipeline::PipelineError;

pub use format::{parse_atsp, write_atsp};
pub use held_karp::{
    separate, solve_held_karp, CutCheck, HkArc, HkOptions, HkSolution, MAX_HK_VERTICES,
};
pub use rounding::{
    atsp_approx, discretize, min_cost_circulation, orient_tree, round_to_tour, symmetrize,
    ApproxOptions, ApproxReport, Circulation, CirculationArc, Discretized, SymEdge, Symmetrized,
    TourReport,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AtspError {
    #[error("cost matrix is not square ({rows} rows, row {row} has {len} entries)")]
    NotSquare { rows: usize, row: usize, len: usize },
    #[error("diagonal entry {0} is nonzero")]
    NonzeroDiagonal(usize),
    #[error("negative cost at ({0}, {1})")]
    NegativeCost(usize, usize),
    #[error("instance needs at least {need} vertices, got {got}")]
    TooSmall { need: usize, got: usize },
    #[error("instance has {got} vertices, above the limit {limit}")]
    TooLarge { limit: usize, got: usize },
    #[error("malformed ATSP/1 input at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Decimal(#[from] DecimalError),
    #[error("held-karp LP failed: {0}")]
    Lp(#[from] LpError),
    #[error("cutting plane loop hit the round limit {0}")]
    IterationLimit(usize),
    #[error("embedding does not match the LP support: {0}")]
    EmbeddingMismatch(String),
    #[error("discretized graph has connectivity {measured}, below the required {required}")]
    ConnectivityShortfall { measured: u64, required: u64 },
    #[error("tree thinness {0} is not below 1")]
    ThinnessTooLarge(String),
    #[error("no feasible circulation: {0}")]
    CirculationInfeasible(String),
    #[error("cost bound violated: {0}")]
    CostBoundViolated(String),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error(transparent)]
    Embed(#[from] EmbedError),
}

/// A complete directed cost matrix with zero diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtspInstance {
    cost: Vec<Vec<Cost>>,
}

impl AtspInstance {
    pub fn new(cost: Vec<Vec<Cost>>) -> Result<Self, AtspError> {
        let n = cost.len();
        for (i, row) in cost.iter().enumerate() {
            if row.len() != n {
                return Err(AtspError::NotSquare {
                    rows: n,
                    row: i,
                    len: row.len(),
                });
            }
            if row[i] != Cost::ZERO {
                return Err(AtspError::NonzeroDiagonal(i));
            }
            if let Some(j) = row.iter().position(|c| c.micros() < 0) {
                return Err(AtspError::NegativeCost(i, j));
            }
        }
        Ok(AtspInstance { cost })
    }

    pub fn n(&self) -> usize {
        self.cost.len()
    }

    pub fn cost(&self, i: usize, j: usize) -> Cost {
        self.cost[i][j]
    }

    pub fn matrix(&self) -> &[Vec<Cost>] {
        &self.cost
    }

    /// Shortest-path closure (Floyd-Warshall), which satisfies the triangle
    /// inequality and never raises a cost.
    pub fn metric_completion(&self) -> Self {
        let n = self.n();
        let mut d = self.cost.clone();
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let via = d[i][k] + d[k][j];
                    if via < d[i][j] {
                        d[i][j] = via;
                    }
                }
            }
        }
        AtspInstance { cost: d }
    }

    pub fn is_metric(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| {
            (0..n).all(|j| (0..n).all(|k| self.cost[i][j] <= self.cost[i][k] + self.cost[k][j]))
        })
    }

    pub fn tour_cost(&self, order: &[usize]) -> Cost {
        let n = order.len();
        (0..n)
            .map(|i| self.cost[order[i]][order[(i + 1) % n]])
            .sum()
    }
}

/// A Hamiltonian cycle given as a vertex order starting at vertex 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Tour {
    pub order: Vec<usize>,
    pub cost: Cost,
}

/// `x` as an exact rational in cost units, from a micro-unit cost.
pub(crate) fn cost_to_big(c: Cost) -> BigRational {
    BigRational::new(BigInt::from(c.micros()), BigInt::from(1_000_000))
}

/// `p/q` rendering shared by reports.
pub(crate) struct BigQ<'a>(pub &'a BigRational);

impl fmt::Display for BigQ<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

pub(crate) fn serialize_big_q<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(&BigQ(q))
}
