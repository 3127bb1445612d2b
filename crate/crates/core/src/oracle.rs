//! Brute-force verifiers. Everything here is deliberately naive and shares
//! no logic with the algorithms it checks: cut enumeration, subset DP and
//! per-edge BFS work straight from endpoint lists.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::atsp::AtspInstance;
use crate::embed::{Cut, EdgeId, EmbeddedGraph};
use crate::numeric::{Cost, Q};

/// Largest vertex count for exhaustive cut enumeration.
pub const MAX_CUT_VERTICES: usize = 24;
/// Largest instance for the subset DP.
pub const MAX_DP_VERTICES: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance too large for the exhaustive oracle ({size} > {limit})")]
    TooLarge { size: usize, limit: usize },
    #[error("graph is disconnected: cut {mask:#x} has no edges")]
    Disconnected { mask: u64 },
    #[error("edge {0} is not in the graph")]
    UnknownEdge(EdgeId),
    #[error("not a Hamiltonian tour: {0}")]
    NotHamiltonian(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThinnessReport {
    #[serde(with = "crate::numeric::q_string")]
    pub max_ratio: Q,
    /// Side containing vertex 0 of a cut attaining `max_ratio`.
    pub witness: Vec<usize>,
    pub cuts_checked: u64,
}

impl ThinnessReport {
    pub fn witness_cut(&self, vertex_count: usize) -> Cut {
        Cut::new(vertex_count, &self.witness).expect("witness is a proper cut")
    }
}

/// Walks every set `U ∋ 0` in Gray-code order, passing the membership
/// bitmask of `U`, the vertex toggled to reach it, and whether `U` is a
/// proper subset (so `(U, V∖U)` is a cut). The start state is `U = {0}`.
fn for_each_cut(n: usize, mut f: impl FnMut(u64, Option<usize>, bool)) {
    if n < 2 {
        return;
    }
    let total = 1u64 << (n - 1);
    let full = (1u64 << n) - 1;
    let mut mask = 1u64;
    f(mask, None, mask != full);
    for i in 1..total {
        let bit = i.trailing_zeros() as usize + 1;
        mask ^= 1 << bit;
        f(mask, Some(bit), mask != full);
    }
}

struct Incidence {
    /// per vertex: (other endpoint, index into the edge list) for non-loops
    around: Vec<Vec<(usize, usize)>>,
}

fn incidence(n: usize, ends: &[(usize, usize)]) -> Incidence {
    let mut around = vec![Vec::new(); n];
    for (i, &(u, v)) in ends.iter().enumerate() {
        if u != v {
            around[u].push((v, i));
            around[v].push((u, i));
        }
    }
    Incidence { around }
}

/// Exact thinness of `f` in `g`: the largest `|F ∩ δ(U)| / |δ(U)|` over all
/// `2^(V−1) − 1` cuts. Ties keep the numerically smaller mask.
pub fn brute_force_thinness(
    g: &EmbeddedGraph,
    f: &[EdgeId],
) -> Result<ThinnessReport, OracleError> {
    let n = g.vertex_count();
    if n > MAX_CUT_VERTICES {
        return Err(OracleError::TooLarge {
            size: n,
            limit: MAX_CUT_VERTICES,
        });
    }
    let ids: Vec<EdgeId> = g.edge_ids().collect();
    let ends: Vec<(usize, usize)> = ids.iter().map(|&e| g.endpoints(e)).collect();
    let chosen: BTreeSet<EdgeId> = f.iter().copied().collect();
    for &e in &chosen {
        if !g.has_edge(e) {
            return Err(OracleError::UnknownEdge(e));
        }
    }
    let in_f: Vec<bool> = ids.iter().map(|e| chosen.contains(e)).collect();
    let inc = incidence(n, &ends);

    let mut side = vec![false; n];
    side[0] = true;
    let (mut cut_all, mut cut_f) = (0i64, 0i64);
    for &(_, i) in &inc.around[0] {
        cut_all += 1;
        cut_f += in_f[i] as i64;
    }
    let mut best: Option<(Q, u64)> = None;
    let mut checked = 0u64;
    let mut failure = None;
    for_each_cut(n, |mask, flipped, proper| {
        if let Some(v) = flipped {
            for &(w, i) in &inc.around[v] {
                let crossing = side[v] != side[w];
                let delta = if crossing { -1 } else { 1 };
                cut_all += delta;
                if in_f[i] {
                    cut_f += delta;
                }
            }
            side[v] = !side[v];
        }
        if !proper {
            return;
        }
        checked += 1;
        if cut_all == 0 {
            failure.get_or_insert(mask);
            return;
        }
        let ratio = Q::new(cut_f as i128, cut_all as i128);
        let better = match &best {
            None => true,
            Some((r, m)) => ratio > *r || (ratio == *r && mask < *m),
        };
        if better {
            best = Some((ratio, mask));
        }
    });
    if let Some(mask) = failure {
        return Err(OracleError::Disconnected { mask });
    }
    let (max_ratio, mask) = best.unwrap_or((Q::from_integer(0), 1));
    Ok(ThinnessReport {
        max_ratio,
        witness: (0..n).filter(|&v| mask >> v & 1 == 1).collect(),
        cuts_checked: checked,
    })
}

/// Exact edge connectivity by enumerating every cut. Loops never count.
pub fn brute_force_edge_connectivity(g: &EmbeddedGraph) -> Result<u32, OracleError> {
    let n = g.vertex_count();
    if n > MAX_CUT_VERTICES {
        return Err(OracleError::TooLarge {
            size: n,
            limit: MAX_CUT_VERTICES,
        });
    }
    let ends: Vec<(usize, usize)> = g.edge_ids().map(|e| g.endpoints(e)).collect();
    let inc = incidence(n, &ends);
    let mut side = vec![false; n];
    side[0] = true;
    let mut cut = inc.around[0].len() as i64;
    let mut best = if n < 2 { 0 } else { i64::MAX };
    for_each_cut(n, |_, flipped, proper| {
        if let Some(v) = flipped {
            for &(w, _) in &inc.around[v] {
                cut += if side[v] != side[w] { -1 } else { 1 };
            }
            side[v] = !side[v];
        }
        if proper {
            best = best.min(cut);
        }
    });
    Ok(best as u32)
}

/// Minimum of `x(δ⁺(S))` over every nonempty proper `S`, for an arc weight
/// matrix `x`. Returns the value and the bitmask of a minimizing `S`
/// (smallest mask on ties).
pub fn brute_force_min_out_cut(x: &[Vec<f64>]) -> Result<(f64, u64), OracleError> {
    let n = x.len();
    if n > MAX_CUT_VERTICES {
        return Err(OracleError::TooLarge {
            size: n,
            limit: MAX_CUT_VERTICES,
        });
    }
    let mut best = (f64::INFINITY, 0u64);
    for mask in 1..(1u64 << n) - 1 {
        let mut out = 0.0;
        for (i, row) in x.iter().enumerate() {
            if mask >> i & 1 == 0 {
                continue;
            }
            for (j, &v) in row.iter().enumerate() {
                if mask >> j & 1 == 0 {
                    out += v;
                }
            }
        }
        if out < best.0 {
            best = (out, mask);
        }
    }
    Ok(best)
}

/// Optimal tour by dynamic programming over subsets; the tour starts at 0.
/// Among optimal tours the one found first by increasing predecessor id is
/// returned.
pub fn brute_force_atsp(inst: &AtspInstance) -> Result<(Cost, Vec<usize>), OracleError> {
    let n = inst.n();
    if n > MAX_DP_VERTICES {
        return Err(OracleError::TooLarge {
            size: n,
            limit: MAX_DP_VERTICES,
        });
    }
    if n == 1 {
        return Ok((Cost::ZERO, vec![0]));
    }
    let c = |i: usize, j: usize| inst.cost(i, j).micros();
    let full = 1usize << (n - 1);
    // dp[S][j]: cheapest path from 0 visiting set S of {1..n-1}, ending at j ∈ S
    let mut dp = vec![vec![i64::MAX; n]; full];
    let mut parent = vec![vec![usize::MAX; n]; full];
    for j in 1..n {
        dp[1 << (j - 1)][j] = c(0, j);
        parent[1 << (j - 1)][j] = 0;
    }
    for s in 1..full {
        for j in 1..n {
            if s >> (j - 1) & 1 == 0 || dp[s][j] == i64::MAX {
                continue;
            }
            for k in 1..n {
                if s >> (k - 1) & 1 == 1 {
                    continue;
                }
                let t = s | 1 << (k - 1);
                let cand = dp[s][j] + c(j, k);
                if cand < dp[t][k] {
                    dp[t][k] = cand;
                    parent[t][k] = j;
                }
            }
        }
    }
    let last = full - 1;
    let (best, end) = (1..n)
        .map(|j| (dp[last][j] + c(j, 0), j))
        .min()
        .expect("n >= 2");
    let mut order = Vec::with_capacity(n);
    let (mut s, mut j) = (last, end);
    while j != 0 {
        order.push(j);
        let p = parent[s][j];
        s &= !(1 << (j - 1));
        j = p;
    }
    order.push(0);
    order.reverse();
    Ok((Cost::from_micros(best), order))
}

/// Checks that `order` visits each vertex exactly once and returns the cost
/// of the closed tour.
pub fn verify_tour(order: &[usize], inst: &AtspInstance) -> Result<Cost, OracleError> {
    let n = inst.n();
    if order.len() != n {
        return Err(OracleError::NotHamiltonian(format!(
            "tour has {} entries for {n} vertices",
            order.len()
        )));
    }
    let mut seen = vec![false; n];
    for &v in order {
        if v >= n {
            return Err(OracleError::NotHamiltonian(format!(
                "vertex {v} out of range"
            )));
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(OracleError::NotHamiltonian(format!("vertex {v} repeated")));
        }
    }
    Ok((0..n)
        .map(|i| inst.cost(order[i], order[(i + 1) % n]))
        .sum())
}

/// Girth of an undirected multigraph given as endpoint pairs: for each edge,
/// one plus the BFS distance between its ends with that edge removed.
pub fn brute_force_girth(n: usize, ends: &[(usize, usize)]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &(u, v)) in ends.iter().enumerate() {
        if u == v {
            return Some(1);
        }
        let mut dist = vec![usize::MAX; n];
        dist[u] = 0;
        let mut queue = VecDeque::from([u]);
        while let Some(a) = queue.pop_front() {
            for (j, &(p, q)) in ends.iter().enumerate() {
                if j == i {
                    continue;
                }
                let b = if p == a {
                    q
                } else if q == a {
                    p
                } else {
                    continue;
                };
                if dist[b] == usize::MAX {
                    dist[b] = dist[a] + 1;
                    queue.push_back(b);
                }
            }
        }
        if dist[v] != usize::MAX {
            let len = dist[v] + 1;
            best = Some(best.map_or(len, |b| b.min(len)));
        }
    }
    best
}

/// Number of connected components, straight from an endpoint list.
pub fn brute_force_components(n: usize, ends: &[(usize, usize)]) -> usize {
    let mut label: Vec<usize> = (0..n).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for &(u, v) in ends {
            let m = label[u].min(label[v]);
            if label[u] != m || label[v] != m {
                label[u] = m;
                label[v] = m;
                changed = true;
            }
        }
    }
    (0..n).filter(|&v| label[v] == v).count()
}
