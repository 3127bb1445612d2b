//! Maximum flow (Dinic) over a generic capacity type, plus global edge
//! connectivity of undirected multigraphs.

use std::collections::VecDeque;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::embed::EmbeddedGraph;

/// Capacity values a flow network can carry.
pub trait Capacity: Clone + PartialOrd {
    fn zero() -> Self;
    /// Strictly positive, up to whatever tolerance the type uses.
    fn is_positive(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
}

impl Capacity for i64 {
    fn zero() -> Self {
        0
    }
    fn is_positive(&self) -> bool {
        *self > 0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
}

/// Residual capacities below this are treated as saturated.
pub const FLOAT_FLOW_EPS: f64 = 1e-12;

impl Capacity for f64 {
    fn zero() -> Self {
        0.0
    }
    fn is_positive(&self) -> bool {
        *self > FLOAT_FLOW_EPS
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
}

impl Capacity for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
}

#[derive(Debug, Clone)]
struct Arc<C> {
    to: usize,
    cap: C,
}

/// A flow network; arcs are stored in pairs so arc `i ^ 1` is the reverse
/// of arc `i`.
#[derive(Debug, Clone)]
pub struct FlowNetwork<C> {
    adj: Vec<Vec<usize>>,
    arcs: Vec<Arc<C>>,
}

impl<C: Capacity> FlowNetwork<C> {
    pub fn new(n: usize) -> Self {
        FlowNetwork {
            adj: vec![Vec::new(); n],
            arcs: Vec::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    /// Adds a directed arc and returns its index.
    pub fn add_arc(&mut self, u: usize, v: usize, cap: C) -> usize {
        self.add_pair(u, v, cap, C::zero())
    }

    /// Adds an undirected edge: capacity `cap` in both directions.
    pub fn add_edge(&mut self, u: usize, v: usize, cap: C) -> usize {
        self.add_pair(u, v, cap.clone(), cap)
    }

    fn add_pair(&mut self, u: usize, v: usize, forward: C, backward: C) -> usize {
        let i = self.arcs.len();
        self.arcs.push(Arc {
            to: v,
            cap: forward,
        });
        self.arcs.push(Arc {
            to: u,
            cap: backward,
        });
        self.adj[u].push(i);
        self.adj[v].push(i + 1);
        i
    }

    /// Remaining capacity of arc `i`.
    pub fn residual(&self, i: usize) -> &C {
        &self.arcs[i].cap
    }

    fn levels(&self, s: usize) -> Vec<usize> {
        let mut level = vec![usize::MAX; self.node_count()];
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &i in &self.adj[u] {
                let a = &self.arcs[i];
                if a.cap.is_positive() && level[a.to] == usize::MAX {
                    level[a.to] = level[u] + 1;
                    queue.push_back(a.to);
                }
            }
        }
        level
    }

    fn augment(
        &mut self,
        u: usize,
        t: usize,
        limit: Option<C>,
        level: &[usize],
        next: &mut [usize],
    ) -> Option<C> {
        if u == t {
            return limit;
        }
        while next[u] < self.adj[u].len() {
            let i = self.adj[u][next[u]];
            let (to, cap) = (self.arcs[i].to, self.arcs[i].cap.clone());
            if cap.is_positive() && level[to] == level[u] + 1 {
                let lim = match &limit {
                    Some(l) if *l < cap => l.clone(),
                    _ => cap,
                };
                if let Some(pushed) = self.augment(to, t, Some(lim), level, next) {
                    if pushed.is_positive() {
                        self.arcs[i].cap = self.arcs[i].cap.sub(&pushed);
                        self.arcs[i ^ 1].cap = self.arcs[i ^ 1].cap.add(&pushed);
                        return Some(pushed);
                    }
                }
            }
            next[u] += 1;
        }
        None
    }

    /// Pushes a maximum flow from `s` to `t` and returns its value. The
    /// network keeps the residual capacities afterwards.
    pub fn max_flow(&mut self, s: usize, t: usize) -> C {
        assert_ne!(s, t);
        let mut total = C::zero();
        loop {
            let level = self.levels(s);
            if level[t] == usize::MAX {
                return total;
            }
            let mut next = vec![0; self.node_count()];
            // the first call has no limit; Dinic's blocking flow
            while let Some(pushed) = self.augment(s, t, None, &level, &mut next) {
                total = total.add(&pushed);
            }
        }
    }

    /// Nodes reachable from `s` in the residual network.
    pub fn source_side(&self, s: usize) -> Vec<bool> {
        let level = self.levels(s);
        level.iter().map(|&l| l != usize::MAX).collect()
    }
}

/// Global minimum cut of an undirected capacitated graph, via `n − 1`
/// maximum flows from vertex 0. Returns 0 for disconnected graphs and for
/// graphs with fewer than two vertices.
pub fn min_cut_value(n: usize, edges: &[(usize, usize, i64)]) -> i64 {
    if n < 2 {
        return 0;
    }
    let mut best = i64::MAX;
    for t in 1..n {
        let mut net = FlowNetwork::new(n);
        for &(u, v, c) in edges {
            if u != v && c > 0 {
                net.add_edge(u, v, c);
            }
        }
        best = best.min(net.max_flow(0, t));
        if best == 0 {
            break;
        }
    }
    best
}

/// Edge connectivity `k` of an embedded multigraph, with parallel copies
/// aggregated into one capacitated edge per vertex pair. Loops never
/// contribute to a cut.
pub fn edge_connectivity(g: &EmbeddedGraph) -> u32 {
    let edges: Vec<(usize, usize, i64)> = g
        .pair_multiplicities()
        .into_iter()
        .map(|((u, v), m)| (u, v, m as i64))
        .collect();
    min_cut_value(g.vertex_count(), &edges) as u32
}
