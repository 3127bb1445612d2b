//! Undirected multigraph with stable edge ids, used for dual-graph views
//! that are edited in place (thread selection, pruning, cycle search).

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::embed::EdgeId;

/// Chains traversed by a path, each with its direction (`true` = forward).
type ChainPath = Vec<(usize, bool)>;

const NONE: usize = usize::MAX;

/// A maximal path whose internal vertices have degree 2, or a closed walk
/// of degree-2 vertices through at most one other vertex.
///
/// `vertices` has one more entry than `edges`; `edges[i]` joins
/// `vertices[i]` and `vertices[i + 1]`. Closed chains repeat the start
/// vertex at the end.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    pub vertices: Vec<usize>,
    pub edges: Vec<EdgeId>,
}

impl Chain {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.vertices.first() == self.vertices.last()
    }

    pub fn min_edge(&self) -> EdgeId {
        self.edges.iter().copied().min().unwrap_or(NONE)
    }

    fn reversed(&self) -> Chain {
        Chain {
            vertices: self.vertices.iter().rev().copied().collect(),
            edges: self.edges.iter().rev().copied().collect(),
        }
    }
}

/// A simple cycle: `edges[i]` joins `vertices[i]` and `vertices[(i+1) % len]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cycle {
    pub vertices: Vec<usize>,
    pub edges: Vec<EdgeId>,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Multigraph {
    adj: Vec<Vec<(EdgeId, usize)>>,
    ends: Vec<Option<(usize, usize)>>,
    edge_count: usize,
}

impl Multigraph {
    pub fn new(vertex_count: usize) -> Self {
        Multigraph {
            adj: vec![Vec::new(); vertex_count],
            ends: Vec::new(),
            edge_count: 0,
        }
    }

    pub fn with_edges<I: IntoIterator<Item = (EdgeId, usize, usize)>>(
        vertex_count: usize,
        edges: I,
    ) -> Self {
        let mut g = Multigraph::new(vertex_count);
        for (id, u, v) in edges {
            g.add_edge(id, u, v);
        }
        g
    }

    /// Adds edge `id` between `u` and `v`. A loop occupies two adjacency
    /// slots at its vertex, so it contributes 2 to the degree.
    pub fn add_edge(&mut self, id: EdgeId, u: usize, v: usize) {
        if id >= self.ends.len() {
            self.ends.resize(id + 1, None);
        }
        assert!(self.ends[id].is_none(), "edge {id} added twice");
        self.ends[id] = Some((u, v));
        self.edge_count += 1;
        for (a, b) in [(u, v), (v, u)] {
            let list = &mut self.adj[a];
            let pos = list.partition_point(|&(e, _)| e <= id);
            list.insert(pos, (id, b));
        }
    }

    pub fn remove_edge(&mut self, id: EdgeId) -> bool {
        let Some((u, v)) = self.ends.get(id).copied().flatten() else {
            return false;
        };
        self.ends[id] = None;
        self.edge_count -= 1;
        self.adj[u].retain(|&(e, _)| e != id);
        if v != u {
            self.adj[v].retain(|&(e, _)| e != id);
        }
        true
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn has_edge(&self, id: EdgeId) -> bool {
        self.ends.get(id).map(|e| e.is_some()).unwrap_or(false)
    }

    pub fn ends(&self, id: EdgeId) -> Option<(usize, usize)> {
        self.ends.get(id).copied().flatten()
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.ends
            .iter()
            .enumerate()
            .filter(|(_, e)| e.is_some())
            .map(|(i, _)| i)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Incident `(edge, other end)` pairs sorted by edge id.
    pub fn neighbors(&self, v: usize) -> &[(EdgeId, usize)] {
        &self.adj[v]
    }

    /// Unweighted distances from a set of sources (`usize::MAX` if unreachable).
    pub fn bfs(&self, sources: &[usize]) -> Vec<usize> {
        let mut dist = vec![NONE; self.vertex_count()];
        let mut queue = std::collections::VecDeque::new();
        for &s in sources {
            if dist[s] == NONE {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            for &(_, w) in &self.adj[v] {
                if dist[w] == NONE {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Repeatedly deletes degree-1 vertices with their edge; returns the
    /// removed edges in deletion order.
    pub fn prune_leaves(&mut self) -> Vec<EdgeId> {
        let mut removed = Vec::new();
        let mut stack: Vec<usize> = (0..self.vertex_count())
            .filter(|&v| self.degree(v) == 1)
            .rev()
            .collect();
        while let Some(v) = stack.pop() {
            if self.degree(v) != 1 {
                continue;
            }
            let (e, w) = self.adj[v][0];
            self.remove_edge(e);
            removed.push(e);
            if self.degree(w) == 1 {
                stack.push(w);
            }
        }
        removed
    }

    /// Decomposes the edge set into maximal chains. Chains hanging between
    /// vertices of degree other than 2 are found first (by start vertex,
    /// then edge id); components made only of degree-2 vertices come last.
    pub fn chains(&self) -> Vec<Chain> {
        let n = self.vertex_count();
        let branch = |v: usize| self.degree(v) != 2;
        let mut visited = vec![false; self.ends.len()];
        let mut out = Vec::new();
        for v in (0..n).filter(|&v| branch(v) && self.degree(v) > 0) {
            for &(e, w) in &self.adj[v] {
                if visited[e] {
                    continue;
                }
                let mut chain = Chain {
                    vertices: vec![v],
                    edges: Vec::new(),
                };
                let (mut edge, mut next) = (e, w);
                loop {
                    visited[edge] = true;
                    chain.edges.push(edge);
                    chain.vertices.push(next);
                    if branch(next) {
                        break;
                    }
                    let &(e2, w2) = self.adj[next]
                        .iter()
                        .find(|&&(x, _)| x != edge)
                        .expect("degree-2 vertex has a second edge");
                    edge = e2;
                    next = w2;
                }
                out.push(chain);
            }
        }
        for v in 0..n {
            if self.degree(v) != 2 {
                continue;
            }
            let (e, w) = self.adj[v][0];
            if visited[e] {
                continue;
            }
            let mut chain = Chain {
                vertices: vec![v],
                edges: Vec::new(),
            };
            let (mut edge, mut next) = (e, w);
            loop {
                visited[edge] = true;
                chain.edges.push(edge);
                chain.vertices.push(next);
                if next == v {
                    break;
                }
                let &(e2, w2) = self.adj[next].iter().find(|&&(x, _)| x != edge).unwrap();
                edge = e2;
                next = w2;
            }
            out.push(chain);
        }
        out
    }

    /// A shortest cycle, or `None` for a forest.
    ///
    /// Degree-2 chains are contracted to weighted edges first, so the cost
    /// is governed by the number of chains rather than the number of edges.
    /// Each chain is tried as the closing edge in order of its smallest edge
    /// id, closing it with a shortest path in the rest of the contracted
    /// graph; the first strictly shortest candidate wins.
    pub fn shortest_cycle(&self) -> Option<Cycle> {
        self.shortest_cycle_below(usize::MAX)
    }

    /// Like [`Multigraph::shortest_cycle`] but only reports cycles strictly
    /// shorter than `limit`.
    pub fn shortest_cycle_below(&self, limit: usize) -> Option<Cycle> {
        let mut chains = self.chains();
        chains.sort_by_key(|c| c.min_edge());
        let n = self.vertex_count();
        let mut contracted: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); n];
        for (i, c) in chains.iter().enumerate() {
            if !c.is_closed() {
                let (a, b) = (c.vertices[0], *c.vertices.last().unwrap());
                contracted[a].push((i, b, c.len()));
                contracted[b].push((i, a, c.len()));
            }
        }

        // (length, closing chain, path through the other chains)
        let mut best: Option<(usize, usize, ChainPath)> = None;
        for (i, c) in chains.iter().enumerate() {
            let bound = best.as_ref().map(|b| b.0).unwrap_or(limit);
            if c.len() >= bound {
                continue;
            }
            if c.is_closed() {
                best = Some((c.len(), i, Vec::new()));
                continue;
            }
            let (src, dst) = (c.vertices[0], *c.vertices.last().unwrap());
            if let Some((d, path)) =
                dijkstra_path(&contracted, &chains, dst, src, i, bound - c.len())
            {
                best = Some((c.len() + d, i, path));
            }
        }

        let (_, closing, path) = best?;
        let c = &chains[closing];
        let mut vertices: Vec<usize> = c.vertices[..c.len()].to_vec();
        let mut edges = c.edges.clone();
        for (idx, forward) in path {
            let piece = if forward {
                chains[idx].clone()
            } else {
                chains[idx].reversed()
            };
            vertices.extend_from_slice(&piece.vertices[..piece.len()]);
            edges.extend_from_slice(&piece.edges);
        }
        Some(Cycle { vertices, edges })
    }

    pub fn girth(&self) -> Option<usize> {
        self.shortest_cycle().map(|c| c.len())
    }
}

/// Shortest path from `from` to `to` in the contracted graph avoiding chain
/// `skip`, only if strictly shorter than `bound`. Returns the length and the
/// chains along the path with their traversal direction.
fn dijkstra_path(
    contracted: &[Vec<(usize, usize, usize)>],
    chains: &[Chain],
    from: usize,
    to: usize,
    skip: usize,
    bound: usize,
) -> Option<(usize, ChainPath)> {
    let n = contracted.len();
    let mut dist = vec![NONE; n];
    let mut pred: Vec<(usize, usize)> = vec![(NONE, NONE); n];
    let mut heap = BinaryHeap::new();
    dist[from] = 0;
    heap.push(Reverse((0usize, from)));
    while let Some(Reverse((d, v))) = heap.pop() {
        if d > dist[v] {
            continue;
        }
        if d >= bound {
            return None;
        }
        if v == to {
            break;
        }
        for &(ci, w, len) in &contracted[v] {
            if ci == skip {
                continue;
            }
            let nd = d + len;
            if nd < dist[w] {
                dist[w] = nd;
                pred[w] = (ci, v);
                heap.push(Reverse((nd, w)));
            }
        }
    }
    if dist[to] == NONE || dist[to] >= bound {
        return None;
    }
    let mut path = Vec::new();
    let mut v = to;
    while v != from {
        let (ci, u) = pred[v];
        // traversed u -> v
        path.push((ci, chains[ci].vertices[0] == u));
        v = u;
    }
    path.reverse();
    Some((dist[to], path))
}
