//! Thin spanning trees from far-apart dual edges.
//!
//! The dual is repeatedly searched for a long thread (a maximal chain of
//! degree-2 dual vertices); its middle edge is kept and removed, and the
//! leaves this creates are pruned away. The kept dual edges are pairwise far
//! apart, so the corresponding primal edges meet every cut sparsely, and
//! they hit every dual cycle, so they connect the primal graph.

use std::collections::VecDeque;

use serde::Serialize;
use thiserror::Error;

use crate::embed::{geometric_dual, DualGraph, EdgeId, EmbedError, EmbeddedGraph};
use crate::multigraph::{Chain, Multigraph};
use crate::numeric::Q;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ThinTreeError {
    #[error("graph is disconnected ({0} components)")]
    Disconnected(usize),
    #[error("dual vertex {0} has degree 1 in the thread search")]
    DegreeOneVertex(usize),
    #[error("no thread of length at least {girth}/{alpha} among {threads} threads")]
    NoLongThread {
        girth: usize,
        alpha: u64,
        threads: usize,
    },
    #[error("selected edges do not span the graph")]
    NotSpanning,
    #[error("selected dual edges {0} and {1} are at distance {2}, below the certificate")]
    CertificateViolated(EdgeId, EdgeId, usize),
    #[error(transparent)]
    Embed(#[from] EmbedError),
}

/// `α(γ) = 4 + ⌊2·log₂(γ + 3/2)⌋`, computed without floating point:
/// `2·log₂(γ + 3/2) = log₂((2γ+3)²) − 2`.
pub fn alpha(genus: usize) -> u64 {
    let s = (2 * genus as u128 + 3).pow(2);
    let floor_log2 = 127 - s.leading_zeros() as u64;
    2 + floor_log2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ThreadKind {
    Path,
    Cycle,
}

/// A maximal chain of degree-2 vertices in a dual view.
///
/// `edges[i]` joins `vertices[i]` and `vertices[i+1]`. Paths are oriented
/// from their smaller end vertex. Cycles start at their vertex of degree
/// other than 2 (or at their smallest vertex) and run in the direction
/// whose first edge has the smaller id; their vertex list repeats the start.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Thread {
    pub vertices: Vec<usize>,
    pub edges: Vec<EdgeId>,
    pub kind: ThreadKind,
}

impl Thread {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn min_edge(&self) -> EdgeId {
        self.edges.iter().copied().min().unwrap_or(usize::MAX)
    }

    /// The edge at 1-based position `⌈L/2⌉` in thread order.
    pub fn middle_edge(&self) -> EdgeId {
        self.edges[(self.len() - 1) / 2]
    }

    fn from_chain(view: &Multigraph, c: Chain) -> Thread {
        let reverse = |c: Chain| Chain {
            vertices: c.vertices.into_iter().rev().collect(),
            edges: c.edges.into_iter().rev().collect(),
        };
        if !c.is_closed() {
            let c = if c.vertices[0] > *c.vertices.last().unwrap() {
                reverse(c)
            } else {
                c
            };
            return Thread {
                vertices: c.vertices,
                edges: c.edges,
                kind: ThreadKind::Path,
            };
        }
        let body = &c.vertices[..c.len()];
        let start = body
            .iter()
            .position(|&v| view.degree(v) != 2)
            .unwrap_or_else(|| (0..body.len()).min_by_key(|&i| body[i]).unwrap());
        let mut vertices: Vec<usize> = body[start..]
            .iter()
            .chain(&body[..start])
            .copied()
            .collect();
        let mut edges: Vec<EdgeId> = c.edges[start..]
            .iter()
            .chain(&c.edges[..start])
            .copied()
            .collect();
        if edges.len() > 1 && edges[edges.len() - 1] < edges[0] {
            edges.reverse();
            vertices[1..].reverse();
        }
        vertices.push(vertices[0]);
        Thread {
            vertices,
            edges,
            kind: ThreadKind::Cycle,
        }
    }
}

/// All threads of a dual view in which every non-isolated vertex has degree
/// at least 2. Every edge lies in exactly one thread.
pub fn find_threads(view: &Multigraph) -> Result<Vec<Thread>, ThinTreeError> {
    if let Some(v) = (0..view.vertex_count()).find(|&v| view.degree(v) == 1) {
        return Err(ThinTreeError::DegreeOneVertex(v));
    }
    Ok(view
        .chains()
        .into_iter()
        .map(|c| Thread::from_chain(view, c))
        .collect())
}

/// Far-edge selection loop on the dual. A thread qualifies when
/// `length·α ≥ g*`; the longest qualifying thread wins, ties going to the
/// thread with the smallest edge id.
pub fn select_far_edge_set(
    dual: &DualGraph,
    girth: usize,
    alpha: u64,
) -> Result<Vec<EdgeId>, ThinTreeError> {
    let mut view = dual.to_multigraph();
    view.prune_leaves();
    let mut selected = Vec::new();
    while view.edge_count() > 0 {
        let threads = find_threads(&view)?;
        let best = threads
            .iter()
            .filter(|t| t.len() as u64 * alpha >= girth as u64)
            .max_by(|a, b| a.len().cmp(&b.len()).then(b.min_edge().cmp(&a.min_edge())))
            .ok_or(ThinTreeError::NoLongThread {
                girth,
                alpha,
                threads: threads.len(),
            })?;
        let mid = best.middle_edge();
        selected.push(mid);
        view.remove_edge(mid);
        view.prune_leaves();
    }
    selected.sort_unstable();
    Ok(selected)
}

/// Smallest distance between two of the given dual edges, with the pair
/// attaining it, or `None` for fewer than two edges.
pub fn min_pairwise_distance(
    dual: &DualGraph,
    edges: &[EdgeId],
) -> Option<(usize, EdgeId, EdgeId)> {
    let m = dual.to_multigraph();
    let mut best: Option<(usize, EdgeId, EdgeId)> = None;
    for (i, &e) in edges.iter().enumerate() {
        let de = dual.edge(e)?;
        let dist = m.bfs(&[de.left, de.right]);
        for &f in &edges[i + 1..] {
            let df = dual.edge(f)?;
            let d = dist[df.left].min(dist[df.right]);
            if best.is_none_or(|b| d < b.0) {
                best = Some((d, e, f));
            }
        }
    }
    best
}

/// Breadth-first spanning tree from vertex 0 over the given edges, taking
/// edges in id order at each vertex.
pub fn bfs_tree(g: &EmbeddedGraph, edges: &[EdgeId]) -> Option<Vec<EdgeId>> {
    let n = g.vertex_count();
    if n == 0 {
        return Some(Vec::new());
    }
    let sub = Multigraph::with_edges(
        n,
        edges.iter().map(|&e| {
            let (u, v) = g.endpoints(e);
            (e, u, v)
        }),
    );
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    let mut tree = Vec::with_capacity(n.saturating_sub(1));
    while let Some(v) = queue.pop_front() {
        for &(e, w) in sub.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                tree.push(e);
                queue.push_back(w);
            }
        }
    }
    (tree.len() + 1 == n).then(|| {
        tree.sort_unstable();
        tree
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThinTreeResult {
    pub tree_edges: Vec<EdgeId>,
    /// The selected set `F` (same ids in primal and dual).
    pub far_set: Vec<EdgeId>,
    pub genus: usize,
    pub alpha: u64,
    pub dual_girth: usize,
    /// `2α/g*`.
    #[serde(with = "crate::numeric::q_string")]
    pub thinness_bound: Q,
    /// `m = ⌈g*/(2α)⌉` clamped to `[1, g*]`; `F` is `1/m`-thin.
    pub certificate_distance: usize,
    /// Measured minimum pairwise distance of `F*` in the original dual.
    pub measured_distance: Option<usize>,
    /// `c(T)/c(E)` when the graph carries costs.
    #[serde(with = "crate::numeric::q_string_opt")]
    pub cost_ratio: Option<Q>,
}

impl ThinTreeResult {
    /// `1/m`, the thinness certified for the whole far set.
    pub fn certified_thinness(&self) -> Q {
        Q::new(1, self.certificate_distance as i128)
    }
}

fn ceil_div(a: u64, b: u64) -> u64 {
    a.div_ceil(b)
}

/// Runs far-edge selection on a connected embedded graph and extracts a spanning
/// tree of thinness at most `2α/g*` from the selected set.
///
/// The certificate is checked at runtime: the selected dual edges must be
/// pairwise at distance at least `m − 1`. Along any dual cycle this leaves
/// at least `m − 1` edges between consecutive selected ones, so each cycle
/// of length `L ≥ g* ≥ m` carries at most `⌊L/m⌋` of them.
pub fn thin_spanning_tree(g: &EmbeddedGraph) -> Result<ThinTreeResult, ThinTreeError> {
    let components = g.component_count();
    if components != 1 {
        return Err(ThinTreeError::Disconnected(components));
    }
    let genus = g.genus()?;
    let alpha = alpha(genus);
    let cost_ratio = |tree: &[EdgeId]| {
        g.has_costs().then(|| {
            let total = g.total_cost().to_q();
            if total == Q::from_integer(0) {
                Q::from_integer(0)
            } else {
                tree.iter()
                    .map(|&e| g.cost_or_unit(e))
                    .sum::<crate::numeric::Cost>()
                    .to_q()
                    / total
            }
        })
    };
    if g.edge_count() == 0 {
        return Ok(ThinTreeResult {
            tree_edges: Vec::new(),
            far_set: Vec::new(),
            genus,
            alpha,
            dual_girth: 0,
            thinness_bound: Q::from_integer(0),
            certificate_distance: 1,
            measured_distance: None,
            cost_ratio: cost_ratio(&[]),
        });
    }

    let dual = geometric_dual(g);
    let girth = dual.girth()?;
    let far_set = select_far_edge_set(&dual, girth, alpha)?;
    let tree_edges = bfs_tree(g, &far_set).ok_or(ThinTreeError::NotSpanning)?;

    let m = (ceil_div(girth as u64, 2 * alpha) as usize).clamp(1, girth);
    let measured = min_pairwise_distance(&dual, &far_set);
    if let Some((d, e, f)) = measured {
        if d + 1 < m {
            return Err(ThinTreeError::CertificateViolated(e, f, d));
        }
    }
    Ok(ThinTreeResult {
        cost_ratio: cost_ratio(&tree_edges),
        tree_edges,
        far_set,
        genus,
        alpha,
        dual_girth: girth,
        thinness_bound: Q::new(2 * alpha as i128, girth as i128),
        certificate_distance: m,
        measured_distance: measured.map(|(d, _, _)| d),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genlab::{cube, octahedron, planar_cycle, torus_grid};

    #[test]
    fn alpha_values() {
        assert_eq!(alpha(0), 5);
        assert_eq!(alpha(1), 6);
        assert_eq!(alpha(2), 7);
        assert_eq!(alpha(3), 8);
        // (2γ+3)² crosses 2^10 between γ = 14 and γ = 15
        assert_eq!(alpha(14), 11);
        assert_eq!(alpha(15), 12);
    }

    fn cycle_graph(n: usize) -> Multigraph {
        Multigraph::with_edges(n, (0..n).map(|i| (i, i, (i + 1) % n)))
    }

    #[test]
    fn a_cycle_is_one_cycle_thread() {
        let threads = find_threads(&cycle_graph(8)).unwrap();
        assert_eq!(threads.len(), 1);
        assert_eq!(threads[0].kind, ThreadKind::Cycle);
        assert_eq!(threads[0].len(), 8);
        assert_eq!(threads[0].vertices[0], 0);
        assert_eq!(threads[0].edges[0], 0);
    }

    #[test]
    fn theta_graph_threads() {
        // branch vertices 0 and 1; paths of lengths 2, 3, 4 between them
        let mut m = Multigraph::new(8);
        let paths: [&[usize]; 3] = [&[0, 2, 1], &[0, 3, 4, 1], &[0, 5, 6, 7, 1]];
        let mut id = 0;
        for p in paths {
            for w in p.windows(2) {
                m.add_edge(id, w[0], w[1]);
                id += 1;
            }
        }
        let mut lens: Vec<usize> = find_threads(&m).unwrap().iter().map(|t| t.len()).collect();
        lens.sort();
        assert_eq!(lens, vec![2, 3, 4]);
        assert!(find_threads(&m)
            .unwrap()
            .iter()
            .all(|t| t.kind == ThreadKind::Path));
    }

    #[test]
    fn octahedron_threads_are_single_edges() {
        let threads = find_threads(&geometric_dual(&cube()).to_multigraph()).unwrap();
        assert_eq!(threads.len(), 12);
        assert!(threads.iter().all(|t| t.len() == 1));
    }

    #[test]
    fn degree_one_is_rejected() {
        let m = Multigraph::with_edges(3, [(0, 0, 1), (1, 1, 2)]);
        assert_eq!(find_threads(&m), Err(ThinTreeError::DegreeOneVertex(0)));
    }

    #[test]
    fn middle_edge_positions() {
        // path 4-3-2-1-0 with edges 10..13 plus a parallel pair closing it up;
        // the long thread is read from vertex 0
        let mut m = Multigraph::with_edges(5, (0..4).map(|i| (10 + i, 4 - i, 3 - i)));
        m.add_edge(20, 0, 4);
        m.add_edge(21, 0, 4);
        let t = find_threads(&m)
            .unwrap()
            .into_iter()
            .find(|t| t.len() == 4)
            .unwrap();
        assert_eq!(t.vertices, vec![0, 1, 2, 3, 4]);
        assert_eq!(t.edges, vec![13, 12, 11, 10]);
        assert_eq!(t.middle_edge(), 12);
    }

    #[test]
    fn nine_fold_bond_selects_the_middle_of_the_nine_cycle() {
        let (g, _) = planar_cycle(2).amplify(|e| if e == 0 { 5 } else { 4 });
        let dual = geometric_dual(&g);
        assert_eq!(dual.girth().unwrap(), 9);
        let f = select_far_edge_set(&dual, 9, 5).unwrap();
        assert_eq!(f.len(), 1);
        let r = thin_spanning_tree(&g).unwrap();
        assert_eq!(r.tree_edges.len(), 1);
        assert_eq!(r.certificate_distance, 1);
    }

    #[test]
    fn dual_girth_one_keeps_one_edge_per_cycle() {
        // path graph: every dual edge is a loop at the single face
        let g = EmbeddedGraph::from_canonical(
            3,
            &[(0, 1), (1, 2)],
            &[vec![0], vec![1, 2], vec![3]],
            None,
        )
        .unwrap();
        let r = thin_spanning_tree(&g).unwrap();
        assert_eq!(r.dual_girth, 1);
        assert_eq!(r.far_set, vec![0, 1]);
        assert_eq!(r.tree_edges, vec![0, 1]);
        assert_eq!(r.certificate_distance, 1);
    }

    #[test]
    fn amplified_cube_meets_its_bound() {
        let (g, _) = cube().amplify(|_| 12);
        let r = thin_spanning_tree(&g).unwrap();
        assert_eq!(r.dual_girth, 36);
        assert_eq!(r.thinness_bound, Q::new(10, 36));
        assert_eq!(r.certificate_distance, 4);
        let oracle = crate::oracle::brute_force_thinness(&g, &r.tree_edges).unwrap();
        assert!(oracle.max_ratio <= r.thinness_bound);
        let far = crate::oracle::brute_force_thinness(&g, &r.far_set).unwrap();
        assert!(far.max_ratio <= r.certified_thinness());
    }

    #[test]
    fn torus_and_octahedron_trees_span() {
        for g in [torus_grid(3, 4).amplify(|_| 3).0, octahedron()] {
            let r = thin_spanning_tree(&g).unwrap();
            assert_eq!(r.tree_edges.len(), g.vertex_count() - 1);
        }
    }

    #[test]
    fn disconnected_input_is_refused() {
        let g = EmbeddedGraph::from_canonical(2, &[], &[vec![], vec![]], None).unwrap();
        assert_eq!(thin_spanning_tree(&g), Err(ThinTreeError::Disconnected(2)));
    }
}
