use crate::multigraph::{Cycle, Multigraph};

use super::{DualGraph, EdgeId, EmbedError, EmbeddedGraph, VertexId};

/// A vertex cut `(U, V∖U)` with `U` nonempty and proper.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    side: Vec<bool>,
}

impl Cut {
    pub fn new(vertex_count: usize, members: &[VertexId]) -> Result<Self, EmbedError> {
        let mut side = vec![false; vertex_count];
        for &v in members {
            if v >= vertex_count {
                return Err(EmbedError::InvalidCut(format!("vertex {v} out of range")));
            }
            side[v] = true;
        }
        Cut::from_side(side)
    }

    pub fn from_side(side: Vec<bool>) -> Result<Self, EmbedError> {
        let size = side.iter().filter(|&&s| s).count();
        if size == 0 || size == side.len() {
            return Err(EmbedError::InvalidCut(format!(
                "side has {size} of {} vertices",
                side.len()
            )));
        }
        Ok(Cut { side })
    }

    /// Cut from a bitmask over the vertices (bit `v` set means `v ∈ U`).
    pub fn from_mask(vertex_count: usize, mask: u64) -> Result<Self, EmbedError> {
        Cut::from_side((0..vertex_count).map(|v| mask >> v & 1 == 1).collect())
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.side[v]
    }

    pub fn vertex_count(&self) -> usize {
        self.side.len()
    }

    pub fn members(&self) -> Vec<VertexId> {
        (0..self.side.len()).filter(|&v| self.side[v]).collect()
    }
}

/// Edges with exactly one endpoint in `U`, in id order.
pub fn cut_edges(g: &EmbeddedGraph, cut: &Cut) -> Vec<EdgeId> {
    g.edge_ids()
        .filter(|&e| {
            let (u, v) = g.endpoints(e);
            cut.contains(u) != cut.contains(v)
        })
        .collect()
}

/// Splits the dual edge set `S*` of a cut into edge-disjoint simple cycles.
///
/// Every face meets a cut an even number of times, so `S*` is an even
/// subgraph of the dual and peels apart into cycles. A face with odd
/// incidence means the embedding data is inconsistent.
pub fn cut_to_dual_cycles(
    g: &EmbeddedGraph,
    dual: &DualGraph,
    cut: &Cut,
) -> Result<Vec<Cycle>, EmbedError> {
    if cut.vertex_count() != g.vertex_count() {
        return Err(EmbedError::InvalidCut(
            "cut and graph disagree on vertex count".into(),
        ));
    }
    let mut star = Multigraph::new(dual.face_count());
    for e in cut_edges(g, cut) {
        let d = dual.edge(e).ok_or(EmbedError::EdgeAbsent(e))?;
        star.add_edge(e, d.left, d.right);
    }
    if let Some(face) = (0..star.vertex_count()).find(|&f| star.degree(f) % 2 == 1) {
        return Err(EmbedError::ParityViolation { face });
    }

    let mut cycles = Vec::new();
    loop {
        let Some(first) = star.edge_ids().next() else {
            break;
        };
        let (start, _) = star.ends(first).unwrap();
        // walk from `start`, peeling a cycle off whenever a vertex repeats
        let mut path_vertices = vec![start];
        let mut path_edges: Vec<EdgeId> = Vec::new();
        loop {
            let cur = *path_vertices.last().unwrap();
            let Some(&(e, w)) = star.neighbors(cur).first() else {
                break;
            };
            star.remove_edge(e);
            path_edges.push(e);
            if let Some(pos) = path_vertices.iter().position(|&v| v == w) {
                let vertices = path_vertices.split_off(pos);
                let edges = path_edges.split_off(pos);
                cycles.push(Cycle { vertices, edges });
                path_vertices.push(w);
            } else {
                path_vertices.push(w);
            }
            if path_edges.is_empty() && star.degree(start) == 0 {
                break;
            }
        }
    }
    Ok(cycles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::geometric_dual;
    use crate::genlab::{cube, torus_grid};

    fn check_decomposition(g: &EmbeddedGraph, cut: &Cut) -> Vec<Cycle> {
        let d = geometric_dual(g);
        let cycles = cut_to_dual_cycles(g, &d, cut).unwrap();
        let mut all: Vec<EdgeId> = cycles.iter().flat_map(|c| c.edges.clone()).collect();
        all.sort();
        assert_eq!(all, cut_edges(g, cut));
        for c in &cycles {
            for (i, &e) in c.edges.iter().enumerate() {
                let de = d.edge(e).unwrap();
                let (x, y) = (c.vertices[i], c.vertices[(i + 1) % c.len()]);
                assert!((de.left, de.right) == (x, y) || (de.left, de.right) == (y, x));
            }
        }
        cycles
    }

    #[test]
    fn single_vertex_cut_in_cube_is_a_triangle() {
        let g = cube();
        let cycles = check_decomposition(&g, &Cut::new(8, &[0]).unwrap());
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].len(), 3);
    }

    #[test]
    fn row_band_on_the_torus_gives_two_dual_cycles() {
        // U = one row of the 3x3 torus grid; its boundary is two parallel
        // non-contractible curves, each a dual 3-cycle
        let g = torus_grid(3, 3);
        let cycles = check_decomposition(&g, &Cut::new(9, &[0, 1, 2]).unwrap());
        assert_eq!(cycles.len(), 2);
        assert!(cycles.iter().all(|c| c.len() == 3));
        for c in &cycles {
            let h = g.without_edges(c.edges.iter().copied()).unwrap();
            assert_eq!(
                h.component_count(),
                1,
                "each boundary cycle alone is non-separating"
            );
            assert_eq!(h.genus().unwrap(), 0);
        }
    }

    #[test]
    fn bridge_dual_is_a_one_edge_cycle() {
        let g =
            EmbeddedGraph::from_canonical(2, &[(0, 0), (0, 1)], &[vec![0, 1, 2], vec![3]], None)
                .unwrap();
        let d = geometric_dual(&g);
        let cycles = cut_to_dual_cycles(&g, &d, &Cut::new(2, &[1]).unwrap()).unwrap();
        // only the bridge crosses; its dual is a loop
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].edges, vec![1]);
    }

    #[test]
    fn loops_never_cross_a_cut() {
        // two vertices, each carrying a loop, no edge between them
        let g =
            EmbeddedGraph::from_canonical(2, &[(0, 0), (1, 1)], &[vec![0, 1], vec![2, 3]], None)
                .unwrap();
        let d = geometric_dual(&g);
        let cycles = cut_to_dual_cycles(&g, &d, &Cut::new(2, &[0]).unwrap()).unwrap();
        assert!(cycles.is_empty());
    }

    #[test]
    fn improper_cuts_are_rejected() {
        assert!(Cut::new(3, &[]).is_err());
        assert!(Cut::new(3, &[0, 1, 2]).is_err());
        assert!(Cut::new(3, &[5]).is_err());
    }

    #[test]
    fn every_cut_of_the_cube_decomposes() {
        let g = cube();
        for mask in 1..(1u64 << 7) {
            let cut = Cut::from_mask(8, mask).unwrap();
            check_decomposition(&g, &cut);
        }
    }
}
