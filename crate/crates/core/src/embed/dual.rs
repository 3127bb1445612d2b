use crate::multigraph::{Cycle, Multigraph};

use super::{EdgeId, EmbedError, EmbeddedGraph, FaceSet};

const NONE: usize = usize::MAX;

/// The dual edge `e*`: it joins the face on the side of dart `2e` (`left`)
/// and the face on the side of dart `2e+1` (`right`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DualEdge {
    pub edge: EdgeId,
    pub left: usize,
    pub right: usize,
}

/// Geometric dual: one vertex per face, one edge `e*` per primal edge `e`,
/// sharing the primal edge id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualGraph {
    faces: FaceSet,
    edges: Vec<DualEdge>,
    index_of: Vec<usize>,
}

pub fn geometric_dual(g: &EmbeddedGraph) -> DualGraph {
    let faces = g.faces();
    let mut index_of = vec![NONE; g.edge_slots()];
    let edges: Vec<DualEdge> = g
        .edge_ids()
        .enumerate()
        .map(|(i, e)| {
            index_of[e] = i;
            DualEdge {
                edge: e,
                left: faces.face_of_dart[2 * e],
                right: faces.face_of_dart[2 * e + 1],
            }
        })
        .collect();
    DualGraph {
        faces,
        edges,
        index_of,
    }
}

impl DualGraph {
    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn faces(&self) -> &FaceSet {
        &self.faces
    }

    /// Dual edges in increasing primal edge id.
    pub fn edges(&self) -> &[DualEdge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> Option<&DualEdge> {
        match self.index_of.get(e) {
            Some(&i) if i != NONE => Some(&self.edges[i]),
            _ => None,
        }
    }

    /// Degree of a dual vertex: the length of its face walk.
    pub fn degree(&self, face: usize) -> usize {
        self.faces.walks[face].len()
    }

    pub fn to_multigraph(&self) -> Multigraph {
        Multigraph::with_edges(
            self.face_count(),
            self.edges.iter().map(|d| (d.edge, d.left, d.right)),
        )
    }

    /// Dual girth `g*`: length of the shortest dual cycle (loops count 1,
    /// parallel pairs count 2).
    pub fn girth(&self) -> Result<usize, EmbedError> {
        self.to_multigraph().girth().ok_or(EmbedError::NoCycle)
    }

    pub fn shortest_cycle(&self) -> Option<Cycle> {
        self.to_multigraph().shortest_cycle()
    }
}

/// Distance between two dual edges: the fewest dual edges on a path from an
/// endpoint of one to an endpoint of the other (0 when they touch).
pub fn edge_distance(d: &DualGraph, e: EdgeId, f: EdgeId) -> Result<usize, EmbedError> {
    let de = d.edge(e).ok_or(EmbedError::EdgeAbsent(e))?;
    let df = d.edge(f).ok_or(EmbedError::EdgeAbsent(f))?;
    let dist = d.to_multigraph().bfs(&[de.left, de.right]);
    Ok(dist[df.left].min(dist[df.right]))
}
