//! Combinatorial embeddings of multigraphs on orientable surfaces.
//!
//! An embedding is stored as a rotation system over darts (half-edges).
//! Edge `e` owns darts `2e` and `2e + 1`; the twin of a dart is `d ^ 1`.
//! `rotation_next(d)` is the counterclockwise successor of `d` around its
//! vertex, and faces are the cycles of `φ = rotation_next ∘ twin`.
//!
//! Edge ids are stable: deleting an edge leaves a dead slot so that the
//! primal/dual correspondence survives any number of deletions.

mod cut;
mod dual;
mod format;

pub use cut::{cut_edges, cut_to_dual_cycles, Cut};
pub use dual::{edge_distance, geometric_dual, DualEdge, DualGraph};
pub use format::{parse_emb, write_emb};

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::numeric::Cost;

pub type VertexId = usize;
pub type EdgeId = usize;
pub type Dart = usize;

const NONE: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbedError {
    #[error("malformed rotation: {0}")]
    MalformedRotation(String),
    #[error("bad twin pairing: {0}")]
    BadTwin(String),
    #[error("edge id {0} declared twice")]
    DuplicateEdge(EdgeId),
    #[error("either every edge carries a cost or none does")]
    MixedCosts,
    #[error("Euler defect is odd (V-E+F = {euler}, components = {components}); rotation data is corrupt")]
    OddEulerDefect { euler: i64, components: usize },
    #[error("Euler characteristic {euler} exceeds 2 per component ({components}); rotation data is corrupt")]
    NegativeGenus { euler: i64, components: usize },
    #[error("dual graph has no cycle")]
    NoCycle,
    #[error("edge {0} is not present")]
    EdgeAbsent(EdgeId),
    #[error("dual vertex {face} meets the cut an odd number of times")]
    ParityViolation { face: usize },
    #[error("invalid cut: {0}")]
    InvalidCut(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// One edge of an [`EmbeddingInput`]: its id and the labels of its two darts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeInput {
    pub id: EdgeId,
    pub darts: (usize, usize),
    pub cost: Option<Cost>,
}

/// Unvalidated embedding data: per-vertex counterclockwise dart lists plus
/// the twin pairing. Dart labels are arbitrary; they are renumbered to the
/// canonical `2e`/`2e+1` scheme on construction.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EmbeddingInput {
    pub vertex_count: usize,
    pub rotations: Vec<Vec<usize>>,
    pub edges: Vec<EdgeInput>,
}

/// A multigraph together with a rotation system (a cellular embedding on an
/// orientable surface), with optional exact edge costs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddedGraph {
    vertex_count: usize,
    dart_owner: Vec<VertexId>,
    rot_next: Vec<Dart>,
    rot_prev: Vec<Dart>,
    alive: Vec<bool>,
    first_dart: Vec<Dart>,
    costs: Option<Vec<Cost>>,
}

/// The faces of an embedding: dart walks of `φ`, plus one empty face per
/// isolated vertex (an isolated vertex on a sphere bounds one face).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceSet {
    pub walks: Vec<Vec<Dart>>,
    /// Face index of every dart; `usize::MAX` for darts of deleted edges.
    pub face_of_dart: Vec<usize>,
    /// `(face index, vertex)` for faces that come from isolated vertices.
    pub isolated: Vec<(usize, VertexId)>,
}

impl FaceSet {
    pub fn len(&self) -> usize {
        self.walks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walks.is_empty()
    }
}

/// Validates rotation and twin data and builds an [`EmbeddedGraph`].
pub fn build_embedding(input: &EmbeddingInput) -> Result<EmbeddedGraph, EmbedError> {
    if input.rotations.len() != input.vertex_count {
        return Err(EmbedError::MalformedRotation(format!(
            "{} rotations for {} vertices",
            input.rotations.len(),
            input.vertex_count
        )));
    }
    // label -> owning vertex
    let mut owner_of_label: BTreeMap<usize, VertexId> = BTreeMap::new();
    for (v, rot) in input.rotations.iter().enumerate() {
        for &label in rot {
            if owner_of_label.insert(label, v).is_some() {
                return Err(EmbedError::MalformedRotation(format!(
                    "dart {label} listed twice"
                )));
            }
        }
    }

    let slots = input.edges.iter().map(|e| e.id + 1).max().unwrap_or(0);
    let mut alive = vec![false; slots];
    let mut canonical: BTreeMap<usize, Dart> = BTreeMap::new();
    let with_cost = input.edges.iter().filter(|e| e.cost.is_some()).count();
    if with_cost != 0 && with_cost != input.edges.len() {
        return Err(EmbedError::MixedCosts);
    }
    let mut costs = (with_cost > 0).then(|| vec![Cost::ZERO; slots]);
    for edge in &input.edges {
        if alive[edge.id] {
            return Err(EmbedError::DuplicateEdge(edge.id));
        }
        alive[edge.id] = true;
        let (a, b) = edge.darts;
        if a == b {
            return Err(EmbedError::BadTwin(format!(
                "edge {} pairs dart {a} with itself",
                edge.id
            )));
        }
        for (label, dart) in [(a, 2 * edge.id), (b, 2 * edge.id + 1)] {
            if canonical.insert(label, dart).is_some() {
                return Err(EmbedError::BadTwin(format!(
                    "dart {label} belongs to two edges"
                )));
            }
            if !owner_of_label.contains_key(&label) {
                return Err(EmbedError::MalformedRotation(format!(
                    "dart {label} of edge {} is missing from every rotation",
                    edge.id
                )));
            }
        }
        if let (Some(costs), Some(c)) = (costs.as_mut(), edge.cost) {
            costs[edge.id] = c;
        }
    }
    if let Some((&label, _)) = owner_of_label
        .iter()
        .find(|(l, _)| !canonical.contains_key(l))
    {
        return Err(EmbedError::BadTwin(format!("dart {label} has no twin")));
    }

    let darts = 2 * slots;
    let mut g = EmbeddedGraph {
        vertex_count: input.vertex_count,
        dart_owner: vec![NONE; darts],
        rot_next: vec![NONE; darts],
        rot_prev: vec![NONE; darts],
        alive,
        first_dart: vec![NONE; input.vertex_count],
        costs,
    };
    for (v, rot) in input.rotations.iter().enumerate() {
        let ds: Vec<Dart> = rot.iter().map(|l| canonical[l]).collect();
        g.set_rotation(v, &ds);
    }
    Ok(g)
}

impl EmbeddedGraph {
    /// Builds an embedding from canonical data: `endpoints[e] = (u, v)` puts
    /// dart `2e` at `u` and `2e+1` at `v`; `rotations[v]` lists canonical
    /// darts counterclockwise. Intended for generators that construct
    /// rotations programmatically.
    pub fn from_canonical(
        vertex_count: usize,
        endpoints: &[(VertexId, VertexId)],
        rotations: &[Vec<Dart>],
        costs: Option<Vec<Cost>>,
    ) -> Result<Self, EmbedError> {
        let input = EmbeddingInput {
            vertex_count,
            rotations: rotations.to_vec(),
            edges: endpoints
                .iter()
                .enumerate()
                .map(|(e, _)| EdgeInput {
                    id: e,
                    darts: (2 * e, 2 * e + 1),
                    cost: costs.as_ref().map(|c| c[e]),
                })
                .collect(),
        };
        let g = build_embedding(&input)?;
        for (e, &(u, v)) in endpoints.iter().enumerate() {
            if g.dart_owner[2 * e] != u || g.dart_owner[2 * e + 1] != v {
                return Err(EmbedError::MalformedRotation(format!(
                    "edge {e} darts are not at its declared endpoints ({u}, {v})"
                )));
            }
        }
        Ok(g)
    }

    fn set_rotation(&mut self, v: VertexId, darts: &[Dart]) {
        let n = darts.len();
        for (i, &d) in darts.iter().enumerate() {
            self.dart_owner[d] = v;
            self.rot_next[d] = darts[(i + 1) % n];
            self.rot_prev[d] = darts[(i + n - 1) % n];
        }
        self.first_dart[v] = darts.first().copied().unwrap_or(NONE);
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Number of live edges.
    pub fn edge_count(&self) -> usize {
        self.alive.iter().filter(|&&a| a).count()
    }

    /// Size of the edge-id space (live and deleted slots).
    pub fn edge_slots(&self) -> usize {
        self.alive.len()
    }

    pub fn has_edge(&self, e: EdgeId) -> bool {
        self.alive.get(e).copied().unwrap_or(false)
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.alive
            .iter()
            .enumerate()
            .filter(|(_, &a)| a)
            .map(|(e, _)| e)
    }

    /// Live darts in increasing id order.
    pub fn darts(&self) -> impl Iterator<Item = Dart> + '_ {
        self.edge_ids().flat_map(|e| [2 * e, 2 * e + 1])
    }

    pub fn endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        (self.dart_owner[2 * e], self.dart_owner[2 * e + 1])
    }

    pub fn is_loop(&self, e: EdgeId) -> bool {
        let (u, v) = self.endpoints(e);
        u == v
    }

    pub fn twin(d: Dart) -> Dart {
        d ^ 1
    }

    pub fn edge_of(d: Dart) -> EdgeId {
        d >> 1
    }

    pub fn owner(&self, d: Dart) -> VertexId {
        self.dart_owner[d]
    }

    pub fn rotation_next(&self, d: Dart) -> Dart {
        self.rot_next[d]
    }

    pub fn rotation_prev(&self, d: Dart) -> Dart {
        self.rot_prev[d]
    }

    /// `φ(d) = rotation_next(twin(d))`.
    pub fn face_next(&self, d: Dart) -> Dart {
        self.rot_next[d ^ 1]
    }

    /// Darts at `v` in counterclockwise order, starting from the smallest.
    pub fn rotation(&self, v: VertexId) -> Vec<Dart> {
        let start = self.first_dart[v];
        if start == NONE {
            return Vec::new();
        }
        let mut out = vec![start];
        let mut d = self.rot_next[start];
        while d != start {
            out.push(d);
            d = self.rot_next[d];
        }
        let min_pos = out
            .iter()
            .enumerate()
            .min_by_key(|(_, &d)| d)
            .map(|(i, _)| i)
            .unwrap_or(0);
        out.rotate_left(min_pos);
        out
    }

    pub fn degree(&self, v: VertexId) -> usize {
        let start = self.first_dart[v];
        if start == NONE {
            return 0;
        }
        let mut n = 1;
        let mut d = self.rot_next[start];
        while d != start {
            n += 1;
            d = self.rot_next[d];
        }
        n
    }

    pub fn has_costs(&self) -> bool {
        self.costs.is_some()
    }

    pub fn cost(&self, e: EdgeId) -> Option<Cost> {
        self.costs.as_ref().map(|c| c[e])
    }

    /// Cost of `e`, treating an uncosted graph as unit-cost.
    pub fn cost_or_unit(&self, e: EdgeId) -> Cost {
        self.cost(e).unwrap_or_else(|| Cost::from_units(1))
    }

    pub fn total_cost(&self) -> Cost {
        self.edge_ids().map(|e| self.cost_or_unit(e)).sum()
    }

    /// Traces the faces (cycles of `φ`) in a deterministic order: each face
    /// is started from the smallest unvisited dart, and isolated vertices
    /// contribute trailing empty faces in vertex order.
    pub fn faces(&self) -> FaceSet {
        let mut face_of_dart = vec![NONE; self.rot_next.len()];
        let mut walks = Vec::new();
        for start in self.darts() {
            if face_of_dart[start] != NONE {
                continue;
            }
            let id = walks.len();
            let mut walk = Vec::new();
            let mut d = start;
            loop {
                face_of_dart[d] = id;
                walk.push(d);
                d = self.face_next(d);
                if d == start {
                    break;
                }
            }
            walks.push(walk);
        }
        let mut isolated = Vec::new();
        for v in 0..self.vertex_count {
            if self.first_dart[v] == NONE {
                isolated.push((walks.len(), v));
                walks.push(Vec::new());
            }
        }
        FaceSet {
            walks,
            face_of_dart,
            isolated,
        }
    }

    pub fn face_count(&self) -> usize {
        self.faces().len()
    }

    /// Connected component label of every vertex, labels assigned in order
    /// of smallest member vertex.
    pub fn component_labels(&self) -> (usize, Vec<usize>) {
        let mut label = vec![NONE; self.vertex_count];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..self.vertex_count {
            if label[s] != NONE {
                continue;
            }
            label[s] = count;
            stack.push(s);
            while let Some(v) = stack.pop() {
                for d in self.rotation(v) {
                    let w = self.dart_owner[d ^ 1];
                    if label[w] == NONE {
                        label[w] = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        (count, label)
    }

    pub fn component_count(&self) -> usize {
        self.component_labels().0
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// `V - E + F`.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count as i64 - self.edge_count() as i64 + self.face_count() as i64
    }

    /// Total orientable genus `κ - (V - E + F)/2` over all components.
    pub fn genus(&self) -> Result<usize, EmbedError> {
        let euler = self.euler_characteristic();
        let components = self.component_count();
        let defect = 2 * components as i64 - euler;
        if defect.rem_euclid(2) != 0 {
            return Err(EmbedError::OddEulerDefect { euler, components });
        }
        if defect < 0 {
            return Err(EmbedError::NegativeGenus { euler, components });
        }
        Ok((defect / 2) as usize)
    }

    /// Removes edge `e`, splicing both darts out of their rotations.
    pub fn delete_edge(&mut self, e: EdgeId) -> Result<(), EmbedError> {
        if !self.has_edge(e) {
            return Err(EmbedError::EdgeAbsent(e));
        }
        for d in [2 * e, 2 * e + 1] {
            let v = self.dart_owner[d];
            let (p, n) = (self.rot_prev[d], self.rot_next[d]);
            if n == d {
                self.first_dart[v] = NONE;
            } else {
                self.rot_next[p] = n;
                self.rot_prev[n] = p;
                if self.first_dart[v] == d {
                    self.first_dart[v] = n;
                }
            }
            self.rot_next[d] = NONE;
            self.rot_prev[d] = NONE;
            self.dart_owner[d] = NONE;
        }
        self.alive[e] = false;
        Ok(())
    }

    pub fn without_edges<I: IntoIterator<Item = EdgeId>>(
        &self,
        edges: I,
    ) -> Result<Self, EmbedError> {
        let mut g = self.clone();
        for e in edges {
            g.delete_edge(e)?;
        }
        Ok(g)
    }

    /// The sub-embedding induced by `vertices` (one or more whole
    /// components), with vertices renumbered in the given order and edge ids
    /// preserved.
    pub fn restrict_to(&self, vertices: &[VertexId]) -> Result<Self, EmbedError> {
        let mut local = vec![NONE; self.vertex_count];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut g = EmbeddedGraph {
            vertex_count: vertices.len(),
            dart_owner: vec![NONE; self.dart_owner.len()],
            rot_next: vec![NONE; self.rot_next.len()],
            rot_prev: vec![NONE; self.rot_prev.len()],
            alive: vec![false; self.alive.len()],
            first_dart: vec![NONE; vertices.len()],
            costs: self.costs.clone(),
        };
        for e in self.edge_ids() {
            let (u, v) = self.endpoints(e);
            match (local[u] != NONE, local[v] != NONE) {
                (true, true) => g.alive[e] = true,
                (false, false) => {}
                _ => {
                    return Err(EmbedError::InvalidCut(format!(
                        "edge {e} leaves the restricted vertex set"
                    )))
                }
            }
        }
        for (i, &v) in vertices.iter().enumerate() {
            g.set_rotation(i, &self.rotation(v));
        }
        Ok(g)
    }

    /// Replaces every edge `e` by `multiplicity(e)` parallel copies laid out
    /// consecutively in both rotations (reversed at the second endpoint), so
    /// consecutive copies bound a bigon face. Edges with multiplicity zero are
    /// dropped. Returns the new graph and, for each new edge id, the source
    /// edge it copies. New ids are assigned in source-edge order.
    pub fn amplify<F: Fn(EdgeId) -> usize>(&self, multiplicity: F) -> (Self, Vec<EdgeId>) {
        let mut origin = Vec::new();
        let mut copies: BTreeMap<EdgeId, Vec<EdgeId>> = BTreeMap::new();
        for e in self.edge_ids() {
            let m = multiplicity(e);
            let ids: Vec<EdgeId> = (origin.len()..origin.len() + m).collect();
            origin.extend(std::iter::repeat_n(e, m));
            copies.insert(e, ids);
        }
        let mut rotations = vec![Vec::new(); self.vertex_count];
        for (v, rot) in rotations.iter_mut().enumerate() {
            for d in self.rotation(v) {
                let ids = &copies[&(d >> 1)];
                if d & 1 == 0 {
                    rot.extend(ids.iter().map(|&c| 2 * c));
                } else {
                    rot.extend(ids.iter().rev().map(|&c| 2 * c + 1));
                }
            }
        }
        let endpoints: Vec<(VertexId, VertexId)> =
            origin.iter().map(|&e| self.endpoints(e)).collect();
        let costs = self
            .costs
            .as_ref()
            .map(|c| origin.iter().map(|&e| c[e]).collect::<Vec<_>>());
        let g = EmbeddedGraph::from_canonical(self.vertex_count, &endpoints, &rotations, costs)
            .expect("amplified rotation system is valid by construction");
        (g, origin)
    }

    /// Re-labels the live edges densely as `0..E` (in id order), returning
    /// the compacted graph and the old id of each new edge.
    pub fn compact(&self) -> (Self, Vec<EdgeId>) {
        let old: Vec<EdgeId> = self.edge_ids().collect();
        let mut new_of = vec![NONE; self.alive.len()];
        for (i, &e) in old.iter().enumerate() {
            new_of[e] = i;
        }
        let rotations: Vec<Vec<Dart>> = (0..self.vertex_count)
            .map(|v| {
                self.rotation(v)
                    .into_iter()
                    .map(|d| 2 * new_of[d >> 1] + (d & 1))
                    .collect()
            })
            .collect();
        let endpoints: Vec<_> = old.iter().map(|&e| self.endpoints(e)).collect();
        let costs = self
            .costs
            .as_ref()
            .map(|c| old.iter().map(|&e| c[e]).collect());
        let g = EmbeddedGraph::from_canonical(self.vertex_count, &endpoints, &rotations, costs)
            .expect("compaction preserves validity");
        (g, old)
    }

    /// Replaces the cost map (one entry per edge slot).
    pub fn with_costs(mut self, costs: Option<Vec<Cost>>) -> Self {
        if let Some(c) = &costs {
            assert_eq!(c.len(), self.alive.len(), "one cost per edge slot");
        }
        self.costs = costs;
        self
    }

    /// Multiset of undirected endpoint pairs `(min, max)` → multiplicity.
    pub fn pair_multiplicities(&self) -> BTreeMap<(VertexId, VertexId), usize> {
        let mut m = BTreeMap::new();
        for e in self.edge_ids() {
            let (u, v) = self.endpoints(e);
            *m.entry((u.min(v), u.max(v))).or_insert(0) += 1;
        }
        m
    }

    /// Vertex sets of the connected components, each sorted.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let (count, label) = self.component_labels();
        let mut out = vec![Vec::new(); count];
        for (v, &l) in label.iter().enumerate() {
            out[l].push(v);
        }
        out
    }

    /// Checks every structural invariant; used by tests and after surgery.
    pub fn validate(&self) -> Result<(), EmbedError> {
        let mut seen = BTreeSet::new();
        for v in 0..self.vertex_count {
            for d in self.rotation(v) {
                if self.dart_owner[d] != v || !self.has_edge(d >> 1) || !seen.insert(d) {
                    return Err(EmbedError::MalformedRotation(format!(
                        "dart {d} at vertex {v}"
                    )));
                }
                if self.rot_prev[self.rot_next[d]] != d {
                    return Err(EmbedError::MalformedRotation(format!(
                        "broken links at dart {d}"
                    )));
                }
            }
        }
        if seen.len() != 2 * self.edge_count() {
            return Err(EmbedError::MalformedRotation(
                "live dart missing from rotations".into(),
            ));
        }
        self.genus().map(|_| ())
    }
}
