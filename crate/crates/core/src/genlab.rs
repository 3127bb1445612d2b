//! Deterministic instance generators with known embeddings.
//!
//! Randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with a
//! `u64`, so a spec and seed always reproduce the same bytes.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::atsp::{solve_held_karp, AtspError, AtspInstance, HkOptions};
use crate::embed::{EdgeId, EmbedError, EmbeddedGraph, VertexId};
use crate::flow::edge_connectivity;
use crate::numeric::Cost;

#[derive(Debug, Error)]
pub enum GenError {
    #[error("bad generator parameters: {0}")]
    BadParams(String),
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error(transparent)]
    Atsp(#[from] AtspError),
    #[error("no instance with a supported LP solution after {0} attempts")]
    Exhausted(usize),
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Embeds a simple graph from counterclockwise neighbor lists. Edge ids are
/// assigned in order of `(min endpoint, position in its rotation)`, and
/// dart `2e` sits at the smaller endpoint.
pub fn embed_simple(rotations: &[Vec<VertexId>]) -> EmbeddedGraph {
    let n = rotations.len();
    let mut ids: BTreeMap<(VertexId, VertexId), EdgeId> = BTreeMap::new();
    let mut endpoints = Vec::new();
    for (u, rot) in rotations.iter().enumerate() {
        for &v in rot {
            assert_ne!(u, v, "embed_simple takes loop-free graphs");
            if u < v {
                assert!(
                    !ids.contains_key(&(u, v)),
                    "embed_simple takes simple graphs"
                );
                ids.insert((u, v), endpoints.len());
                endpoints.push((u, v));
            }
        }
    }
    let darts: Vec<Vec<usize>> = rotations
        .iter()
        .enumerate()
        .map(|(u, rot)| {
            rot.iter()
                .map(|&v| {
                    let e = ids[&(u.min(v), u.max(v))];
                    if u < v {
                        2 * e
                    } else {
                        2 * e + 1
                    }
                })
                .collect()
        })
        .collect();
    EmbeddedGraph::from_canonical(n, &endpoints, &darts, None)
        .expect("generator rotation is consistent")
}

/// Straight-line embedding from integer coordinates: each rotation is the
/// neighbors sorted counterclockwise by exact angle.
pub fn embed_straight_line(coords: &[(i64, i64)], edges: &[(VertexId, VertexId)]) -> EmbeddedGraph {
    let mut nbrs = vec![Vec::new(); coords.len()];
    for &(u, v) in edges {
        nbrs[u].push(v);
        nbrs[v].push(u);
    }
    for (u, list) in nbrs.iter_mut().enumerate() {
        let (cx, cy) = coords[u];
        list.sort_by(|&a, &b| {
            let (ax, ay) = (coords[a].0 - cx, coords[a].1 - cy);
            let (bx, by) = (coords[b].0 - cx, coords[b].1 - cy);
            let half = |x: i64, y: i64| if y > 0 || (y == 0 && x > 0) { 0 } else { 1 };
            half(ax, ay)
                .cmp(&half(bx, by))
                .then_with(|| (bx * ay).cmp(&(ax * by)))
        });
    }
    embed_simple(&nbrs)
}

pub fn k4() -> EmbeddedGraph {
    embed_straight_line(
        &[(0, 0), (6, 0), (3, 6), (3, 2)],
        &[(0, 1), (1, 2), (2, 0), (0, 3), (1, 3), (2, 3)],
    )
}

pub fn cube() -> EmbeddedGraph {
    embed_straight_line(
        &[
            (0, 0),
            (3, 0),
            (3, 3),
            (0, 3),
            (1, 1),
            (2, 1),
            (2, 2),
            (1, 2),
        ],
        &[
            (0, 1),
            (1, 2),
            (2, 3),
            (3, 0),
            (4, 5),
            (5, 6),
            (6, 7),
            (7, 4),
            (0, 4),
            (1, 5),
            (2, 6),
            (3, 7),
        ],
    )
}

pub fn octahedron() -> EmbeddedGraph {
    embed_straight_line(
        &[(0, 0), (12, 0), (6, 12), (6, 2), (8, 6), (4, 6)],
        &[
            (0, 1),
            (1, 2),
            (2, 0),
            (3, 4),
            (4, 5),
            (5, 3),
            (0, 3),
            (0, 5),
            (1, 3),
            (1, 4),
            (2, 4),
            (2, 5),
        ],
    )
}

/// The cycle `C_n` on the sphere (`n >= 2`; `n = 2` is a parallel pair).
pub fn planar_cycle(n: usize) -> EmbeddedGraph {
    assert!(n >= 2);
    let endpoints: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    let rotations: Vec<Vec<usize>> = (0..n)
        .map(|i| vec![2 * i, 2 * ((i + n - 1) % n) + 1])
        .collect();
    EmbeddedGraph::from_canonical(n, &endpoints, &rotations, None).unwrap()
}

/// `rows × cols` grid with wraparound in both directions, embedded on the
/// torus with every rotation ordered east, north, west, south.
pub fn torus_grid(rows: usize, cols: usize) -> EmbeddedGraph {
    assert!(
        rows >= 3 && cols >= 3,
        "torus grid needs both dimensions >= 3"
    );
    let id = |r: usize, c: usize| r * cols + c;
    let nbrs: Vec<Vec<usize>> = (0..rows * cols)
        .map(|v| {
            let (r, c) = (v / cols, v % cols);
            vec![
                id(r, (c + 1) % cols),
                id((r + 1) % rows, c),
                id(r, (c + cols - 1) % cols),
                id((r + rows - 1) % rows, c),
            ]
        })
        .collect();
    embed_simple(&nbrs)
}

/// [`torus_grid`] with every edge repeated `mult` times, except the
/// vertical edges that wrap from the last row back to row 0, which get
/// `seam_mult` copies. A thin seam leaves a short non-separating dual cycle.
pub fn torus_grid_amplified(
    rows: usize,
    cols: usize,
    mult: usize,
    seam_mult: usize,
) -> EmbeddedGraph {
    let g = torus_grid(rows, cols);
    let seam = |e: EdgeId| {
        let (u, v) = g.endpoints(e);
        let (ru, rv) = (u / cols, v / cols);
        ru != rv && ru.min(rv) == 0 && ru.max(rv) == rows - 1
    };
    g.amplify(|e| if seam(e) { seam_mult } else { mult }).0
}

/// A stacked (Apollonian) triangulation: start from a triangle and insert
/// each new vertex into a uniformly chosen inner face. Maximal planar and
/// 3-connected for `n >= 4`.
pub fn stacked_triangulation(n: usize, seed: u64) -> EmbeddedGraph {
    assert!(n >= 3);
    let mut rng = rng(seed);
    let mut nbrs: Vec<Vec<usize>> = vec![vec![1, 2], vec![2, 0], vec![0, 1]];
    let mut faces: Vec<[usize; 3]> = vec![[0, 1, 2]];
    let insert_after = |list: &mut Vec<usize>, after: usize, w: usize| {
        let pos = list
            .iter()
            .position(|&x| x == after)
            .expect("neighbor present");
        list.insert(pos + 1, w);
    };
    for w in 3..n {
        let fi = rng.gen_range(0..faces.len());
        let [a, b, c] = faces.swap_remove(fi);
        insert_after(&mut nbrs[a], b, w);
        insert_after(&mut nbrs[b], c, w);
        insert_after(&mut nbrs[c], a, w);
        nbrs.push(vec![a, b, c]);
        faces.extend([[a, b, w], [b, c, w], [c, a, w]]);
    }
    embed_simple(&nbrs)
}

/// Named planar bases for the amplified family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlanarBase {
    K4,
    Cube,
    Octahedron,
    Cycle(usize),
    Stacked(usize),
}

impl PlanarBase {
    pub fn build(self, seed: u64) -> EmbeddedGraph {
        match self {
            PlanarBase::K4 => k4(),
            PlanarBase::Cube => cube(),
            PlanarBase::Octahedron => octahedron(),
            PlanarBase::Cycle(n) => planar_cycle(n),
            PlanarBase::Stacked(n) => stacked_triangulation(n, seed),
        }
    }

    pub fn parse(name: &str, n: Option<usize>) -> Result<Self, GenError> {
        let need_n = |min: usize| match n {
            Some(n) if n >= min => Ok(n),
            _ => Err(GenError::BadParams(format!(
                "base `{name}` needs --n >= {min}"
            ))),
        };
        Ok(match name {
            "k4" => PlanarBase::K4,
            "cube" => PlanarBase::Cube,
            "octahedron" => PlanarBase::Octahedron,
            "cycle" => PlanarBase::Cycle(need_n(2)?),
            "stacked" => PlanarBase::Stacked(need_n(3)?),
            other => {
                return Err(GenError::BadParams(format!(
                    "unknown planar base `{other}`"
                )))
            }
        })
    }
}

/// Cost model for generated instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CostModel {
    Unit,
    /// Uniform integers in `lo..=hi`.
    UniformRange(i64, i64),
    /// Uniform in `lo..=hi` one way; the reverse direction is scaled by a
    /// random factor in `1..=skew`.
    AsymmetricSkew {
        lo: i64,
        hi: i64,
        skew: i64,
    },
}

impl CostModel {
    fn draw(&self, rng: &mut ChaCha8Rng) -> Cost {
        match *self {
            CostModel::Unit => Cost::from_units(1),
            CostModel::UniformRange(lo, hi) | CostModel::AsymmetricSkew { lo, hi, .. } => {
                Cost::from_units(rng.gen_range(lo..=hi))
            }
        }
    }

    fn draw_pair(&self, rng: &mut ChaCha8Rng) -> (Cost, Cost) {
        match *self {
            CostModel::AsymmetricSkew { skew, .. } => {
                let c = self.draw(rng);
                let factor = rng.gen_range(1..=skew.max(1));
                if rng.gen_bool(0.5) {
                    (c, c.times(factor))
                } else {
                    (c.times(factor), c)
                }
            }
            _ => (self.draw(rng), self.draw(rng)),
        }
    }
}

/// What to generate. Every family is a pure function of its parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenSpec {
    /// A planar base with every edge replaced by `mult` adjacent copies,
    /// optionally with random edge costs.
    PlanarAmplified {
        base: PlanarBase,
        mult: usize,
        costs: Option<CostModel>,
        seed: u64,
    },
    TorusGrid {
        rows: usize,
        cols: usize,
        mult: usize,
        /// Multiplicity of the wrap-around vertical edges (default `mult`).
        seam_mult: Option<usize>,
        costs: Option<CostModel>,
        seed: u64,
    },
    RandomMetric {
        n: usize,
        costs: CostModel,
        seed: u64,
    },
    /// An ATSP instance whose Held-Karp optimum is supported on a stacked
    /// triangulation, together with that triangulation's embedding.
    LpSupportInstance {
        n: usize,
        costs: CostModel,
        seed: u64,
    },
}

/// Generated artifacts plus the measured invariants of the embedding.
#[derive(Debug, Clone)]
pub struct Generated {
    pub graph: Option<EmbeddedGraph>,
    pub instance: Option<AtspInstance>,
    pub edge_connectivity: Option<u32>,
    pub genus: Option<usize>,
    /// Seed actually used (the lp-support family may skip seeds).
    pub seed: u64,
}

fn with_random_costs(g: EmbeddedGraph, model: CostModel, seed: u64) -> EmbeddedGraph {
    let mut rng = rng(seed ^ 0x9e37_79b9_7f4a_7c15);
    let costs = (0..g.edge_slots()).map(|_| model.draw(&mut rng)).collect();
    g.with_costs(Some(costs))
}

fn measured(graph: EmbeddedGraph, seed: u64) -> Result<Generated, GenError> {
    let genus = graph.genus()?;
    let k = if graph.vertex_count() >= 2 {
        Some(edge_connectivity(&graph))
    } else {
        None
    };
    Ok(Generated {
        graph: Some(graph),
        instance: None,
        edge_connectivity: k,
        genus: Some(genus),
        seed,
    })
}

pub fn generate(spec: &GenSpec) -> Result<Generated, GenError> {
    match *spec {
        GenSpec::PlanarAmplified {
            base,
            mult,
            costs,
            seed,
        } => {
            if mult == 0 {
                return Err(GenError::BadParams("multiplicity must be >= 1".into()));
            }
            let (g, _) = base.build(seed).amplify(|_| mult);
            let g = match costs {
                Some(model) => with_random_costs(g, model, seed),
                None => g,
            };
            measured(g, seed)
        }
        GenSpec::TorusGrid {
            rows,
            cols,
            mult,
            seam_mult,
            costs,
            seed,
        } => {
            let seam_mult = seam_mult.unwrap_or(mult);
            if rows < 3 || cols < 3 || mult == 0 || seam_mult == 0 {
                return Err(GenError::BadParams(
                    "torus grid needs rows, cols >= 3 and multiplicities >= 1".into(),
                ));
            }
            let g = torus_grid_amplified(rows, cols, mult, seam_mult);
            let g = match costs {
                Some(model) => with_random_costs(g, model, seed),
                None => g,
            };
            measured(g, seed)
        }
        GenSpec::RandomMetric { n, costs, seed } => {
            if n < 2 {
                return Err(GenError::BadParams("random metric needs n >= 2".into()));
            }
            Ok(Generated {
                graph: None,
                instance: Some(random_metric(n, costs, seed)),
                edge_connectivity: None,
                genus: None,
                seed,
            })
        }
        GenSpec::LpSupportInstance { n, costs, seed } => lp_support_instance(n, costs, seed),
    }
}

/// Random costs on every ordered pair, closed under shortest paths.
pub fn random_metric(n: usize, model: CostModel, seed: u64) -> AtspInstance {
    let mut rng = rng(seed);
    let mut cost = vec![vec![Cost::ZERO; n]; n];
    #[allow(clippy::needless_range_loop)]
    for i in 0..n {
        for j in (i + 1)..n {
            let (a, b) = model.draw_pair(&mut rng);
            cost[i][j] = a;
            cost[j][i] = b;
        }
    }
    AtspInstance::new(cost)
        .expect("square nonnegative matrix")
        .metric_completion()
}

const LP_SUPPORT_ATTEMPTS: usize = 64;

/// Costs are drawn on the arcs of a stacked triangulation; every other arc
/// gets a prohibitive cost before metric completion. The Held-Karp optimum
/// is computed and the seed is advanced until its support lies inside the
/// triangulation, whose embedding is returned alongside the instance.
fn lp_support_instance(n: usize, model: CostModel, seed: u64) -> Result<Generated, GenError> {
    if !(4..=16).contains(&n) {
        return Err(GenError::BadParams(
            "lp-support instances need 4 <= n <= 16".into(),
        ));
    }
    for attempt in 0..LP_SUPPORT_ATTEMPTS {
        let s = seed.wrapping_add(attempt as u64);
        let base = stacked_triangulation(n, s);
        let mut rng = rng(s ^ 0x5851_f42d_4c95_7f2d);
        let far = Cost::from_units(1_000_000);
        let mut cost = vec![vec![far; n]; n];
        for (i, row) in cost.iter_mut().enumerate() {
            row[i] = Cost::ZERO;
        }
        for e in base.edge_ids() {
            let (u, v) = base.endpoints(e);
            let (a, b) = model.draw_pair(&mut rng);
            cost[u][v] = a;
            cost[v][u] = b;
        }
        let inst = AtspInstance::new(cost)?.metric_completion();
        let hk = solve_held_karp(&inst, &HkOptions::default())?;
        let pairs = base.pair_multiplicities();
        let covered = hk
            .support_pairs()
            .iter()
            .all(|&(u, v)| pairs.contains_key(&(u.min(v), u.max(v))));
        if covered {
            let genus = base.genus()?;
            return Ok(Generated {
                graph: Some(base),
                instance: Some(inst),
                edge_connectivity: None,
                genus: Some(genus),
                seed: s,
            });
        }
    }
    Err(GenError::Exhausted(LP_SUPPORT_ATTEMPTS))
}
