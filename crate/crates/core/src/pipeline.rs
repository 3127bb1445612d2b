//! Thin trees for bounded-genus graphs, and cost-bounded thin trees by
//! repeated extraction.

use serde::Serialize;
use thiserror::Error;

use crate::embed::{EdgeId, EmbedError, EmbeddedGraph};
use crate::flow::edge_connectivity;
use crate::numeric::{Cost, Surd, Q};
use crate::surgery::{increase_dual_girth, SurgeryError, SurgeryLog};
use crate::thin_tree::{alpha, thin_spanning_tree, ThinTreeError, ThinTreeResult};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error("graph is disconnected ({0} components)")]
    Disconnected(usize),
    #[error("planar dual girth {girth} is below the edge connectivity {k}")]
    WhitneyViolated { girth: usize, k: u64 },
    #[error("connector step left {0} components")]
    ConnectorFailure(usize),
    #[error("round {round}: residual connectivity {measured} is below the schedule k − i·g = {required}")]
    ExtractionFailure {
        round: usize,
        measured: u64,
        required: String,
    },
    #[error("cost ratio {ratio} exceeds 2g/k = {bound}")]
    CostBoundViolated { ratio: String, bound: String },
    #[error(transparent)]
    ThinTree(#[from] ThinTreeError),
    #[error(transparent)]
    Surgery(#[from] SurgeryError),
    #[error(transparent)]
    Embed(#[from] EmbedError),
}

/// `f(γ)`: the numerator of the thinness bound `f(γ)/k`. It is `10` on the
/// sphere and `7·√γ·α(γ)` otherwise.
pub fn genus_bound_function(genus: usize) -> Surd {
    if genus == 0 {
        Surd::rational(Q::from_integer(10))
    } else {
        Surd::new(Q::from_integer(7 * alpha(genus) as i128), genus as u64)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "branch", rename_all = "lowercase")]
pub enum Branch {
    Planar {
        component: ThinTreeResult,
    },
    Surgery {
        log: SurgeryLog,
        components: Vec<ThinTreeResult>,
        connectors: Vec<EdgeId>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenusThinTree {
    pub tree_edges: Vec<EdgeId>,
    pub k: u64,
    pub genus: usize,
    pub alpha: u64,
    /// Claimed thinness `f(γ)/k`.
    pub bound: Surd,
    pub details: Branch,
}

/// A spanning tree of thinness at most `f(γ)/k` in a connected embedded
/// graph with edge connectivity `k`.
///
/// On the sphere the dual girth is at least `k`, so the tree from the dual
/// directly has thinness `2·5/g* ≤ 10/k`. With positive genus, short dual
/// cycles are deleted first; each remaining component gets its own tree of
/// thinness `6√γ·α/k`, and at most `2√γ` extra edges join them up.
pub fn bounded_genus_thin_tree(g: &EmbeddedGraph) -> Result<GenusThinTree, PipelineError> {
    let components = g.component_count();
    if components != 1 {
        return Err(PipelineError::Disconnected(components));
    }
    let k = edge_connectivity(g) as u64;
    thin_tree_with_k(g, k)
}

fn thin_tree_with_k(g: &EmbeddedGraph, k: u64) -> Result<GenusThinTree, PipelineError> {
    let genus = g.genus()?;
    let alpha = alpha(genus);
    let bound = genus_bound_function(genus).scale(Q::new(1, k.max(1) as i128));
    if genus == 0 {
        let r = thin_spanning_tree(g)?;
        if g.edge_count() > 0 && (r.dual_girth as u64) < k {
            return Err(PipelineError::WhitneyViolated {
                girth: r.dual_girth,
                k,
            });
        }
        return Ok(GenusThinTree {
            tree_edges: r.tree_edges.clone(),
            k,
            genus,
            alpha,
            bound,
            details: Branch::Planar { component: r },
        });
    }

    let (h, log) = increase_dual_girth(g, k, genus as u64)?;
    let mut forest = Vec::new();
    let mut results = Vec::new();
    for comp in h.components() {
        if comp.len() < 2 {
            continue;
        }
        let piece = h.restrict_to(&comp)?;
        let r = thin_spanning_tree(&piece)?;
        forest.extend_from_slice(&r.tree_edges);
        results.push(r);
    }
    let connectors = connect_forest(g, &forest)?;
    let mut tree_edges = forest;
    tree_edges.extend_from_slice(&connectors);
    tree_edges.sort_unstable();
    Ok(GenusThinTree {
        tree_edges,
        k,
        genus,
        alpha,
        bound,
        details: Branch::Surgery {
            log,
            components: results,
            connectors,
        },
    })
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, v: usize) -> usize {
        let mut r = v;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut c = v;
        while self.0[c] != r {
            let next = self.0[c];
            self.0[c] = r;
            c = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Extends a forest of `g` to a spanning tree, taking the cheapest joining
/// edge first (smallest id on ties).
fn connect_forest(g: &EmbeddedGraph, forest: &[EdgeId]) -> Result<Vec<EdgeId>, PipelineError> {
    let n = g.vertex_count();
    let mut uf = UnionFind((0..n).collect());
    let mut pieces = n;
    for &e in forest {
        let (u, v) = g.endpoints(e);
        if uf.union(u, v) {
            pieces -= 1;
        }
    }
    let mut candidates: Vec<EdgeId> = g.edge_ids().collect();
    candidates.sort_by_key(|&e| (g.cost_or_unit(e), e));
    let mut added = Vec::new();
    for e in candidates {
        if pieces <= 1 {
            break;
        }
        let (u, v) = g.endpoints(e);
        if uf.union(u, v) {
            added.push(e);
            pieces -= 1;
        }
    }
    if pieces > 1 {
        return Err(PipelineError::ConnectorFailure(pieces));
    }
    Ok(added)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtractionRound {
    pub round: usize,
    /// Measured edge connectivity of the residual graph.
    pub k: u64,
    pub genus: usize,
    /// `f(γᵢ)/kᵢ`, the thinness of this round's tree in the original graph.
    pub thinness: Surd,
    pub tree_cost: Cost,
    /// Edges of this round's tree, removed before the next round.
    pub tree_edges: Vec<EdgeId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightedThinTree {
    pub tree_edges: Vec<EdgeId>,
    /// Thinness bound of the chosen tree with respect to the input graph.
    pub thinness: Surd,
    /// `c(T)/c(G)`.
    #[serde(with = "crate::numeric::q_string")]
    pub cost_ratio: Q,
    pub c_tree: Cost,
    pub c_graph: Cost,
    pub k: u64,
    pub genus: usize,
    /// `g = f(γ)`.
    pub g: Surd,
    /// `2g/k`, the target for both thinness and cost ratio.
    pub target: Surd,
    pub planned_rounds: usize,
    pub rounds: Vec<ExtractionRound>,
    pub chosen_round: usize,
    /// Set when a residual graph fell apart before the planned rounds were done.
    pub truncated: bool,
}

/// Smallest `t ≥ 1` with `t ≥ k/(2g)`.
fn round_count(k: u64, g: &Surd) -> usize {
    let ratio = Q::from_integer(k as i128) / (g.coeff * Q::from_integer(2));
    // k/(2g) = ratio/√r
    Surd::new(ratio / Q::from_integer(g.radicand as i128), g.radicand)
        .ceil()
        .max(1) as usize
}

/// Whether `measured ≥ k − i·g`, exactly.
fn meets_schedule(measured: u64, k: u64, round: usize, g: &Surd) -> bool {
    if measured >= k {
        return true;
    }
    let deficit = Q::from_integer((k - measured) as i128);
    g.scale(Q::from_integer(round as i128)).cmp_q(&deficit) != std::cmp::Ordering::Less
}

/// Repeatedly extracts bounded-genus thin trees, deleting each from the
/// residual graph, and returns the cheapest.
///
/// The number of rounds is `⌈k/(2g)⌉` with `g = f(γ)`. Every round `i`
/// satisfies `i < k/(2g)`, so its tree is `g/(k − i·g) < 2g/k` thin in the
/// input, and the cheapest of `t ≥ k/(2g)` disjoint trees costs at most
/// `c(G)/t ≤ (2g/k)·c(G)`.
pub fn weighted_thin_tree(g0: &EmbeddedGraph) -> Result<WeightedThinTree, PipelineError> {
    let components = g0.component_count();
    if components != 1 {
        return Err(PipelineError::Disconnected(components));
    }
    let k = edge_connectivity(g0) as u64;
    let genus = g0.genus()?;
    let gk = genus_bound_function(genus);
    let target = gk.scale(Q::new(2, k.max(1) as i128));
    let planned = round_count(k, &gk);
    let c_graph = g0.total_cost();

    let mut residual = g0.clone();
    let mut rounds = Vec::new();
    let mut truncated = false;
    for i in 0..planned {
        if i > 0 && !residual.is_connected() {
            truncated = true;
            break;
        }
        let ki = edge_connectivity(&residual) as u64;
        if !meets_schedule(ki, k, i, &gk) {
            return Err(PipelineError::ExtractionFailure {
                round: i,
                measured: ki,
                required: format!("{k} - {i}*({gk})"),
            });
        }
        let tree = thin_tree_with_k(&residual, ki)?;
        let tree_cost: Cost = tree.tree_edges.iter().map(|&e| g0.cost_or_unit(e)).sum();
        rounds.push(ExtractionRound {
            round: i,
            k: ki,
            genus: tree.genus,
            thinness: tree.bound,
            tree_cost,
            tree_edges: tree.tree_edges.clone(),
        });
        residual = residual.without_edges(tree.tree_edges.iter().copied())?;
    }

    let chosen = (0..rounds.len())
        .min_by_key(|&i| (rounds[i].tree_cost, i))
        .expect("at least one round runs");
    let c_tree = rounds[chosen].tree_cost;
    let cost_ratio = if c_graph == Cost::ZERO {
        Q::from_integer(0)
    } else {
        c_tree.to_q() / c_graph.to_q()
    };
    if !truncated && target.cmp_q(&cost_ratio) == std::cmp::Ordering::Less {
        return Err(PipelineError::CostBoundViolated {
            ratio: crate::numeric::q_to_string(&cost_ratio),
            bound: target.to_string(),
        });
    }
    Ok(WeightedThinTree {
        tree_edges: rounds[chosen].tree_edges.clone(),
        thinness: rounds[chosen].thinness,
        cost_ratio,
        c_tree,
        c_graph,
        k,
        genus,
        g: gk,
        target,
        planned_rounds: planned,
        rounds,
        chosen_round: chosen,
        truncated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genlab::{cube, planar_cycle, torus_grid_amplified};
    use crate::oracle::brute_force_thinness;

    #[test]
    fn bound_function_values() {
        assert_eq!(genus_bound_function(0), Surd::rational(Q::from_integer(10)));
        assert_eq!(genus_bound_function(1), Surd::rational(Q::from_integer(42)));
        assert_eq!(genus_bound_function(4).to_string(), "112");
        assert_eq!(genus_bound_function(2).to_string(), "49*sqrt(2)");
    }

    #[test]
    fn round_counts_use_the_ceiling() {
        let ten = genus_bound_function(0);
        assert_eq!(round_count(36, &ten), 2);
        assert_eq!(round_count(40, &ten), 2);
        assert_eq!(round_count(41, &ten), 3);
        assert_eq!(round_count(5, &ten), 1);
        assert!(meets_schedule(26, 36, 1, &ten));
        assert!(!meets_schedule(25, 36, 1, &ten));
    }

    #[test]
    fn planar_branch_on_amplified_cube() {
        let (g, _) = cube().amplify(|_| 12);
        let t = bounded_genus_thin_tree(&g).unwrap();
        assert_eq!(t.k, 36);
        assert_eq!(t.bound, Surd::rational(Q::new(10, 36)));
        let r = brute_force_thinness(&g, &t.tree_edges).unwrap();
        assert!(t.bound.cmp_q(&r.max_ratio) != std::cmp::Ordering::Less);
    }

    #[test]
    fn surgery_branch_on_weak_seam_torus() {
        let g = torus_grid_amplified(3, 3, 6, 1);
        let t = bounded_genus_thin_tree(&g).unwrap();
        assert_eq!(t.tree_edges.len(), 8);
        assert_eq!(t.bound, Surd::rational(Q::new(42, 19)));
        match &t.details {
            Branch::Surgery { log, .. } => assert_eq!(log.iterations.len(), 1),
            other => panic!("expected surgery branch, got {other:?}"),
        }
    }

    #[test]
    fn weighted_rounds_on_cube_with_one_expensive_edge() {
        let (g, _) = cube().amplify(|_| 12);
        let mut costs = vec![Cost::from_units(1); g.edge_slots()];
        costs[0] = Cost::from_units(1000);
        let g = g.with_costs(Some(costs));
        let w = weighted_thin_tree(&g).unwrap();
        assert_eq!(w.planned_rounds, 2);
        assert!(!w.truncated);
        assert!(!w.tree_edges.contains(&0));
        assert!(w.target.cmp_q(&w.cost_ratio) != std::cmp::Ordering::Less);
        let r = brute_force_thinness(&g, &w.tree_edges).unwrap();
        assert!(w.target.cmp_q(&r.max_ratio) != std::cmp::Ordering::Less);
    }

    #[test]
    fn single_round_when_connectivity_is_low() {
        let g = planar_cycle(6);
        let w = weighted_thin_tree(&g).unwrap();
        assert_eq!(w.planned_rounds, 1);
        assert_eq!(w.tree_edges.len(), 5);
        assert_eq!(w.cost_ratio, Q::new(5, 6));
    }
}
