//! Raising the dual girth by deleting short dual cycles.
//!
//! Deleting the primal edges of a simple dual cycle cuts the surface along
//! a closed curve and caps both sides with disks. Each such step either
//! lowers the genus by one or splits off a new component, and the faces met
//! by the cycle merge into exactly two new faces.

use serde::Serialize;
use thiserror::Error;

use crate::embed::{geometric_dual, DualGraph, EdgeId, EmbedError, EmbeddedGraph};
use crate::flow::edge_connectivity;
use crate::multigraph::Cycle;
use crate::numeric::{Surd, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurgeryError {
    #[error("surgery needs positive genus; planar inputs take the planar branch")]
    ZeroGenus,
    #[error("graph is only {measured}-edge-connected, not {claimed}")]
    NotEdgeConnected { claimed: u64, measured: u64 },
    #[error("deleting dual cycle {edges:?} broke the genus/components dichotomy: {detail}")]
    DichotomyViolation { edges: Vec<EdgeId>, detail: String },
    #[error("final accounting failed: {0}")]
    BoundViolation(String),
    #[error(transparent)]
    Embed(#[from] EmbedError),
}

/// The girth target `k/(3√γ)`, with every comparison done as
/// `9·γ·len²` against `k²` in integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GirthTarget {
    pub k: u64,
    pub genus: u64,
}

impl GirthTarget {
    pub fn new(k: u64, genus: u64) -> Self {
        assert!(genus > 0, "the girth target needs positive genus");
        GirthTarget { k, genus }
    }

    /// Whether a cycle of this length is short, i.e. `len < k/(3√γ)`.
    pub fn is_short(&self, len: usize) -> bool {
        9 * self.genus as u128 * (len as u128).pow(2) < (self.k as u128).pow(2)
    }

    /// Smallest length that is not short.
    pub fn first_long_length(&self) -> usize {
        self.value().ceil() as usize
    }

    pub fn value(&self) -> Surd {
        Surd::new(Q::new(self.k as i128, 3 * self.genus as i128), self.genus)
    }
}

/// A shortest dual cycle strictly shorter than `threshold`, if any.
pub fn find_short_dual_cycle(dual: &DualGraph, threshold: &Surd) -> Option<Cycle> {
    let limit = threshold.ceil() as usize;
    dual.to_multigraph().shortest_cycle_below(limit)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurgeryStep {
    pub cycle_edges: Vec<EdgeId>,
    pub cycle_length: usize,
    pub genus_before: usize,
    pub genus_after: usize,
    pub components_before: usize,
    pub components_after: usize,
    pub faces_before: usize,
    pub faces_after: usize,
}

/// Deletes the primal edges of a simple dual cycle and checks the outcome:
/// genus drops or the component count grows (never both), and the face
/// count changes by `2 − len`.
pub fn delete_dual_cycle(
    g: &EmbeddedGraph,
    cycle: &Cycle,
) -> Result<(EmbeddedGraph, SurgeryStep), SurgeryError> {
    let genus_before = g.genus()?;
    let components_before = g.component_count();
    let faces_before = g.face_count();
    let h = g.without_edges(cycle.edges.iter().copied())?;
    let genus_after = h.genus()?;
    let components_after = h.component_count();
    let faces_after = h.face_count();
    let step = SurgeryStep {
        cycle_edges: cycle.edges.clone(),
        cycle_length: cycle.len(),
        genus_before,
        genus_after,
        components_before,
        components_after,
        faces_before,
        faces_after,
    };
    let violation = |detail: String| SurgeryError::DichotomyViolation {
        edges: cycle.edges.clone(),
        detail,
    };
    let genus_drop = genus_before as i64 - genus_after as i64;
    let split = components_after as i64 - components_before as i64;
    if !matches!((genus_drop, split), (1, 0) | (0, 1)) {
        return Err(violation(format!(
            "genus {genus_before}→{genus_after}, components {components_before}→{components_after}"
        )));
    }
    if faces_after + cycle.len() != faces_before + 2 {
        return Err(violation(format!(
            "faces {faces_before}→{faces_after}; expected the {} cycle faces to merge into 2",
            cycle.len()
        )));
    }
    Ok((h, step))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurgeryLog {
    pub k: u64,
    pub genus: u64,
    /// `k/(3√γ)`.
    pub target: Surd,
    pub iterations: Vec<SurgeryStep>,
    pub total_deleted: usize,
    pub final_genus: usize,
    pub final_components: usize,
    /// Dual girth of the result, `None` when its dual has no cycle.
    pub final_dual_girth: Option<usize>,
}

/// Girth surgery: while the dual has a cycle shorter than `k/(3√γ)`, delete
/// one (a shortest one). The genus in the target is that of the input and
/// stays fixed.
///
/// Afterwards the accounting is re-checked exactly: each step removed one
/// unit of genus or added one component, the edges between components of
/// the result were all deleted (`κ(H)·k ≤ 2·deleted`), and `κ(H)² ≤ 4γ`.
pub fn increase_dual_girth(
    g: &EmbeddedGraph,
    k: u64,
    genus: u64,
) -> Result<(EmbeddedGraph, SurgeryLog), SurgeryError> {
    if genus == 0 {
        return Err(SurgeryError::ZeroGenus);
    }
    let measured = edge_connectivity(g) as u64;
    if measured < k {
        return Err(SurgeryError::NotEdgeConnected {
            claimed: k,
            measured,
        });
    }
    let target = GirthTarget::new(k, genus);
    let threshold = target.value();
    let mut h = g.clone();
    let mut iterations = Vec::new();
    let mut total_deleted = 0;
    let final_girth = loop {
        let dual = geometric_dual(&h);
        match find_short_dual_cycle(&dual, &threshold) {
            Some(cycle) => {
                debug_assert!(target.is_short(cycle.len()));
                let (next, step) = delete_dual_cycle(&h, &cycle)?;
                total_deleted += step.cycle_length;
                iterations.push(step);
                h = next;
            }
            None => break dual.girth().ok(),
        }
    };

    let log = SurgeryLog {
        k,
        genus,
        target: threshold,
        total_deleted,
        final_genus: h.genus()?,
        final_components: h.component_count(),
        final_dual_girth: final_girth,
        iterations,
    };
    check_accounting(g, &log)?;
    Ok((h, log))
}

fn check_accounting(g: &EmbeddedGraph, log: &SurgeryLog) -> Result<(), SurgeryError> {
    let fail = |s: String| Err(SurgeryError::BoundViolation(s));
    let target = GirthTarget::new(log.k, log.genus);
    if let Some(girth) = log.final_dual_girth {
        if target.is_short(girth) {
            return fail(format!("final dual girth {girth} is below k/(3√γ)"));
        }
    }
    let m = log.iterations.len() as i64;
    let telescoped = (g.genus()? as i64 - log.final_genus as i64)
        + (log.final_components as i64 - g.component_count() as i64);
    if m > telescoped {
        return fail(format!(
            "{m} iterations but only {telescoped} units of genus and components"
        ));
    }
    let kappa = log.final_components as u128;
    if kappa >= 2 && kappa * log.k as u128 > 2 * log.total_deleted as u128 {
        return fail(format!(
            "{kappa} components need {} deleted edges, only {} deleted",
            kappa * log.k as u128 / 2,
            log.total_deleted
        ));
    }
    if kappa * kappa > 4 * log.genus as u128 {
        return fail(format!(
            "{kappa} components exceed 2√γ for γ = {}",
            log.genus
        ));
    }
    Ok(())
}
