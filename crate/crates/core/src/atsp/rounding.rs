//! From a Held-Karp solution to a Hamiltonian tour.
//!
//! The LP solution is symmetrized and scaled by a denominator `D` into an
//! embedded multigraph `H` (edge `{u,v}` gets `⌊D·y_uv⌋` parallel copies
//! laid out in the supplied rotation system). A cost-bounded thin tree of
//! `H` is oriented along cheaper arcs and completed to an integral
//! circulation; the circulation's Euler circuit, shortcut past repeated
//! vertices, is the tour.
//!
//! With `α_x = α_H·D` and `σ_x = σ_H·D`, the tree meets every cut in at most
//! `2α_x·x(δ⁺(S))` edges, which makes the capacities `⌈2α_x·x_a⌉ + 1`
//! feasible, and the cheapest integral circulation then costs at most
//! `c(T*) + 2α_x·c(x) ≤ (2α_x + σ_x)·c(x)`. Every inequality of that chain is
//! checked at runtime.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{
    cost_to_big, serialize_big_q, AtspError, AtspInstance, BigQ, HkOptions, HkSolution, Tour,
};
use crate::embed::{EdgeId, EmbeddedGraph, VertexId};
use crate::flow::edge_connectivity;
use crate::numeric::{Cost, Surd, Q};
use crate::pipeline::{genus_bound_function, weighted_thin_tree};

/// An undirected support edge of the symmetrized solution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymEdge {
    pub u: VertexId,
    pub v: VertexId,
    /// `y = x_uv + x_vu`
    #[serde(serialize_with = "serialize_big_q")]
    pub y: BigRational,
    /// `c' = min(c(u,v), c(v,u))`
    pub cost: Cost,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Symmetrized {
    pub n: usize,
    /// Sorted by `(u, v)` with `u < v`.
    pub edges: Vec<SymEdge>,
}

impl Symmetrized {
    /// `y(δ(v))`, exact.
    pub fn degree(&self, v: VertexId) -> BigRational {
        self.edges
            .iter()
            .filter(|e| e.u == v || e.v == v)
            .map(|e| e.y.clone())
            .sum()
    }

    /// `c'(y)` in cost units.
    pub fn cost(&self) -> BigRational {
        self.edges.iter().map(|e| &e.y * cost_to_big(e.cost)).sum()
    }
}

pub fn symmetrize(x: &HkSolution, inst: &AtspInstance) -> Symmetrized {
    let edges = x
        .support_pairs()
        .into_iter()
        .map(|(u, v)| SymEdge {
            u,
            v,
            y: x.value(u, v) + x.value(v, u),
            cost: inst.cost(u, v).min(inst.cost(v, u)),
        })
        .collect();
    Symmetrized { n: x.n, edges }
}

/// The multigraph `H` together with its connectivity certificate.
#[derive(Debug, Clone)]
pub struct Discretized {
    pub graph: EmbeddedGraph,
    /// For each edge id of `graph`, the vertex pair `(min, max)` it copies.
    pub pair_of: Vec<(VertexId, VertexId)>,
    pub denominator: u64,
    pub support_size: usize,
    /// Measured edge connectivity of `graph`.
    pub connectivity: u64,
    /// `2D − s`: flooring loses less than one copy per support edge in any
    /// cut whose `y`-value is at least 2.
    pub required: u64,
}

/// Builds `H` with `⌊D·y_e⌋` copies of each support edge, laid out in the
/// rotation system of `embedding`, which must be a simple loopless graph on
/// the same vertices containing every support pair.
pub fn discretize(
    sym: &Symmetrized,
    denominator: u64,
    embedding: &EmbeddedGraph,
) -> Result<Discretized, AtspError> {
    if denominator == 0 {
        return Err(AtspError::EmbeddingMismatch(
            "denominator must be positive".into(),
        ));
    }
    if embedding.vertex_count() != sym.n {
        return Err(AtspError::EmbeddingMismatch(format!(
            "embedding has {} vertices, instance has {}",
            embedding.vertex_count(),
            sym.n
        )));
    }
    let mut slot_of_pair: BTreeMap<(VertexId, VertexId), EdgeId> = BTreeMap::new();
    for e in embedding.edge_ids() {
        let (a, b) = embedding.endpoints(e);
        if a == b {
            return Err(AtspError::EmbeddingMismatch(format!("edge {e} is a loop")));
        }
        if slot_of_pair.insert((a.min(b), a.max(b)), e).is_some() {
            return Err(AtspError::EmbeddingMismatch(format!(
                "pair ({}, {}) appears more than once",
                a.min(b),
                a.max(b)
            )));
        }
    }
    let d = BigRational::from_integer(BigInt::from(denominator));
    let mut mult = vec![0usize; embedding.edge_slots()];
    let mut costs = vec![Cost::ZERO; embedding.edge_slots()];
    for se in &sym.edges {
        let Some(&e) = slot_of_pair.get(&(se.u, se.v)) else {
            return Err(AtspError::EmbeddingMismatch(format!(
                "support pair ({}, {}) is not an edge of the embedding",
                se.u, se.v
            )));
        };
        mult[e] = (&d * &se.y)
            .floor()
            .to_integer()
            .to_usize()
            .expect("copy count fits in usize");
        costs[e] = se.cost;
    }
    let (graph, origin) = embedding
        .clone()
        .with_costs(Some(costs))
        .amplify(|e| mult[e]);
    let pair_of = origin
        .iter()
        .map(|&e| {
            let (a, b) = embedding.endpoints(e);
            (a.min(b), a.max(b))
        })
        .collect();
    let connectivity = u64::from(edge_connectivity(&graph));
    let support_size = sym.edges.len();
    let required = (2 * denominator).saturating_sub(support_size as u64);
    if connectivity < required {
        return Err(AtspError::ConnectivityShortfall {
            measured: connectivity,
            required,
        });
    }
    Ok(Discretized {
        graph,
        pair_of,
        denominator,
        support_size,
        connectivity,
        required,
    })
}

/// Orients each tree pair along its cheaper arc; ties go from the smaller
/// endpoint. The directed cost equals `c'(T)`.
pub fn orient_tree(
    pairs: &[(VertexId, VertexId)],
    inst: &AtspInstance,
) -> Vec<(VertexId, VertexId)> {
    pairs
        .iter()
        .map(|&(a, b)| {
            let (u, v) = (a.min(b), a.max(b));
            if inst.cost(v, u) < inst.cost(u, v) {
                (v, u)
            } else {
                (u, v)
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CirculationArc {
    pub from: VertexId,
    pub to: VertexId,
    pub lower: u64,
    pub capacity: u64,
    pub cost: Cost,
    pub flow: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Circulation {
    pub arcs: Vec<CirculationArc>,
    pub cost: Cost,
}

impl Circulation {
    /// Inflow equals outflow at every vertex and every arc respects its bounds.
    pub fn is_valid(&self, n: usize) -> bool {
        let mut balance = vec![0i128; n];
        for a in &self.arcs {
            if a.flow < a.lower || a.flow > a.capacity {
                return false;
            }
            balance[a.from] -= i128::from(a.flow);
            balance[a.to] += i128::from(a.flow);
        }
        balance.iter().all(|&b| b == 0)
    }
}

/// Residual network for successive shortest paths.
struct Mcf {
    head: Vec<usize>,
    cap: Vec<i64>,
    cost: Vec<i64>,
    adj: Vec<Vec<usize>>,
}

impl Mcf {
    fn new(n: usize) -> Self {
        Mcf {
            head: Vec::new(),
            cap: Vec::new(),
            cost: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    fn add(&mut self, u: usize, v: usize, cap: i64, cost: i64) -> usize {
        let i = self.head.len();
        self.head.extend([v, u]);
        self.cap.extend([cap, 0]);
        self.cost.extend([cost, -cost]);
        self.adj[u].push(i);
        self.adj[v].push(i + 1);
        i
    }

    /// Bellman-Ford (queue-based) shortest augmenting paths until `t` is
    /// unreachable. Returns the total flow pushed.
    fn run(&mut self, s: usize, t: usize) -> i64 {
        let n = self.adj.len();
        let mut total = 0;
        loop {
            let mut dist = vec![i64::MAX; n];
            let mut prev = vec![usize::MAX; n];
            let mut queued = vec![false; n];
            let mut queue = VecDeque::from([s]);
            dist[s] = 0;
            while let Some(u) = queue.pop_front() {
                queued[u] = false;
                for &a in &self.adj[u] {
                    let v = self.head[a];
                    if self.cap[a] > 0 && dist[u] + self.cost[a] < dist[v] {
                        dist[v] = dist[u] + self.cost[a];
                        prev[v] = a;
                        if !queued[v] {
                            queued[v] = true;
                            queue.push_back(v);
                        }
                    }
                }
            }
            if dist[t] == i64::MAX {
                return total;
            }
            let mut push = i64::MAX;
            let mut v = t;
            while v != s {
                let a = prev[v];
                push = push.min(self.cap[a]);
                v = self.head[a ^ 1];
            }
            let mut v = t;
            while v != s {
                let a = prev[v];
                self.cap[a] -= push;
                self.cap[a ^ 1] += push;
                v = self.head[a ^ 1];
            }
            total += push;
        }
    }
}

/// Minimum-cost integral circulation with lower bounds. Each input arc is
/// `(from, to, lower, capacity, cost)`. Lower bounds are moved into vertex
/// supplies, and the remaining flow problem is solved by successive
/// shortest paths between a super source and sink.
pub fn min_cost_circulation(
    n: usize,
    arcs: &[(VertexId, VertexId, u64, u64, Cost)],
) -> Result<Circulation, AtspError> {
    let (s, t) = (n, n + 1);
    let mut net = Mcf::new(n + 2);
    let mut excess = vec![0i64; n];
    let mut index = Vec::with_capacity(arcs.len());
    for &(u, v, lower, cap, cost) in arcs {
        if lower > cap {
            return Err(AtspError::CirculationInfeasible(format!(
                "arc ({u}, {v}) has lower bound {lower} above capacity {cap}"
            )));
        }
        index.push(net.add(u, v, (cap - lower) as i64, cost.micros()));
        excess[v] += lower as i64;
        excess[u] -= lower as i64;
    }
    let mut need = 0;
    for (v, &e) in excess.iter().enumerate() {
        if e > 0 {
            net.add(s, v, e, 0);
            need += e;
        } else if e < 0 {
            net.add(v, t, -e, 0);
        }
    }
    let pushed = net.run(s, t);
    if pushed < need {
        return Err(AtspError::CirculationInfeasible(format!(
            "only {pushed} of {need} units of lower-bound excess could be routed"
        )));
    }
    let mut out = Vec::with_capacity(arcs.len());
    let mut total = Cost::ZERO;
    for (&(from, to, lower, capacity, cost), &i) in arcs.iter().zip(&index) {
        let flow = lower + net.cap[i ^ 1] as u64;
        total += cost.times(flow as i64);
        out.push(CirculationArc {
            from,
            to,
            lower,
            capacity,
            cost,
            flow,
        });
    }
    Ok(Circulation {
        arcs: out,
        cost: total,
    })
}

/// Euler circuit of the multidigraph carrying `flow` copies of each arc,
/// starting at vertex 0. `None` if some arc is unreachable.
fn euler_circuit(n: usize, circ: &Circulation) -> Option<Vec<VertexId>> {
    let mut out: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    let mut total = 0;
    for a in &circ.arcs {
        for _ in 0..a.flow {
            out[a.from].push(a.to);
        }
        total += a.flow as usize;
    }
    // consume in ascending head order for a deterministic circuit
    for list in &mut out {
        list.sort_unstable_by(|a, b| b.cmp(a));
    }
    let mut stack = vec![0];
    let mut circuit = Vec::with_capacity(total + 1);
    while let Some(&v) = stack.last() {
        if let Some(w) = out[v].pop() {
            stack.push(w);
        } else {
            circuit.push(v);
            stack.pop();
        }
    }
    circuit.reverse();
    (circuit.len() == total + 1).then_some(circuit)
}

/// Exact `a ≤ q + c·√r` for nonnegative `c`.
fn le_plus_surd(a: &BigRational, q: &BigRational, c: &BigRational, r: u64) -> bool {
    let lhs = a - q;
    !lhs.is_positive() || &lhs * &lhs <= c * c * BigRational::from_integer(BigInt::from(r))
}

/// `⌈c·√r⌉` for nonnegative `c`, exactly.
fn ceil_surd(c: &BigRational, r: u64) -> BigInt {
    let sq = c * c * BigRational::from_integer(BigInt::from(r));
    let floor_sq = sq.floor().to_integer();
    let m = floor_sq.sqrt();
    if BigRational::from_integer(&m * &m) == sq {
        m
    } else {
        m + 1
    }
}

fn q_big(q: &Q) -> BigRational {
    BigRational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom()))
}

fn render_surd(c: &BigRational, r: u64) -> String {
    if r == 1 {
        BigQ(c).to_string()
    } else {
        format!("{}*sqrt({r})", BigQ(c))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TourReport {
    pub tour: Tour,
    /// `α_x = α_H·D`, thinness of the tree with respect to `x`.
    pub alpha_x: String,
    /// `σ_x = σ_H·D`.
    #[serde(serialize_with = "serialize_big_q")]
    pub sigma_x: BigRational,
    pub tree_arcs: Vec<(VertexId, VertexId)>,
    /// `c(T*)`
    pub tree_cost: Cost,
    pub circulation: Circulation,
    /// `(2α_x + σ_x)·c(x)`, rendered exactly.
    pub bound: String,
    pub bound_f64: f64,
}

/// Rounds `x` to a tour through the oriented tree `tree_arcs`, whose
/// undirected version is `α_H`-thin and has cost ratio `σ_H` in the
/// discretized graph with denominator `D`.
pub fn round_to_tour(
    inst: &AtspInstance,
    x: &HkSolution,
    tree_arcs: &[(VertexId, VertexId)],
    alpha_h: &Surd,
    sigma_h: &Q,
    denominator: u64,
) -> Result<TourReport, AtspError> {
    let n = inst.n();
    if alpha_h.cmp_q(&Q::from_integer(1)) != std::cmp::Ordering::Less {
        return Err(AtspError::ThinnessTooLarge(alpha_h.to_string()));
    }
    let d = BigRational::from_integer(BigInt::from(denominator));
    let alpha_c = q_big(&alpha_h.coeff) * &d;
    let r = alpha_h.radicand;
    let sigma_x = q_big(sigma_h) * &d;
    let cx = x.objective.clone();

    let tree: BTreeSet<(VertexId, VertexId)> = tree_arcs.iter().copied().collect();
    let mut arc_set: BTreeSet<(VertexId, VertexId)> =
        x.arcs.iter().map(|a| (a.from, a.to)).collect();
    arc_set.extend(tree.iter().copied());
    let two = BigRational::from_integer(BigInt::from(2));
    let mut arcs = Vec::with_capacity(arc_set.len());
    for &(u, v) in &arc_set {
        let cap = ceil_surd(&(&two * &alpha_c * x.value(u, v)), r) + BigInt::one();
        let cap = cap
            .to_u64()
            .ok_or_else(|| AtspError::CirculationInfeasible("capacity overflow".into()))?;
        let lower = u64::from(tree.contains(&(u, v)));
        arcs.push((u, v, lower, cap, inst.cost(u, v)));
    }
    let circulation = min_cost_circulation(n, &arcs)?;
    if !circulation.is_valid(n) {
        return Err(AtspError::CirculationInfeasible(
            "returned flow is not a circulation".into(),
        ));
    }

    let tree_cost: Cost = tree.iter().map(|&(u, v)| inst.cost(u, v)).sum();
    let check = |what: &str, ok: bool| {
        if ok {
            Ok(())
        } else {
            Err(AtspError::CostBoundViolated(what.to_string()))
        }
    };
    // the fractional circulation 1_T + (at most) 2α_x·x is feasible
    check(
        "circulation cost exceeds c(T*) + 2α_x·c(x)",
        le_plus_surd(
            &cost_to_big(circulation.cost),
            &cost_to_big(tree_cost),
            &(&two * &alpha_c * &cx),
            r,
        ),
    )?;
    check(
        "c(T*) exceeds σ_x·c(x)",
        cost_to_big(tree_cost) <= &sigma_x * &cx,
    )?;

    let circuit = euler_circuit(n, &circulation).ok_or_else(|| {
        AtspError::CirculationInfeasible("circulation support is not connected".into())
    })?;
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for &v in &circuit {
        if !seen[v] {
            seen[v] = true;
            order.push(v);
        }
    }
    if order.len() != n {
        return Err(AtspError::CirculationInfeasible(format!(
            "circuit visits {} of {n} vertices",
            order.len()
        )));
    }
    let cost = inst.tour_cost(&order);
    check("shortcutting increased the cost", cost <= circulation.cost)?;
    let sigma_cx = &sigma_x * &cx;
    let two_alpha_cx = &two * &alpha_c * &cx;
    check(
        "tour cost exceeds (2α_x + σ_x)·c(x)",
        le_plus_surd(&cost_to_big(cost), &sigma_cx, &two_alpha_cx, r),
    )?;
    let bound_f64 = sigma_cx.to_f64().unwrap_or(f64::NAN)
        + two_alpha_cx.to_f64().unwrap_or(f64::NAN) * (r as f64).sqrt();
    Ok(TourReport {
        tour: Tour { order, cost },
        alpha_x: render_surd(&alpha_c, r),
        sigma_x,
        tree_arcs: tree.into_iter().collect(),
        tree_cost,
        circulation,
        bound: format!("{} + {}", BigQ(&sigma_cx), render_surd(&two_alpha_cx, r)),
        bound_f64,
    })
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ApproxOptions {
    /// Discretization denominator; `None` means `n³`.
    pub denominator: Option<u64>,
    pub hk: HkOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproxReport {
    pub n: usize,
    /// Whether shortest-path completion changed any cost.
    pub metric_completed: bool,
    #[serde(serialize_with = "serialize_big_q")]
    pub opt_hk: BigRational,
    pub opt_hk_f64: f64,
    pub lp_exact: bool,
    pub lp_epsilon: f64,
    pub cuts_added: usize,
    pub support_size: usize,
    pub denominator: u64,
    pub connectivity: u64,
    pub required_connectivity: u64,
    pub genus: usize,
    /// Thinness bound `α_H` of the tree in `H`.
    pub thinness_h: Surd,
    #[serde(with = "crate::numeric::q_string")]
    pub cost_ratio_h: Q,
    pub extraction_rounds: usize,
    pub truncated: bool,
    /// `β = f(γ)`
    pub beta: Surd,
    /// `3β(1 + 1/n)`
    pub beta_factor: String,
    /// Whether `H` was connected enough for the `3β(1 + 1/n)` guarantee
    /// (`k·n ≥ D(2n − 1)`); the bound is enforced only then.
    pub beta_bound_applies: bool,
    pub ratio_to_hk: f64,
    pub rounding: TourReport,
}

impl ApproxReport {
    pub fn tour(&self) -> &Tour {
        &self.rounding.tour
    }
}

/// The full pipeline: metric completion, Held-Karp, discretization through
/// `embedding`, weighted thin tree, rounding.
pub fn atsp_approx(
    inst: &AtspInstance,
    embedding: &EmbeddedGraph,
    opts: &ApproxOptions,
) -> Result<ApproxReport, AtspError> {
    let metric = inst.metric_completion();
    let n = metric.n();
    let hk = super::solve_held_karp(&metric, &opts.hk)?;
    let sym = symmetrize(&hk, &metric);
    let denominator = opts.denominator.unwrap_or((n as u64).pow(3));
    let disc = discretize(&sym, denominator, embedding)?;
    let wt = weighted_thin_tree(&disc.graph)?;
    let pairs: Vec<(VertexId, VertexId)> = wt.tree_edges.iter().map(|&e| disc.pair_of[e]).collect();
    let tree_arcs = orient_tree(&pairs, &metric);
    let rounding = round_to_tour(
        &metric,
        &hk,
        &tree_arcs,
        &wt.thinness,
        &wt.cost_ratio,
        denominator,
    )?;

    let beta = genus_bound_function(wt.genus);
    let factor = Q::new(3 * (n as i128 + 1), n as i128);
    let beta_scaled = beta.scale(factor);
    let beta_bound_applies = disc.connectivity * n as u64 >= denominator * (2 * n as u64 - 1);
    if beta_bound_applies {
        let c = q_big(&beta_scaled.coeff) * &hk.objective;
        if !le_plus_surd(
            &cost_to_big(rounding.tour.cost),
            &BigRational::zero(),
            &c,
            beta_scaled.radicand,
        ) {
            return Err(AtspError::CostBoundViolated(format!(
                "tour cost {} exceeds {}·c(x)",
                rounding.tour.cost, beta_scaled
            )));
        }
    }
    let opt_hk_f64 = hk.objective_f64();
    Ok(ApproxReport {
        n,
        metric_completed: metric != *inst,
        opt_hk: hk.objective.clone(),
        opt_hk_f64,
        lp_exact: hk.exact,
        lp_epsilon: hk.epsilon,
        cuts_added: hk.cuts_added(),
        support_size: disc.support_size,
        denominator,
        connectivity: disc.connectivity,
        required_connectivity: disc.required,
        genus: wt.genus,
        thinness_h: wt.thinness,
        cost_ratio_h: wt.cost_ratio,
        extraction_rounds: wt.rounds.len(),
        truncated: wt.truncated,
        beta,
        beta_factor: beta_scaled.to_string(),
        beta_bound_applies,
        ratio_to_hk: if opt_hk_f64 > 0.0 {
            rounding.tour.cost.to_f64() / opt_hk_f64
        } else {
            1.0
        },
        rounding,
    })
}
