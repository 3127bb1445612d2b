//! `thin-atsp`: generate instances, build thin trees, run surgery and the
//! ATSP rounding pipeline, and verify results with the brute-force oracles.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use thin_atsp::atsp::{
    atsp_approx, parse_atsp, write_atsp, ApproxOptions, ApproxReport, HkOptions, Tour,
};
use thin_atsp::embed::{parse_emb, write_emb, EmbeddedGraph};
use thin_atsp::flow::edge_connectivity;
use thin_atsp::genlab::{generate, CostModel, GenSpec, PlanarBase};
use thin_atsp::oracle::{brute_force_thinness, verify_tour, ThinnessReport, MAX_CUT_VERTICES};
use thin_atsp::pipeline::{bounded_genus_thin_tree, weighted_thin_tree};
use thin_atsp::surgery::increase_dual_girth;
use thin_atsp::thin_tree::{thin_spanning_tree, ThinTreeResult};

#[derive(Parser)]
#[command(
    name = "thin-atsp",
    version,
    about = "Thin spanning trees on embedded graphs and ATSP rounding"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an embedded graph (EMB/1) or an ATSP instance (ATSP/1).
    Gen(GenArgs),
    /// Thin spanning tree from far-apart dual edges.
    ThinTree {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Check the tree against every cut (at most 24 vertices).
        #[arg(long)]
        certify: bool,
    },
    /// Delete short dual cycles until the dual girth reaches k/(3√γ).
    Surgery {
        #[arg(long = "in")]
        input: PathBuf,
        /// Edge connectivity to assume; defaults to the measured value.
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        out: PathBuf,
        /// Line-delimited JSON log: one record per deleted cycle, then a summary.
        #[arg(long)]
        log: PathBuf,
    },
    /// Bounded-genus thin tree, or the cost-bounded variant with --weighted.
    Pipeline {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        weighted: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Held-Karp relaxation and rounding to a tour.
    Atsp {
        #[arg(long = "in")]
        input: PathBuf,
        /// Embedding of a graph containing the LP support.
        #[arg(long)]
        emb: PathBuf,
        /// Discretization denominator (default n³).
        #[arg(long)]
        denominator: Option<u64>,
        /// Force exact rational LP arithmetic.
        #[arg(long, conflicts_with = "float")]
        exact: bool,
        /// Force floating-point LP arithmetic.
        #[arg(long)]
        float: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Brute-force verification.
    #[command(subcommand)]
    Verify(VerifyCommand),
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Exact thinness of an edge set over all cuts.
    Thinness {
        #[arg(long = "in")]
        input: PathBuf,
        /// JSON file: an array of edge ids or an object with `tree_edges`.
        #[arg(long)]
        edges: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a tour is Hamiltonian and recompute its cost.
    Tour {
        #[arg(long = "in")]
        input: PathBuf,
        /// JSON file with an `order` array (top level or under `tour`).
        #[arg(long)]
        tour: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    PlanarAmplified,
    TorusGrid,
    RandomMetric,
    LpSupportInstance,
}

#[derive(Clone, Copy, ValueEnum)]
enum CostKind {
    Unit,
    UniformRange,
    AsymmetricSkew,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: Family,
    /// Planar base: k4, cube, octahedron, cycle, stacked.
    #[arg(long, default_value = "cube")]
    base: String,
    /// Vertex count (cycle/stacked bases, metric and lp-support families).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 3)]
    rows: usize,
    #[arg(long, default_value_t = 3)]
    cols: usize,
    #[arg(long, default_value_t = 1)]
    mult: usize,
    /// Multiplicity of the torus wrap-around seam.
    #[arg(long)]
    seam_mult: Option<usize>,
    /// Cost model; graph families stay uncosted when omitted.
    #[arg(long, value_enum)]
    costs: Option<CostKind>,
    #[arg(long, default_value_t = 1)]
    lo: i64,
    #[arg(long, default_value_t = 100)]
    hi: i64,
    #[arg(long, default_value_t = 4)]
    skew: i64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file: EMB/1 for graph families, ATSP/1 for instance families.
    #[arg(long)]
    out: PathBuf,
    /// For lp-support-instance: where to write the support embedding.
    #[arg(long)]
    emb_out: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_emb(path: &Path) -> Result<EmbeddedGraph> {
    parse_emb(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn write_out(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn emit<T: Serialize>(out: Option<&Path>, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match out {
        Some(p) => write_out(p, &text),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn cost_model(a: &GenArgs, default: CostKind) -> CostModel {
    match a.costs.unwrap_or(default) {
        CostKind::Unit => CostModel::Unit,
        CostKind::UniformRange => CostModel::UniformRange(a.lo, a.hi),
        CostKind::AsymmetricSkew => CostModel::AsymmetricSkew {
            lo: a.lo,
            hi: a.hi,
            skew: a.skew,
        },
    }
}

#[derive(Serialize)]
struct GenSummary {
    family: &'static str,
    seed: u64,
    vertices: usize,
    edges: Option<usize>,
    edge_connectivity: Option<u32>,
    genus: Option<usize>,
}

fn run_gen(a: &GenArgs) -> Result<()> {
    let graph_costs = a.costs.map(|_| cost_model(a, CostKind::Unit));
    let (family, spec) = match a.family {
        Family::PlanarAmplified => (
            "planar-amplified",
            GenSpec::PlanarAmplified {
                base: PlanarBase::parse(&a.base, a.n)?,
                mult: a.mult,
                costs: graph_costs,
                seed: a.seed,
            },
        ),
        Family::TorusGrid => (
            "torus-grid",
            GenSpec::TorusGrid {
                rows: a.rows,
                cols: a.cols,
                mult: a.mult,
                seam_mult: a.seam_mult,
                costs: graph_costs,
                seed: a.seed,
            },
        ),
        Family::RandomMetric => (
            "random-metric",
            GenSpec::RandomMetric {
                n: a.n.context("--n is required")?,
                costs: cost_model(a, CostKind::UniformRange),
                seed: a.seed,
            },
        ),
        Family::LpSupportInstance => (
            "lp-support-instance",
            GenSpec::LpSupportInstance {
                n: a.n.context("--n is required")?,
                costs: cost_model(a, CostKind::UniformRange),
                seed: a.seed,
            },
        ),
    };
    let g = generate(&spec)?;
    if let Some(inst) = &g.instance {
        write_out(&a.out, &write_atsp(inst))?;
        if let Some(graph) = &g.graph {
            let path = a
                .emb_out
                .as_ref()
                .context("--emb-out is required for lp-support-instance")?;
            write_out(path, &write_emb(graph))?;
        }
    } else if let Some(graph) = &g.graph {
        write_out(&a.out, &write_emb(graph))?;
    }
    let vertices = match (&g.graph, &g.instance) {
        (_, Some(i)) => i.n(),
        (Some(gr), None) => gr.vertex_count(),
        (None, None) => 0,
    };
    emit(
        None,
        &GenSummary {
            family,
            seed: g.seed,
            vertices,
            edges: g.graph.as_ref().map(EmbeddedGraph::edge_count),
            edge_connectivity: g.edge_connectivity,
            genus: g.genus,
        },
    )
}

#[derive(Serialize)]
struct ThinTreeOutput {
    #[serde(flatten)]
    result: ThinTreeResult,
    certification: Option<Certification>,
}

#[derive(Serialize)]
struct Certification {
    tree: ThinnessReport,
    far_set: ThinnessReport,
    /// Exact thinness of the far set is at most `1/m`.
    far_set_within_certificate: bool,
}

fn run_thin_tree(input: &Path, out: Option<&Path>, certify: bool) -> Result<()> {
    let g = read_emb(input)?;
    if certify && g.vertex_count() > MAX_CUT_VERTICES {
        bail!(
            "--certify enumerates every cut and is limited to {MAX_CUT_VERTICES} vertices (got {})",
            g.vertex_count()
        );
    }
    let result = thin_spanning_tree(&g)?;
    let certification = if certify {
        let tree = brute_force_thinness(&g, &result.tree_edges)?;
        let far_set = brute_force_thinness(&g, &result.far_set)?;
        let ok = far_set.max_ratio <= result.certified_thinness();
        Some(Certification {
            tree,
            far_set,
            far_set_within_certificate: ok,
        })
    } else {
        None
    };
    emit(
        out,
        &ThinTreeOutput {
            result,
            certification,
        },
    )
}

fn run_surgery(input: &Path, k: Option<u64>, out: &Path, log: &Path) -> Result<()> {
    let g = read_emb(input)?;
    let k = match k {
        Some(k) => k,
        None => u64::from(edge_connectivity(&g)),
    };
    let genus = g.genus()? as u64;
    let (h, record) = increase_dual_girth(&g, k, genus)?;
    write_out(out, &write_emb(&h))?;
    let mut lines = String::new();
    for step in &record.iterations {
        lines.push_str(&serde_json::to_string(step)?);
        lines.push('\n');
    }
    lines.push_str(&serde_json::to_string(&record)?);
    lines.push('\n');
    write_out(log, &lines)
}

fn run_pipeline(input: &Path, weighted: bool, out: Option<&Path>) -> Result<()> {
    let g = read_emb(input)?;
    if weighted {
        emit(out, &weighted_thin_tree(&g)?)
    } else {
        emit(out, &bounded_genus_thin_tree(&g)?)
    }
}

#[derive(Serialize)]
struct AtspOutput<'a> {
    tour: &'a Tour,
    report: &'a ApproxReport,
}

fn run_atsp(
    input: &Path,
    emb: &Path,
    denominator: Option<u64>,
    exact: Option<bool>,
    out: Option<&Path>,
) -> Result<()> {
    let inst = parse_atsp(&read(input)?).with_context(|| format!("parsing {}", input.display()))?;
    let support = read_emb(emb)?;
    let opts = ApproxOptions {
        denominator,
        hk: HkOptions {
            exact,
            ..HkOptions::default()
        },
    };
    let report = atsp_approx(&inst, &support, &opts)?;
    emit(
        out,
        &AtspOutput {
            tour: report.tour(),
            report: &report,
        },
    )
}

fn edge_list(v: &Value) -> Result<Vec<usize>> {
    let arr = match v {
        Value::Array(_) => v,
        Value::Object(m) => m
            .get("tree_edges")
            .or_else(|| m.get("edges"))
            .context("expected `tree_edges` or `edges`")?,
        _ => bail!("expected an array or an object"),
    };
    serde_json::from_value(arr.clone()).context("edge ids must be nonnegative integers")
}

fn tour_order(v: &Value) -> Result<Vec<usize>> {
    let order = v
        .get("order")
        .or_else(|| v.get("tour").and_then(|t| t.get("order")))
        .context("expected `order` or `tour.order`")?;
    serde_json::from_value(order.clone()).context("tour order must be vertex ids")
}

#[derive(Serialize)]
struct TourCheck {
    valid: bool,
    cost: String,
}

fn run_verify(cmd: &VerifyCommand) -> Result<()> {
    match cmd {
        VerifyCommand::Thinness { input, edges, out } => {
            let g = read_emb(input)?;
            let ids = edge_list(&serde_json::from_str(&read(edges)?)?)?;
            emit(out.as_deref(), &brute_force_thinness(&g, &ids)?)
        }
        VerifyCommand::Tour { input, tour, out } => {
            let inst = parse_atsp(&read(input)?)?;
            let order = tour_order(&serde_json::from_str(&read(tour)?)?)?;
            let cost = verify_tour(&order, &inst)?;
            emit(
                out.as_deref(),
                &TourCheck {
                    valid: true,
                    cost: cost.to_string(),
                },
            )
        }
    }
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Gen(a) => run_gen(a),
        Command::ThinTree {
            input,
            out,
            certify,
        } => run_thin_tree(input, out.as_deref(), *certify),
        Command::Surgery { input, k, out, log } => run_surgery(input, *k, out, log),
        Command::Pipeline {
            input,
            weighted,
            out,
        } => run_pipeline(input, *weighted, out.as_deref()),
        Command::Atsp {
            input,
            emb,
            denominator,
            exact,
            float,
            out,
        } => {
            let mode = match (exact, float) {
                (true, _) => Some(true),
                (_, true) => Some(false),
                _ => None,
            };
            run_atsp(input, emb, *denominator, mode, out.as_deref())
        }
        Command::Verify(v) => run_verify(v),
    }
}
