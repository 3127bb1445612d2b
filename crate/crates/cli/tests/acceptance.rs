//! Acceptance suite: one line per criterion, `[PASS]` or `[FAIL]`, and a
//! nonzero exit status if anything fails.
//!
//! Every check recomputes its ground truth with the brute-force oracles or
//! with small independent routines in this file; library results are only
//! ever the thing being checked.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use thin_atsp::atsp::{atsp_approx, solve_held_karp, ApproxOptions, HkOptions};
use thin_atsp::embed::{cut_edges, cut_to_dual_cycles, geometric_dual, Cut, EdgeId, EmbeddedGraph};
use thin_atsp::flow::edge_connectivity;
use thin_atsp::genlab::{
    cube, generate, k4, octahedron, planar_cycle, stacked_triangulation, torus_grid_amplified,
    CostModel, GenSpec, PlanarBase,
};
use thin_atsp::numeric::{BigInt, BigRational, Cost, Surd, Q};
use thin_atsp::oracle::{
    brute_force_atsp, brute_force_components, brute_force_edge_connectivity, brute_force_girth,
    brute_force_min_out_cut, brute_force_thinness, verify_tour,
};
use thin_atsp::pipeline::{bounded_genus_thin_tree, genus_bound_function, weighted_thin_tree};
use thin_atsp::surgery::increase_dual_girth;
use thin_atsp::thin_tree::{alpha, thin_spanning_tree};

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Face count by tracing `d ↦ rotation_next(twin(d))` from the raw
/// rotation lists.
fn traced_faces(g: &EmbeddedGraph) -> (usize, BTreeMap<usize, usize>) {
    let mut next_in_rotation = BTreeMap::new();
    for v in 0..g.vertex_count() {
        let rot = g.rotation(v);
        for (i, &d) in rot.iter().enumerate() {
            next_in_rotation.insert(d, rot[(i + 1) % rot.len()]);
        }
    }
    let mut face_of = BTreeMap::new();
    let mut faces = 0;
    for &start in next_in_rotation.keys() {
        if face_of.contains_key(&start) {
            continue;
        }
        let mut d = start;
        while !face_of.contains_key(&d) {
            face_of.insert(d, faces);
            d = next_in_rotation[&(d ^ 1)];
        }
        faces += 1;
    }
    let isolated = (0..g.vertex_count())
        .filter(|&v| g.rotation(v).is_empty())
        .count();
    (faces + isolated, face_of)
}

fn ends(g: &EmbeddedGraph) -> Vec<(usize, usize)> {
    g.edge_ids().map(|e| g.endpoints(e)).collect()
}

fn dual_ends(g: &EmbeddedGraph) -> (usize, Vec<(usize, usize)>) {
    let (faces, face_of) = traced_faces(g);
    let list = g
        .edge_ids()
        .map(|e| (face_of[&(2 * e)], face_of[&(2 * e + 1)]))
        .collect();
    (faces, list)
}

/// 500 seeded embeddings: planar (stacked triangulations and amplified
/// bases) and toroidal grids, up to 50 vertices, with their known genus.
fn embedding_corpus() -> Vec<(String, EmbeddedGraph, usize)> {
    let mut out = Vec::new();
    for seed in 0u64..500 {
        let s = seed as usize;
        let (name, spec, genus) = match seed % 5 {
            0 => {
                let n = 4 + s % 47;
                (
                    format!("stacked({n})"),
                    GenSpec::PlanarAmplified {
                        base: PlanarBase::Stacked(n),
                        mult: 1,
                        costs: None,
                        seed,
                    },
                    0,
                )
            }
            1 => {
                let bases = [
                    PlanarBase::K4,
                    PlanarBase::Cube,
                    PlanarBase::Octahedron,
                    PlanarBase::Cycle(3 + s % 10),
                    PlanarBase::Stacked(4 + s % 9),
                ];
                let base = bases[s / 5 % bases.len()];
                let mult = 1 + s % 4;
                (
                    format!("{base:?}x{mult}"),
                    GenSpec::PlanarAmplified {
                        base,
                        mult,
                        costs: None,
                        seed,
                    },
                    0,
                )
            }
            2 => {
                let (r, c) = (3 + s % 5, 3 + s / 5 % 5);
                let mult = 1 + s % 3;
                (
                    format!("torus{r}x{c}x{mult}"),
                    GenSpec::TorusGrid {
                        rows: r,
                        cols: c,
                        mult,
                        seam_mult: None,
                        costs: None,
                        seed,
                    },
                    1,
                )
            }
            3 => {
                let (r, c) = (3 + s % 2, 3 + s / 5 % 2);
                let mult = 2 + s % 4;
                let seam = 1 + s % 2;
                (
                    format!("torus{r}x{c}x{mult}/{seam}"),
                    GenSpec::TorusGrid {
                        rows: r,
                        cols: c,
                        mult,
                        seam_mult: Some(seam),
                        costs: None,
                        seed,
                    },
                    1,
                )
            }
            _ => {
                let n = 4 + s % 9;
                let mult = 1 + s % 2;
                (
                    format!("stacked({n})x{mult}"),
                    GenSpec::PlanarAmplified {
                        base: PlanarBase::Stacked(n),
                        mult,
                        costs: None,
                        seed,
                    },
                    0,
                )
            }
        };
        let g = generate(&spec)
            .expect("corpus spec is valid")
            .graph
            .expect("graph family");
        out.push((format!("{name}#{seed}"), g, genus));
    }
    out
}

fn criterion_1(corpus: &[(String, EmbeddedGraph, usize)]) -> Outcome {
    let mut cuts = 0usize;
    let mut cycles = 0usize;
    for (name, g, genus) in corpus {
        ensure(g.vertex_count() <= 50, || {
            format!("{name}: more than 50 vertices")
        })?;
        let (f, face_of) = traced_faces(g);
        let (v, e) = (g.vertex_count() as i64, g.edge_count() as i64);
        ensure(v - e + f as i64 == 2 - 2 * *genus as i64, || {
            format!(
                "{name}: V - E + F = {} but genus is {genus}",
                v - e + f as i64
            )
        })?;
        ensure(g.face_count() == f, || {
            format!("{name}: face count {} != traced {f}", g.face_count())
        })?;

        let dual = geometric_dual(g);
        ensure(dual.edges().len() == g.edge_count(), || {
            format!("{name}: dual edge count")
        })?;
        let mut seen = BTreeSet::new();
        for de in dual.edges() {
            ensure(seen.insert(de.edge), || {
                format!("{name}: dual edge {} repeated", de.edge)
            })?;
            // left/right faces must be consistent with the traced faces up to relabeling
            let l = face_of[&(2 * de.edge)];
            let r = face_of[&(2 * de.edge + 1)];
            ensure((l == r) == (de.left == de.right), || {
                format!("{name}: dual edge {} sides", de.edge)
            })?;
        }
        ensure(seen == g.edge_ids().collect(), || {
            format!("{name}: dual edges != primal edges")
        })?;

        let n = g.vertex_count();
        if n > 12 {
            continue;
        }
        for mask in 1u64..(1 << n) - 1 {
            if mask & 1 == 0 {
                continue;
            }
            let cut = Cut::from_mask(n, mask).map_err(|e| e.to_string())?;
            let crossing: BTreeSet<EdgeId> = g
                .edge_ids()
                .filter(|&x| {
                    let (a, b) = g.endpoints(x);
                    (mask >> a & 1) != (mask >> b & 1)
                })
                .collect();
            ensure(
                cut_edges(g, &cut).into_iter().collect::<BTreeSet<_>>() == crossing,
                || format!("{name}: cut edges of mask {mask:#b}"),
            )?;
            let parts = cut_to_dual_cycles(g, &dual, &cut).map_err(|e| format!("{name}: {e}"))?;
            let mut covered = BTreeSet::new();
            for c in &parts {
                ensure(
                    !c.edges.is_empty() && c.edges.len() == c.vertices.len(),
                    || format!("{name}: malformed dual cycle"),
                )?;
                for (i, &x) in c.edges.iter().enumerate() {
                    ensure(covered.insert(x), || {
                        format!("{name}: dual cycles share edge {x}")
                    })?;
                    let de = dual
                        .edge(x)
                        .ok_or_else(|| format!("{name}: no dual edge {x}"))?;
                    let (a, b) = (c.vertices[i], c.vertices[(i + 1) % c.vertices.len()]);
                    ensure(
                        (de.left, de.right) == (a, b) || (de.left, de.right) == (b, a),
                        || format!("{name}: dual cycle is not closed at edge {x}"),
                    )?;
                }
            }
            ensure(covered == crossing, || {
                format!("{name}: dual cycles do not cover cut {mask:#b}")
            })?;
            cuts += 1;
            cycles += parts.len();
        }
    }
    Ok(format!(
        "{} embeddings; {cuts} cuts decomposed into {cycles} edge-disjoint dual cycles",
        corpus.len()
    ))
}

fn criterion_2(corpus: &[(String, EmbeddedGraph, usize)]) -> Outcome {
    let mut checked = 0;
    let mut tight = 0;
    let extra: Vec<(String, EmbeddedGraph, usize)> = [6usize, 12, 24]
        .iter()
        .map(|&q| (format!("cube x{q}"), cube().amplify(|_| q).0, 0))
        .collect();
    for (name, g, genus) in corpus.iter().chain(&extra) {
        if *genus != 0 {
            continue;
        }
        let k = if g.vertex_count() <= 12 {
            brute_force_edge_connectivity(g).map_err(|e| e.to_string())? as usize
        } else {
            edge_connectivity(g) as usize
        };
        let (faces, de) = dual_ends(g);
        let girth =
            brute_force_girth(faces, &de).ok_or_else(|| format!("{name}: dual is acyclic"))?;
        ensure(girth >= k, || {
            format!("{name}: dual girth {girth} < k = {k}")
        })?;
        checked += 1;
        tight += usize::from(girth == k);
    }
    Ok(format!(
        "{checked} planar instances, dual girth >= k everywhere ({tight} with equality)"
    ))
}

fn small_thin_tree_instances() -> Vec<(String, EmbeddedGraph)> {
    let mut out = Vec::new();
    let bases: Vec<(&str, EmbeddedGraph)> = vec![
        ("k4", k4()),
        ("cube", cube()),
        ("octahedron", octahedron()),
        ("cycle5", planar_cycle(5)),
        ("cycle8", planar_cycle(8)),
        ("stacked9", stacked_triangulation(9, 4)),
        ("stacked12", stacked_triangulation(12, 8)),
        ("torus3x3", torus_grid_amplified(3, 3, 1, 1)),
        ("torus3x4", torus_grid_amplified(3, 4, 1, 1)),
    ];
    for (name, base) in bases {
        for q in [1, 2, 3, 5, 8] {
            out.push((format!("{name} x{q}"), base.amplify(|_| q).0));
        }
    }
    out.push(("torus3x3 x6/1".into(), torus_grid_amplified(3, 3, 6, 1)));
    out.push(("torus3x4 x8/2".into(), torus_grid_amplified(3, 4, 8, 2)));
    out
}

fn criterion_3() -> Outcome {
    let mut runs = 0;
    let mut worst = Q::from_integer(0);
    for (name, g) in small_thin_tree_instances() {
        let r = thin_spanning_tree(&g).map_err(|e| format!("{name}: {e}"))?;
        let report = brute_force_thinness(&g, &r.far_set).map_err(|e| format!("{name}: {e}"))?;
        let cert = Q::new(1, r.certificate_distance as i128);
        ensure(report.max_ratio <= cert, || {
            format!(
                "{name}: far set has thinness {} > 1/{}",
                report.max_ratio, r.certificate_distance
            )
        })?;
        worst = worst.max(report.max_ratio / cert);
        runs += 1;
    }
    Ok(format!(
        "{runs} runs, far-set thinness <= 1/m in all (max ratio to 1/m: {worst})"
    ))
}

fn criterion_4() -> Outcome {
    let mut lines = Vec::new();
    for q in [6usize, 12, 24] {
        let g = cube().amplify(|_| q).0;
        let k = 3 * q as i128;
        let t = bounded_genus_thin_tree(&g).map_err(|e| e.to_string())?;
        ensure(t.k as i128 == k, || {
            format!("cube x{q}: k = {} != {k}", t.k)
        })?;
        let report = brute_force_thinness(&g, &t.tree_edges).map_err(|e| e.to_string())?;
        ensure(report.cuts_checked == 127, || {
            format!("cube x{q}: {} cuts", report.cuts_checked)
        })?;
        let bound = Q::new(10, k);
        ensure(bound < Q::from_integer(1), || {
            format!("cube x{q}: 10/k not below 1")
        })?;
        ensure(report.max_ratio <= bound, || {
            format!("cube x{q}: thinness {} > 10/{k}", report.max_ratio)
        })?;
        lines.push(format!("q={q}: {} <= 10/{k}", report.max_ratio));
    }
    Ok(lines.join("; "))
}

fn torus_instances() -> Vec<(String, EmbeddedGraph)> {
    let mut out = Vec::new();
    for (r, c) in [(3, 3), (3, 4), (4, 4)] {
        for q in [2, 3, 4, 6] {
            out.push((
                format!("torus{r}x{c} x{q}"),
                torus_grid_amplified(r, c, q, q),
            ));
        }
    }
    for (r, c, q, s) in [
        (3, 3, 6, 1),
        (3, 3, 16, 1),
        (3, 4, 18, 1),
        (4, 4, 14, 1),
        (3, 3, 24, 2),
    ] {
        out.push((
            format!("torus{r}x{c} x{q}/{s}"),
            torus_grid_amplified(r, c, q, s),
        ));
    }
    out
}

fn criterion_5() -> Outcome {
    let mut steps = 0;
    let mut with_surgery = 0;
    let mut total = 0;
    for (name, g) in torus_instances() {
        let genus = g.genus().map_err(|e| e.to_string())? as u64;
        ensure(genus == 1, || format!("{name}: genus {genus}"))?;
        let k = brute_force_edge_connectivity(&g).map_err(|e| e.to_string())? as u64;
        let (h, log) = increase_dual_girth(&g, k, genus).map_err(|e| format!("{name}: {e}"))?;
        for s in &log.iterations {
            let genus_step =
                s.genus_before == s.genus_after + 1 && s.components_after == s.components_before;
            let split_step =
                s.genus_before == s.genus_after && s.components_after == s.components_before + 1;
            ensure(genus_step != split_step, || {
                format!("{name}: dichotomy violated in {s:?}")
            })?;
            ensure(s.faces_after + s.cycle_length == s.faces_before + 2, || {
                format!("{name}: face accounting in {s:?}")
            })?;
        }
        let kappa = brute_force_components(h.vertex_count(), &ends(&h));
        ensure(kappa <= 2, || {
            format!("{name}: {kappa} components after surgery")
        })?;
        let (faces, de) = dual_ends(&h);
        if let Some(girth) = brute_force_girth(faces, &de) {
            let lhs = 9 * genus as u128 * (girth as u128).pow(2);
            ensure(lhs >= (k as u128).pow(2), || {
                format!("{name}: 9γ·girth² = {lhs} < k² = {}", (k as u128).pow(2))
            })?;
        }
        steps += log.iterations.len();
        with_surgery += usize::from(!log.iterations.is_empty());
        total += 1;
    }
    Ok(format!(
        "{total} torus instances ({with_surgery} needed surgery, {steps} cycle deletions), 0 dichotomy violations"
    ))
}

fn criterion_6() -> Outcome {
    let mut total = 0;
    let mut meaningful = 0;
    for (name, g) in torus_instances() {
        if g.vertex_count() > 16 {
            continue;
        }
        let k = brute_force_edge_connectivity(&g).map_err(|e| e.to_string())? as i128;
        let t = bounded_genus_thin_tree(&g).map_err(|e| format!("{name}: {e}"))?;
        let bound = Surd::new(Q::new(7 * alpha(1) as i128, k), 1);
        let report = brute_force_thinness(&g, &t.tree_edges).map_err(|e| e.to_string())?;
        ensure(bound.cmp_q(&report.max_ratio) != Ordering::Less, || {
            format!("{name}: thinness {} > 7·√1·α(1)/{k}", report.max_ratio)
        })?;
        total += 1;
        meaningful += usize::from(bound.cmp_q(&Q::from_integer(1)) == Ordering::Less);
    }
    Ok(format!(
        "{total} instances within 42/k ({meaningful} with a bound below 1)"
    ))
}

fn weighted_instances() -> Vec<(String, EmbeddedGraph)> {
    let specs: Vec<(&str, GenSpec)> = vec![
        ("cube x8", planar(PlanarBase::Cube, 8, 11)),
        ("cube x12", planar(PlanarBase::Cube, 12, 12)),
        ("octahedron x10", planar(PlanarBase::Octahedron, 10, 13)),
        ("k4 x16", planar(PlanarBase::K4, 16, 14)),
        ("stacked10 x8", planar(PlanarBase::Stacked(10), 8, 15)),
        ("cycle8 x12", planar(PlanarBase::Cycle(8), 12, 16)),
        ("stacked12 x4", planar(PlanarBase::Stacked(12), 4, 17)),
        (
            "torus3x3 x30",
            GenSpec::TorusGrid {
                rows: 3,
                cols: 3,
                mult: 30,
                seam_mult: None,
                costs: Some(CostModel::UniformRange(1, 100)),
                seed: 18,
            },
        ),
    ];
    specs
        .into_iter()
        .map(|(n, s)| (n.to_string(), generate(&s).unwrap().graph.unwrap()))
        .collect()
}

fn planar(base: PlanarBase, mult: usize, seed: u64) -> GenSpec {
    GenSpec::PlanarAmplified {
        base,
        mult,
        costs: Some(CostModel::UniformRange(1, 100)),
        seed,
    }
}

fn criterion_7() -> Outcome {
    let mut rounds = 0;
    let mut total = 0;
    for (name, g) in weighted_instances() {
        let k = brute_force_edge_connectivity(&g).map_err(|e| e.to_string())? as u64;
        let w = weighted_thin_tree(&g).map_err(|e| format!("{name}: {e}"))?;
        ensure(w.k == k, || format!("{name}: reported k {} != {k}", w.k))?;
        let gk = genus_bound_function(g.genus().map_err(|e| e.to_string())?);
        let target = gk.scale(Q::new(2, k as i128));

        let report = brute_force_thinness(&g, &w.tree_edges).map_err(|e| e.to_string())?;
        ensure(target.cmp_q(&report.max_ratio) != Ordering::Less, || {
            format!("{name}: thinness {} > 2g/k = {target}", report.max_ratio)
        })?;
        let c_tree: Cost = w
            .tree_edges
            .iter()
            .map(|&e| g.cost(e).expect("costed"))
            .sum();
        let c_graph: Cost = g.edge_ids().map(|e| g.cost(e).expect("costed")).sum();
        let ratio = c_tree.to_q() / c_graph.to_q();
        ensure(target.cmp_q(&ratio) != Ordering::Less, || {
            format!("{name}: c(T)/c(G) = {ratio} > 2g/k = {target}")
        })?;

        let mut residual = g.clone();
        for r in &w.rounds {
            let ki = brute_force_edge_connectivity(&residual).map_err(|e| e.to_string())? as u64;
            ensure(ki == r.k, || {
                format!(
                    "{name}: round {} trace says k = {}, measured {ki}",
                    r.round, r.k
                )
            })?;
            let deficit = Q::from_integer((k - ki.min(k)) as i128);
            ensure(
                gk.scale(Q::from_integer(r.round as i128)).cmp_q(&deficit) != Ordering::Less,
                || format!("{name}: round {}: k_i = {ki} < k - i·g", r.round),
            )?;
            residual = residual
                .without_edges(r.tree_edges.iter().copied())
                .map_err(|e| e.to_string())?;
            rounds += 1;
        }
        total += 1;
    }
    Ok(format!(
        "{total} weighted instances, {rounds} extraction rounds re-measured"
    ))
}

fn criterion_8() -> Outcome {
    let mut worst_gap = f64::NEG_INFINITY;
    let mut min_cut = f64::INFINITY;
    let mut cuts = 0;
    for i in 0u64..100 {
        let n = 4 + (i % 7) as usize;
        let model = if i % 2 == 0 {
            CostModel::UniformRange(1, 100)
        } else {
            CostModel::AsymmetricSkew {
                lo: 1,
                hi: 100,
                skew: 5,
            }
        };
        let inst = generate(&GenSpec::RandomMetric {
            n,
            costs: model,
            seed: i,
        })
        .unwrap()
        .instance
        .unwrap();
        let hk = solve_held_karp(&inst, &HkOptions::default())
            .map_err(|e| format!("instance {i}: {e}"))?;
        let (opt, _) = brute_force_atsp(&inst).map_err(|e| e.to_string())?;
        let gap = hk.objective_f64() - opt.to_f64();
        ensure(gap <= 1e-6, || {
            format!("instance {i}: LP {} > DP {opt}", hk.objective_f64())
        })?;
        let x = hk.matrix_f64();
        for v in 0..n {
            let out: f64 = x[v].iter().sum();
            let inn: f64 = x.iter().map(|row| row[v]).sum();
            ensure(
                (out - 1.0).abs() <= 1e-6 && (inn - 1.0).abs() <= 1e-6,
                || format!("instance {i}: degree of {v} is ({out}, {inn})"),
            )?;
        }
        let (value, _) = brute_force_min_out_cut(&x).map_err(|e| e.to_string())?;
        ensure(value >= 1.0 - 1e-6, || {
            format!("instance {i}: cut of value {value}")
        })?;
        worst_gap = worst_gap.max(gap);
        min_cut = min_cut.min(value);
        cuts += hk.cuts_added();
    }
    Ok(format!(
        "100 instances, max LP - OPT = {worst_gap:.3}, min cut {min_cut:.6}, {cuts} subtour rows added"
    ))
}

fn criterion_9() -> Outcome {
    let mut ratios = Vec::new();
    for n in [6usize, 8, 10] {
        for seed in [1u64, 2, 3] {
            let gen = generate(&GenSpec::LpSupportInstance {
                n,
                costs: CostModel::AsymmetricSkew {
                    lo: 1,
                    hi: 100,
                    skew: 3,
                },
                seed: 100 * n as u64 + seed,
            })
            .map_err(|e| e.to_string())?;
            let inst = gen.instance.unwrap();
            let support = gen.graph.unwrap();
            let tag = format!("n={n} seed={}", gen.seed);
            let rep = atsp_approx(&inst, &support, &ApproxOptions::default())
                .map_err(|e| format!("{tag}: {e}"))?;
            let cost = verify_tour(&rep.tour().order, &inst).map_err(|e| format!("{tag}: {e}"))?;
            ensure(cost == rep.tour().cost, || {
                format!("{tag}: reported cost differs")
            })?;
            let (opt, _) = brute_force_atsp(&inst).map_err(|e| e.to_string())?;
            ensure(cost >= opt, || {
                format!("{tag}: tour {cost} below OPT {opt}")
            })?;
            // cost ≤ 3·10·(1 + 1/n)·c(x), i.e. n·cost ≤ 30(n + 1)·c(x)
            let lhs = BigRational::new(
                BigInt::from(cost.micros()) * BigInt::from(n),
                BigInt::from(1_000_000),
            );
            let rhs = &rep.opt_hk * BigRational::from_integer(BigInt::from(30 * (n + 1)));
            ensure(lhs <= rhs, || {
                format!("{tag}: tour {cost} above 30(1+1/n)·{}", rep.opt_hk)
            })?;
            ensure(rep.genus == 0, || {
                format!("{tag}: support embedding is not planar")
            })?;
            ratios.push(format!("{n}:{:.3}", rep.ratio_to_hk));
        }
    }
    Ok(format!(
        "9 tours valid and within 30(1+1/n)·OPT_HK; tour/OPT_HK = [{}]",
        ratios.join(" ")
    ))
}

fn run_cli(bin: &str, dir: &Path, args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(bin)
        .args(args)
        .current_dir(dir)
        .output()
        .map_err(|e| format!("spawning {bin}: {e}"))?;
    if !out.status.success() {
        return Err(format!(
            "`thin-atsp {}` failed: {}",
            args.join(" "),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(out.stdout)
}

fn criterion_10() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_thin-atsp");
    let script: Vec<Vec<&str>> = vec![
        vec![
            "gen",
            "--family",
            "torus-grid",
            "--rows",
            "3",
            "--cols",
            "3",
            "--mult",
            "3",
            "--seed",
            "7",
            "--out",
            "g.emb",
        ],
        vec![
            "gen",
            "--family",
            "torus-grid",
            "--rows",
            "3",
            "--cols",
            "3",
            "--mult",
            "6",
            "--seam-mult",
            "1",
            "--seed",
            "7",
            "--out",
            "seam.emb",
        ],
        vec![
            "gen",
            "--family",
            "planar-amplified",
            "--base",
            "cube",
            "--mult",
            "8",
            "--costs",
            "uniform-range",
            "--seed",
            "3",
            "--out",
            "cube.emb",
        ],
        vec![
            "gen",
            "--family",
            "random-metric",
            "--n",
            "8",
            "--seed",
            "7",
            "--out",
            "metric.atsp",
        ],
        vec![
            "gen",
            "--family",
            "lp-support-instance",
            "--n",
            "6",
            "--costs",
            "asymmetric-skew",
            "--seed",
            "5",
            "--out",
            "inst.atsp",
            "--emb-out",
            "support.emb",
        ],
        vec![
            "thin-tree",
            "--in",
            "cube.emb",
            "--certify",
            "--out",
            "tree.json",
        ],
        vec![
            "surgery", "--in", "seam.emb", "--out", "h.emb", "--log", "log.json",
        ],
        vec!["pipeline", "--in", "g.emb", "--out", "genus.json"],
        vec![
            "pipeline",
            "--in",
            "cube.emb",
            "--weighted",
            "--out",
            "weighted.json",
        ],
        vec![
            "atsp",
            "--in",
            "inst.atsp",
            "--emb",
            "support.emb",
            "--out",
            "tour.json",
        ],
        vec![
            "verify",
            "thinness",
            "--in",
            "cube.emb",
            "--edges",
            "tree.json",
        ],
        vec!["verify", "tour", "--in", "inst.atsp", "--tour", "tour.json"],
    ];
    let mut runs: Vec<BTreeMap<String, Vec<u8>>> = Vec::new();
    for _ in 0..2 {
        let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
        let mut captured = BTreeMap::new();
        for (i, args) in script.iter().enumerate() {
            captured.insert(format!("stdout#{i:02}"), run_cli(bin, dir.path(), args)?);
        }
        for entry in std::fs::read_dir(dir.path()).map_err(|e| e.to_string())? {
            let entry = entry.map_err(|e| e.to_string())?;
            let bytes = std::fs::read(entry.path()).map_err(|e| e.to_string())?;
            captured.insert(entry.file_name().to_string_lossy().into_owned(), bytes);
        }
        runs.push(captured);
    }
    let (a, b) = (&runs[0], &runs[1]);
    ensure(a.keys().eq(b.keys()), || {
        "the two runs produced different file sets".into()
    })?;
    for (name, bytes) in a {
        ensure(b[name] == *bytes, || format!("{name} differs between runs"))?;
    }
    Ok(format!(
        "{} commands, {} outputs byte-identical across two runs",
        script.len(),
        a.len()
    ))
}

fn main() {
    let start = Instant::now();
    let corpus = embedding_corpus();
    let criteria: Vec<Criterion> = vec![
        ("1 euler/dual integrity", Box::new(|| criterion_1(&corpus))),
        (
            "2 planar dual girth >= k",
            Box::new(|| criterion_2(&corpus)),
        ),
        ("3 far-set thinness <= 1/m", Box::new(criterion_3)),
        ("4 planar cube thinness <= 10/k", Box::new(criterion_4)),
        (
            "5 torus surgery girth and components",
            Box::new(criterion_5),
        ),
        (
            "6 genus-branch thinness <= 7*sqrt(g)*alpha/k",
            Box::new(criterion_6),
        ),
        (
            "7 weighted thinness and cost <= 2g/k",
            Box::new(criterion_7),
        ),
        (
            "8 held-karp lower bound and feasibility",
            Box::new(criterion_8),
        ),
        (
            "9 atsp tours within 30(1+1/n) of OPT_HK",
            Box::new(criterion_9),
        ),
        ("10 cli determinism", Box::new(criterion_10)),
    ];
    let mut failed = 0;
    for (label, run) in &criteria {
        let t = Instant::now();
        let outcome = run();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {label}: {detail} ({secs:.1}s)"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {label}: {detail} ({secs:.1}s)");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.1}s",
        criteria.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
