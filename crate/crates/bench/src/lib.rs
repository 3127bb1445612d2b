//! Benchmark fixtures shared by the criterion targets.

use thin_atsp::embed::EmbeddedGraph;
use thin_atsp::genlab::{
    cube, generate, stacked_triangulation, torus_grid_amplified, CostModel, GenSpec,
};
use thin_atsp::AtspInstance;

/// Planar inputs of growing size for the thin-tree benches.
pub fn planar_inputs() -> Vec<(String, EmbeddedGraph)> {
    vec![
        ("cube x12".into(), cube().amplify(|_| 12).0),
        (
            "stacked30 x4".into(),
            stacked_triangulation(30, 1).amplify(|_| 4).0,
        ),
        (
            "stacked60 x6".into(),
            stacked_triangulation(60, 2).amplify(|_| 6).0,
        ),
    ]
}

pub fn torus_input() -> EmbeddedGraph {
    torus_grid_amplified(5, 5, 12, 2)
}

pub fn weighted_input() -> EmbeddedGraph {
    let spec = GenSpec::PlanarAmplified {
        base: thin_atsp::genlab::PlanarBase::Stacked(20),
        mult: 8,
        costs: Some(CostModel::UniformRange(1, 100)),
        seed: 9,
    };
    generate(&spec)
        .expect("valid spec")
        .graph
        .expect("graph family")
}

/// An instance together with a planar embedding of its LP support.
pub fn lp_support_instance(n: usize) -> (AtspInstance, EmbeddedGraph) {
    let spec = GenSpec::LpSupportInstance {
        n,
        costs: CostModel::AsymmetricSkew {
            lo: 1,
            hi: 100,
            skew: 3,
        },
        seed: 100 * n as u64 + 1,
    };
    let g = generate(&spec).expect("generator finds a planar support");
    (g.instance.expect("instance"), g.graph.expect("support"))
}
