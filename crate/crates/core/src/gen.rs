//! Seeded random networks for tests and experiments.

use std::collections::BTreeMap;

use crate::gf::FieldSpec;
use crate::netgraph::{Network, Node, NodeKind, Variant};
use crate::rng::Prng;
use crate::transform::LayeredNetwork;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VariantMix {
    Variant1,
    Variant2,
    /// Each node picks Variant I, Variant II or a hybrid uniformly.
    Mixed,
}

#[derive(Debug, Clone)]
pub struct DagParams {
    pub intermediates: usize,
    pub destinations: usize,
    /// Probability of each optional forward edge.
    pub edge_prob: f64,
    pub variants: VariantMix,
}

fn pick(rng: &mut Prng, len: usize) -> usize {
    rng.below(len as u64) as usize
}

/// A random acyclic network `S, v1, …, vm, D1, …, DK`. Every node gets an
/// edge from a uniformly chosen earlier node, so all of them are reachable;
/// any other forward pair is joined with probability `edge_prob`.
pub fn random_dag(field: &FieldSpec, params: &DagParams, seed: u64) -> Network {
    let mut rng = Prng::from_seed(seed);
    let m = params.intermediates;
    let mut ids = vec!["S".to_string()];
    ids.extend((1..=m).map(|i| format!("v{i}")));
    let dests: Vec<String> = (1..=params.destinations).map(|k| format!("D{k}")).collect();
    ids.extend(dests.iter().cloned());

    let mut edges = Vec::new();
    for to in 1..ids.len() {
        // destinations draw only from the source and intermediates
        let preds = to.min(m + 1);
        let first = if to > m && m > 0 { 1 + pick(&mut rng, m) } else { pick(&mut rng, preds) };
        for from in 0..preds {
            if from == first || rng.chance(params.edge_prob) {
                edges.push((from, to));
            }
        }
    }

    let mut out_degree = vec![0usize; ids.len()];
    for &(from, _) in &edges {
        out_degree[from] += 1;
    }
    let nodes = ids
        .iter()
        .enumerate()
        .map(|(i, id)| {
            let kind = match i {
                0 => NodeKind::Source,
                i if i <= m => NodeKind::Intermediate,
                _ => NodeKind::Destination,
            };
            let variant = match (kind, params.variants) {
                (NodeKind::Intermediate, VariantMix::Variant2) => Variant::Variant2,
                (NodeKind::Intermediate, VariantMix::Mixed) => match pick(&mut rng, 3) {
                    0 => Variant::Variant1,
                    1 => Variant::Variant2,
                    _ if out_degree[i] == 0 => Variant::Variant2,
                    _ => Variant::Hybrid(1 + pick(&mut rng, out_degree[i])),
                },
                _ => Variant::Variant1,
            };
            Node::new(id.clone(), kind, variant)
        })
        .collect();
    let edges = edges
        .into_iter()
        .map(|(a, b)| (format!("{}->{}", ids[a], ids[b]), ids[a].clone(), ids[b].clone()))
        .collect();
    Network::new(field.clone(), nodes, edges, "S", &dests)
        .and_then(Network::validated)
        .expect("generated networks are valid")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Taps {
    /// One destination reading every layer-`L` node.
    All,
    /// One destination reading `count` distinct layer-`L` nodes.
    Exact(usize),
    /// `k` destinations, each reading a random nonempty subset of layer `L`.
    Random(usize),
}

#[derive(Debug, Clone)]
pub struct LayeredParams {
    /// Source symbols `n`, the width of layer 1.
    pub symbols: usize,
    pub layers: usize,
    pub max_width: usize,
    pub edge_prob: f64,
    pub taps: Taps,
}

/// A random layered Variant-I network. Every node of layer `l + 1` has an
/// edge from a random node of layer `l`; other pairs of adjacent-layer
/// nodes are joined with probability `edge_prob`.
pub fn random_layered(field: &FieldSpec, params: &LayeredParams, seed: u64) -> LayeredNetwork {
    assert!(params.symbols >= 1 && params.layers >= 1 && params.max_width >= 1);
    let mut rng = Prng::from_seed(seed);
    let mut widths = vec![params.symbols];
    for _ in 1..params.layers {
        widths.push(1 + pick(&mut rng, params.max_width));
    }
    let last = params.layers - 1;
    if let Taps::Exact(c) = params.taps {
        widths[last] = widths[last].max(c);
    }
    let name = |l: usize, i: usize| format!("v{}_{}", l + 1, i + 1);

    let mut nodes = vec![Node::new("S", NodeKind::Source, Variant::Variant1)];
    let mut layers = BTreeMap::new();
    for (l, &w) in widths.iter().enumerate() {
        for i in 0..w {
            nodes.push(Node::new(name(l, i), NodeKind::Intermediate, Variant::Variant1));
            layers.insert(name(l, i), l + 1);
        }
    }
    let mut edges: Vec<(String, String)> = (0..widths[0]).map(|i| ("S".to_string(), name(0, i))).collect();
    for l in 1..widths.len() {
        for i in 0..widths[l] {
            let first = pick(&mut rng, widths[l - 1]);
            for j in 0..widths[l - 1] {
                if j == first || rng.chance(params.edge_prob) {
                    edges.push((name(l - 1, j), name(l, i)));
                }
            }
        }
    }

    let width = widths[last];
    let tap_sets: Vec<Vec<usize>> = match params.taps {
        Taps::All => vec![(0..width).collect()],
        Taps::Exact(c) => {
            let mut all: Vec<usize> = (0..width).collect();
            for i in 0..c {
                let j = i + pick(&mut rng, width - i);
                all.swap(i, j);
            }
            let mut chosen = all[..c].to_vec();
            chosen.sort_unstable();
            vec![chosen]
        }
        Taps::Random(k) => (0..k)
            .map(|_| {
                let first = pick(&mut rng, width);
                (0..width).filter(|&i| i == first || rng.chance(0.5)).collect()
            })
            .collect(),
    };
    let dests: Vec<String> = (1..=tap_sets.len()).map(|k| if tap_sets.len() == 1 { "D".into() } else { format!("D{k}") }).collect();
    for (d, taps) in dests.iter().zip(&tap_sets) {
        nodes.push(Node::new(d.clone(), NodeKind::Destination, Variant::Variant1));
        edges.extend(taps.iter().map(|&i| (name(last, i), d.clone())));
    }
    let edges = edges.into_iter().map(|(a, b)| (format!("{a}->{b}"), a, b)).collect();
    let net = Network::new(field.clone(), nodes, edges, "S", &dests).expect("generated ids are unique");
    LayeredNetwork::from_parts(net, &layers, Vec::new()).expect("generated networks are layered")
}
