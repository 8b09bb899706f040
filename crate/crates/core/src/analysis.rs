//! Mincut analysis: the rank of random channel matrices, a per-layer
//! structural bound, and a unit-capacity max-flow oracle.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lnc::{assign_random, individual_matrix, interlayer_pattern};
use crate::netgraph::Network;
use crate::rng::derive_seed;
use crate::transform::{layered_variant1, LayeredNetwork};

/// Largest rank a matrix with nonzeros exactly where `mask` is true can
/// reach over a large enough field: the size of a maximum matching between
/// rows and columns.
pub fn structural_rank(mask: &[Vec<bool>]) -> usize {
    let cols = mask.iter().map(Vec::len).max().unwrap_or(0);
    let mut owner: Vec<Option<usize>> = vec![None; cols];
    let mut matched = 0;
    for r in 0..mask.len() {
        let mut seen = vec![false; cols];
        if augment(mask, r, &mut seen, &mut owner) {
            matched += 1;
        }
    }
    matched
}

fn augment(mask: &[Vec<bool>], r: usize, seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
    for (c, _) in mask[r].iter().enumerate().filter(|(_, &b)| b) {
        if seen[c] {
            continue;
        }
        seen[c] = true;
        if owner[c].is_none_or(|o| augment(mask, o, seen, owner)) {
            owner[c] = Some(r);
            return true;
        }
    }
    false
}

/// Structural rank of every interlayer pattern `A_{l+1,l}`, the last one
/// restricted to the rows destination `k` reads. With a single layer the
/// channel matrix is a row selection of the identity, so the one entry is
/// the tap count.
pub fn layer_ranks(lnet: &LayeredNetwork, k: usize) -> Result<Vec<usize>> {
    lnet.check_variant1()?;
    let taps = lnet.tap_rows(k)?;
    let depth = lnet.depth();
    if depth == 1 {
        return Ok(vec![taps.len()]);
    }
    (1..depth)
        .map(|l| {
            let mut p = interlayer_pattern(lnet, l)?;
            if l == depth - 1 {
                p = taps.iter().map(|&r| p[r].clone()).collect();
            }
            Ok(structural_rank(&p))
        })
        .collect()
}

/// `min_l max rank(A_{l+1,l})`, an upper bound on the mincut to `k`.
pub fn mincut_upper_bound(lnet: &LayeredNetwork, k: usize) -> Result<usize> {
    Ok(layer_ranks(lnet, k)?.into_iter().min().unwrap_or(0))
}

/// Number of edge-disjoint paths from the source to destination `k`.
pub fn maxflow_mincut(net: &Network, k: usize) -> Result<usize> {
    let sink = net.destination(k)?.node;
    let mut used = vec![false; net.edges().len()];
    let mut flow = 0;
    // predecessor edge on the augmenting path, with direction (true = forward)
    let mut pred: Vec<Option<(usize, bool)>> = vec![None; net.nodes().len()];
    loop {
        pred.iter_mut().for_each(|p| *p = None);
        let mut visited = vec![false; net.nodes().len()];
        visited[net.source()] = true;
        let mut queue = VecDeque::from([net.source()]);
        while let Some(u) = queue.pop_front() {
            if u == sink {
                break;
            }
            let forward = net.out_edges(u).iter().filter(|&&e| !used[e]).map(|&e| (e, net.edge(e).to, true));
            let backward = net.in_edges(u).iter().filter(|&&e| used[e]).map(|&e| (e, net.edge(e).from, false));
            for (e, w, dir) in forward.chain(backward) {
                if !visited[w] {
                    visited[w] = true;
                    pred[w] = Some((e, dir));
                    queue.push_back(w);
                }
            }
        }
        if !visited[sink] {
            return Ok(flow);
        }
        let mut v = sink;
        while let Some((e, dir)) = pred[v] {
            used[e] = dir;
            v = if dir { net.edge(e).from } else { net.edge(e).to };
        }
        flow += 1;
    }
}

/// Largest `rank(A_k)` seen over `trials` random assignments. Trial `t`
/// draws with the derived seed `derive_seed(seed, t)`, so more trials never
/// lower the result.
pub fn rank_mincut_estimate(lnet: &LayeredNetwork, k: usize, trials: usize, seed: u64) -> Result<usize> {
    let net = lnet.network();
    let q = net.field().order();
    let dests = net.destinations().len();
    if q as usize <= dests {
        return Err(Error::FieldTooSmall { q, k: dests });
    }
    net.destination(k)?;
    lnet.check_variant1()?;
    (0..trials as u64)
        .into_par_iter()
        .map(|t| Ok(individual_matrix(lnet, &assign_random(net, derive_seed(seed, t)), k)?.matrix.rank()))
        .try_reduce(|| 0, |a, b| Ok(a.max(b)))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MincutReport {
    pub destination: String,
    pub estimate: usize,
    pub trials: usize,
    pub q: u32,
    pub layer_ranks: Vec<usize>,
    pub upper_bound: usize,
    pub max_flow: usize,
}

/// Layers and converts `net` to Variant I, then brackets the mincut to
/// destination `k` by the random-rank estimate, the structural bound, and
/// max-flow on `net` itself. An unreachable destination reports zeros.
pub fn mincut_report(net: &Network, k: usize, trials: usize, seed: u64, convert_first: bool) -> Result<MincutReport> {
    let d = net.destination(k)?;
    let id = net.node(d.node).id.clone();
    let q = net.field().order();
    let dests = net.destinations().len();
    if q as usize <= dests {
        return Err(Error::FieldTooSmall { q, k: dests });
    }
    let max_flow = maxflow_mincut(net, k)?;
    let pruned = prune_unreachable(net)?;
    let Some(pk) = pruned.destinations().iter().position(|pd| pruned.node(pd.node).id == id) else {
        return Ok(MincutReport { destination: id, estimate: 0, trials, q, layer_ranks: Vec::new(), upper_bound: 0, max_flow });
    };
    let lnet = layered_variant1(&pruned, convert_first)?;
    Ok(MincutReport {
        destination: id,
        estimate: rank_mincut_estimate(&lnet, pk, trials, seed)?,
        trials,
        q,
        layer_ranks: layer_ranks(&lnet, pk)?,
        upper_bound: mincut_upper_bound(&lnet, pk)?,
        max_flow,
    })
}

/// Drops every node the source cannot reach, along with its edges. Such
/// nodes only ever emit zero. Destinations left without taps are removed.
pub fn prune_unreachable(net: &Network) -> Result<Network> {
    let reach = net.reachable_from_source();
    let nodes: Vec<_> = net.nodes().iter().enumerate().filter(|&(v, _)| reach[v]).map(|(_, n)| n.clone()).collect();
    let edges = net
        .edges()
        .iter()
        .filter(|e| reach[e.from] && reach[e.to])
        .map(|e| (e.id.clone(), net.node(e.from).id.clone(), net.node(e.to).id.clone()))
        .collect();
    let dests: Vec<String> = net
        .destinations()
        .iter()
        .filter(|d| reach[d.node])
        .map(|d| net.node(d.node).id.clone())
        .collect();
    let out = Network::new(net.field().clone(), nodes, edges, &net.node(net.source()).id, &dests)?;
    out.validated()
}
