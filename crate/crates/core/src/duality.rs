//! Forward-backward duality on layered Variant-I networks.
//!
//! Reversing every edge turns each Variant-I node, which weights its inputs
//! and repeats one symbol on all outputs, into a node that sums its inputs
//! and weights each output by the coefficient its forward edge carried. The
//! node's coefficient matrix is transposed, and so is the channel matrix.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{FieldMatrix, GfError};
use crate::lnc::{individual_matrix, simulate, ChannelMatrix, CoeffKey, CodingAssignment};
use crate::netgraph::{Network, NetworkFile, Node, NodeKind, Variant};
use crate::rng::Prng;
use crate::transform::LayeredNetwork;

/// The reversal of a layered Variant-I network toward one destination.
///
/// The destination becomes the source and the source the only destination;
/// other destinations and their taps are dropped. Every layered node becomes
/// a Variant-II node. Reverse layer `r` holds forward layer `L + 1 - r` in
/// the forward order.
#[derive(Debug, Clone)]
pub struct ReversedNetwork {
    network: Network,
    assignment: CodingAssignment,
    gains: Vec<u32>,
    layers: Vec<Vec<usize>>,
    position: Vec<usize>,
    destination: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GainRecord {
    pub edge: String,
    pub value: u32,
}

/// Serialized form of a [`ReversedNetwork`].
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReversedFile {
    /// Reversed network with its reverse layer map.
    pub network: NetworkFile,
    /// Forward destination the reversal was taken for.
    pub destination: String,
    /// Sender-side scaling of each reversed edge.
    pub gains: Vec<GainRecord>,
}

impl ReversedNetwork {
    pub fn network(&self) -> &Network {
        &self.network
    }

    /// Coefficients that make the generic engine run the reversed network.
    pub fn assignment(&self) -> &CodingAssignment {
        &self.assignment
    }

    /// Weight applied by the sender of each reversed edge, in edge order.
    pub fn gains(&self) -> &[u32] {
        &self.gains
    }

    /// Id of the forward destination acting as the reverse source.
    pub fn destination(&self) -> &str {
        &self.destination
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    /// Nodes of reverse layer `r` (1-based).
    pub fn layer(&self, r: usize) -> &[usize] {
        &self.layers[r - 1]
    }

    /// Number of symbols the reverse source injects, `N_k`.
    pub fn taps(&self) -> usize {
        self.network.source_symbols()
    }

    /// Number of symbols reaching the reverse destination, `n`.
    pub fn symbols(&self) -> usize {
        self.network.destinations()[0].taps.len()
    }

    /// `A_{l,l+1}` in forward layer numbering: entry `(j, i)` is the gain
    /// forward layer-`(l+1)` node `i` puts on its reversed edge to forward
    /// layer-`l` node `j`.
    pub fn interlayer_matrix(&self, l: usize) -> Result<FieldMatrix> {
        let depth = self.depth();
        if l == 0 || l >= depth {
            return Err(Error::NotLayered(format!("no interlayer matrix A_{{{},{}}} for L = {depth}", l, l + 1)));
        }
        let net = &self.network;
        let (senders, receivers) = (self.layer(depth - l), self.layer(depth + 1 - l));
        let mut m = FieldMatrix::zeros(net.field(), receivers.len(), senders.len());
        for (i, &v) in senders.iter().enumerate() {
            for &e in net.out_edges(v) {
                m.set(self.position[net.edge(e).to], i, self.gains[e]);
            }
        }
        Ok(m)
    }

    pub(crate) fn layers_by_id(&self) -> BTreeMap<String, usize> {
        let mut map = BTreeMap::new();
        for (r, nodes) in self.layers.iter().enumerate() {
            for &v in nodes {
                map.insert(self.network.node(v).id.clone(), r + 1);
            }
        }
        map
    }

    pub fn to_file(&self) -> ReversedFile {
        let mut network = self.network.to_file();
        network.layers = Some(self.layers_by_id());
        let gains = self
            .network
            .edges()
            .iter()
            .zip(&self.gains)
            .map(|(e, &value)| GainRecord { edge: e.id.clone(), value })
            .collect();
        ReversedFile { network, destination: self.destination.clone(), gains }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("reversed network serializes")
    }

    /// Reverses again. The result is the forward network restricted to this
    /// destination, with SISO relays as unit-weight Variant-I nodes.
    pub fn reverse_back(&self) -> Result<(LayeredNetwork, CodingAssignment)> {
        let net = &self.network;
        let dest = net.destinations()[0].node;
        let depth = self.depth();
        let mut nodes = vec![Node::new(net.node(dest).id.clone(), NodeKind::Source, Variant::Variant1)];
        let mut layers = BTreeMap::new();
        for (v, n) in net.nodes().iter().enumerate() {
            if n.kind == NodeKind::Intermediate {
                nodes.push(Node::new(n.id.clone(), NodeKind::Intermediate, Variant::Variant1));
                layers.insert(n.id.clone(), depth + 1 - self.layer_of(v));
            }
        }
        nodes.push(Node::new(net.node(net.source()).id.clone(), NodeKind::Destination, Variant::Variant1));
        let edges = net.edges().iter().map(|e| (e.id.clone(), net.node(e.to).id.clone(), net.node(e.from).id.clone())).collect();
        let fwd = Network::new(net.field().clone(), nodes, edges, &net.node(dest).id, &[&self.destination])?;
        let lnet = LayeredNetwork::from_parts(fwd, &layers, Vec::new())?;
        let mut asg = CodingAssignment::new(net.field());
        for (e, edge) in net.edges().iter().enumerate() {
            if edge.to != dest && edge.from != net.source() {
                asg.insert(CoeffKey::new(&net.node(edge.from).id, &edge.id, None), self.gains[e])?;
            }
        }
        Ok((lnet, asg))
    }

    fn layer_of(&self, v: usize) -> usize {
        self.layers.iter().position(|l| l.contains(&v)).map_or(0, |r| r + 1)
    }
}

/// Reverses `lnet` toward destination `k`.
pub fn reverse(lnet: &LayeredNetwork, asg: &CodingAssignment, k: usize) -> Result<ReversedNetwork> {
    lnet.check_variant1()?;
    let net = lnet.network();
    asg.check_complete(net)?;
    let dk = net.destination(k)?.node;
    let depth = lnet.depth();

    let mut nodes = vec![Node::new(net.node(dk).id.clone(), NodeKind::Source, Variant::Variant1)];
    for (v, n) in net.nodes().iter().enumerate() {
        if lnet.layer_of(v).is_some() {
            nodes.push(Node::new(n.id.clone(), NodeKind::Intermediate, Variant::Variant2));
        }
    }
    let src = net.node(net.source()).id.clone();
    nodes.push(Node::new(src.clone(), NodeKind::Destination, Variant::Variant1));

    let kept: Vec<usize> = (0..net.edges().len())
        .filter(|&e| {
            let to = net.edge(e).to;
            net.node(to).kind != NodeKind::Destination || to == dk
        })
        .collect();
    let edges = kept
        .iter()
        .map(|&e| {
            let edge = net.edge(e);
            (edge.id.clone(), net.node(edge.to).id.clone(), net.node(edge.from).id.clone())
        })
        .collect();
    let rev = Network::new(net.field().clone(), nodes, edges, &net.node(dk).id, &[&src])?.validated()?;

    // a reversed edge is weighted by the coefficient its forward receiver
    // applied; taps carry none
    let mut gains = Vec::with_capacity(kept.len());
    for &e in &kept {
        let to = net.edge(e).to;
        gains.push(if to == dk { 1 } else { asg.coefficient(net, to, e, &[])? });
    }

    let mut assignment = CodingAssignment::new(net.field());
    for v in 0..rev.nodes().len() {
        if rev.node(v).kind != NodeKind::Intermediate {
            continue;
        }
        for &out in rev.out_edges(v) {
            for &inp in rev.in_edges(v) {
                let key = CoeffKey::new(&rev.node(v).id, &rev.edge(inp).id, Some(&rev.edge(out).id));
                assignment.insert(key, gains[out])?;
            }
        }
    }

    let mut position = vec![0; rev.nodes().len()];
    let layers: Vec<Vec<usize>> = (1..=depth)
        .rev()
        .map(|l| {
            lnet.layer(l)
                .iter()
                .enumerate()
                .map(|(p, &v)| {
                    let r = rev.node_idx(&net.node(v).id).expect("layered node kept");
                    position[r] = p;
                    r
                })
                .collect()
        })
        .collect();

    Ok(ReversedNetwork { network: rev, assignment, gains, layers, position, destination: net.node(dk).id.clone() })
}

/// `A_b = A_{1,2} A_{2,3} ⋯ A_{L-1,L}`, mapping every layer-`L` node's
/// symbol to the `n` symbols arriving at the forward source.
pub fn backward_matrix(rev: &ReversedNetwork) -> Result<ChannelMatrix> {
    let net = &rev.network;
    let depth = rev.depth();
    let mut b = FieldMatrix::identity(net.field(), rev.layer(1).len());
    for r in 1..depth {
        b = rev.interlayer_matrix(depth - r)?.mul(&b)?;
    }
    let sink = net.destinations()[0].node;
    Ok(ChannelMatrix {
        rows: net.in_edges(sink).iter().map(|&e| net.edge(e).id.clone()).collect(),
        cols: rev.layer(1).iter().map(|&v| net.node(v).id.clone()).collect(),
        matrix: b,
    })
}

/// The backward map from the `N_k` reverse-source symbols to the `n`
/// received ones, `A_k^T`.
pub fn backward_individual(rev: &ReversedNetwork) -> Result<ChannelMatrix> {
    let net = &rev.network;
    let full = backward_matrix(rev)?;
    let cols: Vec<usize> = net.out_edges(net.source()).iter().map(|&e| rev.position[net.edge(e).to]).collect();
    Ok(ChannelMatrix {
        rows: full.rows,
        cols: net.out_edges(net.source()).iter().map(|&e| net.edge(e).id.clone()).collect(),
        matrix: full.matrix.transpose().select_rows(&cols).transpose(),
    })
}

/// Runs the reversed network on `x_b` (one symbol per tap of the forward
/// destination) and returns what reaches the forward source.
pub fn simulate_backward(rev: &ReversedNetwork, xb: &[u32]) -> Result<Vec<u32>> {
    Ok(simulate(&rev.network, &rev.assignment, xb)?.received.swap_remove(0))
}

/// Whether the forward source can decode in the backward direction:
/// `rank(A_k^T) = n`.
pub fn backward_valid(lnet: &LayeredNetwork, asg: &CodingAssignment, k: usize) -> Result<bool> {
    let rev = reverse(lnet, asg, k)?;
    Ok(backward_individual(&rev)?.matrix.rank() == lnet.network().source_symbols())
}

/// Keeps the first `n` linearly independent rows of `A_k` (scanning taps in
/// order) and deletes destination `k`'s other tap edges, making `A_k`
/// square and invertible. Returns the kept tap positions.
pub fn square_reduce(lnet: &LayeredNetwork, asg: &CodingAssignment, k: usize) -> Result<(Vec<usize>, LayeredNetwork)> {
    let net = lnet.network();
    let n = net.source_symbols();
    let ak = individual_matrix(lnet, asg, k)?.matrix;
    let rows = ak.independent_rows();
    if rows.len() < n {
        return Err(GfError::RankDeficient { rank: rows.len(), cols: n }.into());
    }
    let taps = &net.destination(k)?.taps;
    let dropped: Vec<&str> = (0..taps.len()).filter(|i| !rows.contains(i)).map(|i| net.edge(taps[i]).id.as_str()).collect();
    let mut file = net.to_file();
    file.edges.retain(|e| !dropped.contains(&e.id.as_str()));
    let reduced = LayeredNetwork::from_parts(file.into_network()?, &lnet.layer_map(), lnet.inserted().to_vec())?;
    Ok((rows, reduced.with_history(lnet)))
}

/// Backward map `A_k^T P` when the reverse source sends `P x_b` for `n`
/// information symbols `x_b`. Fails unless it has full rank `n`.
pub fn precode(rev: &ReversedNetwork, p: &FieldMatrix) -> Result<FieldMatrix> {
    let (nk, n) = (rev.taps(), rev.symbols());
    if p.rows() != nk || p.cols() != n {
        return Err(GfError::DimensionMismatch(format!("precoder must be {nk}x{n}, got {}x{}", p.rows(), p.cols())).into());
    }
    let map = backward_individual(rev)?.matrix.mul(p)?;
    let rank = map.rank();
    if rank < n {
        return Err(GfError::RankDeficient { rank, cols: n }.into());
    }
    Ok(map)
}

/// Precoder sending `x_b` on the taps in `rows` and nothing elsewhere.
pub fn selection_precoder(rev: &ReversedNetwork, rows: &[usize]) -> FieldMatrix {
    let mut p = FieldMatrix::zeros(rev.network.field(), rev.taps(), rows.len());
    for (j, &r) in rows.iter().enumerate() {
        p.set(r, j, 1);
    }
    p
}

/// Attempts at drawing a random precoder before giving up.
pub const PRECODER_ATTEMPTS: usize = 32;

/// Draws uniformly random `N_k × n` precoders until one yields a full-rank
/// backward map. Returns the precoder and the map.
pub fn random_precoder(rev: &ReversedNetwork, seed: u64) -> Result<(FieldMatrix, FieldMatrix)> {
    let f = rev.network.field();
    let mut rng = Prng::from_seed(seed);
    for _ in 0..PRECODER_ATTEMPTS {
        let data = (0..rev.taps() * rev.symbols()).map(|_| rng.below(f.order() as u64) as u32).collect();
        let p = FieldMatrix::from_vec(f, rev.taps(), rev.symbols(), data)?;
        match precode(rev, &p) {
            Ok(map) => return Ok((p, map)),
            Err(Error::Field(GfError::RankDeficient { .. })) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::PrecoderSearchFailed(PRECODER_ATTEMPTS))
}
