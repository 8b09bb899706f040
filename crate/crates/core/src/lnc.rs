//! Linear network coding: coefficient assignments, node and interlayer
//! matrices, the factorized channel matrix, and symbol-level simulation.
//!
//! A node's output on out-edge `ρ` is `Σ_δ c(δ, ρ) · z_δ` over its in-edges
//! `δ`. Variant-I nodes use one coefficient per in-edge for all outputs;
//! Variant-II nodes one per (in-edge, out-edge) pair; hybrid nodes one per
//! (in-edge, output group), keyed by the group's first out-edge. SISO relays
//! forward their input. The `j`-th source out-edge carries `x_j`, and a
//! Variant-I node reads a source edge with the fixed coefficient 1, so the
//! outputs of layer 1 are exactly `x`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{FieldMatrix, FieldSpec, GfError};
use crate::netgraph::{Network, NodeKind, Variant};
use crate::rng::{Prng, PRNG_NAME};
use crate::transform::{LayeredNetwork, Provenance};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CoeffKey {
    pub node: String,
    pub in_edge: String,
    pub out_edge: Option<String>,
}

impl CoeffKey {
    pub fn new(node: &str, in_edge: &str, out_edge: Option<&str>) -> Self {
        CoeffKey { node: node.into(), in_edge: in_edge.into(), out_edge: out_edge.map(Into::into) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffRecord {
    pub node: String,
    pub in_edge: String,
    #[serde(default)]
    pub out_edge: Option<String>,
    pub value: u32,
}

/// On-disk assignment: either a seed to regenerate from, or explicit
/// coefficients (optionally annotated with the seed that produced them).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssignmentFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prng: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<Vec<CoeffRecord>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodingAssignment {
    field: FieldSpec,
    coeffs: BTreeMap<CoeffKey, u32>,
    seed: Option<u64>,
}

/// The out-edge key used for node `v`'s group containing out-edge `e`.
fn group_key(net: &Network, v: usize, group: &[usize]) -> Option<String> {
    match net.node(v).variant {
        Variant::Variant1 => None,
        _ => group.first().map(|&e| net.edge(e).id.clone()),
    }
}

fn fixed_unit(net: &Network, v: usize, in_edge: usize) -> bool {
    net.node(v).kind == NodeKind::Siso
        || (net.node(v).variant == Variant::Variant1 && net.edge(in_edge).from == net.source())
}

/// Coefficients `net` needs, in the canonical order used for random draws:
/// node declaration order, then output group, then in-edge.
pub fn required_keys(net: &Network) -> Vec<CoeffKey> {
    let mut keys = Vec::new();
    for v in 0..net.nodes().len() {
        if !net.is_coding_node(v) {
            continue;
        }
        for group in net.output_groups(v) {
            let out = group_key(net, v, &group);
            for &e in net.in_edges(v) {
                if !fixed_unit(net, v, e) {
                    keys.push(CoeffKey { node: net.node(v).id.clone(), in_edge: net.edge(e).id.clone(), out_edge: out.clone() });
                }
            }
        }
    }
    keys
}

impl CodingAssignment {
    pub fn new(field: &FieldSpec) -> Self {
        CodingAssignment { field: field.clone(), coeffs: BTreeMap::new(), seed: None }
    }

    /// Every required coefficient set to `value`.
    pub fn constant(net: &Network, value: u32) -> Result<Self> {
        let mut a = Self::new(net.field());
        for key in required_keys(net) {
            a.insert(key, value)?;
        }
        Ok(a)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    /// Seed of the random draw that produced this assignment, if any.
    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn insert(&mut self, key: CoeffKey, value: u32) -> Result<()> {
        if !self.field.contains(value) {
            return Err(GfError::OutOfRange { value, order: self.field.order() }.into());
        }
        self.coeffs.insert(key, value);
        Ok(())
    }

    pub fn get(&self, key: &CoeffKey) -> Option<u32> {
        self.coeffs.get(key).copied()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CoeffKey, u32)> {
        self.coeffs.iter().map(|(k, &v)| (k, v))
    }

    /// Fails on the first coefficient `net` needs but this assignment lacks.
    pub fn check_complete(&self, net: &Network) -> Result<()> {
        if self.field != *net.field() {
            return Err(GfError::FieldMismatch.into());
        }
        match required_keys(net).into_iter().find(|k| !self.coeffs.contains_key(k)) {
            Some(k) => Err(Error::MissingCoefficient { node: k.node, in_edge: k.in_edge }),
            None => Ok(()),
        }
    }

    /// Coefficient applied at node `v` to in-edge `in_edge` for the output
    /// group `group`.
    pub(crate) fn coefficient(&self, net: &Network, v: usize, in_edge: usize, group: &[usize]) -> Result<u32> {
        if fixed_unit(net, v, in_edge) {
            return Ok(1);
        }
        let key = CoeffKey { node: net.node(v).id.clone(), in_edge: net.edge(in_edge).id.clone(), out_edge: group_key(net, v, group) };
        self.get(&key).ok_or(Error::MissingCoefficient { node: key.node, in_edge: key.in_edge })
    }

    /// Rewrites this assignment, made for `from`, into one for `to`, where
    /// `prov` maps ids of `to` back to `from`. Every derived node applies
    /// the coefficient of the node it came from, so the end-to-end maps of
    /// the two networks agree.
    pub fn transport(&self, from: &Network, to: &Network, prov: &Provenance) -> Result<Self> {
        let mut out = CodingAssignment { field: self.field.clone(), coeffs: BTreeMap::new(), seed: self.seed };
        for key in required_keys(to) {
            let missing = || Error::MissingCoefficient { node: key.node.clone(), in_edge: key.in_edge.clone() };
            // inserted nodes pass their symbol through
            let Some(o) = prov.node_origin(&key.node) else {
                out.coeffs.insert(key, 1);
                continue;
            };
            let oe = prov.edge_origin(&key.in_edge).ok_or_else(missing)?;
            let ov = from.require_node(o)?;
            let oe = from.require_edge(oe)?;
            // an original node without out-edges emits nothing
            let value = if fixed_unit(from, ov, oe) || from.out_degree(ov) == 0 {
                1
            } else {
                let group = if from.node(ov).variant == Variant::Variant1 {
                    Vec::new()
                } else {
                    let t = to.require_node(&key.node)?;
                    let probe = match &key.out_edge {
                        Some(e) => e.clone(),
                        None => to.out_edges(t).first().map(|&e| to.edge(e).id.clone()).ok_or_else(missing)?,
                    };
                    let origin_out = prov.edge_origin(&probe).and_then(|e| from.edge_idx(e)).ok_or_else(missing)?;
                    from.output_groups(ov).into_iter().find(|g| g.contains(&origin_out)).ok_or_else(missing)?
                };
                self.coefficient(from, ov, oe, &group)?
            };
            out.coeffs.insert(key, value);
        }
        Ok(out)
    }

    pub fn to_file(&self) -> AssignmentFile {
        AssignmentFile {
            prng: self.seed.map(|_| PRNG_NAME.to_string()),
            seed: self.seed,
            coeffs: Some(
                self.coeffs
                    .iter()
                    .map(|(k, &value)| CoeffRecord {
                        node: k.node.clone(),
                        in_edge: k.in_edge.clone(),
                        out_edge: k.out_edge.clone(),
                        value,
                    })
                    .collect(),
            ),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("assignment serializes")
    }

    /// Materializes a file against `net`: explicit coefficients must cover
    /// every required key; a bare seed is redrawn.
    pub fn from_file(file: AssignmentFile, net: &Network) -> Result<Self> {
        if let Some(name) = &file.prng {
            if name != PRNG_NAME {
                return Err(Error::InvalidAssignment(format!("unsupported generator {name}, expected {PRNG_NAME}")));
            }
        }
        let a = match (file.coeffs, file.seed) {
            (Some(records), seed) => {
                let mut a = Self::new(net.field());
                a.seed = seed;
                for r in records {
                    let v = net.require_node(&r.node)?;
                    net.require_edge(&r.in_edge)?;
                    if let Some(e) = &r.out_edge {
                        net.require_edge(e)?;
                    }
                    if !net.is_coding_node(v) {
                        return Err(Error::NotCodingNode(r.node));
                    }
                    a.insert(CoeffKey { node: r.node, in_edge: r.in_edge, out_edge: r.out_edge }, r.value)?;
                }
                a
            }
            (None, Some(seed)) => assign_random(net, seed),
            (None, None) => return Err(Error::InvalidAssignment("needs either coeffs or seed".into())),
        };
        a.check_complete(net)?;
        Ok(a)
    }

    pub fn from_json(text: &str, net: &Network) -> Result<Self> {
        Self::from_file(serde_json::from_str(text)?, net)
    }
}

/// Draws every required coefficient independently and uniformly from the
/// field, in [`required_keys`] order.
pub fn assign_random(net: &Network, seed: u64) -> CodingAssignment {
    let field = net.field();
    let mut rng = Prng::from_seed(seed);
    let mut a = CodingAssignment::new(field);
    a.seed = Some(seed);
    for key in required_keys(net) {
        a.coeffs.insert(key, rng.below(field.order() as u64) as u32);
    }
    a
}

/// The `d_out × d_in` coefficient matrix of node `id`: row `ρ` holds the
/// weights of out-edge `ρ`, column `δ` those of in-edge `δ`.
pub fn node_matrix(net: &Network, asg: &CodingAssignment, id: &str) -> Result<FieldMatrix> {
    let v = net.require_node(id)?;
    match net.node(v).kind {
        NodeKind::Siso => return Ok(FieldMatrix::identity(net.field(), 1)),
        NodeKind::Intermediate => {}
        _ => return Err(Error::NotCodingNode(id.to_string())),
    }
    let ins = net.in_edges(v);
    let mut m = FieldMatrix::zeros(net.field(), net.out_degree(v), ins.len());
    let mut row = 0;
    for group in net.output_groups(v) {
        for _ in &group {
            for (j, &e) in ins.iter().enumerate() {
                m.set(row, j, asg.coefficient(net, v, e, &group)?);
            }
            row += 1;
        }
    }
    Ok(m)
}

/// A channel matrix with the meaning of its rows and columns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChannelMatrix {
    /// Row labels: layer-`L` node ids, or destination tap edge ids.
    pub rows: Vec<String>,
    /// Column labels: the source out-edges, i.e. the symbols `x_j`.
    pub cols: Vec<String>,
    #[serde(serialize_with = "serialize_matrix")]
    pub matrix: FieldMatrix,
}

fn serialize_matrix<S: serde::Serializer>(m: &FieldMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    m.to_rows().serialize(s)
}

fn check_layer_index(lnet: &LayeredNetwork, l: usize) -> Result<()> {
    if l == 0 || l >= lnet.depth() {
        return Err(Error::NotLayered(format!("no interlayer matrix A_{{{},{}}} for L = {}", l + 1, l, lnet.depth())));
    }
    Ok(())
}

/// `A_{l+1,l}`: entry `(i, j)` is the coefficient node `i` of layer `l + 1`
/// applies to the edge from node `j` of layer `l`, zero without an edge.
pub fn interlayer_matrix(lnet: &LayeredNetwork, asg: &CodingAssignment, l: usize) -> Result<FieldMatrix> {
    lnet.check_variant1()?;
    check_layer_index(lnet, l)?;
    let net = lnet.network();
    let (upper, lower) = (lnet.layer(l + 1), lnet.layer(l));
    let mut m = FieldMatrix::zeros(net.field(), upper.len(), lower.len());
    for (i, &v) in upper.iter().enumerate() {
        for &e in net.in_edges(v) {
            let j = lnet.position(net.edge(e).from).expect("edge from the previous layer");
            m.set(i, j, asg.coefficient(net, v, e, &[])?);
        }
    }
    Ok(m)
}

/// Zero/nonzero pattern of `A_{l+1,l}`, independent of coefficients.
pub fn interlayer_pattern(lnet: &LayeredNetwork, l: usize) -> Result<Vec<Vec<bool>>> {
    check_layer_index(lnet, l)?;
    let net = lnet.network();
    let (upper, lower) = (lnet.layer(l + 1), lnet.layer(l));
    let mut p = vec![vec![false; lower.len()]; upper.len()];
    for (i, &v) in upper.iter().enumerate() {
        for &e in net.in_edges(v) {
            p[i][lnet.position(net.edge(e).from).expect("edge from the previous layer")] = true;
        }
    }
    Ok(p)
}

fn source_labels(net: &Network) -> Vec<String> {
    net.out_edges(net.source()).iter().map(|&e| net.edge(e).id.clone()).collect()
}

/// `A = A_{L,L-1} ⋯ A_{2,1}`, the identity when `L = 1`.
pub fn overall_matrix(lnet: &LayeredNetwork, asg: &CodingAssignment) -> Result<ChannelMatrix> {
    lnet.check_variant1()?;
    let net = lnet.network();
    let mut a = FieldMatrix::identity(net.field(), lnet.layer(1).len());
    for l in 1..lnet.depth() {
        a = interlayer_matrix(lnet, asg, l)?.mul(&a)?;
    }
    let rows = lnet.layer(lnet.depth()).iter().map(|&v| net.node(v).id.clone()).collect();
    Ok(ChannelMatrix { rows, cols: source_labels(net), matrix: a })
}

/// `A_k`: the rows of `A` read by destination `k`, in tap order.
pub fn individual_matrix(lnet: &LayeredNetwork, asg: &CodingAssignment, k: usize) -> Result<ChannelMatrix> {
    let net = lnet.network();
    let taps = &net.destination(k)?.taps;
    let a = overall_matrix(lnet, asg)?;
    let rows = taps.iter().map(|&e| net.edge(e).id.clone()).collect();
    Ok(ChannelMatrix { rows, cols: a.cols, matrix: a.matrix.select_rows(&lnet.tap_rows(k)?) })
}

/// Symbols observed in one run of the network.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Simulation {
    /// `y_k` for each destination, in destination order.
    pub received: Vec<Vec<u32>>,
    /// Symbol carried by each edge, in edge order.
    pub edges: Vec<u32>,
    /// Symbols emitted by each node, one per output group.
    pub nodes: Vec<Vec<u32>>,
}

struct Engine<'a> {
    net: &'a Network,
    asg: &'a CodingAssignment,
    groups: Vec<Vec<Vec<usize>>>,
    state: Simulation,
}

impl<'a> Engine<'a> {
    fn new(net: &'a Network, asg: &'a CodingAssignment, x: &[u32]) -> Result<Self> {
        let f = net.field();
        if asg.field() != f {
            return Err(GfError::FieldMismatch.into());
        }
        if x.len() != net.source_symbols() {
            return Err(Error::SymbolCount { expected: net.source_symbols(), got: x.len() });
        }
        if let Some(&bad) = x.iter().find(|&&s| !f.contains(s)) {
            return Err(GfError::OutOfRange { value: bad, order: f.order() }.into());
        }
        let groups = (0..net.nodes().len())
            .map(|v| match net.node(v).kind {
                NodeKind::Source => net.out_edges(v).iter().map(|&e| vec![e]).collect(),
                NodeKind::Destination => Vec::new(),
                _ => net.output_groups(v),
            })
            .collect();
        let mut state = Simulation {
            received: vec![Vec::new(); net.destinations().len()],
            edges: vec![0; net.edges().len()],
            nodes: vec![Vec::new(); net.nodes().len()],
        };
        state.nodes[net.source()] = x.to_vec();
        Ok(Engine { net, asg, groups, state })
    }

    /// Computes `v`'s outputs from the symbols now on its in-edges.
    fn fire(&mut self, v: usize) -> Result<()> {
        let (net, f) = (self.net, self.net.field());
        match net.node(v).kind {
            NodeKind::Source => {}
            NodeKind::Destination => {}
            _ => {
                let mut out = Vec::with_capacity(self.groups[v].len());
                for group in &self.groups[v] {
                    let mut s = 0;
                    for &e in net.in_edges(v) {
                        s = f.add(s, f.mul(self.asg.coefficient(net, v, e, group)?, self.state.edges[e]));
                    }
                    out.push(s);
                }
                self.state.nodes[v] = out;
            }
        }
        for (g, group) in self.groups[v].iter().enumerate() {
            for &e in group {
                self.state.edges[e] = self.state.nodes[v][g];
            }
        }
        Ok(())
    }

    fn finish(mut self) -> Simulation {
        for (k, d) in self.net.destinations().iter().enumerate() {
            self.state.received[k] = d.taps.iter().map(|&e| self.state.edges[e]).collect();
        }
        self.state
    }
}

/// Propagates `x` through `net` in topological order. Works for any
/// validated network; nodes without inputs emit 0.
pub fn simulate(net: &Network, asg: &CodingAssignment, x: &[u32]) -> Result<Simulation> {
    let mut engine = Engine::new(net, asg, x)?;
    for v in net.topo_order()? {
        engine.fire(v)?;
    }
    Ok(engine.finish())
}

/// Result of a tick-driven run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TimedSimulation {
    pub result: Simulation,
    /// Ticks at which each node's inputs arrived.
    pub arrivals: Vec<BTreeSet<u64>>,
    /// Tick at which each node emitted its outputs.
    pub fired: Vec<u64>,
}

impl TimedSimulation {
    /// Ticks node `v` must hold its earliest input before it can code.
    pub fn buffer_depth(&self, v: usize) -> u64 {
        match (self.arrivals[v].first(), self.arrivals[v].last()) {
            (Some(a), Some(b)) => b - a,
            _ => 0,
        }
    }

    pub fn max_buffer_depth(&self) -> u64 {
        (0..self.arrivals.len()).map(|v| self.buffer_depth(v)).max().unwrap_or(0)
    }

    /// True when every node receives all its inputs in the same tick.
    pub fn synchronized(&self) -> bool {
        self.arrivals.iter().all(|a| a.len() <= 1)
    }
}

/// Runs the network on a discrete clock: the source emits at tick 0, every
/// edge delays by one tick, and a node buffers early inputs and fires in
/// the tick its last input arrives.
pub fn simulate_timed(net: &Network, asg: &CodingAssignment, x: &[u32]) -> Result<TimedSimulation> {
    net.topo_order()?;
    let mut engine = Engine::new(net, asg, x)?;
    let n = net.nodes().len();
    let mut arrivals = vec![BTreeSet::new(); n];
    let mut fired = vec![0u64; n];
    let mut waiting: Vec<usize> = (0..n).map(|v| net.in_degree(v)).collect();
    let mut schedule: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    let mut emit = |engine: &mut Engine, v: usize, tick: u64, schedule: &mut BTreeMap<u64, Vec<usize>>| -> Result<()> {
        engine.fire(v)?;
        fired[v] = tick;
        if !net.out_edges(v).is_empty() {
            schedule.entry(tick + 1).or_default().extend_from_slice(net.out_edges(v));
        }
        Ok(())
    };
    for v in 0..n {
        if waiting[v] == 0 {
            emit(&mut engine, v, 0, &mut schedule)?;
        }
    }
    while let Some((tick, edges)) = schedule.pop_first() {
        for e in edges {
            let to = net.edge(e).to;
            arrivals[to].insert(tick);
            waiting[to] -= 1;
            if waiting[to] == 0 {
                emit(&mut engine, to, tick, &mut schedule)?;
            }
        }
    }
    Ok(TimedSimulation { result: engine.finish(), arrivals, fired })
}

/// `A_k` assembled column by column from runs on the unit vectors.
pub fn simulated_matrix(net: &Network, asg: &CodingAssignment, k: usize) -> Result<FieldMatrix> {
    let rows = net.destination(k)?.taps.len();
    let n = net.source_symbols();
    let mut m = FieldMatrix::zeros(net.field(), rows, n);
    for j in 0..n {
        let mut x = vec![0; n];
        x[j] = 1;
        let y = &simulate(net, asg, &x)?.received[k];
        for (i, &s) in y.iter().enumerate() {
            m.set(i, j, s);
        }
    }
    Ok(m)
}

/// Whether destination `k` can decode: `rank(A_k) = n`.
pub fn is_valid(net: &Network, asg: &CodingAssignment, k: usize) -> Result<bool> {
    Ok(simulated_matrix(net, asg, k)?.rank() == net.source_symbols())
}
