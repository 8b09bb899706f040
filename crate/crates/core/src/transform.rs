//! Graph rewrites: splitting multi-output nodes into Variant-I auxiliary
//! nodes, and layering by SISO relay insertion.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::netgraph::{Network, NetworkFile, Node, NodeKind, Variant};

/// Maps node and edge ids of a derived network back to the network it was
/// derived from. Inserted relays have no node origin.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Provenance {
    pub nodes: BTreeMap<String, String>,
    pub edges: BTreeMap<String, String>,
}

impl Provenance {
    pub fn identity(net: &Network) -> Self {
        Provenance {
            nodes: net.nodes().iter().map(|n| (n.id.clone(), n.id.clone())).collect(),
            edges: net.edges().iter().map(|e| (e.id.clone(), e.id.clone())).collect(),
        }
    }

    pub fn node_origin(&self, id: &str) -> Option<&str> {
        self.nodes.get(id).map(String::as_str)
    }

    pub fn edge_origin(&self, id: &str) -> Option<&str> {
        self.edges.get(id).map(String::as_str)
    }

    /// `outer` maps ids of a later network into this one's domain; the result
    /// maps them straight to this one's origin.
    pub fn compose(&self, outer: &Provenance) -> Provenance {
        let chain = |m: &BTreeMap<String, String>, inner: &BTreeMap<String, String>| {
            m.iter().filter_map(|(k, v)| inner.get(v).map(|o| (k.clone(), o.clone()))).collect()
        };
        Provenance { nodes: chain(&outer.nodes, &self.nodes), edges: chain(&outer.edges, &self.edges) }
    }
}

struct IdPool(HashSet<String>);

impl IdPool {
    fn new<'a>(ids: impl Iterator<Item = &'a str>) -> Self {
        IdPool(ids.map(str::to_string).collect())
    }

    fn fresh(&mut self, base: String) -> String {
        let mut id = base;
        while self.0.contains(&id) {
            id.push('\'');
        }
        self.0.insert(id.clone());
        id
    }
}

/// Correspondence between a network and its Variant-I form.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ConversionMap {
    /// Original node id to the node ids replacing it (itself when unsplit).
    pub nodes: BTreeMap<String, Vec<String>>,
    /// Original edge id to every edge derived from it.
    pub edges: BTreeMap<String, Vec<String>>,
    /// Pass-through relays placed between the source and a split node.
    pub inserted: Vec<String>,
}

impl ConversionMap {
    pub fn provenance(&self) -> Provenance {
        let mut p = Provenance::default();
        for (orig, new) in &self.nodes {
            for n in new {
                p.nodes.insert(n.clone(), orig.clone());
            }
        }
        for (orig, new) in &self.edges {
            for e in new {
                p.edges.insert(e.clone(), orig.clone());
            }
        }
        p
    }
}

/// Rewrites every Variant-II and hybrid node into one Variant-I auxiliary
/// node per output group. Each auxiliary node receives a copy of every
/// input edge of the node it replaces and owns that group's out-edges.
///
/// Source edges cannot be copied without changing the number of source
/// symbols, so a split node fed directly by the source gets a relay on
/// that edge and the copies leave the relay instead. The relay is a
/// Variant-I node whose only input is a source edge, so it forwards its
/// symbol unchanged. A SISO relay feeding a split node becomes a Variant-I
/// pass-through node for the same reason.
pub fn to_variant1(net: &Network) -> Result<(Network, ConversionMap)> {
    let report = net.validate();
    if !report.is_ok() {
        return Err(Error::InvalidNetwork(report));
    }
    let mut node_ids = IdPool::new(net.nodes().iter().map(|n| n.id.as_str()));
    let mut edge_ids = IdPool::new(net.edges().iter().map(|e| e.id.as_str()));
    let mut map = ConversionMap::default();

    // aux node per out-edge, for split nodes only
    let mut owner_of_edge: BTreeMap<usize, String> = BTreeMap::new();
    let mut aux_of: Vec<Vec<String>> = vec![Vec::new(); net.nodes().len()];
    let mut relay_of_edge: BTreeMap<usize, String> = BTreeMap::new();
    let mut nodes = Vec::new();
    let splits = |v: usize| {
        let n = net.node(v);
        n.kind == NodeKind::Intermediate && n.variant != Variant::Variant1 && !net.output_groups(v).is_empty()
    };

    for (v, node) in net.nodes().iter().enumerate() {
        let groups = net.output_groups(v);
        if !splits(v) {
            let feeds_split = node.kind == NodeKind::Siso && net.out_edges(v).iter().any(|&e| splits(net.edge(e).to));
            let (kind, variant) = match node.kind {
                NodeKind::Intermediate => (NodeKind::Intermediate, Variant::Variant1),
                NodeKind::Siso if feeds_split => (NodeKind::Intermediate, Variant::Variant1),
                k => (k, node.variant),
            };
            nodes.push(Node::new(node.id.clone(), kind, variant));
            map.nodes.insert(node.id.clone(), vec![node.id.clone()]);
            continue;
        }
        for &e in net.in_edges(v) {
            if net.edge(e).from == net.source() {
                let relay = node_ids.fresh(format!("{}~relay", net.edge(e).id));
                nodes.push(Node::new(relay.clone(), NodeKind::Intermediate, Variant::Variant1));
                map.inserted.push(relay.clone());
                relay_of_edge.insert(e, relay);
            }
        }
        for (g, group) in groups.iter().enumerate() {
            let aux = node_ids.fresh(format!("{}#{}", node.id, g + 1));
            nodes.push(Node::new(aux.clone(), NodeKind::Intermediate, Variant::Variant1));
            for &e in group {
                owner_of_edge.insert(e, aux.clone());
            }
            aux_of[v].push(aux);
        }
        map.nodes.insert(node.id.clone(), aux_of[v].clone());
    }

    let mut edges = Vec::new();
    for (i, e) in net.edges().iter().enumerate() {
        let tail = owner_of_edge.get(&i).cloned().unwrap_or_else(|| net.node(e.from).id.clone());
        let mut derived = Vec::new();
        if aux_of[e.to].is_empty() {
            edges.push((e.id.clone(), tail, net.node(e.to).id.clone()));
            derived.push(e.id.clone());
        } else {
            let tail = match relay_of_edge.get(&i) {
                Some(relay) => {
                    edges.push((e.id.clone(), tail, relay.clone()));
                    derived.push(e.id.clone());
                    relay.clone()
                }
                None => tail,
            };
            for (j, aux) in aux_of[e.to].iter().enumerate() {
                let id = edge_ids.fresh(format!("{}#{}", e.id, j + 1));
                edges.push((id.clone(), tail.clone(), aux.clone()));
                derived.push(id);
            }
        }
        map.edges.insert(e.id.clone(), derived);
    }

    let dests: Vec<String> = net.destinations().iter().map(|d| net.node(d.node).id.clone()).collect();
    let out = Network::new(net.field().clone(), nodes, edges, &net.node(net.source()).id, &dests)?;
    Ok((out.validated()?, map))
}

/// A network whose intermediate and SISO nodes sit in layers `1..=L` with
/// edges only between adjacent layers. The source feeds layer 1 and every
/// destination tap leaves layer `L`.
#[derive(Debug, Clone)]
pub struct LayeredNetwork {
    network: Network,
    layer_of: Vec<usize>,
    layers: Vec<Vec<usize>>,
    inserted: Vec<String>,
    provenance: Provenance,
    siso_origin: BTreeMap<String, String>,
}

impl LayeredNetwork {
    /// Checks the layering invariants for an explicit layer assignment.
    ///
    /// Within layer 1 nodes are ordered by the source edge feeding them, so
    /// column `j` of every channel matrix is source symbol `x_j`. Other
    /// layers follow node declaration order.
    pub fn from_parts(network: Network, layers: &BTreeMap<String, usize>, inserted: Vec<String>) -> Result<Self> {
        let net = network.validated()?;
        let bad = |msg: String| Err(Error::NotLayered(msg));
        let mut layer_of = vec![0usize; net.nodes().len()];
        for (id, &l) in layers {
            let v = net.require_node(id)?;
            if matches!(net.node(v).kind, NodeKind::Source | NodeKind::Destination) {
                return bad(format!("{id} is a terminal and cannot carry a layer"));
            }
            if l == 0 {
                return bad(format!("{id} has layer 0; layers start at 1"));
            }
            layer_of[v] = l;
        }
        let depth = layer_of.iter().copied().max().unwrap_or(0);
        if depth == 0 {
            return bad("no layered nodes".into());
        }
        for (v, n) in net.nodes().iter().enumerate() {
            if matches!(n.kind, NodeKind::Intermediate | NodeKind::Siso) && layer_of[v] == 0 {
                return bad(format!("{} has no layer", n.id));
            }
        }
        for e in net.edges() {
            let (from, to) = (net.node(e.from), net.node(e.to));
            let ok = match (from.kind, to.kind) {
                (NodeKind::Source, NodeKind::Destination) => false,
                (NodeKind::Source, _) => layer_of[e.to] == 1,
                (_, NodeKind::Destination) => layer_of[e.from] == depth,
                _ => layer_of[e.to] == layer_of[e.from] + 1,
            };
            if !ok {
                return bad(format!("edge {} ({} -> {}) does not join adjacent layers", e.id, from.id, to.id));
            }
        }
        let mut by_layer = vec![Vec::new(); depth];
        for &e in net.out_edges(net.source()) {
            by_layer[0].push(net.edge(e).to);
        }
        for (v, &l) in layer_of.iter().enumerate() {
            if l == 0 {
                continue;
            }
            if l == 1 && net.in_degree(v) != 1 {
                return bad(format!("layer-1 node {} must have exactly one source edge", net.node(v).id));
            }
            if net.in_degree(v) == 0 {
                return bad(format!("{} at layer {l} has no inputs", net.node(v).id));
            }
            if l > 1 {
                by_layer[l - 1].push(v);
            }
        }
        if let Some(l) = by_layer.iter().position(Vec::is_empty) {
            return bad(format!("layer {} is empty", l + 1));
        }
        let provenance = Provenance::identity(&net);
        Ok(LayeredNetwork { network: net, layer_of, layers: by_layer, inserted, provenance, siso_origin: BTreeMap::new() })
    }

    pub fn network(&self) -> &Network {
        &self.network
    }

    /// Number of layers `L`.
    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    /// Nodes of layer `l` (1-based), in row/column order.
    pub fn layer(&self, l: usize) -> &[usize] {
        &self.layers[l - 1]
    }

    pub fn layer_sizes(&self) -> Vec<usize> {
        self.layers.iter().map(Vec::len).collect()
    }

    /// Layer of node `v`, `None` for the source and destinations.
    pub fn layer_of(&self, v: usize) -> Option<usize> {
        Some(self.layer_of[v]).filter(|&l| l > 0)
    }

    /// Position of `v` within its layer.
    pub fn position(&self, v: usize) -> Option<usize> {
        let l = self.layer_of(v)?;
        self.layers[l - 1].iter().position(|&u| u == v)
    }

    pub fn inserted(&self) -> &[String] {
        &self.inserted
    }

    /// Maps ids back to the network this representation was built from.
    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// Original edge subdivided by each inserted SISO relay.
    pub fn siso_origin(&self) -> &BTreeMap<String, String> {
        &self.siso_origin
    }

    pub(crate) fn with_history(mut self, from: &LayeredNetwork) -> Self {
        self.provenance = from.provenance.clone();
        self.siso_origin = from.siso_origin.clone();
        self
    }

    /// Fails with `NotVariant1` naming the first multi-output node.
    pub fn check_variant1(&self) -> Result<()> {
        for n in self.network.nodes() {
            if n.kind == NodeKind::Intermediate && n.variant != Variant::Variant1 {
                return Err(Error::NotVariant1(n.id.clone()));
            }
        }
        Ok(())
    }

    /// Rows of layer `L` read by destination `k`, in tap order.
    pub fn tap_rows(&self, k: usize) -> Result<Vec<usize>> {
        let d = self.network.destination(k)?;
        Ok(d.taps
            .iter()
            .map(|&e| self.position(self.network.edge(e).from).expect("taps leave layer L"))
            .collect())
    }

    pub fn layer_map(&self) -> BTreeMap<String, usize> {
        (0..self.network.nodes().len())
            .filter_map(|v| self.layer_of(v).map(|l| (self.network.node(v).id.clone(), l)))
            .collect()
    }

    pub fn to_file(&self) -> NetworkFile {
        let mut f = self.network.to_file();
        f.layers = Some(self.layer_map());
        f.inserted = Some(self.inserted.clone());
        f
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("network serializes")
    }

    pub fn from_file(mut file: NetworkFile) -> Result<Self> {
        let layers = file.layers.take().ok_or_else(|| Error::NotLayered("file has no layer map".into()))?;
        let inserted = file.inserted.take().unwrap_or_default();
        Self::from_parts(file.into_network()?, &layers, inserted)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_file(serde_json::from_str(text)?)
    }
}

/// Assigns each non-terminal node its longest distance from the source and
/// subdivides every edge that skips layers with SISO relays, so that every
/// source-to-destination path has `L + 1` edges. Destination taps are
/// padded up to layer `L`.
///
/// An edge keeps its id on its last segment, so coefficients keyed by
/// (receiving node, in-edge) remain valid for original nodes. Relays are
/// named `"<edge>~<k>"` after the edge they subdivide.
pub fn layer(net: &Network) -> Result<LayeredNetwork> {
    let report = net.validate();
    if !report.is_ok() {
        return Err(Error::InvalidNetwork(report));
    }
    let reach = net.reachable_from_source();
    if let Some(v) = reach.iter().position(|r| !r) {
        return Err(Error::Unreachable(net.node(v).id.clone()));
    }
    let order = net.topo_order()?;
    let terminal = |v: usize| matches!(net.node(v).kind, NodeKind::Source | NodeKind::Destination);
    let mut dist = vec![0usize; net.nodes().len()];
    for &v in &order {
        if terminal(v) {
            continue;
        }
        dist[v] = net.in_edges(v).iter().map(|&e| dist[net.edge(e).from] + 1).max().unwrap_or(1);
    }
    let depth = (0..net.nodes().len()).filter(|&v| !terminal(v)).map(|v| dist[v]).max().unwrap_or(0).max(1);
    let target = |v: usize| if net.node(v).kind == NodeKind::Destination { depth + 1 } else { dist[v] };

    let mut node_ids = IdPool::new(net.nodes().iter().map(|n| n.id.as_str()));
    let mut edge_ids = IdPool::new(net.edges().iter().map(|e| e.id.as_str()));
    let mut relays_by_layer: Vec<Vec<String>> = vec![Vec::new(); depth + 1];
    let mut edges = Vec::new();
    let mut inserted = Vec::new();
    let mut provenance = Provenance::identity(net);
    provenance.edges.clear();
    let mut siso_origin = BTreeMap::new();
    let mut layers = BTreeMap::new();

    for e in net.edges() {
        let start = dist[e.from];
        let gap = target(e.to) - start - 1;
        let mut tail = net.node(e.from).id.clone();
        for k in 1..=gap {
            let relay = node_ids.fresh(format!("{}~{k}", e.id));
            let seg = edge_ids.fresh(format!("{}~{k}", e.id));
            edges.push((seg.clone(), tail, relay.clone()));
            provenance.edges.insert(seg, e.id.clone());
            siso_origin.insert(relay.clone(), e.id.clone());
            layers.insert(relay.clone(), start + k);
            relays_by_layer[start + k].push(relay.clone());
            inserted.push(relay.clone());
            tail = relay;
        }
        edges.push((e.id.clone(), tail, net.node(e.to).id.clone()));
        provenance.edges.insert(e.id.clone(), e.id.clone());
    }

    // declaration order: source, then layer by layer (original nodes before
    // relays), then destinations
    let mut nodes: Vec<Node> = vec![net.node(net.source()).clone()];
    for l in 1..=depth {
        for (v, n) in net.nodes().iter().enumerate() {
            if !terminal(v) && dist[v] == l {
                nodes.push(n.clone());
                layers.insert(n.id.clone(), l);
            }
        }
        for r in &relays_by_layer[l] {
            nodes.push(Node::new(r.clone(), NodeKind::Siso, Variant::Variant1));
        }
    }
    nodes.extend(net.nodes().iter().filter(|n| n.kind == NodeKind::Destination).cloned());

    let dests: Vec<String> = net.destinations().iter().map(|d| net.node(d.node).id.clone()).collect();
    let out = Network::new(net.field().clone(), nodes, edges, &net.node(net.source()).id, &dests)?;
    let mut lnet = LayeredNetwork::from_parts(out, &layers, inserted)?;
    lnet.provenance = provenance;
    lnet.siso_origin = siso_origin;
    Ok(lnet)
}

/// The layered Variant-I representation of `net`, with provenance back to
/// `net`.
///
/// The default order layers first, converts, and re-layers (needed only
/// when a split node hangs directly off the source). With
/// `convert_first` the network is converted and then layered.
pub fn layered_variant1(net: &Network, convert_first: bool) -> Result<LayeredNetwork> {
    let (mut out, prov) = if convert_first {
        let (conv, map) = to_variant1(net)?;
        let l = layer(&conv)?;
        let prov = map.provenance().compose(l.provenance());
        (l, prov)
    } else {
        let first = layer(net)?;
        let (conv, map) = to_variant1(first.network())?;
        let second = layer(&conv)?;
        let prov = first.provenance().compose(&map.provenance()).compose(second.provenance());
        (second, prov)
    };
    out.inserted = out
        .network
        .nodes()
        .iter()
        .filter(|n| matches!(n.kind, NodeKind::Siso | NodeKind::Intermediate) && !prov.nodes.contains_key(&n.id))
        .map(|n| n.id.clone())
        .collect();
    out.provenance = prov;
    Ok(out)
}

/// Coding-point count and their total in-degree; the layering procedure
/// does work proportional to `coding_points * average_in_degree`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LayeringCost {
    pub coding_points: usize,
    pub in_degree_sum: usize,
}

impl LayeringCost {
    /// Mean in-degree over coding points, 0 when there are none.
    pub fn average_in_degree(&self) -> f64 {
        if self.coding_points == 0 {
            0.0
        } else {
            self.in_degree_sum as f64 / self.coding_points as f64
        }
    }
}

pub fn layering_cost(net: &Network) -> LayeringCost {
    let cps = net.coding_points();
    LayeringCost { coding_points: cps.len(), in_degree_sum: cps.iter().map(|&v| net.in_degree(v)).sum() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldSpec;
    use crate::netgraph::NetworkBuilder;

    fn f7() -> FieldSpec {
        FieldSpec::prime(7).unwrap()
    }

    #[test]
    fn variant1_network_is_unchanged() {
        let net = NetworkBuilder::new(&f7())
            .source("S")
            .node("a", Variant::Variant1)
            .node("b", Variant::Variant1)
            .destination("D")
            .edge("S", "a")
            .edge("S", "b")
            .edge("a", "D")
            .edge("b", "D")
            .build()
            .unwrap();
        let (out, map) = to_variant1(&net).unwrap();
        assert_eq!(out.to_json(), net.to_json());
        assert!(map.nodes.iter().all(|(k, v)| v == std::slice::from_ref(k)));
        assert!(map.inserted.is_empty());
    }

    #[test]
    fn two_by_two_variant2_node_splits_into_two() {
        let net = NetworkBuilder::new(&f7())
            .source("S")
            .node("a", Variant::Variant1)
            .node("b", Variant::Variant1)
            .node("v", Variant::Variant2)
            .destination("D")
            .edge("S", "a")
            .edge("S", "b")
            .edge("a", "v")
            .edge("b", "v")
            .edge_with_id("o1", "v", "D")
            .node("c", Variant::Variant1)
            .edge_with_id("o2", "v", "c")
            .edge("c", "D")
            .build()
            .unwrap();
        let (out, map) = to_variant1(&net).unwrap();
        assert_eq!(map.nodes["v"], vec!["v#1", "v#2"]);
        for aux in ["v#1", "v#2"] {
            let i = out.node_idx(aux).unwrap();
            let ins: Vec<&str> = out.in_edges(i).iter().map(|&e| out.node(out.edge(e).from).id.as_str()).collect();
            assert_eq!(ins, ["a", "b"]);
            assert_eq!(out.out_degree(i), 1);
        }
        assert_eq!(out.edge(out.edge_idx("o1").unwrap()).from, out.node_idx("v#1").unwrap());
        assert_eq!(out.edge(out.edge_idx("o2").unwrap()).from, out.node_idx("v#2").unwrap());
    }

    #[test]
    fn split_node_fed_by_source_gets_a_relay() {
        let net = NetworkBuilder::new(&f7())
            .source("S")
            .node("v", Variant::Variant2)
            .destination("D")
            .destination("E")
            .edge_with_id("s", "S", "v")
            .edge("v", "D")
            .edge("v", "E")
            .build()
            .unwrap();
        let (out, map) = to_variant1(&net).unwrap();
        assert_eq!(map.inserted, vec!["s~relay"]);
        assert_eq!(out.source_symbols(), 1);
        assert_eq!(map.edges["s"], vec!["s", "s#1", "s#2"]);
    }

    #[test]
    fn chain_needs_no_relays() {
        let net = NetworkBuilder::new(&f7())
            .source("S")
            .node("a", Variant::Variant1)
            .destination("D")
            .edge("S", "a")
            .edge("a", "D")
            .build()
            .unwrap();
        let l = layer(&net).unwrap();
        assert!(l.inserted().is_empty());
        assert_eq!(l.depth(), 1);
        assert_eq!(layering_cost(&net), LayeringCost { coding_points: 0, in_degree_sum: 0 });
        assert_eq!(layering_cost(&net).average_in_degree(), 0.0);
    }

    #[test]
    fn direct_source_to_destination_edge_gets_one_relay() {
        let net = NetworkBuilder::new(&f7()).source("S").destination("D").edge("S", "D").build().unwrap();
        let l = layer(&net).unwrap();
        assert_eq!(l.depth(), 1);
        assert_eq!(l.inserted(), ["S->D~1"]);
    }

    #[test]
    fn skip_edge_is_subdivided() {
        let net = NetworkBuilder::new(&f7())
            .source("S")
            .node("a", Variant::Variant1)
            .node("b", Variant::Variant1)
            .destination("D")
            .edge("S", "a")
            .edge("a", "b")
            .edge("S", "b")
            .edge("b", "D")
            .build()
            .unwrap();
        let l = layer(&net).unwrap();
        assert_eq!(l.inserted(), ["S->b~1"]);
        assert_eq!(l.layer_sizes(), vec![2, 1]);
        assert_eq!(l.siso_origin()["S->b~1"], "S->b");
        // the last segment keeps the original id
        let n = l.network();
        let e = n.edge(n.edge_idx("S->b").unwrap());
        assert_eq!(n.node(e.from).id, "S->b~1");
        assert_eq!(layering_cost(&net), LayeringCost { coding_points: 1, in_degree_sum: 2 });
    }

    #[test]
    fn unreachable_destination_is_rejected() {
        let net = NetworkBuilder::new(&f7())
            .source("S")
            .node("x", Variant::Variant1)
            .destination("D")
            .destination("E")
            .edge("S", "D")
            .edge("x", "E")
            .build()
            .unwrap();
        assert!(matches!(layer(&net), Err(Error::Unreachable(id)) if id == "x"));
    }

    #[test]
    fn from_parts_rejects_bad_layers() {
        let net = NetworkBuilder::new(&f7())
            .source("S")
            .node("a", Variant::Variant1)
            .node("b", Variant::Variant1)
            .destination("D")
            .edge("S", "a")
            .edge("a", "b")
            .edge("S", "b")
            .edge("b", "D")
            .build()
            .unwrap();
        let layers = BTreeMap::from([("a".to_string(), 1), ("b".to_string(), 2)]);
        assert!(matches!(LayeredNetwork::from_parts(net, &layers, vec![]), Err(Error::NotLayered(_))));
    }

    #[test]
    fn provenance_composes() {
        let inner = Provenance {
            nodes: BTreeMap::from([("m".into(), "o".into())]),
            edges: BTreeMap::from([("em".into(), "eo".into())]),
        };
        let outer = Provenance {
            nodes: BTreeMap::from([("t".into(), "m".into()), ("r".into(), "gone".into())]),
            edges: BTreeMap::from([("et".into(), "em".into())]),
        };
        let p = inner.compose(&outer);
        assert_eq!(p.node_origin("t"), Some("o"));
        assert_eq!(p.node_origin("r"), None);
        assert_eq!(p.edge_origin("et"), Some("eo"));
    }
}
