//! Directed acyclic networks with one source and one or more destinations.
//!
//! Every edge carries one field symbol per use and all edges have the same
//! delay. A destination's receive symbols are read from its incoming edges
//! ("taps") in edge-list order.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::FieldSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Source,
    Intermediate,
    Siso,
    Destination,
}

/// How a node turns its inputs into outputs.
///
/// `Variant1` emits one symbol on every out-edge, `Variant2` an individual
/// symbol per out-edge, and `Hybrid(h)` emits `h` distinct symbols, one per
/// group of out-edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    #[default]
    Variant1,
    Variant2,
    Hybrid(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Node {
    pub id: String,
    pub kind: NodeKind,
    #[serde(default)]
    pub variant: Variant,
}

impl Node {
    pub fn new(id: impl Into<String>, kind: NodeKind, variant: Variant) -> Self {
        Node { id: id.into(), kind, variant }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub from: usize,
    pub to: usize,
}

/// A destination and its ordered taps (indices of its incoming edges).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DestinationSpec {
    pub node: usize,
    pub taps: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum Violation {
    CycleDetected,
    ParallelEdge { from: String, to: String },
    SourceKind { node: String },
    SourceCount { count: usize },
    SourceHasIncoming { node: String },
    DestinationHasOutgoing { node: String },
    DestinationWithoutTaps { node: String },
    DestinationNotListed { node: String },
    NotADestination { node: String },
    NoDestinations,
    HybridOutOfRange { node: String, h: usize, out_degree: usize },
    SisoDegree { node: String, in_degree: usize, out_degree: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::CycleDetected => write!(f, "CycleDetected"),
            Violation::ParallelEdge { from, to } => write!(f, "ParallelEdge({from} -> {to})"),
            Violation::SourceKind { node } => write!(f, "SourceKind({node} is not of kind source)"),
            Violation::SourceCount { count } => write!(f, "SourceCount({count} source nodes)"),
            Violation::SourceHasIncoming { node } => write!(f, "SourceHasIncoming({node})"),
            Violation::DestinationHasOutgoing { node } => write!(f, "DestinationHasOutgoing({node})"),
            Violation::DestinationWithoutTaps { node } => write!(f, "DestinationWithoutTaps({node})"),
            Violation::DestinationNotListed { node } => write!(f, "DestinationNotListed({node})"),
            Violation::NotADestination { node } => write!(f, "NotADestination({node})"),
            Violation::NoDestinations => write!(f, "NoDestinations"),
            Violation::HybridOutOfRange { node, h, out_degree } => {
                write!(f, "HybridOutOfRange({node}: h = {h}, out-degree {out_degree})")
            }
            Violation::SisoDegree { node, in_degree, out_degree } => {
                write!(f, "SisoDegree({node}: in {in_degree}, out {out_degree})")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn contains(&self, pred: impl Fn(&Violation) -> bool) -> bool {
        self.violations.iter().any(pred)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Network {
    field: FieldSpec,
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    source: usize,
    destinations: Vec<DestinationSpec>,
    node_index: HashMap<String, usize>,
    edge_index: HashMap<String, usize>,
    in_edges: Vec<Vec<usize>>,
    out_edges: Vec<Vec<usize>>,
}

impl Network {
    /// Indexes the graph. Only referential problems (duplicate ids, edges to
    /// unknown nodes) fail here; structural invariants are checked by
    /// [`Network::validate`].
    pub fn new<S: AsRef<str>>(
        field: FieldSpec,
        nodes: Vec<Node>,
        edges: Vec<(String, String, String)>,
        source: &str,
        destinations: &[S],
    ) -> Result<Self> {
        let mut node_index = HashMap::with_capacity(nodes.len());
        for (i, n) in nodes.iter().enumerate() {
            if node_index.insert(n.id.clone(), i).is_some() {
                return Err(Error::DuplicateId(n.id.clone()));
            }
        }
        let lookup = |id: &str| node_index.get(id).copied().ok_or_else(|| Error::UnknownNode(id.to_string()));
        let mut edge_index = HashMap::with_capacity(edges.len());
        let mut es = Vec::with_capacity(edges.len());
        for (id, from, to) in edges {
            let e = Edge { from: lookup(&from)?, to: lookup(&to)?, id };
            if edge_index.insert(e.id.clone(), es.len()).is_some() {
                return Err(Error::DuplicateId(e.id));
            }
            es.push(e);
        }
        let source = lookup(source)?;
        let mut in_edges = vec![Vec::new(); nodes.len()];
        let mut out_edges = vec![Vec::new(); nodes.len()];
        for (i, e) in es.iter().enumerate() {
            out_edges[e.from].push(i);
            in_edges[e.to].push(i);
        }
        let mut dests = Vec::with_capacity(destinations.len());
        let mut seen = HashSet::new();
        for d in destinations {
            let node = lookup(d.as_ref())?;
            if !seen.insert(node) {
                return Err(Error::DuplicateId(d.as_ref().to_string()));
            }
            dests.push(DestinationSpec { node, taps: in_edges[node].clone() });
        }
        Ok(Network {
            field,
            nodes,
            edges: es,
            source,
            destinations: dests,
            node_index,
            edge_index,
            in_edges,
            out_edges,
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    /// Same graph over a different field.
    pub fn with_field(&self, field: FieldSpec) -> Self {
        Network { field, ..self.clone() }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node(&self, i: usize) -> &Node {
        &self.nodes[i]
    }

    pub fn edge(&self, i: usize) -> &Edge {
        &self.edges[i]
    }

    pub fn node_idx(&self, id: &str) -> Option<usize> {
        self.node_index.get(id).copied()
    }

    pub fn edge_idx(&self, id: &str) -> Option<usize> {
        self.edge_index.get(id).copied()
    }

    pub fn require_node(&self, id: &str) -> Result<usize> {
        self.node_idx(id).ok_or_else(|| Error::UnknownNode(id.to_string()))
    }

    pub fn require_edge(&self, id: &str) -> Result<usize> {
        self.edge_idx(id).ok_or_else(|| Error::UnknownEdge(id.to_string()))
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn destinations(&self) -> &[DestinationSpec] {
        &self.destinations
    }

    pub fn destination(&self, k: usize) -> Result<&DestinationSpec> {
        self.destinations.get(k).ok_or_else(|| Error::UnknownDestination(format!("#{}", k + 1)))
    }

    /// Resolves a destination by node id or by 1-based position.
    pub fn find_destination(&self, selector: &str) -> Result<usize> {
        if let Some(k) = self.destinations.iter().position(|d| self.nodes[d.node].id == selector) {
            return Ok(k);
        }
        match selector.parse::<usize>() {
            Ok(k) if k >= 1 && k <= self.destinations.len() => Ok(k - 1),
            _ => Err(Error::UnknownDestination(selector.to_string())),
        }
    }

    pub fn in_edges(&self, v: usize) -> &[usize] {
        &self.in_edges[v]
    }

    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out_edges[v]
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_edges[v].len()
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_edges[v].len()
    }

    /// Number of source symbols `n`, the source out-degree.
    pub fn source_symbols(&self) -> usize {
        self.out_degree(self.source)
    }

    /// Whether a node applies coefficients (intermediate nodes; SISO relays
    /// are pure pass-through).
    pub fn is_coding_node(&self, v: usize) -> bool {
        self.nodes[v].kind == NodeKind::Intermediate
    }

    /// Out-edges of `v` partitioned by distinct output symbol. Variant-I
    /// and SISO nodes have one group; Variant-II nodes one group per edge;
    /// `Hybrid(h)` nodes `h` contiguous groups in edge-list order, the first
    /// `d mod h` of them one edge larger.
    pub fn output_groups(&self, v: usize) -> Vec<Vec<usize>> {
        let out = &self.out_edges[v];
        let h = match (self.nodes[v].kind, self.nodes[v].variant) {
            (NodeKind::Intermediate, Variant::Variant2) => out.len(),
            (NodeKind::Intermediate, Variant::Hybrid(h)) => h.clamp(1, out.len().max(1)),
            _ => 1,
        };
        if out.is_empty() {
            return if h == 0 { Vec::new() } else { vec![Vec::new()] };
        }
        let (base, extra) = (out.len() / h, out.len() % h);
        let mut groups = Vec::with_capacity(h);
        let mut start = 0;
        for g in 0..h {
            let len = base + usize::from(g < extra);
            groups.push(out[start..start + len].to_vec());
            start += len;
        }
        groups
    }

    pub fn validate(&self) -> ValidationReport {
        let mut v = Vec::new();
        let id = |i: usize| self.nodes[i].id.clone();

        let sources: Vec<usize> = (0..self.nodes.len()).filter(|&i| self.nodes[i].kind == NodeKind::Source).collect();
        if self.nodes[self.source].kind != NodeKind::Source {
            v.push(Violation::SourceKind { node: id(self.source) });
        }
        if sources.len() != 1 {
            v.push(Violation::SourceCount { count: sources.len() });
        }
        if self.in_degree(self.source) > 0 {
            v.push(Violation::SourceHasIncoming { node: id(self.source) });
        }
        if self.destinations.is_empty() {
            v.push(Violation::NoDestinations);
        }
        let listed: HashSet<usize> = self.destinations.iter().map(|d| d.node).collect();
        for d in &self.destinations {
            if self.nodes[d.node].kind != NodeKind::Destination {
                v.push(Violation::NotADestination { node: id(d.node) });
            }
            if d.taps.is_empty() {
                v.push(Violation::DestinationWithoutTaps { node: id(d.node) });
            }
        }
        for (i, n) in self.nodes.iter().enumerate() {
            match n.kind {
                NodeKind::Destination => {
                    if !listed.contains(&i) {
                        v.push(Violation::DestinationNotListed { node: id(i) });
                    }
                    if self.out_degree(i) > 0 {
                        v.push(Violation::DestinationHasOutgoing { node: id(i) });
                    }
                }
                NodeKind::Siso => {
                    if self.in_degree(i) != 1 || self.out_degree(i) != 1 {
                        v.push(Violation::SisoDegree {
                            node: id(i),
                            in_degree: self.in_degree(i),
                            out_degree: self.out_degree(i),
                        });
                    }
                }
                NodeKind::Intermediate => {
                    if let Variant::Hybrid(h) = n.variant {
                        if h < 1 || h > self.out_degree(i) {
                            v.push(Violation::HybridOutOfRange { node: id(i), h, out_degree: self.out_degree(i) });
                        }
                    }
                }
                NodeKind::Source => {}
            }
        }
        let mut pairs = HashSet::new();
        let mut reported = HashSet::new();
        for e in &self.edges {
            if !pairs.insert((e.from, e.to)) && reported.insert((e.from, e.to)) {
                v.push(Violation::ParallelEdge { from: id(e.from), to: id(e.to) });
            }
        }
        if self.topo_order().is_err() {
            v.push(Violation::CycleDetected);
        }
        ValidationReport { violations: v }
    }

    /// Fails with the report if any invariant is violated.
    pub fn validated(self) -> Result<Self> {
        let report = self.validate();
        if report.is_ok() {
            Ok(self)
        } else {
            Err(Error::InvalidNetwork(report))
        }
    }

    /// Kahn's algorithm; among ready nodes the one declared first wins.
    pub fn topo_order(&self) -> Result<Vec<usize>> {
        let mut indeg: Vec<usize> = self.in_edges.iter().map(Vec::len).collect();
        let mut ready: BinaryHeap<Reverse<usize>> =
            (0..self.nodes.len()).filter(|&i| indeg[i] == 0).map(Reverse).collect();
        let mut order = Vec::with_capacity(self.nodes.len());
        while let Some(Reverse(u)) = ready.pop() {
            order.push(u);
            for &e in &self.out_edges[u] {
                let w = self.edges[e].to;
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    ready.push(Reverse(w));
                }
            }
        }
        if order.len() != self.nodes.len() {
            return Err(Error::CycleDetected);
        }
        Ok(order)
    }

    /// Node ids in an ancestral order: every edge points forward.
    pub fn ancestral_order(&self) -> Result<Vec<String>> {
        Ok(self.topo_order()?.into_iter().map(|i| self.nodes[i].id.clone()).collect())
    }

    /// Non-destination nodes receiving more than one symbol.
    pub fn coding_points(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&i| self.nodes[i].kind != NodeKind::Destination && self.in_degree(i) >= 2)
            .collect()
    }

    pub fn reachable_from_source(&self) -> Vec<bool> {
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![self.source];
        seen[self.source] = true;
        while let Some(u) = stack.pop() {
            for &e in &self.out_edges[u] {
                let w = self.edges[e].to;
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Distinct edge counts over all source-to-`target` paths. Empty when
    /// `target` is unreachable.
    pub fn path_length_spectrum(&self, target: &str) -> Result<BTreeSet<usize>> {
        let t = self.require_node(target)?;
        let order = self.topo_order()?;
        let mut lengths: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); self.nodes.len()];
        lengths[self.source].insert(0);
        for u in order {
            if lengths[u].is_empty() {
                continue;
            }
            let next: Vec<usize> = lengths[u].iter().map(|l| l + 1).collect();
            for &e in &self.out_edges[u] {
                lengths[self.edges[e].to].extend(next.iter().copied());
            }
        }
        Ok(std::mem::take(&mut lengths[t]))
    }

    pub fn to_file(&self) -> NetworkFile {
        NetworkFile {
            field: self.field.clone(),
            nodes: self.nodes.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeRecord {
                    id: e.id.clone(),
                    from: self.nodes[e.from].id.clone(),
                    to: self.nodes[e.to].id.clone(),
                })
                .collect(),
            source: self.nodes[self.source].id.clone(),
            destinations: self
                .destinations
                .iter()
                .map(|d| DestinationRecord { node: self.nodes[d.node].id.clone() })
                .collect(),
            layers: None,
            inserted: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("network serializes")
    }

    /// Parses and validates a network file.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: NetworkFile = serde_json::from_str(text)?;
        file.into_network()?.validated()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub id: String,
    pub from: String,
    pub to: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DestinationRecord {
    pub node: String,
}

/// On-disk form of a network. Layered networks add `layers` and
/// `inserted`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkFile {
    pub field: FieldSpec,
    pub nodes: Vec<Node>,
    pub edges: Vec<EdgeRecord>,
    pub source: String,
    pub destinations: Vec<DestinationRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layers: Option<BTreeMap<String, usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inserted: Option<Vec<String>>,
}

impl NetworkFile {
    /// Builds the indexed network without validating it.
    pub fn into_network(self) -> Result<Network> {
        let dests: Vec<String> = self.destinations.into_iter().map(|d| d.node).collect();
        Network::new(
            self.field,
            self.nodes,
            self.edges.into_iter().map(|e| (e.id, e.from, e.to)).collect(),
            &self.source,
            &dests,
        )
    }
}

/// Incremental construction, mostly for tests and generators. Edge ids
/// default to `"from->to"`.
#[derive(Debug, Clone)]
pub struct NetworkBuilder {
    field: FieldSpec,
    nodes: Vec<Node>,
    edges: Vec<(String, String, String)>,
    source: Option<String>,
    destinations: Vec<String>,
}

impl NetworkBuilder {
    pub fn new(field: &FieldSpec) -> Self {
        NetworkBuilder { field: field.clone(), nodes: Vec::new(), edges: Vec::new(), source: None, destinations: Vec::new() }
    }

    pub fn source(mut self, id: &str) -> Self {
        self.nodes.push(Node::new(id, NodeKind::Source, Variant::Variant1));
        self.source = Some(id.to_string());
        self
    }

    pub fn node(mut self, id: &str, variant: Variant) -> Self {
        self.nodes.push(Node::new(id, NodeKind::Intermediate, variant));
        self
    }

    pub fn siso(mut self, id: &str) -> Self {
        self.nodes.push(Node::new(id, NodeKind::Siso, Variant::Variant1));
        self
    }

    pub fn destination(mut self, id: &str) -> Self {
        self.nodes.push(Node::new(id, NodeKind::Destination, Variant::Variant1));
        self.destinations.push(id.to_string());
        self
    }

    pub fn edge(self, from: &str, to: &str) -> Self {
        let id = format!("{from}->{to}");
        self.edge_with_id(&id, from, to)
    }

    pub fn edge_with_id(mut self, id: &str, from: &str, to: &str) -> Self {
        self.edges.push((id.to_string(), from.to_string(), to.to_string()));
        self
    }

    /// Builds without validating.
    pub fn build_unchecked(self) -> Result<Network> {
        let source = self.source.ok_or_else(|| Error::UnknownNode("<source>".into()))?;
        Network::new(self.field, self.nodes, self.edges, &source, &self.destinations)
    }

    pub fn build(self) -> Result<Network> {
        self.build_unchecked()?.validated()
    }
}
