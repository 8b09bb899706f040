//! Graphviz DOT rendering.

use std::fmt::Write;

use crate::netgraph::{Network, NodeKind, Variant};
use crate::transform::LayeredNetwork;

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn attrs(net: &Network, v: usize) -> String {
    let n = net.node(v);
    let (shape, style) = match n.kind {
        NodeKind::Source => ("box", "solid"),
        NodeKind::Destination => ("doublecircle", "solid"),
        NodeKind::Siso => ("circle", "filled"),
        NodeKind::Intermediate => ("circle", "solid"),
    };
    let label = match (n.kind, n.variant) {
        (NodeKind::Intermediate, Variant::Variant2) => format!("{} (II)", n.id),
        (NodeKind::Intermediate, Variant::Hybrid(h)) => format!("{} (h={h})", n.id),
        _ => n.id.clone(),
    };
    format!("shape={shape}, style={style}, label={}", quote(&label))
}

fn render(net: &Network, ranks: &[Vec<usize>]) -> String {
    let mut s = String::from("digraph network {\n    rankdir=LR;\n");
    for v in 0..net.nodes().len() {
        let _ = writeln!(s, "    {} [{}];", quote(&net.node(v).id), attrs(net, v));
    }
    for (r, nodes) in ranks.iter().enumerate() {
        let members: Vec<String> = nodes.iter().map(|&v| quote(&net.node(v).id)).collect();
        let _ = writeln!(s, "    subgraph layer_{} {{ rank=same; {}; }}", r + 1, members.join("; "));
    }
    for e in net.edges() {
        let _ = writeln!(
            s,
            "    {} -> {} [label={}];",
            quote(&net.node(e.from).id),
            quote(&net.node(e.to).id),
            quote(&e.id)
        );
    }
    s.push_str("}\n");
    s
}

pub fn to_dot(net: &Network) -> String {
    render(net, &[])
}

/// Like [`to_dot`], with the nodes of each layer on one rank.
pub fn layered_to_dot(lnet: &LayeredNetwork) -> String {
    let ranks: Vec<Vec<usize>> = (1..=lnet.depth()).map(|l| lnet.layer(l).to_vec()).collect();
    render(lnet.network(), &ranks)
}
