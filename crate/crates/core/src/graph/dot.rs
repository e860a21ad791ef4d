use std::fmt::Write;

use super::{NodeId, UnifiedGraph};

/// Role of a node in a finished mapping, used for coloring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeClass {
    Conserved,
    SimilarityMapped,
    Created,
    Deleted,
    Initiator,
    Unmapped,
}

impl NodeClass {
    pub fn name(self) -> &'static str {
        match self {
            NodeClass::Conserved => "conserved",
            NodeClass::SimilarityMapped => "similarity",
            NodeClass::Created => "created",
            NodeClass::Deleted => "deleted",
            NodeClass::Initiator => "initiator",
            NodeClass::Unmapped => "unmapped",
        }
    }

    pub fn color(self) -> &'static str {
        match self {
            NodeClass::Conserved => "black",
            NodeClass::SimilarityMapped => "red",
            NodeClass::Created => "green",
            NodeClass::Deleted => "blue",
            NodeClass::Initiator => "orange",
            NodeClass::Unmapped => "gray",
        }
    }
}

fn write_side(out: &mut String, g: &UnifiedGraph, prefix: &str, class_of: &dyn Fn(NodeId) -> NodeClass) {
    for c in 1..=g.component_count() {
        let _ = writeln!(out, "  subgraph cluster_{prefix}{c} {{");
        let _ = writeln!(out, "    label=\"{} {c}\";", g.side());
        for &v in g.component(c) {
            let class = class_of(v);
            let node = g.node(v);
            let tooltip = g
                .type_label(node.type_id)
                .map(str::to_string)
                .unwrap_or_else(|| format!("type {}", node.type_id));
            let _ = writeln!(
                out,
                "    {prefix}{} [label=\"{}\", fillcolor=\"{}\", class=\"{}\", tooltip=\"{}\"];",
                v.global_id(),
                node.source_id,
                class.color(),
                class.name(),
                tooltip
            );
        }
        out.push_str("  }\n");
    }
    for &(a, b) in g.edges() {
        let _ = writeln!(out, "  {prefix}{} -- {prefix}{};", a.global_id(), b.global_id());
    }
}

const HEADER: &str = "  node [shape=circle, style=filled, fontcolor=white];\n";

/// Renders `g` as an undirected DOT graph. Node names are global ids,
/// labels are the atom ids from the data files.
pub fn to_dot(g: &UnifiedGraph, name: &str, class_of: impl Fn(NodeId) -> NodeClass) -> String {
    let mut out = format!("graph {name} {{\n{HEADER}");
    write_side(&mut out, g, "n", &class_of);
    out.push_str("}\n");
    out
}

/// Both sides in one graph (`r<id>` and `p<id>` nodes) with a dashed edge
/// per mapped pair.
pub fn mapping_to_dot(
    name: &str,
    g_r: &UnifiedGraph,
    class_r: impl Fn(NodeId) -> NodeClass,
    g_p: &UnifiedGraph,
    class_p: impl Fn(NodeId) -> NodeClass,
    pairs: &[(NodeId, NodeId)],
) -> String {
    let mut out = format!("graph {name} {{\n{HEADER}");
    write_side(&mut out, g_r, "r", &class_r);
    write_side(&mut out, g_p, "p", &class_p);
    for (a, x) in pairs {
        let _ = writeln!(
            out,
            "  r{} -- p{} [style=dashed, color=gray, constraint=false];",
            a.global_id(),
            x.global_id()
        );
    }
    out.push_str("}\n");
    out
}
