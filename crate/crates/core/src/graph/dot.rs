use std::fmt::Write;

use itertools::Itertools;

use super::{DecoratedGraph, Level};

const PALETTE: [&str; 8] = [
    "lightblue", "lightsalmon", "palegreen", "khaki", "plum", "lightpink", "lightcyan", "wheat",
];

/// Graphviz rendering: one rank per level, fill colour by hour.
pub fn to_dot(g: &DecoratedGraph, name: &str) -> String {
    let mut s = String::new();
    writeln!(s, "graph \"{}\" {{", name.replace('"', "'")).unwrap();
    writeln!(s, "  rankdir=TB;").unwrap();
    for level in [Level::Zero, Level::One, Level::Inf] {
        let ids = (0..g.vertices.len())
            .filter(|&v| g.vertices[v].level == level)
            .map(|v| format!("v{v}"))
            .join("; ");
        if !ids.is_empty() {
            writeln!(s, "  {{ rank=same; {ids}; }}").unwrap();
        }
    }
    for (i, v) in g.vertices.iter().enumerate() {
        let mut label = format!("L{} g{}", v.level, v.genus);
        if let Some(h) = v.hour {
            label.push_str(&format!(" a{h}"));
        }
        label.push_str(&format!("\\n({}, {})", v.d0, v.dinf));
        for leg in &v.legs {
            label.push_str(&format!("\\n#{} {}", leg.index, leg.marking));
        }
        let color = v.hour.map(|h| PALETTE[(h as usize - 1) % PALETTE.len()]).unwrap_or("white");
        writeln!(s, "  v{i} [label=\"{label}\", style=filled, fillcolor={color}];").unwrap();
    }
    for e in &g.edges {
        writeln!(
            s,
            "  v{} -- v{} [label=\"{} ({}, {})\"];",
            e.ends.0, e.ends.1, e.kind, e.d0, e.dinf
        )
        .unwrap();
    }
    s.push_str("}\n");
    s
}
