use std::fmt::Write;

use super::{Coloring, Graph};

/// How vertex labels and colors are rendered.
#[derive(Debug, Clone, Default)]
pub struct DotStyle<'a> {
    pub name: &'a str,
    pub coloring: Option<&'a Coloring>,
}

const FILL: [&str; 5] = ["white", "white", "gray70", "gray25", "red"];

fn label_color(label: &str) -> &'static str {
    if label.starts_with("hole") {
        "red"
    } else if label.starts_with("inner") {
        "blue"
    } else if label.starts_with("outer") {
        "darkgreen"
    } else if label.starts_with("cycle") {
        "orange"
    } else {
        "black"
    }
}

/// Graphviz rendering. Labelled vertices (inner/outer/hole/cycle) get a distinct
/// outline color; a coloring, when given, becomes the fill.
pub fn to_dot(g: &Graph, style: &DotStyle<'_>) -> String {
    let mut out = String::new();
    let name = if style.name.is_empty() { "G" } else { style.name };
    writeln!(out, "graph \"{name}\" {{").unwrap();
    writeln!(out, "  node [shape=circle, style=filled, fillcolor=white];").unwrap();
    for v in 0..g.vertex_count() {
        let mut attrs = Vec::new();
        match g.label(v) {
            Some(l) => {
                attrs.push(format!("label=\"{v}\\n{l}\""));
                attrs.push(format!("color={}", label_color(l)));
                attrs.push("penwidth=2".to_string());
            }
            None => attrs.push(format!("label=\"{v}\"")),
        }
        if let Some(c) = style.coloring {
            let col = c.colors.get(v).copied().unwrap_or(0) as usize;
            attrs.push(format!("fillcolor={}", FILL[col.min(4)]));
            if col == 3 {
                attrs.push("fontcolor=white".to_string());
            }
        }
        writeln!(out, "  {v} [{}];", attrs.join(", ")).unwrap();
    }
    for &(a, b) in g.edges() {
        let hole_edge = matches!((g.label(a), g.label(b)), (Some(x), Some(y)) if x.starts_with("hole") && x == y);
        if hole_edge {
            writeln!(out, "  {a} -- {b} [color=red, penwidth=2];").unwrap();
        } else {
            writeln!(out, "  {a} -- {b};").unwrap();
        }
    }
    out.push_str("}\n");
    out
}
