//! Graphviz rendering of connection matrices.

use std::fmt::Write as _;

use crate::concept::{ConnectionMatrix, MatrixKind};
use crate::neutro::NeutroValue;

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

/// Nodes in label order (rows, then columns for relational kinds), edges
/// row-major. Edges carrying I are dashed.
pub fn export_dot(m: &ConnectionMatrix) -> String {
    let mut out = String::from("digraph cogmap {\n");
    let mut nodes: Vec<&str> = m.rows.labels().iter().map(String::as_str).collect();
    if m.kind != MatrixKind::Cognitive {
        for l in m.cols.labels() {
            if !nodes.contains(&l.as_str()) {
                nodes.push(l);
            }
        }
    }
    for n in nodes {
        let _ = writeln!(out, "  {};", quote(n));
    }
    for (from, to, w) in m.edges() {
        let mut attrs = Vec::new();
        if w.has_indet() {
            attrs.push("style=dashed".to_string());
        }
        if w != NeutroValue::ONE && w != NeutroValue::I {
            attrs.push(format!("label={}", quote(&w.to_string())));
        }
        let _ = write!(out, "  {} -> {}", quote(&from), quote(&to));
        if !attrs.is_empty() {
            let _ = write!(out, " [{}]", attrs.join(", "));
        }
        out.push_str(";\n");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::format::parse_matrix;

    #[test]
    fn solid_and_dashed() {
        let m = parse_matrix("kind: cognitive\nrows: a b\n0 1\nI 0\n").unwrap();
        assert_eq!(
            export_dot(&m),
            "digraph cogmap {\n  \"a\";\n  \"b\";\n  \"a\" -> \"b\";\n  \"b\" -> \"a\" [style=dashed];\n}\n"
        );
    }

    #[test]
    fn zero_matrix_has_nodes_only() {
        let m = parse_matrix("kind: cognitive\nrows: a b c\n0 0 0\n0 0 0\n0 0 0\n").unwrap();
        let d = export_dot(&m);
        assert_eq!(d.matches(';').count(), 3);
        assert!(!d.contains("->"));
    }

    #[test]
    fn weights_and_quoting() {
        let m = parse_matrix("kind: relational\nrows: A'1 x\"y\ncols: R\n-2\n2+I\n").unwrap();
        let d = export_dot(&m);
        assert!(d.contains("\"A'1\" -> \"R\" [label=\"-2\"];"));
        assert!(d.contains("\"x\\\"y\" -> \"R\" [style=dashed, label=\"2+I\"];"));
    }
}
