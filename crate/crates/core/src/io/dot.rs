use std::collections::BTreeMap;

use crate::automata::{Gfa, Label};

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// One node per state in id order, the final state drawn as a double circle
/// and the initial one in bold. Parallel edges share one comma-separated label.
pub fn write_dot(g: &Gfa) -> String {
    let mut out = String::from("digraph gfa {\n  rankdir=LR;\n  node [shape=circle];\n");
    for q in g.all_states() {
        let mut attrs = Vec::new();
        if g.is_final(q) {
            attrs.push("shape=doublecircle");
        }
        if q == g.initial() {
            attrs.push("style=bold");
        }
        if attrs.is_empty() {
            out.push_str(&format!("  {};\n", quote(q)));
        } else {
            out.push_str(&format!("  {} [{}];\n", quote(q), attrs.join(", ")));
        }
    }
    let mut edges: BTreeMap<(&str, &str), Vec<String>> = BTreeMap::new();
    for t in g.transitions() {
        let label = match &t.label {
            Label::Eps => "ε".to_string(),
            Label::Sym(a) => a.to_string(),
        };
        edges.entry((t.source.as_str(), t.target.as_str())).or_default().push(label);
    }
    for ((p, q), labels) in edges {
        out.push_str(&format!("  {} -> {} [label={}];\n", quote(p), quote(q), quote(&labels.join(","))));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::fixtures::{a_plus_b_plus, a_star_b_star_det, gfa};

    fn count(text: &str, what: &str) -> usize {
        text.lines().filter(|l| l.contains(what)).count()
    }

    #[test]
    fn a_plus_b_plus_drawing() {
        let d = write_dot(&a_plus_b_plus());
        assert_eq!(count(&d, "->"), 4);
        assert_eq!(count(&d, "label") , 4);
        assert_eq!(d.lines().filter(|l| l.trim_start().starts_with('"') && !l.contains("->")).count(), 3);
        assert_eq!(count(&d, "doublecircle"), 1);
    }

    #[test]
    fn no_final_state() {
        let d = write_dot(&gfa(&["q"], None, &[], &[], "q"));
        assert_eq!(count(&d, "doublecircle"), 0);
    }

    #[test]
    fn parallel_edges_are_merged() {
        let d = write_dot(&a_star_b_star_det());
        assert_eq!(d.lines().filter(|l| l.trim_start().starts_with('"') && !l.contains("->")).count(), 4);
        assert!(d.contains("\"q4\" -> \"q4\" [label=\"a,b\"];"), "{d}");
        assert!(d.contains("[label=\"ε\"]"));
    }
}
