use super::{Acceptance, OmegaAutomaton};
use std::collections::BTreeMap;
use std::fmt::Write;

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz rendering. Edges to the same target are merged and labelled with
/// the list of letters; accepting marks are appended to state labels.
pub fn to_dot(a: &OmegaAutomaton) -> String {
    let mut out = String::from("digraph automaton {\n  rankdir=LR;\n  init [shape=point];\n");
    let _ = writeln!(out, "  init -> {};", a.initial);
    for q in 0..a.state_count() {
        let mut marks = Vec::new();
        match &a.acceptance {
            Acceptance::Buchi(s) | Acceptance::CoBuchi(s) => {
                if s.contains(&q) {
                    marks.push("0".to_string());
                }
            }
            Acceptance::Rabin(pairs) => {
                for (i, p) in pairs.iter().enumerate() {
                    if p.fin.contains(&q) {
                        marks.push(format!("F{i}"));
                    }
                    if p.inf.contains(&q) {
                        marks.push(format!("I{i}"));
                    }
                }
            }
        }
        let mark = if marks.is_empty() {
            String::new()
        } else {
            format!("\\n{{{}}}", marks.join(","))
        };
        let _ = writeln!(
            out,
            "  {q} [shape=box, label=\"{q}: {}{}\"];",
            escape(&a.labels[q]),
            mark
        );
        let mut by_target: BTreeMap<usize, Vec<String>> = BTreeMap::new();
        for (l, &t) in a.transitions[q].iter().enumerate() {
            by_target.entry(t).or_default().push(a.alphabet.letter(l).to_string());
        }
        for (t, letters) in by_target {
            let _ = writeln!(out, "  {q} -> {t} [label=\"{}\"];", escape(&letters.join(" ")));
        }
    }
    out.push_str("}\n");
    out
}
