use std::collections::BTreeMap;
use std::fmt::Write;

use super::{ExplicitDfa, Letter};

/// Graphviz digraph; one edge per (source, target) labelled with the
/// comma-separated letter bits that take it.
pub fn export_dot(d: &ExplicitDfa) -> String {
    let w = d.width();
    let mut out = String::from("digraph dfa {\n  rankdir=LR;\n  init [shape=point];\n");
    for s in 0..d.num_states() {
        let shape = if d.is_accepting(s) {
            "doublecircle"
        } else {
            "circle"
        };
        let _ = writeln!(out, "  s{s} [shape={shape}, label=\"{s}\"];");
    }
    let _ = writeln!(out, "  init -> s{};", d.initial());
    for s in 0..d.num_states() {
        let mut groups: BTreeMap<u32, Vec<String>> = BTreeMap::new();
        for (l, &t) in d.row(s).iter().enumerate() {
            groups.entry(t).or_default().push(Letter(l as u32).bits(w));
        }
        for (t, labels) in groups {
            let _ = writeln!(out, "  s{s} -> s{t} [label=\"{}\"];", labels.join(","));
        }
    }
    out.push_str("}\n");
    out
}

/// `states N initial I`, one `src bits dst` line per transition, then
/// `accepting: ...`.
pub fn export_table(d: &ExplicitDfa) -> String {
    let w = d.width();
    let mut out = format!("states {} initial {}\n", d.num_states(), d.initial());
    for s in 0..d.num_states() {
        for (l, &t) in d.row(s).iter().enumerate() {
            let _ = writeln!(out, "{s} {} {t}", Letter(l as u32).bits(w));
        }
    }
    let acc: Vec<String> = d.accepting_states().iter().map(usize::to_string).collect();
    let _ = writeln!(out, "accepting: {}", acc.join(" "));
    out
}
