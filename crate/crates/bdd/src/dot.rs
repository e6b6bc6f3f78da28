use std::fmt::Write;

use rustc_hash::FxHashSet;

use crate::{Bdd, DdManager, Result};

impl DdManager {
    /// Graphviz rendering of `f`: solid edges are high branches, dashed
    /// edges low branches.
    pub fn to_dot(&self, f: Bdd) -> Result<String> {
        let root = self.raw(f)?;
        let mut out = String::from("digraph bdd {\n");
        let mut seen = FxHashSet::default();
        let mut stack = vec![root];
        while let Some(n) = stack.pop() {
            if !seen.insert(n) {
                continue;
            }
            if n <= 1 {
                let _ = writeln!(out, "  n{n} [shape=box,label=\"{n}\"];");
                continue;
            }
            let node = self.nodes[n as usize];
            let _ = writeln!(
                out,
                "  n{n} [label=\"{}\"];",
                self.var_name(crate::VarId(node.var))
            );
            let _ = writeln!(out, "  n{n} -> n{};", node.hi);
            let _ = writeln!(out, "  n{n} -> n{} [style=dashed];", node.lo);
            stack.push(node.hi);
            stack.push(node.lo);
        }
        out.push_str("}\n");
        Ok(out)
    }
}
