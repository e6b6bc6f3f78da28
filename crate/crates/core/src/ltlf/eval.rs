//! Finite-trace satisfaction.

use std::collections::HashMap;

use super::{atoms_of, Formula, Trace};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
enum Op {
    True,
    False,
    Atom(u32),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Next(usize),
    WeakNext(usize),
    Until(usize, usize),
    Release(usize, usize),
    Eventually(usize),
    Always(usize),
    Implies(usize, usize),
}

/// A formula compiled against a fixed atom universe, evaluating over traces
/// given as letters (bit k set iff `universe[k]` holds).
///
/// Positions are evaluated back to front, one column of subformula values
/// per position. Atoms outside the universe are constantly false.
#[derive(Debug, Clone)]
pub struct TraceEvaluator {
    ops: Vec<Op>,
}

impl TraceEvaluator {
    pub fn new(f: &Formula, universe: &[String]) -> Self {
        let index: HashMap<&str, u32> = universe
            .iter()
            .enumerate()
            .map(|(i, a)| (a.as_str(), i as u32))
            .collect();
        let mut ops = Vec::new();
        compile(f, &index, &mut ops);
        TraceEvaluator { ops }
    }

    /// Number of subformula slots in a column.
    pub fn width(&self) -> usize {
        self.ops.len()
    }

    /// Values of every subformula at a position carrying `letter`, given the
    /// column of the next position (`None` at the last position).
    pub fn column(&self, letter: u32, next: Option<&[bool]>, out: &mut [bool]) {
        for (k, op) in self.ops.iter().enumerate() {
            let succ = |c: usize| next.is_some_and(|col| col[c]);
            let last = next.is_none();
            let value = match *op {
                Op::True => true,
                Op::False => false,
                Op::Atom(bit) => letter >> bit & 1 == 1,
                Op::Not(a) => !out[a],
                Op::And(a, b) => out[a] && out[b],
                Op::Or(a, b) => out[a] || out[b],
                Op::Implies(a, b) => !out[a] || out[b],
                Op::Next(a) => succ(a),
                Op::WeakNext(a) => last || succ(a),
                Op::Until(a, b) => out[b] || (out[a] && succ(k)),
                Op::Release(a, b) => out[b] && (out[a] || last || succ(k)),
                Op::Eventually(a) => out[a] || succ(k),
                Op::Always(a) => out[a] && (last || succ(k)),
            };
            out[k] = value;
        }
    }

    /// Value of the whole formula in a column.
    pub fn root(&self, column: &[bool]) -> bool {
        column[self.ops.len() - 1]
    }

    /// Truth value at every position of `letters`. `cols` is scratch space.
    pub fn positions(&self, letters: &[u32], cols: &mut Vec<bool>) -> Vec<bool> {
        self.fill(letters, cols);
        let w = self.width();
        (0..letters.len()).map(|i| cols[i * w + w - 1]).collect()
    }

    fn fill(&self, letters: &[u32], cols: &mut Vec<bool>) {
        let (n, w) = (letters.len(), self.width());
        cols.clear();
        cols.resize(n * w, false);
        for i in (0..n).rev() {
            let (here, rest) = cols[i * w..].split_at_mut(w);
            let next = if i + 1 < n { Some(&rest[..w]) } else { None };
            self.column(letters[i], next, here);
        }
    }

    /// Whether the trace satisfies the formula at position 0. Empty traces
    /// satisfy nothing.
    pub fn accepts(&self, letters: &[u32], cols: &mut Vec<bool>) -> bool {
        if letters.is_empty() {
            return false;
        }
        self.fill(letters, cols);
        self.root(&cols[..self.width()])
    }
}

fn compile(f: &Formula, index: &HashMap<&str, u32>, ops: &mut Vec<Op>) -> usize {
    use Formula as F;
    let one = |g: &Formula, ops: &mut Vec<Op>| compile(g, index, ops);
    let op = match f {
        F::True => Op::True,
        F::False => Op::False,
        F::Atom(a) => match index.get(&**a) {
            Some(&bit) => Op::Atom(bit),
            None => Op::False,
        },
        F::Not(a) => Op::Not(one(a, ops)),
        F::Next(a) => Op::Next(one(a, ops)),
        F::WeakNext(a) => Op::WeakNext(one(a, ops)),
        F::Eventually(a) => Op::Eventually(one(a, ops)),
        F::Always(a) => Op::Always(one(a, ops)),
        F::And(a, b) => {
            let (x, y) = (one(a, ops), one(b, ops));
            Op::And(x, y)
        }
        F::Or(a, b) => {
            let (x, y) = (one(a, ops), one(b, ops));
            Op::Or(x, y)
        }
        F::Until(a, b) => {
            let (x, y) = (one(a, ops), one(b, ops));
            Op::Until(x, y)
        }
        F::Release(a, b) => {
            let (x, y) = (one(a, ops), one(b, ops));
            Op::Release(x, y)
        }
        F::Implies(a, b) => {
            let (x, y) = (one(a, ops), one(b, ops));
            Op::Implies(x, y)
        }
    };
    ops.push(op);
    ops.len() - 1
}

/// `t, pos ⊨ f`. Positions outside `0..t.len()` are an error.
pub fn eval_trace(f: &Formula, t: &Trace, pos: usize) -> Result<bool> {
    if pos >= t.len() {
        return Err(Error::PositionOutOfRange { pos, len: t.len() });
    }
    let universe: Vec<String> = atoms_of(f).into_iter().collect();
    let letters: Vec<u32> = t
        .steps
        .iter()
        .map(|step| {
            universe
                .iter()
                .enumerate()
                .filter(|(_, a)| step.contains(*a))
                .fold(0, |acc, (k, _)| acc | 1 << k)
        })
        .collect();
    let eval = TraceEvaluator::new(f, &universe);
    Ok(eval.positions(&letters, &mut Vec::new())[pos])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltlf::parse;

    fn holds(text: &str, steps: &[&[&str]], pos: usize) -> bool {
        eval_trace(&parse(text).unwrap(), &Trace::from_names(steps), pos).unwrap()
    }

    #[test]
    fn clause_examples() {
        assert!(!holds("X a", &[&["a"]], 0));
        assert!(holds("a U b", &[&["a"], &["a"], &["b"]], 0));
        assert!(holds("WX false", &[&[]], 0));
        assert!(!holds("a U b", &[&["a"], &["a"]], 0));
        assert!(holds("G a", &[&["a"], &["a"]], 0));
        assert!(holds("F b", &[&["a"], &["b"]], 0));
        assert!(holds("X b", &[&["a"], &["b"]], 0));
        assert!(holds("false R a", &[&["a"]], 0));
        assert!(holds("a", &[&[], &["a"]], 1));
    }

    #[test]
    fn out_of_range() {
        let f = parse("a").unwrap();
        assert!(matches!(
            eval_trace(&f, &Trace::default(), 0),
            Err(Error::PositionOutOfRange { pos: 0, len: 0 })
        ));
        assert!(eval_trace(&f, &Trace::from_names(&[&[]]), 1).is_err());
    }
}
