//! Winning strategies as transducers: extraction from solved games,
//! execution against input sequences, and exhaustive verification.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use syft_bdd::{Bdd, VarId};

use crate::automata::{ExplicitDfa, Letter};
use crate::error::{Error, Result};
use crate::game::{ExplicitSolution, SymbolicSolution};
use crate::ltlf::{Formula, Partition, TraceEvaluator};
use crate::symbolic::SymbolicDfa;

/// A deterministic controller: in each state it emits an output letter,
/// then moves on the input letter it reads.
pub trait Strategy {
    fn partition(&self) -> &Partition;
    fn initial(&self) -> usize;
    fn output(&self, q: usize) -> Result<u32>;
    fn next(&self, q: usize, x: u32) -> Result<usize>;
    fn is_accepting(&self, q: usize) -> Result<bool>;
}

/// Output functions `τ_j` over `Z`, one per output, with earlier outputs
/// substituted into later ones. Satisfies `(Z, τ(Z)) ⊨ t` wherever some
/// output does.
pub fn synthesize_tau(sd: &mut SymbolicDfa, sol: &SymbolicSolution) -> Result<Vec<Bdd>> {
    let y = sd.y_vars().to_vec();
    let dd = sd.dd_mut();
    let raw = dd.solve_outputs(sol.t, &y)?;
    Ok(dd.resolve_witnesses(&raw, &y)?)
}

/// Symbolic transducer: states are codes, `τ` picks outputs and
/// `ζ(Z, X) = η(X, τ(Z), Z)` moves.
#[derive(Debug)]
pub struct SymbolicTransducer {
    sd: SymbolicDfa,
    tau: Vec<Bdd>,
    zeta: Vec<Bdd>,
}

impl SymbolicTransducer {
    pub fn new(mut sd: SymbolicDfa, sol: &SymbolicSolution) -> Result<Self> {
        if !sol.realizable {
            return Err(Error::Unrealizable);
        }
        let tau = synthesize_tau(&mut sd, sol)?;
        let subst: Vec<(VarId, Bdd)> = sd
            .y_vars()
            .iter()
            .copied()
            .zip(tau.iter().copied())
            .collect();
        let eta = sd.eta().to_vec();
        let dd = sd.dd_mut();
        let zeta = eta
            .iter()
            .map(|&b| dd.vector_compose(b, &subst))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(SymbolicTransducer { sd, tau, zeta })
    }

    pub fn automaton(&self) -> &SymbolicDfa {
        &self.sd
    }

    pub fn tau(&self) -> &[Bdd] {
        &self.tau
    }

    pub fn zeta(&self) -> &[Bdd] {
        &self.zeta
    }
}

impl Strategy for SymbolicTransducer {
    fn partition(&self) -> &Partition {
        self.sd.partition()
    }

    fn initial(&self) -> usize {
        self.sd.z0() as usize
    }

    fn output(&self, q: usize) -> Result<u32> {
        let mut y = 0;
        for (j, &f) in self.tau.iter().enumerate() {
            if self.sd.eval(f, q as u32, 0)? {
                y |= 1 << j;
            }
        }
        Ok(y)
    }

    fn next(&self, q: usize, x: u32) -> Result<usize> {
        let mut z = 0;
        for (i, &f) in self.zeta.iter().enumerate() {
            if self.sd.eval(f, q as u32, x)? {
                z |= 1 << i;
            }
        }
        Ok(z)
    }

    fn is_accepting(&self, q: usize) -> Result<bool> {
        self.sd.accepting_code(q as u32)
    }
}

/// Table-driven transducer. Accepting states end the play; they loop to
/// themselves and their output is a don't-care fixed to the empty letter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitTransducer {
    pub partition: Partition,
    pub initial: usize,
    pub accepting: Vec<bool>,
    /// `delta[q][x]`.
    pub delta: Vec<Vec<usize>>,
    pub omega: Vec<u32>,
    /// Automaton state behind each transducer state, when known.
    pub origin: Vec<Option<usize>>,
}

impl ExplicitTransducer {
    /// Transducer over the winning states of `d`, following the recorded
    /// winning outputs.
    pub fn from_solution(d: &ExplicitDfa, sol: &ExplicitSolution) -> Result<Self> {
        if !sol.realizable {
            return Err(Error::Unrealizable);
        }
        let nx = d.partition().inputs.len();
        let states = sol.winning_states();
        let mut index = vec![usize::MAX; d.num_states()];
        for (q, &s) in states.iter().enumerate() {
            index[s] = q;
        }
        let mut accepting = Vec::with_capacity(states.len());
        let mut delta = Vec::with_capacity(states.len());
        let mut omega = Vec::with_capacity(states.len());
        for (q, &s) in states.iter().enumerate() {
            let acc = d.is_accepting(s);
            accepting.push(acc);
            if acc {
                delta.push(vec![q; 1 << nx]);
                omega.push(0);
                continue;
            }
            let y = sol.winning_output[s].ok_or_else(|| {
                Error::Transducer(format!("winning state {s} has no recorded output"))
            })?;
            let row = (0..1u32 << nx)
                .map(|x| index[d.successor(s, Letter::join(x, y, nx))])
                .collect::<Vec<_>>();
            if row.contains(&usize::MAX) {
                return Err(Error::Transducer(format!(
                    "output of state {s} leaves the winning region"
                )));
            }
            delta.push(row);
            omega.push(y);
        }
        let t = ExplicitTransducer {
            partition: d.partition().clone(),
            initial: index[d.initial()],
            accepting,
            delta,
            omega,
            origin: states.into_iter().map(Some).collect(),
        };
        t.validate()?;
        Ok(t)
    }

    /// Tabulates the part of `s` reachable from its initial state.
    pub fn tabulate<S: Strategy>(s: &S, origin: impl Fn(usize) -> Option<usize>) -> Result<Self> {
        let nx = s.partition().inputs.len();
        let mut index: FxHashMap<usize, usize> = FxHashMap::default();
        let mut order = vec![s.initial()];
        index.insert(s.initial(), 0);
        let mut queue = VecDeque::from([s.initial()]);
        let mut accepting = Vec::new();
        let mut delta = Vec::new();
        let mut omega = Vec::new();
        while let Some(q) = queue.pop_front() {
            let me = index[&q];
            let acc = s.is_accepting(q)?;
            accepting.push(acc);
            if acc {
                delta.push(vec![me; 1 << nx]);
                omega.push(0);
                continue;
            }
            omega.push(s.output(q)?);
            let mut row = Vec::with_capacity(1 << nx);
            for x in 0..1u32 << nx {
                let t = s.next(q, x)?;
                let id = *index.entry(t).or_insert_with(|| {
                    order.push(t);
                    queue.push_back(t);
                    order.len() - 1
                });
                row.push(id);
            }
            delta.push(row);
        }
        let t = ExplicitTransducer {
            partition: s.partition().clone(),
            initial: 0,
            accepting,
            delta,
            omega,
            origin: order.into_iter().map(origin).collect(),
        };
        t.validate()?;
        Ok(t)
    }

    pub fn num_states(&self) -> usize {
        self.delta.len()
    }

    fn validate(&self) -> Result<()> {
        let n = self.delta.len();
        let nx = self.partition.inputs.len();
        let ny = self.partition.outputs.len();
        let bad = |m: String| Err(Error::Transducer(m));
        if n == 0 {
            return bad("no states".into());
        }
        if self.initial >= n {
            return bad(format!("initial state {} out of range", self.initial));
        }
        if self.accepting.len() != n || self.omega.len() != n || self.origin.len() != n {
            return bad("per-state tables disagree in length".into());
        }
        for (q, row) in self.delta.iter().enumerate() {
            if row.len() != 1 << nx {
                return bad(format!("state {q} has {} transitions", row.len()));
            }
            if let Some(t) = row.iter().find(|&&t| t >= n) {
                return bad(format!("state {q} moves to unknown state {t}"));
            }
            if self.omega[q] >> ny != 0 {
                return bad(format!("output of state {q} is wider than the outputs"));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        let nx = self.partition.inputs.len();
        let ny = self.partition.outputs.len();
        let doc = TransducerJson {
            inputs: self.partition.inputs.clone(),
            outputs: self.partition.outputs.clone(),
            states: self.num_states(),
            initial: self.initial,
            accepting: (0..self.num_states())
                .filter(|&q| self.accepting[q])
                .collect(),
            delta: self
                .delta
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .map(|(x, &t)| (Letter(x as u32).bits(nx), t))
                        .collect()
                })
                .collect(),
            omega: self.omega.iter().map(|&y| Letter(y).bits(ny)).collect(),
            omega_dontcare: (0..self.num_states())
                .filter(|&q| self.accepting[q])
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&doc)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: TransducerJson = serde_json::from_str(text)?;
        let partition = Partition::new(doc.inputs, doc.outputs)?;
        let nx = partition.inputs.len();
        let ny = partition.outputs.len();
        let bits = |text: &str, width: usize| -> Result<u32> {
            match Letter::from_bits(text) {
                Some(l) if text.len() == width.max(1) && (width > 0 || text == "-") => Ok(l.0),
                _ => Err(Error::Transducer(format!(
                    "`{text}` is not a {width}-bit letter"
                ))),
            }
        };
        if doc.delta.len() != doc.states || doc.omega.len() != doc.states {
            return Err(Error::Transducer(
                "`delta` and `omega` must list every state".into(),
            ));
        }
        let mut accepting = vec![false; doc.states];
        for q in doc.accepting {
            *accepting
                .get_mut(q)
                .ok_or_else(|| Error::Transducer(format!("accepting state {q} out of range")))? =
                true;
        }
        let mut delta = Vec::with_capacity(doc.states);
        for (q, row) in doc.delta.iter().enumerate() {
            let mut table = vec![usize::MAX; 1 << nx];
            for (label, &t) in row {
                table[bits(label, nx)? as usize] = t;
            }
            if table.contains(&usize::MAX) {
                return Err(Error::Transducer(format!(
                    "state {q} misses some input letters"
                )));
            }
            delta.push(table);
        }
        let omega = doc
            .omega
            .iter()
            .map(|y| bits(y, ny))
            .collect::<Result<Vec<_>>>()?;
        let t = ExplicitTransducer {
            partition,
            initial: doc.initial,
            accepting,
            delta,
            omega,
            origin: vec![None; doc.states],
        };
        t.validate()?;
        Ok(t)
    }

    /// Graphviz digraph with edges grouped per (source, target) and
    /// labelled `input-bits / output-bits`.
    pub fn to_dot(&self) -> String {
        let nx = self.partition.inputs.len();
        let ny = self.partition.outputs.len();
        let mut out = String::from("digraph transducer {\n  rankdir=LR;\n  init [shape=point];\n");
        for q in 0..self.num_states() {
            let shape = if self.accepting[q] {
                "doublecircle"
            } else {
                "circle"
            };
            let _ = writeln!(out, "  q{q} [shape={shape}, label=\"{q}\"];");
        }
        let _ = writeln!(out, "  init -> q{};", self.initial);
        for (q, row) in self.delta.iter().enumerate() {
            let y = Letter(self.omega[q]).bits(ny);
            let mut groups: BTreeMap<usize, Vec<String>> = BTreeMap::new();
            for (x, &t) in row.iter().enumerate() {
                groups
                    .entry(t)
                    .or_default()
                    .push(format!("{} / {y}", Letter(x as u32).bits(nx)));
            }
            for (t, labels) in groups {
                let _ = writeln!(out, "  q{q} -> q{t} [label=\"{}\"];", labels.join(","));
            }
        }
        out.push_str("}\n");
        out
    }
}

impl Strategy for ExplicitTransducer {
    fn partition(&self) -> &Partition {
        &self.partition
    }

    fn initial(&self) -> usize {
        self.initial
    }

    fn output(&self, q: usize) -> Result<u32> {
        Ok(self.omega[q])
    }

    fn next(&self, q: usize, x: u32) -> Result<usize> {
        Ok(self.delta[q][x as usize])
    }

    fn is_accepting(&self, q: usize) -> Result<bool> {
        Ok(self.accepting[q])
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct TransducerJson {
    inputs: Vec<String>,
    outputs: Vec<String>,
    states: usize,
    initial: usize,
    accepting: Vec<usize>,
    delta: Vec<BTreeMap<String, usize>>,
    omega: Vec<String>,
    #[serde(default)]
    omega_dontcare: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Move {
    pub input: u32,
    pub output: u32,
    /// Transducer state the move was made from.
    pub state: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Run {
    pub moves: Vec<Move>,
    /// First move whose target accepts.
    pub accepted_at: Option<usize>,
}

impl Run {
    /// Letters `X_i ∪ Y_i` of the moves up to acceptance, or of all moves.
    pub fn letters(&self, input_width: usize) -> Vec<u32> {
        let end = self.accepted_at.map_or(self.moves.len(), |k| k + 1);
        self.moves[..end]
            .iter()
            .map(|m| Letter::join(m.input, m.output, input_width).0)
            .collect()
    }
}

/// Plays `inputs` against the strategy, stopping at the first accepting state.
pub fn run<S: Strategy>(s: &S, inputs: &[u32]) -> Result<Run> {
    let mut q = s.initial();
    let mut r = Run::default();
    for (i, &x) in inputs.iter().enumerate() {
        let y = s.output(q)?;
        let next = s.next(q, x)?;
        r.moves.push(Move {
            input: x,
            output: y,
            state: q,
        });
        if s.is_accepting(next)? {
            r.accepted_at = Some(i);
            break;
        }
        q = next;
    }
    Ok(r)
}

/// Whether the strategy forces `d` into acceptance within `bound` moves
/// against every input sequence. Acceptance is judged by `d`, not by the
/// strategy's own flags.
pub fn verify_strategy<S: Strategy>(d: &ExplicitDfa, s: &S, bound: usize) -> Result<bool> {
    let nx = d.partition().inputs.len();
    let mut memo: FxHashMap<(usize, usize, usize), bool> = FxHashMap::default();
    forces(d, s, s.initial(), d.initial(), bound, nx, &mut memo)
}

fn forces<S: Strategy>(
    d: &ExplicitDfa,
    s: &S,
    q: usize,
    state: usize,
    budget: usize,
    nx: usize,
    memo: &mut FxHashMap<(usize, usize, usize), bool>,
) -> Result<bool> {
    if budget == 0 {
        return Ok(false);
    }
    if let Some(&v) = memo.get(&(q, state, budget)) {
        return Ok(v);
    }
    let y = s.output(q)?;
    let mut ok = true;
    for x in 0..1u32 << nx {
        let t = d.successor(state, Letter::join(x, y, nx));
        if d.is_accepting(t) {
            continue;
        }
        let qn = s.next(q, x)?;
        if !forces(d, s, qn, t, budget - 1, nx, memo)? {
            ok = false;
            break;
        }
    }
    memo.insert((q, state, budget), ok);
    Ok(ok)
}

/// Whether the accepted prefix of `r` satisfies `f`. Runs that never
/// accepted fail.
pub fn check_trace(f: &Formula, p: &Partition, r: &Run) -> bool {
    if r.accepted_at.is_none() {
        return false;
    }
    let universe: Vec<String> = p.atoms().cloned().collect();
    let letters = r.letters(p.inputs.len());
    TraceEvaluator::new(f, &universe).accepts(&letters, &mut Vec::new())
}
