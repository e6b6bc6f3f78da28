//! Reachability games on DFAs: the controller picks outputs, the environment
//! picks inputs, and the controller wins by reaching an accepting state.
//!
//! Plays have at least one move, so realizability asks for an output at the
//! initial state all of whose successors are winning.

use std::time::Instant;

use rustc_hash::FxHashMap;
use syft_bdd::{Bdd, VarId};

use crate::automata::{ExplicitDfa, Letter};
use crate::error::{Error, Result};
use crate::symbolic::SymbolicDfa;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitSolution {
    pub winning: Vec<bool>,
    /// Output chosen at each non-accepting winning state.
    pub winning_output: Vec<Option<u32>>,
    pub realizable: bool,
    /// Whether the initial state itself is winning.
    pub initial_winning: bool,
    pub rounds: usize,
}

impl ExplicitSolution {
    pub fn winning_states(&self) -> Vec<usize> {
        (0..self.winning.len())
            .filter(|&s| self.winning[s])
            .collect()
    }
}

/// Output letters in lexicographic order over the output sequence, first
/// output most significant.
pub fn output_order(outputs: usize) -> Vec<u32> {
    (0..1u32 << outputs)
        .map(|v| (0..outputs).fold(0, |y, j| y | (v >> (outputs - 1 - j) & 1) << j))
        .collect()
}

fn forcing_output(
    d: &ExplicitDfa,
    s: usize,
    win: &[bool],
    order: &[u32],
    nx: usize,
) -> Option<u32> {
    order
        .iter()
        .copied()
        .find(|&y| (0..1u32 << nx).all(|x| win[d.successor(s, Letter::join(x, y, nx))]))
}

/// Backward expansion from the accepting states. Each round adds the states
/// that can force a move into the previous round's region.
pub fn solve_explicit(d: &ExplicitDfa) -> ExplicitSolution {
    solve_explicit_until(d, None).expect("no deadline")
}

/// [`solve_explicit`] checking `deadline` between rounds.
pub fn solve_explicit_until(
    d: &ExplicitDfa,
    deadline: Option<Instant>,
) -> Result<ExplicitSolution> {
    let n = d.num_states();
    let nx = d.partition().inputs.len();
    let order = output_order(d.partition().outputs.len());
    let mut winning: Vec<bool> = (0..n).map(|s| d.is_accepting(s)).collect();
    let mut winning_output = vec![None; n];
    let mut rounds = 0;
    loop {
        check_deadline(deadline)?;
        rounds += 1;
        let mut added = Vec::new();
        for s in (0..n).filter(|&s| !winning[s]) {
            if let Some(y) = forcing_output(d, s, &winning, &order, nx) {
                added.push((s, y));
            }
        }
        if added.is_empty() {
            break;
        }
        for (s, y) in added {
            winning[s] = true;
            winning_output[s] = Some(y);
        }
    }
    Ok(ExplicitSolution {
        realizable: forcing_output(d, d.initial(), &winning, &order, nx).is_some(),
        initial_winning: winning[d.initial()],
        winning,
        winning_output,
        rounds,
    })
}

fn check_deadline(deadline: Option<Instant>) -> Result<()> {
    match deadline {
        Some(t) if Instant::now() >= t => Err(Error::Timeout),
        _ => Ok(()),
    }
}

#[derive(Debug, Clone)]
pub struct SymbolicSolution {
    /// Winning states over `Z`.
    pub w: Bdd,
    /// Winning state-output pairs over `Z ∪ Y`.
    pub t: Bdd,
    /// `(w_i, t_i)` for every computed iterate, starting with `(acc, acc)`.
    pub history: Vec<(Bdd, Bdd)>,
    pub iterations: usize,
    pub realizable: bool,
    /// Whether the initial code satisfies `w`.
    pub initial_winning: bool,
}

/// Least fixpoint `t_{i+1} = t_i ∨ (¬w_i ∧ ∀X. w_i(η))`,
/// `w_{i+1} = ∃Y. t_{i+1}`, from `t_0 = w_0 = acc`.
pub fn solve_symbolic(sd: &mut SymbolicDfa) -> Result<SymbolicSolution> {
    solve_symbolic_until(sd, None)
}

/// [`solve_symbolic`] checking `deadline` between iterations.
pub fn solve_symbolic_until(
    sd: &mut SymbolicDfa,
    deadline: Option<Instant>,
) -> Result<SymbolicSolution> {
    let cap = sd.num_states() + 1;
    let acc = sd.acc();
    let subst: Vec<(VarId, Bdd)> = sd
        .z_vars()
        .iter()
        .copied()
        .zip(sd.eta().iter().copied())
        .collect();
    let x = sd.x_vars().to_vec();
    let y = sd.y_vars().to_vec();
    let (mut w, mut t) = (acc, acc);
    let mut history = vec![(w, t)];
    let mut iterations = 0;
    let forced = loop {
        if iterations == cap {
            return Err(Error::IterationCap(cap));
        }
        check_deadline(deadline)?;
        iterations += 1;
        let dd = sd.dd_mut();
        let composed = dd.vector_compose(w, &subst)?;
        let forced = dd.forall(&x, composed)?;
        let not_w = dd.not(w)?;
        let fresh = dd.and(not_w, forced)?;
        let t_next = dd.or(t, fresh)?;
        let w_next = dd.exists(&y, t_next)?;
        if w_next == w {
            break forced;
        }
        w = w_next;
        t = t_next;
        history.push((w, t));
    };
    let start = sd.dd_mut().exists(&y, forced)?;
    let z0 = sd.z0();
    Ok(SymbolicSolution {
        w,
        t,
        history,
        iterations,
        realizable: sd.eval(start, z0, 0)?,
        initial_winning: sd.eval(w, z0, 0)?,
    })
}

/// Brute-force AND-OR search: can the controller force acceptance within
/// `depth` moves from the initial state, taking at least one move?
pub fn oracle_search(d: &ExplicitDfa, depth: usize) -> bool {
    let nx = d.partition().inputs.len();
    let ny = d.partition().outputs.len();
    let mut memo: FxHashMap<(usize, usize), bool> = FxHashMap::default();
    wins_within(d, d.initial(), depth, nx, ny, &mut memo)
}

fn wins_within(
    d: &ExplicitDfa,
    s: usize,
    depth: usize,
    nx: usize,
    ny: usize,
    memo: &mut FxHashMap<(usize, usize), bool>,
) -> bool {
    if depth == 0 {
        return false;
    }
    if let Some(&v) = memo.get(&(s, depth)) {
        return v;
    }
    let v = (0..1u32 << ny).any(|y| {
        (0..1u32 << nx).all(|x| {
            let t = d.successor(s, Letter::join(x, y, nx));
            d.is_accepting(t) || wins_within(d, t, depth - 1, nx, ny, memo)
        })
    });
    memo.insert((s, depth), v);
    v
}
