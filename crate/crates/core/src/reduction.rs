//! Reduction of finite-trace synthesis to infinite-trace LTL synthesis.
//!
//! A fresh output `Tail` holds exactly on the positions of the intended
//! finite trace: `t(φ) = Tail ∧ (Tail U G ¬Tail) ∧ tr(φ)` with
//!
//! ```text
//! tr(a) = a, tr(¬a) = ¬a, tr(ψ1 ∧ ψ2) = tr(ψ1) ∧ tr(ψ2), tr(ψ1 ∨ ψ2) = tr(ψ1) ∨ tr(ψ2)
//! tr(X ψ)      = X (Tail ∧ tr(ψ))
//! tr(WX ψ)     = X (¬Tail ∨ tr(ψ))
//! tr(ψ1 U ψ2)  = (Tail ∧ tr(ψ1)) U (Tail ∧ tr(ψ2))
//! tr(ψ1 R ψ2)  = (¬Tail ∨ tr(ψ1)) R (¬Tail ∨ tr(ψ2))
//! ```
//!
//! applied to the negation normal form of `φ`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::all_traces;
use crate::error::{Error, Result};
use crate::ltlf::{atoms_of, to_nnf, Formula, Partition, TraceEvaluator};

pub const TAIL: &str = "Tail";

/// An infinite-trace synthesis problem: the image formula and the partition
/// with `Tail` appended to the outputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LtlProblem {
    pub formula: Formula,
    pub partition: Partition,
}

pub fn reduce(f: &Formula, p: &Partition) -> Result<LtlProblem> {
    if p.position(TAIL).is_some() || atoms_of(f).contains(TAIL) {
        return Err(Error::TailCollision(TAIL.to_string()));
    }
    p.covers(f)?;
    let tail = Formula::atom(TAIL);
    let ends = Formula::until(tail.clone(), Formula::always(Formula::not(tail.clone())));
    let formula = match tr(&to_nnf(f)) {
        Formula::True => Formula::and(tail, ends),
        body => Formula::and(Formula::and(tail, ends), body),
    };
    let mut outputs = p.outputs.clone();
    outputs.push(TAIL.to_string());
    Ok(LtlProblem {
        formula,
        partition: Partition::new(p.inputs.clone(), outputs)?,
    })
}

fn tr(f: &Formula) -> Formula {
    use Formula as F;
    let tail = || Formula::atom(TAIL);
    let alive = |g: Formula| Formula::and(tail(), g);
    let dead_or = |g: Formula| Formula::or(Formula::not(tail()), g);
    match f {
        F::True | F::False | F::Atom(_) | F::Not(_) => f.clone(),
        F::And(a, b) => Formula::and(tr(a), tr(b)),
        F::Or(a, b) => Formula::or(tr(a), tr(b)),
        F::Next(a) => Formula::next(alive(tr(a))),
        F::WeakNext(a) => Formula::next(dead_or(tr(a))),
        F::Until(a, b) => Formula::until(alive(tr(a)), alive(tr(b))),
        F::Release(a, b) => Formula::release(dead_or(tr(a)), dead_or(tr(b))),
        F::Eventually(_) | F::Always(_) | F::Implies(..) => unreachable!("input is in NNF"),
    }
}

/// Ultimately periodic infinite trace `prefix · cycle^ω`, as letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lasso {
    pub prefix: Vec<u32>,
    pub cycle: Vec<u32>,
}

impl Lasso {
    pub fn new(prefix: Vec<u32>, cycle: Vec<u32>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::EmptyLoop);
        }
        Ok(Lasso { prefix, cycle })
    }

    /// Distinct positions: the prefix followed by one copy of the cycle.
    pub fn len(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn letter(&self, k: usize) -> u32 {
        if k < self.prefix.len() {
            self.prefix[k]
        } else {
            self.cycle[(k - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// Successor among the distinct positions.
    pub fn succ(&self, k: usize) -> usize {
        if k + 1 < self.len() {
            k + 1
        } else {
            self.prefix.len()
        }
    }
}

/// Infinite-trace satisfaction of `f` at distinct position `i` of `l`;
/// letter bit k is `universe[k]`. `WX` reads as `X` on infinite traces.
pub fn eval_lasso(f: &Formula, universe: &[String], l: &Lasso, i: usize) -> Result<bool> {
    if l.cycle.is_empty() {
        return Err(Error::EmptyLoop);
    }
    if i >= l.len() {
        return Err(Error::PositionOutOfRange {
            pos: i,
            len: l.len(),
        });
    }
    Ok(values(f, universe, l)[i])
}

fn values(f: &Formula, universe: &[String], l: &Lasso) -> Vec<bool> {
    use Formula as F;
    let n = l.len();
    let pointwise = |g: &dyn Fn(usize) -> bool| (0..n).map(g).collect::<Vec<bool>>();
    match f {
        F::True => vec![true; n],
        F::False => vec![false; n],
        F::Atom(a) => match universe.iter().position(|u| **u == **a) {
            Some(bit) => pointwise(&|k| l.letter(k) >> bit & 1 == 1),
            None => vec![false; n],
        },
        F::Not(a) => values(a, universe, l).into_iter().map(|v| !v).collect(),
        F::And(a, b) | F::Or(a, b) | F::Implies(a, b) => {
            let (va, vb) = (values(a, universe, l), values(b, universe, l));
            pointwise(&|k| match f {
                F::And(..) => va[k] && vb[k],
                F::Or(..) => va[k] || vb[k],
                _ => !va[k] || vb[k],
            })
        }
        F::Next(a) | F::WeakNext(a) => {
            let va = values(a, universe, l);
            pointwise(&|k| va[l.succ(k)])
        }
        F::Until(a, b) => {
            let (va, vb) = (values(a, universe, l), values(b, universe, l));
            fixpoint(l, false, |k, next| vb[k] || (va[k] && next))
        }
        F::Release(a, b) => {
            let (va, vb) = (values(a, universe, l), values(b, universe, l));
            fixpoint(l, true, |k, next| vb[k] && (va[k] || next))
        }
        F::Eventually(a) => {
            let va = values(a, universe, l);
            fixpoint(l, false, |k, next| va[k] || next)
        }
        F::Always(a) => {
            let va = values(a, universe, l);
            fixpoint(l, true, |k, next| va[k] && next)
        }
    }
}

/// Least (`start = false`) or greatest (`start = true`) solution of
/// `v[k] = step(k, v[succ k])` over the lasso positions.
fn fixpoint(l: &Lasso, start: bool, step: impl Fn(usize, bool) -> bool) -> Vec<bool> {
    let n = l.len();
    let mut v = vec![start; n];
    loop {
        let mut changed = false;
        for k in (0..n).rev() {
            let nv = step(k, v[l.succ(k)]);
            if nv != v[k] {
                v[k] = nv;
                changed = true;
            }
        }
        if !changed {
            return v;
        }
    }
}

/// `ρ` with `Tail` set on every position, then `Tail`-free padding.
/// `tail_bit` is the letter bit of `Tail`.
pub fn tail_extension(
    rho: &[u32],
    padding: &[u32],
    cycle: &[u32],
    tail_bit: usize,
) -> Result<Lasso> {
    let mask = !(1u32 << tail_bit);
    let mut prefix: Vec<u32> = rho.iter().map(|&l| l | 1 << tail_bit).collect();
    prefix.extend(padding.iter().map(|&l| l & mask));
    Lasso::new(prefix, cycle.iter().map(|&l| l & mask).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub trace: Vec<u32>,
    pub lasso: Lasso,
    pub finite: bool,
    pub infinite: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ReductionReport {
    pub checked: usize,
    pub counterexample: Option<Counterexample>,
}

struct Checker {
    image: Formula,
    universe: Vec<String>,
    finite: TraceEvaluator,
    width: usize,
    cols: Vec<bool>,
}

impl Checker {
    fn new(f: &Formula, p: &Partition) -> Result<Self> {
        let problem = reduce(f, p)?;
        let base: Vec<String> = p.atoms().cloned().collect();
        Ok(Checker {
            image: problem.formula,
            universe: problem.partition.atoms().cloned().collect(),
            finite: TraceEvaluator::new(f, &base),
            width: p.len(),
            cols: Vec::new(),
        })
    }

    fn check(
        &mut self,
        rho: &[u32],
        padding: &[u32],
        cycle: &[u32],
    ) -> Result<Option<Counterexample>> {
        let lasso = tail_extension(rho, padding, cycle, self.width)?;
        let finite = self.finite.accepts(rho, &mut self.cols);
        let infinite = eval_lasso(&self.image, &self.universe, &lasso, 0)?;
        Ok((finite != infinite).then(|| Counterexample {
            trace: rho.to_vec(),
            lasso,
            finite,
            infinite,
        }))
    }
}

/// Random finite traces of length `1..=max_len` with random paddings.
pub fn validate_reduction(
    f: &Formula,
    p: &Partition,
    trials: usize,
    max_len: usize,
    seed: u64,
) -> Result<ReductionReport> {
    let mut c = Checker::new(f, p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let letters = 1u32 << p.len();
    let mut report = ReductionReport::default();
    for _ in 0..trials {
        let lens = [
            1 + rng.gen_range(0..max_len.max(1)),
            rng.gen_range(0..3),
            rng.gen_range(1..4),
        ];
        let [rho, padding, cycle] = lens.map(|len| {
            (0..len)
                .map(|_| rng.gen_range(0..letters))
                .collect::<Vec<u32>>()
        });
        report.checked += 1;
        if let Some(cx) = c.check(&rho, &padding, &cycle)? {
            report.counterexample = Some(cx);
            break;
        }
    }
    Ok(report)
}

/// Every finite trace of length `1..=max_len`, each extended by every
/// `Tail`-free cycle of length 1 or 2 and by every padding letter followed
/// by a one-letter cycle.
pub fn validate_reduction_exhaustive(
    f: &Formula,
    p: &Partition,
    max_len: usize,
) -> Result<ReductionReport> {
    let mut c = Checker::new(f, p)?;
    let letters = 1u32 << p.len();
    let mut tails: Vec<(Vec<u32>, Vec<u32>)> = Vec::new();
    for cycle in all_traces(p.len(), 2) {
        if cycle.len() == 1 {
            tails.extend((0..letters).map(|pad| (vec![pad], cycle.clone())));
        }
        tails.push((Vec::new(), cycle));
    }
    let mut report = ReductionReport::default();
    for rho in all_traces(p.len(), max_len) {
        for (padding, cycle) in &tails {
            report.checked += 1;
            if let Some(cx) = c.check(&rho, padding, cycle)? {
                report.counterexample = Some(cx);
                return Ok(report);
            }
        }
    }
    Ok(report)
}
