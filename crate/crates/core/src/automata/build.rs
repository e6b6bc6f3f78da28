use std::collections::VecDeque;
use std::time::Instant;

use rustc_hash::FxHashMap;
use syft_bdd::{Bdd, DdManager};

use super::progress::{canonical, emp, unfold, Step};
use super::{minimize, ExplicitDfa};
use crate::error::{Error, Result};
use crate::ltlf::{to_nnf, Formula, Partition};

/// Largest atom universe the explicit construction will enumerate.
pub const MAX_EXPLICIT_ATOMS: usize = 16;

#[derive(Debug, Clone)]
pub struct BuildOptions {
    pub max_states: usize,
    pub deadline: Option<Instant>,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            max_states: 1_000_000,
            deadline: None,
        }
    }
}

/// Shannon expansion of a state's unfolding over the literals it mentions.
enum Tree {
    Leaf(u32),
    Split {
        bit: u32,
        lo: Box<Tree>,
        hi: Box<Tree>,
    },
}

impl Tree {
    fn lookup(&self, letter: u32) -> u32 {
        let mut t = self;
        loop {
            match t {
                Tree::Leaf(s) => return *s,
                Tree::Split { bit, lo, hi } => t = if letter >> bit & 1 == 1 { hi } else { lo },
            }
        }
    }
}

/// States are identified up to propositional equivalence: a residual is
/// keyed by the diagram of its boolean skeleton, whose variables stand for
/// atoms and temporal subformulas. Those come from a finite closure, so the
/// construction terminates.
struct Builder<'a> {
    opts: &'a BuildOptions,
    states: Vec<Formula>,
    ids: FxHashMap<Bdd, u32>,
    queue: VecDeque<u32>,
    dd: DdManager,
    leaves: FxHashMap<Formula, Bdd>,
}

impl Builder<'_> {
    fn skeleton(&mut self, f: &Formula) -> Result<Bdd> {
        Ok(match f {
            Formula::True => self.dd.one(),
            Formula::False => self.dd.zero(),
            Formula::And(a, b) => {
                let (a, b) = (self.skeleton(a)?, self.skeleton(b)?);
                self.dd.and(a, b)?
            }
            Formula::Or(a, b) => {
                let (a, b) = (self.skeleton(a)?, self.skeleton(b)?);
                self.dd.or(a, b)?
            }
            Formula::Not(a) => {
                let a = self.skeleton(a)?;
                self.dd.not(a)?
            }
            leaf => {
                if let Some(&v) = self.leaves.get(leaf) {
                    return Ok(v);
                }
                let name = format!("#leaf{}", self.leaves.len());
                let id = self.dd.add_var(&name)?;
                let v = self.dd.ith_var(id)?;
                self.leaves.insert(leaf.clone(), v);
                v
            }
        })
    }

    fn intern(&mut self, f: Formula) -> Result<u32> {
        let key = self.skeleton(&f)?;
        if let Some(&id) = self.ids.get(&key) {
            return Ok(id);
        }
        if self.states.len() >= self.opts.max_states {
            return Err(Error::StateLimit(self.opts.max_states));
        }
        let id = self.states.len() as u32;
        self.states.push(f);
        self.ids.insert(key, id);
        self.queue.push_back(id);
        Ok(id)
    }

    fn expand(&mut self, step: Step) -> Result<Tree> {
        let Some(bit) = step.first_literal() else {
            return Ok(Tree::Leaf(self.intern(step.residual())?));
        };
        let lo = self.expand(step.assign(bit, false))?;
        let hi = self.expand(step.assign(bit, true))?;
        Ok(match (&lo, &hi) {
            (Tree::Leaf(a), Tree::Leaf(b)) if a == b => lo,
            _ => Tree::Split {
                bit,
                lo: Box::new(lo),
                hi: Box::new(hi),
            },
        })
    }
}

/// Builds the (unminimized) DFA of `f` with default options.
pub fn build_dfa(f: &Formula, p: &Partition) -> Result<ExplicitDfa> {
    build_dfa_with(f, p, &BuildOptions::default())
}

/// States are the residuals reachable from `to_nnf(f)`; a state
/// accepts iff its residual is discharged by the empty suffix. The initial
/// state never accepts, so only nonempty traces are in the language.
pub fn build_dfa_with(f: &Formula, p: &Partition, opts: &BuildOptions) -> Result<ExplicitDfa> {
    if p.len() > MAX_EXPLICIT_ATOMS {
        return Err(Error::TooManyAtoms {
            count: p.len(),
            limit: MAX_EXPLICIT_ATOMS,
        });
    }
    p.covers(f)?;
    let index: FxHashMap<&str, u32> = p
        .atoms()
        .enumerate()
        .map(|(k, a)| (a.as_str(), k as u32))
        .collect();
    let bit_of = |a: &str| index.get(a).copied();
    let k = 1usize << p.len();

    let mut b = Builder {
        opts,
        states: Vec::new(),
        ids: FxHashMap::default(),
        queue: VecDeque::new(),
        dd: DdManager::new(Vec::<String>::new())?,
        leaves: FxHashMap::default(),
    };
    b.intern(canonical(&to_nnf(f)))?;
    let mut delta: Vec<u32> = Vec::new();
    while let Some(s) = b.queue.pop_front() {
        if opts.deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(Error::Timeout);
        }
        let step = unfold(&b.states[s as usize], &bit_of)?;
        let tree = b.expand(step)?;
        // BFS pops states in id order, so rows are appended in order.
        debug_assert_eq!(delta.len(), s as usize * k);
        delta.extend((0..k as u32).map(|l| tree.lookup(l)));
    }

    let mut labels = b.states;
    let mut accepting = labels.iter().map(emp).collect::<Result<Vec<_>>>()?;
    let mut initial = 0;
    if accepting[0] {
        if delta.contains(&0) {
            // Interior revisits of the root stay accepting; plays enter
            // through a non-accepting copy.
            initial = labels.len();
            labels.push(labels[0].clone());
            accepting.push(false);
            delta.extend_from_within(0..k);
        } else {
            accepting[0] = false;
        }
    }
    ExplicitDfa::new(p.clone(), labels, initial, accepting, delta)
}

/// `minimize(build_dfa(f, p))`.
pub fn compile(f: &Formula, p: &Partition) -> Result<ExplicitDfa> {
    Ok(minimize(&build_dfa(f, p)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltlf::parse;

    fn single(a: &str) -> Partition {
        Partition::new(Vec::<String>::new(), [a]).unwrap()
    }

    #[test]
    fn eventually_has_two_states() {
        let d = compile(&parse("F a").unwrap(), &single("a")).unwrap();
        assert_eq!(d.num_states(), 2);
        let s0 = d.initial();
        assert!(!d.is_accepting(s0));
        assert_eq!(d.row(s0)[0] as usize, s0);
        let acc = d.row(s0)[1] as usize;
        assert!(d.is_accepting(acc));
        assert_eq!(d.row(acc), &[acc as u32, acc as u32]);
    }

    #[test]
    fn atom_has_three_states() {
        let d = compile(&parse("a").unwrap(), &single("a")).unwrap();
        assert_eq!(d.num_states(), 3);
        assert_eq!(d.accepting_states().len(), 1);
    }

    #[test]
    fn tautology_keeps_a_non_accepting_entry() {
        let d = compile(&Formula::True, &single("a")).unwrap();
        assert_eq!(d.num_states(), 2);
        assert!(!d.is_accepting(d.initial()));
        assert!(d.accepts(&[0]));
        assert!(!d.accepts(&[]));
    }

    #[test]
    fn re_entered_root_is_split() {
        let f = parse("G a").unwrap();
        let d = build_dfa(&f, &single("a")).unwrap();
        assert_ne!(d.initial(), 0);
        assert!(d.is_accepting(0));
        assert!(!d.is_accepting(d.initial()));
        assert!(d.accepts(&[1, 1]));
        assert!(!d.accepts(&[1, 0]));
    }

    #[test]
    fn guards() {
        let f = parse("a").unwrap();
        let names: Vec<String> = (0..17).map(|i| format!("p{i}")).collect();
        let wide = Partition::new(names, Vec::<String>::new()).unwrap();
        assert!(matches!(
            build_dfa(&parse("p0").unwrap(), &wide),
            Err(Error::TooManyAtoms { count: 17, .. })
        ));
        assert!(matches!(
            build_dfa(&f, &single("b")),
            Err(Error::UnknownAtom(_))
        ));
        let opts = BuildOptions {
            max_states: 2,
            deadline: None,
        };
        assert!(matches!(
            build_dfa_with(&f, &single("a"), &opts),
            Err(Error::StateLimit(2))
        ));
    }
}
