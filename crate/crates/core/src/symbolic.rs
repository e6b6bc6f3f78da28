//! Binary encoding of an explicit DFA: state bits `Z`, next-state functions
//! `η` over `Z ∪ X ∪ Y` and the accepting-set function over `Z`.

use std::collections::VecDeque;

use syft_bdd::{Bdd, DdManager, VarId, DEFAULT_NODE_CAP};

use crate::automata::ExplicitDfa;
use crate::error::Result;
use crate::ltlf::Partition;

/// Symbolic automaton owning its manager. Variable order: state bits
/// `#z0..`, then inputs, then outputs, so variable `n + k` is letter bit `k`.
#[derive(Debug)]
pub struct SymbolicDfa {
    dd: DdManager,
    partition: Partition,
    z: Vec<VarId>,
    x: Vec<VarId>,
    y: Vec<VarId>,
    eta: Vec<Bdd>,
    acc: Bdd,
    codes: Vec<u32>,
    by_code: Vec<Option<usize>>,
    initial: usize,
}

/// `max(1, ⌈log2 states⌉)`.
pub fn state_bits(states: usize) -> usize {
    let mut n = 1;
    while (1usize << n) < states {
        n += 1;
    }
    n
}

pub fn encode(d: &ExplicitDfa) -> Result<SymbolicDfa> {
    encode_with_cap(d, DEFAULT_NODE_CAP)
}

/// Codes follow BFS order from the initial state, which gets code 0. Codes
/// without a state loop to themselves and do not accept.
pub fn encode_with_cap(d: &ExplicitDfa, node_cap: usize) -> Result<SymbolicDfa> {
    let p = d.partition().clone();
    let n = state_bits(d.num_states());
    let z_names = (0..n).map(|i| format!("#z{i}"));
    let names: Vec<String> = z_names.chain(p.atoms().cloned()).collect();
    let mut dd = DdManager::new(names)?.with_node_cap(node_cap);
    let z: Vec<VarId> = (0..n as u32).map(VarId).collect();
    let x: Vec<VarId> = (0..p.inputs.len()).map(|k| VarId((n + k) as u32)).collect();
    let y: Vec<VarId> = (0..p.outputs.len())
        .map(|k| VarId((n + p.inputs.len() + k) as u32))
        .collect();
    let letter_vars: Vec<VarId> = x.iter().chain(&y).copied().collect();

    let order = bfs_with_rest(d);
    let mut codes = vec![0u32; d.num_states()];
    let mut by_code = vec![None; 1 << n];
    for (c, &s) in order.iter().enumerate() {
        codes[s] = c as u32;
        by_code[c] = Some(s);
    }

    let mut eta = Vec::with_capacity(n);
    let mut table = vec![false; d.num_letters()];
    for i in 0..n {
        let mut leaves = Vec::with_capacity(1 << n);
        for c in 0..1u32 << n {
            let leaf = match by_code[c as usize] {
                Some(s) => {
                    for (slot, &t) in table.iter_mut().zip(d.row(s)) {
                        *slot = codes[t as usize] >> i & 1 == 1;
                    }
                    dd.from_truth_table(&letter_vars, &table)?
                }
                None => dd.constant(c >> i & 1 == 1),
            };
            leaves.push(leaf);
        }
        eta.push(dd.from_leaves(&z, &leaves)?);
    }
    let acc_table: Vec<bool> = by_code
        .iter()
        .map(|s| s.is_some_and(|s| d.is_accepting(s)))
        .collect();
    let acc = dd.from_truth_table(&z, &acc_table)?;
    Ok(SymbolicDfa {
        dd,
        partition: p,
        z,
        x,
        y,
        eta,
        acc,
        codes,
        by_code,
        initial: d.initial(),
    })
}

fn bfs_with_rest(d: &ExplicitDfa) -> Vec<usize> {
    let mut seen = vec![false; d.num_states()];
    let mut order = Vec::with_capacity(d.num_states());
    let mut queue = VecDeque::from([d.initial()]);
    seen[d.initial()] = true;
    while let Some(s) = queue.pop_front() {
        order.push(s);
        for &t in d.row(s) {
            if !seen[t as usize] {
                seen[t as usize] = true;
                queue.push_back(t as usize);
            }
        }
    }
    order.extend((0..d.num_states()).filter(|&s| !seen[s]));
    order
}

impl SymbolicDfa {
    pub fn dd(&self) -> &DdManager {
        &self.dd
    }

    pub fn dd_mut(&mut self) -> &mut DdManager {
        &mut self.dd
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn z_vars(&self) -> &[VarId] {
        &self.z
    }

    pub fn x_vars(&self) -> &[VarId] {
        &self.x
    }

    pub fn y_vars(&self) -> &[VarId] {
        &self.y
    }

    pub fn num_bits(&self) -> usize {
        self.z.len()
    }

    pub fn num_states(&self) -> usize {
        self.codes.len()
    }

    /// `B_i` for each state bit.
    pub fn eta(&self) -> &[Bdd] {
        &self.eta
    }

    pub fn acc(&self) -> Bdd {
        self.acc
    }

    pub fn code(&self, s: usize) -> u32 {
        self.codes[s]
    }

    pub fn z0(&self) -> u32 {
        self.codes[self.initial]
    }

    /// State with this code, if any.
    pub fn decode(&self, code: u32) -> Option<usize> {
        self.by_code.get(code as usize).copied().flatten()
    }

    /// Evaluates `f` at state code `code` and letter `letter`; variables
    /// beyond the letter width read as false.
    pub fn eval(&self, f: Bdd, code: u32, letter: u32) -> Result<bool> {
        let n = self.z.len();
        Ok(self.dd.eval(f, |v| {
            let k = v.index();
            Some(if k < n {
                code >> k & 1 == 1
            } else {
                letter >> (k - n) & 1 == 1
            })
        })?)
    }

    /// Code reached from `code` on `letter` according to `η`.
    pub fn next_code(&self, code: u32, letter: u32) -> Result<u32> {
        let mut next = 0;
        for (i, &b) in self.eta.iter().enumerate() {
            if self.eval(b, code, letter)? {
                next |= 1 << i;
            }
        }
        Ok(next)
    }

    pub fn accepting_code(&self, code: u32) -> Result<bool> {
        self.eval(self.acc, code, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::compile;
    use crate::ltlf::{parse, Formula};

    fn single(a: &str) -> Partition {
        Partition::new([a], Vec::<String>::new()).unwrap()
    }

    #[test]
    fn bit_counts() {
        assert_eq!(state_bits(1), 1);
        assert_eq!(state_bits(2), 1);
        assert_eq!(state_bits(3), 2);
        assert_eq!(state_bits(4), 2);
        assert_eq!(state_bits(5), 3);
    }

    #[test]
    fn eventually_encoding() {
        let d = compile(&parse("F a").unwrap(), &single("a")).unwrap();
        let mut sd = encode(&d).unwrap();
        let dd = sd.dd_mut();
        let z0 = dd.var("#z0").unwrap();
        let a = dd.var("a").unwrap();
        let expected = dd.or(z0, a).unwrap();
        assert_eq!(sd.eta(), &[expected]);
        assert_eq!(sd.acc(), z0);
        assert_eq!(sd.z0(), 0);
    }

    #[test]
    fn single_state_uses_one_bit() {
        let p = single("a");
        let d = ExplicitDfa::new(p, vec![Formula::True], 0, vec![true], vec![0, 0]).unwrap();
        let mut sd = encode(&d).unwrap();
        assert_eq!(sd.num_bits(), 1);
        assert_eq!(sd.next_code(0, 1).unwrap(), 0);
        assert_eq!(sd.next_code(1, 0).unwrap(), 1);
        assert!(sd.accepting_code(0).unwrap());
        assert!(!sd.accepting_code(1).unwrap());
        let dd = sd.dd_mut();
        let z0 = dd.var("#z0").unwrap();
        let nz0 = dd.not(z0).unwrap();
        assert_eq!(sd.acc(), nz0);
        assert_eq!(sd.decode(1), None);
    }

    #[test]
    fn atom_encoding_agrees() {
        let d = compile(&parse("a").unwrap(), &single("a")).unwrap();
        let sd = encode(&d).unwrap();
        assert_eq!(sd.num_bits(), 2);
        for s in 0..3 {
            assert_eq!(sd.decode(sd.code(s)), Some(s));
            for l in 0..2 {
                let next = sd.next_code(sd.code(s), l).unwrap();
                assert_eq!(
                    sd.decode(next),
                    Some(d.successor(s, crate::automata::Letter(l)))
                );
            }
        }
        assert_eq!(sd.next_code(3, 1).unwrap(), 3);
    }
}
