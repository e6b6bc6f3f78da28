use std::collections::VecDeque;

use super::ExplicitDfa;

/// Hopcroft partition refinement over the reachable part, states renumbered
/// in BFS order from the initial state.
pub fn minimize(d: &ExplicitDfa) -> ExplicitDfa {
    let k = d.num_letters();
    let order = bfs_order(d, |s| d.row(s).iter().map(|&t| t as usize));
    let mut compact = vec![usize::MAX; d.num_states()];
    for (i, &s) in order.iter().enumerate() {
        compact[s] = i;
    }
    let n = order.len();
    let delta: Vec<usize> = order
        .iter()
        .flat_map(|&s| d.row(s).iter().map(|&t| compact[t as usize]))
        .collect();
    let accepting: Vec<bool> = order.iter().map(|&s| d.is_accepting(s)).collect();

    let block_of = refine(n, k, &delta, &accepting);

    // Quotient, numbered by BFS from the initial block.
    let mut representative = vec![usize::MAX; n];
    for s in (0..n).rev() {
        representative[block_of[s]] = s;
    }
    let quotient_order = {
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let mut queue = VecDeque::from([block_of[0]]);
        seen[block_of[0]] = true;
        while let Some(b) = queue.pop_front() {
            out.push(b);
            let r = representative[b];
            for &t in &delta[r * k..(r + 1) * k] {
                let c = block_of[t];
                if !seen[c] {
                    seen[c] = true;
                    queue.push_back(c);
                }
            }
        }
        out
    };
    let mut number = vec![usize::MAX; n];
    for (i, &b) in quotient_order.iter().enumerate() {
        number[b] = i;
    }
    let m = quotient_order.len();
    let mut labels = Vec::with_capacity(m);
    let mut acc = Vec::with_capacity(m);
    let mut table = Vec::with_capacity(m * k);
    for &b in &quotient_order {
        let r = representative[b];
        labels.push(d.label(order[r]).clone());
        acc.push(accepting[r]);
        table.extend(
            delta[r * k..(r + 1) * k]
                .iter()
                .map(|&t| number[block_of[t]] as u32),
        );
    }
    ExplicitDfa::new(d.partition().clone(), labels, 0, acc, table)
        .expect("quotient of a valid automaton is valid")
}

fn bfs_order<I>(d: &ExplicitDfa, succ: impl Fn(usize) -> I) -> Vec<usize>
where
    I: Iterator<Item = usize>,
{
    let mut seen = vec![false; d.num_states()];
    let mut order = vec![d.initial()];
    seen[d.initial()] = true;
    let mut head = 0;
    while head < order.len() {
        let s = order[head];
        head += 1;
        for t in succ(s) {
            if !seen[t] {
                seen[t] = true;
                order.push(t);
            }
        }
    }
    order
}

/// Coarsest partition compatible with acceptance and transitions. Returns
/// the block index of every state.
fn refine(n: usize, k: usize, delta: &[usize], accepting: &[bool]) -> Vec<usize> {
    // Inverse transitions per letter in CSR form.
    let mut start = vec![0usize; k * (n + 1) + 1];
    for s in 0..n {
        for c in 0..k {
            start[c * (n + 1) + delta[s * k + c] + 1] += 1;
        }
    }
    for i in 1..start.len() {
        start[i] += start[i - 1];
    }
    let mut fill = start.clone();
    let mut preds = vec![0usize; n * k];
    for s in 0..n {
        for c in 0..k {
            let slot = c * (n + 1) + delta[s * k + c];
            preds[fill[slot]] = s;
            fill[slot] += 1;
        }
    }

    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut block_of = vec![0usize; n];
    for flag in [false, true] {
        let members: Vec<usize> = (0..n).filter(|&s| accepting[s] == flag).collect();
        if !members.is_empty() {
            for &s in &members {
                block_of[s] = blocks.len();
            }
            blocks.push(members);
        }
    }
    let mut work: Vec<usize> = (0..blocks.len()).collect();
    let mut in_work = vec![true; blocks.len()];

    let mut marked = vec![false; n];
    let mut hits = vec![0usize; n];
    let mut touched: Vec<usize> = Vec::new();
    while let Some(a) = work.pop() {
        in_work[a] = false;
        let splitter = blocks[a].clone();
        for c in 0..k {
            let mut pre = Vec::new();
            for &t in &splitter {
                let slot = c * (n + 1) + t;
                for &s in &preds[start[slot]..start[slot + 1]] {
                    if !marked[s] {
                        marked[s] = true;
                        pre.push(s);
                        let b = block_of[s];
                        if hits[b] == 0 {
                            touched.push(b);
                        }
                        hits[b] += 1;
                    }
                }
            }
            for b in touched.drain(..) {
                if hits[b] < blocks[b].len() {
                    let (inside, outside): (Vec<usize>, Vec<usize>) =
                        blocks[b].iter().partition(|&&s| marked[s]);
                    let nb = blocks.len();
                    for &s in &inside {
                        block_of[s] = nb;
                    }
                    blocks[b] = outside;
                    blocks.push(inside);
                    in_work.push(false);
                    if in_work[b] {
                        work.push(nb);
                        in_work[nb] = true;
                    } else {
                        let smaller = if blocks[b].len() <= blocks[nb].len() {
                            b
                        } else {
                            nb
                        };
                        work.push(smaller);
                        in_work[smaller] = true;
                    }
                }
                hits[b] = 0;
            }
            for s in pre {
                marked[s] = false;
            }
        }
    }
    block_of
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::build_dfa;
    use crate::ltlf::{parse, Formula, Partition};

    #[test]
    fn redundant_disjunction_collapses() {
        let p = Partition::new(["a"], Vec::<String>::new()).unwrap();
        let d1 = minimize(&build_dfa(&parse("a | a").unwrap(), &p).unwrap());
        let d2 = minimize(&build_dfa(&parse("a").unwrap(), &p).unwrap());
        assert_eq!(d1.num_states(), d2.num_states());
        for s in 0..d1.num_states() {
            assert_eq!(d1.row(s), d2.row(s));
            assert_eq!(d1.is_accepting(s), d2.is_accepting(s));
        }
    }

    #[test]
    fn idempotent() {
        let p = Partition::new(["a"], ["b"]).unwrap();
        let d = minimize(&build_dfa(&parse("a U (b & X a)").unwrap(), &p).unwrap());
        assert_eq!(minimize(&d), d);
    }

    #[test]
    fn merges_equivalent_states_and_drops_unreachable() {
        let p = Partition::new(["a"], Vec::<String>::new()).unwrap();
        // States 1 and 2 are both accepting sinks; 3 is unreachable.
        let d = ExplicitDfa::new(
            p,
            vec![Formula::False, Formula::True, Formula::True, Formula::False],
            0,
            vec![false, true, true, false],
            vec![1, 2, 1, 2, 2, 1, 3, 3],
        )
        .unwrap();
        let m = minimize(&d);
        assert_eq!(m.num_states(), 2);
        assert_eq!(m.row(0), &[1, 1]);
        assert_eq!(m.row(1), &[1, 1]);
    }
}
