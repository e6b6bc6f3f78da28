//! Diagram operations checked against brute-force truth tables.

use std::collections::HashMap;

use proptest::prelude::*;
use syft_bdd::{Bdd, DdManager, VarId};

const VARS: usize = 4;

/// Truth table over `VARS` variables, bit `a` is the value on assignment `a`
/// (variable i = bit i of `a`).
type Table = u16;

fn var_table(i: usize) -> Table {
    (0..(1u32 << VARS))
        .filter(|a| a >> i & 1 == 1)
        .fold(0, |t, a| t | 1 << a)
}

fn table_of(m: &DdManager, f: Bdd) -> Table {
    (0..(1usize << VARS)).fold(0, |t, a| {
        let bits: Vec<bool> = (0..VARS).map(|i| a >> i & 1 == 1).collect();
        if m.eval_bits(f, &bits).unwrap() {
            t | 1 << a
        } else {
            t
        }
    })
}

fn manager() -> DdManager {
    DdManager::new((0..VARS).map(|i| format!("v{i}"))).unwrap()
}

/// Brute-force existential quantification of variable `i`.
fn table_exists(t: Table, i: usize) -> Table {
    (0..(1usize << VARS)).fold(0, |acc, a| {
        let a0 = a & !(1 << i);
        let a1 = a | 1 << i;
        if t >> a0 & 1 == 1 || t >> a1 & 1 == 1 {
            acc | 1 << a
        } else {
            acc
        }
    })
}

fn table_forall(t: Table, i: usize) -> Table {
    !table_exists(!t, i)
}

#[derive(Debug, Clone)]
enum Op {
    And(usize, usize),
    Or(usize, usize),
    Xor(usize, usize),
    Not(usize),
    Ite(usize, usize, usize),
    Exists(usize, usize),
    Forall(usize, usize),
}

fn op_strategy() -> impl Strategy<Value = Op> {
    prop_oneof![
        (any::<usize>(), any::<usize>()).prop_map(|(a, b)| Op::And(a, b)),
        (any::<usize>(), any::<usize>()).prop_map(|(a, b)| Op::Or(a, b)),
        (any::<usize>(), any::<usize>()).prop_map(|(a, b)| Op::Xor(a, b)),
        any::<usize>().prop_map(Op::Not),
        (any::<usize>(), any::<usize>(), any::<usize>()).prop_map(|(a, b, c)| Op::Ite(a, b, c)),
        (any::<usize>(), 0..VARS).prop_map(|(a, v)| Op::Exists(a, v)),
        (any::<usize>(), 0..VARS).prop_map(|(a, v)| Op::Forall(a, v)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// Semantic equality coincides with handle identity, and every operation
    /// matches its truth-table definition.
    #[test]
    fn canonical_and_pointwise_correct(script in prop::collection::vec(op_strategy(), 1..40)) {
        let mut m = manager();
        let mut pool: Vec<(Bdd, Table)> = vec![(m.zero(), 0), (m.one(), Table::MAX)];
        for i in 0..VARS {
            let v = m.ith_var(VarId(i as u32)).unwrap();
            pool.push((v, var_table(i)));
        }
        for op in script {
            let pick = |k: usize| pool[k % pool.len()];
            let (f, t) = match op {
                Op::And(a, b) => { let (x, y) = (pick(a), pick(b)); (m.and(x.0, y.0).unwrap(), x.1 & y.1) }
                Op::Or(a, b) => { let (x, y) = (pick(a), pick(b)); (m.or(x.0, y.0).unwrap(), x.1 | y.1) }
                Op::Xor(a, b) => { let (x, y) = (pick(a), pick(b)); (m.xor(x.0, y.0).unwrap(), x.1 ^ y.1) }
                Op::Not(a) => { let x = pick(a); (m.not(x.0).unwrap(), !x.1) }
                Op::Ite(a, b, c) => {
                    let (x, y, z) = (pick(a), pick(b), pick(c));
                    (m.ite(x.0, y.0, z.0).unwrap(), (x.1 & y.1) | (!x.1 & z.1))
                }
                Op::Exists(a, v) => { let x = pick(a); (m.exists(&[VarId(v as u32)], x.0).unwrap(), table_exists(x.1, v)) }
                Op::Forall(a, v) => { let x = pick(a); (m.forall(&[VarId(v as u32)], x.0).unwrap(), table_forall(x.1, v)) }
            };
            prop_assert_eq!(table_of(&m, f), t);
            pool.push((f, t));
        }
        let mut by_table: HashMap<Table, Bdd> = HashMap::new();
        for (f, t) in pool {
            if let Some(&g) = by_table.get(&t) {
                prop_assert_eq!(f, g);
            } else {
                by_table.insert(t, f);
            }
        }
        let handles: std::collections::HashSet<Bdd> = by_table.values().copied().collect();
        prop_assert_eq!(handles.len(), by_table.len());
    }

    /// forall(V, f) = not(exists(V, not f)).
    #[test]
    fn quantifier_duality(table in any::<u16>(), mask in 0u8..16) {
        let mut m = manager();
        let f = from_table(&mut m, table);
        let vars: Vec<VarId> = (0..VARS).filter(|i| mask >> i & 1 == 1).map(|i| VarId(i as u32)).collect();
        let lhs = m.forall(&vars, f).unwrap();
        let nf = m.not(f).unwrap();
        let e = m.exists(&vars, nf).unwrap();
        let rhs = m.not(e).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    /// Random f over z0..z2 with each z replaced by a function of the
    /// remaining variable; compared against brute-force substitution.
    #[test]
    fn vector_compose_matches_enumeration(f_table in any::<u8>(), subs in prop::collection::vec(0u8..4, 3)) {
        // Variables: z0 z1 z2 x. Substitutions map each z to a function of x
        // picked from {0, 1, x, !x}.
        let mut m = manager();
        let f = from_table_3(&mut m, f_table);
        let x = m.ith_var(VarId(3)).unwrap();
        let nx = m.not(x).unwrap();
        let choices = [m.zero(), m.one(), x, nx];
        let subst: Vec<(VarId, Bdd)> = subs.iter().enumerate().map(|(i, &c)| (VarId(i as u32), choices[c as usize])).collect();
        let g = m.vector_compose(f, &subst).unwrap();
        for a in 0..16usize {
            let bits: Vec<bool> = (0..VARS).map(|i| a >> i & 1 == 1).collect();
            let xv = bits[3];
            let zs: Vec<bool> = subs.iter().map(|&c| match c { 0 => false, 1 => true, 2 => xv, _ => !xv }).collect();
            let idx = zs.iter().enumerate().fold(0usize, |acc, (i, &b)| acc | (b as usize) << i);
            prop_assert_eq!(m.eval_bits(g, &bits).unwrap(), f_table >> idx & 1 == 1);
        }
    }

    /// With disjoint substitution supports, simultaneous composition equals
    /// sequential single-variable composition.
    #[test]
    fn vector_compose_agrees_with_sequential(f_table in any::<u16>(), g_table in any::<u16>(), h_table in any::<u16>()) {
        let mut m = manager();
        let f = from_table(&mut m, f_table);
        // Substitutes for v0 and v1 built over v2 and v3 only.
        let g = from_table_over(&mut m, g_table & 0x0f, &[2, 3]);
        let h = from_table_over(&mut m, h_table & 0x0f, &[2, 3]);
        let simultaneous = m.vector_compose(f, &[(VarId(0), g), (VarId(1), h)]).unwrap();
        let step = m.compose(f, VarId(0), g).unwrap();
        let sequential = m.compose(step, VarId(1), h).unwrap();
        prop_assert_eq!(simultaneous, sequential);
    }
}

fn from_table(m: &mut DdManager, t: Table) -> Bdd {
    from_table_over(m, t, &[0, 1, 2, 3])
}

fn from_table_3(m: &mut DdManager, t: u8) -> Bdd {
    from_table_over(m, t as Table, &[0, 1, 2])
}

/// Function of the listed variables whose table (indexed by their bits in
/// list order) is `t`.
fn from_table_over(m: &mut DdManager, t: Table, vars: &[u32]) -> Bdd {
    let mut acc = m.zero();
    for a in 0..(1usize << vars.len()) {
        if t >> a & 1 == 1 {
            let mut minterm = m.one();
            for (i, &v) in vars.iter().enumerate() {
                let var = m.ith_var(VarId(v)).unwrap();
                let lit = if a >> i & 1 == 1 {
                    var
                } else {
                    m.not(var).unwrap()
                };
                minterm = m.and(minterm, lit).unwrap();
            }
            acc = m.or(acc, minterm).unwrap();
        }
    }
    acc
}

#[test]
fn forall_exists_xor_is_tautology() {
    let mut m = DdManager::new(["x", "y"]).unwrap();
    let x = m.var("x").unwrap();
    let y = m.var("y").unwrap();
    let f = m.xor(x, y).unwrap();
    let e = m.exists(&[VarId(1)], f).unwrap();
    let a = m.forall(&[VarId(0)], e).unwrap();
    assert!(m.is_one(a));
}
