use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering};

use rustc_hash::FxHashMap;

use crate::{DdError, Result};

/// Default upper bound on the number of nodes a manager may allocate.
pub const DEFAULT_NODE_CAP: usize = 1 << 24;

const FALSE: u32 = 0;
const TRUE: u32 = 1;
/// Level of the two terminals: below every variable.
const TERMINAL_LEVEL: u32 = u32::MAX;

static NEXT_MANAGER_ID: AtomicU32 = AtomicU32::new(1);

/// Position of a variable in the manager's order. Smaller ids are closer to
/// the root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub u32);

impl VarId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Handle to a diagram node inside one [`DdManager`].
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bdd {
    node: u32,
    owner: u32,
}

impl fmt::Debug for Bdd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node {
            FALSE => write!(f, "Bdd(0)"),
            TRUE => write!(f, "Bdd(1)"),
            n => write!(f, "Bdd(#{n})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) struct Node {
    pub(crate) var: u32,
    pub(crate) lo: u32,
    pub(crate) hi: u32,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum QuantOp {
    Exists,
    Forall,
}

/// Owner of a set of shared, reduced, ordered diagrams.
///
/// All operations on one manager must be serialized by the caller. Handles
/// are tagged with the manager that created them and are rejected by any
/// other manager.
pub struct DdManager {
    id: u32,
    names: Vec<String>,
    by_name: HashMap<String, VarId>,
    pub(crate) nodes: Vec<Node>,
    unique: FxHashMap<Node, u32>,
    ite_cache: FxHashMap<(u32, u32, u32), u32>,
    quant_cache: FxHashMap<(QuantOp, u32, u32), u32>,
    node_cap: usize,
}

impl fmt::Debug for DdManager {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DdManager")
            .field("vars", &self.names)
            .field("nodes", &self.nodes.len())
            .finish()
    }
}

impl DdManager {
    /// Creates a manager whose variable order is the iteration order of `vars`.
    pub fn new<I, S>(vars: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut names = Vec::new();
        let mut by_name = HashMap::new();
        for name in vars {
            let name = name.into();
            let id = VarId(names.len() as u32);
            if by_name.insert(name.clone(), id).is_some() {
                return Err(DdError::DuplicateVariable(name));
            }
            names.push(name);
        }
        let terminal = |v| Node {
            var: TERMINAL_LEVEL,
            lo: v,
            hi: v,
        };
        Ok(DdManager {
            id: NEXT_MANAGER_ID.fetch_add(1, Ordering::Relaxed),
            names,
            by_name,
            nodes: vec![terminal(FALSE), terminal(TRUE)],
            unique: FxHashMap::default(),
            ite_cache: FxHashMap::default(),
            quant_cache: FxHashMap::default(),
            node_cap: DEFAULT_NODE_CAP,
        })
    }

    pub fn with_node_cap(mut self, cap: usize) -> Self {
        self.node_cap = cap.max(2);
        self
    }

    pub fn node_cap(&self) -> usize {
        self.node_cap
    }

    pub fn var_count(&self) -> usize {
        self.names.len()
    }

    /// Appends a variable below all existing ones. Existing diagrams are
    /// unaffected.
    pub fn add_var(&mut self, name: &str) -> Result<VarId> {
        let id = VarId(self.names.len() as u32);
        if self.by_name.contains_key(name) {
            return Err(DdError::DuplicateVariable(name.to_string()));
        }
        self.by_name.insert(name.to_string(), id);
        self.names.push(name.to_string());
        Ok(id)
    }

    pub fn var_name(&self, v: VarId) -> &str {
        &self.names[v.index()]
    }

    pub fn var_id(&self, name: &str) -> Result<VarId> {
        self.by_name
            .get(name)
            .copied()
            .ok_or_else(|| DdError::UnknownVariable(name.to_string()))
    }

    /// Number of nodes allocated so far, terminals included.
    pub fn allocated(&self) -> usize {
        self.nodes.len()
    }

    /// Drops the operation caches. Diagrams stay valid.
    pub fn clear_caches(&mut self) {
        self.ite_cache.clear();
        self.quant_cache.clear();
    }

    fn handle(&self, node: u32) -> Bdd {
        Bdd {
            node,
            owner: self.id,
        }
    }

    pub(crate) fn raw(&self, f: Bdd) -> Result<u32> {
        if f.owner == self.id {
            Ok(f.node)
        } else {
            Err(DdError::ManagerMismatch)
        }
    }

    pub fn constant(&self, value: bool) -> Bdd {
        self.handle(if value { TRUE } else { FALSE })
    }

    pub fn one(&self) -> Bdd {
        self.constant(true)
    }

    pub fn zero(&self) -> Bdd {
        self.constant(false)
    }

    pub fn is_one(&self, f: Bdd) -> bool {
        f.owner == self.id && f.node == TRUE
    }

    pub fn is_zero(&self, f: Bdd) -> bool {
        f.owner == self.id && f.node == FALSE
    }

    /// Projection function of the named variable.
    pub fn var(&mut self, name: &str) -> Result<Bdd> {
        let v = self.var_id(name)?;
        self.ith_var(v)
    }

    pub fn ith_var(&mut self, v: VarId) -> Result<Bdd> {
        self.check_var(v)?;
        let n = self.mk(v.0, FALSE, TRUE)?;
        Ok(self.handle(n))
    }

    pub(crate) fn check_var(&self, v: VarId) -> Result<()> {
        if v.index() < self.names.len() {
            Ok(())
        } else {
            Err(DdError::UnknownVariable(format!("#{}", v.0)))
        }
    }

    /// Top variable of a non-terminal diagram.
    pub fn top_var(&self, f: Bdd) -> Option<VarId> {
        let n = self.nodes[f.node as usize];
        (n.var != TERMINAL_LEVEL).then_some(VarId(n.var))
    }

    #[inline]
    fn level(&self, n: u32) -> u32 {
        self.nodes[n as usize].var
    }

    pub(crate) fn mk(&mut self, var: u32, lo: u32, hi: u32) -> Result<u32> {
        if lo == hi {
            return Ok(lo);
        }
        let node = Node { var, lo, hi };
        if let Some(&n) = self.unique.get(&node) {
            return Ok(n);
        }
        if self.nodes.len() >= self.node_cap {
            return Err(DdError::NodeCapExceeded(self.node_cap));
        }
        let n = self.nodes.len() as u32;
        self.nodes.push(node);
        self.unique.insert(node, n);
        Ok(n)
    }

    #[inline]
    fn cofactors(&self, n: u32, level: u32) -> (u32, u32) {
        let node = self.nodes[n as usize];
        if node.var == level {
            (node.lo, node.hi)
        } else {
            (n, n)
        }
    }

    /// If-then-else: `(g ∧ h) ∨ (¬g ∧ e)`.
    pub fn ite(&mut self, g: Bdd, h: Bdd, e: Bdd) -> Result<Bdd> {
        let (g, h, e) = (self.raw(g)?, self.raw(h)?, self.raw(e)?);
        let r = self.ite_rec(g, h, e)?;
        Ok(self.handle(r))
    }

    fn ite_rec(&mut self, f: u32, mut g: u32, mut h: u32) -> Result<u32> {
        if f == TRUE {
            return Ok(g);
        }
        if f == FALSE {
            return Ok(h);
        }
        if g == f {
            g = TRUE;
        }
        if h == f {
            h = FALSE;
        }
        if g == h {
            return Ok(g);
        }
        if g == TRUE && h == FALSE {
            return Ok(f);
        }
        let key = (f, g, h);
        if let Some(&r) = self.ite_cache.get(&key) {
            return Ok(r);
        }
        let top = self.level(f).min(self.level(g)).min(self.level(h));
        let (f0, f1) = self.cofactors(f, top);
        let (g0, g1) = self.cofactors(g, top);
        let (h0, h1) = self.cofactors(h, top);
        let hi = self.ite_rec(f1, g1, h1)?;
        let lo = self.ite_rec(f0, g0, h0)?;
        let r = self.mk(top, lo, hi)?;
        self.ite_cache.insert(key, r);
        Ok(r)
    }

    pub fn not(&mut self, f: Bdd) -> Result<Bdd> {
        let (one, zero) = (self.one(), self.zero());
        self.ite(f, zero, one)
    }

    pub fn and(&mut self, f: Bdd, g: Bdd) -> Result<Bdd> {
        let zero = self.zero();
        self.ite(f, g, zero)
    }

    pub fn or(&mut self, f: Bdd, g: Bdd) -> Result<Bdd> {
        let one = self.one();
        self.ite(f, one, g)
    }

    pub fn xor(&mut self, f: Bdd, g: Bdd) -> Result<Bdd> {
        let ng = self.not(g)?;
        self.ite(f, ng, g)
    }

    pub fn iff(&mut self, f: Bdd, g: Bdd) -> Result<Bdd> {
        let ng = self.not(g)?;
        self.ite(f, g, ng)
    }

    pub fn implies(&mut self, f: Bdd, g: Bdd) -> Result<Bdd> {
        let one = self.one();
        self.ite(f, g, one)
    }

    /// Diagram selecting `leaves[i]` where bit k of `i` is the value of
    /// `vars[k]`. `vars` must be strictly increasing and every leaf must lie
    /// below the last of them.
    pub fn from_leaves(&mut self, vars: &[VarId], leaves: &[Bdd]) -> Result<Bdd> {
        if leaves.len() != 1usize << vars.len() {
            return Err(DdError::BadTable(format!(
                "{} leaves for {} variables",
                leaves.len(),
                vars.len()
            )));
        }
        for (i, v) in vars.iter().enumerate() {
            self.check_var(*v)?;
            if i > 0 && vars[i - 1] >= *v {
                return Err(DdError::BadTable(
                    "variables are not in increasing order".into(),
                ));
            }
        }
        let mut level: Vec<u32> = leaves.iter().map(|&l| self.raw(l)).collect::<Result<_>>()?;
        if let Some(&last) = vars.last() {
            if level.iter().any(|&n| self.level(n) <= last.0) {
                return Err(DdError::BadTable(
                    "a leaf depends on a table variable".into(),
                ));
            }
        }
        for v in vars.iter().rev() {
            let half = level.len() / 2;
            let mut next = Vec::with_capacity(half);
            for i in 0..half {
                next.push(self.mk(v.0, level[i], level[i + half])?);
            }
            level = next;
        }
        Ok(self.handle(level[0]))
    }

    /// Truth table over `vars`; see [`DdManager::from_leaves`].
    pub fn from_truth_table(&mut self, vars: &[VarId], table: &[bool]) -> Result<Bdd> {
        let leaves: Vec<Bdd> = table.iter().map(|&b| self.constant(b)).collect();
        self.from_leaves(vars, &leaves)
    }

    /// Conjunction of the given variables, used as a quantification set.
    pub fn cube(&mut self, vars: &[VarId]) -> Result<Bdd> {
        let mut sorted = vars.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut acc = TRUE;
        for &v in sorted.iter().rev() {
            self.check_var(v)?;
            acc = self.mk(v.0, FALSE, acc)?;
        }
        Ok(self.handle(acc))
    }

    /// Existential abstraction of `vars` from `f`.
    pub fn exists(&mut self, vars: &[VarId], f: Bdd) -> Result<Bdd> {
        let f = self.raw(f)?;
        let cube = self.cube(vars)?.node;
        let r = self.quant_rec(QuantOp::Exists, f, cube)?;
        Ok(self.handle(r))
    }

    /// Universal abstraction of `vars` from `f`.
    pub fn forall(&mut self, vars: &[VarId], f: Bdd) -> Result<Bdd> {
        let f = self.raw(f)?;
        let cube = self.cube(vars)?.node;
        let r = self.quant_rec(QuantOp::Forall, f, cube)?;
        Ok(self.handle(r))
    }

    fn quant_rec(&mut self, op: QuantOp, f: u32, mut cube: u32) -> Result<u32> {
        if f <= TRUE {
            return Ok(f);
        }
        let fv = self.level(f);
        while cube != TRUE && self.level(cube) < fv {
            cube = self.nodes[cube as usize].hi;
        }
        if cube == TRUE {
            return Ok(f);
        }
        let key = (op, f, cube);
        if let Some(&r) = self.quant_cache.get(&key) {
            return Ok(r);
        }
        let Node { lo, hi, .. } = self.nodes[f as usize];
        let r = if self.level(cube) == fv {
            let rest = self.nodes[cube as usize].hi;
            let lo = self.quant_rec(op, lo, rest)?;
            // Short-circuit on the absorbing constant.
            match (op, lo) {
                (QuantOp::Exists, TRUE) => TRUE,
                (QuantOp::Forall, FALSE) => FALSE,
                _ => {
                    let hi = self.quant_rec(op, hi, rest)?;
                    match op {
                        QuantOp::Exists => self.ite_rec(lo, TRUE, hi)?,
                        QuantOp::Forall => self.ite_rec(lo, hi, FALSE)?,
                    }
                }
            }
        } else {
            let lo = self.quant_rec(op, lo, cube)?;
            let hi = self.quant_rec(op, hi, cube)?;
            self.mk(fv, lo, hi)?
        };
        self.quant_cache.insert(key, r);
        Ok(r)
    }

    /// Cofactor of `f` with `v` fixed to `value`.
    pub fn restrict(&mut self, f: Bdd, v: VarId, value: bool) -> Result<Bdd> {
        let c = self.constant(value);
        self.vector_compose(f, &[(v, c)])
    }

    /// Substitutes `g` for `v` in `f`.
    pub fn compose(&mut self, f: Bdd, v: VarId, g: Bdd) -> Result<Bdd> {
        self.vector_compose(f, &[(v, g)])
    }

    /// Simultaneous substitution: every variable `v` listed in `subst` is
    /// replaced by its diagram, all others stay as they are.
    pub fn vector_compose(&mut self, f: Bdd, subst: &[(VarId, Bdd)]) -> Result<Bdd> {
        let f = self.raw(f)?;
        let mut table: Vec<Option<u32>> = vec![None; self.names.len()];
        for &(v, g) in subst {
            self.check_var(v)?;
            table[v.index()] = Some(self.raw(g)?);
        }
        let mut memo = FxHashMap::default();
        let r = self.compose_rec(f, &table, &mut memo)?;
        Ok(self.handle(r))
    }

    fn compose_rec(
        &mut self,
        f: u32,
        table: &[Option<u32>],
        memo: &mut FxHashMap<u32, u32>,
    ) -> Result<u32> {
        if f <= TRUE {
            return Ok(f);
        }
        if let Some(&r) = memo.get(&f) {
            return Ok(r);
        }
        let Node { var, lo, hi } = self.nodes[f as usize];
        let lo = self.compose_rec(lo, table, memo)?;
        let hi = self.compose_rec(hi, table, memo)?;
        let g = match table[var as usize] {
            Some(g) => g,
            None => self.mk(var, FALSE, TRUE)?,
        };
        let r = self.ite_rec(g, hi, lo)?;
        memo.insert(f, r);
        Ok(r)
    }

    /// Evaluates `f` under `assign`. Only variables on the taken path are
    /// queried; a `None` answer for one of them is an error.
    pub fn eval<A>(&self, f: Bdd, assign: A) -> Result<bool>
    where
        A: Fn(VarId) -> Option<bool>,
    {
        let mut n = self.raw(f)?;
        while n > TRUE {
            let node = self.nodes[n as usize];
            let v = VarId(node.var);
            let value =
                assign(v).ok_or_else(|| DdError::MissingValue(self.names[v.index()].clone()))?;
            n = if value { node.hi } else { node.lo };
        }
        Ok(n == TRUE)
    }

    /// Evaluates `f` on a full assignment indexed by variable id.
    pub fn eval_bits(&self, f: Bdd, bits: &[bool]) -> Result<bool> {
        self.eval(f, |v| bits.get(v.index()).copied())
    }

    /// Evaluates `f` on named values.
    pub fn eval_named(&self, f: Bdd, values: &HashMap<&str, bool>) -> Result<bool> {
        self.eval(f, |v| values.get(self.names[v.index()].as_str()).copied())
    }

    /// Variables `f` depends on, in order.
    pub fn support(&self, f: Bdd) -> Result<Vec<VarId>> {
        let root = self.raw(f)?;
        let mut seen = rustc_hash::FxHashSet::default();
        let mut vars = std::collections::BTreeSet::new();
        let mut stack = vec![root];
        while let Some(n) = stack.pop() {
            if n <= TRUE || !seen.insert(n) {
                continue;
            }
            let node = self.nodes[n as usize];
            vars.insert(VarId(node.var));
            stack.push(node.lo);
            stack.push(node.hi);
        }
        Ok(vars.into_iter().collect())
    }

    /// Number of distinct nodes reachable from `f`, terminals included.
    pub fn node_count(&self, f: Bdd) -> Result<usize> {
        let root = self.raw(f)?;
        let mut seen = rustc_hash::FxHashSet::default();
        let mut stack = vec![root];
        while let Some(n) = stack.pop() {
            if !seen.insert(n) || n <= TRUE {
                continue;
            }
            let node = self.nodes[n as usize];
            stack.push(node.lo);
            stack.push(node.hi);
        }
        Ok(seen.len())
    }

    /// `(var, low, high)` of a non-terminal node.
    pub fn node_parts(&self, f: Bdd) -> Result<Option<(VarId, Bdd, Bdd)>> {
        let n = self.raw(f)?;
        if n <= TRUE {
            return Ok(None);
        }
        let node = self.nodes[n as usize];
        Ok(Some((
            VarId(node.var),
            self.handle(node.lo),
            self.handle(node.hi),
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mgr() -> DdManager {
        DdManager::new(["x", "y", "z"]).unwrap()
    }

    #[test]
    fn constants_and_vars() {
        let mut m = mgr();
        assert!(m.is_one(m.constant(true)));
        let x = m.var("x").unwrap();
        let y = m.var("y").unwrap();
        assert_ne!(x, y);
        assert!(m.eval_bits(x, &[true, false, false]).unwrap());
        assert!(!m.eval_bits(x, &[false, false, false]).unwrap());
        assert!(!m.eval_bits(m.zero(), &[]).unwrap());
        assert_eq!(m.var("w"), Err(DdError::UnknownVariable("w".into())));
    }

    #[test]
    fn ite_identities() {
        let mut m = mgr();
        let x = m.var("x").unwrap();
        let (one, zero) = (m.one(), m.zero());
        assert_eq!(m.ite(x, one, zero).unwrap(), x);
        let nx = m.not(x).unwrap();
        assert_eq!(m.and(x, nx).unwrap(), zero);
        assert_eq!(m.or(x, nx).unwrap(), one);
    }

    #[test]
    fn quantifiers() {
        let mut m = mgr();
        let x = m.var("x").unwrap();
        let y = m.var("y").unwrap();
        let xv = m.var_id("x").unwrap();
        let yv = m.var_id("y").unwrap();
        let xy = m.and(x, y).unwrap();
        assert_eq!(m.exists(&[xv], xy).unwrap(), y);
        let x_or_y = m.or(x, y).unwrap();
        assert_eq!(m.forall(&[xv], x_or_y).unwrap(), y);
        let xor = m.xor(x, y).unwrap();
        let inner = m.exists(&[yv], xor).unwrap();
        let all = m.forall(&[xv], inner).unwrap();
        assert!(m.is_one(all));
        // Quantifying a variable outside the support is the identity.
        let zv = m.var_id("z").unwrap();
        assert_eq!(m.exists(&[zv], xy).unwrap(), xy);
    }

    #[test]
    fn compose_examples() {
        let mut m = DdManager::new(["z0", "z1", "x", "y"]).unwrap();
        let z0 = m.var("z0").unwrap();
        let z1 = m.var("z1").unwrap();
        let x = m.var("x").unwrap();
        let y = m.var("y").unwrap();
        let (v0, v1) = (m.var_id("z0").unwrap(), m.var_id("z1").unwrap());
        let xy = m.and(x, y).unwrap();
        assert_eq!(m.vector_compose(z0, &[(v0, xy)]).unwrap(), xy);
        let both = m.and(z0, z1).unwrap();
        assert_eq!(m.vector_compose(both, &[(v0, x), (v1, x)]).unwrap(), x);
        // Simultaneous, not sequential: swap z0 and z1.
        let nz1 = m.not(z1).unwrap();
        let f = m.and(z0, nz1).unwrap();
        let swapped = m.vector_compose(f, &[(v0, z1), (v1, z0)]).unwrap();
        let nz0 = m.not(z0).unwrap();
        assert_eq!(swapped, m.and(z1, nz0).unwrap());
    }

    #[test]
    fn eval_reports_missing_value() {
        let mut m = mgr();
        let x = m.var("x").unwrap();
        let y = m.var("y").unwrap();
        let f = m.and(x, y).unwrap();
        assert_eq!(
            m.eval(f, |v| (v.0 == 0).then_some(true)),
            Err(DdError::MissingValue("y".into()))
        );
        // Short path does not need y.
        assert_eq!(m.eval(f, |v| (v.0 == 0).then_some(false)), Ok(false));
    }

    #[test]
    fn foreign_handles_are_rejected() {
        let mut a = mgr();
        let mut b = mgr();
        let xa = a.var("x").unwrap();
        let xb = b.var("x").unwrap();
        assert_eq!(a.and(xa, xb), Err(DdError::ManagerMismatch));
    }

    #[test]
    fn node_cap_is_enforced() {
        let mut m = DdManager::new(["a", "b", "c", "d"])
            .unwrap()
            .with_node_cap(4);
        let a = m.var("a").unwrap();
        let b = m.var("b").unwrap();
        assert_eq!(m.and(a, b), Err(DdError::NodeCapExceeded(4)));
    }

    #[test]
    fn appended_variables_sit_below() {
        let mut m = DdManager::new(["a"]).unwrap();
        let a = m.var("a").unwrap();
        let b = m.add_var("b").unwrap();
        assert!(m.add_var("a").is_err());
        let vb = m.ith_var(b).unwrap();
        let f = m.and(a, vb).unwrap();
        assert_eq!(m.top_var(f), Some(m.var_id("a").unwrap()));
        assert!(m.eval_bits(f, &[true, true]).unwrap());
        assert!(!m.eval_bits(f, &[true, false]).unwrap());
    }

    #[test]
    fn tables() {
        let mut m = DdManager::new(["a", "b", "c"]).unwrap();
        let ids: Vec<VarId> = (0..3).map(VarId).collect();
        let table: Vec<bool> = (0..8u32).map(|i| i.count_ones() % 2 == 1).collect();
        let f = m.from_truth_table(&ids, &table).unwrap();
        for (i, &expected) in table.iter().enumerate() {
            let bits: Vec<bool> = (0..3).map(|k| i >> k & 1 == 1).collect();
            assert_eq!(m.eval_bits(f, &bits).unwrap(), expected);
        }
        let c = m.var("c").unwrap();
        let nc = m.not(c).unwrap();
        let g = m.from_leaves(&ids[..2], &[c, nc, nc, c]).unwrap();
        assert_eq!(g, f);
        assert!(m.from_leaves(&ids[1..], &[c, c, c, c]).is_err());
        assert!(m.from_truth_table(&[ids[1], ids[0]], &[true; 4]).is_err());
        assert!(m.from_truth_table(&ids, &[true; 4]).is_err());
    }

    #[test]
    fn duplicate_names_rejected() {
        assert_eq!(
            DdManager::new(["a", "a"]).unwrap_err(),
            DdError::DuplicateVariable("a".into())
        );
    }

    #[test]
    fn support_and_size() {
        let mut m = mgr();
        let x = m.var("x").unwrap();
        let z = m.var("z").unwrap();
        let f = m.xor(x, z).unwrap();
        assert_eq!(m.support(f).unwrap(), vec![VarId(0), VarId(2)]);
        assert_eq!(m.node_count(f).unwrap(), 5);
    }
}
