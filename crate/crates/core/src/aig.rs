//! Sequential and-inverter graphs.
//!
//! Nodes are stored in a flat table indexed by id. Node 0 is the constant,
//! and every AND node refers only to nodes with smaller ids, so the id order
//! is always a topological order of the combinational logic. Latches keep
//! their next-state literal and initial value in a side table.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{BitXor, Not};

use thiserror::Error;

/// Index of a node in an [`Aig`].
pub type NodeId = u32;

/// A reference to a node with an optional complement, packed as
/// `2 * node + complemented` (the AIGER convention).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Lit(u32);

impl Lit {
    pub const FALSE: Lit = Lit(0);
    pub const TRUE: Lit = Lit(1);

    #[inline]
    pub fn new(node: NodeId, complemented: bool) -> Lit {
        Lit((node << 1) | complemented as u32)
    }

    #[inline]
    pub fn constant(value: bool) -> Lit {
        Lit(value as u32)
    }

    #[inline]
    pub fn from_raw(raw: u32) -> Lit {
        Lit(raw)
    }

    #[inline]
    pub fn raw(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn node(self) -> NodeId {
        self.0 >> 1
    }

    #[inline]
    pub fn is_complemented(self) -> bool {
        self.0 & 1 == 1
    }

    #[inline]
    pub fn is_const(self) -> bool {
        self.0 < 2
    }

    /// The literal with its complement bit cleared.
    #[inline]
    pub fn regular(self) -> Lit {
        Lit(self.0 & !1)
    }
}

impl Not for Lit {
    type Output = Lit;

    #[inline]
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl BitXor<bool> for Lit {
    type Output = Lit;

    #[inline]
    fn bitxor(self, rhs: bool) -> Lit {
        Lit(self.0 ^ rhs as u32)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            0 => write!(f, "0"),
            1 => write!(f, "1"),
            _ if self.is_complemented() => write!(f, "!n{}", self.node()),
            _ => write!(f, "n{}", self.node()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Const,
    /// Primary input, with its position in the input list.
    Input(u32),
    /// Register output, with the index of its latch.
    Latch(u32),
    And(Lit, Lit),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Latch {
    /// Node id of the register output.
    pub ro: NodeId,
    /// Register input.
    pub next: Lit,
    pub init: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Stats {
    pub and_count: usize,
    pub level_count: u32,
    pub latch_count: usize,
    pub pi_count: usize,
    pub po_count: usize,
}

impl fmt::Display for Stats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "i/o = {}/{}  and = {}  lev = {}  ff = {}",
            self.pi_count, self.po_count, self.and_count, self.level_count, self.latch_count
        )
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AigError {
    #[error("literal {0:?} refers to a node that does not exist")]
    InvalidLiteral(Lit),
    #[error("node {0} is not an AND node")]
    NotAnAnd(NodeId),
    #[error("fanin slot {0} out of range")]
    BadFaninSlot(usize),
    #[error("literal {lit:?} is not below node {node} in topological order")]
    OrderViolation { node: NodeId, lit: Lit },
    #[error("latch index {0} out of range")]
    LatchIndex(usize),
    #[error("output index {0} out of range")]
    OutputIndex(usize),
}

/// A sequential and-inverter graph with structural hashing.
#[derive(Clone, Debug)]
pub struct Aig {
    nodes: Vec<Node>,
    inputs: Vec<NodeId>,
    latches: Vec<Latch>,
    outputs: Vec<Lit>,
    strash: HashMap<(Lit, Lit), NodeId>,
    /// AIGER symbol table lines, kept verbatim.
    pub symbols: Vec<String>,
    /// AIGER comment section, kept verbatim.
    pub comment: Option<String>,
}

impl Default for Aig {
    fn default() -> Self {
        Aig::new()
    }
}

impl PartialEq for Aig {
    fn eq(&self, other: &Self) -> bool {
        self.nodes == other.nodes
            && self.inputs == other.inputs
            && self.latches == other.latches
            && self.outputs == other.outputs
    }
}

impl Eq for Aig {}

#[inline]
fn hash_key(a: Lit, b: Lit) -> (Lit, Lit) {
    if a >= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl Aig {
    pub fn new() -> Aig {
        Aig {
            nodes: vec![Node::Const],
            inputs: Vec::new(),
            latches: Vec::new(),
            outputs: Vec::new(),
            strash: HashMap::new(),
            symbols: Vec::new(),
            comment: None,
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> Node {
        self.nodes[id as usize]
    }

    pub fn inputs(&self) -> &[NodeId] {
        &self.inputs
    }

    pub fn latches(&self) -> &[Latch] {
        &self.latches
    }

    pub fn outputs(&self) -> &[Lit] {
        &self.outputs
    }

    pub fn num_inputs(&self) -> usize {
        self.inputs.len()
    }

    pub fn num_latches(&self) -> usize {
        self.latches.len()
    }

    pub fn num_outputs(&self) -> usize {
        self.outputs.len()
    }

    pub fn num_ands(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, Node::And(..)))
            .count()
    }

    #[inline]
    pub fn is_and(&self, id: NodeId) -> bool {
        matches!(self.nodes.get(id as usize), Some(Node::And(..)))
    }

    #[inline]
    pub fn fanins(&self, id: NodeId) -> Option<[Lit; 2]> {
        match self.nodes.get(id as usize) {
            Some(Node::And(a, b)) => Some([*a, *b]),
            _ => None,
        }
    }

    /// Iterator over the ids of all AND nodes in topological order.
    pub fn and_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| matches!(n, Node::And(..)))
            .map(|(i, _)| i as NodeId)
    }

    #[inline]
    pub fn is_valid(&self, lit: Lit) -> bool {
        (lit.node() as usize) < self.nodes.len()
    }

    fn check_lit(&self, lit: Lit) -> Result<(), AigError> {
        if self.is_valid(lit) {
            Ok(())
        } else {
            Err(AigError::InvalidLiteral(lit))
        }
    }

    pub fn add_input(&mut self) -> Lit {
        let id = self.nodes.len() as NodeId;
        self.nodes.push(Node::Input(self.inputs.len() as u32));
        self.inputs.push(id);
        Lit::new(id, false)
    }

    /// Adds a register whose next state is constant 0 until
    /// [`Aig::set_latch_next`] is called. Returns the register output.
    pub fn add_latch(&mut self, init: bool) -> Lit {
        let id = self.nodes.len() as NodeId;
        self.nodes.push(Node::Latch(self.latches.len() as u32));
        self.latches.push(Latch {
            ro: id,
            next: Lit::FALSE,
            init,
        });
        Lit::new(id, false)
    }

    pub fn set_latch_next(&mut self, latch: usize, next: Lit) -> Result<(), AigError> {
        self.check_lit(next)?;
        let l = self
            .latches
            .get_mut(latch)
            .ok_or(AigError::LatchIndex(latch))?;
        l.next = next;
        Ok(())
    }

    pub fn set_latch_init(&mut self, latch: usize, init: bool) -> Result<(), AigError> {
        let l = self
            .latches
            .get_mut(latch)
            .ok_or(AigError::LatchIndex(latch))?;
        l.init = init;
        Ok(())
    }

    pub fn add_output(&mut self, lit: Lit) -> Result<usize, AigError> {
        self.check_lit(lit)?;
        self.outputs.push(lit);
        Ok(self.outputs.len() - 1)
    }

    pub fn set_output(&mut self, index: usize, lit: Lit) -> Result<(), AigError> {
        self.check_lit(lit)?;
        let o = self
            .outputs
            .get_mut(index)
            .ok_or(AigError::OutputIndex(index))?;
        *o = lit;
        Ok(())
    }

    /// AND of two literals with constant folding and structural hashing.
    pub fn add_and(&mut self, a: Lit, b: Lit) -> Result<Lit, AigError> {
        self.check_lit(a)?;
        self.check_lit(b)?;
        if a == Lit::FALSE || b == Lit::FALSE || a == !b {
            return Ok(Lit::FALSE);
        }
        if a == Lit::TRUE || a == b {
            return Ok(b);
        }
        if b == Lit::TRUE {
            return Ok(a);
        }
        let key = hash_key(a, b);
        if let Some(&id) = self.strash.get(&key) {
            return Ok(Lit::new(id, false));
        }
        let id = self.nodes.len() as NodeId;
        self.nodes.push(Node::And(key.0, key.1));
        self.strash.insert(key, id);
        Ok(Lit::new(id, false))
    }

    /// Appends an AND node verbatim: no folding, no hash lookup, fanin order
    /// kept. The node is still registered for later hash lookups if its key
    /// is new.
    pub fn push_and_raw(&mut self, a: Lit, b: Lit) -> Result<Lit, AigError> {
        self.check_lit(a)?;
        self.check_lit(b)?;
        let id = self.nodes.len() as NodeId;
        self.nodes.push(Node::And(a, b));
        self.strash.entry(hash_key(a, b)).or_insert(id);
        Ok(Lit::new(id, false))
    }

    /// Builder convenience for literals known to be valid.
    pub fn and(&mut self, a: Lit, b: Lit) -> Lit {
        self.add_and(a, b).expect("literal of this graph")
    }

    pub fn or(&mut self, a: Lit, b: Lit) -> Lit {
        !self.and(!a, !b)
    }

    pub fn xor(&mut self, a: Lit, b: Lit) -> Lit {
        let x = self.and(a, !b);
        let y = self.and(!a, b);
        self.or(x, y)
    }

    pub fn mux(&mut self, sel: Lit, then: Lit, other: Lit) -> Lit {
        let x = self.and(sel, then);
        let y = self.and(!sel, other);
        self.or(x, y)
    }

    /// Rewires fanin `slot` of AND node `node` to `new_lit` and returns the
    /// previous fanin, which undoes the change when passed back in.
    pub fn replace_fanin(&mut self, node: NodeId, slot: usize, new_lit: Lit) -> Result<Lit, AigError> {
        let [f0, f1] = self.fanins(node).ok_or(AigError::NotAnAnd(node))?;
        if slot > 1 {
            return Err(AigError::BadFaninSlot(slot));
        }
        if new_lit.node() >= node {
            return Err(AigError::OrderViolation { node, lit: new_lit });
        }
        let old = if slot == 0 { f0 } else { f1 };
        let (n0, n1) = if slot == 0 { (new_lit, f1) } else { (f0, new_lit) };
        let old_key = hash_key(f0, f1);
        if self.strash.get(&old_key) == Some(&node) {
            self.strash.remove(&old_key);
        }
        self.strash.entry(hash_key(n0, n1)).or_insert(node);
        self.nodes[node as usize] = Node::And(n0, n1);
        Ok(old)
    }

    /// Level of every node: 0 for constants, inputs and register outputs.
    pub fn levels(&self) -> Vec<u32> {
        let mut lev = vec![0u32; self.nodes.len()];
        for (i, n) in self.nodes.iter().enumerate() {
            if let Node::And(a, b) = n {
                lev[i] = 1 + lev[a.node() as usize].max(lev[b.node() as usize]);
            }
        }
        lev
    }

    /// Fanout lists over AND edges (latch back-edges excluded).
    pub fn fanouts(&self) -> Vec<Vec<NodeId>> {
        let mut fo = vec![Vec::new(); self.nodes.len()];
        for (i, n) in self.nodes.iter().enumerate() {
            if let Node::And(a, b) = n {
                fo[a.node() as usize].push(i as NodeId);
                if b.node() != a.node() {
                    fo[b.node() as usize].push(i as NodeId);
                }
            }
        }
        fo
    }

    /// Combinational transitive fanout of `node`, including `node` itself.
    pub fn mark_tfo(&self, node: NodeId) -> BTreeSet<NodeId> {
        let mut in_tfo = vec![false; self.nodes.len()];
        in_tfo[node as usize] = true;
        let mut out = BTreeSet::new();
        out.insert(node);
        for i in node as usize + 1..self.nodes.len() {
            if let Node::And(a, b) = self.nodes[i] {
                if in_tfo[a.node() as usize] || in_tfo[b.node() as usize] {
                    in_tfo[i] = true;
                    out.insert(i as NodeId);
                }
            }
        }
        out
    }

    /// Roots of the sequential logic: primary outputs and latch inputs.
    pub fn roots(&self) -> impl Iterator<Item = Lit> + '_ {
        self.outputs
            .iter()
            .copied()
            .chain(self.latches.iter().map(|l| l.next))
    }

    /// Marks nodes reachable from any output or latch input.
    pub fn live_nodes(&self) -> Vec<bool> {
        let mut live = vec![false; self.nodes.len()];
        for r in self.roots() {
            live[r.node() as usize] = true;
        }
        // latch outputs, inputs and the constant are always kept
        live[0] = true;
        for &i in &self.inputs {
            live[i as usize] = true;
        }
        for l in &self.latches {
            live[l.ro as usize] = true;
        }
        for i in (0..self.nodes.len()).rev() {
            if !live[i] {
                continue;
            }
            if let Node::And(a, b) = self.nodes[i] {
                live[a.node() as usize] = true;
                live[b.node() as usize] = true;
            }
        }
        live
    }

    pub fn stats(&self) -> Stats {
        let lev = self.levels();
        Stats {
            and_count: self.num_ands(),
            level_count: self
                .roots()
                .map(|r| lev[r.node() as usize])
                .max()
                .unwrap_or(0),
            latch_count: self.latches.len(),
            pi_count: self.inputs.len(),
            po_count: self.outputs.len(),
        }
    }

    /// Rebuilds the graph with constants propagated, structural hashing
    /// reapplied and logic not reaching an output or latch input removed.
    /// Inputs, latches and outputs keep their order.
    pub fn cleanup(&self) -> Aig {
        // folding can orphan logic that was live before the first pass
        self.rebuild().rebuild()
    }

    fn rebuild(&self) -> Aig {
        let live = self.live_nodes();
        let mut out = Aig::new();
        out.symbols = self.symbols.clone();
        out.comment = self.comment.clone();
        let mut map = vec![Lit::FALSE; self.nodes.len()];
        for &i in &self.inputs {
            map[i as usize] = out.add_input();
        }
        for l in &self.latches {
            map[l.ro as usize] = out.add_latch(l.init);
        }
        for (i, n) in self.nodes.iter().enumerate() {
            if !live[i] {
                continue;
            }
            if let Node::And(a, b) = *n {
                let a = map[a.node() as usize] ^ a.is_complemented();
                let b = map[b.node() as usize] ^ b.is_complemented();
                map[i] = out.and(a, b);
            }
        }
        let tr = |l: Lit| map[l.node() as usize] ^ l.is_complemented();
        for &o in &self.outputs {
            out.outputs.push(tr(o));
        }
        for (idx, l) in self.latches.iter().enumerate() {
            out.latches[idx].next = tr(l.next);
        }
        out
    }

    /// Evaluates every node given values for the inputs and register outputs.
    pub fn eval_nodes(&self, inputs: &[bool], state: &[bool]) -> Vec<bool> {
        let mut val = vec![false; self.nodes.len()];
        for (i, n) in self.nodes.iter().enumerate() {
            val[i] = match *n {
                Node::Const => false,
                Node::Input(k) => inputs[k as usize],
                Node::Latch(k) => state[k as usize],
                Node::And(a, b) => {
                    (val[a.node() as usize] ^ a.is_complemented())
                        && (val[b.node() as usize] ^ b.is_complemented())
                }
            };
        }
        val
    }

    /// One combinational step: returns (outputs, next state).
    pub fn step(&self, inputs: &[bool], state: &[bool]) -> (Vec<bool>, Vec<bool>) {
        let val = self.eval_nodes(inputs, state);
        let get = |l: Lit| val[l.node() as usize] ^ l.is_complemented();
        (
            self.outputs.iter().map(|&o| get(o)).collect(),
            self.latches.iter().map(|l| get(l.next)).collect(),
        )
    }

    pub fn initial_state(&self) -> Vec<bool> {
        self.latches.iter().map(|l| l.init).collect()
    }

    /// Hash of the node, latch and output tables.
    pub fn table_hash(&self) -> u64 {
        let mut h = DefaultHasher::new();
        self.nodes.hash(&mut h);
        self.latches.hash(&mut h);
        self.outputs.hash(&mut h);
        h.finish()
    }

    /// Checks the structural invariants of the node table.
    pub fn check(&self) -> Result<(), AigError> {
        for (i, n) in self.nodes.iter().enumerate() {
            if let Node::And(a, b) = *n {
                for f in [a, b] {
                    if f.node() as usize >= i {
                        return Err(AigError::OrderViolation {
                            node: i as NodeId,
                            lit: f,
                        });
                    }
                }
            }
        }
        for l in &self.latches {
            self.check_lit(l.next)?;
        }
        for &o in &self.outputs {
            self.check_lit(o)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Truth table of every output over all input combinations
    /// (register outputs treated as extra inputs).
    fn truth_table(aig: &Aig) -> Vec<Vec<bool>> {
        let ni = aig.num_inputs();
        let nl = aig.num_latches();
        assert!(ni + nl <= 12);
        (0u32..1 << (ni + nl))
            .map(|bits| {
                let x: Vec<bool> = (0..ni).map(|i| bits >> i & 1 == 1).collect();
                let s: Vec<bool> = (0..nl).map(|i| bits >> (ni + i) & 1 == 1).collect();
                let (o, n) = aig.step(&x, &s);
                o.into_iter().chain(n).collect()
            })
            .collect()
    }

    #[test]
    fn and_with_constants() {
        let mut g = Aig::new();
        let x = g.add_input();
        assert_eq!(g.add_and(x, Lit::TRUE).unwrap(), x);
        assert_eq!(g.add_and(Lit::TRUE, x).unwrap(), x);
        assert_eq!(g.add_and(x, Lit::FALSE).unwrap(), Lit::FALSE);
        assert_eq!(g.add_and(x, x).unwrap(), x);
        assert_eq!(g.add_and(x, !x).unwrap(), Lit::FALSE);
        assert_eq!(g.num_ands(), 0);
    }

    #[test]
    fn structural_hashing_reuses_nodes() {
        let mut g = Aig::new();
        let a = g.add_input();
        let b = g.add_input();
        let before = g.num_nodes();
        let x = g.add_and(a, b).unwrap();
        let y = g.add_and(a, b).unwrap();
        let z = g.add_and(b, a).unwrap();
        assert_eq!(x, y);
        assert_eq!(x, z);
        assert_eq!(g.num_nodes(), before + 1);
    }

    #[test]
    fn invalid_literal_rejected() {
        let mut g = Aig::new();
        let a = g.add_input();
        assert_eq!(
            g.add_and(a, Lit::new(7, false)),
            Err(AigError::InvalidLiteral(Lit::new(7, false)))
        );
    }

    #[test]
    fn latches_are_fresh() {
        let mut g = Aig::new();
        let r0 = g.add_latch(true);
        let r1 = g.add_latch(false);
        assert_ne!(r0, r1);
        let s = g.stats();
        assert_eq!((s.latch_count, s.and_count), (2, 0));
        assert_eq!(g.latches()[0].next, Lit::FALSE);
        assert_eq!(g.set_latch_next(2, r0), Err(AigError::LatchIndex(2)));
    }

    #[test]
    fn replace_fanin_semantics() {
        let mut g = Aig::new();
        let f = g.add_input();
        let h = g.add_input();
        let n = g.and(f, h);
        g.add_output(n).unwrap();
        let original = truth_table(&g);
        let table = g.table_hash();
        let [s0, _] = g.fanins(n.node()).unwrap();
        let slot_f = if s0 == f { 0 } else { 1 };

        let token = g.replace_fanin(n.node(), slot_f, Lit::FALSE).unwrap();
        assert_eq!(token, f);
        assert!(truth_table(&g).iter().all(|row| !row[0]));

        g.replace_fanin(n.node(), slot_f, Lit::TRUE).unwrap();
        let rows = truth_table(&g);
        for (bits, row) in rows.iter().enumerate() {
            assert_eq!(row[0], bits >> 1 & 1 == 1, "n must follow the other fanin");
        }

        g.replace_fanin(n.node(), slot_f, token).unwrap();
        assert_eq!(truth_table(&g), original);
        assert_eq!(g.table_hash(), table);
    }

    #[test]
    fn replace_fanin_errors() {
        let mut g = Aig::new();
        let a = g.add_input();
        let b = g.add_input();
        let n = g.and(a, b);
        let m = g.and(n, a);
        assert_eq!(
            g.replace_fanin(a.node(), 0, Lit::FALSE),
            Err(AigError::NotAnAnd(a.node()))
        );
        assert!(matches!(
            g.replace_fanin(n.node(), 0, m),
            Err(AigError::OrderViolation { .. })
        ));
        assert_eq!(
            g.replace_fanin(n.node(), 2, Lit::FALSE),
            Err(AigError::BadFaninSlot(2))
        );
    }

    #[test]
    fn replaced_node_is_not_found_by_old_key() {
        let mut g = Aig::new();
        let a = g.add_input();
        let b = g.add_input();
        let n = g.and(a, b);
        g.replace_fanin(n.node(), 0, Lit::TRUE).unwrap();
        let fresh = g.and(a, b);
        assert_ne!(fresh, n);
    }

    #[test]
    fn levels_of_simple_shapes() {
        let mut g = Aig::new();
        let x: Vec<Lit> = (0..4).map(|_| g.add_input()).collect();
        let p = g.and(x[0], x[1]);
        let lev = g.levels();
        assert_eq!(lev[p.node() as usize], 1);
        let q = g.and(x[2], x[3]);
        let root = g.and(p, q);
        assert_eq!(g.levels()[root.node() as usize], 2);

        let mut c = Aig::new();
        let mut acc = c.add_input();
        for _ in 0..16 {
            let i = c.add_input();
            acc = c.and(acc, i);
        }
        c.add_output(acc).unwrap();
        assert_eq!(c.stats().level_count, 16);
    }

    #[test]
    fn tfo_of_chain_and_sink() {
        let mut g = Aig::new();
        let a = g.add_input();
        let b = g.add_input();
        let n = g.and(a, b);
        let m = g.and(n, a);
        let o = g.and(m, b);
        g.add_output(o).unwrap();
        assert_eq!(
            g.mark_tfo(n.node()).into_iter().collect::<Vec<_>>(),
            vec![n.node(), m.node(), o.node()]
        );
        assert_eq!(g.mark_tfo(o.node()).len(), 1);
    }

    #[test]
    fn cleanup_propagates_constants() {
        let mut g = Aig::new();
        let a = g.add_input();
        let b = g.add_input();
        let n = g.and(a, b);
        g.add_output(n).unwrap();
        g.replace_fanin(n.node(), 0, Lit::FALSE).unwrap();
        let c = g.cleanup();
        assert_eq!(c.outputs()[0], Lit::FALSE);
        assert_eq!(c.num_ands(), 0);
    }

    #[test]
    fn cleanup_drops_dangling_cone() {
        let mut g = Aig::new();
        let a = g.add_input();
        let b = g.add_input();
        let c = g.add_input();
        let keep = g.and(a, b);
        let junk = g.and(b, c);
        let _junk2 = g.and(junk, a);
        g.add_output(keep).unwrap();
        let before = truth_table(&g);
        let clean = g.cleanup();
        assert_eq!(clean.num_ands(), 1);
        assert_eq!(truth_table(&clean), before);
    }

    #[test]
    fn stats_of_wire_and_toggle() {
        let mut g = Aig::new();
        let x = g.add_input();
        g.add_output(x).unwrap();
        let s = g.stats();
        assert_eq!((s.and_count, s.level_count), (0, 0));

        let mut t = Aig::new();
        let r = t.add_latch(false);
        t.set_latch_next(0, !r).unwrap();
        t.add_output(r).unwrap();
        let s = t.stats();
        assert_eq!((s.latch_count, s.and_count, s.level_count), (1, 0, 0));
    }
}
