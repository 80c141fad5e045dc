//! Incremental SAT over a copy of an AIG in which nodes that simulate alike
//! are proven equal and merged as they are copied. Miters of similar
//! designs collapse this way to a handful of hard nodes.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seqodc_sat::{SolveResult, Solver, Var};

use crate::aig::{Aig, Lit, Node};

const WORDS: usize = 4;
const MERGE_CONFLICTS: u64 = 1_000;
const BUCKET: usize = 4;

pub(crate) struct Sweeper {
    r: Aig,
    solver: Solver,
    vars: Vec<Var>,
    sim: Vec<[u64; WORDS]>,
    /// Representatives by phase-normalized signature.
    classes: HashMap<[u64; WORDS], Vec<Lit>>,
    /// Source literal of every node of the swept graph.
    map: Vec<Lit>,
}

fn normalize(s: [u64; WORDS]) -> ([u64; WORDS], bool) {
    if s[0] & 1 == 1 {
        (s.map(|x| !x), true)
    } else {
        (s, false)
    }
}

impl Sweeper {
    /// Copies the fanin cones of `roots` out of `m`.
    pub fn new(m: &Aig, roots: &[Lit], seed: u64) -> Sweeper {
        let mut s = Sweeper {
            r: Aig::new(),
            solver: Solver::with_seed(seed),
            vars: Vec::new(),
            sim: Vec::new(),
            classes: HashMap::new(),
            map: vec![Lit::FALSE; m.num_nodes()],
        };
        let c0 = s.solver.new_var();
        s.solver.add_clause(&[c0.negative()]).expect("fresh variable");
        s.vars.push(c0);
        s.sim.push([0; WORDS]);
        s.classes.insert([0; WORDS], vec![Lit::FALSE]);

        let mut need = vec![false; m.num_nodes()];
        for r in roots {
            need[r.node() as usize] = true;
        }
        for i in (1..m.num_nodes()).rev() {
            if need[i] {
                if let Some([a, b]) = m.fanins(i as u32) {
                    need[a.node() as usize] = true;
                    need[b.node() as usize] = true;
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for (i, node) in m.nodes().iter().enumerate() {
            if !need[i] {
                continue;
            }
            s.map[i] = match *node {
                Node::Const => Lit::FALSE,
                Node::And(a, b) => {
                    let a = s.map[a.node() as usize] ^ a.is_complemented();
                    let b = s.map[b.node() as usize] ^ b.is_complemented();
                    s.and(a, b)
                }
                _ => {
                    let l = s.r.add_input();
                    let v = s.solver.new_var();
                    s.vars.push(v);
                    s.sim.push([(); WORDS].map(|_| rng.gen()));
                    l
                }
            };
        }
        s
    }

    fn word(&self, l: Lit, k: usize) -> u64 {
        let w = self.sim[l.node() as usize][k];
        if l.is_complemented() {
            !w
        } else {
            w
        }
    }

    pub fn sat_lit(&self, l: Lit) -> seqodc_sat::Lit {
        seqodc_sat::Lit::new(self.vars[l.node() as usize], l.is_complemented())
    }

    fn and(&mut self, a: Lit, b: Lit) -> Lit {
        let before = self.r.num_nodes();
        let y = self.r.and(a, b);
        if self.r.num_nodes() == before {
            return y;
        }
        let sig: [u64; WORDS] = std::array::from_fn(|k| self.word(a, k) & self.word(b, k));
        let v = self.solver.new_var();
        let (la, lb) = (self.sat_lit(a), self.sat_lit(b));
        let _ = self.solver.add_clause(&[v.negative(), la]);
        let _ = self.solver.add_clause(&[v.negative(), lb]);
        let _ = self.solver.add_clause(&[v.positive(), !la, !lb]);
        self.vars.push(v);
        self.sim.push(sig);

        let (key, flip) = normalize(sig);
        let cands = self.classes.get(&key).cloned().unwrap_or_default();
        for rep in &cands {
            // `rep` carries the normalized phase; y ^ flip is normalized too
            if self.equal(y ^ flip, *rep) {
                return *rep ^ flip;
            }
        }
        let bucket = self.classes.entry(key).or_default();
        if bucket.len() < BUCKET {
            bucket.push(y ^ flip);
        }
        y
    }

    fn equal(&mut self, x: Lit, y: Lit) -> bool {
        let (sx, sy) = (self.sat_lit(x), self.sat_lit(y));
        matches!(self.solver.solve(&[sx, !sy], MERGE_CONFLICTS), SolveResult::Unsat)
            && matches!(self.solver.solve(&[!sx, sy], MERGE_CONFLICTS), SolveResult::Unsat)
    }

    /// The swept counterpart of a literal of the source graph.
    pub fn lit(&self, l: Lit) -> Lit {
        self.map[l.node() as usize] ^ l.is_complemented()
    }

    /// Solves for `root` (a source literal) being true. `None` means
    /// undecided within `conflicts`; `Some(None)` means unsatisfiable.
    pub fn solve(&mut self, root: Lit, conflicts: u64) -> Option<Option<Vec<bool>>> {
        let l = self.lit(root);
        if l == Lit::FALSE {
            return Some(None);
        }
        match self.solver.solve(&[self.sat_lit(l)], conflicts) {
            SolveResult::Sat(model) => Some(Some(model)),
            SolveResult::Unsat => Some(None),
            SolveResult::Unknown => None,
        }
    }

    /// Value of a source literal under a model from [`Sweeper::solve`].
    pub fn value(&self, model: &[bool], l: Lit) -> bool {
        let s = self.sat_lit(self.lit(l));
        s.eval(model[s.var().index()])
    }
}
