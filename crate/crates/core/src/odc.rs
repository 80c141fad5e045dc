//! Windowed validity check for one edit in one frame of a frame network.
//!
//! The window cone is encoded once. The root and every window node depending
//! on it get a second copy in which the root uses the edited fanin. The edit
//! is valid when no assignment to the window inputs makes any frontier output
//! differ between the two copies.
//!
//! Before encoding, the checker tries to refute the edit with random
//! patterns simulated over the whole network: a pattern under which the root
//! changes and the change reaches a window output is itself a satisfying
//! assignment of the miter, so this never changes a verdict from Valid.

use std::path::PathBuf;

use log::warn;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seqodc_sat::{Cnf, Lit as SatLit, SolveResult, Solver, Var};

use crate::aig::{Lit, Node, NodeId};
use crate::unroll::{Edit, FrameNetwork};
use crate::window::{Extractor, Window, WindowLimits};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckConfig {
    pub max_levels: u32,
    pub max_nodes: usize,
    /// 0 means unlimited.
    pub conflict_limit: u64,
    /// 64-pattern words of random simulation tried before SAT; 0 disables.
    pub sim_words: usize,
    pub seed: u64,
    /// Write each SAT instance as DIMACS into this directory.
    pub dump_cnf: Option<PathBuf>,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            max_levels: 16,
            max_nodes: 50_000,
            conflict_limit: 10_000,
            sim_words: 4,
            seed: 0,
            dump_cnf: None,
        }
    }
}

impl CheckConfig {
    fn limits(&self) -> WindowLimits {
        WindowLimits {
            max_levels: self.max_levels,
            max_nodes: self.max_nodes,
        }
    }
}

/// Values of frame-network nodes that make a window output differ.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Counterexample {
    pub assignment: Vec<(NodeId, bool)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Invalid(Counterexample),
    /// The target has no private copy in this frame.
    Inapplicable,
    /// The conflict limit was reached.
    Unknown,
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, Verdict::Valid)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CheckStats {
    pub checks: u64,
    pub sim_refuted: u64,
    pub sat_calls: u64,
    pub sat_unknown: u64,
    pub inapplicable: u64,
}

struct SimCache {
    uid: u64,
    /// Position in the network's change log the values reflect.
    log_pos: usize,
    values: Vec<u64>,
    /// Last pattern word: recent SAT counterexamples, one bit per pattern,
    /// indexed by network input.
    cex: Vec<u64>,
    cex_next: u32,
    dirty: bool,
}

struct ObsCache {
    uid: u64,
    version: u64,
    root: NodeId,
    obs: Vec<u64>,
}

/// Stateful checker; reuses scratch space and simulation values across
/// calls.
pub struct Checker {
    cfg: CheckConfig,
    ex: Extractor,
    sims: Vec<SimCache>,
    obs: Option<ObsCache>,
    flip: Vec<u64>,
    mark: Vec<u32>,
    stamp: u32,
    queued: Vec<u32>,
    qstamp: u32,
    stats: CheckStats,
}

/// One-off check of edit `e` in frame `frame`.
pub fn check_edit(fnet: &FrameNetwork, e: &Edit, frame: usize, cfg: &CheckConfig) -> Verdict {
    Checker::new(cfg.clone()).check(fnet, e, frame)
}

impl Checker {
    pub fn new(cfg: CheckConfig) -> Checker {
        Checker {
            cfg,
            ex: Extractor::new(),
            sims: Vec::new(),
            obs: None,
            flip: Vec::new(),
            mark: Vec::new(),
            stamp: 0,
            queued: Vec::new(),
            qstamp: 0,
            stats: CheckStats::default(),
        }
    }

    pub fn config(&self) -> &CheckConfig {
        &self.cfg
    }

    pub fn stats(&self) -> CheckStats {
        self.stats
    }

    /// Simulation-only refutation: true when some random pattern shows the
    /// edit changing a window output. Never claims validity.
    pub fn refutes(&mut self, fnet: &FrameNetwork, e: &Edit, frame: usize) -> bool {
        if self.cfg.sim_words == 0 {
            return false;
        }
        let Ok((root, slot, new)) = fnet.locate(e, frame) else {
            return false;
        };
        let hit = self.refute(fnet, root, slot, new).is_some();
        if hit {
            self.stats.sim_refuted += 1;
        }
        hit
    }

    pub fn check(&mut self, fnet: &FrameNetwork, e: &Edit, frame: usize) -> Verdict {
        self.stats.checks += 1;
        let Ok((root, slot, new)) = fnet.locate(e, frame) else {
            self.stats.inapplicable += 1;
            return Verdict::Inapplicable;
        };
        if self.cfg.sim_words > 0 {
            if let Some(cex) = self.refute(fnet, root, slot, new) {
                self.stats.sim_refuted += 1;
                return Verdict::Invalid(cex);
            }
        }
        self.sat_check(fnet, root, slot, new)
    }

    /// Simulation values of `fnet`, brought up to date incrementally from
    /// its change log when possible.
    fn sim_index(&mut self, fnet: &FrameNetwork) -> usize {
        let log = fnet.change_log();
        let pos = match self.sims.iter().position(|s| s.uid == fnet.uid()) {
            Some(p) if self.sims[p].dirty => p,
            Some(p) if self.sims[p].log_pos == log.len() => return p,
            Some(p) if log.len() - self.sims[p].log_pos <= 4096 => {
                self.resimulate(fnet, p);
                return p;
            }
            Some(p) => p,
            None => {
                if self.sims.len() >= 2 {
                    self.sims.remove(0);
                }
                self.sims.push(SimCache {
                    uid: fnet.uid(),
                    log_pos: 0,
                    values: Vec::new(),
                    cex: vec![0; fnet.net().num_inputs()],
                    cex_next: 0,
                    dirty: false,
                });
                self.sims.len() - 1
            }
        };
        let w = self.words();
        let net = fnet.net();
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed);
        let cache = &mut self.sims[pos];
        let vals = &mut cache.values;
        vals.clear();
        vals.resize(net.num_nodes() * w, 0);
        for (i, node) in net.nodes().iter().enumerate() {
            match *node {
                Node::Input(idx) => {
                    for x in &mut vals[i * w..(i + 1) * w - 1] {
                        *x = rng.gen();
                    }
                    vals[(i + 1) * w - 1] = cache.cex[idx as usize];
                }
                Node::And(a, b) => {
                    let (ma, mb) = (mask(a), mask(b));
                    let (ia, ib) = (a.node() as usize * w, b.node() as usize * w);
                    for k in 0..w {
                        vals[i * w + k] = (vals[ia + k] ^ ma) & (vals[ib + k] ^ mb);
                    }
                }
                _ => {}
            }
        }
        cache.log_pos = log.len();
        cache.dirty = false;
        self.obs = None;
        pos
    }

    /// Pattern words per node: the random ones plus the counterexample word.
    fn words(&self) -> usize {
        self.cfg.sim_words + 1
    }

    /// Keeps a SAT counterexample as a simulation pattern when it is a
    /// plain input assignment of the network.
    fn learn(&mut self, fnet: &FrameNetwork, cex: &Counterexample) {
        let Some(cache) = self.sims.iter_mut().find(|s| s.uid == fnet.uid()) else {
            return;
        };
        let net = fnet.net();
        let mut idx = Vec::with_capacity(cex.assignment.len());
        for &(n, v) in &cex.assignment {
            match net.node(n) {
                Node::Input(i) => idx.push((i as usize, v)),
                _ => return,
            }
        }
        let bit = 1u64 << cache.cex_next;
        cache.cex_next = (cache.cex_next + 1) % 64;
        for c in cache.cex.iter_mut() {
            *c &= !bit;
        }
        for (i, v) in idx {
            if v {
                cache.cex[i] |= bit;
            }
        }
        cache.dirty = true;
    }

    fn resimulate(&mut self, fnet: &FrameNetwork, pos: usize) {
        let w = self.words();
        let net = fnet.net();
        let log = fnet.change_log();
        if self.queued.len() < net.num_nodes() {
            self.queued.resize(net.num_nodes(), 0);
        }
        self.qstamp = self.qstamp.wrapping_add(1);
        if self.qstamp == 0 {
            self.queued.iter_mut().for_each(|m| *m = 0);
            self.qstamp = 1;
        }
        let qs = self.qstamp;
        let mut heap = std::collections::BinaryHeap::new();
        for &n in &log[self.sims[pos].log_pos..] {
            if self.queued[n as usize] != qs {
                self.queued[n as usize] = qs;
                heap.push(std::cmp::Reverse(n));
            }
        }
        let vals = &mut self.sims[pos].values;
        let mut fresh = vec![0u64; w];
        while let Some(std::cmp::Reverse(n)) = heap.pop() {
            let [a, b] = net.fanins(n).expect("rewired nodes are ANDs");
            let (ia, ib) = (a.node() as usize * w, b.node() as usize * w);
            for k in 0..w {
                fresh[k] = (vals[ia + k] ^ mask(a)) & (vals[ib + k] ^ mask(b));
            }
            let i = n as usize * w;
            if vals[i..i + w] == fresh[..] {
                continue;
            }
            vals[i..i + w].copy_from_slice(&fresh);
            for &f in fnet.fanouts(n) {
                if self.queued[f as usize] != qs {
                    self.queued[f as usize] = qs;
                    heap.push(std::cmp::Reverse(f));
                }
            }
        }
        self.sims[pos].log_pos = log.len();
    }

    fn observability(&mut self, fnet: &FrameNetwork, root: NodeId, sim: usize) {
        if let Some(o) = &self.obs {
            if o.uid == fnet.uid() && o.version == fnet.version() && o.root == root {
                return;
            }
        }
        let w = self.words();
        let mut obs = vec![0u64; w];
        if let Ok((tfo, outputs)) = self.ex.tfo(fnet, root, self.cfg.limits()) {
            let n = fnet.net().num_nodes();
            if self.mark.len() < n {
                self.mark.resize(n, 0);
                self.flip.resize(n * w, 0);
            }
            self.stamp = self.stamp.wrapping_add(1);
            if self.stamp == 0 {
                self.mark.iter_mut().for_each(|m| *m = 0);
                self.stamp = 1;
            }
            let st = self.stamp;
            let vals = &self.sims[sim].values;
            for &x in &tfo {
                let xi = x as usize;
                if x == root {
                    for k in 0..w {
                        self.flip[xi * w + k] = !vals[xi * w + k];
                    }
                } else {
                    let [a, b] = fnet.net().fanins(x).expect("window nodes are ANDs");
                    for k in 0..w {
                        let va = if self.mark[a.node() as usize] == st {
                            self.flip[a.node() as usize * w + k]
                        } else {
                            vals[a.node() as usize * w + k]
                        } ^ mask(a);
                        let vb = if self.mark[b.node() as usize] == st {
                            self.flip[b.node() as usize * w + k]
                        } else {
                            vals[b.node() as usize * w + k]
                        } ^ mask(b);
                        self.flip[xi * w + k] = va & vb;
                    }
                }
                self.mark[xi] = st;
            }
            for &o in &outputs {
                let oi = o as usize;
                for k in 0..w {
                    obs[k] |= self.flip[oi * w + k] ^ vals[oi * w + k];
                }
            }
        }
        self.obs = Some(ObsCache {
            uid: fnet.uid(),
            version: fnet.version(),
            root,
            obs,
        });
    }

    /// Per pattern word, where the edit changes the value of `root`.
    fn delta(&self, fnet: &FrameNetwork, sim: usize, root: NodeId, slot: usize, new: Lit) -> Vec<u64> {
        let w = self.words();
        let vals = &self.sims[sim].values;
        let other = fnet.net().fanins(root).expect("root is an AND")[1 - slot];
        let val = |l: Lit, k: usize| vals[l.node() as usize * w + k] ^ mask(l);
        (0..w)
            .map(|k| vals[root as usize * w + k] ^ (val(new, k) & val(other, k)))
            .collect()
    }

    /// Like [`Checker::refutes`] on the network as if `e` were also applied
    /// in each of `quiet` frames, without applying it: only patterns on
    /// which the edit is inactive in those frames are used, and on them the
    /// two networks agree. May miss refutations the full check would find.
    pub fn refutes_quiet(&mut self, fnet: &FrameNetwork, e: &Edit, frame: usize, quiet: &[usize]) -> bool {
        if self.cfg.sim_words == 0 {
            return false;
        }
        let Ok((root, slot, new)) = fnet.locate(e, frame) else {
            return false;
        };
        let sim = self.sim_index(fnet);
        let mut keep = vec![!0u64; self.words()];
        for &j in quiet {
            let Ok((r, sl, nw)) = fnet.locate(e, j) else {
                return false;
            };
            for (m, d) in keep.iter_mut().zip(self.delta(fnet, sim, r, sl, nw)) {
                *m &= !d;
            }
        }
        self.observability(fnet, root, sim);
        let obs = &self.obs.as_ref().expect("just computed").obs;
        let d = self.delta(fnet, sim, root, slot, new);
        let hit = (0..d.len()).any(|k| d[k] & obs[k] & keep[k] != 0);
        if hit {
            self.stats.sim_refuted += 1;
        }
        hit
    }

    fn refute(
        &mut self,
        fnet: &FrameNetwork,
        root: NodeId,
        slot: usize,
        new: Lit,
    ) -> Option<Counterexample> {
        let sim = self.sim_index(fnet);
        self.observability(fnet, root, sim);
        let w = self.words();
        let d = self.delta(fnet, sim, root, slot, new);
        let vals = &self.sims[sim].values;
        let obs = &self.obs.as_ref().expect("just computed").obs;
        for k in 0..w {
            let hit = d[k] & obs[k];
            if hit != 0 {
                let bit = hit.trailing_zeros();
                let assignment = fnet
                    .net()
                    .inputs()
                    .iter()
                    .map(|&i| (i, vals[i as usize * w + k] >> bit & 1 == 1))
                    .collect();
                return Some(Counterexample { assignment });
            }
        }
        None
    }

    fn sat_check(&mut self, fnet: &FrameNetwork, root: NodeId, slot: usize, new: Lit) -> Verdict {
        let extra: Vec<NodeId> = if new.node() != 0 {
            vec![new.node()]
        } else {
            Vec::new()
        };
        let Ok(win) = self.ex.extract(fnet, root, &extra, self.cfg.limits()) else {
            self.stats.inapplicable += 1;
            return Verdict::Inapplicable;
        };
        let Some(enc) = encode(fnet, &win, slot, new) else {
            return Verdict::Valid;
        };
        if let Some(dir) = &self.cfg.dump_cnf {
            let path = dir.join(format!("check_{:06}.cnf", self.stats.sat_calls));
            if let Err(err) = std::fs::write(&path, enc.cnf.to_dimacs()) {
                warn!("cannot write {}: {err}", path.display());
            }
        }
        self.stats.sat_calls += 1;
        let mut solver = Solver::from_cnf(&enc.cnf, self.cfg.seed);
        match solver.solve(&[], self.cfg.conflict_limit) {
            SolveResult::Unsat => Verdict::Valid,
            SolveResult::Sat(model) => {
                let cex = Counterexample {
                    assignment: win
                        .inputs
                        .iter()
                        .zip(&enc.input_vars)
                        .map(|(&n, v)| (n, model[v.index()]))
                        .collect(),
                };
                if self.cfg.sim_words > 0 {
                    self.learn(fnet, &cex);
                }
                Verdict::Invalid(cex)
            }
            SolveResult::Unknown => {
                self.stats.sat_unknown += 1;
                Verdict::Unknown
            }
        }
    }
}

#[inline]
fn mask(l: Lit) -> u64 {
    if l.is_complemented() {
        !0
    } else {
        0
    }
}

struct Encoding {
    cnf: Cnf,
    input_vars: Vec<Var>,
}

/// Tseitin clauses for `y = a & b`.
fn and_gate(cnf: &mut Cnf, y: SatLit, a: SatLit, b: SatLit) {
    cnf.add_clause(&[!y, a]);
    cnf.add_clause(&[!y, b]);
    cnf.add_clause(&[y, !a, !b]);
}

/// Shared-cone miter; `None` when no output can differ structurally.
fn encode(fnet: &FrameNetwork, win: &Window, slot: usize, new: Lit) -> Option<Encoding> {
    use std::collections::HashMap;
    let net = fnet.net();
    let mut cnf = Cnf::new();
    let c0 = cnf.new_var();
    cnf.add_clause(&[c0.negative()]);
    let mut v1: HashMap<NodeId, Var> = HashMap::with_capacity(win.cone.len() + win.inputs.len());
    let mut v2: HashMap<NodeId, Var> = HashMap::new();
    let mut dv: HashMap<NodeId, Var> = HashMap::new();
    v1.insert(0, c0);
    let input_vars: Vec<Var> = win
        .inputs
        .iter()
        .map(|&n| {
            let v = cnf.new_var();
            v1.insert(n, v);
            v
        })
        .collect();
    let lit = |map: &HashMap<NodeId, Var>, l: Lit| -> SatLit {
        SatLit::new(map[&l.node()], l.is_complemented())
    };
    for &n in &win.cone {
        let v = cnf.new_var();
        v1.insert(n, v);
        let [a, b] = net.fanins(n).expect("cone nodes are ANDs");
        let (la, lb) = (lit(&v1, a), lit(&v1, b));
        and_gate(&mut cnf, v.positive(), la, lb);
    }
    for &n in &win.tfo {
        let [a, b] = net.fanins(n).expect("window nodes are ANDs");
        let (la, lb) = if n == win.root {
            let mut f = [a, b];
            f[slot] = new;
            (lit(&v1, f[0]), lit(&v1, f[1]))
        } else {
            if !v2.contains_key(&a.node()) && !v2.contains_key(&b.node()) {
                continue;
            }
            let pick = |l: Lit| {
                if v2.contains_key(&l.node()) {
                    lit(&v2, l)
                } else {
                    lit(&v1, l)
                }
            };
            (pick(a), pick(b))
        };
        let v = cnf.new_var();
        v2.insert(n, v);
        and_gate(&mut cnf, v.positive(), la, lb);
        // d <-> (copies differ); a difference past the root needs a
        // differing fanin
        let (x1, d) = (v1[&n], cnf.new_var());
        cnf.add_clause(&[d.negative(), x1.positive(), v.positive()]);
        cnf.add_clause(&[d.negative(), x1.negative(), v.negative()]);
        cnf.add_clause(&[d.positive(), x1.negative(), v.positive()]);
        cnf.add_clause(&[d.positive(), x1.positive(), v.negative()]);
        if n != win.root {
            let mut chain = vec![d.negative()];
            chain.extend([a, b].iter().filter_map(|l| dv.get(&l.node())).map(|x| x.positive()));
            cnf.add_clause(&chain);
        }
        dv.insert(n, d);
    }
    let diffs: Vec<SatLit> = win
        .outputs
        .iter()
        .filter_map(|o| dv.get(o))
        .map(|d| d.positive())
        .collect();
    if diffs.is_empty() {
        return None;
    }
    cnf.add_clause(&diffs);
    Some(Encoding { cnf, input_vars })
}

/// Evaluates the window outputs of `e` in `frame` under `cex`, before and
/// after the edit. Returns whether some output differs, or `None` when the
/// assignment does not determine every output.
pub fn replay(
    fnet: &FrameNetwork,
    e: &Edit,
    frame: usize,
    cex: &Counterexample,
    cfg: &CheckConfig,
) -> Option<bool> {
    let (root, slot, new) = fnet.locate(e, frame).ok()?;
    let win = Extractor::new()
        .extract(fnet, root, &[], cfg.limits())
        .ok()?;
    let net = fnet.net();
    let mut given: Vec<Option<bool>> = vec![None; net.num_nodes()];
    for &(n, v) in &cex.assignment {
        given[n as usize] = Some(v);
    }
    let eval = |edited: bool| -> Vec<Option<bool>> {
        let mut val: Vec<Option<bool>> = vec![None; net.num_nodes()];
        val[0] = Some(false);
        for (i, node) in net.nodes().iter().enumerate() {
            if let Some(v) = given[i] {
                val[i] = Some(v);
                continue;
            }
            if let Node::And(a, b) = *node {
                let mut f = [a, b];
                if edited && i as NodeId == root {
                    f[slot] = new;
                }
                let get = |l: Lit| val[l.node() as usize].map(|v| v ^ l.is_complemented());
                val[i] = match (get(f[0]), get(f[1])) {
                    (Some(false), _) | (_, Some(false)) => Some(false),
                    (Some(true), Some(true)) => Some(true),
                    _ => None,
                };
            }
        }
        val
    };
    let before = eval(false);
    let after = eval(true);
    let mut differs = false;
    for &o in &win.outputs {
        let (x, y) = (before[o as usize]?, after[o as usize]?);
        differs |= x != y;
    }
    Some(differs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::unroll::{build_base, build_inductive, EditKind};

    fn sat_only() -> CheckConfig {
        CheckConfig {
            sim_words: 0,
            ..CheckConfig::default()
        }
    }

    fn slot_of(f: &fixtures::Fixture, gate: NodeId, fanin: Lit) -> usize {
        f.aig.fanins(gate).unwrap().iter().position(|&l| l == fanin).unwrap()
    }

    #[test]
    fn m1_base_w1_stuck_at_zero() {
        let f = fixtures::m1();
        let b = build_base(&f.aig, 1).unwrap();
        // w1 stuck at 0, seen from the OR gate: its fanin !w1 tied to 1
        let or_and = (!f.lit("o1")).node();
        let slot = slot_of(&f, or_and, !f.lit("w1"));
        let e = Edit::stuck_at(&f.aig, or_and, slot, true).unwrap();
        for cfg in [sat_only(), CheckConfig::default()] {
            assert_eq!(check_edit(&b, &e, 1, &cfg), Verdict::Valid);
        }
        // while c tied to 0 is observable
        let slot = slot_of(&f, or_and, !f.lit("c"));
        let bad = Edit::stuck_at(&f.aig, or_and, slot, true).unwrap();
        assert!(matches!(check_edit(&b, &bad, 1, &sat_only()), Verdict::Invalid(_)));
    }

    #[test]
    fn m1b_inductive_frame_two() {
        let f = fixtures::m1b();
        let ind = build_inductive(&f.aig, 1).unwrap();
        let w2 = (!f.lit("w2")).node();
        let slot = slot_of(&f, w2, !f.lit("w1"));
        let e = Edit::stuck_at(&f.aig, w2, slot, true).unwrap();
        assert_eq!(check_edit(&ind, &e, 2, &sat_only()), Verdict::Valid);
        assert_eq!(check_edit(&ind, &e, 2, &CheckConfig::default()), Verdict::Valid);
        // frame 1 has free state, so the same edit is observable there
        assert!(matches!(check_edit(&ind, &e, 1, &sat_only()), Verdict::Invalid(_)));
    }

    #[test]
    fn m3_without_assumption_is_invalid() {
        let f = fixtures::m3();
        let ind = build_inductive(&f.aig, 1).unwrap();
        let g1 = f.node("g1");
        let slot = slot_of(&f, g1, f.lit("r"));
        let e = Edit::stuck_at(&f.aig, g1, slot, false).unwrap();
        for cfg in [sat_only(), CheckConfig::default()] {
            let Verdict::Invalid(cex) = check_edit(&ind, &e, 2, &cfg) else {
                panic!("expected a counterexample");
            };
            let s0 = ind.state_inputs()[0].node();
            let x1 = ind.frame_io()[0].inputs[0].node();
            let x2 = ind.frame_io()[1].inputs[0].node();
            let mut got: Vec<(NodeId, bool)> = cex.assignment.clone();
            got.sort();
            assert_eq!(got, vec![(s0, true), (x1, true), (x2, true)]);
            assert_eq!(replay(&ind, &e, 2, &cex, &cfg), Some(true));
        }
    }

    #[test]
    fn m3_with_assumption_is_valid() {
        let f = fixtures::m3();
        let mut ind = build_inductive(&f.aig, 1).unwrap();
        let g1 = f.node("g1");
        let slot = slot_of(&f, g1, f.lit("r"));
        let e = Edit::stuck_at(&f.aig, g1, slot, false).unwrap();
        ind.apply_in_frame(&e, 1).unwrap();
        assert_eq!(check_edit(&ind, &e, 2, &sat_only()), Verdict::Valid);
    }

    #[test]
    fn tautological_edit_is_valid() {
        let f = fixtures::m1b();
        let ind = build_inductive(&f.aig, 2).unwrap();
        for g in f.aig.and_ids().collect::<Vec<_>>() {
            let [a, _] = f.aig.fanins(g).unwrap();
            let e = Edit {
                target: g,
                slot: 0,
                new_lit: a,
                old_lit: a,
                kind: EditKind::Resub,
            };
            for j in 1..=3 {
                assert_eq!(check_edit(&ind, &e, j, &sat_only()), Verdict::Valid);
            }
        }
    }

    #[test]
    fn conflict_limit_never_reports_valid() {
        let f = fixtures::m1();
        let b = build_base(&f.aig, 1).unwrap();
        let g1 = f.node("g1");
        let e = Edit::stuck_at(&f.aig, g1, 0, false).unwrap();
        let cfg = CheckConfig {
            conflict_limit: 1,
            ..sat_only()
        };
        assert!(!check_edit(&b, &e, 1, &cfg).is_valid());
    }

    #[test]
    fn strashed_copy_is_inapplicable() {
        use crate::unroll::{FrameKind, UnrollOptions};
        let f = fixtures::m1();
        let b = FrameNetwork::build(&f.aig, 1, FrameKind::Base, UnrollOptions { strash: true }).unwrap();
        let e = Edit::stuck_at(&f.aig, f.node("w1"), 0, false).unwrap();
        assert_eq!(check_edit(&b, &e, 1, &sat_only()), Verdict::Inapplicable);
    }

    #[test]
    fn dump_writes_dimacs() {
        let dir = tempfile::tempdir().unwrap();
        let f = fixtures::m3();
        let ind = build_inductive(&f.aig, 1).unwrap();
        let e = Edit::stuck_at(&f.aig, f.node("g1"), 0, false).unwrap();
        let cfg = CheckConfig {
            dump_cnf: Some(dir.path().to_path_buf()),
            ..sat_only()
        };
        check_edit(&ind, &e, 2, &cfg);
        let text = std::fs::read_to_string(dir.path().join("check_000000.cnf")).unwrap();
        assert!(text.starts_with("p cnf"));
        assert!(Cnf::parse_dimacs(&text).is_ok());
    }

    mod fuzz {
        use super::*;
        use crate::gen::{random_aig, RandomParams};
        use proptest::prelude::*;

        fn all_outputs(fnet: &FrameNetwork) -> Vec<Vec<bool>> {
            let n = fnet.net().num_inputs();
            (0..1u32 << n)
                .map(|m| {
                    let v: Vec<bool> = (0..n).map(|i| m >> i & 1 == 1).collect();
                    fnet.eval(&v)
                })
                .collect()
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(200))]
            #[test]
            fn valid_means_unchanged_outputs(
                seed in 0u64..100_000,
                pick in any::<u64>(),
                levels in prop_oneof![Just(2u32), Just(16u32)],
                nodes in prop_oneof![Just(4usize), Just(50_000usize)],
            ) {
                let p = RandomParams { inputs: 2, latches: 3, ands: 25, outputs: 2, locality: None, max_depth: None };
                let n = random_aig(&p, seed);
                let ands: Vec<NodeId> = n.and_ids().collect();
                prop_assume!(!ands.is_empty());
                let g = ands[(pick % ands.len() as u64) as usize];
                let slot = (pick >> 20) as usize & 1;
                let e = if pick >> 21 & 1 == 0 {
                    Edit::stuck_at(&n, g, slot, pick >> 22 & 1 == 1).unwrap()
                } else {
                    let d = ((pick >> 24) % g as u64) as NodeId;
                    Edit::resub(&n, g, slot, Lit::new(d, pick >> 23 & 1 == 1)).unwrap()
                };
                let mut fnet = build_inductive(&n, 1).unwrap();
                let frame = 1 + (pick >> 40) as usize % 2;
                let cfg = CheckConfig { max_levels: levels, max_nodes: nodes, ..CheckConfig::default() };
                let plain = CheckConfig { sim_words: 0, ..cfg.clone() };
                let v = check_edit(&fnet, &e, frame, &cfg);
                let w = check_edit(&fnet, &e, frame, &plain);
                prop_assert_eq!(v.is_valid(), w.is_valid());
                for verdict in [&v, &w] {
                    if let Verdict::Invalid(cex) = verdict {
                        prop_assert_eq!(replay(&fnet, &e, frame, cex, &cfg), Some(true));
                    }
                }
                if v.is_valid() {
                    let before = all_outputs(&fnet);
                    fnet.apply_in_frame(&e, frame).unwrap();
                    prop_assert_eq!(before, all_outputs(&fnet));
                }
            }
        }
    }
}
