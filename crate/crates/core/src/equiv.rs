//! Cycle-accurate simulation and sequential equivalence checking: a bounded
//! SAT miter over a product unrolling, and exact breadth-first exploration of
//! the product machine for small designs.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

use crate::aig::{Aig, Lit, Node};
use crate::sweep::Sweeper;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EquivError {
    #[error("signature mismatch: {pi1} inputs/{po1} outputs vs {pi2} inputs/{po2} outputs")]
    SignatureMismatch {
        pi1: usize,
        po1: usize,
        pi2: usize,
        po2: usize,
    },
    #[error("cycle {cycle}: expected {expected} input values, got {got}")]
    InputWidth {
        cycle: usize,
        expected: usize,
        got: usize,
    },
    #[error("{what} limit exceeded: {value} > {limit}")]
    LimitExceeded {
        what: &'static str,
        value: usize,
        limit: usize,
    },
    #[error("counterexample did not replay")]
    ReplayFailed,
}

/// An input sequence on which two designs disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CexTrace {
    pub input_vectors: Vec<Vec<bool>>,
    pub failing_cycle: usize,
    pub failing_output: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// No difference found (within the bound, for bounded checks).
    Equivalent,
    Counterexample(CexTrace),
}

impl Outcome {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Outcome::Equivalent)
    }
}

fn bits(v: &[bool]) -> String {
    v.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

impl CexTrace {
    /// Whether simulating both designs on the trace reproduces the mismatch.
    pub fn replays(&self, n1: &Aig, n2: &Aig) -> bool {
        let (Ok(o1), Ok(o2)) = (
            simulate(n1, &self.input_vectors),
            simulate(n2, &self.input_vectors),
        ) else {
            return false;
        };
        let c = self.failing_cycle;
        let o = self.failing_output;
        c < o1.len() && o < o1[c].len() && o < o2[c].len() && o1[c][o] != o2[c][o]
    }

    /// One line per cycle: inputs, then outputs of each design.
    pub fn waveform(&self, n1: &Aig, n2: &Aig) -> String {
        let o1 = simulate(n1, &self.input_vectors).unwrap_or_default();
        let o2 = simulate(n2, &self.input_vectors).unwrap_or_default();
        let mut s = String::from("# cycle inputs | outputs-a | outputs-b\n");
        for (c, iv) in self.input_vectors.iter().enumerate() {
            let a = o1.get(c).map(|v| bits(v)).unwrap_or_default();
            let b = o2.get(c).map(|v| bits(v)).unwrap_or_default();
            let mark = if c == self.failing_cycle { "  <- mismatch" } else { "" };
            let _ = writeln!(s, "{c} {} | {a} | {b}{mark}", bits(iv));
        }
        let _ = writeln!(
            s,
            "# output {} differs at cycle {}",
            self.failing_output, self.failing_cycle
        );
        s
    }
}

/// Simulates from the initial state; returns the outputs of every cycle.
pub fn simulate(n: &Aig, inputs: &[Vec<bool>]) -> Result<Vec<Vec<bool>>, EquivError> {
    let mut state = n.initial_state();
    let mut outs = Vec::with_capacity(inputs.len());
    for (cycle, iv) in inputs.iter().enumerate() {
        if iv.len() != n.num_inputs() {
            return Err(EquivError::InputWidth {
                cycle,
                expected: n.num_inputs(),
                got: iv.len(),
            });
        }
        let (o, next) = n.step(iv, &state);
        outs.push(o);
        state = next;
    }
    Ok(outs)
}

fn check_signature(n1: &Aig, n2: &Aig) -> Result<(), EquivError> {
    if n1.num_inputs() != n2.num_inputs() || n1.num_outputs() != n2.num_outputs() {
        return Err(EquivError::SignatureMismatch {
            pi1: n1.num_inputs(),
            po1: n1.num_outputs(),
            pi2: n2.num_inputs(),
            po2: n2.num_outputs(),
        });
    }
    Ok(())
}

fn first_mismatch(n1: &Aig, n2: &Aig, inputs: Vec<Vec<bool>>) -> Result<CexTrace, EquivError> {
    let o1 = simulate(n1, &inputs)?;
    let o2 = simulate(n2, &inputs)?;
    for c in 0..inputs.len() {
        if let Some(o) = (0..o1[c].len()).find(|&o| o1[c][o] != o2[c][o]) {
            let mut input_vectors = inputs;
            input_vectors.truncate(c + 1);
            return Ok(CexTrace {
                input_vectors,
                failing_cycle: c,
                failing_output: o,
            });
        }
    }
    Err(EquivError::ReplayFailed)
}

/// Copies one time frame of `n` into `m`.
fn copy_frame(m: &mut Aig, n: &Aig, pis: &[Lit], state: &[Lit]) -> (Vec<Lit>, Vec<Lit>) {
    let mut map = vec![Lit::FALSE; n.num_nodes()];
    for (k, &i) in n.inputs().iter().enumerate() {
        map[i as usize] = pis[k];
    }
    for (k, l) in n.latches().iter().enumerate() {
        map[l.ro as usize] = state[k];
    }
    for (i, node) in n.nodes().iter().enumerate() {
        if let Node::And(a, b) = *node {
            let a = map[a.node() as usize] ^ a.is_complemented();
            let b = map[b.node() as usize] ^ b.is_complemented();
            map[i] = m.and(a, b);
        }
    }
    let tr = |l: Lit| map[l.node() as usize] ^ l.is_complemented();
    (
        n.outputs().iter().map(|&o| tr(o)).collect(),
        n.latches().iter().map(|l| tr(l.next)).collect(),
    )
}

/// Product unrolling of cycles `first..=last`. State at `first` is the
/// initial state when `first` is 0 and free otherwise.
struct Unrolled {
    m: Aig,
    pis: Vec<Vec<Lit>>,
    out_diffs: Vec<Lit>,
    next_diffs: Vec<Lit>,
}

fn unroll_pair(n1: &Aig, n2: &Aig, merged: &[Vec<bool>], first: usize, last: usize) -> Unrolled {
    let mut m = Aig::new();
    let (mut s1, mut s2): (Vec<Lit>, Vec<Lit>) = if first == 0 {
        (
            n1.latches().iter().map(|l| Lit::constant(l.init)).collect(),
            n2.latches().iter().map(|l| Lit::constant(l.init)).collect(),
        )
    } else {
        let s2: Vec<Lit> = (0..n2.num_latches()).map(|_| m.add_input()).collect();
        let s1 = (0..n1.num_latches())
            .map(|i| if merged[first].get(i) == Some(&true) { s2[i] } else { m.add_input() })
            .collect();
        (s1, s2)
    };
    let mut pis = Vec::new();
    let mut out_diffs = Vec::new();
    let mut next_diffs = Vec::new();
    for (t, merge) in merged.iter().enumerate().take(last + 1).skip(first) {
        for (i, &eq) in merge.iter().enumerate() {
            if eq {
                s1[i] = s2[i];
            }
        }
        let x: Vec<Lit> = (0..n1.num_inputs()).map(|_| m.add_input()).collect();
        let (o1, x1) = copy_frame(&mut m, n1, &x, &s1);
        let (o2, x2) = copy_frame(&mut m, n2, &x, &s2);
        if t == last {
            out_diffs = o1.iter().zip(&o2).map(|(&a, &b)| m.xor(a, b)).collect();
            if x1.len() == x2.len() {
                next_diffs = x1.iter().zip(&x2).map(|(&a, &b)| m.xor(a, b)).collect();
            }
        }
        pis.push(x);
        s1 = x1;
        s2 = x2;
    }
    Unrolled {
        m,
        pis,
        out_diffs,
        next_diffs,
    }
}

const WINDOW_CONFLICTS: u64 = 200_000;

/// Checks the output differences one at a time; `Some(None)` when all are
/// unsatisfiable.
fn outputs_differ(u: &Unrolled, sw: &mut Sweeper, conflicts: u64) -> Option<Option<Vec<bool>>> {
    for &d in &u.out_diffs {
        match sw.solve(d, conflicts) {
            Some(None) => {}
            r => return r,
        }
    }
    Some(None)
}

/// Latch pairs whose next values provably agree in the window.
fn provable_pairs(u: &Unrolled, sw: &mut Sweeper) -> Vec<bool> {
    u.next_diffs
        .iter()
        .map(|&d| sw.solve(d, WINDOW_CONFLICTS) == Some(None))
        .collect()
}

/// Bounded check of the first `depth` cycles from both initial states.
///
/// Cycles are checked one at a time. Latch pairs proven equal in every
/// reachable state of a cycle are merged from then on, and each check
/// starts from a short stretch of free state, widening to the full prefix
/// only when the narrow check fails.
pub fn bmc_check(n1: &Aig, n2: &Aig, depth: usize) -> Result<Outcome, EquivError> {
    check_signature(n1, n2)?;
    let pairs = if n1.num_latches() == n2.num_latches() {
        n1.num_latches()
    } else {
        0
    };
    // merged[t][i]: latch i holds the same value in both designs at cycle t
    let mut merged: Vec<Vec<bool>> = vec![(0..pairs)
        .map(|i| n1.latches()[i].init == n2.latches()[i].init)
        .collect()];
    // windows with free initial state depend only on their merge pattern
    let mut proven: HashMap<Vec<Vec<bool>>, Vec<bool>> = HashMap::new();
    let mut hint = 1;
    for t in 0..depth {
        let mut back = hint.min(t);
        let next = loop {
            let first = t - back;
            let key = (first > 0).then(|| merged[first..=t].to_vec());
            if let Some(next) = key.as_ref().and_then(|k| proven.get(k)) {
                break next.clone();
            }
            let u = unroll_pair(n1, n2, &merged, first, t);
            let exact = first == 0;
            let roots: Vec<Lit> = u.out_diffs.iter().chain(&u.next_diffs).copied().collect();
            let mut sw = Sweeper::new(&u.m, &roots, 0);
            match outputs_differ(&u, &mut sw, if exact { 0 } else { WINDOW_CONFLICTS }) {
                Some(None) => {
                    hint = back.max(1);
                    let next = if t + 1 < depth && pairs > 0 {
                        provable_pairs(&u, &mut sw)
                    } else {
                        vec![false; pairs]
                    };
                    if let Some(k) = key {
                        proven.insert(k, next.clone());
                    }
                    break next;
                }
                Some(Some(model)) if exact => {
                    let inputs = u
                        .pis
                        .iter()
                        .map(|x| x.iter().map(|&l| sw.value(&model, l)).collect())
                        .collect();
                    return Ok(Outcome::Counterexample(first_mismatch(n1, n2, inputs)?));
                }
                _ => back = (back * 2).max(1).min(t),
            }
        };
        merged.push(next);
    }
    Ok(Outcome::Equivalent)
}

/// Bit-parallel evaluation of several designs over every input vector.
struct ProductSim<'a> {
    nets: Vec<&'a Aig>,
    npi: usize,
    words: usize,
    patterns: usize,
    vals: Vec<Vec<u64>>,
}

impl<'a> ProductSim<'a> {
    fn new(nets: Vec<&'a Aig>) -> ProductSim<'a> {
        let npi = nets[0].num_inputs();
        let patterns = 1usize << npi;
        let words = patterns.div_ceil(64);
        let vals = nets.iter().map(|n| vec![0u64; n.num_nodes() * words]).collect();
        ProductSim {
            nets,
            npi,
            words,
            patterns,
            vals,
        }
    }

    fn input_word(k: usize, word: usize) -> u64 {
        const MASKS: [u64; 6] = [
            0xAAAA_AAAA_AAAA_AAAA,
            0xCCCC_CCCC_CCCC_CCCC,
            0xF0F0_F0F0_F0F0_F0F0,
            0xFF00_FF00_FF00_FF00,
            0xFFFF_0000_FFFF_0000,
            0xFFFF_FFFF_0000_0000,
        ];
        if k < 6 {
            MASKS[k]
        } else if word >> (k - 6) & 1 == 1 {
            !0
        } else {
            0
        }
    }

    /// Evaluates design `d` in the state encoded by the bits of `state`.
    fn eval(&mut self, d: usize, state: u64) {
        let w = self.words;
        let n = self.nets[d];
        let vals = &mut self.vals[d];
        for (i, node) in n.nodes().iter().enumerate() {
            for k in 0..w {
                vals[i * w + k] = match *node {
                    Node::Const => 0,
                    Node::Input(p) => Self::input_word(p as usize, k),
                    Node::Latch(l) => {
                        if state >> l & 1 == 1 {
                            !0
                        } else {
                            0
                        }
                    }
                    Node::And(a, b) => {
                        let va = vals[a.node() as usize * w + k] ^ mask(a);
                        let vb = vals[b.node() as usize * w + k] ^ mask(b);
                        va & vb
                    }
                };
            }
        }
    }

    fn bit(&self, d: usize, l: Lit, p: usize) -> bool {
        let v = self.vals[d][l.node() as usize * self.words + p / 64] >> (p % 64) & 1 == 1;
        v ^ l.is_complemented()
    }

    fn input_vector(&self, p: usize) -> Vec<bool> {
        (0..self.npi).map(|k| p >> k & 1 == 1).collect()
    }
}

fn mask(l: Lit) -> u64 {
    if l.is_complemented() {
        !0
    } else {
        0
    }
}

fn pack(v: &[bool]) -> u64 {
    v.iter()
        .enumerate()
        .fold(0, |acc, (i, &b)| acc | (b as u64) << i)
}

type Parents = HashMap<u64, Option<(u64, usize)>>;

fn trace_to(parents: &Parents, mut s: u64, sim: &ProductSim) -> Vec<Vec<bool>> {
    let mut rev = Vec::new();
    while let Some(&Some((prev, p))) = parents.get(&s) {
        rev.push(sim.input_vector(p));
        s = prev;
    }
    rev.reverse();
    rev
}

fn check_limits(latches: usize, npi: usize, max_latches: usize) -> Result<(), EquivError> {
    let limit = max_latches.min(63);
    if latches > limit {
        return Err(EquivError::LimitExceeded {
            what: "latch",
            value: latches,
            limit,
        });
    }
    if npi > 16 {
        return Err(EquivError::LimitExceeded {
            what: "input",
            value: npi,
            limit: 16,
        });
    }
    Ok(())
}

/// Exact equivalence by exploring every reachable state of the product
/// machine under every input vector.
pub fn exhaustive_check(n1: &Aig, n2: &Aig, max_latches: usize) -> Result<Outcome, EquivError> {
    check_signature(n1, n2)?;
    let l1 = n1.num_latches();
    check_limits(l1 + n2.num_latches(), n1.num_inputs(), max_latches)?;
    let mut sim = ProductSim::new(vec![n1, n2]);
    let init = pack(&n1.initial_state()) | pack(&n2.initial_state()) << l1;
    let mut parents: Parents = HashMap::new();
    parents.insert(init, None);
    let mut queue = VecDeque::from([init]);
    let low = if l1 == 0 { 0 } else { u64::MAX >> (64 - l1) };
    while let Some(s) = queue.pop_front() {
        sim.eval(0, s & low);
        sim.eval(1, s >> l1);
        for p in 0..sim.patterns {
            for o in 0..n1.num_outputs() {
                if sim.bit(0, n1.outputs()[o], p) != sim.bit(1, n2.outputs()[o], p) {
                    let mut input_vectors = trace_to(&parents, s, &sim);
                    input_vectors.push(sim.input_vector(p));
                    let failing_cycle = input_vectors.len() - 1;
                    return Ok(Outcome::Counterexample(CexTrace {
                        input_vectors,
                        failing_cycle,
                        failing_output: o,
                    }));
                }
            }
            let mut next = 0u64;
            for (i, l) in n1.latches().iter().enumerate() {
                next |= (sim.bit(0, l.next, p) as u64) << i;
            }
            for (i, l) in n2.latches().iter().enumerate() {
                next |= (sim.bit(1, l.next, p) as u64) << (l1 + i);
            }
            if let std::collections::hash_map::Entry::Vacant(e) = parents.entry(next) {
                e.insert(Some((s, p)));
                queue.push_back(next);
            }
        }
    }
    Ok(Outcome::Equivalent)
}

/// Inputs up to which [`comb_equivalent`] enumerates every assignment.
pub const COMB_EXHAUSTIVE_INPUTS: usize = 24;

/// Combinational equivalence of two latch-free designs: exhaustive
/// bit-parallel evaluation for up to [`COMB_EXHAUSTIVE_INPUTS`] inputs, a
/// SAT miter otherwise.
pub fn comb_equivalent(a: &Aig, b: &Aig) -> Result<bool, EquivError> {
    if a.num_latches() + b.num_latches() > 0 {
        return Err(EquivError::LimitExceeded {
            what: "latch",
            value: a.num_latches() + b.num_latches(),
            limit: 0,
        });
    }
    check_signature(a, b)?;
    let npi = a.num_inputs();
    if npi > COMB_EXHAUSTIVE_INPUTS {
        return Ok(bmc_check(a, b, 1)?.is_equivalent());
    }
    const LOW: [u64; 6] = [
        0xAAAA_AAAA_AAAA_AAAA,
        0xCCCC_CCCC_CCCC_CCCC,
        0xF0F0_F0F0_F0F0_F0F0,
        0xFF00_FF00_FF00_FF00,
        0xFFFF_0000_FFFF_0000,
        0xFFFF_FFFF_0000_0000,
    ];
    let valid = if npi >= 6 { !0 } else { (1u64 << (1 << npi)) - 1 };
    let chunks = 1u64 << npi.saturating_sub(6);
    let mut va = vec![0u64; a.num_nodes()];
    let mut vb = vec![0u64; b.num_nodes()];
    let eval = |n: &Aig, v: &mut [u64], chunk: u64| {
        for (i, node) in n.nodes().iter().enumerate() {
            v[i] = match *node {
                Node::Input(k) if (k as usize) < 6 => LOW[k as usize],
                Node::Input(k) => 0u64.wrapping_sub(chunk >> (k - 6) & 1),
                Node::And(x, y) => (v[x.node() as usize] ^ mask(x)) & (v[y.node() as usize] ^ mask(y)),
                _ => 0,
            };
        }
    };
    for chunk in 0..chunks {
        eval(a, &mut va, chunk);
        eval(b, &mut vb, chunk);
        for (x, y) in a.outputs().iter().zip(b.outputs()) {
            let d = (va[x.node() as usize] ^ mask(*x)) ^ (vb[y.node() as usize] ^ mask(*y));
            if d & valid != 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// All states reachable from the initial state, sorted.
pub fn reachable_states(n: &Aig, max_latches: usize) -> Result<Vec<Vec<bool>>, EquivError> {
    check_limits(n.num_latches(), n.num_inputs(), max_latches)?;
    let mut sim = ProductSim::new(vec![n]);
    let init = pack(&n.initial_state());
    let mut seen = std::collections::BTreeSet::from([init]);
    let mut queue = VecDeque::from([init]);
    while let Some(s) = queue.pop_front() {
        sim.eval(0, s);
        for p in 0..sim.patterns {
            let mut next = 0u64;
            for (i, l) in n.latches().iter().enumerate() {
                next |= (sim.bit(0, l.next, p) as u64) << i;
            }
            if seen.insert(next) {
                queue.push_back(next);
            }
        }
    }
    Ok(seen
        .into_iter()
        .map(|s| (0..n.num_latches()).map(|i| s >> i & 1 == 1).collect())
        .collect())
}
