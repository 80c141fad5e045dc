//! The optimization loop: candidate generation and frame-by-frame validation
//! of each candidate on the base and inductive networks, with accepted edits
//! applied to all three networks immediately.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use log::{debug, info};
use thiserror::Error;

use crate::aig::{Aig, Lit, Node, NodeId, Stats};
use crate::odc::{CheckConfig, Checker, Verdict};
use crate::unroll::{Edit, FrameKind, FrameNetwork, FrameUndo, UnrollError, UnrollOptions};
use crate::window::collect_divisors;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptConfig {
    /// Induction depth.
    pub k: usize,
    pub max_window_nodes: usize,
    pub max_tfo_levels: u32,
    pub max_divisors: usize,
    /// Per SAT call; 0 means unlimited.
    pub conflict_limit: u64,
    pub enable_resub: bool,
    pub enable_assumptions: bool,
    pub level_control: bool,
    pub seed: u64,
    /// Random simulation words used to refute candidates before SAT.
    pub sim_words: usize,
    /// Hash and fold while unrolling (targets merged away become uneditable).
    pub strash_frames: bool,
    pub dump_cnf: Option<PathBuf>,
    /// Check after every rejected candidate that all networks were restored.
    pub audit_undo: bool,
}

impl Default for OptConfig {
    fn default() -> Self {
        OptConfig {
            k: 1,
            max_window_nodes: 50_000,
            max_tfo_levels: 16,
            max_divisors: 100,
            conflict_limit: 10_000,
            enable_resub: true,
            enable_assumptions: true,
            level_control: true,
            seed: 0,
            sim_words: 4,
            strash_frames: false,
            dump_cnf: None,
            audit_undo: false,
        }
    }
}

impl OptConfig {
    fn check_config(&self) -> CheckConfig {
        CheckConfig {
            max_levels: self.max_tfo_levels,
            max_nodes: self.max_window_nodes,
            conflict_limit: self.conflict_limit,
            sim_words: self.sim_words,
            seed: self.seed,
            dump_cnf: self.dump_cnf.clone(),
        }
    }
}

#[derive(Debug, Error)]
pub enum OptError {
    #[error("invalid configuration: {0}")]
    Config(&'static str),
    #[error(transparent)]
    Unroll(#[from] UnrollError),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OptReport {
    pub edits_applied: Vec<Edit>,
    pub candidates_tried: u64,
    pub valid: u64,
    pub invalid: u64,
    pub unknown: u64,
    /// Targets skipped as dead, constant-fed or buffers.
    pub skipped: u64,
    pub sat_calls: u64,
    pub sat_unknown: u64,
    pub sim_refuted: u64,
    pub stats_before: Stats,
    pub stats_after: Stats,
    pub wall_time: Duration,
    pub undo_violations: u64,
}

/// Candidate edits for gate `g`, in trial order.
pub fn gen_candidates(n: &Aig, g: NodeId, cfg: &OptConfig) -> Vec<Edit> {
    candidates(n, g, cfg, &n.levels())
}

fn candidates(n: &Aig, g: NodeId, cfg: &OptConfig, levels: &[u32]) -> Vec<Edit> {
    let Some(fanins) = n.fanins(g) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for (slot, &fanin) in fanins.iter().enumerate() {
        for value in [false, true] {
            if fanin != Lit::constant(value) {
                out.push(Edit::stuck_at(n, g, slot, value).expect("g is an AND"));
            }
        }
    }
    if !cfg.enable_resub {
        return out;
    }
    for d in collect_divisors(n, g, cfg.max_divisors) {
        for p in [false, true] {
            let lit = Lit::new(d, p);
            for slot in 0..2 {
                if lit == fanins[slot] || d == fanins[1 - slot].node() {
                    continue;
                }
                if cfg.level_control && levels[d as usize] >= levels[fanins[slot].node() as usize] {
                    continue;
                }
                out.push(Edit::resub(n, g, slot, lit).expect("divisors precede g"));
            }
        }
    }
    out
}

enum Outcome {
    Applied,
    Rejected,
    Unknown,
}

struct Engine {
    cfg: OptConfig,
    base: FrameNetwork,
    ind: FrameNetwork,
    checker: Checker,
    report: OptReport,
}

impl Engine {
    fn undo_all(fnet: &mut FrameNetwork, undos: &mut Vec<FrameUndo>) -> Result<(), OptError> {
        while let Some(u) = undos.pop() {
            fnet.undo_in_frame(u)?;
        }
        Ok(())
    }

    fn verdict(&mut self, v: Verdict) -> Option<Outcome> {
        match v {
            Verdict::Valid => None,
            Verdict::Unknown => Some(Outcome::Unknown),
            Verdict::Invalid(_) | Verdict::Inapplicable => Some(Outcome::Rejected),
        }
    }

    /// Cheap early rejection: random patterns on the inductive network in
    /// exactly the state its SAT check would see. A refutation there means
    /// the final check would fail, so the base checks can be skipped.
    fn inductive_refuted(&mut self, e: &Edit) -> Result<bool, OptError> {
        let k = self.cfg.k;
        let quiet: Vec<usize> = if self.cfg.enable_assumptions {
            (1..=k).collect()
        } else {
            Vec::new()
        };
        if self.checker.refutes_quiet(&self.ind, e, k + 1, &quiet) {
            return Ok(true);
        }
        let mut undos = Vec::with_capacity(k);
        if self.cfg.enable_assumptions {
            for j in 1..=k {
                match self.ind.apply_in_frame(e, j) {
                    Ok(u) => undos.push(u),
                    Err(_) => {
                        Self::undo_all(&mut self.ind, &mut undos)?;
                        return Ok(false);
                    }
                }
            }
        }
        let hit = self.checker.refutes(&self.ind, e, k + 1);
        Self::undo_all(&mut self.ind, &mut undos)?;
        Ok(hit)
    }

    /// Validates `e` on every base frame and the last inductive frame;
    /// applies it everywhere on success, leaves everything untouched
    /// otherwise.
    fn try_edit(&mut self, n: &mut Aig, e: &Edit) -> Result<Outcome, OptError> {
        let k = self.cfg.k;
        if self.cfg.sim_words > 0
            && (self.checker.refutes(&self.base, e, 1) || self.inductive_refuted(e)?)
        {
            return Ok(Outcome::Rejected);
        }
        let mut base_undos = Vec::with_capacity(k);
        for j in 1..=k {
            let v = self.checker.check(&self.base, e, j);
            if let Some(out) = self.verdict(v) {
                Self::undo_all(&mut self.base, &mut base_undos)?;
                return Ok(out);
            }
            match self.base.apply_in_frame(e, j) {
                Ok(u) => base_undos.push(u),
                Err(_) => {
                    Self::undo_all(&mut self.base, &mut base_undos)?;
                    return Ok(Outcome::Rejected);
                }
            }
        }
        let mut ind_undos = Vec::with_capacity(k + 1);
        let mut rejected = None;
        if self.cfg.enable_assumptions {
            for j in 1..=k {
                match self.ind.apply_in_frame(e, j) {
                    Ok(u) => ind_undos.push(u),
                    Err(_) => {
                        rejected = Some(Outcome::Rejected);
                        break;
                    }
                }
            }
        }
        if rejected.is_none() {
            let v = self.checker.check(&self.ind, e, k + 1);
            rejected = self.verdict(v);
        }
        if rejected.is_none() {
            match self.ind.apply_in_frame(e, k + 1) {
                Ok(_) => {
                    e.apply(n).map_err(UnrollError::from)?;
                    return Ok(Outcome::Applied);
                }
                Err(_) => rejected = Some(Outcome::Rejected),
            }
        }
        Self::undo_all(&mut self.ind, &mut ind_undos)?;
        Self::undo_all(&mut self.base, &mut base_undos)?;
        Ok(rejected.expect("set on every rejecting path"))
    }
}

fn const_of(konst: &[Option<bool>], l: Lit) -> Option<bool> {
    konst[l.node() as usize].map(|v| v ^ l.is_complemented())
}

/// Runs one optimization pass over `n` and returns the cleaned-up result.
pub fn optimize(n: &Aig, cfg: &OptConfig) -> Result<(Aig, OptReport), OptError> {
    if cfg.k == 0 {
        return Err(OptError::Config("k must be at least 1"));
    }
    if cfg.max_window_nodes == 0 || cfg.max_tfo_levels == 0 {
        return Err(OptError::Config("window limits must be positive"));
    }
    let start = Instant::now();
    let mut report = OptReport {
        stats_before: n.stats(),
        ..OptReport::default()
    };
    if n.num_ands() == 0 {
        report.stats_after = report.stats_before;
        report.wall_time = start.elapsed();
        return Ok((n.clone(), report));
    }
    let mut n = n.clone();
    let opts = UnrollOptions {
        strash: cfg.strash_frames,
    };
    let mut eng = Engine {
        cfg: cfg.clone(),
        base: FrameNetwork::build(&n, cfg.k, FrameKind::Base, opts)?,
        ind: FrameNetwork::build(&n, cfg.k, FrameKind::Inductive, opts)?,
        checker: Checker::new(cfg.check_config()),
        report,
    };
    info!(
        "optimizing: {} ands, {} latches, k={}, frames {}+{} nodes",
        n.num_ands(),
        n.num_latches(),
        cfg.k,
        eng.base.net().num_nodes(),
        eng.ind.net().num_nodes()
    );

    // edits at a gate only touch its fanins, so liveness of later gates and
    // levels/constants of earlier ones stay exact in ascending order
    let live = n.live_nodes();
    let mut levels = n.levels();
    let mut konst: Vec<Option<bool>> = vec![None; n.num_nodes()];
    konst[0] = Some(false);
    for g in 0..n.num_nodes() as NodeId {
        if !matches!(n.node(g), Node::And(..)) {
            continue;
        }
        let [a, b] = n.fanins(g).expect("AND");
        let skip = !live[g as usize]
            || const_of(&konst, a).is_some()
            || const_of(&konst, b).is_some()
            || a.node() == b.node();
        if skip {
            eng.report.skipped += 1;
        } else {
            for e in candidates(&n, g, cfg, &levels) {
                eng.report.candidates_tried += 1;
                let hashes = cfg.audit_undo.then(|| {
                    (
                        eng.base.net().table_hash(),
                        eng.ind.net().table_hash(),
                        n.table_hash(),
                    )
                });
                match eng.try_edit(&mut n, &e)? {
                    Outcome::Applied => {
                        debug!("edit on {g}: {e:?}");
                        eng.report.valid += 1;
                        eng.report.edits_applied.push(e);
                        break;
                    }
                    Outcome::Rejected => eng.report.invalid += 1,
                    Outcome::Unknown => eng.report.unknown += 1,
                }
                if let Some(h) = hashes {
                    let now = (
                        eng.base.net().table_hash(),
                        eng.ind.net().table_hash(),
                        n.table_hash(),
                    );
                    if now != h {
                        eng.report.undo_violations += 1;
                    }
                }
            }
        }
        let [a, b] = n.fanins(g).expect("AND");
        levels[g as usize] = 1 + levels[a.node() as usize].max(levels[b.node() as usize]);
        konst[g as usize] = match (const_of(&konst, a), const_of(&konst, b)) {
            (Some(false), _) | (_, Some(false)) => Some(false),
            (Some(true), Some(true)) => Some(true),
            _ if a == !b => Some(false),
            _ => None,
        };
    }

    let out = n.cleanup();
    let stats = eng.checker.stats();
    let mut report = eng.report;
    report.sat_calls = stats.sat_calls;
    report.sat_unknown = stats.sat_unknown;
    report.sim_refuted = stats.sim_refuted;
    report.stats_after = out.stats();
    report.wall_time = start.elapsed();
    info!(
        "done: {} edits, {} candidates, {} sat calls, {} -> {} ands in {:.2?}",
        report.edits_applied.len(),
        report.candidates_tried,
        report.sat_calls,
        report.stats_before.and_count,
        report.stats_after.and_count,
        report.wall_time
    );
    Ok((out, report))
}

/// Replays `edits` (as returned by [`optimize`], in order, on the
/// pre-cleanup ids of `n`) on freshly built frame networks and checks that
/// every edit leaves the complete base network and the last inductive frame
/// unchanged. Returns the index of the first edit that does not.
pub fn audit_edits(
    n: &Aig,
    edits: &[Edit],
    k: usize,
    assumptions: bool,
) -> Result<Option<usize>, OptError> {
    let opts = UnrollOptions::default();
    let mut base = FrameNetwork::build(n, k, FrameKind::Base, opts)?;
    let mut ind = FrameNetwork::build(n, k, FrameKind::Inductive, opts)?;
    let same = |a: &Aig, b: &Aig| crate::equiv::comb_equivalent(a, b).unwrap_or(false);
    for (i, e) in edits.iter().enumerate() {
        let before = base.net().clone();
        for j in 1..=k {
            base.apply_in_frame(e, j)?;
        }
        if !same(&before, base.net()) {
            return Ok(Some(i));
        }
        if assumptions {
            for j in 1..=k {
                ind.apply_in_frame(e, j)?;
            }
        }
        let before = ind.net().clone();
        ind.apply_in_frame(e, k + 1)?;
        if !same(&before, ind.net()) {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equiv::exhaustive_check;
    use crate::fixtures;

    fn run(n: &Aig, cfg: &OptConfig) -> (Aig, OptReport) {
        let (out, rep) = optimize(n, cfg).unwrap();
        assert!(exhaustive_check(n, &out, 20).unwrap().is_equivalent());
        (out, rep)
    }

    #[test]
    fn stuck_at_candidates_for_pi_gate() {
        let mut g = Aig::new();
        let a = g.add_input();
        let b = g.add_input();
        let x = g.and(a, b);
        let c = gen_candidates(&g, x.node(), &OptConfig::default());
        assert_eq!(c.len(), 4);
        let cfg = OptConfig {
            enable_resub: false,
            ..OptConfig::default()
        };
        let f = fixtures::m1b();
        let o1 = f.node("o1");
        assert_eq!(gen_candidates(&f.aig, o1, &cfg).len(), 4);
        assert!(gen_candidates(&f.aig, o1, &OptConfig::default()).len() > 4);
    }

    #[test]
    fn level_control_drops_deeper_divisors() {
        // y = AND(p, q) at level 1; deep is at level 3
        let mut g = Aig::new();
        let p = g.add_input();
        let q = g.add_input();
        let r = g.add_input();
        let d1 = g.and(p, r);
        let d2 = g.and(d1, q);
        let deep = g.and(d2, !r);
        let y = g.and(p, q);
        let t = g.and(y, deep);
        g.add_output(t).unwrap();
        let with = gen_candidates(&g, t.node(), &OptConfig::default());
        let slot_y = g.fanins(t.node()).unwrap().iter().position(|&l| l == y).unwrap();
        assert!(!with
            .iter()
            .any(|e| e.slot == slot_y && e.new_lit.node() == deep.node()));
        let cfg = OptConfig {
            level_control: false,
            ..OptConfig::default()
        };
        let without = gen_candidates(&g, t.node(), &cfg);
        assert!(without.len() > with.len());
    }

    #[test]
    fn m1_single_edit() {
        let f = fixtures::m1();
        let (out, rep) = run(&f.aig, &OptConfig::default());
        assert_eq!(rep.edits_applied.len(), 1);
        assert_eq!(rep.edits_applied[0].target, f.node("w1"));
        assert_eq!(rep.stats_before.and_count, 4);
        assert_eq!(out.num_ands(), 2);
        assert_eq!(out.outputs()[0], Lit::new(out.inputs()[2], false));
    }

    #[test]
    fn m1b_removes_w1() {
        let f = fixtures::m1b();
        let (out, rep) = run(&f.aig, &OptConfig::default());
        assert!(!rep.edits_applied.is_empty());
        // the output no longer depends on c
        let c = out.inputs()[2];
        assert!(!out.fanouts()[c as usize].iter().any(|_| true));
    }

    #[test]
    fn m2_needs_two_steps() {
        let f = fixtures::m2();
        let (_, r1) = run(&f.aig, &OptConfig::default());
        assert_eq!(r1.edits_applied.len(), 0);
        let cfg = OptConfig {
            k: 2,
            ..OptConfig::default()
        };
        let (out, r2) = run(&f.aig, &cfg);
        assert!(r2.edits_applied.iter().any(|e| e.target == f.node("w1")));
        assert!(out.num_ands() < f.aig.num_ands());
    }

    #[test]
    fn m3_assumptions() {
        let f = fixtures::m3();
        let (out, rep) = run(&f.aig, &OptConfig::default());
        assert_eq!(rep.edits_applied.len(), 1);
        assert_eq!(out.outputs()[0], Lit::FALSE);
        let cfg = OptConfig {
            enable_assumptions: false,
            ..OptConfig::default()
        };
        let (out, rep) = run(&f.aig, &cfg);
        assert_eq!(rep.edits_applied.len(), 0);
        assert_eq!(out.num_ands(), 1);
    }

    #[test]
    fn sat_only_gives_same_edits() {
        for (_, g) in fixtures::all() {
            for k in 1..=2 {
                let a = OptConfig {
                    k,
                    ..OptConfig::default()
                };
                let b = OptConfig {
                    sim_words: 0,
                    ..a.clone()
                };
                let (oa, ra) = optimize(&g, &a).unwrap();
                let (ob, rb) = optimize(&g, &b).unwrap();
                assert_eq!(ra.edits_applied, rb.edits_applied);
                assert_eq!(oa, ob);
            }
        }
    }

    #[test]
    fn fixpoint_on_fixtures() {
        for (name, g) in fixtures::all() {
            let mut cur = g.clone();
            let mut last = usize::MAX;
            for _ in 0..5 {
                let (next, rep) = optimize(&cur, &OptConfig::default()).unwrap();
                assert!(next.num_ands() <= cur.num_ands());
                last = rep.edits_applied.len();
                cur = next;
                if last == 0 {
                    break;
                }
            }
            assert_eq!(last, 0, "{name} did not reach a fixpoint");
            assert!(exhaustive_check(&g, &cur, 20).unwrap().is_equivalent());
        }
    }

    #[test]
    fn audit_accepts_applied_edits() {
        for (_, g) in fixtures::all() {
            for (k, assume) in [(1, true), (2, true), (1, false)] {
                let cfg = OptConfig {
                    k,
                    enable_assumptions: assume,
                    ..OptConfig::default()
                };
                let (_, rep) = optimize(&g, &cfg).unwrap();
                assert_eq!(audit_edits(&g, &rep.edits_applied, k, assume).unwrap(), None);
            }
        }
    }

    #[test]
    fn audit_rejects_bad_edit() {
        let f = fixtures::m1();
        let e = Edit::stuck_at(&f.aig, f.node("g1"), 0, false).unwrap();
        assert_eq!(audit_edits(&f.aig, &[e], 1, true).unwrap(), Some(0));
    }

    #[test]
    fn bad_config() {
        let f = fixtures::m1();
        let cfg = OptConfig {
            k: 0,
            ..OptConfig::default()
        };
        assert!(matches!(optimize(&f.aig, &cfg), Err(OptError::Config(_))));
    }

    #[test]
    fn empty_design_unchanged() {
        let g = Aig::new();
        let (out, rep) = optimize(&g, &OptConfig::default()).unwrap();
        assert_eq!(out, g);
        assert_eq!(rep.candidates_tried, 0);
    }
}
