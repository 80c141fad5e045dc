//! Time-frame expansion into the base-case and inductive-case networks, and
//! per-frame application of fanin edits.
//!
//! Both networks are purely combinational [`Aig`]s. In the base network the
//! first frame's register outputs are the initial values; in the inductive
//! network they are free state inputs. Register inputs of frame `j` drive
//! the register outputs of frame `j + 1`. Frames are numbered from 1.
//!
//! By default every AND node of every frame gets a private copy, so an edit
//! on a gate can always be mirrored in any frame. With
//! [`UnrollOptions::strash`] enabled, copies are folded and hashed; a copy
//! that was folded away or shared with another gate cannot be edited and the
//! edit is reported as inapplicable in that frame.

use std::sync::atomic::{AtomicU64, Ordering};

use thiserror::Error;

use crate::aig::{Aig, AigError, Lit, Node, NodeId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrameKind {
    Base,
    Inductive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EditKind {
    StuckAt0,
    StuckAt1,
    Resub,
}

/// A fanin rewiring on one AND node of the original network.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edit {
    pub target: NodeId,
    /// Fanin slot, 0 or 1.
    pub slot: usize,
    pub new_lit: Lit,
    /// The fanin being replaced; restoring it undoes the edit.
    pub old_lit: Lit,
    pub kind: EditKind,
}

impl Edit {
    /// Edit that ties fanin `slot` of `target` to a constant.
    pub fn stuck_at(aig: &Aig, target: NodeId, slot: usize, value: bool) -> Result<Edit, AigError> {
        let fanins = aig.fanins(target).ok_or(AigError::NotAnAnd(target))?;
        let old_lit = *fanins.get(slot).ok_or(AigError::BadFaninSlot(slot))?;
        Ok(Edit {
            target,
            slot,
            new_lit: Lit::constant(value),
            old_lit,
            kind: if value {
                EditKind::StuckAt1
            } else {
                EditKind::StuckAt0
            },
        })
    }

    /// Edit that replaces fanin `slot` of `target` with `divisor`.
    pub fn resub(aig: &Aig, target: NodeId, slot: usize, divisor: Lit) -> Result<Edit, AigError> {
        let fanins = aig.fanins(target).ok_or(AigError::NotAnAnd(target))?;
        let old_lit = *fanins.get(slot).ok_or(AigError::BadFaninSlot(slot))?;
        if divisor.node() >= target {
            return Err(AigError::OrderViolation {
                node: target,
                lit: divisor,
            });
        }
        Ok(Edit {
            target,
            slot,
            new_lit: divisor,
            old_lit,
            kind: EditKind::Resub,
        })
    }

    /// Applies the edit to the original network.
    pub fn apply(&self, aig: &mut Aig) -> Result<(), AigError> {
        aig.replace_fanin(self.target, self.slot, self.new_lit)?;
        Ok(())
    }

    pub fn revert(&self, aig: &mut Aig) -> Result<(), AigError> {
        aig.replace_fanin(self.target, self.slot, self.old_lit)?;
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct UnrollOptions {
    /// Fold constants and hash structurally while unrolling.
    pub strash: bool,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UnrollError {
    #[error("induction depth must be at least 1")]
    ZeroDepth,
    #[error("frame {frame} out of range 1..={frames}")]
    FrameOutOfRange { frame: usize, frames: usize },
    #[error("node {target} has no private copy in frame {frame}")]
    Inapplicable { target: NodeId, frame: usize },
    #[error("undo record does not match the current network")]
    StaleUndo,
    #[error(transparent)]
    Aig(#[from] AigError),
}

/// Signals of one frame, as literals of the unrolled network.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FrameIo {
    pub inputs: Vec<Lit>,
    pub outputs: Vec<Lit>,
    pub next_state: Vec<Lit>,
}

/// Record needed to revert one [`FrameNetwork::apply_in_frame`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FrameUndo {
    pub node: NodeId,
    pub slot: usize,
    pub previous: Lit,
    pub applied: Lit,
    prior_version: u64,
    version: u64,
    rank_epoch: u64,
}

/// A combinational unrolling of a sequential network.
#[derive(Clone, Debug)]
pub struct FrameNetwork {
    net: Aig,
    kind: FrameKind,
    frames: usize,
    frame_map: Vec<Vec<Lit>>,
    io: Vec<FrameIo>,
    state_inputs: Vec<Lit>,
    owner: Vec<Option<(NodeId, u32)>>,
    aliased: Vec<bool>,
    observed: Vec<bool>,
    fanouts: Vec<Vec<NodeId>>,
    rank: Vec<u32>,
    uid: u64,
    version: u64,
    next_version: u64,
    rank_epoch: u64,
    changes: Vec<NodeId>,
}

static NEXT_UID: AtomicU64 = AtomicU64::new(1);

/// `k`-frame network starting from the initial state.
pub fn build_base(n: &Aig, k: usize) -> Result<FrameNetwork, UnrollError> {
    FrameNetwork::build(n, k, FrameKind::Base, UnrollOptions::default())
}

/// `k + 1`-frame network starting from a free state.
pub fn build_inductive(n: &Aig, k: usize) -> Result<FrameNetwork, UnrollError> {
    FrameNetwork::build(n, k, FrameKind::Inductive, UnrollOptions::default())
}

impl FrameNetwork {
    /// Unrolls `n` for induction depth `k`: `k` frames for the base kind,
    /// `k + 1` for the inductive kind.
    pub fn build(
        n: &Aig,
        k: usize,
        kind: FrameKind,
        opts: UnrollOptions,
    ) -> Result<FrameNetwork, UnrollError> {
        if k == 0 {
            return Err(UnrollError::ZeroDepth);
        }
        let frames = match kind {
            FrameKind::Base => k,
            FrameKind::Inductive => k + 1,
        };
        let mut net = Aig::new();
        let mut owner: Vec<Option<(NodeId, u32)>> = vec![None];
        let mut aliased = vec![false];
        let state_inputs: Vec<Lit> = match kind {
            FrameKind::Base => Vec::new(),
            FrameKind::Inductive => n.latches().iter().map(|_| net.add_input()).collect(),
        };
        let mut frame_map: Vec<Vec<Lit>> = Vec::with_capacity(frames);
        let mut io: Vec<FrameIo> = Vec::with_capacity(frames);
        for f in 0..frames {
            let mut map = vec![Lit::FALSE; n.num_nodes()];
            let inputs: Vec<Lit> = n
                .inputs()
                .iter()
                .map(|&i| {
                    let l = net.add_input();
                    map[i as usize] = l;
                    l
                })
                .collect();
            for (li, latch) in n.latches().iter().enumerate() {
                map[latch.ro as usize] = if f == 0 {
                    match kind {
                        FrameKind::Base => Lit::constant(latch.init),
                        FrameKind::Inductive => state_inputs[li],
                    }
                } else {
                    io[f - 1].next_state[li]
                };
            }
            for (id, node) in n.nodes().iter().enumerate() {
                let Node::And(a, b) = *node else { continue };
                let a = map[a.node() as usize] ^ a.is_complemented();
                let b = map[b.node() as usize] ^ b.is_complemented();
                let before = net.num_nodes();
                let lit = if opts.strash {
                    net.add_and(a, b)?
                } else {
                    net.push_and_raw(a, b)?
                };
                owner.resize(net.num_nodes(), None);
                aliased.resize(net.num_nodes(), false);
                if net.num_nodes() > before {
                    owner[lit.node() as usize] = Some((id as NodeId, f as u32));
                } else if lit.node() != 0 {
                    aliased[lit.node() as usize] = true;
                }
                map[id] = lit;
            }
            let tr = |l: Lit| map[l.node() as usize] ^ l.is_complemented();
            io.push(FrameIo {
                inputs,
                outputs: n.outputs().iter().map(|&o| tr(o)).collect(),
                next_state: n.latches().iter().map(|l| tr(l.next)).collect(),
            });
            frame_map.push(map);
        }
        owner.resize(net.num_nodes(), None);
        aliased.resize(net.num_nodes(), false);

        for frame in &io {
            for &o in &frame.outputs {
                net.add_output(o)?;
            }
        }
        for &ri in &io[frames - 1].next_state {
            net.add_output(ri)?;
        }
        let mut observed = vec![false; net.num_nodes()];
        for &o in net.outputs() {
            if o.node() != 0 {
                observed[o.node() as usize] = true;
            }
        }
        let mut fanouts = vec![Vec::new(); net.num_nodes()];
        for (i, node) in net.nodes().iter().enumerate() {
            if let Node::And(a, b) = *node {
                fanouts[a.node() as usize].push(i as NodeId);
                fanouts[b.node() as usize].push(i as NodeId);
            }
        }
        let rank = net.levels();
        Ok(FrameNetwork {
            net,
            kind,
            frames,
            frame_map,
            io,
            state_inputs,
            owner,
            aliased,
            observed,
            fanouts,
            rank,
            uid: NEXT_UID.fetch_add(1, Ordering::Relaxed),
            version: 0,
            next_version: 1,
            rank_epoch: 0,
            changes: Vec::new(),
        })
    }

    pub fn net(&self) -> &Aig {
        &self.net
    }

    pub fn kind(&self) -> FrameKind {
        self.kind
    }

    pub fn frames(&self) -> usize {
        self.frames
    }

    /// Per-frame inputs, outputs and next-state literals (index 0 is frame 1).
    pub fn frame_io(&self) -> &[FrameIo] {
        &self.io
    }

    /// Free state inputs of the first inductive frame.
    pub fn state_inputs(&self) -> &[Lit] {
        &self.state_inputs
    }

    /// Identifies the current content: changes on every edit, and returns to
    /// its earlier value when the most recent edits are undone in reverse
    /// order.
    pub fn version(&self) -> u64 {
        self.version
    }

    /// Every node rewired so far, in order, including undos.
    pub fn change_log(&self) -> &[NodeId] {
        &self.changes
    }

    /// Process-unique identity, for caches keyed on a particular network.
    pub fn uid(&self) -> u64 {
        self.uid
    }

    /// A topological rank: every fanin has a strictly smaller rank than its
    /// fanout. Starts as the logic level and is only ever raised, so it is an
    /// upper bound on path length differences.
    #[inline]
    pub fn rank(&self, node: NodeId) -> u32 {
        self.rank[node as usize]
    }

    /// Whether a node drives a checked output: any frame's primary output or
    /// a last-frame register input.
    #[inline]
    pub fn is_observed(&self, node: NodeId) -> bool {
        self.observed[node as usize]
    }

    #[inline]
    pub fn fanouts(&self, node: NodeId) -> &[NodeId] {
        &self.fanouts[node as usize]
    }

    fn check_frame(&self, frame: usize) -> Result<(), UnrollError> {
        if frame == 0 || frame > self.frames {
            Err(UnrollError::FrameOutOfRange {
                frame,
                frames: self.frames,
            })
        } else {
            Ok(())
        }
    }

    /// The copy of an original literal in `frame`.
    pub fn translate(&self, lit: Lit, frame: usize) -> Lit {
        self.frame_map[frame - 1][lit.node() as usize] ^ lit.is_complemented()
    }

    /// The private AND copy of original gate `target` in `frame`, if any.
    pub fn copy_of(&self, target: NodeId, frame: usize) -> Option<NodeId> {
        if frame == 0 || frame > self.frames {
            return None;
        }
        let lit = *self.frame_map[frame - 1].get(target as usize)?;
        let node = lit.node();
        let private = !lit.is_complemented()
            && self.net.is_and(node)
            && self.owner[node as usize] == Some((target, frame as u32 - 1))
            && !self.aliased[node as usize];
        private.then_some(node)
    }

    /// Resolves where `e` lands in `frame`: (net node, fanin slot, translated
    /// new fanin).
    pub fn locate(&self, e: &Edit, frame: usize) -> Result<(NodeId, usize, Lit), UnrollError> {
        self.check_frame(frame)?;
        let node = self.copy_of(e.target, frame).ok_or(UnrollError::Inapplicable {
            target: e.target,
            frame,
        })?;
        let old = self.translate(e.old_lit, frame);
        let new = self.translate(e.new_lit, frame);
        let fanins = self.net.fanins(node).expect("copy is an AND");
        let slot = if fanins[e.slot] == old {
            e.slot
        } else if fanins[1 - e.slot] == old {
            1 - e.slot
        } else {
            return Err(UnrollError::Inapplicable {
                target: e.target,
                frame,
            });
        };
        if new.node() >= node {
            return Err(UnrollError::Inapplicable {
                target: e.target,
                frame,
            });
        }
        Ok((node, slot, new))
    }

    fn rewire(&mut self, node: NodeId, slot: usize, lit: Lit) -> Result<Lit, UnrollError> {
        let previous = self.net.replace_fanin(node, slot, lit)?;
        let fo = &mut self.fanouts[previous.node() as usize];
        if let Some(pos) = fo.iter().position(|&x| x == node) {
            fo.swap_remove(pos);
        }
        self.fanouts[lit.node() as usize].push(node);
        self.changes.push(node);
        if self.raise_rank(node, lit.node()) {
            self.rank_epoch += 1;
        }
        self.version = self.next_version;
        self.next_version += 1;
        Ok(previous)
    }

    fn raise_rank(&mut self, node: NodeId, fanin: NodeId) -> bool {
        if self.rank[fanin as usize] < self.rank[node as usize] {
            return false;
        }
        self.rank[node as usize] = self.rank[fanin as usize] + 1;
        let mut stack = vec![node];
        while let Some(n) = stack.pop() {
            let r = self.rank[n as usize];
            for i in 0..self.fanouts[n as usize].len() {
                let f = self.fanouts[n as usize][i];
                if self.rank[f as usize] <= r {
                    self.rank[f as usize] = r + 1;
                    stack.push(f);
                }
            }
        }
        true
    }

    /// Mirrors edit `e` in `frame`.
    pub fn apply_in_frame(&mut self, e: &Edit, frame: usize) -> Result<FrameUndo, UnrollError> {
        let (node, slot, new) = self.locate(e, frame)?;
        let prior_version = self.version;
        let rank_epoch = self.rank_epoch;
        let previous = self.rewire(node, slot, new)?;
        Ok(FrameUndo {
            node,
            slot,
            previous,
            applied: new,
            prior_version,
            version: self.version,
            rank_epoch,
        })
    }

    pub fn undo_in_frame(&mut self, undo: FrameUndo) -> Result<(), UnrollError> {
        match self.net.fanins(undo.node) {
            Some(f) if f[undo.slot] == undo.applied => {}
            _ => return Err(UnrollError::StaleUndo),
        }
        let restores = self.version == undo.version && self.rank_epoch == undo.rank_epoch;
        self.rewire(undo.node, undo.slot, undo.previous)?;
        if restores && self.rank_epoch == undo.rank_epoch {
            self.version = undo.prior_version;
        }
        Ok(())
    }

    /// Evaluates the network outputs (every frame's primary outputs followed
    /// by the last frame's register inputs).
    pub fn eval(&self, inputs: &[bool]) -> Vec<bool> {
        self.net.step(inputs, &[]).0
    }
}
