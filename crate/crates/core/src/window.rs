//! Bounded windows around a node of a frame network, and divisor collection
//! for resubstitution.
//!
//! The fanout side of a window is explored in ascending id order and bounded
//! by rank distance from the root, so every included node's fanins from the
//! root's fanout cone are themselves included. Nodes on the fanin side that
//! do not fit in the node budget become free cut points; they are never in
//! the root's fanout cone, so treating them as free only makes the check
//! stricter.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use thiserror::Error;

use crate::aig::{Aig, Node, NodeId};
use crate::unroll::FrameNetwork;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WindowError {
    #[error("window root {0} is not an AND node")]
    NotAnAnd(NodeId),
    #[error("window limits must be positive")]
    BadLimits,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WindowLimits {
    pub max_levels: u32,
    pub max_nodes: usize,
}

impl Default for WindowLimits {
    fn default() -> Self {
        WindowLimits {
            max_levels: 16,
            max_nodes: 50_000,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Window {
    pub root: NodeId,
    /// Fanout-side nodes, ascending; the root comes first.
    pub tfo: Vec<NodeId>,
    /// Frontier nodes whose values must not change.
    pub outputs: Vec<NodeId>,
    /// AND nodes whose function is encoded, ascending. Contains `tfo`.
    pub cone: Vec<NodeId>,
    /// Free variables: primary inputs of the frame network and cut points.
    pub inputs: Vec<NodeId>,
}

/// Reusable scratch space for repeated extraction on one network size.
#[derive(Debug, Default)]
pub struct Extractor {
    stamp: u32,
    seen: Vec<u32>,
    in_tfo: Vec<u32>,
    in_cone: Vec<u32>,
    heap: BinaryHeap<Reverse<NodeId>>,
    queue: VecDeque<NodeId>,
}

impl Extractor {
    pub fn new() -> Extractor {
        Extractor::default()
    }

    fn reset(&mut self, n: usize) {
        if self.seen.len() < n {
            self.seen.resize(n, 0);
            self.in_tfo.resize(n, 0);
            self.in_cone.resize(n, 0);
        }
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.seen.iter_mut().for_each(|x| *x = 0);
            self.in_tfo.iter_mut().for_each(|x| *x = 0);
            self.in_cone.iter_mut().for_each(|x| *x = 0);
            self.stamp = 1;
        }
        self.heap.clear();
        self.queue.clear();
    }

    /// Fanout side only: returns `(tfo, outputs)`.
    pub fn tfo(
        &mut self,
        fnet: &FrameNetwork,
        root: NodeId,
        limits: WindowLimits,
    ) -> Result<(Vec<NodeId>, Vec<NodeId>), WindowError> {
        if limits.max_levels == 0 || limits.max_nodes == 0 {
            return Err(WindowError::BadLimits);
        }
        if !fnet.net().is_and(root) {
            return Err(WindowError::NotAnAnd(root));
        }
        self.reset(fnet.net().num_nodes());
        let st = self.stamp;
        let base = fnet.rank(root);
        let mut tfo = Vec::new();
        self.seen[root as usize] = st;
        self.heap.push(Reverse(root));
        while let Some(Reverse(n)) = self.heap.pop() {
            if tfo.len() >= limits.max_nodes {
                break;
            }
            if fnet.rank(n) - base > limits.max_levels {
                continue;
            }
            self.in_tfo[n as usize] = st;
            tfo.push(n);
            for &f in fnet.fanouts(n) {
                if self.seen[f as usize] != st {
                    self.seen[f as usize] = st;
                    self.heap.push(Reverse(f));
                }
            }
        }
        self.heap.clear();
        let outputs = tfo
            .iter()
            .copied()
            .filter(|&n| {
                fnet.is_observed(n)
                    || fnet
                        .fanouts(n)
                        .iter()
                        .any(|&f| self.in_tfo[f as usize] != st)
            })
            .collect();
        Ok((tfo, outputs))
    }

    /// Full window around `root`. The fanin cones of `extra` nodes (which
    /// must lie outside the root's fanout cone) are added to the encoded
    /// cone as well.
    pub fn extract(
        &mut self,
        fnet: &FrameNetwork,
        root: NodeId,
        extra: &[NodeId],
        limits: WindowLimits,
    ) -> Result<Window, WindowError> {
        let (tfo, outputs) = self.tfo(fnet, root, limits)?;
        let st = self.stamp;
        let net = fnet.net();
        let mut cone = tfo.clone();
        let mut inputs = Vec::new();
        for &n in &tfo {
            self.in_cone[n as usize] = st;
        }
        for &n in &tfo {
            if let Some(fi) = net.fanins(n) {
                self.queue.extend(fi.iter().map(|l| l.node()));
            }
        }
        self.queue.extend(extra.iter().copied());
        while let Some(n) = self.queue.pop_front() {
            if n == 0 || self.in_cone[n as usize] == st {
                continue;
            }
            self.in_cone[n as usize] = st;
            match net.node(n) {
                Node::And(a, b) if cone.len() < limits.max_nodes => {
                    cone.push(n);
                    self.queue.push_back(a.node());
                    self.queue.push_back(b.node());
                }
                _ => inputs.push(n),
            }
        }
        cone.sort_unstable();
        inputs.sort_unstable();
        Ok(Window {
            root,
            tfo,
            outputs,
            cone,
            inputs,
        })
    }
}

/// One-off window extraction.
pub fn extract(
    fnet: &FrameNetwork,
    root: NodeId,
    max_levels: u32,
    max_nodes: usize,
) -> Result<Window, WindowError> {
    Extractor::new().extract(
        fnet,
        root,
        &[],
        WindowLimits {
            max_levels,
            max_nodes,
        },
    )
}

/// Up to `limit` resubstitution divisors for `target`, gathered by reverse
/// breadth-first search from its fanins, lower ids first. The fanins
/// themselves and the constant node are excluded. Every divisor has a
/// smaller id than `target`, so none lies in its fanout cone.
pub fn collect_divisors(n: &Aig, target: NodeId, limit: usize) -> Vec<NodeId> {
    let Some(fanins) = n.fanins(target) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    if limit == 0 {
        return out;
    }
    let mut seen = std::collections::HashSet::new();
    let mut queue = VecDeque::new();
    let mut start = [fanins[0].node(), fanins[1].node()];
    start.sort_unstable();
    for s in start {
        if seen.insert(s) {
            queue.push_back(s);
        }
    }
    while let Some(x) = queue.pop_front() {
        if x != 0 && !start.contains(&x) {
            out.push(x);
            if out.len() >= limit {
                break;
            }
        }
        if let Some(fi) = n.fanins(x) {
            let mut next = [fi[0].node(), fi[1].node()];
            next.sort_unstable();
            for y in next {
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
    }
    out
}
