//! Seeded random sequential designs for fuzzing and scale runs.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::aig::{Aig, Lit};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomParams {
    pub inputs: usize,
    pub latches: usize,
    /// Upper bound on AND nodes; hashing and folding may produce fewer.
    pub ands: usize,
    pub outputs: usize,
    /// When set, fanins are drawn from the most recent `window` signals,
    /// which keeps cones local like real netlists.
    pub locality: Option<usize>,
    /// Local mode only: operands deeper than this many levels are read
    /// through a freshly inserted pipeline register instead, so total
    /// latches may exceed `latches`.
    pub max_depth: Option<u32>,
}

impl Default for RandomParams {
    fn default() -> Self {
        RandomParams {
            inputs: 3,
            latches: 3,
            ands: 20,
            outputs: 2,
            locality: None,
            max_depth: None,
        }
    }
}

fn pick(rng: &mut ChaCha8Rng, pool: &[Lit], locality: Option<usize>) -> Lit {
    let lo = match locality {
        Some(w) if pool.len() > w => pool.len() - w,
        _ => 0,
    };
    pool[rng.gen_range(lo..pool.len())] ^ rng.gen_bool(0.5)
}

/// Builds a random design. Register initial values are random.
///
/// In local mode gates are a mix of AND, OR, XOR and MUX, and every gate
/// left without fanout is consumed by a register input or folded into an
/// output, so no logic is dead.
pub fn random_aig(params: &RandomParams, seed: u64) -> Aig {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Aig::new();
    let mut pool: Vec<Lit> = Vec::new();
    for _ in 0..params.inputs {
        pool.push(g.add_input());
    }
    for _ in 0..params.latches {
        let init = rng.gen_bool(0.5);
        pool.push(g.add_latch(init));
    }
    if pool.is_empty() {
        pool.push(Lit::FALSE);
    }
    let sources = pool.clone();
    let mut seen: HashSet<u32> = pool.iter().map(|l| l.node()).collect();
    let Some(window) = params.locality else {
        for _ in 0..params.ands {
            let a = pick(&mut rng, &pool, None);
            let b = pick(&mut rng, &pool, None);
            let n = g.and(a, b);
            if !n.is_const() && seen.insert(n.node()) {
                pool.push(n.regular());
            }
        }
        for i in 0..params.latches {
            let next = pick(&mut rng, &pool, None);
            g.set_latch_next(i, next).unwrap();
        }
        for _ in 0..params.outputs {
            let lo = pool.len().saturating_sub(pool.len() / 3 + 1);
            let o = pool[rng.gen_range(lo..pool.len())] ^ rng.gen_bool(0.5);
            g.add_output(o).unwrap();
        }
        return g;
    };

    let mut used: HashSet<u32> = HashSet::new();
    let mut level: Vec<u32> = vec![0; g.num_nodes()];
    // every gate shape below adds at most two levels
    let limit = params.max_depth.map(|d| d.saturating_sub(2));
    let mut stalled = 0;
    while g.num_ands() < params.ands {
        let mut operand = |rng: &mut ChaCha8Rng, g: &mut Aig, pool: &[Lit]| {
            let l = if rng.gen_bool(0.1) {
                sources[rng.gen_range(0..sources.len())] ^ rng.gen_bool(0.5)
            } else {
                pick(rng, pool, Some(window))
            };
            match limit {
                Some(d) if level[l.node() as usize] > d => {
                    let r = g.add_latch(rng.gen_bool(0.5));
                    let idx = g.num_latches() - 1;
                    g.set_latch_next(idx, l).expect("existing literal");
                    used.insert(l.node());
                    r
                }
                _ => l,
            }
        };
        let a = operand(&mut rng, &mut g, &pool);
        let b = operand(&mut rng, &mut g, &pool);
        let shape = rng.gen_range(0..10);
        let s = if shape == 9 {
            Some(operand(&mut rng, &mut g, &pool))
        } else {
            None
        };
        let first_new = g.num_nodes();
        let before = g.num_ands();
        let n = match (shape, s) {
            (0..=4, _) => g.and(a, b),
            (5..=6, _) => g.or(a, b),
            (7..=8, _) => g.xor(a, b),
            (_, s) => {
                let s = s.expect("drawn for mux");
                used.insert(s.node());
                g.mux(s, a, b)
            }
        };
        level.resize(g.num_nodes(), 0);
        for id in first_new..g.num_nodes() {
            if let Some([x, y]) = g.fanins(id as u32) {
                level[id] = 1 + level[x.node() as usize].max(level[y.node() as usize]);
            }
        }
        used.insert(a.node());
        used.insert(b.node());
        if g.num_ands() == before {
            // tiny source sets may not support `ands` distinct gates
            stalled += 1;
            if stalled > 10_000 {
                break;
            }
            if n.is_const() {
                continue;
            }
        } else {
            stalled = 0;
        }
        if !n.is_const() && seen.insert(n.node()) {
            pool.push(n.regular());
        }
    }
    let mut dangling: Vec<Lit> = pool
        .iter()
        .copied()
        .filter(|l| g.is_and(l.node()) && !used.contains(&l.node()))
        .collect();
    // latch inputs first take dangling gates, then recent ones
    for i in 0..params.latches {
        let next = if !dangling.is_empty() {
            dangling.swap_remove(rng.gen_range(0..dangling.len()))
        } else {
            let lo = pool.len().saturating_sub(pool.len() / 3 + 1);
            pool[rng.gen_range(lo..pool.len())]
        };
        g.set_latch_next(i, next ^ rng.gen_bool(0.5)).unwrap();
    }
    let outs = params.outputs.max(1);
    let mut groups: Vec<Vec<Lit>> = vec![Vec::new(); outs];
    for (i, l) in dangling.into_iter().enumerate() {
        groups[i % outs].push(l);
    }
    for group in groups {
        let o = match group.split_first() {
            Some((&first, rest)) => rest.iter().fold(first, |acc, &l| g.xor(acc, l)),
            None => pool[rng.gen_range(0..pool.len())],
        };
        g.add_output(o ^ rng.gen_bool(0.5)).unwrap();
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_seed() {
        let p = RandomParams::default();
        assert_eq!(random_aig(&p, 5), random_aig(&p, 5));
        assert!(random_aig(&p, 5).check().is_ok());
    }

    #[test]
    fn local_mode_has_no_dead_logic() {
        let p = RandomParams {
            inputs: 8,
            latches: 16,
            ands: 500,
            outputs: 4,
            locality: Some(32),
            max_depth: None,
        };
        let g = random_aig(&p, 9);
        assert!(g.num_ands() >= 500);
        let live = g.live_nodes();
        assert!(g.and_ids().all(|id| live[id as usize]));
        assert_eq!(g.num_outputs(), 4);
    }

    #[test]
    fn depth_bound_inserts_registers() {
        let p = RandomParams {
            inputs: 8,
            latches: 16,
            ands: 2000,
            outputs: 4,
            locality: Some(64),
            max_depth: Some(12),
        };
        let g = random_aig(&p, 2);
        assert!(g.check().is_ok());
        assert!(g.num_latches() > 16);
        // output folding may stack a few XOR levels on top
        let lev = g.levels();
        for l in g.latches() {
            assert!(lev[l.next.node() as usize] <= 12);
        }
    }

    #[test]
    fn single_input_local_mode_terminates() {
        let p = RandomParams {
            inputs: 1,
            latches: 0,
            ands: 50,
            outputs: 1,
            locality: Some(8),
            max_depth: None,
        };
        assert!(random_aig(&p, 0).num_ands() < 50);
    }

    #[test]
    fn respects_bounds() {
        let p = RandomParams {
            inputs: 4,
            latches: 8,
            ands: 60,
            outputs: 3,
            locality: None,
            max_depth: None,
        };
        for seed in 0..20 {
            let g = random_aig(&p, seed);
            assert!(g.num_ands() <= 60);
            assert_eq!(g.num_latches(), 8);
            assert_eq!(g.num_inputs(), 4);
            assert_eq!(g.num_outputs(), 3);
        }
    }
}
