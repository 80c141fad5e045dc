use seqodc::equiv::exhaustive_check;
use seqodc::gen::{random_aig, RandomParams};
use seqodc::opt::{audit_edits, optimize, OptConfig};
use seqodc::Aig;

fn design(seed: u64) -> Aig {
    let p = RandomParams {
        inputs: 1 + (seed % 4) as usize,
        latches: 1 + (seed / 4 % 8) as usize,
        ands: 20 + (seed * 13 % 41) as usize,
        outputs: 1 + (seed % 3) as usize,
        locality: None,
        max_depth: None,
    };
    random_aig(&p, seed)
}

#[test]
fn optimized_designs_stay_equivalent() {
    let mut edits = 0;
    for seed in 0..60u64 {
        let n = design(seed);
        for k in [1, 2] {
            for resub in [true, false] {
                let cfg = OptConfig {
                    k,
                    enable_resub: resub,
                    audit_undo: true,
                    ..OptConfig::default()
                };
                let (out, rep) = optimize(&n, &cfg).unwrap();
                let ctx = format!("seed {seed} k {k} resub {resub}");
                assert!(exhaustive_check(&n, &out, 20).unwrap().is_equivalent(), "{ctx}");
                assert_eq!(audit_edits(&n, &rep.edits_applied, k, true).unwrap(), None, "{ctx}");
                assert_eq!(rep.undo_violations, 0, "{ctx}");
                assert!(out.num_ands() <= n.num_ands(), "{ctx}");
                assert!(out.stats().level_count <= n.stats().level_count, "{ctx}");
                edits += rep.edits_applied.len();
            }
        }
    }
    assert!(edits > 0);
}

#[test]
fn without_assumptions_stays_equivalent() {
    for seed in 100..130u64 {
        let n = design(seed);
        let cfg = OptConfig {
            enable_assumptions: false,
            level_control: false,
            ..OptConfig::default()
        };
        let (out, rep) = optimize(&n, &cfg).unwrap();
        assert!(exhaustive_check(&n, &out, 20).unwrap().is_equivalent(), "seed {seed}");
        assert_eq!(audit_edits(&n, &rep.edits_applied, 1, false).unwrap(), None);
        assert!(out.num_ands() <= n.num_ands());
    }
}
