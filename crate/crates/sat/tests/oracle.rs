use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seqodc_sat::{Cnf, Lit, SolveResult, Solver, Var};

/// Exhaustive enumeration over all assignments.
fn brute_force(cnf: &Cnf) -> bool {
    let n = cnf.num_vars();
    assert!(n <= 20);
    (0u32..(1 << n)).any(|bits| {
        let model: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
        cnf.is_satisfied_by(&model)
    })
}

fn random_cnf(rng: &mut impl Rng, nvars: u32, nclauses: usize, max_width: usize) -> Cnf {
    let mut cnf = Cnf::new();
    for _ in 0..nvars {
        cnf.new_var();
    }
    for _ in 0..nclauses {
        let width = rng.gen_range(1..=max_width);
        let clause: Vec<Lit> = (0..width)
            .map(|_| Lit::new(Var(rng.gen_range(0..nvars)), rng.gen()))
            .collect();
        cnf.add_clause(&clause);
    }
    cnf
}

/// Pigeons-into-holes: every pigeon gets a hole, no hole gets two pigeons.
fn pigeonhole(pigeons: u32, holes: u32) -> Cnf {
    let mut cnf = Cnf::new();
    let var = |p: u32, h: u32| Var(p * holes + h);
    for _ in 0..pigeons * holes {
        cnf.new_var();
    }
    for p in 0..pigeons {
        let c: Vec<Lit> = (0..holes).map(|h| var(p, h).positive()).collect();
        cnf.add_clause(&c);
    }
    for h in 0..holes {
        for p in 0..pigeons {
            for q in p + 1..pigeons {
                cnf.add_clause(&[var(p, h).negative(), var(q, h).negative()]);
            }
        }
    }
    cnf
}

fn check_against_oracle(cnf: &Cnf, seed: u64) {
    let mut solver = Solver::from_cnf(cnf, seed);
    let expected = brute_force(cnf);
    match solver.solve(&[], 0) {
        SolveResult::Sat(model) => {
            assert!(expected, "solver found a model for an unsat formula");
            assert!(cnf.is_satisfied_by(&model), "model violates a clause");
        }
        SolveResult::Unsat => assert!(!expected, "solver missed a model"),
        SolveResult::Unknown => panic!("unlimited solve returned Unknown"),
    }
}

#[test]
fn random_cnfs_match_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..500 {
        let nvars = rng.gen_range(1..=16);
        let nclauses = rng.gen_range(1..=(nvars as usize * 5));
        let cnf = random_cnf(&mut rng, nvars, nclauses, 4);
        check_against_oracle(&cnf, i);
    }
}

#[test]
fn random_3cnf_12_vars_30_clauses() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut sat = 0;
    for i in 0..200 {
        let mut cnf = Cnf::new();
        for _ in 0..12 {
            cnf.new_var();
        }
        for _ in 0..30 {
            let mut vars = [0u32; 3];
            for v in vars.iter_mut() {
                *v = rng.gen_range(0..12);
            }
            let c: Vec<Lit> = vars.iter().map(|&v| Lit::new(Var(v), rng.gen())).collect();
            cnf.add_clause(&c);
        }
        if brute_force(&cnf) {
            sat += 1;
        }
        check_against_oracle(&cnf, i);
    }
    // the ratio 2.5 sits below the threshold; most instances are satisfiable
    assert!(sat > 100);
}

#[test]
fn pigeonhole_5_4_small_enough_for_brute_force() {
    let cnf = pigeonhole(5, 4);
    assert_eq!(cnf.num_vars(), 20);
    assert!(!brute_force(&cnf));
    let mut s = Solver::from_cnf(&cnf, 0);
    assert_eq!(s.solve(&[], 0), SolveResult::Unsat);
}

#[test]
fn pigeonhole_6_5_unsat() {
    let mut s = Solver::from_cnf(&pigeonhole(6, 5), 0);
    assert_eq!(s.solve(&[], 0), SolveResult::Unsat);
}

#[test]
fn pigeonhole_fits_when_holes_suffice() {
    let cnf = pigeonhole(4, 4);
    let mut s = Solver::from_cnf(&cnf, 0);
    match s.solve(&[], 0) {
        SolveResult::Sat(m) => assert!(cnf.is_satisfied_by(&m)),
        r => panic!("{r:?}"),
    }
}

#[test]
fn conflict_limit_yields_unknown() {
    let mut s = Solver::from_cnf(&pigeonhole(8, 7), 0);
    assert_eq!(s.solve(&[], 5), SolveResult::Unknown);
    // the solver is reusable after running out of budget
    assert_eq!(s.solve(&[], 0), SolveResult::Unsat);
}

#[test]
fn same_seed_same_model() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let cnf = random_cnf(&mut rng, 40, 120, 3);
    let a = Solver::from_cnf(&cnf, 5).solve(&[], 0);
    let b = Solver::from_cnf(&cnf, 5).solve(&[], 0);
    assert_eq!(a, b);
}

#[test]
fn dimacs_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cnf = random_cnf(&mut rng, 10, 25, 3);
    let text = cnf.to_dimacs();
    assert!(text.starts_with("p cnf 10 25\n"));
    assert_eq!(Cnf::parse_dimacs(&text).unwrap(), cnf);
}

#[test]
fn dimacs_rejects_undeclared_variable() {
    assert!(Cnf::parse_dimacs("p cnf 2 1\n1 3 0\n").is_err());
}

proptest! {
    #[test]
    fn assumptions_agree_with_unit_clauses(
        seed in any::<u64>(),
        picks in proptest::collection::vec((0u32..10, any::<bool>()), 0..4),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cnf = random_cnf(&mut rng, 10, 30, 3);
        let assumptions: Vec<Lit> = picks.iter().map(|&(v, n)| Lit::new(Var(v), n)).collect();
        let mut with_units = cnf.clone();
        for &a in &assumptions {
            with_units.add_clause(&[a]);
        }
        let expected = brute_force(&with_units);
        let mut s = Solver::from_cnf(&cnf, seed);
        let got = s.solve(&assumptions, 0);
        prop_assert_eq!(got.is_sat(), expected);
        if let SolveResult::Sat(m) = got {
            prop_assert!(with_units.is_satisfied_by(&m));
        }
        // and the instance without assumptions is still decided correctly
        let plain = s.solve(&[], 0);
        prop_assert_eq!(plain.is_sat(), brute_force(&cnf));
    }
}
