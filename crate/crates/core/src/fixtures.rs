//! Small hand-built designs that exercise reachability, observability,
//! multi-step induction and assumptions, plus a toggle flip-flop.

use crate::aig::{Aig, Lit, NodeId};

/// A fixture design together with named signals of interest.
#[derive(Clone, Debug)]
pub struct Fixture {
    pub aig: Aig,
    names: Vec<(&'static str, Lit)>,
}

impl Fixture {
    /// Literal of a named signal. Panics on unknown names.
    pub fn lit(&self, name: &str) -> Lit {
        self.names
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, l)| *l)
            .unwrap_or_else(|| panic!("fixture has no signal '{name}'"))
    }

    pub fn node(&self, name: &str) -> NodeId {
        self.lit(name).node()
    }

    pub fn names(&self) -> impl Iterator<Item = (&'static str, Lit)> + '_ {
        self.names.iter().copied()
    }
}

/// One register feeding its own complement; the output alternates 0,1,0,...
/// when `init` is false.
pub fn toggle(init: bool) -> Aig {
    let mut g = Aig::new();
    let r = g.add_latch(init);
    g.set_latch_next(0, !r).unwrap();
    g.add_output(r).unwrap();
    g
}

/// Two registers that are never 1 together; `w1 = r1 & r2` is constant 0 in
/// every reachable state, so `o1 = w1 | c` reduces to `c`.
pub fn m1() -> Fixture {
    let mut g = Aig::new();
    let a = g.add_input();
    let b = g.add_input();
    let c = g.add_input();
    let r1 = g.add_latch(false);
    let r2 = g.add_latch(false);
    let g1 = g.and(a, b);
    let g2 = g.and(a, !b);
    g.set_latch_next(0, g1).unwrap();
    g.set_latch_next(1, g2).unwrap();
    let w1 = g.and(r1, r2);
    let o1 = g.or(w1, c);
    g.add_output(o1).unwrap();
    Fixture {
        aig: g,
        names: vec![
            ("a", a),
            ("b", b),
            ("c", c),
            ("r1", r1),
            ("r2", r2),
            ("g1", g1),
            ("g2", g2),
            ("w1", w1),
            ("o1", o1),
        ],
    }
}

/// Like [`m1`], but `w1 = r1 & c` is not constant; it is only unobservable
/// because `o1 = (w1 | d) & r2` ignores it whenever `r1` can be 1.
pub fn m1b() -> Fixture {
    let mut g = Aig::new();
    let a = g.add_input();
    let b = g.add_input();
    let c = g.add_input();
    let d = g.add_input();
    let r1 = g.add_latch(false);
    let r2 = g.add_latch(false);
    let g1 = g.and(a, b);
    let g2 = g.and(a, !b);
    g.set_latch_next(0, g1).unwrap();
    g.set_latch_next(1, g2).unwrap();
    let w1 = g.and(r1, c);
    let w2 = g.or(w1, d);
    let o1 = g.and(w2, r2);
    g.add_output(o1).unwrap();
    Fixture {
        aig: g,
        names: vec![
            ("a", a),
            ("b", b),
            ("c", c),
            ("d", d),
            ("r1", r1),
            ("r2", r2),
            ("g1", g1),
            ("g2", g2),
            ("w1", w1),
            ("w2", w2),
            ("o1", o1),
        ],
    }
}

/// The exclusive pair of [`m1`] delayed by one more register stage, so the
/// redundancy of `w1 = r3 & r4` needs two-step induction.
pub fn m2() -> Fixture {
    let mut g = Aig::new();
    let a = g.add_input();
    let b = g.add_input();
    let c = g.add_input();
    let r1 = g.add_latch(false);
    let r2 = g.add_latch(false);
    let r3 = g.add_latch(false);
    let r4 = g.add_latch(false);
    let g1 = g.and(a, b);
    let g2 = g.and(a, !b);
    g.set_latch_next(0, g1).unwrap();
    g.set_latch_next(1, g2).unwrap();
    g.set_latch_next(2, r1).unwrap();
    g.set_latch_next(3, r2).unwrap();
    let w1 = g.and(r3, r4);
    let o1 = g.or(w1, c);
    g.add_output(o1).unwrap();
    Fixture {
        aig: g,
        names: vec![
            ("a", a),
            ("b", b),
            ("c", c),
            ("r1", r1),
            ("r2", r2),
            ("r3", r3),
            ("r4", r4),
            ("g1", g1),
            ("g2", g2),
            ("w1", w1),
            ("o1", o1),
        ],
    }
}

/// A register fed back through `g1 = r & x`; from init 0 the output `g1`
/// stays 0 forever, but plain induction from an arbitrary state cannot show
/// it.
pub fn m3() -> Fixture {
    let mut g = Aig::new();
    let x = g.add_input();
    let r = g.add_latch(false);
    let g1 = g.and(r, x);
    g.set_latch_next(0, g1).unwrap();
    g.add_output(g1).unwrap();
    Fixture {
        aig: g,
        names: vec![("x", x), ("r", r), ("g1", g1)],
    }
}

/// All named fixtures, for table-driven tests.
pub fn all() -> Vec<(&'static str, Aig)> {
    vec![
        ("toggle", toggle(false)),
        ("m1", m1().aig),
        ("m1b", m1b().aig),
        ("m2", m2().aig),
        ("m3", m3().aig),
    ]
}
