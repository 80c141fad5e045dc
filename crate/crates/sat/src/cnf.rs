//! Plain clause lists with DIMACS import and export.

use std::fmt::Write as _;

use crate::{Lit, SatError, Var};

/// A formula in conjunctive normal form, kept exactly as it was built.
///
/// Encoders write into a `Cnf` first so the instance can be dumped before it
/// is handed to a [`crate::Solver`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cnf {
    num_vars: u32,
    clauses: Vec<Vec<Lit>>,
}

impl Cnf {
    pub fn new() -> Cnf {
        Cnf::default()
    }

    pub fn new_var(&mut self) -> Var {
        let v = Var(self.num_vars);
        self.num_vars += 1;
        v
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<Lit>] {
        &self.clauses
    }

    pub fn add_clause(&mut self, lits: &[Lit]) {
        debug_assert!(lits.iter().all(|l| l.var().0 < self.num_vars));
        self.clauses.push(lits.to_vec());
    }

    /// Checks a total assignment against every clause.
    pub fn is_satisfied_by(&self, model: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|l| l.eval(model[l.var().index()])))
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        writeln!(out, "p cnf {} {}", self.num_vars, self.clauses.len()).unwrap();
        for clause in &self.clauses {
            for lit in clause {
                write!(out, "{} ", lit.to_dimacs()).unwrap();
            }
            out.push_str("0\n");
        }
        out
    }

    pub fn parse_dimacs(text: &str) -> Result<Cnf, SatError> {
        let mut cnf = Cnf::new();
        let mut declared: Option<u32> = None;
        let mut current = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
                continue;
            }
            if line.starts_with('p') {
                let parts: Vec<&str> = line.split_whitespace().collect();
                if parts.len() != 4 || parts[1] != "cnf" {
                    return Err(SatError::Dimacs {
                        line: lineno + 1,
                        msg: "bad problem line".into(),
                    });
                }
                let nv = parts[2].parse::<u32>().map_err(|_| SatError::Dimacs {
                    line: lineno + 1,
                    msg: "bad variable count".into(),
                })?;
                declared = Some(nv);
                cnf.num_vars = nv;
                continue;
            }
            for tok in line.split_whitespace() {
                let x = tok.parse::<i64>().map_err(|_| SatError::Dimacs {
                    line: lineno + 1,
                    msg: format!("bad literal '{tok}'"),
                })?;
                match Lit::from_dimacs(x) {
                    None => cnf.clauses.push(std::mem::take(&mut current)),
                    Some(lit) => {
                        if declared.is_none() {
                            cnf.num_vars = cnf.num_vars.max(lit.var().0 + 1);
                        } else if lit.var().0 >= cnf.num_vars {
                            return Err(SatError::UnknownVariable(lit.var().0));
                        }
                        current.push(lit);
                    }
                }
            }
        }
        if !current.is_empty() {
            cnf.clauses.push(current);
        }
        Ok(cnf)
    }
}
