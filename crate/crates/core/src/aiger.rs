//! Reader and writer for the AIGER format, ASCII (`aag`) and binary (`aig`).
//!
//! Supported: AIGER 1.0 plus the 1.9 header extension. Latch resets must be
//! constant 0 or 1. Bad-state, constraint, justice and fairness sections are
//! parsed and dropped with a warning. Symbol tables and comments are kept
//! verbatim and written back unchanged.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use log::warn;
use thiserror::Error;

use crate::aig::{Aig, Lit, Node};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Ascii,
    Binary,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Format, String> {
        match s {
            "ascii" | "aag" => Ok(Format::Ascii),
            "binary" | "aig" => Ok(Format::Binary),
            _ => Err(format!("unknown AIGER format '{s}' (expected ascii or binary)")),
        }
    }
}

impl Format {
    /// Binary for `.aig`, ASCII otherwise.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some("aig") => Format::Binary,
            _ => Format::Ascii,
        }
    }
}

#[derive(Debug, Error)]
pub enum AigerError {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("not an AIGER file (bad magic)")]
    BadMagic,
    #[error("malformed header: {0}")]
    Header(String),
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: literal {lit} out of range")]
    LiteralOutOfRange { line: usize, lit: u64 },
    #[error("line {line}: unsupported latch reset value {value}")]
    UnsupportedReset { line: usize, value: String },
    #[error("binary AND #{index} is not monotone")]
    NonMonotone { index: usize },
    #[error("unexpected end of file")]
    UnexpectedEof,
    #[error("variable {0} is used but never defined")]
    Undefined(u64),
    #[error("variable {0} is defined twice")]
    Redefined(u64),
    #[error("combinational cycle through variable {0}")]
    Cycle(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AigerHeader {
    pub max_var: u64,
    pub inputs: u64,
    pub latches: u64,
    pub outputs: u64,
    pub ands: u64,
    pub bad: u64,
    pub constraints: u64,
    pub justice: u64,
    pub fairness: u64,
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn line(&mut self) -> Result<&'a str, AigerError> {
        if self.pos >= self.data.len() {
            return Err(AigerError::UnexpectedEof);
        }
        let start = self.pos;
        let end = self.data[start..]
            .iter()
            .position(|&b| b == b'\n')
            .map(|p| start + p)
            .unwrap_or(self.data.len());
        self.pos = (end + 1).min(self.data.len());
        self.line += 1;
        std::str::from_utf8(&self.data[start..end]).map_err(|_| AigerError::Syntax {
            line: self.line,
            msg: "invalid UTF-8".into(),
        })
    }

    fn numbers(&mut self, count: std::ops::RangeInclusive<usize>) -> Result<Vec<u64>, AigerError> {
        let text = self.line()?;
        let nums = text
            .split_whitespace()
            .map(|t| t.parse::<u64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| AigerError::Syntax {
                line: self.line,
                msg: format!("expected numbers, found '{text}'"),
            })?;
        if !count.contains(&nums.len()) {
            return Err(AigerError::Syntax {
                line: self.line,
                msg: format!("expected {count:?} numbers, found {}", nums.len()),
            });
        }
        Ok(nums)
    }

    fn varint(&mut self) -> Result<u64, AigerError> {
        let mut x = 0u64;
        let mut shift = 0;
        loop {
            let b = *self.data.get(self.pos).ok_or(AigerError::UnexpectedEof)?;
            self.pos += 1;
            if shift > 63 {
                return Err(AigerError::Syntax {
                    line: self.line,
                    msg: "varint overflow".into(),
                });
            }
            x |= ((b & 0x7f) as u64) << shift;
            if b & 0x80 == 0 {
                return Ok(x);
            }
            shift += 7;
        }
    }
}

fn parse_header(text: &str) -> Result<(bool, AigerHeader), AigerError> {
    let mut parts = text.split_whitespace();
    let binary = match parts.next() {
        Some("aag") => false,
        Some("aig") => true,
        _ => return Err(AigerError::BadMagic),
    };
    let nums = parts
        .map(|t| t.parse::<u64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| AigerError::Header(text.to_string()))?;
    if nums.len() < 5 || nums.len() > 9 {
        return Err(AigerError::Header(text.to_string()));
    }
    let get = |i: usize| nums.get(i).copied().unwrap_or(0);
    let h = AigerHeader {
        max_var: get(0),
        inputs: get(1),
        latches: get(2),
        outputs: get(3),
        ands: get(4),
        bad: get(5),
        constraints: get(6),
        justice: get(7),
        fairness: get(8),
    };
    let needed = h.inputs + h.latches + h.ands;
    if h.max_var < needed || (binary && h.max_var != needed) {
        return Err(AigerError::Header(format!(
            "M = {} inconsistent with I + L + A = {needed}",
            h.max_var
        )));
    }
    Ok((binary, h))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Def {
    Undefined,
    Input(usize),
    Latch(usize),
    And(u64, u64),
}

/// Parses AIGER bytes (either variant).
pub fn parse(data: &[u8]) -> Result<Aig, AigerError> {
    let mut cur = Cursor {
        data,
        pos: 0,
        line: 0,
    };
    let (binary, h) = parse_header(cur.line()?)?;
    let max_lit = 2 * h.max_var + 1;
    let check = |lit: u64, line: usize| {
        if lit > max_lit {
            Err(AigerError::LiteralOutOfRange { line, lit })
        } else {
            Ok(lit)
        }
    };

    let mut defs = vec![Def::Undefined; h.max_var as usize + 1];
    let mut define = |var: u64, d: Def, line: usize| -> Result<(), AigerError> {
        if var == 0 {
            return Err(AigerError::Syntax {
                line,
                msg: "cannot redefine the constant".into(),
            });
        }
        let slot = &mut defs[var as usize];
        if *slot != Def::Undefined {
            return Err(AigerError::Redefined(var));
        }
        *slot = d;
        Ok(())
    };

    let mut input_vars = Vec::with_capacity(h.inputs as usize);
    for i in 0..h.inputs as usize {
        let var = if binary {
            i as u64 + 1
        } else {
            let lit = check(cur.numbers(1..=1)?[0], cur.line)?;
            if lit & 1 == 1 || lit < 2 {
                return Err(AigerError::Syntax {
                    line: cur.line,
                    msg: format!("invalid input literal {lit}"),
                });
            }
            lit / 2
        };
        define(var, Def::Input(i), cur.line)?;
        input_vars.push(var);
    }

    let mut latch_info = Vec::with_capacity(h.latches as usize);
    for i in 0..h.latches as usize {
        let (var, next, reset) = if binary {
            let nums = cur.numbers(1..=2)?;
            (h.inputs + i as u64 + 1, nums[0], nums.get(1).copied())
        } else {
            let nums = cur.numbers(2..=3)?;
            if nums[0] & 1 == 1 || nums[0] < 2 {
                return Err(AigerError::Syntax {
                    line: cur.line,
                    msg: format!("invalid latch literal {}", nums[0]),
                });
            }
            check(nums[0], cur.line)?;
            (nums[0] / 2, nums[1], nums.get(2).copied())
        };
        check(next, cur.line)?;
        let init = match reset {
            None | Some(0) => false,
            Some(1) => true,
            Some(r) => {
                return Err(AigerError::UnsupportedReset {
                    line: cur.line,
                    value: if r == 2 * var {
                        "x (uninitialized)".into()
                    } else {
                        r.to_string()
                    },
                })
            }
        };
        define(var, Def::Latch(i), cur.line)?;
        latch_info.push((var, next, init));
    }

    let mut outputs = Vec::with_capacity(h.outputs as usize);
    for _ in 0..h.outputs {
        outputs.push(check(cur.numbers(1..=1)?[0], cur.line)?);
    }

    let skipped = h.bad + h.constraints + h.justice + h.fairness;
    if skipped > 0 {
        warn!(
            "ignoring {} bad, {} constraint, {} justice and {} fairness properties",
            h.bad, h.constraints, h.justice, h.fairness
        );
    }
    for _ in 0..h.bad + h.constraints {
        check(cur.numbers(1..=1)?[0], cur.line)?;
    }
    let mut justice_sizes = Vec::new();
    for _ in 0..h.justice {
        justice_sizes.push(cur.numbers(1..=1)?[0]);
    }
    for size in justice_sizes {
        for _ in 0..size {
            check(cur.numbers(1..=1)?[0], cur.line)?;
        }
    }
    for _ in 0..h.fairness {
        check(cur.numbers(1..=1)?[0], cur.line)?;
    }

    let mut and_vars = Vec::with_capacity(h.ands as usize);
    for i in 0..h.ands as usize {
        if binary {
            let lhs = 2 * (h.inputs + h.latches + i as u64 + 1);
            let d0 = cur.varint()?;
            let d1 = cur.varint()?;
            if d0 == 0 || d0 > lhs {
                return Err(AigerError::NonMonotone { index: i });
            }
            let rhs0 = lhs - d0;
            if d1 > rhs0 {
                return Err(AigerError::NonMonotone { index: i });
            }
            let rhs1 = rhs0 - d1;
            define(lhs / 2, Def::And(rhs0, rhs1), cur.line)?;
            and_vars.push(lhs / 2);
        } else {
            let nums = cur.numbers(3..=3)?;
            for &n in &nums {
                check(n, cur.line)?;
            }
            if nums[0] & 1 == 1 || nums[0] < 2 {
                return Err(AigerError::Syntax {
                    line: cur.line,
                    msg: format!("invalid AND literal {}", nums[0]),
                });
            }
            define(nums[0] / 2, Def::And(nums[1], nums[2]), cur.line)?;
            and_vars.push(nums[0] / 2);
        }
    }

    let mut symbols = Vec::new();
    let mut comment = None;
    while cur.pos < data.len() {
        let line = cur.line()?;
        if line == "c" {
            comment = Some(String::from_utf8_lossy(&data[cur.pos..]).into_owned());
            break;
        }
        let valid = line
            .chars()
            .next()
            .map(|c| "ilobcjf".contains(c))
            .unwrap_or(false);
        if !valid {
            return Err(AigerError::Syntax {
                line: cur.line,
                msg: format!("unexpected content '{line}'"),
            });
        }
        symbols.push(line.to_string());
    }

    // Build the graph: inputs, then latches, then ANDs with fanins first.
    let mut g = Aig::new();
    g.symbols = symbols;
    g.comment = comment;
    let mut map: Vec<Option<Lit>> = vec![None; defs.len()];
    map[0] = Some(Lit::FALSE);
    for &v in &input_vars {
        map[v as usize] = Some(g.add_input());
    }
    for &(v, _, init) in &latch_info {
        map[v as usize] = Some(g.add_latch(init));
    }
    let mut state = vec![0u8; defs.len()];
    for &root in &and_vars {
        if map[root as usize].is_some() {
            continue;
        }
        let mut stack = vec![root];
        while let Some(&v) = stack.last() {
            if map[v as usize].is_some() {
                stack.pop();
                continue;
            }
            let Def::And(r0, r1) = defs[v as usize] else {
                return Err(AigerError::Undefined(v));
            };
            state[v as usize] = 1;
            let mut pending = false;
            for r in [r0, r1] {
                let u = (r / 2) as usize;
                if map[u].is_none() {
                    match defs[u] {
                        Def::Undefined => return Err(AigerError::Undefined(u as u64)),
                        Def::And(..) if state[u] == 1 => return Err(AigerError::Cycle(u as u64)),
                        _ => {}
                    }
                    stack.push(u as u64);
                    pending = true;
                }
            }
            if pending {
                continue;
            }
            let lit = |r: u64| map[(r / 2) as usize].unwrap() ^ (r & 1 == 1);
            let (a, b) = (lit(r0), lit(r1));
            let (a, b) = if a >= b { (a, b) } else { (b, a) };
            map[v as usize] = Some(g.push_and_raw(a, b).expect("fanins already mapped"));
            state[v as usize] = 2;
            stack.pop();
        }
    }
    let resolve = |r: u64| -> Result<Lit, AigerError> {
        map[(r / 2) as usize]
            .map(|l| l ^ (r & 1 == 1))
            .ok_or(AigerError::Undefined(r / 2))
    };
    for (i, &(_, next, _)) in latch_info.iter().enumerate() {
        g.set_latch_next(i, resolve(next)?).unwrap();
    }
    for &o in &outputs {
        g.add_output(resolve(o)?).unwrap();
    }
    Ok(g)
}

pub fn read(path: impl AsRef<Path>) -> Result<Aig, AigerError> {
    parse(&fs::read(path)?)
}

fn push_varint(out: &mut Vec<u8>, mut x: u64) {
    while x & !0x7f != 0 {
        out.push((x & 0x7f) as u8 | 0x80);
        x >>= 7;
    }
    out.push(x as u8);
}

/// Serializes a graph. Variables are numbered inputs first, then latches,
/// then AND nodes in id order.
pub fn to_bytes(aig: &Aig, format: Format) -> Vec<u8> {
    let mut var = vec![0u64; aig.num_nodes()];
    let mut next_var = 1u64;
    for &i in aig.inputs() {
        var[i as usize] = next_var;
        next_var += 1;
    }
    for l in aig.latches() {
        var[l.ro as usize] = next_var;
        next_var += 1;
    }
    let ands: Vec<u32> = aig.and_ids().collect();
    for &a in &ands {
        var[a as usize] = next_var;
        next_var += 1;
    }
    let lit = |l: Lit| 2 * var[l.node() as usize] + l.is_complemented() as u64;

    let mut out = Vec::new();
    let magic = match format {
        Format::Ascii => "aag",
        Format::Binary => "aig",
    };
    out.extend_from_slice(
        format!(
            "{magic} {} {} {} {} {}\n",
            next_var - 1,
            aig.num_inputs(),
            aig.num_latches(),
            aig.num_outputs(),
            ands.len()
        )
        .as_bytes(),
    );
    if format == Format::Ascii {
        for &i in aig.inputs() {
            out.extend_from_slice(format!("{}\n", 2 * var[i as usize]).as_bytes());
        }
    }
    for l in aig.latches() {
        let mut line = String::new();
        if format == Format::Ascii {
            line.push_str(&format!("{} ", 2 * var[l.ro as usize]));
        }
        line.push_str(&lit(l.next).to_string());
        if l.init {
            line.push_str(" 1");
        }
        line.push('\n');
        out.extend_from_slice(line.as_bytes());
    }
    for &o in aig.outputs() {
        out.extend_from_slice(format!("{}\n", lit(o)).as_bytes());
    }
    for &a in &ands {
        let Node::And(f0, f1) = aig.node(a) else {
            unreachable!()
        };
        let lhs = 2 * var[a as usize];
        let (r0, r1) = (lit(f0), lit(f1));
        match format {
            Format::Ascii => out.extend_from_slice(format!("{lhs} {r0} {r1}\n").as_bytes()),
            Format::Binary => {
                let (hi, lo) = if r0 >= r1 { (r0, r1) } else { (r1, r0) };
                push_varint(&mut out, lhs - hi);
                push_varint(&mut out, hi - lo);
            }
        }
    }
    for s in &aig.symbols {
        out.extend_from_slice(s.as_bytes());
        out.push(b'\n');
    }
    if let Some(c) = &aig.comment {
        out.extend_from_slice(b"c\n");
        out.extend_from_slice(c.as_bytes());
    }
    out
}

pub fn write(aig: &Aig, path: impl AsRef<Path>, format: Format) -> Result<(), AigerError> {
    fs::write(path, to_bytes(aig, format))?;
    Ok(())
}
