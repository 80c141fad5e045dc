use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use log::info;
use serde::Serialize;

use seqodc::aiger::{self, Format};
use seqodc::equiv::{bmc_check, exhaustive_check, EquivError, Outcome};
use seqodc::gen::{random_aig, RandomParams};
use seqodc::opt::{optimize, OptConfig, OptReport};
use seqodc::{fixtures, Aig, Stats};

#[derive(Parser)]
#[command(name = "seqodc", version, about = "Sequential logic optimizer based on k-step induction")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Optimize a design and write the result
    Opt(OptArgs),
    /// Check two designs for sequential equivalence
    Equiv(EquivArgs),
    /// Print size statistics of a design
    Stats(StatsArgs),
    /// Write a built-in fixture or a random design
    Gen(GenArgs),
}

#[derive(Args)]
struct OptArgs {
    input: PathBuf,
    /// Induction depth
    #[arg(short = 'k', default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 50_000)]
    window_nodes: usize,
    #[arg(long, default_value_t = 16)]
    tfo_levels: u32,
    #[arg(long, default_value_t = 100)]
    divisors: usize,
    /// Conflict limit per SAT call (0 = unlimited)
    #[arg(long, default_value_t = 10_000)]
    conflicts: u64,
    #[arg(long)]
    no_resub: bool,
    #[arg(long)]
    no_assume: bool,
    #[arg(long)]
    no_level_control: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short = 'o')]
    output: Option<PathBuf>,
    /// Output format; defaults to the output file extension
    #[arg(long)]
    format: Option<Format>,
    #[arg(long)]
    stats_json: Option<PathBuf>,
    /// Write every SAT instance as DIMACS into this directory
    #[arg(long)]
    dump_cnf: Option<PathBuf>,
    /// Bounded equivalence check of the result against the input (0 disables)
    #[arg(long, default_value_t = 0)]
    verify: usize,
}

#[derive(Args)]
struct EquivArgs {
    a: PathBuf,
    b: PathBuf,
    #[arg(long, default_value_t = 20)]
    depth: usize,
    /// Explore all reachable product states instead of a bounded check
    #[arg(long)]
    exhaustive: bool,
    /// Latch limit for the exhaustive check (both designs together)
    #[arg(long, default_value_t = 20)]
    max_latches: usize,
}

#[derive(Args)]
struct StatsArgs {
    input: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct GenArgs {
    /// Fixture name (toggle, toggle1, m1, m1b, m2, m3); omit for a random design
    #[arg(long)]
    fixture: Option<String>,
    #[arg(long, default_value_t = 8)]
    inputs: usize,
    #[arg(long, default_value_t = 16)]
    latches: usize,
    #[arg(long, default_value_t = 200)]
    ands: usize,
    #[arg(long, default_value_t = 4)]
    outputs: usize,
    /// Draw fanins from the most recent N signals
    #[arg(long)]
    locality: Option<usize>,
    /// With --locality: insert pipeline registers to keep logic this shallow
    #[arg(long)]
    max_depth: Option<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short = 'o')]
    output: PathBuf,
    #[arg(long)]
    format: Option<Format>,
}

#[derive(Serialize, Debug, PartialEq)]
struct RunStats {
    nodes_before: usize,
    nodes_after: usize,
    levels_before: u32,
    levels_after: u32,
    latches_before: usize,
    latches_after: usize,
    edits_applied: usize,
    candidates_tried: u64,
    sat_calls: u64,
    sat_unknown: u64,
    runtime_ms: u64,
    reduction_percent: f64,
}

impl RunStats {
    fn new(r: &OptReport) -> RunStats {
        let (b, a) = (&r.stats_before, &r.stats_after);
        RunStats {
            nodes_before: b.and_count,
            nodes_after: a.and_count,
            levels_before: b.level_count,
            levels_after: a.level_count,
            latches_before: b.latch_count,
            latches_after: a.latch_count,
            edits_applied: r.edits_applied.len(),
            candidates_tried: r.candidates_tried,
            sat_calls: r.sat_calls,
            sat_unknown: r.sat_unknown,
            runtime_ms: r.wall_time.as_millis() as u64,
            reduction_percent: reduction_percent(b.and_count, a.and_count),
        }
    }
}

/// Relative size change in percent, one decimal; negative is smaller.
fn reduction_percent(before: usize, after: usize) -> f64 {
    if before == 0 {
        return 0.0;
    }
    let p = 100.0 * (after as f64 - before as f64) / before as f64;
    (p * 10.0).round() / 10.0
}

#[derive(Serialize)]
struct StatsJson {
    inputs: usize,
    outputs: usize,
    ands: usize,
    levels: u32,
    latches: usize,
}

impl From<Stats> for StatsJson {
    fn from(s: Stats) -> Self {
        StatsJson {
            inputs: s.pi_count,
            outputs: s.po_count,
            ands: s.and_count,
            levels: s.level_count,
            latches: s.latch_count,
        }
    }
}

fn read(path: &Path) -> Result<Aig> {
    aiger::read(path).with_context(|| format!("reading {}", path.display()))
}

fn write(aig: &Aig, path: &Path, format: Option<Format>) -> Result<()> {
    let format = format.unwrap_or_else(|| Format::from_path(path));
    aiger::write(aig, path, format).with_context(|| format!("writing {}", path.display()))
}

/// Checks `out` against `n` up to `depth` cycles (0 skips the check) and
/// writes it only if no difference shows up. Returns the exit code.
fn verify_then_write(
    n: &Aig,
    out: &Aig,
    depth: usize,
    path: Option<&Path>,
    format: Option<Format>,
) -> Result<u8> {
    if depth > 0 {
        match bmc_check(n, out, depth)? {
            Outcome::Equivalent => println!("verify: equivalent up to depth {depth}"),
            Outcome::Counterexample(t) => {
                println!("verify: FAILED");
                print!("{}", t.waveform(n, out));
                return Ok(2);
            }
        }
    }
    if let Some(path) = path {
        write(out, path, format)?;
    }
    Ok(0)
}

fn cmd_opt(a: OptArgs) -> Result<u8> {
    let n = read(&a.input)?;
    if let Some(dir) = &a.dump_cnf {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let cfg = OptConfig {
        k: a.k,
        max_window_nodes: a.window_nodes,
        max_tfo_levels: a.tfo_levels,
        max_divisors: a.divisors,
        conflict_limit: a.conflicts,
        enable_resub: !a.no_resub,
        enable_assumptions: !a.no_assume,
        level_control: !a.no_level_control,
        seed: a.seed,
        dump_cnf: a.dump_cnf.clone(),
        ..OptConfig::default()
    };
    info!(
        "config: k={} window-nodes={} tfo-levels={} divisors={} conflicts={} resub={} assume={} level-control={} seed={}",
        cfg.k,
        cfg.max_window_nodes,
        cfg.max_tfo_levels,
        cfg.max_divisors,
        cfg.conflict_limit,
        cfg.enable_resub,
        cfg.enable_assumptions,
        cfg.level_control,
        cfg.seed
    );
    let (out, report) = optimize(&n, &cfg)?;
    let stats = RunStats::new(&report);
    println!("before: {}", report.stats_before);
    println!("after:  {}", report.stats_after);
    println!(
        "edits {}  candidates {}  sat calls {} ({} unknown)  {} ms  {:+.1}%",
        stats.edits_applied,
        stats.candidates_tried,
        stats.sat_calls,
        stats.sat_unknown,
        stats.runtime_ms,
        stats.reduction_percent
    );
    if verify_then_write(&n, &out, a.verify, a.output.as_deref(), a.format)? != 0 {
        return Ok(2);
    }
    if let Some(path) = &a.stats_json {
        let json = serde_json::to_string_pretty(&stats)?;
        fs::write(path, json + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(0)
}

fn cmd_equiv(a: EquivArgs) -> Result<u8> {
    let n1 = read(&a.a)?;
    let n2 = read(&a.b)?;
    let outcome = if a.exhaustive {
        exhaustive_check(&n1, &n2, a.max_latches)
    } else {
        bmc_check(&n1, &n2, a.depth)
    };
    match outcome {
        Ok(Outcome::Equivalent) if a.exhaustive => println!("equivalent"),
        Ok(Outcome::Equivalent) => println!("equivalent up to depth {}", a.depth),
        Ok(Outcome::Counterexample(t)) => {
            println!("not equivalent");
            print!("{}", t.waveform(&n1, &n2));
            return Ok(2);
        }
        Err(e @ EquivError::SignatureMismatch { .. }) => bail!(e),
        Err(e) => return Err(e.into()),
    }
    Ok(0)
}

fn cmd_stats(a: StatsArgs) -> Result<u8> {
    let s = read(&a.input)?.stats();
    if a.json {
        println!("{}", serde_json::to_string_pretty(&StatsJson::from(s))?);
    } else {
        println!("{s}");
    }
    Ok(0)
}

fn cmd_gen(a: GenArgs) -> Result<u8> {
    let aig = match a.fixture.as_deref() {
        Some("toggle") => fixtures::toggle(false),
        Some("toggle1") => fixtures::toggle(true),
        Some(name) => match fixtures::all().into_iter().find(|(n, _)| *n == name) {
            Some((_, aig)) => aig,
            None => bail!("unknown fixture '{name}'"),
        },
        None => random_aig(
            &RandomParams {
                inputs: a.inputs,
                latches: a.latches,
                ands: a.ands,
                outputs: a.outputs,
                locality: a.locality,
                max_depth: a.max_depth,
            },
            a.seed,
        ),
    };
    write(&aig, &a.output, a.format)?;
    println!("{}", aig.stats());
    Ok(0)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let r = match cli.cmd {
        Cmd::Opt(a) => cmd_opt(a),
        Cmd::Equiv(a) => cmd_equiv(a),
        Cmd::Stats(a) => cmd_stats(a),
        Cmd::Gen(a) => cmd_gen(a),
    };
    match r {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_rounding() {
        assert_eq!(reduction_percent(0, 0), 0.0);
        assert_eq!(reduction_percent(5, 4), -20.0);
        assert_eq!(reduction_percent(1000, 956), -4.4);
        assert_eq!(reduction_percent(3, 4), 33.3);
    }

    #[test]
    fn failed_verification_writes_nothing() {
        let n = fixtures::m1().aig;
        let mut broken = n.clone();
        let o = broken.outputs()[0];
        broken.set_output(0, !o).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.aag");
        assert_eq!(verify_then_write(&n, &broken, 5, Some(&path), None).unwrap(), 2);
        assert!(!path.exists());
        assert_eq!(verify_then_write(&n, &n, 5, Some(&path), None).unwrap(), 0);
        assert!(path.exists());
    }

    #[test]
    fn command_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
