//! The `odecirc` command line: term DSL, validation, evaluation, compilation
//! and verification campaigns.

pub mod dsl;

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use odecirc_core::algebra::{validate, Node, OracleDecl};
use odecirc_core::circuit::{self, stats, validate_normal_form, BitVector};
use odecirc_core::compiler::{self, claimed_depth, depth_profile, infer_widths, InputSpec};
use odecirc_core::eval::{eval_term, step_oracle};
use odecirc_core::{nonuniform, stdlib, CheckedTerm, EvalError, ModePreset, Oracles, PresetName, Term, Value};

pub use dsl::{parse_dsl, parse_dsl_at, DslError};

/// Environment variable for the largest derivation variable the step oracle accepts.
pub const MAX_ORACLE_X_ENV: &str = "ODECIRC_MAX_ORACLE_X";

/// Inputs up to this many bits are checked exhaustively by `roundtrip`.
const EXHAUSTIVE_BITS: usize = 12;

#[derive(Parser, Debug)]
#[command(name = "odecirc", version, about = "Length-ODE function algebras and their circuits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct TermArgs {
    /// Mode preset the term is validated under.
    #[arg(long, default_value = "ACDL", value_parser = parse_mode)]
    pub mode: PresetName,
    /// Term in the s-expression syntax, or `@path` to read it from a file.
    pub term: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Validate a term and print its diagnostics.
    Check {
        #[command(flatten)]
        t: TermArgs,
    },
    /// Evaluate a term on decimal arguments.
    Eval {
        #[command(flatten)]
        t: TermArgs,
        #[arg(allow_negative_numbers = true)]
        args: Vec<String>,
    },
    /// Compile a term to a circuit in the interchange format.
    Compile {
        #[command(flatten)]
        t: TermArgs,
        /// Input widths, one per argument or a single width for all.
        #[arg(long, value_delimiter = ',', default_value = "8")]
        widths: Vec<u32>,
        /// Give every input a sign bit.
        #[arg(long)]
        signed: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a circuit file on an LSB-first bit string.
    Simulate { circuit: PathBuf, bits: String },
    /// Compare eval with the step oracle and with compiled circuits on random samples.
    Verify {
        #[command(flatten)]
        t: TermArgs,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest first argument fed to the step oracle.
        #[arg(long, env = MAX_ORACLE_X_ENV, default_value_t = 4096)]
        max_oracle_x: u64,
        /// Input widths of the compiled campaigns.
        #[arg(long, value_delimiter = ',', default_value = "8")]
        widths: Vec<u32>,
    },
    /// Print depth and size of the compiled term at several widths.
    Stats {
        #[command(flatten)]
        t: TermArgs,
        #[arg(long, value_delimiter = ',', default_value = "4,8,16")]
        widths: Vec<u32>,
    },
    /// List the standard library.
    StdlibList,
    /// Rebuild a circuit as a term over its family predicates and compare outputs.
    Roundtrip {
        circuit: PathBuf,
        /// Random inputs to check when the circuit is too wide for an exhaustive check.
        #[arg(long, default_value_t = 256)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_mode(s: &str) -> Result<PresetName, String> {
    s.parse()
}

/// Outcome of a command: `Ok(true)` when everything checked out.
type Outcome = Result<bool>;

fn read_term_text(src: &str) -> Result<String> {
    match src.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).with_context(|| format!("reading {path}")),
        None => Ok(src.to_string()),
    }
}

fn collect_oracles(t: &Term, acc: &mut BTreeMap<String, usize>) {
    if let Node::Oracle { name, arity } = t.node() {
        acc.insert(name.to_string(), *arity);
    }
    for c in t.children() {
        collect_oracles(c, acc);
    }
}

/// The preset, extended with declarations for any oracles the term uses.
fn mode_for(t: &Term, name: PresetName) -> ModePreset {
    let base = ModePreset::new(name);
    let mut used = BTreeMap::new();
    collect_oracles(t, &mut used);
    let extra: Vec<OracleDecl> = used
        .into_iter()
        .filter(|(n, _)| base.oracle(n).is_none())
        .map(|(n, a)| OracleDecl::new(&n, a, false))
        .collect();
    if extra.is_empty() {
        base
    } else {
        base.with_oracles(extra)
    }
}

fn load_term(t: &TermArgs) -> Result<Term> {
    let text = read_term_text(&t.term)?;
    Ok(parse_dsl(&text)?)
}

/// Parses and validates, printing diagnostics to `err`. `None` if invalid.
fn checked(t: &TermArgs, err: &mut dyn Write) -> Result<Option<CheckedTerm>> {
    let term = load_term(t)?;
    match validate(&term, mode_for(&term, t.mode)) {
        Ok(ct) => {
            for w in ct.warnings() {
                writeln!(err, "{w}")?;
            }
            Ok(Some(ct))
        }
        Err(diags) => {
            for d in &diags {
                writeln!(err, "{d}")?;
            }
            Ok(None)
        }
    }
}

fn load_circuit(path: &Path) -> Result<circuit::Circuit> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    circuit::decode(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn specs_for(arity: usize, widths: &[u32], signed: bool) -> Result<Vec<InputSpec>> {
    let ws: Vec<u32> = match widths.len() {
        1 => vec![widths[0]; arity],
        n if n == arity => widths.to_vec(),
        n => bail!("term has arity {arity} but {n} widths were given"),
    };
    Ok(ws.into_iter().map(|width| InputSpec { width, signed }).collect())
}

fn cmd_check(t: &TermArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let Some(ct) = checked(t, err)? else {
        return Ok(false);
    };
    writeln!(out, "ok: arity {} under {}", ct.arity(), t.mode.as_str())?;
    Ok(true)
}

fn cmd_eval(t: &TermArgs, args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let Some(ct) = checked(t, err)? else {
        return Ok(false);
    };
    let vals = args
        .iter()
        .map(|a| a.parse::<Value>().map_err(|e| anyhow!("bad argument `{a}`: {e}")))
        .collect::<Result<Vec<_>>>()?;
    let v = eval_term(ct.term(), &vals, &Oracles::standard())?;
    writeln!(out, "{v}")?;
    Ok(true)
}

fn cmd_compile(
    t: &TermArgs,
    widths: &[u32],
    signed: bool,
    dest: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let Some(ct) = checked(t, err)? else {
        return Ok(false);
    };
    let plan = infer_widths(&ct, &specs_for(ct.arity(), widths, signed)?)?;
    let c = compiler::compile(&ct, &plan)?;
    let text = circuit::encode(&c.circuit);
    match dest {
        Some(p) => fs::write(p, &text).with_context(|| format!("writing {}", p.display()))?,
        None => out.write_all(text.as_bytes())?,
    }
    let sign = if c.output.nonneg() { "" } else { " plus sign" };
    writeln!(err, "{c}; output is {} bits{sign}", c.output_bits() - usize::from(!c.output.nonneg()))?;
    Ok(true)
}

fn cmd_simulate(path: &Path, bits: &str, out: &mut dyn Write) -> Outcome {
    let c = load_circuit(path)?;
    let input: BitVector = bits.parse().map_err(|e: String| anyhow!(e))?;
    let res = circuit::simulate(&c, &input)?;
    writeln!(out, "{res}")?;
    Ok(true)
}

fn random_value(rng: &mut ChaCha8Rng, hi: u64) -> Value {
    Value::from(rng.gen_range(0..=hi))
}

fn same_outcome(a: &std::result::Result<Value, EvalError>, b: &std::result::Result<Value, EvalError>) -> bool {
    match (a, b) {
        (Ok(x), Ok(y)) => x == y,
        (Err(x), Err(y)) => x.is_schema_violation() && y.is_schema_violation(),
        _ => false,
    }
}

fn show(r: &std::result::Result<Value, EvalError>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => e.to_string(),
    }
}

fn fmt_args(args: &[Value]) -> String {
    args.iter().map(Value::to_string).collect::<Vec<_>>().join(", ")
}

fn step_campaign(ct: &CheckedTerm, samples: usize, seed: u64, max_x: u64, out: &mut dyn Write) -> Result<bool> {
    if ct.arity() == 0 {
        writeln!(out, "SKIP eval-vs-step: nullary term has no derivation variable")?;
        return Ok(true);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let oracles = Oracles::standard();
    for _ in 0..samples {
        let x = random_value(&mut rng, max_x);
        let ys: Vec<Value> = (1..ct.arity()).map(|_| random_value(&mut rng, 255)).collect();
        let mut args = vec![x.clone()];
        args.extend(ys.iter().cloned());
        let a = eval_term(ct.term(), &args, &oracles);
        let b = step_oracle(ct, &x, &ys, &oracles, max_x);
        if !same_outcome(&a, &b) {
            writeln!(
                out,
                "FAIL eval-vs-step at ({}): eval {} but step oracle {}",
                fmt_args(&args),
                show(&a),
                show(&b)
            )?;
            return Ok(false);
        }
    }
    writeln!(out, "PASS eval-vs-step: {samples}/{samples} samples, x <= {max_x}")?;
    Ok(true)
}

fn circuit_campaign(ct: &CheckedTerm, samples: usize, seed: u64, width: u32, out: &mut dyn Write) -> Result<bool> {
    let label = format!("eval-vs-circuit W={width}");
    let specs = vec![InputSpec::unsigned(width); ct.arity()];
    let compiled = infer_widths(ct, &specs).and_then(|plan| compiler::compile(ct, &plan));
    let c = match compiled {
        Ok(c) => c,
        Err(e @ (compiler::CompileError::UnboundOracle(_) | compiler::CompileError::TcOnly(_))) => {
            writeln!(out, "SKIP {label}: {e}")?;
            return Ok(true);
        }
        Err(e) => return Err(e.into()),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ u64::from(width).rotate_left(32));
    let hi = (1u64 << width) - 1;
    let oracles = Oracles::standard();
    let mut cases = Vec::with_capacity(samples);
    let mut wants = Vec::with_capacity(samples);
    let mut skipped = 0;
    for _ in 0..samples {
        let args: Vec<Value> = (0..ct.arity()).map(|_| random_value(&mut rng, hi)).collect();
        match eval_term(ct.term(), &args, &oracles) {
            Ok(v) => {
                cases.push(args);
                wants.push(v);
            }
            Err(e) if e.is_schema_violation() => skipped += 1,
            Err(e) => return Err(e.into()),
        }
    }
    let got = c.run_many(&cases)?;
    for ((args, want), g) in cases.iter().zip(&wants).zip(&got) {
        if want != g {
            writeln!(out, "FAIL {label} at ({}): eval {want} but circuit {g}", fmt_args(args))?;
            return Ok(false);
        }
    }
    let s = stats(&c.circuit);
    let note = if skipped > 0 {
        format!(", {skipped} skipped on schema violations")
    } else {
        String::new()
    };
    writeln!(
        out,
        "PASS {label}: {}/{} samples{note} ({} depth {}, size {})",
        cases.len(),
        cases.len(),
        c.circuit.variant().as_str(),
        s.depth,
        s.size
    )?;
    Ok(true)
}

fn cmd_verify(
    t: &TermArgs,
    samples: usize,
    seed: u64,
    max_x: u64,
    widths: &[u32],
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let Some(ct) = checked(t, err)? else {
        return Ok(false);
    };
    let mut ok = step_campaign(&ct, samples, seed, max_x, out)?;
    for &w in widths {
        if !(1..=32).contains(&w) {
            bail!("width {w} is outside 1..=32");
        }
        ok &= circuit_campaign(&ct, samples, seed, w, out)?;
    }
    Ok(ok)
}

fn cmd_stats(t: &TermArgs, widths: &[u32], out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let Some(ct) = checked(t, err)? else {
        return Ok(false);
    };
    let prof = depth_profile(&ct, widths)?;
    writeln!(out, "claimed logical depth {}", claimed_depth(&ct))?;
    writeln!(out, "{:>6} {:>6} {:>10}", "width", "depth", "size")?;
    for p in prof {
        writeln!(out, "{:>6} {:>6} {:>10}", p.width, p.depth, p.size)?;
    }
    Ok(true)
}

fn cmd_stdlib_list(out: &mut dyn Write) -> Outcome {
    for nt in stdlib::registry() {
        let modes: Vec<&str> = nt.modes.iter().map(|m| m.as_str()).collect();
        writeln!(out, "{:<16} {} {}", nt.name, nt.arity(), modes.join(","))?;
    }
    Ok(true)
}

fn cmd_roundtrip(path: &Path, samples: usize, seed: u64, dest: Option<&Path>, out: &mut dyn Write) -> Outcome {
    let c = load_circuit(path)?;
    let n = c.n_inputs();
    let inputs = if n <= EXHAUSTIVE_BITS {
        nonuniform::all_inputs(n)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..samples)
            .map(|_| BitVector::new((0..n).map(|_| rng.gen_bool(0.5)).collect()))
            .collect()
    };
    let report = nonuniform::roundtrip_check(&c, &inputs)?;
    let verdict = if report.ok() { "PASS" } else { "FAIL" };
    let text = format!("{verdict} roundtrip: {}\n", report.to_string().trim_end());
    out.write_all(text.as_bytes())?;
    if let Some(p) = dest {
        fs::write(p, &text).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(report.ok())
}

/// Runs a parsed command line; returns the process exit status.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let res = match &cli.command {
        Command::Check { t } => cmd_check(t, out, err),
        Command::Eval { t, args } => cmd_eval(t, args, out, err),
        Command::Compile { t, widths, signed, out: dest } => cmd_compile(t, widths, *signed, dest.as_deref(), out, err),
        Command::Simulate { circuit, bits } => cmd_simulate(circuit, bits, out),
        Command::Verify {
            t,
            samples,
            seed,
            max_oracle_x,
            widths,
        } => cmd_verify(t, *samples, *seed, *max_oracle_x, widths, out, err),
        Command::Stats { t, widths } => cmd_stats(t, widths, out, err),
        Command::StdlibList => cmd_stdlib_list(out),
        Command::Roundtrip {
            circuit,
            samples,
            seed,
            out: dest,
        } => cmd_roundtrip(circuit, *samples, *seed, dest.as_deref(), out),
    };
    match res {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            1
        }
    }
}

/// Checks that a compiled circuit file reloads into a valid normal form.
pub fn reloads_cleanly(text: &str) -> bool {
    circuit::decode(text).is_ok_and(|c| validate_normal_form(&c).is_ok())
}
