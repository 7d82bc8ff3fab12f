//! The `qk` command line.
//!
//! Exit codes: 0 success, 2 a conjecture check or sweep found failures,
//! 1 any error (including usage errors).

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use serde::Serialize;
use serde_json::json;

use crate::alpha::RationalAlpha;
use crate::digraph::{Digraph, Partition, VertexSet};
use crate::error::{Error, Result};
use crate::format::{parse_any, serialize, to_json};
use crate::generators::{make, FamilySpec};
use crate::harness::{check, sweep, ConjectureSpec, Corpus, Keep, Variant};
use crate::reductions::{add_source_gadget, c3_blowup, source_weighted_blowup, BlowupMap};
use crate::solvers::{
    chromatic_number, dichromatic_number, find_kernel, heavy_independent_set, is_kernel,
    is_quasi_kernel, kp_number, max_large_quasi_kernel, max_sharp_quasi_kernel,
    min_quasi_kernel, SolveResult,
};
use crate::theorems::{
    large_qk_from_partition, quasi_kernel_covering, small_qk_from_partition,
    small_qk_with_sources,
};

#[derive(Parser, Debug)]
#[command(name = "qk", version, about = "Quasi-kernels of small digraphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Io {
    /// Input digraph (text or JSON); stdin when absent.
    #[arg(long, short)]
    pub input: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Alg {
    Min,
    Large,
    Sharp,
    Kernel,
    Heavy,
    KpallSmall,
    KpallLarge,
    KpallSources,
    Kplem,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum KeepArg {
    All,
    Failures,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Compute a quasi-kernel, kernel or independent set.
    Solve {
        #[arg(long, value_enum)]
        alg: Alg,
        /// Vertex set P for `kplem`, e.g. `0,2`.
        #[arg(long)]
        set: Option<String>,
        /// Include intermediate sets of the construction.
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        io: Io,
    },
    /// Check one conjecture variant on one digraph.
    Check {
        #[arg(long)]
        conjecture: Variant,
        #[arg(long)]
        alpha: RationalAlpha,
        /// Use the sink-free version (implied for `small`).
        #[arg(long)]
        sink_free: bool,
        #[command(flatten)]
        io: Io,
    },
    /// Check a conjecture variant over a whole corpus.
    Sweep {
        /// Enumerate all digraphs on this many vertices.
        #[arg(long, conflicts_with = "family")]
        n: Option<usize>,
        /// Named families instead of an enumeration (repeatable).
        #[arg(long)]
        family: Vec<FamilySpec>,
        /// Draw this many random digraphs on `--n` vertices instead.
        #[arg(long, requires = "n")]
        random: Option<u64>,
        /// Arc probability for `--random`.
        #[arg(long, default_value = "1/2")]
        p: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        sink_free: bool,
        /// One digraph per isomorphism class.
        #[arg(long, conflicts_with = "random")]
        canonical: bool,
        #[arg(long, default_value_t = 1)]
        shards: usize,
        #[arg(long, default_value_t = 0)]
        shard: usize,
        #[arg(long)]
        conjecture: Variant,
        #[arg(long)]
        alpha: RationalAlpha,
        #[arg(long, value_enum, default_value_t = KeepArg::Failures)]
        keep: KeepArg,
        /// Also write a CSV of the kept records here.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Emit a named digraph.
    Gen {
        /// cycle:N, path:N, edgeless:N, circulant:N, c3pow:K,
        /// union:SPEC,SPEC, random:N:P/Q:SEED, tournament:N:SEED
        #[arg(long)]
        family: FamilySpec,
        #[arg(long, short)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },
    /// Kernel-perfect number with a certifying partition.
    Kp {
        /// Also report chromatic and dichromatic numbers.
        #[arg(long)]
        all: bool,
        #[command(flatten)]
        io: Io,
    },
    /// Apply a gadget or blowup: gadget:C, wblowup:C or c3blowup.
    Reduce {
        #[arg(long)]
        kind: String,
        /// Write the blowup map here instead of a trailing comment.
        #[arg(long)]
        map: Option<PathBuf>,
        #[command(flatten)]
        io: Io,
    },
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn read_input(path: &Option<PathBuf>) -> Result<Digraph> {
    let text = match path {
        Some(p) => fs::read_to_string(p)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", p.display())))?,
        None => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Error::InvalidArgument(format!("cannot read stdin: {e}")))?;
            s
        }
    };
    parse_any(&text)
}

fn write_output(path: &Option<PathBuf>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)
            .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Error::InvalidArgument(format!("cannot write stdout: {e}")))
        }
    }
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn parse_set(d: &Digraph, s: &str) -> Result<VertexSet> {
    let mut set = VertexSet::EMPTY;
    for t in s.split(|c: char| c == ',' || c.is_whitespace()) {
        let t = t.trim_matches(|c| c == '{' || c == '}');
        if t.is_empty() {
            continue;
        }
        let v: usize = t
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad vertex {t:?} in --set")))?;
        d.check_vertex(v)?;
        set.insert(v);
    }
    Ok(set)
}

fn partition_json(p: &Partition) -> serde_json::Value {
    json!({
        "kind": p.kind,
        "parts": p.parts.iter().map(|s| s.to_vec()).collect::<Vec<_>>(),
    })
}

fn partition_text(p: &Partition) -> String {
    p.parts
        .iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

fn execute(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Solve { alg, set, trace, io } => solve(alg, set, trace, &io),
        Command::Check {
            conjecture,
            alpha,
            sink_free,
            io,
        } => {
            let d = read_input(&io.input)?;
            let spec = ConjectureSpec::new(
                conjecture,
                alpha,
                sink_free || conjecture == Variant::Small,
            )?;
            let r = check(&d, &spec)?;
            let text = match io.format {
                OutputFormat::Json => pretty(&json!({
                    "conjecture": spec,
                    "n": r.n,
                    "objective": r.objective,
                    "bound": format!("{}/{}", r.bound.numer(), r.bound.denom()),
                    "pass": r.pass,
                    "witness": r.witness.to_vec(),
                })),
                OutputFormat::Text => format!(
                    "conjecture: {conjecture} alpha={alpha}\nobjective: {}\nbound: {}/{}\nwitness: {}\n{}\n",
                    r.objective,
                    r.bound.numer(),
                    r.bound.denom(),
                    r.witness,
                    if r.pass { "pass" } else { "FAIL" }
                ),
            };
            write_output(&io.output, &text)?;
            Ok(if r.pass { 0 } else { 2 })
        }
        Command::Sweep {
            n,
            family,
            random,
            p,
            seed,
            sink_free,
            canonical,
            shards,
            shard,
            conjecture,
            alpha,
            keep,
            csv,
            output,
            format,
        } => {
            let corpus = match (n, random, family.is_empty()) {
                (Some(n), Some(count), true) => {
                    let prob: Ratio<u64> = p
                        .parse()
                        .map_err(|_| Error::InvalidArgument(format!("bad probability {p:?}")))?;
                    Corpus::Random {
                        n,
                        p: (*prob.numer(), *prob.denom()),
                        count,
                        seed,
                        sink_free,
                    }
                }
                (Some(n), None, true) => Corpus::Enumeration {
                    n,
                    sink_free,
                    canonical,
                },
                (None, None, false) => Corpus::Families { specs: family },
                _ => {
                    return Err(Error::InvalidArgument(
                        "give exactly one of --n, --n with --random, or --family".into(),
                    ))
                }
            };
            let spec = ConjectureSpec::new(
                conjecture,
                alpha,
                conjecture == Variant::Small,
            )?;
            let keep = match keep {
                KeepArg::All => Keep::All,
                KeepArg::Failures => Keep::Failures,
            };
            let report = sweep(&corpus, &spec, (shard, shards), keep)?;
            if let Some(path) = csv {
                write_output(&Some(path), &report.to_csv())?;
            }
            let text = match format {
                OutputFormat::Json => {
                    let mut s = report.to_json();
                    s.push('\n');
                    s
                }
                OutputFormat::Text => report.summary(),
            };
            write_output(&output, &text)?;
            Ok(report.exit_code())
        }
        Command::Gen {
            family,
            output,
            format,
        } => {
            let d = make(&family)?;
            let text = match format {
                OutputFormat::Text => serialize(&d),
                OutputFormat::Json => format!("{}\n", to_json(&d)),
            };
            write_output(&output, &text)?;
            Ok(0)
        }
        Command::Kp { all, io } => {
            let d = read_input(&io.input)?;
            let (k, p) = kp_number(&d)?;
            let extra = if all {
                Some((chromatic_number(&d)?, dichromatic_number(&d)?))
            } else {
                None
            };
            let text = match io.format {
                OutputFormat::Json => {
                    let mut v = json!({ "kp": k, "partition": partition_json(&p) });
                    if let Some(((x, xp), (dx, dxp))) = &extra {
                        v["chromatic"] = json!({ "value": x, "partition": partition_json(xp) });
                        v["dichromatic"] = json!({ "value": dx, "partition": partition_json(dxp) });
                    }
                    pretty(&v)
                }
                OutputFormat::Text => {
                    let mut s = format!("kp: {k}\nparts: {}\n", partition_text(&p));
                    if let Some(((x, xp), (dx, dxp))) = &extra {
                        s += &format!("dichromatic: {dx}\nparts: {}\n", partition_text(dxp));
                        s += &format!("chromatic: {x}\nparts: {}\n", partition_text(xp));
                    }
                    s
                }
            };
            write_output(&io.output, &text)?;
            Ok(0)
        }
        Command::Reduce { kind, map, io } => {
            let d = read_input(&io.input)?;
            let (b, m) = reduce(&d, &kind)?;
            let map_json = serde_json::to_string(&m).expect("serializable");
            let text = match io.format {
                OutputFormat::Json => pretty(&json!({
                    "digraph": serde_json::from_str::<serde_json::Value>(&to_json(&b)).expect("json"),
                    "map": m,
                })),
                OutputFormat::Text => {
                    let mut s = serialize(&b);
                    match &map {
                        Some(path) => write_output(&Some(path.clone()), &format!("{map_json}\n"))?,
                        None => s += &format!("# map {map_json}\n"),
                    }
                    s
                }
            };
            write_output(&io.output, &text)?;
            Ok(0)
        }
    }
}

fn reduce(d: &Digraph, kind: &str) -> Result<(Digraph, BlowupMap)> {
    let (name, arg) = match kind.split_once(':') {
        Some((a, b)) => (a, Some(b)),
        None => (kind, None),
    };
    let c = || -> Result<usize> {
        arg.and_then(|a| a.parse().ok())
            .ok_or_else(|| Error::InvalidArgument(format!("{name} needs a multiplicity, e.g. {name}:2")))
    };
    match name {
        "gadget" => add_source_gadget(d, c()?),
        "wblowup" => {
            let sb = source_weighted_blowup(d, c()?)?;
            Ok((sb.blowup, sb.map))
        }
        "c3blowup" if arg.is_none() => c3_blowup(d),
        _ => Err(Error::InvalidArgument(format!(
            "unknown reduction {kind:?}; expected gadget:C, wblowup:C or c3blowup"
        ))),
    }
}

fn solve(alg: Alg, set: Option<String>, trace: bool, io: &Io) -> Result<i32> {
    let d = read_input(&io.input)?;
    if set.is_some() && alg != Alg::Kplem {
        return Err(Error::InvalidArgument("--set only applies to kplem".into()));
    }
    let mut trace_json = None;
    let r: SolveResult = match alg {
        Alg::Min => min_quasi_kernel(&d),
        Alg::Large => max_large_quasi_kernel(&d),
        Alg::Sharp => max_sharp_quasi_kernel(&d),
        Alg::Kernel => find_kernel(&d),
        Alg::Heavy => {
            let i = heavy_independent_set(&d)?;
            SolveResult {
                witness: Some(i),
                objective: i.len(),
                verified: true,
            }
        }
        Alg::KpallSmall | Alg::KpallLarge | Alg::KpallSources => {
            let (_, p) = kp_number(&d)?;
            if trace {
                trace_json = Some(json!({ "partition": partition_json(&p) }));
            }
            match alg {
                Alg::KpallSmall => {
                    let t = small_qk_from_partition(&d, &p)?;
                    if let Some(tj) = trace_json.as_mut() {
                        tj["k"] = json!(t.k);
                        tj["kernel"] = json!(t.kernel.to_vec());
                        tj["core"] = json!(t.core.to_vec());
                        tj["vprime"] = json!(t.vprime.iter().map(|s| s.to_vec()).collect::<Vec<_>>());
                        tj["w"] = json!(t.w.to_vec());
                        tj["branch"] = json!(t.branch);
                    }
                    SolveResult {
                        witness: Some(t.result),
                        objective: t.result.len(),
                        verified: true,
                    }
                }
                Alg::KpallLarge => large_qk_from_partition(&d, &p)?,
                _ => small_qk_with_sources(&d, &p)?,
            }
        }
        Alg::Kplem => {
            let s = set.ok_or_else(|| Error::InvalidArgument("kplem needs --set".into()))?;
            let p = parse_set(&d, &s)?;
            let q = quasi_kernel_covering(&d, p)?;
            SolveResult {
                witness: Some(q),
                objective: q.len(),
                verified: true,
            }
        }
    };

    // never print an unverified witness
    if let Some(w) = r.witness {
        let ok = match alg {
            Alg::Kernel => is_kernel(&d, w),
            Alg::Heavy => d.is_independent(w),
            _ => is_quasi_kernel(&d, w),
        };
        if !ok || !r.verified {
            return Err(Error::post("solve", format!("witness {w} failed verification")));
        }
    }

    let text = match io.format {
        OutputFormat::Json => {
            let mut v = json!({
                "alg": alg.to_possible_value().expect("named").get_name(),
                "witness": r.witness.map(|w| w.to_vec()),
                "objective": r.objective,
                "verified": r.verified,
            });
            if let Some(t) = trace_json {
                v["trace"] = t;
            }
            pretty(&v)
        }
        OutputFormat::Text => {
            let mut s = match r.witness {
                Some(w) => format!("witness: {w}\nobjective: {}\n", r.objective),
                None => "witness: none\n".to_string(),
            };
            if let Some(t) = trace_json {
                s += &format!("trace: {t}\n");
            }
            s
        }
    };
    write_output(&io.output, &text)?;
    Ok(0)
}
