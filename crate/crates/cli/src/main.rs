use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use groudit_core::biunitary::{balancers_to_biunitary, check_biunitary, enumerate_biunitaries, Biunitary};
use groudit_core::gaf::{check_graphical_biunitarity, Engine};
use groudit_core::protocols::{verify_protocol, Transfer, VerifyOptions};
use groudit_core::quantize::quantize_protransformation;
use groudit_core::{run_program, BalancerOrdering, Error, Groudit, Groupoid, Network, Program, DEFAULT_ENUM_GUARD};

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_TYPE: u8 = 3;
const EXIT_UNKNOWN: u8 = 4;
const EXIT_GUARD: u8 = 5;

#[derive(Parser)]
#[command(name = "groudit", version, about = "Simulate and verify groudit networks")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a program file and print its trace.
    Run {
        program: PathBuf,
        #[arg(long)]
        groudit: PathBuf,
        /// Also write the trace as JSON to this path.
        #[arg(long)]
        trace_json: Option<PathBuf>,
    },
    /// Exhaustively verify a protocol.
    Verify {
        protocol: String,
        #[arg(long)]
        groudit: PathBuf,
        #[arg(long, default_value_t = 3)]
        parties: usize,
        #[arg(long)]
        fail_step: Option<usize>,
        /// Route the dense-coding transfer through a basic block.
        #[arg(long)]
        chain: bool,
        /// Skip the span engine cross-check.
        #[arg(long)]
        no_engine: bool,
    },
    /// Check the one-intersection condition for a permutation of Mor(G).
    CheckBiunitary {
        /// `{"groupoid": {...}, "perm": [...]}`.
        #[arg(long, conflicts_with = "groudit", required_unless_present = "groudit")]
        biunitary: Option<PathBuf>,
        /// Check the biunitary induced by a groudit's balancers.
        #[arg(long)]
        groudit: Option<PathBuf>,
    },
    /// Count (and optionally list) every biunitary of a groupoid.
    EnumerateBiunitaries {
        #[arg(long)]
        groupoid: PathBuf,
        #[arg(long)]
        list: bool,
    },
    /// Print the matrix of a quantized span.
    Quantize {
        #[arg(long)]
        groudit: PathBuf,
        #[arg(long, value_enum, default_value_t = SpanKind::F)]
        span: SpanKind,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SpanKind {
    F,
    Tick,
    Read,
    Init,
    Split,
    Copy,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_groudit(path: &Path) -> Result<Groudit> {
    Ok(Groudit::from_json(&read(path)?)?)
}

fn guard() -> Result<usize> {
    match std::env::var("GROUDIT_ENUM_GUARD") {
        Ok(v) => v.trim().parse().with_context(|| format!("GROUDIT_ENUM_GUARD={v} is not a number")),
        Err(_) => Ok(DEFAULT_ENUM_GUARD),
    }
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json value"));
}

fn cmd_run(json: bool, program: &Path, groudit: &Path, trace_json: Option<&Path>) -> Result<u8> {
    let d = load_groudit(groudit)?;
    let program = Program::from_json(&read(program)?)?;
    let net = match &program.links {
        Some(links) => Network::with_links(Arc::new(d), links.iter().cloned()),
        None => Network::new(Arc::new(d)),
    };
    let (_, trace) = run_program(net, &program)?;
    if let Some(path) = trace_json {
        std::fs::write(path, trace.to_json()).with_context(|| format!("writing {}", path.display()))?;
    }
    if json {
        println!("{}", trace.to_json());
    } else {
        print!("{trace}");
    }
    Ok(0)
}

fn cmd_check(json: bool, f: &Biunitary) -> Result<u8> {
    let check = check_biunitary(f.groupoid(), f.perm())?;
    let graphical = check_graphical_biunitarity(f)?;
    let witness = check.witness.map(|w| serde_json::json!({"a": w.a, "b": w.b, "size": w.size}));
    if json {
        print_json(&serde_json::json!({"holds": check.holds, "graphical": graphical, "witness": witness}));
    } else {
        println!("biunitary: {}", if check.holds { "yes" } else { "no" });
        println!("graphical check: {}", if graphical { "yes" } else { "no" });
        if let Some(w) = check.witness {
            println!("witness: |F(Aut {}) ∩ Aut {}| = {}", w.a, w.b, w.size);
        }
    }
    Ok(if check.holds { 0 } else { EXIT_CHECK_FAILED })
}

fn cmd_enumerate(json: bool, groupoid: &Path, list: bool) -> Result<u8> {
    let g = Groupoid::from_json(&read(groupoid)?)?;
    let found = enumerate_biunitaries(&g, guard()?)?;
    let total: u128 = (1..=g.mor_count() as u128).product();
    if json {
        let perms: Vec<&[usize]> = if list { found.iter().map(|f| f.perm()).collect() } else { Vec::new() };
        print_json(&serde_json::json!({"count": found.len(), "permutations": total.to_string(), "list": perms}));
    } else {
        println!("{} of {}", found.len(), total);
        if list {
            for f in &found {
                println!("{:?}", f.perm());
            }
        }
    }
    Ok(0)
}

fn cmd_quantize(json: bool, groudit: &Path, kind: SpanKind) -> Result<u8> {
    let d = load_groudit(groudit)?;
    let e = Engine::new(&d)?;
    let span = match kind {
        SpanKind::F => e.f(),
        SpanKind::Tick => e.tick(),
        SpanKind::Read => e.read(),
        SpanKind::Init => e.init(),
        SpanKind::Split => e.split(),
        SpanKind::Copy => e.copy(),
    };
    let q = quantize_protransformation(span);
    if json {
        print_json(&q.to_json());
    } else {
        let m = &q.matrix;
        for i in 0..m.nrows() {
            let row: Vec<String> = (0..m.ncols()).map(|j| format!("{}", m[(i, j)].re)).collect();
            println!("{}", row.join(" "));
        }
    }
    Ok(0)
}

fn dispatch(cli: Cli) -> Result<u8> {
    let json = cli.json;
    match cli.command {
        Command::Run { program, groudit, trace_json } => cmd_run(json, &program, &groudit, trace_json.as_deref()),
        Command::Verify { protocol, groudit, parties, fail_step, chain, no_engine } => {
            let d = load_groudit(&groudit)?;
            let opts = VerifyOptions {
                parties,
                fail_step,
                engine: !no_engine,
                transfer: if chain { Transfer::Chain } else { Transfer::Rename },
            };
            let report = verify_protocol(&protocol, &d, &opts)?;
            if json {
                println!("{}", report.to_json());
            } else {
                print!("{report}");
            }
            Ok(if report.pass { 0 } else { EXIT_CHECK_FAILED })
        }
        Command::CheckBiunitary { biunitary, groudit } => {
            let f = match (biunitary, groudit) {
                (Some(path), _) => Biunitary::from_json(&read(&path)?)?,
                (None, Some(path)) => balancers_to_biunitary(&load_groudit(&path)?, BalancerOrdering::default()),
                (None, None) => unreachable!("clap requires one source"),
            };
            cmd_check(json, &f)
        }
        Command::EnumerateBiunitaries { groupoid, list } => cmd_enumerate(json, &groupoid, list),
        Command::Quantize { groudit, span } => cmd_quantize(json, &groudit, span),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Op(_) | Error::Step { .. } | Error::NotComposable(..)) => EXIT_TYPE,
        Some(Error::UnknownProtocol(_)) => EXIT_UNKNOWN,
        Some(Error::Guard { .. }) => EXIT_GUARD,
        Some(Error::Engine(_)) => EXIT_CHECK_FAILED,
        _ => EXIT_PARSE,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
