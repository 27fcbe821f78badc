mod bench;
mod stats;

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use buchidet::gen::{bn, cn, random, RandomSpec};
use buchidet::{
    bounded_equivalence, dpa_equivalent, emit_dpa, emit_nba, parse_dpa, parse_nba, run, DetConfig, Error, Limits,
    MergeStrategy,
};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "buchidet", version, about = "Determinize Büchi automata into parity automata")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Determinize an NBA given in HOA format
    Det(DetArgs),
    /// Check an NBA against a DPA on all lassos up to the given bounds
    Verify {
        nba: PathBuf,
        dpa: PathBuf,
        #[arg(long, default_value_t = 4)]
        prefix: usize,
        #[arg(long, default_value_t = 4)]
        cycle: usize,
    },
    /// Decide language equivalence of two DPAs
    Equiv { first: PathBuf, second: PathBuf },
    /// Run configurations over a directory of HOA files
    Bench(bench::BenchArgs),
    /// Print a benchmark automaton in HOA format
    Gen {
        #[command(subcommand)]
        family: Family,
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct DetArgs {
    /// Input file; standard input when omitted or `-`
    input: Option<PathBuf>,
    #[arg(long, default_value = "safra")]
    merge: MergeStrategy,
    /// Option letters from TEIMSAWD, or `def`
    #[arg(long, default_value = "def")]
    opts: String,
    /// One component per SCC and no buffer
    #[arg(long)]
    sep: bool,
    /// Keep the first bottom SCC found instead of the smallest
    #[arg(long)]
    greedy_bottom: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long)]
    stats_json: Option<PathBuf>,
    #[arg(long, env = "BUCHIDET_STATE_CAP", default_value_t = Limits::DEFAULT_CAP)]
    state_cap: usize,
}

#[derive(Subcommand)]
enum Family {
    /// B(n): n+1 states over letters 1..n and #
    Bn { n: usize },
    /// C(n): universal, 2n+1 states over letters 1..n
    Cn { n: usize },
    /// Seeded random automaton
    Random {
        #[arg(long)]
        states: usize,
        #[arg(long, default_value_t = 2)]
        symbols: usize,
        #[arg(long, default_value_t = 1.5)]
        density: f64,
        #[arg(long, default_value_t = 0.3)]
        acc_frac: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// A failed command: exit code and message.
struct Failure(u8, String);

impl Failure {
    fn input(e: impl std::fmt::Display) -> Self {
        Failure(2, e.to_string())
    }
}

type CmdResult = Result<u8, Failure>;

fn read_input(path: Option<&Path>) -> Result<String, Failure> {
    match path {
        None => read_stdin(),
        Some(p) if p.as_os_str() == "-" => read_stdin(),
        Some(p) => fs::read_to_string(p).map_err(|e| Failure::input(format!("{}: {e}", p.display()))),
    }
}

fn read_stdin() -> Result<String, Failure> {
    let mut s = String::new();
    io::stdin().read_to_string(&mut s).map_err(Failure::input)?;
    Ok(s)
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::input(format!("{}: {e}", p.display()))),
        None => io::stdout().write_all(text.as_bytes()).map_err(Failure::input),
    }
}

fn cmd_det(args: &DetArgs) -> CmdResult {
    let mut config = DetConfig::from_opts(&args.opts, args.merge).map_err(Failure::input)?;
    config.separate_sccs = args.sep;
    config.greedy_bottom = args.greedy_bottom;
    let text = read_input(args.input.as_deref())?;
    let nba = parse_nba(&text).map_err(Failure::input)?;
    let result = run(&nba, &config, &Limits::with_cap(args.state_cap)).map_err(|e| match e {
        Error::CapExceeded(_) | Error::Timeout => Failure(3, e.to_string()),
        other => Failure::input(other),
    })?;
    write_output(args.output.as_deref(), &emit_dpa(&result.dpa))?;
    if let Some(p) = &args.stats_json {
        let json = serde_json::to_string_pretty(&stats::StatsJson::new(&result.stats, None)).map_err(Failure::input)?;
        fs::write(p, json + "\n").map_err(|e| Failure::input(format!("{}: {e}", p.display())))?;
    }
    Ok(0)
}

fn cmd_verify(nba: &Path, dpa: &Path, prefix: usize, cycle: usize) -> CmdResult {
    let nba = parse_nba(&read_input(Some(nba))?).map_err(Failure::input)?;
    let dpa = parse_dpa(&read_input(Some(dpa))?).map_err(Failure::input)?;
    match bounded_equivalence(&nba, &dpa, prefix, cycle).map_err(Failure::input)? {
        Ok(()) => {
            println!("equivalent on all lassos with |u| <= {prefix}, |v| <= {cycle}");
            Ok(0)
        }
        Err(lasso) => {
            println!("counterexample: {}", lasso.render(nba.alphabet()));
            Ok(1)
        }
    }
}

fn cmd_equiv(first: &Path, second: &Path) -> CmdResult {
    let a = parse_dpa(&read_input(Some(first))?).map_err(Failure::input)?;
    let b = parse_dpa(&read_input(Some(second))?).map_err(Failure::input)?;
    match dpa_equivalent(&a, &b).map_err(Failure::input)? {
        Ok(()) => {
            println!("equivalent");
            Ok(0)
        }
        Err(lasso) => {
            println!("counterexample: {}", lasso.render(a.alphabet()));
            Ok(1)
        }
    }
}

fn cmd_gen(family: &Family, output: Option<&Path>) -> CmdResult {
    let (size, letters) = match *family {
        Family::Bn { n } => (n, n + 1),
        Family::Cn { n } => (n, n),
        Family::Random { states, symbols, .. } => (states, symbols),
    };
    if size == 0 || letters == 0 {
        return Err(Failure::input("sizes must be positive"));
    }
    if letters > 1 << buchidet::MAX_APS {
        return Err(Failure::input(format!("{letters} letters need more than {} propositions", buchidet::MAX_APS)));
    }
    let nba = match *family {
        Family::Bn { n } => bn(n),
        Family::Cn { n } => cn(n),
        Family::Random {
            states,
            symbols,
            density,
            acc_frac,
            seed,
        } => random(&RandomSpec::new(states, symbols, density, acc_frac), seed),
    };
    write_output(output, &emit_nba(&nba))?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Det(args) => cmd_det(args),
        Command::Verify {
            nba,
            dpa,
            prefix,
            cycle,
        } => cmd_verify(nba, dpa, *prefix, *cycle),
        Command::Equiv { first, second } => cmd_equiv(first, second),
        Command::Bench(args) => bench::cmd_bench(args).map_err(Failure::input),
        Command::Gen { family, output } => cmd_gen(family, output.as_deref()),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
