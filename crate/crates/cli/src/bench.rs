use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use buchidet::{parse_nba, run, DetConfig, Error, Limits, MergeStrategy};
use clap::Args;
use rayon::prelude::*;

#[derive(Args)]
pub struct BenchArgs {
    /// Directory of `.hoa` files
    dir: PathBuf,
    /// Comma-separated configurations; the first is the baseline for ratios
    #[arg(long, default_value = "def,T,TEI,TEIM")]
    configs: String,
    /// Comma-separated merge strategies
    #[arg(long, default_value = "safra")]
    merges: String,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Per-run time limit in seconds
    #[arg(long)]
    timeout: Option<f64>,
    #[arg(long, env = "BUCHIDET_STATE_CAP", default_value_t = Limits::DEFAULT_CAP)]
    state_cap: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Status {
    Ok,
    Timeout,
    Cap,
    Error(String),
}

impl Status {
    fn label(&self) -> String {
        match self {
            Status::Ok => "ok".into(),
            Status::Timeout => "timeout".into(),
            Status::Cap => "cap".into(),
            Status::Error(e) => format!("error: {}", e.replace(',', ";")),
        }
    }
}

struct Row {
    file: String,
    config: String,
    merge: MergeStrategy,
    in_states: usize,
    out_states: Option<usize>,
    priorities: Option<usize>,
    ms: f64,
    status: Status,
}

fn hoa_files(dir: &Path) -> Result<Vec<PathBuf>, String> {
    let entries = fs::read_dir(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "hoa"))
        .collect();
    files.sort();
    Ok(files)
}

fn split(list: &str) -> Vec<&str> {
    list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()
}

fn one(path: &Path, opts: &str, merge: MergeStrategy, args: &BenchArgs) -> Row {
    let file = path.file_name().map_or_else(String::new, |f| f.to_string_lossy().into_owned());
    let mut row = Row {
        file,
        config: opts.to_string(),
        merge,
        in_states: 0,
        out_states: None,
        priorities: None,
        ms: 0.0,
        status: Status::Ok,
    };
    let nba = match fs::read_to_string(path).map_err(|e| e.to_string()).and_then(|t| parse_nba(&t).map_err(|e| e.to_string())) {
        Ok(n) => n,
        Err(e) => {
            row.status = Status::Error(e);
            return row;
        }
    };
    row.in_states = nba.num_states();
    let config = DetConfig::from_opts(opts, merge).expect("validated before the run");
    let start = Instant::now();
    let limits = Limits {
        state_cap: args.state_cap,
        deadline: args.timeout.map(|s| start + Duration::from_secs_f64(s)),
    };
    match run(&nba, &config, &limits) {
        Ok(r) => {
            row.out_states = Some(r.stats.output_states);
            row.priorities = Some(r.stats.priorities);
        }
        Err(Error::Timeout) => row.status = Status::Timeout,
        Err(Error::CapExceeded(_)) => row.status = Status::Cap,
        Err(e) => row.status = Status::Error(e.to_string()),
    }
    row.ms = start.elapsed().as_secs_f64() * 1000.0;
    row
}

/// Option letters of a configuration, for finding with/without pairs.
fn letters(opts: &str) -> String {
    let mut l: Vec<char> = if opts == "def" {
        Vec::new()
    } else {
        opts.chars().filter(char::is_ascii_alphabetic).map(|c| c.to_ascii_uppercase()).collect()
    };
    l.sort_unstable();
    l.dedup();
    l.into_iter().collect()
}

fn opt(v: Option<usize>) -> String {
    v.map_or_else(String::new, |x| x.to_string())
}

/// Ratio and monotonicity lines appended after the data rows.
fn summary(rows: &[Row], configs: &[&str], merges: &[MergeStrategy]) -> Vec<String> {
    let mut out = Vec::new();
    let size: HashMap<(&str, &str, MergeStrategy), usize> = rows
        .iter()
        .filter_map(|r| r.out_states.map(|s| ((r.file.as_str(), r.config.as_str(), r.merge), s)))
        .collect();
    let files: Vec<&str> = {
        let mut f: Vec<&str> = rows.iter().map(|r| r.file.as_str()).collect();
        f.dedup();
        f
    };
    let base = configs[0];
    for &m in merges {
        for &c in &configs[1..] {
            let (mut num, mut den) = (0, 0);
            for f in &files {
                if let (Some(a), Some(b)) = (size.get(&(*f, c, m)), size.get(&(*f, base, m))) {
                    num += a;
                    den += b;
                }
            }
            let ratio = if den == 0 { String::from("nan") } else { format!("{:.3}", num as f64 / den as f64) };
            out.push(format!("summary,{c} vs {base},{m},{den},{num},,,ratio={ratio}"));
        }
        for &with in configs {
            for &without in configs {
                let (lw, lo) = (letters(with), letters(without));
                let Some(extra) = lw.chars().find(|ch| !lo.contains(*ch)) else { continue };
                if lw.len() != lo.len() + 1 || !matches!(extra, 'S' | 'T') || !lo.chars().all(|ch| lw.contains(ch)) {
                    continue;
                }
                let bad = files
                    .iter()
                    .filter(|f| matches!((size.get(&(**f, with, m)), size.get(&(**f, without, m))), (Some(a), Some(b)) if a > b))
                    .count();
                let verdict = if bad == 0 { "monotone".to_string() } else { format!("violations={bad}") };
                out.push(format!("monotone,{with} vs {without},{m},,,,,{verdict}"));
            }
        }
    }
    out
}

pub fn cmd_bench(args: &BenchArgs) -> Result<u8, String> {
    let configs = split(&args.configs);
    if configs.is_empty() {
        return Err("no configurations given".into());
    }
    for c in &configs {
        DetConfig::from_opts(c, MergeStrategy::Safra)?;
    }
    let merges = split(&args.merges).into_iter().map(str::parse).collect::<Result<Vec<MergeStrategy>, _>>()?;
    let files = hoa_files(&args.dir)?;
    let mut jobs: Vec<(&PathBuf, &str, MergeStrategy)> = Vec::new();
    for f in &files {
        for c in &configs {
            for m in &merges {
                jobs.push((f, c, *m));
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs.max(1))
        .build()
        .map_err(|e| e.to_string())?;
    let rows: Vec<Row> = pool.install(|| jobs.par_iter().map(|(f, c, m)| one(f, c, *m, args)).collect());

    let mut csv = String::from("file,config,merge,in_states,out_states,priorities,ms,status\n");
    for r in &rows {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{:.3},{}",
            r.file,
            r.config,
            r.merge,
            r.in_states,
            opt(r.out_states),
            opt(r.priorities),
            r.ms,
            r.status.label()
        );
    }
    let summary = summary(&rows, &configs, &merges);
    for line in &summary {
        csv.push_str(line);
        csv.push('\n');
    }
    match &args.csv {
        Some(p) => fs::write(p, &csv).map_err(|e| format!("{}: {e}", p.display()))?,
        None => print!("{csv}"),
    }
    if args.csv.is_some() {
        for line in &summary {
            println!("{line}");
        }
    }
    Ok(0)
}
