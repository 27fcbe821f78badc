//! Inputs shared by the benchmarks.

use buchidet::gen::{bn, cn, random_suite};
use buchidet::{DetConfig, MergeStrategy, Nba};

/// The cumulative configurations of the comparison table.
pub const CONFIGS: [&str; 8] = ["def", "T", "TE", "TEI", "TEIM", "TEIMS", "TEIMSW", "TEIMSWD"];

pub fn config(opts: &str, merge: MergeStrategy) -> DetConfig {
    DetConfig::from_opts(opts, merge).expect("valid option string")
}

/// Named family instances, small enough for repeated timing.
pub fn families() -> Vec<(String, Nba)> {
    let mut out: Vec<(String, Nba)> = (2..=4).map(|n| (format!("C({n})"), cn(n))).collect();
    out.extend((3..=5).map(|n| (format!("B({n})"), bn(n))));
    out
}

/// The seeded random corpus used for the state-sum comparison.
pub fn corpus() -> Vec<Nba> {
    random_suite(50, 3, 7, 2, 1.5, 0.3, 2024)
}
