use std::fmt;
use std::str::FromStr;
use std::time::Instant;

/// How adjacent sets are collapsed after the priority of a transition is known.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MergeStrategy {
    /// No merging.
    MullerSchupp,
    /// Merge the subtree of every good rank.
    Safra,
    /// Merge the subtree of rank `k` into it, and every other maximal run of
    /// adjacent sets with ranks above `k` into one set.
    MaxCollapse,
}

impl MergeStrategy {
    pub const ALL: [MergeStrategy; 3] = [
        MergeStrategy::MullerSchupp,
        MergeStrategy::Safra,
        MergeStrategy::MaxCollapse,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            MergeStrategy::MullerSchupp => "ms",
            MergeStrategy::Safra => "safra",
            MergeStrategy::MaxCollapse => "max",
        }
    }
}

impl fmt::Display for MergeStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for MergeStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "ms" | "muller-schupp" => Ok(MergeStrategy::MullerSchupp),
            "safra" => Ok(MergeStrategy::Safra),
            "max" | "max-collapse" => Ok(MergeStrategy::MaxCollapse),
            _ => Err(format!("unknown merge strategy '{s}' (expected ms, safra or max)")),
        }
    }
}

/// Switches for every optional pass. The default is the plain construction
/// with the true-loop check.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DetConfig {
    pub merge: MergeStrategy,
    pub true_loop: bool,
    /// `E`: drop ranked states simulated by a ranked state of another SCC.
    pub external_inclusion: bool,
    /// `I`: drop ranked states simulated by a state further left in the same component.
    pub internal_inclusion: bool,
    /// `S`: reuse existing macrostates found through the successor trie.
    pub smart_successors: bool,
    /// `A`: breakpoint component for accepting SCCs.
    pub acc_breakpoint: bool,
    /// `W`: buffer for rejecting SCCs plus the breakpoint component.
    pub weak_separation: bool,
    /// `D`: dedicated components for deterministic mixed SCCs.
    pub det_scc_mode: bool,
    /// `T`: determinize per SCC of the powerset structure.
    pub topological: bool,
    /// `M`: priority and Mealy minimization of the result.
    pub minimize: bool,
    /// One general component per SCC, no buffer.
    pub separate_sccs: bool,
    /// Keep the first bottom SCC found instead of the smallest one under `T`.
    pub greedy_bottom: bool,
}

impl Default for DetConfig {
    fn default() -> Self {
        DetConfig {
            merge: MergeStrategy::Safra,
            true_loop: true,
            external_inclusion: false,
            internal_inclusion: false,
            smart_successors: false,
            acc_breakpoint: false,
            weak_separation: false,
            det_scc_mode: false,
            topological: false,
            minimize: false,
            separate_sccs: false,
            greedy_bottom: false,
        }
    }
}

impl DetConfig {
    /// Parses an option string over the letters `TEIMSAWD`; `def` and the
    /// empty string mean no options.
    pub fn from_opts(opts: &str, merge: MergeStrategy) -> Result<Self, String> {
        let mut c = DetConfig {
            merge,
            ..DetConfig::default()
        };
        if opts == "def" {
            return Ok(c);
        }
        for ch in opts.chars() {
            match ch.to_ascii_uppercase() {
                'T' => c.topological = true,
                'E' => c.external_inclusion = true,
                'I' => c.internal_inclusion = true,
                'M' => c.minimize = true,
                'S' => c.smart_successors = true,
                'A' => c.acc_breakpoint = true,
                'W' => c.weak_separation = true,
                'D' => c.det_scc_mode = true,
                ',' | '+' | ' ' => {}
                other => return Err(format!("unknown option '{other}' (expected letters from TEIMSAWD)")),
            }
        }
        Ok(c)
    }

    /// Option letters in canonical order, or `def`.
    pub fn opts(&self) -> String {
        let mut s = String::new();
        for (on, ch) in [
            (self.topological, 'T'),
            (self.external_inclusion, 'E'),
            (self.internal_inclusion, 'I'),
            (self.minimize, 'M'),
            (self.smart_successors, 'S'),
            (self.weak_separation, 'W'),
            (self.acc_breakpoint, 'A'),
            (self.det_scc_mode, 'D'),
        ] {
            if on {
                s.push(ch);
            }
        }
        if self.separate_sccs {
            s.push_str("+sep");
        }
        if s.is_empty() {
            s.push_str("def");
        }
        s
    }

    pub fn with_merge(mut self, merge: MergeStrategy) -> Self {
        self.merge = merge;
        self
    }
}

/// Resource bounds for one exploration.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub state_cap: usize,
    pub deadline: Option<Instant>,
}

impl Limits {
    pub const DEFAULT_CAP: usize = 1_000_000;

    pub fn with_cap(state_cap: usize) -> Self {
        Limits {
            state_cap,
            deadline: None,
        }
    }
}

impl Default for Limits {
    fn default() -> Self {
        Limits::with_cap(Self::DEFAULT_CAP)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn option_strings_round_trip() {
        let c = DetConfig::from_opts("TEIMSWD", MergeStrategy::MullerSchupp).unwrap();
        assert!(c.topological && c.minimize && c.det_scc_mode && !c.acc_breakpoint);
        assert_eq!(c.opts(), "TEIMSWD");
        assert_eq!(DetConfig::from_opts("def", MergeStrategy::Safra).unwrap().opts(), "def");
        assert!(DetConfig::from_opts("X", MergeStrategy::Safra).is_err());
        assert_eq!("max".parse::<MergeStrategy>(), Ok(MergeStrategy::MaxCollapse));
    }
}
