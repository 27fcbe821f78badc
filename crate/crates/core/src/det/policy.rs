use crate::analysis::{SccInfo, SccKind};
use crate::automaton::Nba;
use crate::det::config::DetConfig;
use crate::stateset::StateSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ComponentMode {
    General,
    /// Single track set over accepting SCCs; the rest waits in the buffer.
    Breakpoint,
    /// Deterministic SCC whose sets are never split.
    DetNoSplit,
}

/// How NBA states are distributed over the components of a macrostate.
#[derive(Clone, Debug)]
pub struct ComponentPolicy {
    pub modes: Vec<ComponentMode>,
    pub domains: Vec<StateSet>,
    /// Component owning each state, `None` for buffer-only states.
    pub comp_of: Vec<Option<usize>>,
    /// States of rejecting SCCs that live in the buffer.
    pub buffer_rejecting: StateSet,
    pub breakpoint: Option<usize>,
}

impl ComponentPolicy {
    pub fn build(nba: &Nba, info: &SccInfo, config: &DetConfig) -> Self {
        let n = nba.num_states();
        let mut modes = Vec::new();
        let mut domains = Vec::new();
        let mut buffer_rejecting = StateSet::empty(n);
        let mut breakpoint = None;

        if config.separate_sccs {
            for &c in &info.topo_order {
                modes.push(ComponentMode::General);
                domains.push(info.members[c].clone());
            }
        } else {
            if config.weak_separation {
                buffer_rejecting = info.states_where(n, |c| info.kind[c].is_rejecting());
            }
            let bp = if config.weak_separation || config.acc_breakpoint {
                info.states_where(n, |c| info.kind[c] == SccKind::Accepting)
            } else {
                StateSet::empty(n)
            };
            let det: Vec<StateSet> = if config.det_scc_mode {
                info.topo_order
                    .iter()
                    .filter(|c| info.kind[**c] == SccKind::Mixed && info.deterministic[**c])
                    .map(|c| info.members[*c].clone())
                    .collect()
            } else {
                Vec::new()
            };
            let mut general = StateSet::full(n);
            general.difference_with(&buffer_rejecting);
            general.difference_with(&bp);
            for d in &det {
                general.difference_with(d);
            }
            if !general.is_empty() {
                modes.push(ComponentMode::General);
                domains.push(general);
            }
            for d in det {
                modes.push(ComponentMode::DetNoSplit);
                domains.push(d);
            }
            if !bp.is_empty() {
                breakpoint = Some(modes.len());
                modes.push(ComponentMode::Breakpoint);
                domains.push(bp);
            }
        }

        let mut comp_of = vec![None; n];
        for (i, d) in domains.iter().enumerate() {
            for q in d {
                comp_of[q] = Some(i);
            }
        }
        ComponentPolicy {
            modes,
            domains,
            comp_of,
            buffer_rejecting,
            breakpoint,
        }
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// States allowed in the buffer.
    pub fn buffer_domain(&self) -> StateSet {
        let mut d = self.buffer_rejecting.clone();
        if let Some(b) = self.breakpoint {
            d.union_with(&self.domains[b]);
        }
        d
    }

    pub fn ascending_flags(&self) -> Vec<bool> {
        self.modes.iter().map(|m| *m == ComponentMode::DetNoSplit).collect()
    }

    pub fn single_set_flags(&self) -> Vec<bool> {
        self.modes.iter().map(|m| *m == ComponentMode::Breakpoint).collect()
    }
}
