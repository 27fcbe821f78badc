use buchidet::{RunStats, SccBreakdown};
use serde::Serialize;

#[derive(Serialize)]
pub struct SccJson {
    trivial: usize,
    rejecting: usize,
    accepting: usize,
    mixed: usize,
}

#[derive(Serialize)]
pub struct TimingsJson {
    trim_ms: f64,
    determinize_ms: f64,
    postprocess_ms: f64,
    total_ms: f64,
}

#[derive(Serialize)]
pub struct StatsJson {
    input_states: usize,
    trimmed_states: usize,
    sccs: SccJson,
    det_states: usize,
    output_states: usize,
    priorities: usize,
    timings: TimingsJson,
    opts: String,
    merge: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
}

fn ms(d: std::time::Duration) -> f64 {
    d.as_secs_f64() * 1000.0
}

impl StatsJson {
    pub fn new(s: &RunStats, seed: Option<u64>) -> Self {
        let SccBreakdown {
            trivial,
            rejecting,
            accepting,
            mixed,
        } = s.sccs;
        StatsJson {
            input_states: s.input_states,
            trimmed_states: s.trimmed_states,
            sccs: SccJson {
                trivial,
                rejecting,
                accepting,
                mixed,
            },
            det_states: s.det_states,
            output_states: s.output_states,
            priorities: s.priorities,
            timings: TimingsJson {
                trim_ms: ms(s.timings.trim),
                determinize_ms: ms(s.timings.determinize),
                postprocess_ms: ms(s.timings.postprocess),
                total_ms: ms(s.timings.total()),
            },
            opts: s.config.opts(),
            merge: s.config.merge.to_string(),
            seed,
        }
    }
}
