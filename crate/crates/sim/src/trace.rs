//! Human-readable per-iteration logs of the best-first search.
//!
//! Log lines use 1-based branch and level numbers to match how the search
//! is usually narrated; every machine-facing index in the toolkit stays
//! 0-based.

use sm_core::{
    mm_decode_traced, mmw_decode_traced, CandidateMetrics, Constellation, DecodeOutcome,
    MetricProvider, Scenario, TableMetrics, TraceSink,
};

use crate::error::Result;
use crate::harness::draw_link;
use crate::seed::{derive_rng, STREAM_TRACE};

/// The eight-branch, three-level metric table used by the narrated
/// walk-through: the optimal rule stops after six expansions on branch 1
/// (radius 0.55), the early-terminating variant one iteration sooner on
/// branch 4 (radius 0.7).
pub fn worked_example() -> TableMetrics {
    TableMetrics::from_steps(&[
        vec![0.2, 0.3, 0.6, 0.1, 0.65, 0.35, 0.7, 0.75],
        vec![0.3, 0.6, 1.0, 0.3, 1.0, 0.65, 1.0, 1.0],
        vec![0.05, 1.0, 1.0, 0.3, 1.0, 1.0, 1.0, 1.0],
    ])
}

struct LogSink {
    depths: Vec<usize>,
    lines: Vec<String>,
    expansions: usize,
}

impl LogSink {
    fn new(branches: usize) -> Self {
        LogSink {
            depths: vec![1; branches],
            lines: Vec::new(),
            expansions: 0,
        }
    }
}

impl TraceSink for LogSink {
    fn expand(&mut self, iteration: usize, branch: usize, level: usize, metric: f64) {
        self.depths[branch] = level;
        self.expansions = iteration;
        let v: Vec<String> = self.depths.iter().map(|d| d.to_string()).collect();
        self.lines.push(format!(
            "iter {iteration}: expand branch {} to level {level}, d = {metric}, v = [{}]",
            branch + 1,
            v.join(" ")
        ));
    }

    fn stop(&mut self, _iterations: usize, branch: usize, radius: f64) {
        self.lines
            .push(format!("stop, branch {}, radius {radius}", branch + 1));
    }
}

pub struct TraceReport {
    pub lines: Vec<String>,
    pub outcome: DecodeOutcome,
    pub expansions: usize,
}

/// Runs one decoder over the table, collecting its event log.
pub fn trace_table(metrics: &impl MetricProvider, weak: bool) -> TraceReport {
    let mut sink = LogSink::new(metrics.branches());
    let outcome = if weak {
        mmw_decode_traced(metrics, &mut sink)
    } else {
        mm_decode_traced(metrics, &mut sink)
    };
    TraceReport {
        lines: sink.lines,
        outcome,
        expansions: sink.expansions,
    }
}

/// Draws one link instance from the trace stream and logs its decode.
pub fn trace_scenario(scenario: &Scenario, base_seed: u64, weak: bool) -> Result<TraceReport> {
    let cons = Constellation::qam(scenario.m)?;
    let mut rng = derive_rng(base_seed, STREAM_TRACE, 0, 0);
    let draw = draw_link(&mut rng, scenario, &cons)?;
    let metrics = CandidateMetrics::new(&draw.y, &draw.set)?;
    Ok(trace_table(&metrics, weak))
}
