//! Joint antenna/symbol detection as a search over a one-level-per-receive-
//! antenna tree with MN_t parallel branches.
//!
//! Branch j accumulates the partial squared distance
//! d(v, j) = sum over the first v levels of |y_n - x_{n,j}|^2. The exhaustive
//! ML detector sums every branch to full depth. The best-first detector keeps
//! a frontier of partial sums, always deepens the branch holding the current
//! global minimum, and stops when that minimum belongs to a fully expanded
//! branch; at that point no other branch can finish below it, so the decision
//! equals ML's. Its weaker variant stops at the first branch to reach full
//! depth and trades optimality for fewer visited nodes.
//!
//! Node accounting: every branch root counts its first level up front (the
//! frontier starts with all MN_t first-level sums), and each deepening visits
//! exactly one new node, so visited = MN_t + expansions.

use alloc::{vec, vec::Vec};

/// Per-node costs of the search tree. `step_cost(n, j)` is the level-n
/// increment of branch j, required finite and non-negative; `levels` and
/// `branches` must both be at least 1.
pub trait MetricProvider {
    fn levels(&self) -> usize;
    fn branches(&self) -> usize;
    fn step_cost(&self, level: usize, branch: usize) -> f64;
}

/// Dense in-memory step-cost table, level-major. Handy for crafted search
/// instances and trace demos.
#[derive(Debug, Clone, PartialEq)]
pub struct TableMetrics {
    levels: usize,
    branches: usize,
    steps: Vec<f64>,
}

impl TableMetrics {
    /// `steps[n][j]` is the level-n increment of branch j. All rows must have
    /// the same length.
    pub fn from_steps(steps: &[Vec<f64>]) -> Self {
        assert!(!steps.is_empty() && !steps[0].is_empty());
        let branches = steps[0].len();
        assert!(steps.iter().all(|row| row.len() == branches));
        TableMetrics {
            levels: steps.len(),
            branches,
            steps: steps.iter().flatten().copied().collect(),
        }
    }
}

impl MetricProvider for TableMetrics {
    fn levels(&self) -> usize {
        self.levels
    }

    fn branches(&self) -> usize {
        self.branches
    }

    fn step_cost(&self, level: usize, branch: usize) -> f64 {
        self.steps[level * self.branches + branch]
    }
}

/// Detection decision plus the work it took.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecodeOutcome {
    /// Flat candidate index of the decision.
    pub index: usize,
    /// Tree nodes whose metric was computed.
    pub visited_nodes: usize,
    /// Full accumulated metric of the decided branch.
    pub final_radius: f64,
}

/// Observer for the best-first search loop. The no-op default keeps the
/// silent decoders free of any bookkeeping cost.
pub trait TraceSink {
    /// `iteration` counts expansions from 1; `level` is the branch's new
    /// depth and `metric` its new accumulated sum.
    fn expand(&mut self, iteration: usize, branch: usize, level: usize, metric: f64) {
        let _ = (iteration, branch, level, metric);
    }

    /// Search ended after `iterations` expansions on `branch` with the given
    /// full metric.
    fn stop(&mut self, iterations: usize, branch: usize, radius: f64) {
        let _ = (iterations, branch, radius);
    }
}

/// The silent sink.
pub struct NoTrace;

impl TraceSink for NoTrace {}

/// Exhaustive maximum-likelihood detection: every branch summed to full
/// depth, lowest index winning ties. Sums run level 0 upward so the totals
/// are bit-identical to the best-first decoders' accumulators.
pub fn ml_decode(metrics: &impl MetricProvider) -> DecodeOutcome {
    let (levels, branches) = dims(metrics);
    let mut best = 0usize;
    let mut best_metric = f64::INFINITY;
    for j in 0..branches {
        let mut sum = 0.0;
        for n in 0..levels {
            sum += metrics.step_cost(n, j);
        }
        if sum < best_metric {
            best = j;
            best_metric = sum;
        }
    }
    DecodeOutcome {
        index: best,
        visited_nodes: levels * branches,
        final_radius: best_metric,
    }
}

/// Best-first search that stops only when the global minimum partial sum sits
/// on a fully expanded branch. Returns the ML decision with the same
/// tie-breaking (lowest index).
pub fn mm_decode(metrics: &impl MetricProvider) -> DecodeOutcome {
    best_first(metrics, false, &mut NoTrace)
}

/// [`mm_decode`] reporting each expansion to `sink`.
pub fn mm_decode_traced(metrics: &impl MetricProvider, sink: &mut impl TraceSink) -> DecodeOutcome {
    best_first(metrics, false, sink)
}

/// Best-first search that stops at the first branch to reach full depth,
/// whether or not it holds the global minimum. Visits at most as many nodes
/// as [`mm_decode`] but may miss the ML decision.
pub fn mmw_decode(metrics: &impl MetricProvider) -> DecodeOutcome {
    best_first(metrics, true, &mut NoTrace)
}

/// [`mmw_decode`] reporting each expansion to `sink`.
pub fn mmw_decode_traced(
    metrics: &impl MetricProvider,
    sink: &mut impl TraceSink,
) -> DecodeOutcome {
    best_first(metrics, true, sink)
}

fn dims(metrics: &impl MetricProvider) -> (usize, usize) {
    let levels = metrics.levels();
    let branches = metrics.branches();
    assert!(levels >= 1 && branches >= 1, "empty metric table");
    (levels, branches)
}

fn best_first(
    metrics: &impl MetricProvider,
    stop_at_first_full: bool,
    sink: &mut impl TraceSink,
) -> DecodeOutcome {
    let (levels, branches) = dims(metrics);
    let mut depth = vec![1usize; branches];
    let mut acc: Vec<f64> = (0..branches).map(|j| metrics.step_cost(0, j)).collect();
    let mut expansions = 0usize;
    loop {
        // Strict < keeps the lowest index on ties, matching ml_decode.
        let mut j_min = 0usize;
        for j in 1..branches {
            if acc[j] < acc[j_min] {
                j_min = j;
            }
        }
        if depth[j_min] == levels {
            // Under the first-full rule this is reachable only when the tree
            // has a single level and no expansion can happen at all.
            sink.stop(expansions, j_min, acc[j_min]);
            return DecodeOutcome {
                index: j_min,
                visited_nodes: branches + expansions,
                final_radius: acc[j_min],
            };
        }
        depth[j_min] += 1;
        expansions += 1;
        acc[j_min] += metrics.step_cost(depth[j_min] - 1, j_min);
        sink.expand(expansions, j_min, depth[j_min], acc[j_min]);
        if stop_at_first_full && depth[j_min] == levels {
            sink.stop(expansions, j_min, acc[j_min]);
            return DecodeOutcome {
                index: j_min,
                visited_nodes: branches + expansions,
                final_radius: acc[j_min],
            };
        }
    }
}

/// Census of the whole tree against a squared radius: the MN_t branch roots
/// plus every node (level, branch) whose accumulated metric is <= `radius`.
/// With the best-first detector's final radius this approximates its visited
/// count without re-running the search.
pub fn count_nodes_within_radius(metrics: &impl MetricProvider, radius: f64) -> usize {
    let (levels, branches) = dims(metrics);
    let mut count = branches;
    for j in 0..branches {
        let mut sum = 0.0;
        for n in 0..levels {
            sum += metrics.step_cost(n, j);
            if sum <= radius {
                count += 1;
            }
        }
    }
    count
}
