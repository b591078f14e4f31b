//! Monte Carlo engine. Trials are independent tasks seeded individually, so
//! any parallel schedule produces the same aggregate as a serial run.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use sm_core::{
    apply_csir_error, complexity_reduction, expected_complexity, max_complexity_reduction,
    ml_decode, mm_decode, mmw_decode, sample_channel, sample_noise, sm_encode, CandidateMetrics,
    CandidateSet, ChannelPair, Complex64, Constellation, CsirModel, Scenario, SmFrame,
};

use crate::error::{Result, SimError};
use crate::seed::{derive_rng, STREAM_ANALYTIC, STREAM_TRIAL};

/// Which decoders a run executes. Statistics for decoders left out of the
/// selection read as zero in the aggregates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecoderSelection {
    pub ml: bool,
    pub mm: bool,
    pub mmw: bool,
}

impl DecoderSelection {
    pub fn all() -> Self {
        DecoderSelection {
            ml: true,
            mm: true,
            mmw: true,
        }
    }
}

impl Default for DecoderSelection {
    fn default() -> Self {
        DecoderSelection::all()
    }
}

/// Full description of a sweep. A fixed `base_seed` pins every random draw.
#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub m: usize,
    pub n_t: usize,
    pub n_r: usize,
    pub csir: CsirModel,
    pub snr_db_points: Vec<f64>,
    pub trials: u64,
    pub decoders: DecoderSelection,
    pub base_seed: u64,
    /// Channel draws averaged into the analytic overlay; 0 disables it.
    pub analytic_realizations: u64,
}

impl SweepConfig {
    /// 8x8 with 8-QAM, perfect receiver knowledge, desk-scale trial count.
    pub fn default_scenario() -> Self {
        SweepConfig {
            m: 8,
            n_t: 8,
            n_r: 8,
            csir: CsirModel::Perfect,
            snr_db_points: (0..=30).step_by(5).map(f64::from).collect(),
            trials: 10_000,
            decoders: DecoderSelection::all(),
            base_seed: 1,
            analytic_realizations: 200,
        }
    }

    pub fn scenario_at(&self, snr_db: f64) -> Result<Scenario> {
        Scenario::from_snr_db(self.m, self.n_t, self.n_r, snr_db, self.csir).map_err(Into::into)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(SimError::config("trials must be at least 1"));
        }
        if self.snr_db_points.is_empty() {
            return Err(SimError::config("at least one snr point is required"));
        }
        for &p in &self.snr_db_points {
            if !p.is_finite() {
                return Err(SimError::config(format!("snr point {p} is not finite")));
            }
            self.scenario_at(p)?;
        }
        Ok(())
    }
}

/// Outcome of one channel realization, all decoders fed the identical draw.
#[derive(Clone, Copy, Debug)]
pub struct TrialRecord {
    pub snr_db: f64,
    pub bit_errors_ml: u64,
    pub bit_errors_mm: u64,
    pub bit_errors_mmw: u64,
    pub visited_ml: u64,
    pub visited_mm: u64,
    pub visited_mmw: u64,
    /// Early-terminating variant disagreed with exhaustive search.
    pub nom_flag: bool,
    /// Must be true in every trial; a false value is a defect, not data.
    pub mm_matches_ml: bool,
}

/// Bit errors equal the Hamming distance between candidate indices because
/// the whole bit block maps bijectively onto the index.
fn bit_errors(sent: usize, decoded: usize) -> u64 {
    u64::from((sent ^ decoded).count_ones())
}

pub(crate) struct LinkDraw {
    pub set: CandidateSet,
    pub y: Vec<Complex64>,
    pub sent: usize,
}

/// The draw order (antenna, symbol, channel, estimate error, noise) is part
/// of the reproducibility contract; reordering breaks pinned results.
pub(crate) fn draw_link(
    rng: &mut ChaCha8Rng,
    scenario: &Scenario,
    cons: &Constellation,
) -> Result<LinkDraw> {
    let antenna = rng.random_range(0..scenario.n_t);
    let symbol = rng.random_range(0..scenario.m);
    let frame = SmFrame::new(antenna, symbol, scenario.n_t, scenario.m)?;
    let h = sample_channel(rng, scenario.n_r, scenario.n_t);
    let pair = apply_csir_error(h, scenario.csir, scenario.snr_linear(), rng)?;
    let x = sm_encode(&frame, &pair, cons)?;
    let w = sample_noise(rng, scenario.n_r, scenario.sigma_n2)?;
    let y: Vec<Complex64> = x.iter().zip(&w).map(|(a, b)| a + b).collect();
    let set = CandidateSet::enumerate(&pair, cons);
    Ok(LinkDraw {
        set,
        y,
        sent: frame.candidate_index(scenario.m),
    })
}

pub fn run_trial(
    rng: &mut ChaCha8Rng,
    scenario: &Scenario,
    cons: &Constellation,
    decoders: DecoderSelection,
) -> Result<TrialRecord> {
    let draw = draw_link(rng, scenario, cons)?;
    let metrics = CandidateMetrics::new(&draw.y, &draw.set)?;
    let sent = draw.sent;

    let ml = decoders.ml.then(|| ml_decode(&metrics));
    let mm = decoders.mm.then(|| mm_decode(&metrics));
    let mw = decoders.mmw.then(|| mmw_decode(&metrics));

    let mut rec = TrialRecord {
        snr_db: scenario.snr_db(),
        bit_errors_ml: 0,
        bit_errors_mm: 0,
        bit_errors_mmw: 0,
        visited_ml: 0,
        visited_mm: 0,
        visited_mmw: 0,
        nom_flag: false,
        mm_matches_ml: true,
    };
    if let Some(o) = &ml {
        rec.bit_errors_ml = bit_errors(sent, o.index);
        rec.visited_ml = o.visited_nodes as u64;
    }
    if let Some(o) = &mm {
        rec.bit_errors_mm = bit_errors(sent, o.index);
        rec.visited_mm = o.visited_nodes as u64;
    }
    if let Some(o) = &mw {
        rec.bit_errors_mmw = bit_errors(sent, o.index);
        rec.visited_mmw = o.visited_nodes as u64;
    }
    if let (Some(a), Some(b)) = (&ml, &mm) {
        rec.mm_matches_ml = a.index == b.index;
    }
    if let (Some(a), Some(w)) = (&ml, &mw) {
        rec.nom_flag = w.index != a.index;
    }
    Ok(rec)
}

/// Integer accumulators; the reduction is commutative and associative, so
/// the sweep result is independent of the trial schedule.
#[derive(Clone, Copy, Debug, Default)]
struct PointSums {
    bit_errors_ml: u64,
    bit_errors_mm: u64,
    bit_errors_mmw: u64,
    visited_ml: u64,
    visited_mm: u64,
    visited_mmw: u64,
    nom: u64,
    mm_ml_mismatches: u64,
}

impl PointSums {
    fn from_record(r: &TrialRecord) -> Self {
        PointSums {
            bit_errors_ml: r.bit_errors_ml,
            bit_errors_mm: r.bit_errors_mm,
            bit_errors_mmw: r.bit_errors_mmw,
            visited_ml: r.visited_ml,
            visited_mm: r.visited_mm,
            visited_mmw: r.visited_mmw,
            nom: u64::from(r.nom_flag),
            mm_ml_mismatches: u64::from(!r.mm_matches_ml),
        }
    }

    fn add(self, o: Self) -> Self {
        PointSums {
            bit_errors_ml: self.bit_errors_ml + o.bit_errors_ml,
            bit_errors_mm: self.bit_errors_mm + o.bit_errors_mm,
            bit_errors_mmw: self.bit_errors_mmw + o.bit_errors_mmw,
            visited_ml: self.visited_ml + o.visited_ml,
            visited_mm: self.visited_mm + o.visited_mm,
            visited_mmw: self.visited_mmw + o.visited_mmw,
            nom: self.nom + o.nom,
            mm_ml_mismatches: self.mm_ml_mismatches + o.mm_ml_mismatches,
        }
    }
}

/// Aggregated statistics at one SNR point.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepPoint {
    pub snr_db: f64,
    pub ber_ml: f64,
    pub ber_mm: f64,
    pub ber_mmw: f64,
    pub avg_nodes_ml: f64,
    pub avg_nodes_mm: f64,
    pub avg_nodes_mmw: f64,
    pub c_r_mm: f64,
    pub c_r_mmw: f64,
    pub c_r_max: f64,
    pub nom_count: u64,
    pub mm_ml_mismatches: u64,
    /// None when the overlay is disabled or its integration failed.
    pub analytic_c_mm: Option<f64>,
    pub analytic_error: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub trials: u64,
    pub points: Vec<SweepPoint>,
}

/// Averages the integral predictor over fresh channel and frame draws.
/// Candidates come from the true channel; estimation error enters through
/// the correlation-adjusted variances inside the predictor.
fn analytic_realization(
    rng: &mut ChaCha8Rng,
    scenario: &Scenario,
    cons: &Constellation,
) -> Result<f64> {
    let antenna = rng.random_range(0..scenario.n_t);
    let symbol = rng.random_range(0..scenario.m);
    let frame = SmFrame::new(antenna, symbol, scenario.n_t, scenario.m)?;
    let h = sample_channel(rng, scenario.n_r, scenario.n_t);
    let pair = ChannelPair {
        h_est: h.clone(),
        h_true: h,
        sigma_e2: 0.0,
    };
    let set = CandidateSet::enumerate(&pair, cons);
    let sent = frame.candidate_index(scenario.m);
    let x_t = set.vector(sent).to_vec();
    expected_complexity(scenario, &x_t, cons.energy(symbol), &set).map_err(Into::into)
}

fn analytic_average(
    config: &SweepConfig,
    scenario: &Scenario,
    cons: &Constellation,
    point: u64,
) -> Result<f64> {
    // Order-preserving collect, then a serial sum: float addition is not
    // associative, so reducing in schedule order would break determinism.
    let values: Vec<f64> = (0..config.analytic_realizations)
        .into_par_iter()
        .map(|k| {
            let mut rng = derive_rng(config.base_seed, STREAM_ANALYTIC, point, k);
            analytic_realization(&mut rng, scenario, cons)
        })
        .collect::<Result<_>>()?;
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

pub fn run_sweep(config: &SweepConfig) -> Result<SweepResult> {
    config.validate()?;
    let cons = Constellation::qam(config.m)?;
    let block_bits = {
        let s = config.scenario_at(config.snr_db_points[0])?;
        s.bits_per_block() as u64
    };
    let mut points = Vec::with_capacity(config.snr_db_points.len());
    for (pi, &snr_db) in config.snr_db_points.iter().enumerate() {
        let scenario = config.scenario_at(snr_db)?;
        let sums = (0..config.trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = derive_rng(config.base_seed, STREAM_TRIAL, pi as u64, t);
                run_trial(&mut rng, &scenario, &cons, config.decoders).map(|r| PointSums::from_record(&r))
            })
            .try_reduce(PointSums::default, |a, b| Ok(a.add(b)))?;

        let trials = config.trials as f64;
        let bits = (config.trials * block_bits) as f64;
        let avg_nodes_ml = sums.visited_ml as f64 / trials;
        let avg_nodes_mm = sums.visited_mm as f64 / trials;
        let avg_nodes_mmw = sums.visited_mmw as f64 / trials;
        let (analytic_c_mm, analytic_error) = if config.analytic_realizations == 0 {
            (None, None)
        } else {
            match analytic_average(config, &scenario, &cons, pi as u64) {
                Ok(v) => (Some(v), None),
                Err(SimError::Numeric(msg)) => (None, Some(msg)),
                Err(e) => return Err(e),
            }
        };
        points.push(SweepPoint {
            snr_db,
            ber_ml: sums.bit_errors_ml as f64 / bits,
            ber_mm: sums.bit_errors_mm as f64 / bits,
            ber_mmw: sums.bit_errors_mmw as f64 / bits,
            avg_nodes_ml,
            avg_nodes_mm,
            avg_nodes_mmw,
            c_r_mm: if config.decoders.mm {
                complexity_reduction(avg_nodes_mm, config.m, config.n_t, config.n_r)
            } else {
                0.0
            },
            c_r_mmw: if config.decoders.mmw {
                complexity_reduction(avg_nodes_mmw, config.m, config.n_t, config.n_r)
            } else {
                0.0
            },
            c_r_max: max_complexity_reduction(config.m, config.n_t, config.n_r),
            nom_count: sums.nom,
            mm_ml_mismatches: sums.mm_ml_mismatches,
            analytic_c_mm,
            analytic_error,
        });
    }
    Ok(SweepResult {
        trials: config.trials,
        points,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NomPoint {
    pub snr_db: f64,
    pub nom_count: u64,
    pub trials: u64,
}

/// Counts trials where the early-terminating variant misses the exhaustive
/// winner. Both decoders see the identical draw within each trial; the count
/// is meaningless otherwise.
pub fn nom_study(config: &SweepConfig) -> Result<Vec<NomPoint>> {
    if !(config.decoders.ml && config.decoders.mmw) {
        return Err(SimError::config(
            "the miss study needs both the exhaustive and early-terminating decoders enabled",
        ));
    }
    let mut slim = config.clone();
    slim.analytic_realizations = 0;
    let result = run_sweep(&slim)?;
    Ok(result
        .points
        .iter()
        .map(|p| NomPoint {
            snr_db: p.snr_db,
            nom_count: p.nom_count,
            trials: config.trials,
        })
        .collect())
}

/// Analytic predictions alone, no simulation: expected visited nodes and
/// the implied complexity reduction per SNR point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PredictPoint {
    pub snr_db: f64,
    pub analytic_c_mm: f64,
    pub c_r_analytic: f64,
}

pub fn run_predict(config: &SweepConfig) -> Result<Vec<PredictPoint>> {
    config.validate()?;
    if config.analytic_realizations == 0 {
        return Err(SimError::config(
            "prediction needs analytic_realizations >= 1",
        ));
    }
    let cons = Constellation::qam(config.m)?;
    let mut out = Vec::with_capacity(config.snr_db_points.len());
    for (pi, &snr_db) in config.snr_db_points.iter().enumerate() {
        let scenario = config.scenario_at(snr_db)?;
        let c = analytic_average(config, &scenario, &cons, pi as u64)?;
        out.push(PredictPoint {
            snr_db,
            analytic_c_mm: c,
            c_r_analytic: complexity_reduction(c, config.m, config.n_t, config.n_r),
        });
    }
    Ok(out)
}
