//! The sweep result must be a pure function of its config: independent of
//! thread count, schedule, and which decoders run alongside.

use sm_core::CsirModel;
use sm_sim::csv::write_sweep_csv;
use sm_sim::{nom_study, run_sweep, DecoderSelection, SimError, SweepConfig};

fn small_config() -> SweepConfig {
    SweepConfig {
        m: 4,
        n_t: 4,
        n_r: 4,
        csir: CsirModel::Fixed(0.1),
        snr_db_points: vec![0.0, 12.0],
        trials: 600,
        decoders: DecoderSelection::all(),
        base_seed: 99,
        analytic_realizations: 3,
    }
}

fn run_with_threads(threads: usize, cfg: &SweepConfig) -> String {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap();
    pool.install(|| write_sweep_csv(&run_sweep(cfg).unwrap()))
}

#[test]
fn schedule_does_not_change_results() {
    let cfg = small_config();
    let serial = run_with_threads(1, &cfg);
    let parallel = run_with_threads(4, &cfg);
    let parallel_again = run_with_threads(4, &cfg);
    assert_eq!(serial, parallel);
    assert_eq!(parallel, parallel_again);
}

#[test]
fn decoder_selection_leaves_shared_statistics_alone() {
    let mut cfg = small_config();
    cfg.analytic_realizations = 0;
    let full = run_sweep(&cfg).unwrap();

    // Trial randomness is keyed by (seed, point, trial), so dropping a
    // decoder must not perturb the others' draws.
    cfg.decoders = DecoderSelection {
        ml: true,
        mm: false,
        mmw: true,
    };
    let slim = run_sweep(&cfg).unwrap();
    for (f, s) in full.points.iter().zip(&slim.points) {
        assert_eq!(f.ber_ml, s.ber_ml);
        assert_eq!(f.ber_mmw, s.ber_mmw);
        assert_eq!(f.nom_count, s.nom_count);
        assert_eq!(s.ber_mm, 0.0);
        assert_eq!(s.avg_nodes_mm, 0.0);
        assert_eq!(s.c_r_mm, 0.0);
    }

    let nom = nom_study(&cfg).unwrap();
    for (f, n) in full.points.iter().zip(&nom) {
        assert_eq!(f.nom_count, n.nom_count);
        assert_eq!(n.trials, cfg.trials);
    }
}

#[test]
fn single_trial_sweep_is_the_trial_itself() {
    let mut cfg = small_config();
    cfg.trials = 1;
    cfg.analytic_realizations = 0;
    let result = run_sweep(&cfg).unwrap();
    let block_bits = 4f64; // log2(4) + log2(4)
    for p in &result.points {
        // One trial: every average is that trial's value.
        assert_eq!(p.avg_nodes_ml, 64.0);
        assert_eq!(p.avg_nodes_mm.fract(), 0.0);
        assert!(p.ber_mm * block_bits <= 4.0);
        assert!(p.nom_count <= 1);
        assert_eq!(p.mm_ml_mismatches, 0);
    }
}

#[test]
fn noiseless_limit_reaches_the_structural_floor() {
    let mut cfg = small_config();
    cfg.csir = CsirModel::Perfect;
    cfg.snr_db_points = vec![90.0];
    cfg.trials = 400;
    cfg.analytic_realizations = 0;
    let p = &run_sweep(&cfg).unwrap().points[0];
    assert_eq!(p.ber_ml, 0.0);
    assert_eq!(p.ber_mm, 0.0);
    assert_eq!(p.ber_mmw, 0.0);
    assert_eq!(p.nom_count, 0);
    // Every trial walks one branch straight down: 16 + 4 - 1 nodes.
    assert_eq!(p.avg_nodes_mm, 19.0);
    assert_eq!(p.avg_nodes_ml, 64.0);
}

#[test]
fn exhaustive_agreement_is_total() {
    let cfg = small_config();
    let result = run_sweep(&cfg).unwrap();
    for p in &result.points {
        assert_eq!(p.mm_ml_mismatches, 0);
        assert_eq!(p.ber_mm, p.ber_ml);
    }
}

#[test]
fn estimation_error_degrades_error_rate() {
    let mut clean = small_config();
    clean.csir = CsirModel::Perfect;
    clean.m = 8;
    clean.n_t = 8;
    clean.n_r = 8;
    clean.snr_db_points = vec![8.0];
    clean.trials = 4_000;
    clean.analytic_realizations = 0;
    let mut noisy = clean.clone();
    noisy.csir = CsirModel::Fixed(0.2);
    let b0 = run_sweep(&clean).unwrap().points[0].ber_mm;
    let b2 = run_sweep(&noisy).unwrap().points[0].ber_mm;
    assert!(
        b2 > b0,
        "error rate should grow with estimation error: {b0} vs {b2}"
    );
}

#[test]
fn disabled_overlay_and_bad_configs() {
    let mut cfg = small_config();
    cfg.analytic_realizations = 0;
    let result = run_sweep(&cfg).unwrap();
    assert!(result.points.iter().all(|p| p.analytic_c_mm.is_none()));
    assert!(result.points.iter().all(|p| p.analytic_error.is_none()));

    cfg.trials = 0;
    assert!(matches!(run_sweep(&cfg), Err(SimError::Config(_))));

    let mut cfg = small_config();
    cfg.m = 3;
    assert!(run_sweep(&cfg).is_err());

    let mut cfg = small_config();
    cfg.snr_db_points = vec![f64::NAN];
    assert!(cfg.validate().is_err());

    let mut cfg = small_config();
    cfg.decoders.mmw = false;
    assert!(nom_study(&cfg).is_err());
}

#[test]
fn analytic_overlay_is_seed_stable_and_plausible() {
    let mut cfg = small_config();
    cfg.csir = CsirModel::Perfect;
    cfg.snr_db_points = vec![25.0];
    cfg.trials = 2_000;
    cfg.analytic_realizations = 40;
    let a = run_sweep(&cfg).unwrap().points[0].clone();
    let b = run_sweep(&cfg).unwrap().points[0].clone();
    let (av, bv) = (a.analytic_c_mm.unwrap(), b.analytic_c_mm.unwrap());
    assert_eq!(av.to_bits(), bv.to_bits());
    // 4x4 with 4-QAM at high SNR sits near its floor of 19 visited nodes.
    let rel = (av - a.avg_nodes_mm).abs() / a.avg_nodes_mm;
    assert!(rel < 0.05, "analytic {av} vs simulated {}", a.avg_nodes_mm);
}
