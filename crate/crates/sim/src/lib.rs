//! Reproducible Monte Carlo harness and CLI plumbing for spatial modulation
//! link simulation: per-SNR sweeps, analytic complexity overlays, miss
//! counting for the early-terminating decoder, and CSV emission.

pub mod config;
pub mod csv;
pub mod error;
pub mod harness;
pub mod seed;
pub mod trace;

pub use error::{Result, SimError};
pub use harness::{
    nom_study, run_predict, run_sweep, run_trial, DecoderSelection, NomPoint, PredictPoint,
    SweepConfig, SweepPoint, SweepResult, TrialRecord,
};
