//! Building blocks for spatial modulation over flat Rayleigh fading MIMO
//! channels: Gray-labeled QAM alphabets, antenna/symbol bit mapping, channel
//! and receiver-side channel-knowledge models, the exhaustive ML detector and
//! a best-first tree-search detector that reproduces the ML decision at a
//! fraction of the visited search nodes, plus the probabilistic machinery to
//! predict that search cost in closed numeric form.
//!
//! The crate is `no_std`-compatible (`alloc` required); the `std` feature
//! (default) switches float math to the platform libm.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

mod error;

pub mod analysis;
pub mod candidates;
pub mod channel;
pub mod constellation;
pub mod decode;
pub mod frame;
pub mod marcum;
pub mod quad;
mod special;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use analysis::{
    complexity_reduction, expected_complexity, max_complexity_reduction, noncentrality,
    node_visit_prob, rho, zeta2, NoncentralityTable, Scenario, VarianceModel,
};
pub use candidates::{CandidateMetrics, CandidateSet};
pub use channel::{
    apply_csir_error, sample_channel, sample_noise, sm_encode, ChannelMatrix, ChannelPair,
    CsirModel, ReceivedVector,
};
pub use constellation::Constellation;
pub use decode::{
    count_nodes_within_radius, ml_decode, mm_decode, mm_decode_traced, mmw_decode,
    mmw_decode_traced, DecodeOutcome, MetricProvider, NoTrace, TableMetrics, TraceSink,
};
pub use frame::{merge_bits, split_bits, SmFrame};
pub use marcum::{marcum_q, noncentral_chi2_cdf};
pub use quad::{integrate, Quadrature};
