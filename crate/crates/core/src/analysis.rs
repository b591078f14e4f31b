//! Probabilistic prediction of the best-first detector's search cost.
//!
//! For a fixed channel realization and transmitted vector, the chance that
//! the search expands candidate branch j past level i is the chance that the
//! branch's partial distance stays inside the final search radius. The
//! partial distance is noncentral chi-squared distributed around the
//! branch-to-truth gap, the radius is central chi-squared around the noise
//! floor, and the visit probability is the expectation of one CDF over the
//! other's density. Channel-estimation error at the receiver enters through
//! inflated per-branch variances rather than through the candidate geometry.

use alloc::vec::Vec;
use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::candidates::CandidateSet;
use crate::channel::CsirModel;
use crate::error::{invalid, Result};
use crate::marcum::marcum_q;
use crate::quad;
use crate::special::{gamma_q, ln_gamma};

/// Quadrature tolerance for each visit-probability integral.
const VISIT_PROB_TOL: f64 = 1e-9;

/// Radius-density tail mass discarded by truncating the integration domain.
const RADIUS_TAIL: f64 = 1e-16;

/// Visit probabilities below this are reported as exactly zero.
const NEGLIGIBLE_PROB: f64 = 1e-13;

/// One operating point: link dimensions, noise level, and the receiver's
/// channel-knowledge model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scenario {
    pub m: usize,
    pub n_t: usize,
    pub n_r: usize,
    pub sigma_n2: f64,
    pub csir: CsirModel,
}

impl Scenario {
    pub fn new(m: usize, n_t: usize, n_r: usize, sigma_n2: f64, csir: CsirModel) -> Result<Self> {
        if !m.is_power_of_two() || !(2..=128).contains(&m) {
            return Err(invalid("modulation order must be a power of two in 2..=128"));
        }
        if !n_t.is_power_of_two() {
            return Err(invalid("transmit antenna count must be a power of two"));
        }
        if n_r == 0 {
            return Err(invalid("receive antenna count must be positive"));
        }
        if !(sigma_n2.is_finite() && sigma_n2 > 0.0) {
            return Err(invalid("noise variance must be positive and finite"));
        }
        if let CsirModel::Fixed(e) = csir {
            if !(e.is_finite() && e >= 0.0) {
                return Err(invalid("estimation error variance must be nonnegative and finite"));
            }
        }
        Ok(Self { m, n_t, n_r, sigma_n2, csir })
    }

    /// Same as [`Scenario::new`] with the noise level given as an SNR in dB
    /// (symbol energy is unity, so sigma_n2 = 10^(-snr/10)).
    pub fn from_snr_db(m: usize, n_t: usize, n_r: usize, snr_db: f64, csir: CsirModel) -> Result<Self> {
        if !snr_db.is_finite() {
            return Err(invalid("snr must be finite"));
        }
        Self::new(m, n_t, n_r, 10f64.powf(-snr_db / 10.0), csir)
    }

    pub fn snr_linear(&self) -> f64 {
        1.0 / self.sigma_n2
    }

    pub fn snr_db(&self) -> f64 {
        -10.0 * self.sigma_n2.log10()
    }

    /// Receiver-side channel estimation error variance at this noise level.
    pub fn sigma_e2(&self) -> Result<f64> {
        self.csir.error_variance(self.snr_linear())
    }

    /// Number of search branches, M * N_t.
    pub fn candidate_count(&self) -> usize {
        self.m * self.n_t
    }

    pub fn bits_per_block(&self) -> u32 {
        self.n_t.trailing_zeros() + self.m.trailing_zeros()
    }
}

/// Cumulative squared gap between a candidate branch and the noiseless
/// received vector, through level `i` (1-based).
pub fn noncentrality(x_t: &[Complex64], x_j: &[Complex64], i: usize) -> f64 {
    assert_eq!(x_t.len(), x_j.len(), "vectors must have equal length");
    assert!(i >= 1 && i <= x_t.len(), "level out of range");
    x_t[..i].iter().zip(&x_j[..i]).map(|(t, c)| (t - c).norm_sqr()).sum()
}

/// Correlation between the true channel and its receiver-side estimate,
/// 1/sqrt(1 + sigma_e2).
pub fn rho(sigma_e2: f64) -> Result<f64> {
    if !(sigma_e2.is_finite() && sigma_e2 >= 0.0) {
        return Err(invalid("estimation error variance must be nonnegative and finite"));
    }
    Ok(1.0 / (1.0 + sigma_e2).sqrt())
}

/// Per-dimension variance of a received-sample residual against a candidate
/// carrying `symbol_energy`: sigma_n2 + (1 - rho^2) * symbol_energy.
pub fn zeta2(sigma_n2: f64, rho: f64, symbol_energy: f64) -> f64 {
    assert!(sigma_n2 >= 0.0 && symbol_energy >= 0.0, "variances must be nonnegative");
    assert!(rho > 0.0 && rho <= 1.0, "correlation must lie in (0, 1]");
    sigma_n2 + (1.0 - rho * rho) * symbol_energy
}

/// Cumulative branch-to-truth gaps for every candidate and level, frozen for
/// one (noiseless received vector, candidate set) pair.
#[derive(Clone, Debug)]
pub struct NoncentralityTable {
    n_r: usize,
    count: usize,
    data: Vec<f64>,
}

impl NoncentralityTable {
    pub fn build(x_t: &[Complex64], set: &CandidateSet) -> Result<Self> {
        if x_t.len() != set.n_r() {
            return Err(invalid("noiseless received vector length must match candidate length"));
        }
        let n_r = set.n_r();
        let mut data = Vec::with_capacity(n_r * set.count());
        for j in 0..set.count() {
            let x_j = set.vector(j);
            let mut acc = 0.0;
            for n in 0..n_r {
                acc += (x_t[n] - x_j[n]).norm_sqr();
                data.push(acc);
            }
        }
        Ok(Self { n_r, count: set.count(), data })
    }

    /// Gap through level `i` (1-based) for candidate `j`.
    pub fn gamma2(&self, i: usize, j: usize) -> f64 {
        assert!(i >= 1 && i <= self.n_r, "level out of range");
        assert!(j < self.count, "candidate index out of range");
        self.data[j * self.n_r + (i - 1)]
    }

    pub fn levels(&self) -> usize {
        self.n_r
    }

    pub fn candidates(&self) -> usize {
        self.count
    }
}

/// Residual variances for one operating point: one per candidate branch plus
/// the transmitted branch's, all sharing a single channel-estimate
/// correlation.
#[derive(Clone, Debug)]
pub struct VarianceModel {
    rho: f64,
    zeta2_j: Vec<f64>,
    zeta2_t: f64,
}

impl VarianceModel {
    pub fn build(
        sigma_n2: f64,
        sigma_e2: f64,
        set: &CandidateSet,
        transmitted_energy: f64,
    ) -> Result<Self> {
        if !(sigma_n2.is_finite() && sigma_n2 > 0.0) {
            return Err(invalid("noise variance must be positive and finite"));
        }
        if !(transmitted_energy.is_finite() && transmitted_energy >= 0.0) {
            return Err(invalid("transmitted symbol energy must be nonnegative and finite"));
        }
        let rho = rho(sigma_e2)?;
        let zeta2_j = (0..set.count())
            .map(|j| zeta2(sigma_n2, rho, set.symbol_energy(j)))
            .collect();
        Ok(Self { rho, zeta2_j, zeta2_t: zeta2(sigma_n2, rho, transmitted_energy) })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn zeta2_j(&self, j: usize) -> f64 {
        self.zeta2_j[j]
    }

    pub fn zeta2_t(&self) -> f64 {
        self.zeta2_t
    }
}

/// Smallest u with the Gamma(shape) upper tail below RADIUS_TAIL, coarsely.
fn radius_cutoff(shape: f64) -> f64 {
    let mut u = shape + 40.0 + 9.0 * shape.sqrt();
    while gamma_q(shape, u) >= RADIUS_TAIL {
        u *= 1.25;
    }
    u
}

/// Probability that the search keeps a branch with cumulative gap `gamma2`
/// alive through level `i` of `n_r`: the chance its partial distance lands
/// inside the final search radius.
///
/// Evaluated as an adaptive-quadrature expectation of the noncentral
/// chi-squared CDF (variance `zeta2_j` per dimension, 2i dimensions) over the
/// radius density (central chi-squared, variance `zeta2_t` per dimension,
/// 2 n_r dimensions), to absolute tolerance 1e-9.
pub fn node_visit_prob(gamma2: f64, zeta2_j: f64, zeta2_t: f64, i: usize, n_r: usize) -> Result<f64> {
    if !(gamma2.is_finite() && gamma2 >= 0.0) {
        return Err(invalid("noncentrality must be nonnegative and finite"));
    }
    if !(zeta2_j.is_finite() && zeta2_j > 0.0 && zeta2_t.is_finite() && zeta2_t > 0.0) {
        return Err(invalid("variances must be positive and finite"));
    }
    if i < 1 || i > n_r || n_r > u32::MAX as usize {
        return Err(invalid("level must satisfy 1 <= i <= n_r"));
    }

    let order = i as u32;
    let a = (2.0 * gamma2 / zeta2_j).sqrt();
    let shape = n_r as f64;
    let r_max = zeta2_t * radius_cutoff(shape);

    // The CDF grows with the radius, so its value at the truncation point
    // bounds the whole integral.
    if 1.0 - marcum_q(order, a, (2.0 * r_max / zeta2_j).sqrt()) < NEGLIGIBLE_PROB {
        return Ok(0.0);
    }

    let ln_norm = ln_gamma(shape) + shape * zeta2_t.ln();
    let integrand = |r: f64| {
        if r <= 0.0 {
            return 0.0;
        }
        let pdf = ((shape - 1.0) * r.ln() - r / zeta2_t - ln_norm).exp();
        let cdf = 1.0 - marcum_q(order, a, (2.0 * r / zeta2_j).sqrt());
        cdf * pdf
    };
    let q = quad::integrate(integrand, 0.0, r_max, VISIT_PROB_TOL)?;
    Ok(q.value.clamp(0.0, 1.0))
}

/// Predicted mean number of nodes the best-first search visits for one
/// channel realization: the M N_t seed nodes plus one visit probability per
/// candidate and level.
///
/// `x_t` is the noiseless received vector and `transmitted_energy` the
/// transmitted symbol's energy; `candidates` must be built from the true
/// channel, since estimation error is modeled in the variances instead.
pub fn expected_complexity(
    scenario: &Scenario,
    x_t: &[Complex64],
    transmitted_energy: f64,
    candidates: &CandidateSet,
) -> Result<f64> {
    if candidates.n_r() != scenario.n_r || x_t.len() != scenario.n_r {
        return Err(invalid("receive dimension mismatch"));
    }
    if candidates.count() != scenario.candidate_count()
        || candidates.modulation_order() != scenario.m
    {
        return Err(invalid("candidate set does not match the scenario dimensions"));
    }
    let vm = VarianceModel::build(
        scenario.sigma_n2,
        scenario.sigma_e2()?,
        candidates,
        transmitted_energy,
    )?;
    let table = NoncentralityTable::build(x_t, candidates)?;
    let mut total = scenario.candidate_count() as f64;
    for j in 0..candidates.count() {
        let z_j = vm.zeta2_j(j);
        for i in 1..=scenario.n_r {
            total += node_visit_prob(table.gamma2(i, j), z_j, vm.zeta2_t(), i, scenario.n_r)?;
        }
    }
    Ok(total)
}

/// Fraction of the exhaustive detector's node visits saved by a detector
/// that visits `c` nodes on average.
pub fn complexity_reduction(c: f64, m: usize, n_t: usize, n_r: usize) -> f64 {
    let full = (m * n_t * n_r) as f64;
    debug_assert!(c >= 0.0 && c <= full, "complexity outside [0, M N_t N_r]");
    1.0 - c / full
}

/// Reduction achieved by the cheapest conceivable exact search, which seeds
/// M N_t nodes and expands only the winner: 1 - (N_r + M N_t - 1)/(M N_t N_r).
pub fn max_complexity_reduction(m: usize, n_t: usize, n_r: usize) -> f64 {
    let mnt = (m * n_t) as f64;
    let n_r = n_r as f64;
    1.0 - (n_r + mnt - 1.0) / (mnt * n_r)
}
