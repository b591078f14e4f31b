//! Receiver-side enumeration of every (antenna, symbol) hypothesis.

use alloc::{vec::Vec};
use num_complex::Complex64;

use crate::channel::ChannelPair;
use crate::constellation::Constellation;
use crate::decode::MetricProvider;
use crate::error::{invalid, Result};

/// All MN_t candidate receive images x_j, built from the receiver's channel
/// estimate. Candidate j = antenna * M + symbol covers antenna j / M carrying
/// symbol label j mod M; its vector is the estimated column scaled by the
/// symbol point.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSet {
    n_r: usize,
    order: usize,
    data: Vec<Complex64>,
    symbol_energy: Vec<f64>,
}

impl CandidateSet {
    pub fn enumerate(channel: &ChannelPair, constellation: &Constellation) -> Self {
        let h = &channel.h_est;
        let n_r = h.rows();
        let order = constellation.order();
        let mut data = Vec::with_capacity(n_r * order * h.cols());
        for a in 0..h.cols() {
            let col = h.column(a);
            for q in 0..order {
                let s = constellation.point(q);
                data.extend(col.iter().map(|&hv| hv * s));
            }
        }
        let symbol_energy = (0..order).map(|q| constellation.energy(q)).collect();
        CandidateSet {
            n_r,
            order,
            data,
            symbol_energy,
        }
    }

    pub fn count(&self) -> usize {
        self.data.len() / self.n_r
    }

    pub fn n_r(&self) -> usize {
        self.n_r
    }

    pub fn modulation_order(&self) -> usize {
        self.order
    }

    pub fn vector(&self, j: usize) -> &[Complex64] {
        &self.data[j * self.n_r..(j + 1) * self.n_r]
    }

    pub fn antenna_of(&self, j: usize) -> usize {
        j / self.order
    }

    pub fn symbol_of(&self, j: usize) -> usize {
        j % self.order
    }

    /// |s|^2 of the symbol candidate j carries.
    pub fn symbol_energy(&self, j: usize) -> f64 {
        self.symbol_energy[j % self.order]
    }
}

/// Search-tree costs of an observation against a candidate set:
/// `step_cost(n, j) = |y_n - x_{n,j}|^2`.
#[derive(Debug, Clone, Copy)]
pub struct CandidateMetrics<'a> {
    y: &'a [Complex64],
    set: &'a CandidateSet,
}

impl<'a> CandidateMetrics<'a> {
    pub fn new(y: &'a [Complex64], set: &'a CandidateSet) -> Result<Self> {
        if y.len() != set.n_r() {
            return Err(invalid(alloc::format!(
                "observation length {} vs {} receive antennas",
                y.len(),
                set.n_r()
            )));
        }
        Ok(CandidateMetrics { y, set })
    }
}

impl MetricProvider for CandidateMetrics<'_> {
    fn levels(&self) -> usize {
        self.set.n_r()
    }

    fn branches(&self) -> usize {
        self.set.count()
    }

    fn step_cost(&self, level: usize, branch: usize) -> f64 {
        (self.y[level] - self.set.data[branch * self.set.n_r + level]).norm_sqr()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{apply_csir_error, sample_channel, CsirModel};
    use crate::frame::SmFrame;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn enumerates_all_hypotheses_in_index_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let h = sample_channel(&mut rng, 3, 4);
        let pair = apply_csir_error(h, CsirModel::Perfect, 1.0, &mut rng).unwrap();
        let c = Constellation::qam(8).unwrap();
        let set = CandidateSet::enumerate(&pair, &c);
        assert_eq!(set.count(), 32);
        assert_eq!(set.n_r(), 3);
        for j in 0..set.count() {
            let (a, q) = (set.antenna_of(j), set.symbol_of(j));
            assert_eq!(j, a * 8 + q);
            for n in 0..3 {
                assert_eq!(set.vector(j)[n], pair.h_est.get(n, a) * c.point(q));
            }
            assert_eq!(set.symbol_energy(j), c.energy(q));
        }
    }

    #[test]
    fn transmitted_candidate_matches_encoder_under_perfect_knowledge() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let h = sample_channel(&mut rng, 4, 4);
        let pair = apply_csir_error(h, CsirModel::Perfect, 1.0, &mut rng).unwrap();
        let c = Constellation::qam(4).unwrap();
        let set = CandidateSet::enumerate(&pair, &c);
        for a in 0..4 {
            for q in 0..4 {
                let frame = SmFrame::new(a, q, 4, 4).unwrap();
                let x = crate::channel::sm_encode(&frame, &pair, &c).unwrap();
                assert_eq!(set.vector(frame.candidate_index(4)), &x[..]);
            }
        }
    }

    #[test]
    fn metric_is_squared_distance_and_checks_length() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let h = sample_channel(&mut rng, 2, 2);
        let pair = apply_csir_error(h, CsirModel::Perfect, 1.0, &mut rng).unwrap();
        let c = Constellation::qam(2).unwrap();
        let set = CandidateSet::enumerate(&pair, &c);
        let y = [Complex64::new(0.3, -0.2), Complex64::new(-1.0, 0.4)];
        let m = CandidateMetrics::new(&y, &set).unwrap();
        assert_eq!(m.levels(), 2);
        assert_eq!(m.branches(), 4);
        for j in 0..4 {
            for n in 0..2 {
                let d = y[n] - set.vector(j)[n];
                assert_eq!(m.step_cost(n, j), d.norm_sqr());
            }
        }
        assert!(CandidateMetrics::new(&y[..1], &set).is_err());
    }
}
