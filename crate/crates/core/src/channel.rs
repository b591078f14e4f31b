//! Flat Rayleigh fading channel, receiver noise, and the receiver's channel
//! knowledge model.

use alloc::{vec, vec::Vec};
use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::constellation::Constellation;
use crate::error::{invalid, Result};
use crate::frame::SmFrame;

/// Complex channel matrix, stored column-major so the per-antenna response
/// `column(a)` is a contiguous slice.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ChannelMatrix {
    pub fn from_columns(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(invalid(alloc::format!(
                "matrix data length {} does not fill {rows} x {cols}",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Response of transmit antenna `c` across all receive antennas.
    pub fn column(&self, c: usize) -> &[Complex64] {
        &self.data[c * self.rows..(c + 1) * self.rows]
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[c * self.rows + r]
    }
}

/// What the receiver knows about the channel.
///
/// `Fixed` adds an estimation error of the given variance per entry;
/// `Variable` ties that variance to 1/snr so the estimate improves with the
/// operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CsirModel {
    Perfect,
    Fixed(f64),
    Variable,
}

impl CsirModel {
    /// Estimation error variance at the given linear SNR.
    pub fn error_variance(&self, snr_linear: f64) -> Result<f64> {
        match *self {
            CsirModel::Perfect => Ok(0.0),
            CsirModel::Fixed(v) => {
                if !v.is_finite() || v < 0.0 {
                    Err(invalid(alloc::format!("error variance {v} must be finite and >= 0")))
                } else {
                    Ok(v)
                }
            }
            CsirModel::Variable => {
                if !snr_linear.is_finite() || snr_linear <= 0.0 {
                    Err(invalid(alloc::format!(
                        "variable channel knowledge needs snr > 0, got {snr_linear}"
                    )))
                } else {
                    Ok(1.0 / snr_linear)
                }
            }
        }
    }
}

/// True channel next to the receiver's estimate of it.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelPair {
    pub h_true: ChannelMatrix,
    pub h_est: ChannelMatrix,
    pub sigma_e2: f64,
}

fn circular_gaussian(rng: &mut impl Rng, variance: f64) -> Complex64 {
    let s = (0.5 * variance).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(s * re, s * im)
}

/// Draws an n_r x n_t channel with iid unit-variance circular complex
/// Gaussian entries, column by column.
pub fn sample_channel(rng: &mut impl Rng, n_r: usize, n_t: usize) -> ChannelMatrix {
    assert!(n_r > 0 && n_t > 0, "channel dimensions must be positive");
    let data = (0..n_r * n_t)
        .map(|_| circular_gaussian(rng, 1.0))
        .collect();
    ChannelMatrix {
        rows: n_r,
        cols: n_t,
        data,
    }
}

/// Draws a length-n_r circular complex Gaussian noise vector with per-entry
/// variance `sigma_n2`. Zero variance gives the zero vector without touching
/// the generator.
pub fn sample_noise(rng: &mut impl Rng, n_r: usize, sigma_n2: f64) -> Result<Vec<Complex64>> {
    if !sigma_n2.is_finite() || sigma_n2 < 0.0 {
        return Err(invalid(alloc::format!(
            "noise variance {sigma_n2} must be finite and >= 0"
        )));
    }
    if sigma_n2 == 0.0 {
        return Ok(vec![Complex64::new(0.0, 0.0); n_r]);
    }
    Ok((0..n_r).map(|_| circular_gaussian(rng, sigma_n2)).collect())
}

/// Attaches the receiver's channel estimate to a true channel draw. The
/// estimation error is drawn independently of everything else; with zero
/// error variance the estimate is the true channel, exactly.
pub fn apply_csir_error(
    h_true: ChannelMatrix,
    model: CsirModel,
    snr_linear: f64,
    rng: &mut impl Rng,
) -> Result<ChannelPair> {
    let sigma_e2 = model.error_variance(snr_linear)?;
    let h_est = if sigma_e2 == 0.0 {
        h_true.clone()
    } else {
        let data = h_true
            .data
            .iter()
            .map(|&h| h + circular_gaussian(rng, sigma_e2))
            .collect();
        ChannelMatrix {
            rows: h_true.rows,
            cols: h_true.cols,
            data,
        }
    };
    Ok(ChannelPair {
        h_true,
        h_est,
        sigma_e2,
    })
}

/// Noiseless transmit image of a frame: the true-channel column of the chosen
/// antenna scaled by the chosen symbol.
pub fn sm_encode(
    frame: &SmFrame,
    channel: &ChannelPair,
    constellation: &Constellation,
) -> Result<Vec<Complex64>> {
    if frame.antenna >= channel.h_true.cols() {
        return Err(invalid(alloc::format!(
            "antenna {} out of 0..{}",
            frame.antenna,
            channel.h_true.cols()
        )));
    }
    if frame.symbol >= constellation.order() {
        return Err(invalid(alloc::format!(
            "symbol {} out of 0..{}",
            frame.symbol,
            constellation.order()
        )));
    }
    let s = constellation.point(frame.symbol);
    Ok(channel
        .h_true
        .column(frame.antenna)
        .iter()
        .map(|&h| h * s)
        .collect())
}

/// What the receiver observes, along with the noise variance it assumes.
#[derive(Debug, Clone, PartialEq)]
pub struct ReceivedVector {
    pub y: Vec<Complex64>,
    pub sigma_n2: f64,
}

impl ReceivedVector {
    /// y = x + w.
    pub fn observe(x: &[Complex64], w: &[Complex64], sigma_n2: f64) -> Result<Self> {
        if x.len() != w.len() {
            return Err(invalid(alloc::format!(
                "signal length {} vs noise length {}",
                x.len(),
                w.len()
            )));
        }
        Ok(Self {
            y: x.iter().zip(w).map(|(&a, &b)| a + b).collect(),
            sigma_n2,
        })
    }
}
