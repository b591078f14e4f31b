//! Gray-labeled rectangular QAM alphabets normalized to unit mean symbol
//! energy.

use alloc::{vec, vec::Vec};
use num_complex::Complex64;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{invalid, Result};

/// A QAM alphabet on a rectangular grid.
///
/// Points are stored in grid order (in-phase axis major). `labels()[p]` is the
/// bit pattern carried by `points()[p]`; grid neighbours differ in exactly one
/// label bit, so a single nearest-neighbour symbol error costs one bit.
/// Symbols are addressed by their label value: `point(s)` returns the point
/// whose label is `s`, which is the mapping the modulator and the candidate
/// enumeration share.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    order: usize,
    points: Vec<Complex64>,
    labels: Vec<u32>,
    position_of_label: Vec<usize>,
}

fn gray(n: usize) -> usize {
    n ^ (n >> 1)
}

impl Constellation {
    /// Builds the order-`order` QAM alphabet. `order` must be a power of two
    /// in `2..=128`. Odd bit counts produce the wide rectangular grid (8-QAM
    /// is 2 levels by 4 levels); order 2 degenerates to the real pair
    /// {+1, -1}.
    pub fn qam(order: usize) -> Result<Self> {
        if !(2..=128).contains(&order) || !order.is_power_of_two() {
            return Err(invalid(alloc::format!(
                "modulation order {order} is not a power of two in 2..=128"
            )));
        }
        let bits = order.trailing_zeros() as usize;
        let bits_i = bits.div_ceil(2);
        let bits_q = bits / 2;
        let k_i = 1usize << bits_i;
        let k_q = 1usize << bits_q;

        // Amplitude levels are the odd integers around zero; a single level
        // sits at zero. Mean level energy per axis is (k^2 - 1) / 3.
        let level = |k: usize, t: usize| (2 * t as i64 - (k as i64 - 1)) as f64;
        let mean_energy =
            ((k_i * k_i - 1) as f64 + (k_q * k_q - 1) as f64) / 3.0;
        let scale = 1.0 / mean_energy.sqrt();

        let mut points = Vec::with_capacity(order);
        let mut labels = Vec::with_capacity(order);
        let mut position_of_label = vec![0usize; order];
        for ii in 0..k_i {
            for qq in 0..k_q {
                let label = ((gray(ii) << bits_q) | gray(qq)) as u32;
                position_of_label[label as usize] = points.len();
                points.push(Complex64::new(
                    level(k_i, ii) * scale,
                    level(k_q, qq) * scale,
                ));
                labels.push(label);
            }
        }
        Ok(Self {
            order,
            points,
            labels,
            position_of_label,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn bits_per_symbol(&self) -> usize {
        self.order.trailing_zeros() as usize
    }

    /// Points in grid order.
    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    /// Bit labels, parallel to `points()`.
    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// The point carrying label value `symbol`.
    pub fn point(&self, symbol: usize) -> Complex64 {
        self.points[self.position_of_label[symbol]]
    }

    /// |point(symbol)|^2.
    pub fn energy(&self, symbol: usize) -> f64 {
        self.point(symbol).norm_sqr()
    }
}
