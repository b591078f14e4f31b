//! Mapping between an information bit block and the (antenna, symbol) pair it
//! selects.
//!
//! A block carries log2(N_t) + log2(M) bits, MSB first: the leading bits pick
//! the active transmit antenna, the rest pick the constellation symbol. Read
//! as one natural-binary integer, the whole block equals the flat candidate
//! index `antenna * M + symbol`, so the bit distance between two candidate
//! indices is their XOR popcount.

use alloc::{vec, vec::Vec};

use crate::error::{invalid, Result};

fn log2_exact(value: usize, what: &str) -> Result<usize> {
    if value == 0 || !value.is_power_of_two() {
        return Err(invalid(alloc::format!(
            "{what} must be a positive power of two, got {value}"
        )));
    }
    Ok(value.trailing_zeros() as usize)
}

/// Splits an MSB-first bit block into (antenna, symbol) indices.
pub fn split_bits(bits: &[u8], n_t: usize, m: usize) -> Result<(usize, usize)> {
    let antenna_bits = log2_exact(n_t, "n_t")?;
    let symbol_bits = log2_exact(m, "m")?;
    if bits.len() != antenna_bits + symbol_bits {
        return Err(invalid(alloc::format!(
            "expected {} bits for n_t={n_t}, m={m}, got {}",
            antenna_bits + symbol_bits,
            bits.len()
        )));
    }
    let mut value = 0usize;
    for &b in bits {
        if b > 1 {
            return Err(invalid(alloc::format!("bit value {b} is not 0 or 1")));
        }
        value = (value << 1) | b as usize;
    }
    Ok((value >> symbol_bits, value & (m - 1)))
}

/// Inverse of [`split_bits`]: emits the MSB-first block selecting
/// (antenna, symbol).
pub fn merge_bits(antenna: usize, symbol: usize, n_t: usize, m: usize) -> Result<Vec<u8>> {
    let antenna_bits = log2_exact(n_t, "n_t")?;
    let symbol_bits = log2_exact(m, "m")?;
    if antenna >= n_t {
        return Err(invalid(alloc::format!("antenna {antenna} out of 0..{n_t}")));
    }
    if symbol >= m {
        return Err(invalid(alloc::format!("symbol {symbol} out of 0..{m}")));
    }
    let total = antenna_bits + symbol_bits;
    let value = (antenna << symbol_bits) | symbol;
    let mut bits = vec![0u8; total];
    for (i, slot) in bits.iter_mut().enumerate() {
        *slot = ((value >> (total - 1 - i)) & 1) as u8;
    }
    Ok(bits)
}

/// One modulated block: the chosen antenna, the chosen symbol label, and the
/// bits that chose them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmFrame {
    pub antenna: usize,
    pub symbol: usize,
    pub bits: Vec<u8>,
}

impl SmFrame {
    pub fn new(antenna: usize, symbol: usize, n_t: usize, m: usize) -> Result<Self> {
        let bits = merge_bits(antenna, symbol, n_t, m)?;
        Ok(Self {
            antenna,
            symbol,
            bits,
        })
    }

    pub fn from_bits(bits: &[u8], n_t: usize, m: usize) -> Result<Self> {
        let (antenna, symbol) = split_bits(bits, n_t, m)?;
        Ok(Self {
            antenna,
            symbol,
            bits: bits.to_vec(),
        })
    }

    /// Flat candidate index `antenna * m + symbol`.
    pub fn candidate_index(&self, m: usize) -> usize {
        self.antenna * m + self.symbol
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_msb_first() {
        // 4 antennas, 4 symbols: 1011 -> antenna 10b = 2, symbol 11b = 3.
        assert_eq!(split_bits(&[1, 0, 1, 1], 4, 4).unwrap(), (2, 3));
        assert_eq!(split_bits(&[0, 0, 0, 0], 4, 4).unwrap(), (0, 0));
        // No antenna bits when n_t = 1.
        assert_eq!(split_bits(&[1, 0], 1, 4).unwrap(), (0, 2));
    }

    #[test]
    fn round_trips_exhaustively() {
        for n_t in [1usize, 2, 4, 8, 16, 32, 64] {
            for m in [2usize, 4, 8, 16, 32, 64, 128] {
                if n_t * m > 1 << 12 {
                    continue;
                }
                for a in 0..n_t {
                    for s in 0..m {
                        let bits = merge_bits(a, s, n_t, m).unwrap();
                        assert_eq!(bits.len(), (n_t * m).trailing_zeros() as usize);
                        assert_eq!(split_bits(&bits, n_t, m).unwrap(), (a, s));
                        let frame = SmFrame::from_bits(&bits, n_t, m).unwrap();
                        assert_eq!((frame.antenna, frame.symbol), (a, s));
                        assert_eq!(frame.candidate_index(m), a * m + s);
                        assert_eq!(SmFrame::new(a, s, n_t, m).unwrap(), frame);
                    }
                }
            }
        }
    }

    #[test]
    fn block_value_equals_candidate_index() {
        let (n_t, m) = (8, 8);
        for a in 0..n_t {
            for s in 0..m {
                let bits = merge_bits(a, s, n_t, m).unwrap();
                let value = bits.iter().fold(0usize, |v, &b| (v << 1) | b as usize);
                assert_eq!(value, a * m + s);
            }
        }
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(split_bits(&[1, 1, 1], 4, 4).is_err());
        assert!(split_bits(&[0, 2, 0, 0], 4, 4).is_err());
        assert!(split_bits(&[1, 0, 1, 1], 3, 4).is_err());
        assert!(merge_bits(4, 0, 4, 4).is_err());
        assert!(merge_bits(0, 4, 4, 4).is_err());
        assert!(merge_bits(0, 0, 0, 4).is_err());
    }
}
