//! Bernoulli bit source and Gray-mapped QPSK.
//!
//! | bits | symbol       |
//! |------|--------------|
//! | 00   | (+1 + j)/√2  |
//! | 01   | (−1 + j)/√2  |
//! | 11   | (−1 − j)/√2  |
//! | 10   | (+1 − j)/√2  |
//!
//! The table order is the Gray index (quadrants I to IV). The first bit of
//! a pair selects the sign of the imaginary part, the second the sign of
//! the real part.

use crate::numerics::{Complex, RngStream};
use crate::{Error, Result};
use std::f64::consts::FRAC_1_SQRT_2;
use std::ops::Deref;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BitBlock(pub Vec<u8>);

impl Deref for BitBlock {
    type Target = [u8];

    fn deref(&self) -> &[u8] {
        &self.0
    }
}

impl BitBlock {
    /// Number of positions where `self` and `other` differ.
    pub fn hamming_distance(&self, other: &BitBlock) -> usize {
        assert_eq!(self.len(), other.len(), "bit blocks differ in length");
        self.iter()
            .zip(other.iter())
            .filter(|(a, b)| a != b)
            .count()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SymbolBlock(pub Vec<Complex>);

impl Deref for SymbolBlock {
    type Target = [Complex];

    fn deref(&self) -> &[Complex] {
        &self.0
    }
}

/// Constellation in Gray-index order.
pub const QPSK: [Complex; 4] = [
    Complex::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2),
    Complex::new(-FRAC_1_SQRT_2, FRAC_1_SQRT_2),
    Complex::new(-FRAC_1_SQRT_2, -FRAC_1_SQRT_2),
    Complex::new(FRAC_1_SQRT_2, -FRAC_1_SQRT_2),
];

/// Bit pairs in Gray-index order.
pub const QPSK_BITS: [[u8; 2]; 4] = [[0, 0], [0, 1], [1, 1], [1, 0]];

pub fn qpsk_constellation() -> SymbolBlock {
    SymbolBlock(QPSK.to_vec())
}

/// `n` i.i.d. bits with `P(1) = p_one`.
pub fn bernoulli_bits(n: usize, p_one: f64, rng: &mut RngStream) -> Result<BitBlock> {
    if !(0.0..=1.0).contains(&p_one) {
        return Err(Error::Domain(format!(
            "p_one must lie in [0, 1], got {p_one}"
        )));
    }
    Ok(BitBlock(
        (0..n).map(|_| u8::from(rng.uniform() < p_one)).collect(),
    ))
}

fn gray_index(b0: u8, b1: u8) -> usize {
    match (b0, b1) {
        (0, 0) => 0,
        (0, 1) => 1,
        (1, 1) => 2,
        (1, 0) => 3,
        _ => panic!("bits must be 0 or 1, got ({b0}, {b1})"),
    }
}

pub fn qpsk_modulate(bits: &BitBlock) -> Result<SymbolBlock> {
    if !bits.len().is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "QPSK needs an even number of bits, got {}",
            bits.len()
        )));
    }
    Ok(SymbolBlock(
        bits.chunks_exact(2)
            .map(|p| QPSK[gray_index(p[0], p[1])])
            .collect(),
    ))
}

/// Gray index of the constellation point nearest to `z`.
///
/// Decision regions are the quadrants. On a tie (a zero coordinate) the
/// candidate with the smaller Gray index wins, so the positive imaginary
/// half-axis maps to 00, the negative one to 11, both real half-axes to the
/// upper-half-plane point, and the origin to 00.
pub fn qpsk_slice(z: Complex) -> usize {
    let (re, im) = (z.re, z.im);
    if im > 0.0 {
        if re >= 0.0 {
            0
        } else {
            1
        }
    } else if im < 0.0 {
        if re > 0.0 {
            3
        } else {
            2
        }
    } else if re >= 0.0 {
        0
    } else {
        1
    }
}

pub fn qpsk_demodulate(symbols: &[Complex]) -> BitBlock {
    BitBlock(
        symbols
            .iter()
            .flat_map(|&z| QPSK_BITS[qpsk_slice(z)])
            .collect(),
    )
}
