//! Link-level MIMO simulator.
//!
//! The transmit chain is a Bernoulli bit source, a Gray-mapped QPSK
//! modulator and an orthogonal space-time block encoder. The channel is a
//! frequency-flat N_r×N_t matrix process built from sum-of-sinusoids
//! Rayleigh or Rician fading with Doppler, Kronecker spatial correlation
//! and a path gain. The receiver is the OSTBC combiner followed by a hard
//! QPSK demodulator, or one of the ZF / MMSE / ML spatial-multiplexing
//! detectors for uncoded transmission.
//!
//! [`sim`] drives everything as seeded Monte Carlo sweeps whose output is
//! independent of the number of worker threads.

// `!(x >= 0.0)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod detect;
mod error;
pub mod fading;
pub mod modem;
pub mod numerics;
pub mod sim;
pub mod stbc;

pub use error::{Error, Result};
pub use numerics::{Complex, ComplexMatrix, RngStream};
