use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// 64-bit identifier of one independent random stream under a master seed.
///
/// Identifiers are built by folding a path of labels (experiment, sweep
/// point, trial index, component, ...) through a SplitMix64 finalizer, so
/// a stream never depends on the order in which other streams are used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamId(pub u64);

impl StreamId {
    pub fn from_path(labels: &[u64]) -> Self {
        let mut h = 0x6a09_e667_f3bc_c908_u64;
        for &label in labels {
            h = splitmix64(h ^ splitmix64(label));
        }
        StreamId(h)
    }

    /// Child stream of `self` labelled by `label`.
    pub fn child(self, label: u64) -> Self {
        StreamId(splitmix64(
            self.0 ^ splitmix64(label.wrapping_add(0x9e37_79b9)),
        ))
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Deterministic random stream: ChaCha8 keyed by the master seed, with the
/// 64-bit ChaCha stream selector set to the stream id.
///
/// A stream is single-owner; clone it only to replay a sequence.
#[derive(Debug, Clone)]
pub struct RngStream {
    rng: ChaCha8Rng,
    master_seed: u64,
    stream_id: StreamId,
}

impl RngStream {
    pub const ALGORITHM: &'static str = "chacha8";

    pub fn new(master_seed: u64, stream_id: StreamId) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(stream_id.0);
        RngStream {
            rng,
            master_seed,
            stream_id,
        }
    }

    /// Fresh stream for a child label under the same master seed.
    pub fn fork(&self, label: u64) -> Self {
        RngStream::new(self.master_seed, self.stream_id.child(label))
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_id(&self) -> StreamId {
        self.stream_id
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform on [0, 1) with 53 bits of resolution.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on (0, 1].
    fn uniform_open0(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on [-π, π).
    pub fn uniform_phase(&mut self) -> f64 {
        -PI + 2.0 * PI * self.uniform()
    }

    /// Two independent standard normal variates by the Box–Muller transform
    /// `r = sqrt(-2 ln u1)`, `(r cos 2πu2, r sin 2πu2)` with `u1 ∈ (0, 1]`,
    /// `u2 ∈ [0, 1)`.
    pub fn gaussian_pair(&mut self) -> (f64, f64) {
        let u1 = self.uniform_open0();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (2.0 * PI * u2).sin_cos();
        (r * c, r * s)
    }

    /// Circularly-symmetric complex Gaussian with `E|z|² = variance`.
    pub fn complex_gaussian(&mut self, variance: f64) -> super::Complex {
        let (a, b) = self.gaussian_pair();
        let scale = (0.5 * variance).sqrt();
        super::Complex::new(a * scale, b * scale)
    }
}
