//! Frequency-flat MIMO channel: a bank of scalar fading processes shaped by
//! Kronecker spatial correlation and scaled by a path gain, plus AWGN.
//!
//! Per sample `H = g·Rr^{1/2}·H_iid·Rt^{1/2}` with `g = 10^{gain_dB/20}`.
//! The SNR is the total transmit energy per channel use over the noise
//! power per receive antenna, so `noise_var = 10^{−SNR_dB/10}`.

use crate::fading::{FadingProcess, FadingSpec};
use crate::numerics::{hermitian_sqrt, Complex, ComplexMatrix, RngStream, StreamId};
use crate::{Error, Result};
use std::fmt;
use std::str::FromStr;

pub const MAX_ANTENNAS: usize = 4;

/// Exponential correlation level: `R[i][j] = ρ^|i−j|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Correlation {
    Low,
    Medium,
    High,
    Explicit(f64),
}

impl Correlation {
    pub const NONE: Correlation = Correlation::Explicit(0.0);

    pub fn rho(self) -> f64 {
        match self {
            Correlation::Low => 0.1,
            Correlation::Medium => 0.5,
            Correlation::High => 0.9,
            Correlation::Explicit(rho) => rho,
        }
    }
}

impl Default for Correlation {
    fn default() -> Self {
        Correlation::NONE
    }
}

impl fmt::Display for Correlation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Correlation::Low => f.write_str("low"),
            Correlation::Medium => f.write_str("medium"),
            Correlation::High => f.write_str("high"),
            Correlation::Explicit(rho) => write!(f, "{rho}"),
        }
    }
}

impl FromStr for Correlation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "low" => Ok(Correlation::Low),
            "medium" => Ok(Correlation::Medium),
            "high" => Ok(Correlation::High),
            "none" => Ok(Correlation::NONE),
            other => other
                .parse::<f64>()
                .map(Correlation::Explicit)
                .map_err(|_| Error::Domain(format!("unknown correlation '{s}'"))),
        }
    }
}

/// `n×n` exponential correlation matrix `R[i][j] = ρ^|i−j|`.
pub fn correlation_matrix(n: usize, rho: f64) -> Result<ComplexMatrix> {
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::Domain(format!(
            "correlation must satisfy 0 <= rho < 1, got {rho}"
        )));
    }
    if n == 0 {
        return Err(Error::Domain("correlation matrix needs n >= 1".into()));
    }
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        Complex::new(rho.powi(i.abs_diff(j) as i32), 0.0)
    }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSpec {
    pub n_tx: usize,
    pub n_rx: usize,
    pub fading: FadingSpec,
    pub tx_correlation: Correlation,
    pub rx_correlation: Correlation,
    /// Average power gain of every entry, dB.
    pub path_gain_db: f64,
}

impl ChannelSpec {
    /// Uncorrelated, unit-gain channel.
    pub fn new(n_tx: usize, n_rx: usize, fading: FadingSpec) -> Self {
        ChannelSpec {
            n_tx,
            n_rx,
            fading,
            tx_correlation: Correlation::NONE,
            rx_correlation: Correlation::NONE,
            path_gain_db: 0.0,
        }
    }

    /// Same correlation level at both ends.
    pub fn with_correlation(mut self, level: Correlation) -> Self {
        self.tx_correlation = level;
        self.rx_correlation = level;
        self
    }

    pub fn with_path_gain_db(mut self, db: f64) -> Self {
        self.path_gain_db = db;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidChannelSpec(m));
        for (name, n) in [("n_tx", self.n_tx), ("n_rx", self.n_rx)] {
            if !(1..=MAX_ANTENNAS).contains(&n) {
                return bad(format!("{name} must be in 1..={MAX_ANTENNAS}, got {n}"));
            }
        }
        for (name, c) in [("tx", self.tx_correlation), ("rx", self.rx_correlation)] {
            let rho = c.rho();
            if !(0.0..1.0).contains(&rho) {
                return bad(format!(
                    "{name} correlation must satisfy 0 <= rho < 1, got {rho}"
                ));
            }
        }
        if !self.path_gain_db.is_finite() {
            return bad("path_gain_db must be finite".into());
        }
        self.fading.validate()
    }

    pub fn amplitude_gain(&self) -> f64 {
        10f64.powf(self.path_gain_db / 20.0)
    }
}

/// Maps an i.i.d. matrix onto the correlated, gain-scaled channel.
#[derive(Debug, Clone)]
pub struct KroneckerShaper {
    rt_sqrt: ComplexMatrix,
    rr_sqrt: ComplexMatrix,
    tx_identity: bool,
    rx_identity: bool,
    gain: f64,
}

impl KroneckerShaper {
    pub fn new(spec: &ChannelSpec) -> Result<Self> {
        spec.validate()?;
        let rt = correlation_matrix(spec.n_tx, spec.tx_correlation.rho())?;
        let rr = correlation_matrix(spec.n_rx, spec.rx_correlation.rho())?;
        Ok(KroneckerShaper {
            rt_sqrt: hermitian_sqrt(&rt)?,
            rr_sqrt: hermitian_sqrt(&rr)?,
            tx_identity: spec.tx_correlation.rho() == 0.0,
            rx_identity: spec.rx_correlation.rho() == 0.0,
            gain: spec.amplitude_gain(),
        })
    }

    pub fn rt_sqrt(&self) -> &ComplexMatrix {
        &self.rt_sqrt
    }

    pub fn rr_sqrt(&self) -> &ComplexMatrix {
        &self.rr_sqrt
    }

    pub fn shape(&self, h_iid: ComplexMatrix) -> ComplexMatrix {
        let mut h = h_iid;
        if !self.rx_identity {
            h = self.rr_sqrt.mat_mul(&h).expect("rr_sqrt matches n_rx");
        }
        if !self.tx_identity {
            h = h.mat_mul(&self.rt_sqrt).expect("rt_sqrt matches n_tx");
        }
        if self.gain != 1.0 {
            h = h.scale_real(self.gain);
        }
        h
    }

    /// One quasi-static draw with i.i.d. CN(0, 1) underlying entries.
    pub fn draw_rayleigh(&self, rng: &mut RngStream) -> ComplexMatrix {
        let h = ComplexMatrix::from_fn(self.rr_sqrt.rows(), self.rt_sqrt.rows(), |_, _| {
            rng.complex_gaussian(1.0)
        });
        self.shape(h)
    }
}

/// Per-receive-antenna noise variance for an SNR in dB; `+∞` disables noise.
pub fn noise_variance(snr_db: f64) -> f64 {
    if snr_db == f64::INFINITY {
        0.0
    } else {
        10f64.powf(-snr_db / 10.0)
    }
}

/// Received block.
#[derive(Debug, Clone, PartialEq)]
pub struct NoisySignal {
    /// `N_s×N_r`.
    pub samples: ComplexMatrix,
    pub noise_var: f64,
}

/// Time-varying `N_r×N_t` channel.
#[derive(Debug, Clone)]
pub struct ChannelProcess {
    spec: ChannelSpec,
    /// Row-major over (rx, tx).
    scalar_procs: Vec<FadingProcess>,
    stream_ids: Vec<StreamId>,
    shaper: KroneckerShaper,
}

impl ChannelProcess {
    /// Creates `N_r·N_t` scalar processes; the one for entry `(r, t)` draws
    /// from `rng.fork(r·N_t + t)`.
    pub fn new(spec: ChannelSpec, rng: &RngStream) -> Result<Self> {
        let shaper = KroneckerShaper::new(&spec)?;
        let n = spec.n_rx * spec.n_tx;
        let mut scalar_procs = Vec::with_capacity(n);
        let mut stream_ids = Vec::with_capacity(n);
        for idx in 0..n {
            let mut sub = rng.fork(idx as u64);
            stream_ids.push(sub.stream_id());
            scalar_procs.push(FadingProcess::new(spec.fading.clone(), &mut sub)?);
        }
        Ok(ChannelProcess {
            spec,
            scalar_procs,
            stream_ids,
            shaper,
        })
    }

    pub fn spec(&self) -> &ChannelSpec {
        &self.spec
    }

    pub fn scalar_processes(&self) -> &[FadingProcess] {
        &self.scalar_procs
    }

    pub fn stream_ids(&self) -> &[StreamId] {
        &self.stream_ids
    }

    pub fn shaper(&self) -> &KroneckerShaper {
        &self.shaper
    }

    fn next_matrix(&mut self) -> ComplexMatrix {
        let (n_rx, n_tx) = (self.spec.n_rx, self.spec.n_tx);
        let mut h_iid = ComplexMatrix::zeros(n_rx, n_tx);
        for r in 0..n_rx {
            for t in 0..n_tx {
                h_iid[(r, t)] = self.scalar_procs[r * n_tx + t].next_sample();
            }
        }
        self.shaper.shape(h_iid)
    }

    /// The next `n_samples` channel matrices.
    pub fn channel_matrices(&mut self, n_samples: usize) -> Vec<ComplexMatrix> {
        (0..n_samples).map(|_| self.next_matrix()).collect()
    }

    /// Passes `x` (`N_s×N_t`, one row per channel use) through the channel:
    /// `y_row = H_row·x_rowᵀ + w` with `w ~ CN(0, noise_var·I)`. Returns the
    /// received block and the channel used for each row.
    pub fn apply(
        &mut self,
        x: &ComplexMatrix,
        snr_db: f64,
        rng: &mut RngStream,
    ) -> Result<(NoisySignal, Vec<ComplexMatrix>)> {
        if x.cols() != self.spec.n_tx {
            return Err(Error::dims(
                format!("{} transmit columns", self.spec.n_tx),
                format!("{}", x.cols()),
            ));
        }
        if snr_db.is_nan() {
            return Err(Error::Domain("snr_db is NaN".into()));
        }
        let noise_var = noise_variance(snr_db);
        let hs = self.channel_matrices(x.rows());
        let mut samples = ComplexMatrix::zeros(x.rows(), self.spec.n_rx);
        for (row, h) in hs.iter().enumerate() {
            let clean = h.mul_vec(x.row(row))?;
            for (r, v) in clean.into_iter().enumerate() {
                samples[(row, r)] = if noise_var > 0.0 {
                    v + rng.complex_gaussian(noise_var)
                } else {
                    v
                };
            }
        }
        Ok((NoisySignal { samples, noise_var }, hs))
    }
}
