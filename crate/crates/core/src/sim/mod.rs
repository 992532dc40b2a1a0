//! Monte Carlo experiment engine.
//!
//! A sweep point simulates frames with trial indices `0, 1, 2, ...` until
//! either `target_frame_errors` frame errors have been seen or `max_frames`
//! frames have run. Every frame draws from random streams keyed by
//! `(master_seed, experiment, sweep point, trial index)`, and outcomes are
//! folded in trial order. Trials run in fixed-size batches across worker
//! threads, and anything past the stopping trial is discarded, so the
//! result does not depend on the worker count.

mod report;
mod stats;

pub use report::{emit_csv, fading_stats_csv, format_g6, gnuplot_script, parse_csv, CsvRow};
pub use stats::{wilson_interval, Z_95};

use crate::channel::{noise_variance, ChannelProcess, ChannelSpec, KroneckerShaper};
use crate::detect::{detect, DetectorKind};
use crate::fading::FadingSpec;
use crate::modem::{bernoulli_bits, qpsk_demodulate, qpsk_modulate, BitBlock};
use crate::numerics::{Complex, ComplexMatrix, RngStream, StreamId};
use crate::stbc::{concat_blocks, ostbc_combine, ostbc_encode, CodeId, CodeRate, OstbcCode};
use crate::{Error, Result};
use rayon::prelude::*;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

/// Information bits per frame (60 QPSK symbols).
pub const DEFAULT_FRAME_BITS: usize = 120;
pub const DEFAULT_MAX_FRAMES: u64 = 100_000;
pub const DEFAULT_TARGET_FRAME_ERRORS: u64 = 200;
/// Rician K used for the FER experiments unless overridden.
pub const DEFAULT_K_FACTOR: f64 = 4.0;
pub const DEFAULT_SAMPLE_RATE_HZ: f64 = 10_000.0;
pub const DEFAULT_CODE: CodeId = CodeId {
    n_tx: 4,
    rate: CodeRate::ThreeQuarters,
};
pub const DEFAULT_SAMPLE_RATE_SWEEP: [f64; 7] = [1e5, 2e5, 5e5, 1e6, 2e6, 5e6, 1e7];

/// Trials evaluated per parallel batch.
const BATCH_SIZE: u64 = 256;

/// Labels of the per-trial random streams.
pub mod streams {
    pub const BITS: u64 = 0;
    pub const CHANNEL: u64 = 1;
    pub const NOISE: u64 = 2;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Experiment {
    FerVsGain,
    FerVsDoppler,
    FerVsSampleRate,
    BerVsSnr,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::FerVsGain => "fer-vs-gain",
            Experiment::FerVsDoppler => "fer-vs-doppler",
            Experiment::FerVsSampleRate => "fer-vs-samplerate",
            Experiment::BerVsSnr => "ber-vs-snr",
        }
    }

    /// Quantity on the sweep axis.
    pub fn x_label(self) -> &'static str {
        match self {
            Experiment::FerVsGain => "path gain (dB)",
            Experiment::FerVsDoppler => "maximum Doppler (Hz)",
            Experiment::FerVsSampleRate => "sample rate (Hz)",
            Experiment::BerVsSnr => "SNR (dB)",
        }
    }

    fn stream_tag(self) -> u64 {
        match self {
            Experiment::FerVsGain => 1,
            Experiment::FerVsDoppler => 2,
            Experiment::FerVsSampleRate => 3,
            Experiment::BerVsSnr => 4,
        }
    }

    pub fn uses_ostbc(self) -> bool {
        self != Experiment::BerVsSnr
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Experiment::FerVsGain,
            Experiment::FerVsDoppler,
            Experiment::FerVsSampleRate,
            Experiment::BerVsSnr,
        ]
        .into_iter()
        .find(|e| e.name() == s)
        .ok_or_else(|| Error::InvalidConfig(format!("unknown experiment '{s}'")))
    }
}

/// Full description of one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub experiment: Experiment,
    /// Baseline channel; the swept quantity is overridden per point.
    pub channel: ChannelSpec,
    /// OSTBC design; required by the FER experiments.
    pub code: Option<CodeId>,
    /// Detector; required by `BerVsSnr`.
    pub detector: Option<DetectorKind>,
    pub frame_bits: usize,
    /// SNR for experiments that do not sweep it; `+∞` disables noise.
    pub snr_db: f64,
    pub sweep: Vec<f64>,
    pub max_frames: u64,
    pub target_frame_errors: u64,
    pub master_seed: u64,
}

impl SimConfig {
    /// FER against path gain with the default OSTBC setup.
    pub fn fer_vs_gain(
        fading: FadingSpec,
        gains_db: Vec<f64>,
        snr_db: f64,
        master_seed: u64,
    ) -> Self {
        SimConfig {
            experiment: Experiment::FerVsGain,
            channel: ChannelSpec::new(DEFAULT_CODE.n_tx, 4, fading),
            code: Some(DEFAULT_CODE),
            detector: None,
            frame_bits: DEFAULT_FRAME_BITS,
            snr_db,
            sweep: gains_db,
            max_frames: DEFAULT_MAX_FRAMES,
            target_frame_errors: DEFAULT_TARGET_FRAME_ERRORS,
            master_seed,
        }
    }

    /// Uncoded 4×4 spatial multiplexing BER against SNR.
    pub fn ber_vs_snr(detector: DetectorKind, snrs_db: Vec<f64>, master_seed: u64) -> Self {
        SimConfig {
            experiment: Experiment::BerVsSnr,
            channel: ChannelSpec::new(4, 4, FadingSpec::rayleigh(100.0, DEFAULT_SAMPLE_RATE_HZ)),
            code: None,
            detector: Some(detector),
            frame_bits: DEFAULT_FRAME_BITS,
            snr_db: f64::NAN,
            sweep: snrs_db,
            max_frames: DEFAULT_MAX_FRAMES,
            target_frame_errors: DEFAULT_TARGET_FRAME_ERRORS,
            master_seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.sweep.is_empty() {
            return bad("sweep must not be empty".into());
        }
        if self.sweep.iter().any(|x| !x.is_finite()) {
            return bad("sweep values must be finite".into());
        }
        if self.sweep.windows(2).any(|w| w[1] <= w[0]) {
            return bad("sweep must be strictly increasing".into());
        }
        if self.max_frames < 1 {
            return bad("max_frames must be >= 1".into());
        }
        if self.frame_bits == 0 || !self.frame_bits.is_multiple_of(2) {
            return bad(format!(
                "frame_bits must be a positive even number, got {}",
                self.frame_bits
            ));
        }
        if self.experiment != Experiment::BerVsSnr && self.snr_db.is_nan() {
            return bad("snr_db must be set".into());
        }
        if self.experiment.uses_ostbc() {
            let Some(id) = self.code else {
                return bad(format!("{} needs an OSTBC code", self.experiment));
            };
            let code = OstbcCode::from_id(id)?;
            if code.n_tx() != self.channel.n_tx {
                return bad(format!(
                    "code {id} needs {} transmit antennas, channel has {}",
                    code.n_tx(),
                    self.channel.n_tx
                ));
            }
            let per_block = 2 * code.symbols_per_block();
            if !self.frame_bits.is_multiple_of(per_block) {
                return bad(format!(
                    "frame_bits {} is not a multiple of {per_block} (2 bits x {} symbols per block)",
                    self.frame_bits,
                    code.symbols_per_block()
                ));
            }
        } else {
            if self.detector.is_none() {
                return bad("ber-vs-snr needs a detector".into());
            }
            if self.channel.fading.model != crate::fading::FadingModel::Rayleigh {
                return bad(
                    "ber-vs-snr draws i.i.d. Rayleigh channels; use --fading rayleigh".into(),
                );
            }
            if self.channel.n_rx < self.channel.n_tx {
                return bad("spatial multiplexing needs n_rx >= n_tx".into());
            }
            let per_vector = 2 * self.channel.n_tx;
            if !self.frame_bits.is_multiple_of(per_vector) {
                return bad(format!(
                    "frame_bits {} is not a multiple of {per_vector} (2 bits x {} streams)",
                    self.frame_bits, self.channel.n_tx
                ));
            }
        }
        for i in 0..self.sweep.len() {
            self.point(i)?.0.validate()?;
        }
        Ok(())
    }

    /// Channel and SNR at sweep point `index`.
    pub fn point(&self, index: usize) -> Result<(ChannelSpec, f64)> {
        let x = *self
            .sweep
            .get(index)
            .ok_or_else(|| Error::InvalidConfig(format!("sweep point {index} out of range")))?;
        let mut channel = self.channel.clone();
        let mut snr = self.snr_db;
        match self.experiment {
            Experiment::FerVsGain => channel.path_gain_db = x,
            Experiment::FerVsDoppler => channel.fading.max_doppler_hz = x,
            Experiment::FerVsSampleRate => channel.fading.sample_rate_hz = x,
            Experiment::BerVsSnr => snr = x,
        }
        Ok((channel, snr))
    }

    /// Root stream of one trial.
    pub fn trial_stream(&self, point: usize, trial_index: u64) -> RngStream {
        let id = StreamId::from_path(&[self.experiment.stream_tag(), point as u64, trial_index]);
        RngStream::new(self.master_seed, id)
    }
}

/// Outcome of one frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FrameOutcome {
    pub frame_error: bool,
    pub bit_errors: u64,
    pub bits: u64,
}

/// Simulates trial `trial_index` of sweep point `point` end to end.
///
/// OSTBC experiments: bits → QPSK → OSTBC → time-varying channel + AWGN →
/// combiner (channel at each block's first row) → demodulator. `BerVsSnr`:
/// bits → QPSK streams at energy `1/N_t` → a fresh quasi-static channel per
/// symbol vector → detector. A detector failure counts every bit of that
/// vector as wrong.
pub fn run_frame(config: &SimConfig, point: usize, trial_index: u64) -> Result<FrameOutcome> {
    let (channel, snr_db) = config.point(point)?;
    let root = config.trial_stream(point, trial_index);
    let mut bit_rng = root.fork(streams::BITS);
    let bits = bernoulli_bits(config.frame_bits, 0.5, &mut bit_rng)?;
    let symbols = qpsk_modulate(&bits)?;
    let decided = if config.experiment.uses_ostbc() {
        let id = config
            .code
            .ok_or_else(|| Error::InvalidConfig("missing OSTBC code".into()))?;
        ostbc_frame(&OstbcCode::from_id(id)?, channel, snr_db, &symbols, &root)?
    } else {
        let kind = config
            .detector
            .ok_or_else(|| Error::InvalidConfig("missing detector".into()))?;
        uncoded_frame(kind, &channel, snr_db, &symbols, &bits, &root)?
    };
    let bit_errors = bits.hamming_distance(&decided) as u64;
    Ok(FrameOutcome {
        frame_error: bit_errors > 0,
        bit_errors,
        bits: bits.len() as u64,
    })
}

fn ostbc_frame(
    code: &OstbcCode,
    channel: ChannelSpec,
    snr_db: f64,
    symbols: &[Complex],
    root: &RngStream,
) -> Result<BitBlock> {
    let blocks = ostbc_encode(code, symbols)?;
    let x = concat_blocks(&blocks)?;
    let mut process = ChannelProcess::new(channel, &root.fork(streams::CHANNEL))?;
    let mut noise_rng = root.fork(streams::NOISE);
    let (received, hs) = process.apply(&x, snr_db, &mut noise_rng)?;
    let t = code.rows_per_block();
    let n_rx = received.samples.cols();
    let mut estimates = Vec::with_capacity(symbols.len());
    for b in 0..blocks.len() {
        let rows = &received.samples.as_slice()[b * t * n_rx..(b + 1) * t * n_rx];
        let y = ComplexMatrix::from_vec(t, n_rx, rows.to_vec())?;
        estimates.extend(ostbc_combine(code, &y, &hs[b * t])?.0);
    }
    Ok(qpsk_demodulate(&estimates))
}

fn uncoded_frame(
    kind: DetectorKind,
    channel: &ChannelSpec,
    snr_db: f64,
    symbols: &[Complex],
    bits: &BitBlock,
    root: &RngStream,
) -> Result<BitBlock> {
    let shaper = KroneckerShaper::new(channel)?;
    let n_tx = channel.n_tx;
    let noise_var = noise_variance(snr_db);
    let amplitude = 1.0 / (n_tx as f64).sqrt();
    let mut channel_rng = root.fork(streams::CHANNEL);
    let mut noise_rng = root.fork(streams::NOISE);
    let mut decided = Vec::with_capacity(bits.len());
    for (v, chunk) in symbols.chunks_exact(n_tx).enumerate() {
        let h = shaper.draw_rayleigh(&mut channel_rng);
        let x: Vec<Complex> = chunk.iter().map(|s| s * amplitude).collect();
        let mut y = h.mul_vec(&x)?;
        if noise_var > 0.0 {
            for yr in y.iter_mut() {
                *yr += noise_rng.complex_gaussian(noise_var);
            }
        }
        match detect(kind, &h, &y, noise_var) {
            Ok(hard) => decided.extend(qpsk_demodulate(&hard).0),
            Err(Error::Singular { .. }) => {
                let sent = &bits[v * 2 * n_tx..(v + 1) * 2 * n_tx];
                decided.extend(sent.iter().map(|b| b ^ 1));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(BitBlock(decided))
}

/// Aggregated counts at one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointResult {
    pub x: f64,
    pub frames: u64,
    pub frame_errors: u64,
    pub bits: u64,
    pub bit_errors: u64,
    pub fer: f64,
    pub ber: f64,
    pub ci95_fer: (f64, f64),
    pub ci95_ber: (f64, f64),
    pub elapsed_s: f64,
}

impl PointResult {
    /// Derives rates and Wilson intervals from the counts.
    pub fn from_counts(
        x: f64,
        frames: u64,
        frame_errors: u64,
        bits: u64,
        bit_errors: u64,
        elapsed_s: f64,
    ) -> Result<Self> {
        Ok(PointResult {
            x,
            frames,
            frame_errors,
            bits,
            bit_errors,
            fer: frame_errors as f64 / frames as f64,
            ber: bit_errors as f64 / bits as f64,
            ci95_fer: wilson_interval(frame_errors, frames)?,
            ci95_ber: wilson_interval(bit_errors, bits)?,
            elapsed_s,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub points: Vec<PointResult>,
}

/// Runs every sweep point on the global rayon pool.
pub fn run_experiment(config: &SimConfig) -> Result<SimResult> {
    config.validate()?;
    let points = (0..config.sweep.len())
        .map(|p| run_point(config, p))
        .collect::<Result<_>>()?;
    Ok(SimResult { points })
}

/// Runs on a dedicated pool of `workers` threads; the output is identical
/// to [`run_experiment`] for any worker count.
pub fn run_experiment_with_workers(config: &SimConfig, workers: usize) -> Result<SimResult> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidConfig(format!("cannot start worker pool: {e}")))?;
    pool.install(|| run_experiment(config))
}

fn run_point(config: &SimConfig, point: usize) -> Result<PointResult> {
    let start = Instant::now();
    let (mut frames, mut frame_errors, mut bits, mut bit_errors) = (0u64, 0u64, 0u64, 0u64);
    let mut next = 0u64;
    'batches: while next < config.max_frames {
        let end = (next + BATCH_SIZE).min(config.max_frames);
        let outcomes: Vec<FrameOutcome> = (next..end)
            .into_par_iter()
            .map(|trial| run_frame(config, point, trial))
            .collect::<Result<_>>()?;
        for o in outcomes {
            frames += 1;
            bits += o.bits;
            bit_errors += o.bit_errors;
            frame_errors += u64::from(o.frame_error);
            if frame_errors >= config.target_frame_errors {
                break 'batches;
            }
        }
        next = end;
    }
    PointResult::from_counts(
        config.sweep[point],
        frames,
        frame_errors,
        bits,
        bit_errors,
        start.elapsed().as_secs_f64(),
    )
}

/// Parses `start:step:stop` (inclusive) or a comma-separated list.
pub fn parse_sweep(spec: &str) -> Result<Vec<f64>> {
    let bad = || Error::InvalidConfig(format!("cannot parse sweep '{spec}'"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [start, step, stop] => {
            let (start, step, stop) = (num(start)?, num(step)?, num(stop)?);
            if !(step > 0.0) || stop < start || !(stop - start).is_finite() {
                return Err(bad());
            }
            let n = ((stop - start) / step + 1e-9).floor() as usize;
            if n > 100_000 {
                return Err(bad());
            }
            Ok((0..=n).map(|i| start + i as f64 * step).collect())
        }
        [list] => list.split(',').map(num).collect(),
        _ => Err(bad()),
    }
}
