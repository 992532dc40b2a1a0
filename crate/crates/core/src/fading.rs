//! Single-link fading processes.
//!
//! Rayleigh fading is synthesised with the improved sum-of-sinusoids model
//!
//! ```text
//! u(t) = sqrt(1/M) Σ_{i=1..M} [ cos(w_d t cos α_i + Ψ_i) + j cos(w_d t sin α_i + Θ_i) ]
//! α_i  = (2πi − π + θ) / (4M)
//! ```
//!
//! with `θ, Ψ_i, Θ_i` i.i.d. uniform on `[−π, π)`, which has unit mean power
//! and the Clarke autocorrelation `J₀(w_d τ)` on each quadrature. Rician
//! fading adds a rotating line-of-sight phasor:
//!
//! ```text
//! g(t) = sqrt(K/(K+1)) exp(j(2π f_los t + θ₀)) + sqrt(1/(K+1)) u(t)
//! ```

use crate::numerics::{bessel_i0_scaled, bessel_j0, Complex, RngStream};
use crate::{Error, Result};
use std::f64::consts::PI;

pub const DEFAULT_SINUSOIDS: usize = 32;
pub const MIN_SINUSOIDS: usize = 8;

/// Above this K the scattered component is not evaluated at all.
pub const K_SCATTER_CUTOFF: f64 = 1e9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FadingModel {
    Rayleigh,
    Rician,
}

impl FadingModel {
    pub fn name(self) -> &'static str {
        match self {
            FadingModel::Rayleigh => "rayleigh",
            FadingModel::Rician => "rician",
        }
    }
}

/// Parameters of one scalar fading process.
#[derive(Debug, Clone, PartialEq)]
pub struct FadingSpec {
    pub model: FadingModel,
    /// Linear Rician K-factor; ignored for Rayleigh.
    pub k_factor: f64,
    /// Maximum Doppler frequency of the scattered component.
    pub max_doppler_hz: f64,
    /// Doppler shift of the line-of-sight path.
    pub los_doppler_hz: f64,
    /// Initial line-of-sight phase.
    pub los_phase_rad: f64,
    pub sample_rate_hz: f64,
    pub num_sinusoids: usize,
}

impl FadingSpec {
    pub fn rayleigh(max_doppler_hz: f64, sample_rate_hz: f64) -> Self {
        FadingSpec {
            model: FadingModel::Rayleigh,
            k_factor: 0.0,
            max_doppler_hz,
            los_doppler_hz: 0.0,
            los_phase_rad: 0.0,
            sample_rate_hz,
            num_sinusoids: DEFAULT_SINUSOIDS,
        }
    }

    pub fn rician(
        k_factor: f64,
        max_doppler_hz: f64,
        los_doppler_hz: f64,
        sample_rate_hz: f64,
    ) -> Self {
        FadingSpec {
            model: FadingModel::Rician,
            k_factor,
            los_doppler_hz,
            ..Self::rayleigh(max_doppler_hz, sample_rate_hz)
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidFadingSpec(msg));
        let finite = [
            self.k_factor,
            self.max_doppler_hz,
            self.los_doppler_hz,
            self.los_phase_rad,
            self.sample_rate_hz,
        ];
        if finite.iter().any(|x| !x.is_finite()) {
            return bad("all parameters must be finite".into());
        }
        if self.k_factor < 0.0 {
            return bad(format!("k_factor must be >= 0, got {}", self.k_factor));
        }
        if self.max_doppler_hz <= 0.0 {
            return bad(format!(
                "max_doppler_hz must be > 0, got {}",
                self.max_doppler_hz
            ));
        }
        let nyquist = 2.0 * self.max_doppler_hz.max(self.los_doppler_hz.abs());
        if self.sample_rate_hz <= nyquist {
            return bad(format!(
                "sample_rate_hz {} must exceed twice the largest Doppler ({nyquist})",
                self.sample_rate_hz
            ));
        }
        if self.num_sinusoids < MIN_SINUSOIDS {
            return bad(format!(
                "num_sinusoids must be >= {MIN_SINUSOIDS}, got {}",
                self.num_sinusoids
            ));
        }
        Ok(())
    }

    /// Effective K: zero for Rayleigh.
    pub fn effective_k(&self) -> f64 {
        match self.model {
            FadingModel::Rayleigh => 0.0,
            FadingModel::Rician => self.k_factor,
        }
    }

    /// (LOS amplitude, scattered amplitude), each the square root of its
    /// share of the unit total power.
    pub fn branch_amplitudes(&self) -> (f64, f64) {
        let k = self.effective_k();
        ((k / (k + 1.0)).sqrt(), (1.0 / (k + 1.0)).sqrt())
    }
}

/// Running state of one sum-of-sinusoids fading generator.
#[derive(Debug, Clone)]
pub struct FadingProcess {
    spec: FadingSpec,
    alphas: Vec<f64>,
    psis: Vec<f64>,
    thetas: Vec<f64>,
    // w_d·cos α_i and w_d·sin α_i
    w_in_phase: Vec<f64>,
    w_quadrature: Vec<f64>,
    // Running phasors exp(j(w t + phase)) and their per-sample rotations.
    phasor_in_phase: Vec<Complex>,
    phasor_quadrature: Vec<Complex>,
    step_in_phase: Vec<Complex>,
    step_quadrature: Vec<Complex>,
    los_phasor: Complex,
    los_step: Complex,
    sample_index: u64,
}

/// Phasors are recomputed exactly whenever the sample index is a multiple
/// of this, bounding rounding drift of the recurrence.
const REANCHOR_INTERVAL: u64 = 1024;

impl FadingProcess {
    /// Draws `θ`, then `Ψ_i, Θ_i` for `i = 1..M` in that order.
    pub fn new(spec: FadingSpec, rng: &mut RngStream) -> Result<Self> {
        spec.validate()?;
        let m = spec.num_sinusoids;
        let theta = rng.uniform_phase();
        let alphas: Vec<f64> = (1..=m)
            .map(|i| (2.0 * PI * i as f64 - PI + theta) / (4.0 * m as f64))
            .collect();
        let mut psis = Vec::with_capacity(m);
        let mut thetas = Vec::with_capacity(m);
        for _ in 0..m {
            psis.push(rng.uniform_phase());
            thetas.push(rng.uniform_phase());
        }
        let w_d = 2.0 * PI * spec.max_doppler_hz;
        let w_in_phase: Vec<f64> = alphas.iter().map(|a| w_d * a.cos()).collect();
        let w_quadrature: Vec<f64> = alphas.iter().map(|a| w_d * a.sin()).collect();
        let dt = 1.0 / spec.sample_rate_hz;
        let rotation = |w: &f64| Complex::from_polar(1.0, w * dt);
        let step_in_phase = w_in_phase.iter().map(rotation).collect();
        let step_quadrature = w_quadrature.iter().map(rotation).collect();
        let los_step = rotation(&(2.0 * PI * spec.los_doppler_hz));
        Ok(FadingProcess {
            spec,
            alphas,
            psis,
            thetas,
            w_in_phase,
            w_quadrature,
            phasor_in_phase: vec![Complex::new(1.0, 0.0); m],
            phasor_quadrature: vec![Complex::new(1.0, 0.0); m],
            step_in_phase,
            step_quadrature,
            los_phasor: Complex::new(1.0, 0.0),
            los_step,
            sample_index: 0,
        })
    }

    pub fn spec(&self) -> &FadingSpec {
        &self.spec
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn psis(&self) -> &[f64] {
        &self.psis
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn sample_index(&self) -> u64 {
        self.sample_index
    }

    fn scattered_enabled(&self) -> bool {
        !(self.spec.model == FadingModel::Rician && self.spec.k_factor > K_SCATTER_CUTOFF)
    }

    fn anchor(&mut self) {
        let t = self.sample_index as f64 / self.spec.sample_rate_hz;
        for i in 0..self.alphas.len() {
            self.phasor_in_phase[i] =
                Complex::from_polar(1.0, self.w_in_phase[i] * t + self.psis[i]);
            self.phasor_quadrature[i] =
                Complex::from_polar(1.0, self.w_quadrature[i] * t + self.thetas[i]);
        }
        let los_phase = 2.0 * PI * self.spec.los_doppler_hz * t + self.spec.los_phase_rad;
        self.los_phasor = Complex::from_polar(1.0, los_phase);
    }

    /// Next sample; time is `sample_index / sample_rate_hz`.
    ///
    /// Each cosine is the real part of a phasor advanced by a fixed rotation
    /// per sample and re-anchored every 1024 samples, so the sequence does
    /// not depend on how calls are chunked.
    pub fn next_sample(&mut self) -> Complex {
        if self.sample_index.is_multiple_of(REANCHOR_INTERVAL) {
            self.anchor();
        }
        self.sample_index += 1;
        let scattered = if self.scattered_enabled() {
            let mut re = 0.0;
            let mut im = 0.0;
            for i in 0..self.alphas.len() {
                re += self.phasor_in_phase[i].re;
                im += self.phasor_quadrature[i].re;
                self.phasor_in_phase[i] *= self.step_in_phase[i];
                self.phasor_quadrature[i] *= self.step_quadrature[i];
            }
            Complex::new(re, im) / (self.alphas.len() as f64).sqrt()
        } else {
            Complex::new(0.0, 0.0)
        };
        match self.spec.model {
            FadingModel::Rayleigh => scattered,
            FadingModel::Rician => {
                let (los_amp, scat_amp) = self.spec.branch_amplitudes();
                let los = self.los_phasor * los_amp;
                self.los_phasor *= self.los_step;
                los + scattered * scat_amp
            }
        }
    }

    pub fn next_samples(&mut self, n_samples: usize) -> Vec<Complex> {
        (0..n_samples).map(|_| self.next_sample()).collect()
    }
}

/// Exponential power density `(1/m0)·exp(−m/m0)` of Rayleigh fading.
pub fn pdf_power_rayleigh(m: f64, m0: f64) -> Result<f64> {
    if !(m >= 0.0) || !(m0 > 0.0) || !m.is_finite() || !m0.is_finite() {
        return Err(Error::Domain(format!(
            "pdf_power_rayleigh needs m >= 0, m0 > 0; got ({m}, {m0})"
        )));
    }
    Ok((-m / m0).exp() / m0)
}

/// Rician envelope density
/// `(x/α²)·exp(−(x² + c_m²)/(2α²))·I₀(x·c_m/α²)`.
///
/// Evaluated with an exponentially scaled I₀ so large `x·c_m/α²` does not
/// overflow.
pub fn pdf_envelope_rician(x: f64, cm: f64, alpha2: f64) -> Result<f64> {
    if !(x >= 0.0) || !(cm >= 0.0) || !(alpha2 > 0.0) || !(x + cm + alpha2).is_finite() {
        return Err(Error::Domain(format!(
            "pdf_envelope_rician needs x >= 0, cm >= 0, alpha2 > 0; got ({x}, {cm}, {alpha2})"
        )));
    }
    let d = x - cm;
    Ok(x / alpha2 * (-(d * d) / (2.0 * alpha2)).exp() * bessel_i0_scaled(x * cm / alpha2))
}

/// K = c_m² / (2α²): dominant over scattered power.
pub fn k_factor(cm2: f64, two_alpha2: f64) -> Result<f64> {
    if !(cm2 >= 0.0) || !(two_alpha2 > 0.0) || !cm2.is_finite() || !two_alpha2.is_finite() {
        return Err(Error::Domain(format!(
            "k_factor needs cm2 >= 0, two_alpha2 > 0; got ({cm2}, {two_alpha2})"
        )));
    }
    Ok(cm2 / two_alpha2)
}

/// Theoretical envelope CDF of a unit-power fading process.
#[derive(Debug, Clone)]
pub enum EnvelopeCdf {
    /// `1 − exp(−x²/(2α²))`.
    Rayleigh { two_alpha2: f64 },
    /// Numerically integrated Rician density on a uniform grid.
    Tabulated { step: f64, values: Vec<f64> },
    /// Deterministic envelope.
    Step { at: f64 },
}

impl EnvelopeCdf {
    const GRID_POINTS: usize = 20_000;

    pub fn rician(cm: f64, alpha2: f64) -> Result<Self> {
        pdf_envelope_rician(0.0, cm, alpha2)?;
        if cm == 0.0 {
            return Ok(EnvelopeCdf::Rayleigh {
                two_alpha2: 2.0 * alpha2,
            });
        }
        let x_max = cm + 12.0 * alpha2.sqrt();
        let step = x_max / Self::GRID_POINTS as f64;
        let pdf = |x: f64| pdf_envelope_rician(x, cm, alpha2).unwrap_or(0.0);
        let mut values = Vec::with_capacity(Self::GRID_POINTS + 1);
        let mut acc = 0.0;
        values.push(0.0);
        for i in 0..Self::GRID_POINTS {
            let a = i as f64 * step;
            let b = a + step;
            acc += step / 6.0 * (pdf(a) + 4.0 * pdf(0.5 * (a + b)) + pdf(b));
            values.push(acc.min(1.0));
        }
        Ok(EnvelopeCdf::Tabulated { step, values })
    }

    /// CDF matching the envelope of a unit-power process with this spec.
    pub fn for_spec(spec: &FadingSpec) -> Result<Self> {
        let k = spec.effective_k();
        if k > K_SCATTER_CUTOFF {
            return Ok(EnvelopeCdf::Step { at: 1.0 });
        }
        let (los, _) = spec.branch_amplitudes();
        // 2α² = 1/(K+1) is the scattered power, c_m² = K/(K+1) the LOS power.
        Self::rician(los, 0.5 / (k + 1.0))
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        match self {
            EnvelopeCdf::Rayleigh { two_alpha2 } => 1.0 - (-x * x / two_alpha2).exp(),
            EnvelopeCdf::Tabulated { step, values } => {
                let pos = x / step;
                let i = pos.floor() as usize;
                if i + 1 >= values.len() {
                    return *values.last().unwrap_or(&1.0);
                }
                let frac = pos - i as f64;
                values[i] + frac * (values[i + 1] - values[i])
            }
            EnvelopeCdf::Step { at } => {
                if x >= *at {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
}

/// One-sample Kolmogorov–Smirnov statistic of `samples` against `cdf`.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

/// Two-sample Kolmogorov–Smirnov statistic.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Statistical fingerprint of a generated fading sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeStats {
    pub ks_statistic: f64,
    pub empirical_mean_power: f64,
    /// `(lag in seconds, empirical, theoretical)` normalised autocorrelation
    /// of the real part, ascending in lag.
    pub autocorr_lags: Vec<(f64, f64, f64)>,
}

impl EnvelopeStats {
    pub fn autocorr_rmse(&self) -> f64 {
        let n = self.autocorr_lags.len().max(1) as f64;
        (self
            .autocorr_lags
            .iter()
            .map(|(_, e, t)| (e - t).powi(2))
            .sum::<f64>()
            / n)
            .sqrt()
    }
}

pub const MIN_VALIDATION_SAMPLES: usize = 100_000;
const AUTOCORR_LAGS: usize = 21;

/// Theoretical normalised autocorrelation of `Re g(t)` at lag `tau`.
///
/// The scattered part contributes `J₀(2π f_d τ)/2` per unit power; the LOS
/// part `cos(2π f_los τ)/2`, or `cos²θ₀` when it does not rotate.
pub fn theoretical_autocorr(spec: &FadingSpec, tau: f64) -> Result<f64> {
    let (los, scat) = spec.branch_amplitudes();
    let los_term = |tau: f64| {
        if spec.los_doppler_hz == 0.0 {
            spec.los_phase_rad.cos().powi(2)
        } else {
            0.5 * (2.0 * PI * spec.los_doppler_hz * tau).cos()
        }
    };
    let scat_power = if spec.effective_k() > K_SCATTER_CUTOFF {
        0.0
    } else {
        scat * scat
    };
    let arg = 2.0 * PI * spec.max_doppler_hz * tau;
    let num = los * los * los_term(tau) + scat_power * 0.5 * bessel_j0(arg)?;
    let den = los * los * los_term(0.0) + scat_power * 0.5;
    Ok(num / den)
}

/// Draws `n_samples` from `proc` and compares them with theory: envelope KS
/// statistic, mean power, and 21 lags of real-part autocorrelation with a
/// lag step of `sample_rate/(10 f_d)` samples (τ·f_d from 0 to 2 when the
/// sample rate allows).
pub fn validate_process(proc: &mut FadingProcess, n_samples: usize) -> Result<EnvelopeStats> {
    if n_samples < MIN_VALIDATION_SAMPLES {
        return Err(Error::Domain(format!(
            "validate_process needs at least {MIN_VALIDATION_SAMPLES} samples, got {n_samples}"
        )));
    }
    let spec = proc.spec().clone();
    let samples = proc.next_samples(n_samples);
    let envelope: Vec<f64> = samples.iter().map(|z| z.norm()).collect();
    let cdf = EnvelopeCdf::for_spec(&spec)?;
    let ks = ks_statistic(&envelope, |x| cdf.eval(x));
    let mean_power = samples.iter().map(|z| z.norm_sqr()).sum::<f64>() / n_samples as f64;

    let re: Vec<f64> = samples.iter().map(|z| z.re).collect();
    let step = ((spec.sample_rate_hz / (10.0 * spec.max_doppler_hz)).round() as usize).max(1);
    let corr = |lag: usize| {
        re.iter().zip(&re[lag..]).map(|(a, b)| a * b).sum::<f64>() / (re.len() - lag) as f64
    };
    let r0 = corr(0);
    let mut lags = Vec::with_capacity(AUTOCORR_LAGS);
    for k in 0..AUTOCORR_LAGS {
        let lag = k * step;
        if lag >= re.len() {
            break;
        }
        let tau = lag as f64 / spec.sample_rate_hz;
        let empirical = if r0 > 0.0 { corr(lag) / r0 } else { 0.0 };
        lags.push((tau, empirical, theoretical_autocorr(&spec, tau)?));
    }
    Ok(EnvelopeStats {
        ks_statistic: ks,
        empirical_mean_power: mean_power,
        autocorr_lags: lags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::StreamId;

    fn rng(id: u64) -> RngStream {
        RngStream::new(11, StreamId(id))
    }

    #[test]
    fn spec_validation() {
        assert!(FadingSpec::rayleigh(100.0, 1000.0).validate().is_ok());
        assert!(FadingSpec::rayleigh(100.0, 200.0).validate().is_err());
        assert!(FadingSpec::rayleigh(0.0, 200.0).validate().is_err());
        assert!(FadingSpec::rician(4.0, 10.0, 100.0, 150.0)
            .validate()
            .is_err());
        assert!(FadingSpec::rician(-1.0, 10.0, 0.0, 150.0)
            .validate()
            .is_err());
        assert!(FadingSpec::rician(f64::INFINITY, 10.0, 0.0, 150.0)
            .validate()
            .is_err());
        let mut s = FadingSpec::rayleigh(10.0, 100.0);
        s.num_sinusoids = 7;
        assert!(s.validate().is_err());
        assert!(FadingProcess::new(s, &mut rng(0)).is_err());
    }

    #[test]
    fn angles_inside_open_interval() {
        let proc = FadingProcess::new(FadingSpec::rayleigh(50.0, 1e4), &mut rng(1)).unwrap();
        assert_eq!(proc.alphas().len(), DEFAULT_SINUSOIDS);
        assert!(proc.alphas().iter().all(|a| a.abs() < PI));
        assert!(proc
            .psis()
            .iter()
            .chain(proc.thetas())
            .all(|p| (-PI..PI).contains(p)));
        assert_eq!(proc.sample_index(), 0);
    }

    #[test]
    fn deterministic() {
        let spec = FadingSpec::rician(2.0, 30.0, 5.0, 1e3);
        let mut a = FadingProcess::new(spec.clone(), &mut rng(2)).unwrap();
        let mut b = FadingProcess::new(spec, &mut rng(2)).unwrap();
        assert_eq!(a.next_samples(500), b.next_samples(500));
        assert_eq!(a.sample_index(), 500);
    }

    #[test]
    fn infinite_k_is_static_los() {
        let mut spec = FadingSpec::rician(1e12, 100.0, 0.0, 1e4);
        spec.los_phase_rad = 0.3;
        let mut proc = FadingProcess::new(spec, &mut rng(3)).unwrap();
        let expected = Complex::from_polar(1.0, 0.3);
        for z in proc.next_samples(1000) {
            assert!((z - expected).norm() < 1e-5);
        }
    }

    #[test]
    fn rayleigh_power_pdf() {
        assert_eq!(pdf_power_rayleigh(0.0, 2.0).unwrap(), 0.5);
        assert!((pdf_power_rayleigh(2.0, 2.0).unwrap() - (-1.0f64).exp() / 2.0).abs() < 1e-15);
        assert!(pdf_power_rayleigh(-1.0, 1.0).is_err());
        assert!(pdf_power_rayleigh(1.0, 0.0).is_err());
    }

    #[test]
    fn rician_pdf_basics() {
        assert_eq!(pdf_envelope_rician(0.0, 1.0, 0.5).unwrap(), 0.0);
        assert!(pdf_envelope_rician(-0.1, 1.0, 0.5).is_err());
        assert!(pdf_envelope_rician(0.1, 1.0, 0.0).is_err());
        assert!(pdf_envelope_rician(0.1, -1.0, 0.5).is_err());
        // Large Bessel arguments stay finite.
        assert!(pdf_envelope_rician(30.0, 30.0, 0.01).unwrap().is_finite());
    }

    #[test]
    fn k_factor_ratios() {
        assert_eq!(k_factor(0.0, 3.0).unwrap(), 0.0);
        assert_eq!(k_factor(1.0, 1.0).unwrap(), 1.0);
        assert_eq!(k_factor(2.0, 0.5).unwrap(), 4.0);
        assert!(k_factor(1.0, 0.0).is_err());
    }

    #[test]
    fn tabulated_cdf_reaches_one() {
        let cdf = EnvelopeCdf::rician(1.0, 0.25).unwrap();
        assert!((cdf.eval(10.0) - 1.0).abs() < 1e-9);
        assert_eq!(cdf.eval(0.0), 0.0);
        let mut last = 0.0;
        for i in 0..300 {
            let v = cdf.eval(i as f64 * 0.01);
            assert!(v >= last);
            last = v;
        }
    }

    #[test]
    fn ks_against_itself_is_small() {
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) / 1000.0).collect();
        assert!(ks_statistic(&xs, |x| x) <= 0.0005 + 1e-12);
        assert_eq!(ks_two_sample(&xs, &xs), 0.0);
        let disjoint: Vec<f64> = xs.iter().map(|x| x + 10.0).collect();
        assert_eq!(ks_two_sample(&xs, &disjoint), 1.0);
        let halves: Vec<f64> = xs.iter().map(|x| x * 0.5).collect();
        assert!((ks_two_sample(&xs, &halves) - 0.5).abs() < 2e-3);
    }

    #[test]
    fn validation_requires_enough_samples() {
        let mut proc = FadingProcess::new(FadingSpec::rayleigh(10.0, 100.0), &mut rng(4)).unwrap();
        assert!(validate_process(&mut proc, 10).is_err());
    }

    #[test]
    fn theoretical_autocorr_at_zero_is_one() {
        for spec in [
            FadingSpec::rayleigh(10.0, 100.0),
            FadingSpec::rician(3.0, 10.0, 0.0, 100.0),
            FadingSpec::rician(3.0, 10.0, 20.0, 100.0),
        ] {
            assert!((theoretical_autocorr(&spec, 0.0).unwrap() - 1.0).abs() < 1e-12);
        }
    }
}
