use mimosim::fading::{
    k_factor, ks_two_sample, pdf_envelope_rician, pdf_power_rayleigh, validate_process,
    EnvelopeCdf, FadingProcess, FadingSpec,
};
use mimosim::numerics::StreamId;
use mimosim::{Complex, RngStream};
use std::f64::consts::PI;

fn process(spec: FadingSpec, seed: u64, stream: u64) -> FadingProcess {
    FadingProcess::new(spec, &mut RngStream::new(seed, StreamId(stream))).unwrap()
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
    }
    fn recurse(f: &dyn Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (left, right) = (simpson(f, a, m), simpson(f, m, b));
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        recurse(f, a, m, left, tol / 2.0, depth - 1) + recurse(f, m, b, right, tol / 2.0, depth - 1)
    }
    recurse(f, a, b, simpson(f, a, b), tol, 40)
}

fn mean_power(samples: &[Complex]) -> f64 {
    samples.iter().map(|z| z.norm_sqr()).sum::<f64>() / samples.len() as f64
}

#[test]
fn construction_invariants() {
    let spec = FadingSpec::rayleigh(100.0, 1e3);
    let p = process(spec.clone(), 1, 0);
    assert_eq!(p.alphas().len(), spec.num_sinusoids);
    assert!(p.alphas().iter().all(|a| a.abs() < PI));
    assert!(p
        .psis()
        .iter()
        .chain(p.thetas())
        .all(|x| (-PI..PI).contains(x)));
    assert_eq!(p.sample_index(), 0);
    let mut a = process(spec.clone(), 1, 0);
    let mut b = process(spec, 1, 0);
    assert_eq!(a.next_samples(1000), b.next_samples(1000));
    assert_eq!(a.sample_index(), 1000);
}

#[test]
fn output_independent_of_chunking() {
    let spec = FadingSpec::rician(2.0, 75.0, 30.0, 2e3);
    let mut whole = process(spec.clone(), 3, 9);
    let mut pieces = process(spec, 3, 9);
    let all = whole.next_samples(5000);
    let mut parts = Vec::new();
    for chunk in [1, 7, 1023, 1, 2000, 1968] {
        parts.extend(pieces.next_samples(chunk));
    }
    assert_eq!(all.len(), parts.len());
    for (x, y) in all.iter().zip(&parts) {
        assert!((x - y).norm() < 1e-12);
    }
}

#[test]
fn distinct_streams_are_uncorrelated() {
    let spec = FadingSpec::rayleigh(100.0, 1e3);
    let a = process(spec.clone(), 4, 1).next_samples(100_000);
    let b = process(spec, 4, 2).next_samples(100_000);
    let cross: Complex =
        a.iter().zip(&b).map(|(x, y)| x * y.conj()).sum::<Complex>() / a.len() as f64;
    let rho = cross.norm() / (mean_power(&a) * mean_power(&b)).sqrt();
    assert!(rho < 0.01, "cross-correlation {rho}");
}

#[test]
fn unit_power_for_every_model() {
    let specs = [
        FadingSpec::rayleigh(100.0, 1e3),
        FadingSpec::rayleigh(25.0, 1e4),
        FadingSpec::rician(1.0, 100.0, 0.0, 1e3),
        FadingSpec::rician(4.0, 50.0, 100.0, 1e3),
        FadingSpec::rician(10.0, 100.0, -100.0, 1e3),
    ];
    for (i, spec) in specs.into_iter().enumerate() {
        let p = mean_power(&process(spec.clone(), 5, i as u64).next_samples(1_000_000));
        assert!((p - 1.0).abs() < 0.01, "{spec:?}: power {p}");
    }
}

#[test]
fn los_only_limit() {
    let mut spec = FadingSpec::rician(1e12, 100.0, 0.0, 1e3);
    spec.los_phase_rad = 0.7;
    let target = Complex::from_polar(1.0, 0.7);
    for z in process(spec, 6, 0).next_samples(10_000) {
        assert!((z - target).norm() < 1e-5);
    }
}

#[test]
fn los_rotation() {
    let (f, fs) = (100.0, 1e3);
    let samples = process(FadingSpec::rician(1e12, 50.0, f, fs), 7, 0).next_samples(5000);
    for (t1, t2) in [(0usize, 1usize), (3, 250), (17, 4999), (1000, 1003)] {
        let got = (samples[t2] / samples[t1]).arg();
        let expect = 2.0 * PI * f * (t2 - t1) as f64 / fs;
        let diff = (got - expect).rem_euclid(2.0 * PI);
        assert!(diff.min(2.0 * PI - diff) < 1e-4, "({t1}, {t2})");
    }
}

#[test]
fn pdf_power_rayleigh_values() {
    assert_eq!(pdf_power_rayleigh(0.0, 2.0).unwrap(), 0.5);
    assert!((pdf_power_rayleigh(2.0, 2.0).unwrap() - (-1.0f64).exp() / 2.0).abs() < 1e-15);
    let f = |m: f64| pdf_power_rayleigh(m, 1.5).unwrap();
    let total = adaptive_simpson(&f, 0.0, 60.0, 1e-10);
    assert!((total - 1.0).abs() < 1e-6, "{total}");
    assert!(pdf_power_rayleigh(-1.0, 1.0).is_err());
    assert!(pdf_power_rayleigh(1.0, 0.0).is_err());
}

#[test]
fn pdf_envelope_rician_values() {
    assert_eq!(pdf_envelope_rician(0.0, 1.0, 0.5).unwrap(), 0.0);
    for i in 0..100 {
        let x = 5.0 * i as f64 / 99.0;
        let alpha2 = 0.3;
        let rayleigh = x / alpha2 * (-x * x / (2.0 * alpha2)).exp();
        assert!((pdf_envelope_rician(x, 0.0, alpha2).unwrap() - rayleigh).abs() < 1e-12);
    }
    for (cm, alpha2) in [(1.0, 0.5), (3.0, 0.05), (0.2, 2.0)] {
        let f = |x: f64| pdf_envelope_rician(x, cm, alpha2).unwrap();
        let total = adaptive_simpson(&f, 0.0, cm + 20.0 * f64::sqrt(alpha2), 1e-11);
        assert!((total - 1.0).abs() < 1e-6, "({cm}, {alpha2}): {total}");
    }
    assert!(pdf_envelope_rician(1.0, -0.1, 0.5).is_err());
    assert!(pdf_envelope_rician(1.0, 0.1, 0.0).is_err());
}

#[test]
fn tabulated_cdf_matches_quadrature() {
    let (cm, alpha2) = (0.5f64.sqrt(), 0.25);
    let cdf = EnvelopeCdf::rician(cm, alpha2).unwrap();
    let f = |x: f64| pdf_envelope_rician(x, cm, alpha2).unwrap();
    for x in [0.1, 0.4, 0.7, 1.0, 1.3, 2.0, 3.0] {
        let oracle = adaptive_simpson(&f, 0.0, x, 1e-12);
        assert!((cdf.eval(x) - oracle).abs() < 1e-7, "x={x}");
    }
}

#[test]
fn k_factor_ratio() {
    assert_eq!(k_factor(0.0, 3.0).unwrap(), 0.0);
    assert_eq!(k_factor(1.0, 1.0).unwrap(), 1.0);
    assert_eq!(k_factor(2.0, 0.5).unwrap(), 4.0);
    assert!(k_factor(1.0, 0.0).is_err());
}

#[test]
fn rician_k0_matches_rayleigh() {
    let envelope = |spec: FadingSpec, stream| -> Vec<f64> {
        process(spec, 8, stream)
            .next_samples(100_000)
            .iter()
            .map(|z| z.norm())
            .collect()
    };
    let a = envelope(FadingSpec::rayleigh(100.0, 1e3), 1);
    let b = envelope(FadingSpec::rician(0.0, 100.0, 0.0, 1e3), 2);
    let d = ks_two_sample(&a, &b);
    assert!(d < 0.01, "two-sample KS {d}");
}

#[test]
fn validation_stats() {
    let mut p = process(FadingSpec::rayleigh(100.0, 1e3), 9, 0);
    assert!(validate_process(&mut p, 99_999).is_err());
    let stats = validate_process(&mut p, 200_000).unwrap();
    assert!((0.0..=1.0).contains(&stats.ks_statistic));
    assert!(stats.autocorr_lags.len() >= 20);
    assert!(stats.autocorr_lags.windows(2).all(|w| w[0].0 < w[1].0));
    let last = stats.autocorr_lags.last().unwrap().0;
    assert!((last * 100.0 - 2.0).abs() < 1e-9);
}
