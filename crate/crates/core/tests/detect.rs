use mimosim::detect::{
    detect, ml_detect, mmse_estimate, scaled_qpsk, zf_detect, zf_estimate, DetectorKind,
};
use mimosim::modem::{qpsk_slice, QPSK};
use mimosim::numerics::StreamId;
use mimosim::sim::wilson_interval;
use mimosim::{Complex, ComplexMatrix, RngStream};

fn random_h(rng: &mut RngStream, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| rng.complex_gaussian(1.0))
}

fn random_x(rng: &mut RngStream, constellation: &[Complex], n: usize) -> Vec<Complex> {
    (0..n)
        .map(|_| constellation[(rng.next_u64() % 4) as usize])
        .collect()
}

fn add_noise(rng: &mut RngStream, y: &mut [Complex], noise_var: f64) {
    for v in y.iter_mut() {
        *v += rng.complex_gaussian(noise_var);
    }
}

/// Enumerates hypotheses in descending index order as a mixed-radix counter
/// with stream 0 least significant, keeping the lowest lexicographic index
/// among equal metrics.
fn reverse_enumerator(h: &ComplexMatrix, y: &[Complex], constellation: &[Complex]) -> Vec<Complex> {
    let n = h.cols();
    let m = constellation.len();
    let total = m.pow(n as u32);
    let lex_index = |digits: &[usize]| digits.iter().fold(0, |acc, &d| acc * m + d);
    let mut best: Option<(f64, usize, Vec<usize>)> = None;
    for code in (0..total).rev() {
        let digits: Vec<usize> = (0..n).map(|t| (code / m.pow(t as u32)) % m).collect();
        let x: Vec<Complex> = digits.iter().map(|&d| constellation[d]).collect();
        let hx = h.mul_vec(&x).unwrap();
        let metric: f64 = y.iter().zip(&hx).map(|(a, b)| (a - b).norm_sqr()).sum();
        let idx = lex_index(&digits);
        let better = match &best {
            None => true,
            Some((bm, bi, _)) => metric < *bm || (metric == *bm && idx < *bi),
        };
        if better {
            best = Some((metric, idx, digits));
        }
    }
    best.unwrap().2.iter().map(|&d| constellation[d]).collect()
}

/// Gram–Schmidt on the columns of a random matrix, then column scaling.
fn orthogonal_columns(rng: &mut RngStream, n: usize) -> ComplexMatrix {
    let a = random_h(rng, n);
    let mut cols: Vec<Vec<Complex>> = Vec::new();
    for j in 0..n {
        let mut v = a.column(j);
        for q in &cols {
            let proj: Complex = q.iter().zip(&v).map(|(qi, vi)| qi.conj() * vi).sum();
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= proj * qi;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.iter().map(|z| z / norm).collect());
    }
    let scales: Vec<f64> = (0..n).map(|j| 0.5 + j as f64 * 0.4).collect();
    ComplexMatrix::from_fn(n, n, |r, c| cols[c][r] * scales[c])
}

#[test]
fn ml_matches_reverse_enumerator() {
    let mut rng = RngStream::new(1, StreamId(0));
    let c = scaled_qpsk(4);
    for _ in 0..1000 {
        let h = random_h(&mut rng, 4);
        let mut y = h.mul_vec(&random_x(&mut rng, &c, 4)).unwrap();
        add_noise(&mut rng, &mut y, 0.2);
        assert_eq!(
            ml_detect(&h, &y, &c).unwrap().0,
            reverse_enumerator(&h, &y, &c)
        );
    }
    // All-tie case: both pick hypothesis 0.
    let h = ComplexMatrix::zeros(2, 2);
    let y = [Complex::new(0.0, 0.0); 2];
    assert_eq!(
        ml_detect(&h, &y, &QPSK).unwrap().0,
        reverse_enumerator(&h, &y, &QPSK)
    );
}

#[test]
fn ml_with_orthogonal_columns_decouples() {
    let mut rng = RngStream::new(2, StreamId(0));
    for _ in 0..1000 {
        let h = orthogonal_columns(&mut rng, 4);
        let mut y = h.mul_vec(&random_x(&mut rng, &QPSK, 4)).unwrap();
        add_noise(&mut rng, &mut y, 0.5);
        let per_stream: Vec<Complex> = (0..4)
            .map(|t| {
                let col = h.column(t);
                let z: Complex = col.iter().zip(&y).map(|(hc, yc)| hc.conj() * yc).sum();
                QPSK[qpsk_slice(z)]
            })
            .collect();
        assert_eq!(ml_detect(&h, &y, &QPSK).unwrap().0, per_stream);
    }
}

#[test]
fn ml_scaling_invariance() {
    let mut rng = RngStream::new(3, StreamId(0));
    let c = scaled_qpsk(4);
    for _ in 0..300 {
        let h = random_h(&mut rng, 4);
        let mut y = h.mul_vec(&random_x(&mut rng, &c, 4)).unwrap();
        add_noise(&mut rng, &mut y, 0.3);
        let a = rng.complex_gaussian(4.0);
        let ys: Vec<Complex> = y.iter().map(|v| v * a).collect();
        assert_eq!(
            ml_detect(&h, &y, &c).unwrap(),
            ml_detect(&h.scale(a), &ys, &c).unwrap()
        );
    }
}

#[test]
fn zf_is_least_squares() {
    let mut rng = RngStream::new(4, StreamId(0));
    let c = scaled_qpsk(4);
    for _ in 0..500 {
        let h = ComplexMatrix::from_fn(4, 3, |_, _| rng.complex_gaussian(1.0));
        let x = random_x(&mut rng, &c, 3);
        let y = h.mul_vec(&x).unwrap();
        let est = zf_estimate(&h, &y).unwrap();
        assert!(est.iter().zip(&x).all(|(a, b)| (a - b).norm() < 1e-9));
        // Noisy: the residual is orthogonal to the column space.
        let mut yn = y.clone();
        add_noise(&mut rng, &mut yn, 0.5);
        let est = zf_estimate(&h, &yn).unwrap();
        let fitted = h.mul_vec(&est).unwrap();
        let residual: Vec<Complex> = yn.iter().zip(&fitted).map(|(a, b)| a - b).collect();
        for g in h.hermitian().mul_vec(&residual).unwrap() {
            assert!(g.norm() < 1e-9);
        }
    }
}

#[test]
fn mmse_approaches_zf() {
    let mut rng = RngStream::new(5, StreamId(0));
    let mut checked = 0;
    while checked < 500 {
        let h = random_h(&mut rng, 4);
        let gram_inv = h.hermitian().mat_mul(&h).unwrap().inverse().unwrap();
        if gram_inv.frobenius_sqr().sqrt() > 100.0 {
            continue;
        }
        let y: Vec<Complex> = (0..4).map(|_| rng.complex_gaussian(1.0)).collect();
        let zf = zf_estimate(&h, &y).unwrap();
        let mmse = mmse_estimate(&h, &y, 1e-12).unwrap();
        let diff = zf
            .iter()
            .zip(&mmse)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(diff < 1e-8, "{diff}");
        assert_eq!(
            detect(DetectorKind::Mmse, &h, &y, 0.0).unwrap(),
            zf_detect(&h, &y).unwrap()
        );
        checked += 1;
    }
}

#[test]
fn mmse_mse_not_worse_than_zf() {
    let mut rng = RngStream::new(6, StreamId(0));
    let c = scaled_qpsk(4);
    let noise_var = 0.1;
    let (mut zf_mse, mut mmse_mse) = (0.0, 0.0);
    for _ in 0..10_000 {
        let h = random_h(&mut rng, 4);
        let x = random_x(&mut rng, &c, 4);
        let mut y = h.mul_vec(&x).unwrap();
        add_noise(&mut rng, &mut y, noise_var);
        let err = |e: Vec<Complex>| {
            e.iter()
                .zip(&x)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
        };
        zf_mse += err(zf_estimate(&h, &y).unwrap());
        mmse_mse += err(mmse_estimate(&h, &y, noise_var).unwrap());
    }
    assert!(mmse_mse <= zf_mse, "mmse {mmse_mse} zf {zf_mse}");
}

#[test]
fn ml_dominates_linear_detectors() {
    let mut rng = RngStream::new(7, StreamId(0));
    let c = scaled_qpsk(4);
    let noise_var = 0.1;
    let trials = 100_000u64;
    let mut errors = [0u64; 3];
    for _ in 0..trials {
        let h = random_h(&mut rng, 4);
        let x = random_x(&mut rng, &c, 4);
        let mut y = h.mul_vec(&x).unwrap();
        add_noise(&mut rng, &mut y, noise_var);
        let sliced_x: Vec<usize> = x.iter().map(|&z| qpsk_slice(z)).collect();
        for (k, kind) in DetectorKind::ALL.into_iter().enumerate() {
            let got: Vec<usize> = detect(kind, &h, &y, noise_var)
                .unwrap()
                .iter()
                .map(|&z| qpsk_slice(z))
                .collect();
            errors[k] += u64::from(got != sliced_x);
        }
    }
    let [zf, mmse, ml] = errors.map(|e| wilson_interval(e, trials).unwrap());
    // ML is never CI-worse than either linear detector.
    assert!(
        ml.0 <= zf.1 && ml.0 <= mmse.1,
        "ml {ml:?} zf {zf:?} mmse {mmse:?}"
    );
    assert!(
        errors[2] <= errors[0] && errors[2] <= errors[1],
        "{errors:?}"
    );
}
