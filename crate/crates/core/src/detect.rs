//! Spatial-multiplexing detectors for uncoded QPSK: zero-forcing, MMSE and
//! exhaustive maximum likelihood.
//!
//! Every stream carries a QPSK symbol scaled to energy `1/N_t`. The linear
//! detectors slice each equalized stream to its quadrant, which does not
//! depend on that scale.

use crate::modem::{qpsk_slice, SymbolBlock, QPSK};
use crate::numerics::{Complex, ComplexMatrix, ZERO};
use crate::{Error, Result};
use std::fmt;
use std::str::FromStr;

/// Largest number of hypotheses `ml_detect` will enumerate.
pub const ML_MAX_HYPOTHESES: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DetectorKind {
    Zf,
    Mmse,
    Ml,
}

impl DetectorKind {
    pub const ALL: [DetectorKind; 3] = [DetectorKind::Zf, DetectorKind::Mmse, DetectorKind::Ml];

    pub fn name(self) -> &'static str {
        match self {
            DetectorKind::Zf => "zf",
            DetectorKind::Mmse => "mmse",
            DetectorKind::Ml => "ml",
        }
    }
}

impl fmt::Display for DetectorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DetectorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "zf" => Ok(DetectorKind::Zf),
            "mmse" => Ok(DetectorKind::Mmse),
            "ml" => Ok(DetectorKind::Ml),
            other => Err(Error::Domain(format!("unknown detector '{other}'"))),
        }
    }
}

fn check_shapes(h: &ComplexMatrix, y: &[Complex]) -> Result<()> {
    if y.len() != h.rows() {
        return Err(Error::dims(
            format!("y of length {}", h.rows()),
            format!("{}", y.len()),
        ));
    }
    if h.rows() < h.cols() {
        return Err(Error::dims(
            format!("at least {} receive antennas", h.cols()),
            format!("{}", h.rows()),
        ));
    }
    Ok(())
}

/// `(HᴴH + reg·I)⁻¹Hᴴy`.
fn regularized_ls(h: &ComplexMatrix, y: &[Complex], reg: f64) -> Result<Vec<Complex>> {
    check_shapes(h, y)?;
    let hh = h.hermitian();
    let mut gram = hh.mat_mul(h)?;
    if reg != 0.0 {
        for i in 0..gram.rows() {
            gram[(i, i)] += reg;
        }
    }
    gram.inverse()?.mul_vec(&hh.mul_vec(y)?)
}

/// Zero-forcing estimate `(HᴴH)⁻¹Hᴴy` before slicing.
///
/// A singular Gram matrix is reported as [`Error::Singular`].
pub fn zf_estimate(h: &ComplexMatrix, y: &[Complex]) -> Result<Vec<Complex>> {
    regularized_ls(h, y, 0.0)
}

/// MMSE estimate `(HᴴH + noise_var·N_t·I)⁻¹Hᴴy` before slicing.
pub fn mmse_estimate(h: &ComplexMatrix, y: &[Complex], noise_var: f64) -> Result<Vec<Complex>> {
    if !(noise_var >= 0.0) {
        return Err(Error::Domain(format!(
            "noise_var must be >= 0, got {noise_var}"
        )));
    }
    if noise_var.is_infinite() {
        check_shapes(h, y)?;
        return Ok(vec![ZERO; h.cols()]);
    }
    regularized_ls(h, y, noise_var * h.cols() as f64)
}

fn slice_all(estimate: &[Complex]) -> SymbolBlock {
    SymbolBlock(estimate.iter().map(|&z| QPSK[qpsk_slice(z)]).collect())
}

/// Zero-forcing detection, returning unit-energy QPSK decisions.
pub fn zf_detect(h: &ComplexMatrix, y: &[Complex]) -> Result<SymbolBlock> {
    zf_estimate(h, y).map(|e| slice_all(&e))
}

/// MMSE detection, returning unit-energy QPSK decisions.
pub fn mmse_detect(h: &ComplexMatrix, y: &[Complex], noise_var: f64) -> Result<SymbolBlock> {
    mmse_estimate(h, y, noise_var).map(|e| slice_all(&e))
}

/// Exhaustive search for `argmin ‖y − Hx‖²` over `x ∈ constellation^{N_t}`.
///
/// Hypotheses are visited in lexicographic order of constellation indices
/// (stream 0 most significant) and only a strictly smaller metric replaces
/// the incumbent, so ties resolve to the smallest hypothesis index.
pub fn ml_detect(
    h: &ComplexMatrix,
    y: &[Complex],
    constellation: &[Complex],
) -> Result<SymbolBlock> {
    if y.len() != h.rows() {
        return Err(Error::dims(
            format!("y of length {}", h.rows()),
            format!("{}", y.len()),
        ));
    }
    if constellation.is_empty() {
        return Err(Error::Domain("empty constellation".into()));
    }
    let n_tx = h.cols();
    let hypotheses = (constellation.len() as u128)
        .checked_pow(n_tx as u32)
        .unwrap_or(u128::MAX);
    if hypotheses > ML_MAX_HYPOTHESES {
        return Err(Error::HypothesisSpace(hypotheses));
    }
    // images[t][c] = column t of H times constellation point c
    let images: Vec<Vec<Vec<Complex>>> = (0..n_tx)
        .map(|t| {
            let col = h.column(t);
            constellation
                .iter()
                .map(|&s| col.iter().map(|&hc| hc * s).collect())
                .collect()
        })
        .collect();
    let mut search = MlSearch {
        images: &images,
        best_metric: f64::INFINITY,
        best: vec![0; n_tx],
        current: vec![0; n_tx],
    };
    search.descend(0, y.to_vec());
    Ok(SymbolBlock(
        search.best.iter().map(|&i| constellation[i]).collect(),
    ))
}

struct MlSearch<'a> {
    images: &'a [Vec<Vec<Complex>>],
    best_metric: f64,
    best: Vec<usize>,
    current: Vec<usize>,
}

impl MlSearch<'_> {
    fn descend(&mut self, depth: usize, residual: Vec<Complex>) {
        if depth == self.images.len() {
            let metric: f64 = residual.iter().map(|z| z.norm_sqr()).sum();
            if metric < self.best_metric {
                self.best_metric = metric;
                self.best.copy_from_slice(&self.current);
            }
            return;
        }
        for (c, image) in self.images[depth].iter().enumerate() {
            self.current[depth] = c;
            let next: Vec<Complex> = residual.iter().zip(image).map(|(r, v)| r - v).collect();
            self.descend(depth + 1, next);
        }
    }
}

/// QPSK constellation scaled to per-stream energy `1/n_tx`.
pub fn scaled_qpsk(n_tx: usize) -> Vec<Complex> {
    let s = 1.0 / (n_tx as f64).sqrt();
    QPSK.iter().map(|&z| z * s).collect()
}

/// Runs `kind` on one received vector; ML searches over [`scaled_qpsk`].
pub fn detect(
    kind: DetectorKind,
    h: &ComplexMatrix,
    y: &[Complex],
    noise_var: f64,
) -> Result<SymbolBlock> {
    match kind {
        DetectorKind::Zf => zf_detect(h, y),
        DetectorKind::Mmse => mmse_detect(h, y, noise_var),
        DetectorKind::Ml => ml_detect(h, y, &scaled_qpsk(h.cols())),
    }
}
