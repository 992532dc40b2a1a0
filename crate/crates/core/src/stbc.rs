//! Orthogonal space-time block codes in dispersion-matrix form.
//!
//! A codeword for the symbols `s_1..s_k` is
//! `X(s) = Σ_i (A_i·Re(s_i) + j·B_i·Im(s_i))`, a `T×N_t` matrix with
//! `X(s)ᴴX(s) = (Σ|s_i|²)·I`. Five designs are supported:
//!
//! | N_t | rate | k | T | design |
//! |-----|------|---|---|--------|
//! | 2   | 1    | 2 | 2 | Alamouti |
//! | 3   | 1/2  | 4 | 8 | G3 |
//! | 3   | 3/4  | 3 | 4 | H3 |
//! | 4   | 1/2  | 4 | 8 | G4 |
//! | 4   | 3/4  | 3 | 4 | H4 |

use crate::modem::SymbolBlock;
use crate::numerics::{Complex, ComplexMatrix, J, ZERO};
use crate::{Error, Result};
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CodeRate {
    One,
    Half,
    ThreeQuarters,
}

impl CodeRate {
    pub fn value(self) -> f64 {
        match self {
            CodeRate::One => 1.0,
            CodeRate::Half => 0.5,
            CodeRate::ThreeQuarters => 0.75,
        }
    }
}

impl fmt::Display for CodeRate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CodeRate::One => "1",
            CodeRate::Half => "1/2",
            CodeRate::ThreeQuarters => "3/4",
        })
    }
}

impl FromStr for CodeRate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1" | "1/1" => Ok(CodeRate::One),
            "1/2" | "0.5" => Ok(CodeRate::Half),
            "3/4" | "0.75" => Ok(CodeRate::ThreeQuarters),
            other => Err(Error::Domain(format!("unknown code rate '{other}'"))),
        }
    }
}

/// `(n_tx, rate)` selecting one of the supported designs, written `4x3/4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CodeId {
    pub n_tx: usize,
    pub rate: CodeRate,
}

impl CodeId {
    pub const ALL: [CodeId; 5] = [
        CodeId {
            n_tx: 2,
            rate: CodeRate::One,
        },
        CodeId {
            n_tx: 3,
            rate: CodeRate::Half,
        },
        CodeId {
            n_tx: 3,
            rate: CodeRate::ThreeQuarters,
        },
        CodeId {
            n_tx: 4,
            rate: CodeRate::Half,
        },
        CodeId {
            n_tx: 4,
            rate: CodeRate::ThreeQuarters,
        },
    ];
}

impl fmt::Display for CodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.n_tx, self.rate)
    }
}

impl FromStr for CodeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (n, rate) = s
            .split_once('x')
            .ok_or_else(|| Error::Domain(format!("code must look like 4x3/4, got '{s}'")))?;
        let n_tx = n
            .trim()
            .parse()
            .map_err(|_| Error::Domain(format!("bad antenna count in '{s}'")))?;
        Ok(CodeId {
            n_tx,
            rate: rate.parse()?,
        })
    }
}

/// One entry `coef · s_sym` (or `coef · s_sym*`) of a code template.
#[derive(Debug, Clone, Copy)]
struct Entry {
    row: usize,
    col: usize,
    sym: usize,
    conj: bool,
    coef: f64,
}

const fn e(row: usize, col: usize, sym: usize, conj: bool, coef: f64) -> Entry {
    Entry {
        row,
        col,
        sym,
        conj,
        coef,
    }
}

const ALAMOUTI: [Entry; 4] = [
    e(0, 0, 0, false, 1.0),
    e(0, 1, 1, false, 1.0),
    e(1, 0, 1, true, -1.0),
    e(1, 1, 0, true, 1.0),
];

// Rows 0..4 are the real orthogonal design on s, rows 4..8 repeat it on s*.
const REAL_ORTHOGONAL_4: [[(usize, f64); 4]; 4] = [
    [(0, 1.0), (1, 1.0), (2, 1.0), (3, 1.0)],
    [(1, -1.0), (0, 1.0), (3, -1.0), (2, 1.0)],
    [(2, -1.0), (3, 1.0), (0, 1.0), (1, -1.0)],
    [(3, -1.0), (2, -1.0), (1, 1.0), (0, 1.0)],
];

fn rate_half_entries(n_tx: usize) -> Vec<Entry> {
    let mut out = Vec::new();
    for half in 0..2 {
        for (r, row) in REAL_ORTHOGONAL_4.iter().enumerate() {
            for (col, &(sym, sign)) in row.iter().enumerate().take(n_tx) {
                out.push(e(half * 4 + r, col, sym, half == 1, sign * FRAC_1_SQRT_2));
            }
        }
    }
    out
}

const RATE_THREE_QUARTERS_4: [Entry; 12] = [
    e(0, 0, 0, false, 1.0),
    e(0, 1, 1, false, 1.0),
    e(0, 2, 2, false, 1.0),
    e(1, 0, 1, true, -1.0),
    e(1, 1, 0, true, 1.0),
    e(1, 3, 2, false, 1.0),
    e(2, 0, 2, true, -1.0),
    e(2, 2, 0, true, 1.0),
    e(2, 3, 1, false, -1.0),
    e(3, 1, 2, true, -1.0),
    e(3, 2, 1, true, 1.0),
    e(3, 3, 0, false, 1.0),
];

/// An orthogonal design with its dispersion matrices.
#[derive(Debug, Clone)]
pub struct OstbcCode {
    id: CodeId,
    symbols_per_block: usize,
    rows_per_block: usize,
    /// Coefficients of Re(s_i).
    dispersion_a: Vec<ComplexMatrix>,
    /// Coefficients of Im(s_i) (the `j` factor is applied separately).
    dispersion_b: Vec<ComplexMatrix>,
}

impl OstbcCode {
    pub fn new(n_tx: usize, rate: CodeRate) -> Result<Self> {
        let (k, t, entries): (usize, usize, Vec<Entry>) = match (n_tx, rate) {
            (2, CodeRate::One) => (2, 2, ALAMOUTI.to_vec()),
            (3 | 4, CodeRate::Half) => (4, 8, rate_half_entries(n_tx)),
            (3 | 4, CodeRate::ThreeQuarters) => (
                3,
                4,
                RATE_THREE_QUARTERS_4
                    .iter()
                    .copied()
                    .filter(|en| en.col < n_tx)
                    .collect(),
            ),
            _ => {
                return Err(Error::UnsupportedCode {
                    n_tx,
                    rate: rate.to_string(),
                })
            }
        };
        let mut dispersion_a = vec![ComplexMatrix::zeros(t, n_tx); k];
        let mut dispersion_b = vec![ComplexMatrix::zeros(t, n_tx); k];
        for en in entries {
            let c = Complex::new(en.coef, 0.0);
            dispersion_a[en.sym][(en.row, en.col)] += c;
            dispersion_b[en.sym][(en.row, en.col)] += if en.conj { -c } else { c };
        }
        Ok(OstbcCode {
            id: CodeId { n_tx, rate },
            symbols_per_block: k,
            rows_per_block: t,
            dispersion_a,
            dispersion_b,
        })
    }

    pub fn from_id(id: CodeId) -> Result<Self> {
        Self::new(id.n_tx, id.rate)
    }

    pub fn id(&self) -> CodeId {
        self.id
    }

    pub fn n_tx(&self) -> usize {
        self.id.n_tx
    }

    pub fn rate(&self) -> CodeRate {
        self.id.rate
    }

    /// k
    pub fn symbols_per_block(&self) -> usize {
        self.symbols_per_block
    }

    /// T
    pub fn rows_per_block(&self) -> usize {
        self.rows_per_block
    }

    pub fn dispersion_a(&self) -> &[ComplexMatrix] {
        &self.dispersion_a
    }

    pub fn dispersion_b(&self) -> &[ComplexMatrix] {
        &self.dispersion_b
    }

    /// Unscaled codeword `X(s)` for exactly `k` symbols.
    pub fn codeword(&self, symbols: &[Complex]) -> Result<ComplexMatrix> {
        if symbols.len() != self.symbols_per_block {
            return Err(Error::dims(
                format!("{} symbols", self.symbols_per_block),
                format!("{}", symbols.len()),
            ));
        }
        let mut x = ComplexMatrix::zeros(self.rows_per_block, self.n_tx());
        for ((a, b), s) in self
            .dispersion_a
            .iter()
            .zip(&self.dispersion_b)
            .zip(symbols)
        {
            let term = a.scale_real(s.re).add(&b.scale(J * s.im))?;
            x = x.add(&term)?;
        }
        Ok(x)
    }
}

/// One encoded block and the symbols it carries.
#[derive(Debug, Clone, PartialEq)]
pub struct CodewordBlock {
    /// `T×N_t`, already scaled by `1/√N_t`.
    pub matrix: ComplexMatrix,
    pub source_symbols: SymbolBlock,
}

/// Encodes symbols block by block; each block is `X(s)/√N_t`.
pub fn ostbc_encode(code: &OstbcCode, symbols: &[Complex]) -> Result<Vec<CodewordBlock>> {
    let k = code.symbols_per_block();
    if !symbols.len().is_multiple_of(k) {
        return Err(Error::Domain(format!(
            "symbol count {} is not a multiple of the block size {k}",
            symbols.len()
        )));
    }
    let scale = 1.0 / (code.n_tx() as f64).sqrt();
    symbols
        .chunks_exact(k)
        .map(|chunk| {
            Ok(CodewordBlock {
                matrix: code.codeword(chunk)?.scale_real(scale),
                source_symbols: SymbolBlock(chunk.to_vec()),
            })
        })
        .collect()
}

/// Stacks encoded blocks in time order into one `N_s×N_t` matrix.
pub fn concat_blocks(blocks: &[CodewordBlock]) -> Result<ComplexMatrix> {
    let first = blocks
        .first()
        .ok_or_else(|| Error::Domain("no codeword blocks to concatenate".into()))?;
    let cols = first.matrix.cols();
    let mut data = Vec::with_capacity(blocks.len() * first.matrix.rows() * cols);
    for b in blocks {
        if b.matrix.cols() != cols {
            return Err(Error::dims(
                format!("{cols} columns"),
                format!("{}", b.matrix.cols()),
            ));
        }
        data.extend_from_slice(b.matrix.as_slice());
    }
    ComplexMatrix::from_vec(data.len() / cols, cols, data)
}

/// Matched-filter combiner for one block.
///
/// `y` is `T×N_r` (one row per channel use) and `h` the `N_r×N_t` channel
/// assumed constant over the block. The estimates are
/// `√N_t·Re tr((A_i Hᵀ)ᴴ Y)/‖H‖²` for the real parts and the same with
/// `j·B_i` for the imaginary parts, which returns the transmitted symbols
/// exactly for a noiseless block-constant channel. A zero channel yields
/// zero estimates.
pub fn ostbc_combine(
    code: &OstbcCode,
    y: &ComplexMatrix,
    h: &ComplexMatrix,
) -> Result<SymbolBlock> {
    let (t, n_tx) = (code.rows_per_block(), code.n_tx());
    if y.rows() != t || h.cols() != n_tx || y.cols() != h.rows() {
        return Err(Error::dims(
            format!("y {t}xN_r and h N_rx{n_tx}"),
            format!("y {}x{}, h {}x{}", y.rows(), y.cols(), h.rows(), h.cols()),
        ));
    }
    let energy = h.frobenius_sqr();
    if energy == 0.0 {
        return Ok(SymbolBlock(vec![ZERO; code.symbols_per_block()]));
    }
    // z[t][n] = Σ_r y[t][r]·conj(h[r][n])
    let z = y.mat_mul(&h.transpose().hermitian())?;
    let gain = (n_tx as f64).sqrt() / energy;
    let project = |d: &ComplexMatrix, factor: Complex| -> f64 {
        d.as_slice()
            .iter()
            .zip(z.as_slice())
            .map(|(a, zz)| ((a * factor).conj() * zz).re)
            .sum()
    };
    let estimates = code
        .dispersion_a
        .iter()
        .zip(&code.dispersion_b)
        .map(|(a, b)| Complex::new(project(a, Complex::new(1.0, 0.0)), project(b, J)) * gain)
        .collect();
    Ok(SymbolBlock(estimates))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{RngStream, StreamId};

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn block_shapes() {
        let shapes: Vec<(usize, usize)> = CodeId::ALL
            .iter()
            .map(|&id| {
                let code = OstbcCode::from_id(id).unwrap();
                (code.symbols_per_block(), code.rows_per_block())
            })
            .collect();
        assert_eq!(shapes, vec![(2, 2), (4, 8), (3, 4), (4, 8), (3, 4)]);
        for id in CodeId::ALL {
            let code = OstbcCode::from_id(id).unwrap();
            let rate = code.symbols_per_block() as f64 / code.rows_per_block() as f64;
            assert_eq!(rate, id.rate.value());
        }
    }

    #[test]
    fn unsupported_pairs() {
        assert!(matches!(
            OstbcCode::new(2, CodeRate::Half),
            Err(Error::UnsupportedCode { .. })
        ));
        assert!(OstbcCode::new(1, CodeRate::One).is_err());
        assert!(OstbcCode::new(4, CodeRate::One).is_err());
        assert!(OstbcCode::new(5, CodeRate::ThreeQuarters).is_err());
    }

    #[test]
    fn alamouti_layout() {
        let code = OstbcCode::new(2, CodeRate::One).unwrap();
        let (s1, s2) = (c(0.3, -1.1), c(-0.7, 0.2));
        let blocks = ostbc_encode(&code, &[s1, s2]).unwrap();
        let r = FRAC_1_SQRT_2;
        let expected =
            ComplexMatrix::from_rows(&[vec![s1 * r, s2 * r], vec![-s2.conj() * r, s1.conj() * r]])
                .unwrap();
        assert!(blocks[0].matrix.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn zero_symbols_zero_codeword() {
        for id in CodeId::ALL {
            let code = OstbcCode::from_id(id).unwrap();
            let zeros = vec![ZERO; code.symbols_per_block()];
            let b = ostbc_encode(&code, &zeros).unwrap();
            assert_eq!(b[0].matrix.frobenius_sqr(), 0.0);
        }
    }

    #[test]
    fn length_checks() {
        let code = OstbcCode::new(4, CodeRate::ThreeQuarters).unwrap();
        assert!(ostbc_encode(&code, &[ZERO; 4]).is_err());
        assert_eq!(ostbc_encode(&code, &[ZERO; 6]).unwrap().len(), 2);
        let y = ComplexMatrix::zeros(4, 2);
        assert!(ostbc_combine(&code, &y, &ComplexMatrix::zeros(2, 3)).is_err());
        assert!(ostbc_combine(
            &code,
            &ComplexMatrix::zeros(3, 2),
            &ComplexMatrix::zeros(2, 4)
        )
        .is_err());
    }

    #[test]
    fn zero_input_zero_estimate() {
        let mut rng = RngStream::new(3, StreamId(0));
        for id in CodeId::ALL {
            let code = OstbcCode::from_id(id).unwrap();
            let h = ComplexMatrix::from_fn(2, code.n_tx(), |_, _| rng.complex_gaussian(1.0));
            let y = ComplexMatrix::zeros(code.rows_per_block(), 2);
            let est = ostbc_combine(&code, &y, &h).unwrap();
            assert!(est.iter().all(|z| *z == ZERO));
            let est = ostbc_combine(&code, &y, &ComplexMatrix::zeros(2, code.n_tx())).unwrap();
            assert!(est.iter().all(|z| *z == ZERO));
        }
    }

    #[test]
    fn alamouti_identity_channel() {
        let code = OstbcCode::new(2, CodeRate::One).unwrap();
        let s = [c(0.6, 0.8), c(-1.0, 0.0)];
        let x = concat_blocks(&ostbc_encode(&code, &s).unwrap()).unwrap();
        let h = ComplexMatrix::identity(2);
        let y = x.mat_mul(&h.transpose()).unwrap();
        let est = ostbc_combine(&code, &y, &h).unwrap();
        for (a, b) in est.iter().zip(&s) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn code_id_parsing() {
        let id: CodeId = "4x3/4".parse().unwrap();
        assert_eq!(
            id,
            CodeId {
                n_tx: 4,
                rate: CodeRate::ThreeQuarters
            }
        );
        assert_eq!(id.to_string(), "4x3/4");
        assert_eq!("2x1".parse::<CodeId>().unwrap().rate, CodeRate::One);
        assert!("4-3/4".parse::<CodeId>().is_err());
        assert!("4x2/3".parse::<CodeId>().is_err());
    }
}
