//! Modified Bessel I₀ and Bessel J₀ for real arguments.
//!
//! Truncated power series below [`SERIES_LIMIT`], Hankel asymptotic
//! expansions above it.

use crate::{Error, Result};
use std::f64::consts::{FRAC_PI_4, PI};

const SERIES_LIMIT: f64 = 15.0;
const MAX_ARG: f64 = 100.0;

fn check_domain(name: &str, x: f64) -> Result<()> {
    if (0.0..=MAX_ARG).contains(&x) {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{name} defined for 0 <= x <= {MAX_ARG}, got {x}"
        )))
    }
}

/// Modified Bessel function of the first kind, order zero, on `[0, 100]`.
pub fn bessel_i0(x: f64) -> Result<f64> {
    check_domain("bessel_i0", x)?;
    Ok(if x < SERIES_LIMIT {
        i0_series(x)
    } else {
        x.exp() * i0_asymptotic_scaled(x)
    })
}

/// `exp(-x)·I₀(x)` for any `x ≥ 0`; no overflow for large arguments.
pub(crate) fn bessel_i0_scaled(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x < SERIES_LIMIT {
        (-x).exp() * i0_series(x)
    } else {
        i0_asymptotic_scaled(x)
    }
}

fn i0_series(x: f64) -> f64 {
    // Σ (x²/4)^k / (k!)²
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        term *= q / (k * k) as f64;
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    sum
}

fn i0_asymptotic_scaled(x: f64) -> f64 {
    // e^{-x} I₀(x) ~ (2πx)^{-1/2} Σ [(2k-1)!!]² / (k! (8x)^k)
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..60 {
        let next = term * ((2 * k - 1) * (2 * k - 1)) as f64 / (8.0 * k as f64 * x);
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    sum / (2.0 * PI * x).sqrt()
}

/// Bessel function of the first kind, order zero, on `[0, 100]`.
pub fn bessel_j0(x: f64) -> Result<f64> {
    check_domain("bessel_j0", x)?;
    Ok(if x < SERIES_LIMIT {
        j0_series(x)
    } else {
        j0_asymptotic(x)
    })
}

fn j0_series(x: f64) -> f64 {
    // Σ (-1)^k (x²/4)^k / (k!)²
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        term *= -q / (k * k) as f64;
        sum += term;
        if term.abs() < 1e-18 {
            break;
        }
    }
    sum
}

fn j0_asymptotic(x: f64) -> f64 {
    // J₀(x) = sqrt(2/(πx)) [P cos(x - π/4) - Q sin(x - π/4)],
    // a_k = [(2k-1)!!]² / (k! 8^k), P = Σ (-1)^m a_{2m} x^{-2m},
    // Q = -Σ (-1)^m a_{2m+1} x^{-(2m+1)}.
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0; // a_k / x^k
    for k in 1..60 {
        let next = term * ((2 * k - 1) * (2 * k - 1)) as f64 / (8.0 * k as f64 * x);
        if next >= term {
            break;
        }
        term = next;
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q -= sign * term;
        }
        if term < 1e-17 {
            break;
        }
    }
    let phase = x - FRAC_PI_4;
    (2.0 / (PI * x)).sqrt() * (p * phase.cos() - q * phase.sin())
}
