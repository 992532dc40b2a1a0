//! Small dense complex linear algebra, seeded random streams and the Bessel
//! functions used by the fading statistics.

mod bessel;
mod matrix;
mod rng;

pub(crate) use bessel::bessel_i0_scaled;
pub use bessel::{bessel_i0, bessel_j0};
pub use matrix::{hermitian_eigen, hermitian_sqrt, ComplexMatrix, SINGULAR_PIVOT};
pub use rng::{RngStream, StreamId};

/// Complex baseband scalar.
pub type Complex = num_complex::Complex64;

pub const ZERO: Complex = Complex::new(0.0, 0.0);
pub const ONE: Complex = Complex::new(1.0, 0.0);
pub const J: Complex = Complex::new(0.0, 1.0);
