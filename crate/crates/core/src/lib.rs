//! Validated spectral methods on the unit disk.
//!
//! Jacobi polynomials and Gauss–Jacobi quadrature with rigorous
//! enclosures, the matrix multiplication transform between Zernike
//! coefficients and quadrature values, sparse ladder operators, and a
//! Newton–Kantorovich pipeline that proves existence of positive
//! solutions of a Lane–Emden type equation on the disk.

// lets shared test helpers name the crate the same way from inside and out
extern crate self as diskcap;

pub mod error;
pub mod interval;
pub mod jacobi;
pub mod mmt;
pub mod nk;
pub mod pde_cap;
pub mod quadrature;
pub mod serial;
pub mod zernike;

#[cfg(test)]
mod test_oracle;

pub use error::{Error, Result};
pub use interval::{BigInterval, Interval, IntervalMatrix, Precision, Scalar};
