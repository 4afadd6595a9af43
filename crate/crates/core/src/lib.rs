//! Entanglement of formation of two-mode Gaussian states.
//!
//! States are described by 4×4 covariance matrices in the ordering
//! `(x_A, p_A, x_B, p_B)` with the vacuum normalized to the identity. The
//! entanglement of formation is obtained from the minimal EPR-like
//! uncertainty `Δ′₀` as `f(Δ′₀)`, after reducing the state to standard form
//! and solving for the two local squeezing factors.
//!
//! ```
//! use gauss_eof::{eof, StandardFormParams};
//!
//! let report = eof(&StandardFormParams::new(2.0, 1.5, 1.0, -1.0)).unwrap();
//! assert!((report.eof - 0.2022298409).abs() < 1e-7);
//! ```

pub mod benchmark;
pub mod bounds;
pub mod decomposition;
pub mod eof;
pub mod epr;
pub mod error;
pub mod fock;
pub mod io;
pub mod numerics;
pub mod solver;
pub mod sweeps;
pub mod symplectic;


pub use bounds::{bounds_report, gaussian_eof, upper_bound, lower_bound, BoundsReport};
pub use decomposition::{verify_decomposition, DecompositionReport};
pub use eof::{eof, f_aux, amplifier_family, squeezed_thermal_eof, symmetric_eof, EofReport, Method};
pub use error::{Error, Result};
pub use symplectic::{reduce_to_standard_params, validate_cm, CovarianceMatrix, StandardFormParams};
