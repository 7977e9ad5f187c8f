//! kkperturb: a numerical laboratory for multiplicative perturbations of
//! self-adjoint operators at finite truncation.
//!
//! A self-adjoint operator D with invertible conformal factor mu can be
//! rescaled to mu D mu*; this crate builds desk-scale models (dense complex
//! matrices) of the operators involved, computes their bounded and
//! logarithmic transforms, and verifies the quantitative inequalities that
//! control such perturbations: the Stampfli inner-derivation bound, the
//! fractional-power interpolation inequality, resolvent sandwich bounds,
//! bounded-transform difference estimates, and a converse decomposition
//! D2 = mu D1 mu* + T.
//!
//! Concrete geometries are included as test beds: a noncommutative torus at
//! Fourier truncation, the standard Podles sphere at Peter-Weyl truncation,
//! and the discrete Heisenberg group with its order-2 symbol. The `lab`
//! module sweeps truncation sizes, classifies trends, and persists reports.
//!
//! Most capabilities have a runnable demonstration under `examples/`; the
//! thin `kkperturb` binary drives the same suites from the command line.

pub mod error;
pub mod geom_heisenberg;
pub mod geom_podles;
pub mod geom_torus;
pub mod lab;
pub mod opcore;
pub mod perturb;
pub mod randmat;
pub mod transforms;

pub use error::{Error, Result};
pub use opcore::{ComplexMatrix, EigenDecomposition, HermitianOperator, SingularProfile, ToleranceConfig};
