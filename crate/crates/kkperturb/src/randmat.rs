//! Seeded random matrix generators for the verification suites.
//!
//! Every suite draws from ChaCha8 with an explicit seed so runs are
//! reproducible; the generator identity is recorded in report config hashes.

use ndarray::Array2;
use num_complex::Complex64 as C64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::opcore::{apply_function, ComplexMatrix, HermitianOperator};

/// Name of the pseudo-random generator, recorded in run configurations.
pub const RNG_ALGORITHM: &str = "chacha8";

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rand_complex(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
    ComplexMatrix::new(Array2::from_shape_fn((dim, dim), |_| {
        C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    }))
    .expect("finite entries")
}

pub fn rand_hermitian(rng: &mut ChaCha8Rng, dim: usize) -> HermitianOperator {
    let m = rand_complex(rng, dim);
    HermitianOperator::from_matrix(m.hermitian_part()).expect("hermitian by construction")
}

/// Random unitary from the eigenbasis of a random Hermitian matrix.
pub fn rand_unitary(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
    let h = rand_hermitian(rng, dim);
    h.eig().expect("eig of random hermitian").vectors.clone()
}

/// Random positive definite Hermitian with condition number at most `cond`.
///
/// Eigenvalues are spread log-uniformly in [1/sqrt(cond), sqrt(cond)].
pub fn rand_positive_with_cond(rng: &mut ChaCha8Rng, dim: usize, cond: f64) -> HermitianOperator {
    let h = rand_hermitian(rng, dim);
    let half_log = cond.max(1.0).ln() / 2.0;
    let eig = h.eig().expect("eig");
    let (lo, hi) = (
        eig.eigenvalues[0],
        eig.eigenvalues[dim - 1].max(eig.eigenvalues[0] + 1e-9),
    );
    let width = hi - lo;
    apply_function(
        &h,
        |x| (((x - lo) / width) * 2.0 * half_log - half_log).exp(),
        "log-uniform spectrum",
    )
    .expect("positive rescale")
}

/// Random positive semidefinite matrix (possibly singular).
pub fn rand_psd(rng: &mut ChaCha8Rng, dim: usize) -> HermitianOperator {
    let m = rand_complex(rng, dim);
    HermitianOperator::from_matrix(m.adjoint().mul(&m)).expect("psd gram matrix")
}

/// Random invertible (generally non-Hermitian) matrix with condition number
/// at most `cond`: U diag(s) V* with log-uniform singular values.
pub fn rand_invertible_with_cond(rng: &mut ChaCha8Rng, dim: usize, cond: f64) -> ComplexMatrix {
    let u = rand_unitary(rng, dim);
    let v = rand_unitary(rng, dim);
    let half_log = cond.max(1.0).ln() / 2.0;
    let s: Vec<f64> = (0..dim)
        .map(|_| (rng.gen_range(-1.0..1.0) * half_log).exp())
        .collect();
    u.scale_columns(&s).mul(&v.adjoint())
}
