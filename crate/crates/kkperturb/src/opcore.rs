//! Dense complex Hermitian linear algebra: eigendecompositions, functional
//! calculus, operator norms, singular values and positivity checks.
//!
//! Everything here works on plain dense matrices; truncation dimensions stay
//! small enough (a few thousand) that eigendecomposition dominates anyway, so
//! there is no sparse path.

use ndarray::{Array1, Array2};
use ndarray_linalg::{Eigh, EigValsh, JobSvd, SVDDC, UPLO};
use num_complex::Complex64 as C64;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Tolerances shared across the crate.
///
/// `inequality_slack` is the additive slack granted when checking operator
/// inequalities that hold exactly in infinite dimensions.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct ToleranceConfig {
    pub hermitian_tol: f64,
    pub reconstruction_tol: f64,
    pub inequality_slack: f64,
    pub quadrature_rel_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            hermitian_tol: 1e-8,
            reconstruction_tol: 1e-9,
            inequality_slack: 1e-9,
            quadrature_rel_tol: 1e-6,
        }
    }
}

impl ToleranceConfig {
    fn validate(&self) -> Result<()> {
        let all_positive = self.hermitian_tol > 0.0
            && self.reconstruction_tol > 0.0
            && self.inequality_slack > 0.0
            && self.quadrature_rel_tol > 0.0;
        if !all_positive {
            return Err(Error::Parameter("tolerances must be strictly positive".into()));
        }
        if self.inequality_slack > 1e-6 {
            return Err(Error::Parameter(format!(
                "inequality_slack {} exceeds 1e-6",
                self.inequality_slack
            )));
        }
        Ok(())
    }

    pub fn checked(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }
}

/// Square complex matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    data: Array2<C64>,
}

impl ComplexMatrix {
    pub fn new(data: Array2<C64>) -> Result<Self> {
        let (r, c) = data.dim();
        if r != c {
            return Err(Error::DimensionMismatch { left: r, right: c });
        }
        if r == 0 {
            return Err(Error::Parameter("matrix dimension must be at least 1".into()));
        }
        if !data.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::Parameter("matrix entries must be finite".into()));
        }
        Ok(ComplexMatrix { data })
    }

    pub fn from_fn(dim: usize, f: impl FnMut((usize, usize)) -> C64) -> Result<Self> {
        ComplexMatrix::new(Array2::from_shape_fn((dim, dim), f))
    }

    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix { data: Array2::zeros((dim, dim)) }
    }

    pub fn identity(dim: usize) -> Self {
        ComplexMatrix { data: Array2::eye(dim) }
    }

    pub fn diagonal(entries: &[C64]) -> Self {
        let mut m = Array2::zeros((entries.len(), entries.len()));
        for (i, &z) in entries.iter().enumerate() {
            m[[i, i]] = z;
        }
        ComplexMatrix { data: m }
    }

    pub fn real_diagonal(entries: &[f64]) -> Self {
        ComplexMatrix::diagonal(&entries.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>())
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn array(&self) -> &Array2<C64> {
        &self.data
    }

    /// Mutable entry access; the caller keeps entries finite.
    pub fn array_mut(&mut self) -> &mut Array2<C64> {
        &mut self.data
    }

    pub fn into_array(self) -> Array2<C64> {
        self.data
    }

    pub fn adjoint(&self) -> ComplexMatrix {
        ComplexMatrix { data: self.data.t().mapv(|z| z.conj()) }
    }

    /// Hermitian part (M + M*)/2.
    pub fn hermitian_part(&self) -> ComplexMatrix {
        let adj = self.data.t().mapv(|z| z.conj());
        ComplexMatrix { data: (&self.data + &adj) * C64::new(0.5, 0.0) }
    }

    pub fn mul(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix { data: self.data.dot(&rhs.data) }
    }

    pub fn add(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix { data: &self.data + &rhs.data }
    }

    pub fn sub(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix { data: &self.data - &rhs.data }
    }

    pub fn scale(&self, s: C64) -> ComplexMatrix {
        ComplexMatrix { data: self.data.mapv(|z| z * s) }
    }

    /// Scale column j by d[j]; equivalent to right multiplication by diag(d).
    pub fn scale_columns(&self, d: &[f64]) -> ComplexMatrix {
        let mut m = self.data.clone();
        for (j, mut col) in m.columns_mut().into_iter().enumerate() {
            let s = C64::new(d[j], 0.0);
            col.mapv_inplace(|z| z * s);
        }
        ComplexMatrix { data: m }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Restrict to the given column indices (keeping all rows).
    pub fn select_columns(&self, cols: &[usize]) -> ComplexMatrix {
        let n = self.dim();
        let mut m = Array2::zeros((n, cols.len()));
        for (jj, &j) in cols.iter().enumerate() {
            m.column_mut(jj).assign(&self.data.column(j));
        }
        ComplexMatrix { data: m }
    }

    /// Square compression to the given index set (rows and columns).
    pub fn compress(&self, idx: &[usize]) -> ComplexMatrix {
        let mut m = Array2::zeros((idx.len(), idx.len()));
        for (ii, &i) in idx.iter().enumerate() {
            for (jj, &j) in idx.iter().enumerate() {
                m[[ii, jj]] = self.data[[i, j]];
            }
        }
        ComplexMatrix { data: m }
    }
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// U f(Λ) U*.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let scaled: Vec<f64> = self.eigenvalues.iter().map(|&x| f(x)).collect();
        let uf = self.vectors.scale_columns(&scaled);
        uf.mul(&self.vectors.adjoint())
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply(|x| x)
    }
}

/// Hermitian matrix standing in for a self-adjoint operator at truncation.
///
/// Inputs are symmetrized on construction; the recorded asymmetry must stay
/// below `hermitian_tol` relative to the norm scale. The eigendecomposition
/// is computed at most once and cached.
#[derive(Debug)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
    asymmetry: f64,
    eig: OnceLock<EigenDecomposition>,
}

impl Clone for HermitianOperator {
    fn clone(&self) -> Self {
        let eig = OnceLock::new();
        if let Some(e) = self.eig.get() {
            let _ = eig.set(e.clone());
        }
        HermitianOperator { matrix: self.matrix.clone(), asymmetry: self.asymmetry, eig }
    }
}

impl HermitianOperator {
    pub fn new(m: ComplexMatrix, tol: &ToleranceConfig) -> Result<Self> {
        let herm = m.hermitian_part();
        let asymmetry = m.sub(&herm).frobenius_norm() * 2.0;
        let scale = 1.0 + m.frobenius_norm();
        if asymmetry > tol.hermitian_tol * scale {
            return Err(Error::NotHermitian { asymmetry, tol: tol.hermitian_tol * scale });
        }
        Ok(HermitianOperator { matrix: herm, asymmetry, eig: OnceLock::new() })
    }

    pub fn from_matrix(m: ComplexMatrix) -> Result<Self> {
        HermitianOperator::new(m, &ToleranceConfig::default())
    }

    pub fn real_diagonal(entries: &[f64]) -> Self {
        HermitianOperator {
            matrix: ComplexMatrix::real_diagonal(entries),
            asymmetry: 0.0,
            eig: OnceLock::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Asymmetry norm recorded when the input was symmetrized.
    pub fn asymmetry(&self) -> f64 {
        self.asymmetry
    }

    /// Cached Hermitian eigendecomposition.
    pub fn eig(&self) -> Result<&EigenDecomposition> {
        if let Some(e) = self.eig.get() {
            return Ok(e);
        }
        let e = hermitian_eig(self)?;
        Ok(self.eig.get_or_init(|| e))
    }

    pub fn scale(&self, s: f64) -> HermitianOperator {
        // Scaling preserves Hermiticity; eigenvalues move by s but the cache
        // is simply dropped.
        HermitianOperator {
            matrix: self.matrix.scale(C64::new(s, 0.0)),
            asymmetry: self.asymmetry * s.abs(),
            eig: OnceLock::new(),
        }
    }
}

/// Eigendecomposition via LAPACK, eigenvalues ascending.
///
/// Some LAPACKE bindings hand back the eigenvectors of the conjugate matrix
/// for row-major complex input. The orientation is decided by voting on the
/// columns with the largest imaginary content (real columns cannot tell the
/// two apart), and a probe-vector identity guards the final result.
pub fn hermitian_eig(h: &HermitianOperator) -> Result<EigenDecomposition> {
    let (vals, mut vecs) = h
        .matrix
        .array()
        .eigh(UPLO::Lower)
        .map_err(|e| Error::EigenSolver { detail: format!("{e}") })?;
    let n = h.dim();

    let mut by_imag: Vec<(f64, usize)> = (0..n)
        .map(|col| (vecs.column(col).iter().map(|z| z.im.abs()).sum::<f64>(), col))
        .collect();
    by_imag.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let mut residual_direct = 0.0;
    let mut residual_conj = 0.0;
    for &(imag_mass, col) in by_imag.iter().take(4) {
        if imag_mass < 1e-12 {
            break;
        }
        let v = vecs.column(col).to_owned();
        let lambda = C64::new(vals[col], 0.0);
        let hv = h.matrix.array().dot(&v);
        residual_direct += hv
            .iter()
            .zip(v.iter())
            .map(|(a, b)| (a - b * lambda).norm_sqr())
            .sum::<f64>();
        let vc = v.mapv(|z| z.conj());
        let hvc = h.matrix.array().dot(&vc);
        residual_conj += hvc
            .iter()
            .zip(vc.iter())
            .map(|(a, b)| (a - b * lambda).norm_sqr())
            .sum::<f64>();
    }
    if residual_conj < residual_direct {
        vecs.mapv_inplace(|z| z.conj());
    }

    // Probe-vector guard: H (U z) must match U (Lambda z).
    let probe = ndarray::Array1::from_shape_fn(n, |i| {
        C64::new(
            (((i * 73 + 11) % 127) as f64) / 127.0 - 0.5,
            (((i * 151 + 29) % 113) as f64) / 113.0 - 0.5,
        )
    });
    let uz = vecs.dot(&probe);
    let h_uz = h.matrix.array().dot(&uz);
    let scaled = ndarray::Array1::from_shape_fn(n, |i| probe[i] * C64::new(vals[i], 0.0));
    let u_lz = vecs.dot(&scaled);
    let probe_norm = uz.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let defect = h_uz
        .iter()
        .zip(u_lz.iter())
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let scale = (1.0 + vals.iter().cloned().fold(0.0f64, |m, x| m.max(x.abs()))) * probe_norm;
    if defect > 1e-7 * scale {
        return Err(Error::EigenSolver {
            detail: format!("eigenvalue identity defect {defect:.3e} after orientation fix"),
        });
    }

    Ok(EigenDecomposition {
        eigenvalues: vals.to_vec(),
        vectors: ComplexMatrix { data: vecs },
    })
}

/// Continuous functional calculus: U f(Λ) U*.
///
/// `label` names the function in diagnostics when f is not finite on the
/// spectrum.
pub fn apply_function(
    h: &HermitianOperator,
    f: impl Fn(f64) -> f64,
    label: &str,
) -> Result<HermitianOperator> {
    let eig = h.eig()?;
    for &x in &eig.eigenvalues {
        if !f(x).is_finite() {
            return Err(Error::FunctionDomain { function: label.to_string(), eigenvalue: x });
        }
    }
    let m = eig.apply(&f);
    // Hermitian by construction up to roundoff.
    Ok(HermitianOperator {
        matrix: m.hermitian_part(),
        asymmetry: 0.0,
        eig: OnceLock::new(),
    })
}

/// Largest singular value.
///
/// LAPACK divide-and-conquer; falls back to block power iteration in the
/// unlikely event LAPACK does not converge.
pub fn operator_norm(m: &ComplexMatrix) -> f64 {
    match m.array().svddc(JobSvd::None) {
        Ok((_, s, _)) => s.iter().cloned().fold(0.0, f64::max),
        Err(_) => power_iteration_norm(m, 4, 5000, 1e-13),
    }
}

/// Block power iteration on M*M with a deterministic start block.
///
/// Used as an independent route to the largest singular value and as a
/// fallback; `block` columns are kept orthonormal with plain Gram-Schmidt.
pub fn power_iteration_norm(m: &ComplexMatrix, block: usize, max_iter: usize, rel_tol: f64) -> f64 {
    let n = m.dim();
    let b = block.min(n).max(1);
    // Fixed quasi-random start block so the routine is deterministic.
    let mut x = Array2::from_shape_fn((n, b), |(i, j)| {
        let t = ((i * 2654435761 + j * 40503 + 12345) % 65536) as f64 / 65536.0;
        C64::new(t - 0.5, (t * 7.0).fract() - 0.5)
    });
    let a = m.array();
    let ah = m.adjoint();
    let mut prev = 0.0;
    for it in 0..max_iter {
        // x <- M* (M x), then orthonormalize.
        let y = a.dot(&x);
        x = ah.array().dot(&y);
        gram_schmidt(&mut x);
        let y = a.dot(&x);
        let sigma = y
            .columns()
            .into_iter()
            .map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
            .fold(0.0, f64::max);
        if it > 4 && (sigma - prev).abs() <= rel_tol * sigma.max(1e-300) {
            return sigma;
        }
        prev = sigma;
    }
    prev
}

fn gram_schmidt(x: &mut Array2<C64>) {
    let cols = x.ncols();
    for j in 0..cols {
        for k in 0..j {
            let proj: C64 = {
                let cj = x.column(j);
                let ck = x.column(k);
                ck.iter().zip(cj.iter()).map(|(a, b)| a.conj() * b).sum()
            };
            let ck = x.column(k).to_owned();
            let mut cj = x.column_mut(j);
            cj.zip_mut_with(&ck, |a, &b| *a -= proj * b);
        }
        let norm = x.column(j).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-300 {
            let inv = C64::new(1.0 / norm, 0.0);
            x.column_mut(j).mapv_inplace(|z| z * inv);
        }
    }
}

/// Full singular value list (nonincreasing) with a fitted log-log decay rate.
///
/// `decay_rate` is the least-squares slope of log sigma_k against log k over
/// k >= 2; NaN when fewer than two usable points exist (e.g. dim 1 or rank 1).
#[derive(Debug, Clone)]
pub struct SingularProfile {
    pub values: Vec<f64>,
    pub decay_rate: f64,
}

pub fn singular_profile(m: &ComplexMatrix) -> SingularProfile {
    let values: Vec<f64> = match m.array().svddc(JobSvd::None) {
        Ok((_, s, _)) => s.to_vec(),
        Err(_) => {
            // Fall back to eigenvalues of M*M.
            let mm = m.adjoint().mul(m);
            let vals: Array1<f64> = mm
                .array()
                .eigvalsh(UPLO::Lower)
                .unwrap_or_else(|_| Array1::zeros(m.dim()));
            let mut v: Vec<f64> = vals.iter().map(|&x| x.max(0.0).sqrt()).collect();
            v.sort_by(|a, b| b.partial_cmp(a).unwrap());
            v
        }
    };
    SingularProfile { decay_rate: fitted_log_slope(&values), values }
}

/// Least-squares slope of log values[k-1] vs log k over k >= 2.
pub fn fitted_log_slope(values: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = values
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, &v)| v > 1e-300)
        .map(|(i, &v)| (((i + 1) as f64).ln(), v.ln()))
        .collect();
    least_squares_slope(&pts)
}

pub fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    if pts.len() < 2 {
        return f64::NAN;
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-30 {
        return f64::NAN;
    }
    (n * sxy - sx * sy) / denom
}

/// Smallest eigenvalue of the symmetrized matrix.
///
/// Operator inequalities A <= B elsewhere in the crate are checked as
/// `psd_margin(B - A) >= -slack`.
pub fn psd_margin(m: &ComplexMatrix, tol: &ToleranceConfig) -> Result<f64> {
    let herm = m.hermitian_part();
    let asymmetry = m.sub(&herm).frobenius_norm() * 2.0;
    let scale = 1.0 + m.frobenius_norm();
    if asymmetry > tol.hermitian_tol * scale {
        return Err(Error::NotHermitian { asymmetry, tol: tol.hermitian_tol * scale });
    }
    let vals = herm
        .array()
        .eigvalsh(UPLO::Lower)
        .map_err(|e| Error::EigenSolver { detail: format!("{e}") })?;
    Ok(vals.iter().cloned().fold(f64::INFINITY, f64::min))
}

/// Inverse via LU, with a residual check.
pub fn inverse(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    use ndarray_linalg::Inverse;
    let inv = m
        .array()
        .inv()
        .map_err(|e| Error::NotInvertible { detail: format!("{e}") })?;
    Ok(ComplexMatrix { data: inv })
}

pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.mul(b).sub(&b.mul(a))
}
