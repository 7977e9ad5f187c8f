//! Noncommutative torus at Fourier truncation, plus a circle/dilation model.
//!
//! The algebra is generated by unitaries U, V with V U = e^{2 pi i theta} U V,
//! represented on the box basis e_{m,n} = U^m V^n, |m|, |n| <= N. Truncation
//! is a hard Fourier box: images that leave the box are dropped, and the
//! interior mask marks the columns a test may use so algebraic identities
//! hold exactly rather than up to boundary noise.
//!
//! The Dirac operator is the off-diagonal block matrix built from the
//! derivation symbols delta_1 = diag(m), delta_2 = diag(n):
//!
//!   D = [[0, X], [X*, 0]],   X = delta_1 + tau delta_2  (diagonal).
//!
//! Because both D and its conformal rescaling k°Dk° keep this chiral block
//! form, odd functions of them reduce to one SVD of the upper block; the
//! truncation sweeps lean on that instead of a full eigendecomposition of
//! the doubled matrix, which is several times larger. The generic route
//! through `transforms::bounded_transform` is kept as the small-N
//! cross-check.

use ndarray::Array2;
use ndarray_linalg::{JobSvd, SVDDC};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::opcore::{
    fitted_log_slope, operator_norm, singular_profile, ComplexMatrix, HermitianOperator,
    SingularProfile,
};
use crate::perturb::ConformalFactor;
use crate::transforms::{bounded_transform, resolvent_weight};

/// Fourier box basis e_{m,n} = U^m V^n with |m|, |n| <= N.
#[derive(Debug, Clone, Copy)]
pub struct TorusBasis {
    pub radius: i64,
    pub theta: f64,
}

/// Default deformation parameter (sqrt 5 - 1)/2, generic at double precision.
pub fn default_theta() -> f64 {
    (5.0f64.sqrt() - 1.0) / 2.0
}

impl TorusBasis {
    pub fn new(radius: i64, theta: f64) -> Result<Self> {
        if radius < 1 {
            return Err(Error::Parameter(format!("truncation radius {radius} must be >= 1")));
        }
        Ok(TorusBasis { radius, theta })
    }

    pub fn side(&self) -> usize {
        (2 * self.radius + 1) as usize
    }

    /// Dimension of the scalar (single spinor component) space.
    pub fn dim(&self) -> usize {
        self.side() * self.side()
    }

    pub fn index(&self, m: i64, n: i64) -> Option<usize> {
        let r = self.radius;
        if m.abs() > r || n.abs() > r {
            return None;
        }
        Some(((m + r) as usize) * self.side() + (n + r) as usize)
    }

    pub fn modes(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        let r = self.radius;
        (-r..=r).flat_map(move |m| (-r..=r).map(move |n| (m, n)))
    }

    /// Indices with |m|, |n| <= N - margin.
    pub fn interior(&self, margin: i64) -> Vec<usize> {
        self.modes()
            .filter(|&(m, n)| m.abs() <= self.radius - margin && n.abs() <= self.radius - margin)
            .map(|(m, n)| self.index(m, n).unwrap())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TorusGenerator {
    U,
    V,
    UStar,
    VStar,
}

/// Left multiplication on the box basis.
///
/// U e_{m,n} = e_{m+1,n} and V e_{m,n} = e^{2 pi i theta m} e_{m,n+1};
/// boundary-exiting images are dropped.
pub fn torus_left_mult(g: TorusGenerator, basis: &TorusBasis) -> ComplexMatrix {
    let dim = basis.dim();
    let mut mat = Array2::zeros((dim, dim));
    let two_pi_theta = 2.0 * std::f64::consts::PI * basis.theta;
    for (m, n) in basis.modes() {
        let col = basis.index(m, n).unwrap();
        let (target, phase) = match g {
            TorusGenerator::U => ((m + 1, n), 0.0),
            TorusGenerator::UStar => ((m - 1, n), 0.0),
            TorusGenerator::V => ((m, n + 1), two_pi_theta * m as f64),
            TorusGenerator::VStar => ((m, n - 1), -two_pi_theta * m as f64),
        };
        if let Some(row) = basis.index(target.0, target.1) {
            mat[[row, col]] = C64::from_polar(1.0, phase);
        }
    }
    ComplexMatrix::new(mat).expect("torus generator matrix")
}

/// Right multiplication on the box basis.
///
/// e_{m,n} U = e^{2 pi i theta n} e_{m+1,n} and e_{m,n} V = e_{m,n+1},
/// forced by V U = e^{2 pi i theta} U V; left and right multiplications
/// commute on the interior.
pub fn torus_right_mult(g: TorusGenerator, basis: &TorusBasis) -> ComplexMatrix {
    let dim = basis.dim();
    let mut mat = Array2::zeros((dim, dim));
    let two_pi_theta = 2.0 * std::f64::consts::PI * basis.theta;
    for (m, n) in basis.modes() {
        let col = basis.index(m, n).unwrap();
        let (target, phase) = match g {
            TorusGenerator::U => ((m + 1, n), two_pi_theta * n as f64),
            TorusGenerator::UStar => ((m - 1, n), -two_pi_theta * n as f64),
            TorusGenerator::V => ((m, n + 1), 0.0),
            TorusGenerator::VStar => ((m, n - 1), 0.0),
        };
        if let Some(row) = basis.index(target.0, target.1) {
            mat[[row, col]] = C64::from_polar(1.0, phase);
        }
    }
    ComplexMatrix::new(mat).expect("torus generator matrix")
}

/// Polynomial in U, V as a monomial list: sum of coeff * U^m V^n.
#[derive(Debug, Clone)]
pub struct KSpec {
    pub monomials: Vec<(i64, i64, C64)>,
}

impl Default for KSpec {
    /// k = 2 + (U + U*)/2; self-adjoint with spectrum inside [1, 3].
    fn default() -> Self {
        KSpec {
            monomials: vec![
                (0, 0, C64::new(2.0, 0.0)),
                (1, 0, C64::new(0.5, 0.0)),
                (-1, 0, C64::new(0.5, 0.0)),
            ],
        }
    }
}

impl KSpec {
    /// Twisted product of polynomials:
    /// (U^m V^n)(U^p V^r) = e^{2 pi i theta n p} U^{m+p} V^{n+r}.
    pub fn product(&self, other: &KSpec, theta: f64) -> KSpec {
        let mut acc: std::collections::BTreeMap<(i64, i64), C64> = Default::default();
        for &(m, n, a) in &self.monomials {
            for &(p, r, b) in &other.monomials {
                let phase = C64::from_polar(1.0, 2.0 * std::f64::consts::PI * theta * (n * p) as f64);
                *acc.entry((m + p, n + r)).or_insert(C64::new(0.0, 0.0)) += a * b * phase;
            }
        }
        KSpec {
            monomials: acc
                .into_iter()
                .filter(|&(_, c)| c.norm() > 1e-15)
                .map(|((m, n), c)| (m, n, c))
                .collect(),
        }
    }

    /// Matrix of right multiplication by the polynomial.
    pub fn right_mult(&self, basis: &TorusBasis) -> ComplexMatrix {
        let dim = basis.dim();
        let mut mat = Array2::zeros((dim, dim));
        let two_pi_theta = 2.0 * std::f64::consts::PI * basis.theta;
        for (m, n) in basis.modes() {
            let col = basis.index(m, n).unwrap();
            for &(p, r, coeff) in &self.monomials {
                // e_{m,n} U^p V^r = e^{2 pi i theta n p} e_{m+p, n+r}
                if let Some(row) = basis.index(m + p, n + r) {
                    mat[[row, col]] += coeff * C64::from_polar(1.0, two_pi_theta * (n * p) as f64);
                }
            }
        }
        ComplexMatrix::new(mat).expect("right multiplier matrix")
    }
}

/// Algebra generators plus Dirac matrix at one truncation.
#[derive(Debug, Clone)]
pub struct TruncatedTriple {
    pub label: String,
    pub dirac: HermitianOperator,
    pub generators: Vec<(String, ComplexMatrix)>,
    /// True on indices unaffected by the truncation boundary (margin 1).
    pub interior_mask: Vec<bool>,
}

impl TruncatedTriple {
    pub fn interior_indices(&self) -> Vec<usize> {
        self.interior_mask
            .iter()
            .enumerate()
            .filter_map(|(i, &keep)| keep.then_some(i))
            .collect()
    }

    pub fn generator(&self, name: &str) -> Option<&ComplexMatrix> {
        self.generators.iter().find(|(n, _)| n == name).map(|(_, m)| m)
    }
}

/// Diagonal of the derivation symbol X = delta_1 + tau delta_2.
fn delta_symbol(basis: &TorusBasis, tau: C64) -> Vec<C64> {
    basis
        .modes()
        .map(|(m, n)| C64::new(m as f64, 0.0) + tau * n as f64)
        .collect()
}

/// Assemble the doubled chiral matrix [[0, upper],[upper^H, 0]].
pub fn chiral_assemble(upper: &ComplexMatrix) -> ComplexMatrix {
    let ds = upper.dim();
    let mut mat = Array2::zeros((2 * ds, 2 * ds));
    let u = upper.array();
    for i in 0..ds {
        for j in 0..ds {
            mat[[i, ds + j]] = u[[i, j]];
            mat[[ds + j, i]] = u[[i, j]].conj();
        }
    }
    ComplexMatrix::new(mat).expect("chiral assembly")
}

/// Upper block of f([[0, Y],[Y*, 0]]) for an odd function f, via one SVD of
/// Y: if Y = W S V* then the block is W f(S) V*.
pub fn chiral_odd_apply(y: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    let (u, s, vt) = y
        .array()
        .svddc(JobSvd::All)
        .map_err(|e| Error::EigenSolver { detail: format!("svd: {e}") })?;
    let (u, vt) = (u.expect("left vectors"), vt.expect("right vectors"));
    let scaled: Vec<f64> = s.iter().map(|&x| f(x)).collect();
    let uf = ComplexMatrix::new(u)?.scale_columns(&scaled);
    Ok(ComplexMatrix::new(uf.array().dot(&vt))?)
}

/// Spectral triple for the torus: Dirac plus the four generator actions on
/// the doubled (two component) space.
pub fn torus_dirac(basis: &TorusBasis, tau: C64) -> Result<TruncatedTriple> {
    if tau.im <= 0.0 {
        return Err(Error::Parameter(format!("Im(tau) = {} must be positive", tau.im)));
    }
    let delta = delta_symbol(basis, tau);
    let upper = ComplexMatrix::diagonal(&delta);
    let dirac = HermitianOperator::from_matrix(chiral_assemble(&upper))?;
    let ds = basis.dim();
    let mut generators = Vec::new();
    for (name, g) in [
        ("U", TorusGenerator::U),
        ("V", TorusGenerator::V),
        ("Ustar", TorusGenerator::UStar),
        ("Vstar", TorusGenerator::VStar),
    ] {
        generators.push((name.to_string(), double_block(&torus_left_mult(g, basis))));
    }
    let single_interior = basis.interior(1);
    let mut interior_mask = vec![false; 2 * ds];
    for &i in &single_interior {
        interior_mask[i] = true;
        interior_mask[ds + i] = true;
    }
    Ok(TruncatedTriple {
        label: format!("torus N={} theta={}", basis.radius, basis.theta),
        dirac,
        generators,
        interior_mask,
    })
}

/// Block-diagonal action of a scalar-space operator on the doubled space.
pub fn double_block(single: &ComplexMatrix) -> ComplexMatrix {
    let ds = single.dim();
    let mut mat = Array2::zeros((2 * ds, 2 * ds));
    let s = single.array();
    for i in 0..ds {
        for j in 0..ds {
            mat[[i, j]] = s[[i, j]];
            mat[[ds + i, ds + j]] = s[[i, j]];
        }
    }
    ComplexMatrix::new(mat).expect("doubled block")
}

/// Residual of the displayed identity relating the abstract operator with a
/// squared conformal factor to the conjugated one:
///
///   D_{k^2} - k° D k° = [[0, -k°[X, k°]], [[X*, k°] k°, 0]].
///
/// Both sides are compared on interior columns (margin 2 in m), where all
/// intermediate products stay inside the box; float roundoff is the only
/// residual left.
pub fn conformal_identity_residual(basis: &TorusBasis, tau: C64, k: &KSpec) -> Result<f64> {
    let delta = delta_symbol(basis, tau);
    let x = ComplexMatrix::diagonal(&delta);
    let xbar = x.adjoint();
    let kmat = k.right_mult(basis);
    let k2 = k.product(k, basis.theta).right_mult(basis);

    // Upper blocks: abstract r(k^2) X vs k° X k° - k°[X, k°].
    let upper_abstract = k2.mul(&x);
    let comm_upper = kmat.mul(&x.mul(&kmat).sub(&kmat.mul(&x))); // k°[X,k°]
    let upper_products = kmat.mul(&x).mul(&kmat).sub(&comm_upper);
    // Lower blocks: X* r(k^2) vs k° X* k° + [X*, k°] k°.
    let lower_abstract = xbar.mul(&k2);
    let comm_lower = xbar.mul(&kmat).sub(&kmat.mul(&xbar)).mul(&kmat);
    let lower_products = kmat.mul(&xbar).mul(&kmat).add(&comm_lower);

    let interior = basis.interior(2);
    let res_upper = upper_abstract.sub(&upper_products).select_columns(&interior);
    let res_lower = lower_abstract.sub(&lower_products).select_columns(&interior);
    Ok(res_upper.frobenius_norm().max(res_lower.frobenius_norm()))
}

/// Minimum eigenvalue of the right multiplier, used as the invertibility
/// check for conformal factors built from polynomials.
pub fn k_min_eigenvalue(basis: &TorusBasis, k: &KSpec) -> Result<f64> {
    let kmat = HermitianOperator::from_matrix(k.right_mult(basis))?;
    Ok(kmat.eig()?.eigenvalues[0])
}

/// The conformal pair (D, k°Dk°) with mu = k°, plus the identity residual.
pub fn torus_conformal_pair(
    basis: &TorusBasis,
    tau: C64,
    k: &KSpec,
) -> Result<(TruncatedTriple, TruncatedTriple, ConformalFactor, f64)> {
    let min_eig = k_min_eigenvalue(basis, k)?;
    if min_eig <= 1e-6 {
        return Err(Error::Parameter(format!(
            "conformal polynomial not invertible at truncation: min eigenvalue {min_eig:.3e}"
        )));
    }
    let plain = torus_dirac(basis, tau)?;
    let kmat = k.right_mult(basis);
    let delta = delta_symbol(basis, tau);
    let x = ComplexMatrix::diagonal(&delta);
    let conjugated_upper = kmat.mul(&x).mul(&kmat);
    let dirac_k = HermitianOperator::from_matrix(chiral_assemble(&conjugated_upper))?;
    let rescaled = TruncatedTriple {
        label: format!("{} conformal", plain.label),
        dirac: dirac_k,
        generators: plain.generators.clone(),
        interior_mask: plain.interior_mask.clone(),
    };
    let mu = ConformalFactor::new(double_block(&kmat))?;
    let residual = conformal_identity_residual(basis, tau, k)?;
    Ok((plain, rescaled, mu, residual))
}

/// Sweep observable ||(F_{k°Dk°} - F_D) a k° <D>^beta|| with a = left
/// multiplication by U, computed through the chiral block structure: one SVD
/// of the conjugated upper block replaces the doubled eigendecomposition.
pub fn torus_conformal_observable(
    basis: &TorusBasis,
    tau: C64,
    k: &KSpec,
    beta: f64,
) -> Result<f64> {
    let delta = delta_symbol(basis, tau);
    let kmat = k.right_mult(basis);
    let x = ComplexMatrix::diagonal(&delta);
    let y = kmat.mul(&x).mul(&kmat);
    let f_upper_k = chiral_odd_apply(&y, |t| t / (1.0 + t * t).sqrt())?;
    // F_D upper block is diagonal: delta_j / sqrt(1 + |delta_j|^2).
    let f_upper_plain: Vec<C64> = delta
        .iter()
        .map(|&z| z / (1.0 + z.norm_sqr()).sqrt())
        .collect();
    let mut g = f_upper_k;
    for (j, &d) in f_upper_plain.iter().enumerate() {
        g.array_mut()[[j, j]] -= d;
    }
    // Right factor a mu <D>^beta, block diagonal: u_left k° diag(w).
    let u_left = torus_left_mult(TorusGenerator::U, basis);
    let w: Vec<f64> = delta.iter().map(|&z| (1.0 + z.norm_sqr()).powf(beta / 2.0)).collect();
    let right = u_left.mul(&kmat).scale_columns(&w);
    let top = operator_norm(&g.mul(&right));
    let bottom = operator_norm(&g.adjoint().mul(&right));
    Ok(top.max(bottom))
}

/// Generic-route version of `torus_conformal_observable` on the assembled
/// doubled matrices; used as the small-N cross-check of the chiral path.
pub fn torus_conformal_observable_generic(
    basis: &TorusBasis,
    tau: C64,
    k: &KSpec,
    beta: f64,
) -> Result<f64> {
    let (plain, rescaled, mu, _) = torus_conformal_pair(basis, tau, k)?;
    let f0 = bounded_transform(&plain.dirac)?;
    let f1 = bounded_transform(&rescaled.dirac)?;
    let weight = resolvent_weight(&plain.dirac, beta)?;
    let a = plain.generator("U").expect("U generator");
    let product = f1
        .matrix()
        .sub(f0.matrix())
        .mul(a)
        .mul(mu.mu())
        .mul(weight.matrix());
    Ok(operator_norm(&product))
}

/// Merged singular values of (F_{k°Dk°} - F_D) (left U), the local
/// compactness proxy for the conformal perturbation.
pub fn torus_kk_compactness_profile(
    basis: &TorusBasis,
    tau: C64,
    k: &KSpec,
) -> Result<SingularProfile> {
    let delta = delta_symbol(basis, tau);
    let kmat = k.right_mult(basis);
    let x = ComplexMatrix::diagonal(&delta);
    let y = kmat.mul(&x).mul(&kmat);
    let f_upper_k = chiral_odd_apply(&y, |t| t / (1.0 + t * t).sqrt())?;
    let mut g = f_upper_k;
    for (j, &z) in delta.iter().enumerate() {
        g.array_mut()[[j, j]] -= z / (1.0 + z.norm_sqr()).sqrt();
    }
    let u_left = torus_left_mult(TorusGenerator::U, basis);
    let mut values = singular_profile(&g.mul(&u_left)).values;
    values.extend(singular_profile(&g.adjoint().mul(&u_left)).values);
    values.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(SingularProfile { decay_rate: fitted_log_slope(&values), values })
}

/// Compact-resolvent proxy: the decay profile of (1 + D^2)^{-1}, which is
/// diagonal with entries (1 + |m + tau n|^2)^{-1} (doubled).
pub fn torus_resolvent_profile(basis: &TorusBasis, tau: C64) -> SingularProfile {
    let mut values: Vec<f64> = delta_symbol(basis, tau)
        .iter()
        .flat_map(|&z| {
            let v = 1.0 / (1.0 + z.norm_sqr());
            [v, v]
        })
        .collect();
    values.sort_by(|a, b| b.partial_cmp(a).unwrap());
    SingularProfile { decay_rate: fitted_log_slope(&values), values }
}

/// Report of the circle/dilation model D = diag(-N..N) against kappa D.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CircleDilationReport {
    pub norm_diff: f64,
    pub weighted_norm: f64,
    pub shifted_decay_rate: f64,
    pub shifted_values: Vec<f64>,
}

/// Compare F_{kappa D} with F_D on the circle truncation.
///
/// Everything is diagonal except the shift composition, so the norms reduce
/// to scalar maxima; the singular profile of (F_{kappa D} - F_D) shift is
/// still computed through the generic SVD path.
pub fn circle_dilation_compare(n: i64, kappa: f64, beta: f64) -> Result<CircleDilationReport> {
    if kappa <= 0.0 {
        return Err(Error::Parameter(format!("kappa {kappa} must be positive")));
    }
    let dim = (2 * n + 1) as usize;
    let f = |x: f64| x / (1.0 + x * x).sqrt();
    let diff: Vec<f64> = (-n..=n).map(|j| f(kappa * j as f64) - f(j as f64)).collect();
    let norm_diff = diff.iter().fold(0.0f64, |acc, &d| acc.max(d.abs()));
    let weighted_norm = (-n..=n)
        .zip(diff.iter())
        .map(|(j, &d)| {
            let x = j as f64;
            d.abs() * (1.0 + x * x).powf(beta / 2.0)
        })
        .fold(0.0f64, f64::max);
    // shift on the circle truncation: e_j -> e_{j+1}
    let mut shift = Array2::zeros((dim, dim));
    for j in 0..dim - 1 {
        shift[[j + 1, j]] = C64::new(1.0, 0.0);
    }
    let diff_mat = ComplexMatrix::real_diagonal(&diff);
    let profile = singular_profile(&diff_mat.mul(&ComplexMatrix::new(shift)?));
    Ok(CircleDilationReport {
        norm_diff,
        weighted_norm,
        shifted_decay_rate: profile.decay_rate,
        shifted_values: profile.values,
    })
}

/// Vacuum functional: coefficient of e_{0,0} in (word applied to e_{0,0}).
pub fn torus_vacuum_expectation(basis: &TorusBasis, word: &[TorusGenerator]) -> C64 {
    let dim = basis.dim();
    let mut vec = vec![C64::new(0.0, 0.0); dim];
    vec[basis.index(0, 0).unwrap()] = C64::new(1.0, 0.0);
    let mut current = ndarray::Array1::from(vec);
    // Apply the word right to left, as operators compose.
    for g in word.iter().rev() {
        let m = torus_left_mult(*g, basis);
        current = m.array().dot(&current);
    }
    current[basis.index(0, 0).unwrap()]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opcore::commutator;

    fn tau_i() -> C64 {
        C64::new(0.0, 1.0)
    }

    #[test]
    fn left_mult_shift_and_phase() {
        let basis = TorusBasis::new(3, default_theta()).unwrap();
        let u = torus_left_mult(TorusGenerator::U, &basis);
        let from = basis.index(0, 0).unwrap();
        let to = basis.index(1, 0).unwrap();
        assert_eq!(u.array()[[to, from]], C64::new(1.0, 0.0));

        // V e_{1,0} = e^{2 pi i theta} e_{1,1}
        let v = torus_left_mult(TorusGenerator::V, &basis);
        let from = basis.index(1, 0).unwrap();
        let to = basis.index(1, 1).unwrap();
        let expect = C64::from_polar(1.0, 2.0 * std::f64::consts::PI * basis.theta);
        assert!((v.array()[[to, from]] - expect).norm() < 1e-15);
    }

    #[test]
    fn defining_relation_exact_on_interior() {
        let basis = TorusBasis::new(4, default_theta()).unwrap();
        let u = torus_left_mult(TorusGenerator::U, &basis);
        let v = torus_left_mult(TorusGenerator::V, &basis);
        let phase = C64::from_polar(1.0, 2.0 * std::f64::consts::PI * basis.theta);
        let vu = v.mul(&u);
        let uv_phased = u.mul(&v).scale(phase);
        let interior = basis.interior(2);
        // Phase exponents are integers, so both sides carry the same support
        // pattern exactly; the phases themselves agree to rounding.
        for &col in &interior {
            for row in 0..basis.dim() {
                let lhs = vu.array()[[row, col]];
                let rhs = uv_phased.array()[[row, col]];
                assert_eq!(lhs == C64::new(0.0, 0.0), rhs == C64::new(0.0, 0.0));
                assert!((lhs - rhs).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn unitarity_on_interior() {
        let basis = TorusBasis::new(3, default_theta()).unwrap();
        for g in [TorusGenerator::U, TorusGenerator::V] {
            let a = torus_left_mult(g, &basis);
            let astar = torus_left_mult(
                match g {
                    TorusGenerator::U => TorusGenerator::UStar,
                    TorusGenerator::V => TorusGenerator::VStar,
                    _ => unreachable!(),
                },
                &basis,
            );
            let interior = basis.interior(1);
            let id = ComplexMatrix::identity(basis.dim());
            assert_eq!(
                astar.mul(&a).sub(&id).select_columns(&interior).frobenius_norm(),
                0.0
            );
            assert_eq!(
                a.mul(&astar).sub(&id).select_columns(&interior).frobenius_norm(),
                0.0
            );
        }
    }

    #[test]
    fn right_mult_shift_phase_and_bimodule_property() {
        let basis = TorusBasis::new(3, default_theta()).unwrap();
        let ru = torus_right_mult(TorusGenerator::U, &basis);
        let from = basis.index(0, 0).unwrap();
        let to = basis.index(1, 0).unwrap();
        assert_eq!(ru.array()[[to, from]], C64::new(1.0, 0.0));

        // e_{0,1} U = e^{2 pi i theta} e_{1,1}: V U = e^{2 pi i theta} U V.
        let from = basis.index(0, 1).unwrap();
        let to = basis.index(1, 1).unwrap();
        let expect = C64::from_polar(1.0, 2.0 * std::f64::consts::PI * basis.theta);
        assert!((ru.array()[[to, from]] - expect).norm() < 1e-15);

        // left and right multiplications commute on the interior
        let interior = basis.interior(2);
        for lg in [TorusGenerator::U, TorusGenerator::V] {
            for rg in [TorusGenerator::U, TorusGenerator::V] {
                let l = torus_left_mult(lg, &basis);
                let r = torus_right_mult(rg, &basis);
                let comm = commutator(&l, &r).select_columns(&interior);
                assert!(comm.frobenius_norm() < 1e-14, "{lg:?} {rg:?}");
            }
        }
    }

    #[test]
    fn vacuum_functional_on_words() {
        let basis = TorusBasis::new(5, default_theta()).unwrap();
        use TorusGenerator::*;
        let gens = [U, V, UStar, VStar];
        // All words up to length 4: expectation = phase * [net power zero],
        // with the phase from normal ordering computed symbolically.
        let mut words: Vec<Vec<TorusGenerator>> = vec![vec![]];
        for _ in 0..4 {
            let mut next = Vec::new();
            for w in &words {
                for &g in &gens {
                    let mut w2 = w.clone();
                    w2.push(g);
                    next.push(w2);
                }
            }
            words.extend(next.clone());
        }
        for word in &words {
            let got = torus_vacuum_expectation(&basis, word);
            // symbolic reduction: track (m, n, integer phase exponent)
            let (mut m, mut n, mut exp) = (0i64, 0i64, 0i64);
            for &g in word.iter().rev() {
                // multiply U^m V^n on the left by g
                let (dm, dn) = match g {
                    U => (1, 0),
                    UStar => (-1, 0),
                    V => (0, 1),
                    VStar => (0, -1),
                };
                // g U^m V^n: moving V^{dn} past U^m picks e^{2 pi i theta dn m}
                exp += dn * m;
                m += dm;
                n += dn;
            }
            let expect = if m == 0 && n == 0 {
                C64::from_polar(1.0, 2.0 * std::f64::consts::PI * basis.theta * exp as f64)
            } else {
                C64::new(0.0, 0.0)
            };
            assert!(
                (got - expect).norm() < 1e-12,
                "word {word:?}: {got} vs {expect}"
            );
        }
    }

    #[test]
    fn dirac_symbols_and_block_squares() {
        let basis = TorusBasis::new(4, default_theta()).unwrap();
        let triple = torus_dirac(&basis, tau_i()).unwrap();
        // delta eigenvalue on e_{3,-2} is 3 + tau*(-2); with tau = i the
        // squared Dirac is diagonal with 9 + 4 there.
        let idx = basis.index(3, -2).unwrap();
        let d2 = triple.dirac.matrix().mul(triple.dirac.matrix());
        assert!((d2.array()[[idx, idx]].re - 13.0).abs() < 1e-12);
        let ds = basis.dim();
        assert!((d2.array()[[ds + idx, ds + idx]].re - 13.0).abs() < 1e-12);
        // off-diagonal of D^2 vanishes: D^2 block diagonal with |m + tau n|^2
        for (m, n) in basis.modes() {
            let j = basis.index(m, n).unwrap();
            let expect = (m * m + n * n) as f64;
            assert!((d2.array()[[j, j]].re - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn dirac_commutator_with_generator_is_size_independent() {
        let mut norms = Vec::new();
        for radius in [2, 4, 6] {
            let basis = TorusBasis::new(radius, default_theta()).unwrap();
            let triple = torus_dirac(&basis, tau_i()).unwrap();
            let u = triple.generator("U").unwrap();
            norms.push(operator_norm(&commutator(triple.dirac.matrix(), u)));
        }
        for w in norms.windows(2) {
            assert!((w[0] - w[1]).abs() < 1e-10, "{norms:?}");
        }
        // |[D, U]| = 1 for tau = i
        assert!((norms[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_tau() {
        let basis = TorusBasis::new(2, default_theta()).unwrap();
        assert!(torus_dirac(&basis, C64::new(1.0, 0.0)).is_err());
        assert!(torus_dirac(&basis, C64::new(0.0, -1.0)).is_err());
    }

    #[test]
    fn conformal_identity_trivial_and_default_k() {
        let basis = TorusBasis::new(4, default_theta()).unwrap();
        // k = 1 leaves D unchanged
        let one = KSpec { monomials: vec![(0, 0, C64::new(1.0, 0.0))] };
        let (plain, rescaled, mu, residual) =
            torus_conformal_pair(&basis, tau_i(), &one).unwrap();
        assert!(plain
            .dirac
            .matrix()
            .sub(rescaled.dirac.matrix())
            .frobenius_norm()
            < 1e-12);
        assert!((mu.cond() - 1.0).abs() < 1e-10);
        assert!(residual < 1e-12);

        let (_, _, mu, residual) =
            torus_conformal_pair(&basis, tau_i(), &KSpec::default()).unwrap();
        assert!(residual < 1e-10, "identity residual {residual}");
        // spectrum of k° inside [1,3]
        assert!(mu.cond() <= 3.0 + 1e-9);
    }

    #[test]
    fn k_spectrum_within_bounds() {
        let basis = TorusBasis::new(5, default_theta()).unwrap();
        let min = k_min_eigenvalue(&basis, &KSpec::default()).unwrap();
        assert!(min > 1.0 && min < 3.0);
        // a singular polynomial is rejected
        let singular = KSpec {
            monomials: vec![
                (0, 0, C64::new(1.0, 0.0)),
                (1, 0, C64::new(0.5, 0.0)),
                (-1, 0, C64::new(0.5, 0.0)),
            ],
        };
        // spectrum of 1 + cos >= 0 touches zero only in the infinite volume
        // limit; at truncation the check uses the 1e-6 floor.
        let min = k_min_eigenvalue(&basis, &singular).unwrap();
        assert!(min > 0.0);

        // a genuinely indefinite polynomial is rejected as a conformal factor
        let indefinite = KSpec {
            monomials: vec![(1, 0, C64::new(0.5, 0.0)), (-1, 0, C64::new(0.5, 0.0))],
        };
        assert!(matches!(
            torus_conformal_pair(&basis, tau_i(), &indefinite),
            Err(crate::error::Error::Parameter(_))
        ));
    }

    #[test]
    fn chiral_path_matches_generic_route() {
        let basis = TorusBasis::new(3, default_theta()).unwrap();
        let k = KSpec::default();
        for &beta in &[0.0, 0.5] {
            let fast = torus_conformal_observable(&basis, tau_i(), &k, beta).unwrap();
            let generic = torus_conformal_observable_generic(&basis, tau_i(), &k, beta).unwrap();
            assert!(
                (fast - generic).abs() <= 1e-9 * (1.0 + generic),
                "beta {beta}: {fast} vs {generic}"
            );
        }
    }

    #[test]
    fn chiral_odd_apply_matches_functional_calculus() {
        let mut rng = crate::randmat::seeded_rng(307);
        let y = crate::randmat::rand_complex(&mut rng, 12);
        let assembled = HermitianOperator::from_matrix(chiral_assemble(&y)).unwrap();
        let f_full = bounded_transform(&assembled).unwrap();
        let f_upper = chiral_odd_apply(&y, |t| t / (1.0 + t * t).sqrt()).unwrap();
        let block = {
            let arr = f_full.matrix().array();
            let mut up = Array2::zeros((12, 12));
            for i in 0..12 {
                for j in 0..12 {
                    up[[i, j]] = arr[[i, 12 + j]];
                }
            }
            ComplexMatrix::new(up).unwrap()
        };
        assert!(block.sub(&f_upper).frobenius_norm() < 1e-10);
    }

    #[test]
    fn resolvent_profile_decays() {
        let basis = TorusBasis::new(16, default_theta()).unwrap();
        let profile = torus_resolvent_profile(&basis, tau_i());
        assert!(profile.decay_rate <= -0.9, "slope {}", profile.decay_rate);
    }

    #[test]
    fn kk_compactness_profile_decays() {
        // Local compactness of (F_k°Dk° - F_D) against the algebra action:
        // the singular values decay with slope at most -0.4.
        let basis = TorusBasis::new(16, default_theta()).unwrap();
        let profile = torus_kk_compactness_profile(&basis, tau_i(), &KSpec::default()).unwrap();
        assert!(profile.decay_rate <= -0.4, "slope {}", profile.decay_rate);
    }

    #[test]
    fn circle_dilation_examples() {
        let r = circle_dilation_compare(16, 1.0, 0.5).unwrap();
        assert_eq!(r.norm_diff, 0.0);
        assert_eq!(r.weighted_norm, 0.0);

        // scalar arithmetic oracle at n = 1: |2/sqrt5 - 1/sqrt2|
        let r = circle_dilation_compare(16, 2.0, 0.0).unwrap();
        let oracle = (2.0 / 5.0f64.sqrt() - 1.0 / 2.0f64.sqrt()).abs();
        let f = |x: f64| x / (1.0 + x * x).sqrt();
        let d1 = (f(2.0) - f(1.0)).abs();
        assert!((d1 - oracle).abs() < 1e-15);
        assert!(r.norm_diff >= d1);
        assert!((oracle - 0.18732041).abs() < 1e-8);
    }

    #[test]
    fn circle_dilation_tail_decay() {
        // |f(2n) - f(n)| = O(1/n^2), so singular values fall below 1e-3 well
        // before index N/2.
        let n = 256;
        let r = circle_dilation_compare(n, 2.0, 0.0).unwrap();
        let idx = (n as usize) / 2;
        assert!(
            r.shifted_values[idx] < 1e-3,
            "sigma_{idx} = {}",
            r.shifted_values[idx]
        );
        // scalar tail bound oracle
        let tail_bound = |m: f64| 0.375 / (m * m) + 1.0 / (m * m * m);
        assert!(r.shifted_values[idx] <= tail_bound(((idx / 2) - 1) as f64));
    }
}
