//! Named verification suites shared by the CLI and the acceptance tests.
//!
//! Every suite fixes a seed, stamps its reports with the config hash, and
//! reports named failures; a suite passes when no failure is recorded.

use num_complex::Complex64 as C64;

use crate::error::Result;
use crate::geom_heisenberg::{
    commutator_bound_sweep, commutator_bound_sweep_with_exponent, dilation_check, HeisPoint,
};
use crate::geom_podles::{
    self, HalfInt, PodlesTruncation, SuqGenerator,
};
use crate::geom_torus::{
    conformal_identity_residual, torus_conformal_observable, KSpec, TorusBasis,
};
use crate::lab::{run_sweep, RunConfig, SweepReport, TrendClass};
use crate::opcore::{apply_function, operator_norm, ToleranceConfig};
use crate::perturb::{
    converse_decompose, inner_derivation_norm_exact, interpolation_check, sandwich_check,
    stampfli_bound, ConformalFactor,
};
use crate::randmat::{
    rand_complex, rand_hermitian, rand_invertible_with_cond, rand_positive_with_cond, rand_psd,
    seeded_rng,
};
use crate::transforms::{log_transform_scalar, resolvent_power_quadrature, QuadratureSpec};
use rand::Rng;

/// Outcome of one suite: reports plus human-readable summary and failures.
#[derive(Debug)]
pub struct SuiteOutcome {
    pub config: RunConfig,
    pub reports: Vec<SweepReport>,
    pub summary: Vec<String>,
    pub failures: Vec<String>,
}

impl SuiteOutcome {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn csv(&self) -> String {
        crate::lab::reports_to_csv(&self.reports)
    }
}

fn draw_report(
    suite: &str,
    observable: &str,
    seed: u64,
    hash: &str,
    values: &[f64],
) -> SweepReport {
    let params: Vec<f64> = (1..=values.len()).map(|i| i as f64).collect();
    let mut it = values.iter();
    run_sweep(suite, observable, "draw", &params, seed, hash, |_| {
        Ok(*it.next().expect("value for every draw"))
    })
    .expect("draw report")
}

/// Interpolation inequality on seeded random triples (A, B, T):
/// lhs <= rhs + slack for alpha in {0.25, 0.5, 0.75, 1}.
pub fn verify_interpolation(seed: u64, draws: usize) -> Result<SuiteOutcome> {
    let tol = ToleranceConfig::default();
    let mut config = RunConfig::new("interpolation", seed);
    config.draws = Some(draws);
    let hash = config.config_hash();
    let mut rng = seeded_rng(seed);
    let alphas = [0.25, 0.5, 0.75, 1.0];
    let mut margins = Vec::with_capacity(draws);
    let mut failures = Vec::new();
    for k in 0..draws {
        let dim = rng.gen_range(2..=12);
        let a = rand_positive_with_cond(&mut rng, dim, 100.0);
        let b = rand_positive_with_cond(&mut rng, dim, 100.0);
        let t = rand_complex(&mut rng, dim);
        let alpha = alphas[rng.gen_range(0..alphas.len())];
        let report = interpolation_check(&a, &b, &t, alpha, &tol)?;
        let margin = report.rhs - report.lhs;
        margins.push(margin);
        if margin < -tol.inequality_slack {
            failures.push(format!(
                "interpolation draw {k}: lhs {} > rhs {} (alpha {alpha}, dim {dim})",
                report.lhs, report.rhs
            ));
        }
    }
    let reports = vec![draw_report("interpolation", "rhs_minus_lhs", seed, &hash, &margins)];
    let min_margin = margins.iter().cloned().fold(f64::INFINITY, f64::min);
    let summary = vec![format!(
        "interpolation: {draws} draws, min margin {min_margin:.3e} (slack 1e-9)"
    )];
    Ok(SuiteOutcome { config, reports, summary, failures })
}

/// Stampfli bound versus the exact inner-derivation norm, plus the
/// diag(1,2)/diag(3,5) witness where the bound is attained.
pub fn verify_stampfli(seed: u64, draws: usize) -> Result<SuiteOutcome> {
    let tol = ToleranceConfig::default();
    let mut config = RunConfig::new("stampfli", seed);
    config.draws = Some(draws);
    let hash = config.config_hash();
    let mut rng = seeded_rng(seed);
    let mut margins = Vec::with_capacity(draws);
    let mut failures = Vec::new();
    for k in 0..draws {
        let da = rng.gen_range(1..=6);
        let db = rng.gen_range(1..=6);
        let a = rand_psd(&mut rng, da);
        let b = rand_psd(&mut rng, db);
        let exact = inner_derivation_norm_exact(a.matrix(), b.matrix())?;
        let bound = stampfli_bound(a.matrix(), b.matrix(), &tol)?;
        margins.push(bound - exact);
        if exact > bound + tol.inequality_slack {
            failures.push(format!("stampfli draw {k}: exact {exact} > bound {bound}"));
        }
    }
    // witness: equality at 4
    let a = crate::opcore::ComplexMatrix::real_diagonal(&[1.0, 2.0]);
    let b = crate::opcore::ComplexMatrix::real_diagonal(&[3.0, 5.0]);
    let exact = inner_derivation_norm_exact(&a, &b)?;
    let bound = stampfli_bound(&a, &b, &tol)?;
    if (exact - 4.0).abs() > 1e-12 || (bound - 4.0).abs() > 1e-12 {
        failures.push(format!("stampfli witness: exact {exact}, bound {bound}, expected 4"));
    }
    let reports = vec![draw_report("stampfli", "bound_minus_exact", seed, &hash, &margins)];
    let min_margin = margins.iter().cloned().fold(f64::INFINITY, f64::min);
    let summary = vec![
        format!("stampfli: {draws} draws, min margin {min_margin:.3e}"),
        format!("stampfli witness diag(1,2)/diag(3,5): exact {exact}, bound {bound}"),
    ];
    Ok(SuiteOutcome { config, reports, summary, failures })
}

/// Resolvent sandwich margins on seeded random (D, mu) pairs.
pub fn verify_sandwich(seed: u64, draws: usize) -> Result<SuiteOutcome> {
    let tol = ToleranceConfig::default();
    let mut config = RunConfig::new("sandwich", seed);
    config.draws = Some(draws);
    let hash = config.config_hash();
    let mut rng = seeded_rng(seed);
    let mut margins = Vec::with_capacity(draws);
    let mut failures = Vec::new();
    for k in 0..draws {
        let dim = rng.gen_range(2..=12);
        let d = rand_hermitian(&mut rng, dim);
        let mu = ConformalFactor::new(rand_invertible_with_cond(&mut rng, dim, 20.0))?;
        let report = sandwich_check(&d, &mu, &tol)?;
        let margin = report.margin_lower.min(report.margin_upper);
        margins.push(margin);
        if margin < -tol.inequality_slack {
            failures.push(format!(
                "sandwich draw {k}: margins ({:.3e}, {:.3e})",
                report.margin_lower, report.margin_upper
            ));
        }
    }
    let reports = vec![draw_report("sandwich", "min_psd_margin", seed, &hash, &margins)];
    let min_margin = margins.iter().cloned().fold(f64::INFINITY, f64::min);
    let summary =
        vec![format!("sandwich: {draws} draws, min psd margin {min_margin:.3e}")];
    Ok(SuiteOutcome { config, reports, summary, failures })
}

/// Resolvent-power quadrature against the functional calculus.
pub fn verify_quadrature(seed: u64) -> Result<SuiteOutcome> {
    let tol = ToleranceConfig::default();
    let config = RunConfig::new("quadrature", seed);
    let hash = config.config_hash();
    let mut rng = seeded_rng(seed);
    let mut rel_errors = Vec::new();
    let mut failures = Vec::new();
    for &alpha in &[0.25, 0.5, 0.75] {
        for &dim in &[8usize, 32, 64] {
            let d = rand_hermitian(&mut rng, dim);
            let quad = resolvent_power_quadrature(&d, alpha, &QuadratureSpec::default(), &tol)?;
            let oracle = apply_function(&d, |x| (1.0 + x * x).powf(-alpha), "oracle")?;
            let rel = operator_norm(&quad.matrix().sub(oracle.matrix()))
                / operator_norm(oracle.matrix());
            rel_errors.push(rel);
            if rel >= tol.quadrature_rel_tol {
                failures.push(format!(
                    "quadrature alpha {alpha} dim {dim}: relative error {rel:.3e}"
                ));
            }
        }
    }
    let reports =
        vec![draw_report("quadrature", "relative_error", seed, &hash, &rel_errors)];
    let worst = rel_errors.iter().cloned().fold(0.0, f64::max);
    let summary = vec![format!(
        "quadrature: {} cases, worst relative error {worst:.3e} (tol 1e-6)",
        rel_errors.len()
    )];
    Ok(SuiteOutcome { config, reports, summary, failures })
}

/// Converse decomposition D2 = mu D1 mu* + T on random pairs.
pub fn verify_converse(seed: u64, draws: usize) -> Result<SuiteOutcome> {
    let tol = ToleranceConfig::default();
    let mut config = RunConfig::new("converse", seed);
    config.draws = Some(draws);
    let hash = config.config_hash();
    let mut rng = seeded_rng(seed);
    let mut residuals = Vec::with_capacity(draws);
    let mut failures = Vec::new();
    for k in 0..draws {
        let dim = rng.gen_range(2..=12);
        let d1 = rand_hermitian(&mut rng, dim);
        let d2 = rand_hermitian(&mut rng, dim);
        let (parts, diag) = converse_decompose(&d1, &d2, 0.5, &tol)?;
        let reconstructed = parts.mu.rescale(&d1)?.matrix().add(parts.t.matrix());
        let residual = reconstructed.sub(d2.matrix()).frobenius_norm();
        residuals.push(residual.max(diag.reconstruction_residual));
        if residual >= 1e-8 {
            failures.push(format!("converse draw {k}: residual {residual:.3e}"));
        }
    }
    // identity pair: mu = 1 and T = 0
    let d = rand_hermitian(&mut rng, 8);
    let (parts, _) = converse_decompose(&d, &d, 0.5, &tol)?;
    let mu_gap = parts
        .mu
        .mu()
        .sub(&crate::opcore::ComplexMatrix::identity(8))
        .frobenius_norm();
    let t_gap = parts.t.matrix().frobenius_norm();
    if mu_gap > 1e-9 || t_gap > 1e-9 {
        failures.push(format!("converse identity pair: mu gap {mu_gap:.3e}, T gap {t_gap:.3e}"));
    }
    let reports =
        vec![draw_report("converse", "reconstruction_residual", seed, &hash, &residuals)];
    let worst = residuals.iter().cloned().fold(0.0, f64::max);
    let summary = vec![
        format!("converse: {draws} draws, worst residual {worst:.3e} (tol 1e-8)"),
        format!("converse identity pair: mu gap {mu_gap:.3e}, T gap {t_gap:.3e}"),
    ];
    Ok(SuiteOutcome { config, reports, summary, failures })
}

/// Torus conformal sweep: the weighted transform difference over truncation
/// radii, plus the conjugation identity residual per radius.
pub fn torus_suite(
    theta: f64,
    tau: C64,
    n_list: &[usize],
    beta: f64,
    k: &KSpec,
    seed: u64,
) -> Result<SuiteOutcome> {
    let mut config = RunConfig::new("torus", seed);
    config.theta = Some(theta);
    config.tau = Some((tau.re, tau.im));
    config.n_list = Some(n_list.to_vec());
    config.beta = Some(beta);
    config.k_monomials =
        Some(k.monomials.iter().map(|&(m, n, c)| (m, n, c.re)).collect());
    let hash = config.config_hash();

    let params: Vec<f64> = n_list.iter().map(|&n| n as f64).collect();
    let sweep = run_sweep(
        "torus",
        "conformal_difference_norm",
        "N",
        &params,
        seed,
        &hash,
        |n| {
            let basis = TorusBasis::new(n as i64, theta)?;
            torus_conformal_observable(&basis, tau, k, beta)
        },
    )?;
    let identity = run_sweep("torus", "conjugation_identity_residual", "N", &params, seed, &hash, |n| {
        let basis = TorusBasis::new(n as i64, theta)?;
        conformal_identity_residual(&basis, tau, k)
    })?;

    let mut failures = Vec::new();
    if sweep.classification != TrendClass::BoundedPlateau {
        failures.push(format!(
            "torus conformal_difference_norm: classification {} (slope {:.3})",
            sweep.classification, sweep.slope
        ));
    }
    let worst_identity = identity.values.iter().cloned().fold(0.0, f64::max);
    if worst_identity >= 1e-10 {
        failures.push(format!(
            "torus conjugation_identity_residual: worst {worst_identity:.3e} (tol 1e-10)"
        ));
    }
    let summary = vec![
        format!(
            "torus sweep over N={n_list:?}: values {:?}, slope {:.4}, {}",
            sweep.values, sweep.slope, sweep.classification
        ),
        format!("torus conjugation identity residual: worst {worst_identity:.3e}"),
    ];
    Ok(SuiteOutcome { config, reports: vec![sweep, identity], summary, failures })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PodlesSuiteKind {
    Relations,
    Omega,
    Mu,
    Twisted,
}

impl std::str::FromStr for PodlesSuiteKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "relations" => Ok(PodlesSuiteKind::Relations),
            "omega" => Ok(PodlesSuiteKind::Omega),
            "mu" => Ok(PodlesSuiteKind::Mu),
            "twisted" => Ok(PodlesSuiteKind::Twisted),
            other => Err(format!("unknown podles suite `{other}`")),
        }
    }
}

/// Podles-sphere verification at one (q, l_max).
pub fn podles_suite(
    q: f64,
    l_max: HalfInt,
    kind: PodlesSuiteKind,
    seed: u64,
) -> Result<SuiteOutcome> {
    let mut config = RunConfig::new("podles", seed);
    config.q = Some(q);
    config.l_max_doubled = Some(l_max.doubled());
    let hash = config.config_hash();
    let tr = PodlesTruncation::new(l_max, q)?;
    let mut named: Vec<(String, f64, f64)> = Vec::new(); // (name, residual, tol)
    let mut reports = Vec::new();
    let mut failures = Vec::new();
    let mut summary = Vec::new();

    match kind {
        PodlesSuiteKind::Relations => {
            for (name, residual) in geom_podles::relation_residuals(&tr) {
                named.push((name, residual, 1e-8));
            }
            for (name, residual) in geom_podles::leibniz_residuals(&tr) {
                named.push((name, residual, 1e-8));
            }
            named.push(("star_relation".into(), geom_podles::star_relation_residual(&tr), 1e-8));
            named.push((
                "haar_modular".into(),
                geom_podles::modular_property_residual(&tr, 50, seed),
                1e-8,
            ));
            let triple = geom_podles::build_podles_dirac(&tr)?;
            let sym = triple
                .dirac
                .matrix()
                .sub(&triple.dirac.matrix().adjoint())
                .frobenius_norm();
            named.push(("dirac_haar_symmetry".into(), sym, 1e-9));
        }
        PodlesSuiteKind::Omega => {
            named.push((
                "omega_composition".into(),
                geom_podles::omega_composition_residual(&tr),
                1e-8,
            ));
            for &z in &[0.0, 0.5, 1.0] {
                named.push((
                    format!("omega_adjoint_z={z}"),
                    geom_podles::omega_adjoint_residual(&tr, z),
                    1e-8,
                ));
            }
        }
        PodlesSuiteKind::Mu => {
            let report = geom_podles::mu_half_check(&tr)?;
            named.push(("mu_display".into(), report.display_residual, 1e-8));
            named.push(("mu_projection_sum".into(), report.sum_residual, 1e-9));
            named.push(("mu_idempotency".into(), report.idempotency_residual, 1e-9));
            named.push(("mu_eigenvalues".into(), report.eigenvalue_residual, 1e-8));
        }
        PodlesSuiteKind::Twisted => {
            let ls: Vec<HalfInt> = [3, 5, 7, 9].iter().map(|&d| HalfInt::from_doubled(d)).collect();
            let mut twisted =
                geom_podles::twisted_commutator_sweep(SuqGenerator::A, 0.0, &ls, q, seed)?;
            twisted.config_hash = hash.clone();
            if twisted.classification != TrendClass::BoundedPlateau {
                failures.push(format!(
                    "podles twisted sweep: {} (slope {:.3})",
                    twisted.classification, twisted.slope
                ));
            }
            let mut untwisted =
                geom_podles::untwisted_commutator_sweep(SuqGenerator::A, &ls, q, seed)?;
            untwisted.config_hash = hash.clone();
            if untwisted.classification != TrendClass::Divergent {
                failures.push(format!(
                    "podles untwisted contrast: {} (slope {:.3})",
                    untwisted.classification, untwisted.slope
                ));
            }
            summary.push(format!(
                "twisted sweep values {:?} ({}), untwisted {:?} ({})",
                twisted.values, twisted.classification, untwisted.values, untwisted.classification
            ));
            reports.push(twisted);
            reports.push(untwisted);
        }
    }

    if !named.is_empty() {
        for (name, residual, tol) in &named {
            if residual >= tol {
                failures.push(format!("podles {name}: residual {residual:.3e} (tol {tol:.0e})"));
            }
            summary.push(format!("podles {name}: residual {residual:.3e}"));
        }
        let values: Vec<f64> = named.iter().map(|(_, r, _)| *r).collect();
        if values.len() >= 3 {
            reports.push(draw_report("podles", "identity_residual", seed, &hash, &values));
        }
    }
    Ok(SuiteOutcome { config, reports, summary, failures })
}

/// Heisenberg suite: exact dilation identities and windowed commutator
/// sweeps for the given generators, plus the sharp-exponent contrast.
pub fn heisenberg_suite(radii: &[i64], generators: &[HeisPoint], seed: u64) -> Result<SuiteOutcome> {
    let mut config = RunConfig::new("heisenberg", seed);
    config.radii = Some(radii.to_vec());
    let hash = config.config_hash();
    let mut reports = Vec::new();
    let mut failures = Vec::new();
    let mut summary = Vec::new();

    for t in [1u32, 2, 3] {
        let report = dilation_check(t, 20)?;
        if report.max_residual != 0.0 {
            failures.push(format!("heisenberg dilation t={t}: residual {}", report.max_residual));
        }
        summary.push(format!(
            "dilation t={t}: residual {}, coverage {:.4}, jacobian ratio {:.2}",
            report.max_residual, report.coverage, report.jacobian_ratio
        ));
    }

    for &g in generators {
        let mut report = commutator_bound_sweep(g, radii, seed)?;
        report.config_hash = hash.clone();
        if report.classification != TrendClass::BoundedPlateau {
            failures.push(format!(
                "heisenberg generator ({},{},{}): {} (slope {:.3})",
                g.a, g.b, g.c, report.classification, report.slope
            ));
        }
        summary.push(format!(
            "generator ({},{},{}): values {:?} -> {}",
            g.a, g.b, g.c, report.values, report.classification
        ));
        reports.push(report);
    }

    let mut contrast =
        commutator_bound_sweep_with_exponent(HeisPoint::new(1, 0, 0), radii, -0.125, seed)?;
    contrast.config_hash = hash.clone();
    if contrast.classification != TrendClass::Divergent {
        failures.push(format!(
            "heisenberg exponent contrast: {} (slope {:.3})",
            contrast.classification, contrast.slope
        ));
    }
    summary.push(format!(
        "exponent -1/8 contrast: values {:?} -> {}",
        contrast.values, contrast.classification
    ));
    reports.push(contrast);

    Ok(SuiteOutcome { config, reports, summary, failures })
}

/// Logarithmic dampening of the dilation D -> kappa D on circle truncations.
///
/// The sup of |L(kappa n) - L(n)| over the integer spectrum is bounded
/// uniformly in N; for kappa = 2 it peaks at 0.69888 (n = 6) and settles
/// to log 2 from above, so the sweep classifies as a plateau.
pub fn log_dampen_suite(kappa: f64, n_list: &[usize], seed: u64) -> Result<SuiteOutcome> {
    let mut config = RunConfig::new("log-dampen", seed);
    config.kappa = Some(kappa);
    config.n_list = Some(n_list.to_vec());
    let hash = config.config_hash();
    let params: Vec<f64> = n_list.iter().map(|&n| n as f64).collect();
    let sweep = run_sweep("log-dampen", "log_transform_gap", "N", &params, seed, &hash, |n| {
        // scalar route: the operators are diagonal on the circle truncation
        Ok((0..=(n as i64))
            .map(|j| {
                let x = j as f64;
                (log_transform_scalar(kappa * x) - log_transform_scalar(x)).abs()
            })
            .fold(0.0, f64::max))
    })?;
    let mut failures = Vec::new();
    if sweep.classification != TrendClass::BoundedPlateau {
        failures.push(format!(
            "log-dampen sweep: {} (slope {:.3})",
            sweep.classification, sweep.slope
        ));
    }
    let last = *sweep.values.last().expect("nonempty sweep");
    if kappa == 2.0 {
        // bounded uniformly; the limit is log 2 and the windowed sup
        // overshoots by at most 0.006.
        if !(last >= 2.0f64.ln() - 0.01 && last <= 0.699) {
            failures.push(format!("log-dampen terminal value {last} outside [log2 - 0.01, 0.699]"));
        }
    }
    let summary = vec![format!(
        "log-dampen kappa={kappa}: values {:?} -> {} (log 2 = {:.6})",
        sweep.values,
        sweep.classification,
        2.0f64.ln()
    )];
    Ok(SuiteOutcome { config, reports: vec![sweep], summary, failures })
}

