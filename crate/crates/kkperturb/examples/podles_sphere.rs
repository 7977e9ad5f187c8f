//! The standard Podles sphere at Peter-Weyl truncation: quantum SU(2)
//! relations, the kappa-ladder Dirac operator, the two-eigenvalue conformal
//! factor mu^{1/2}, and the twisted commutators that stay bounded where the
//! untwisted ones blow up.
//!
//! Run with: cargo run --example podles_sphere

use kkperturb::geom_podles::{
    build_podles_dirac, mu_half_check, omega_adjoint_residual, omega_composition_residual,
    relation_residuals, twisted_commutator_sweep, untwisted_commutator_sweep, HalfInt,
    PodlesTruncation, SuqGenerator,
};

fn main() -> kkperturb::Result<()> {
    let q = 0.5;
    let l_max = HalfInt::from_int(3);
    let tr = PodlesTruncation::new(l_max, q)?;
    println!("q = {q}, truncation l <= {l_max} (dim {})", tr.basis.dim());

    println!("\ndefining relations on the interior:");
    for (name, residual) in relation_residuals(&tr) {
        println!("  {name:12} residual {residual:.3e}");
    }

    let triple = build_podles_dirac(&tr)?;
    let eigs = &triple.dirac.eig()?.eigenvalues;
    println!("\nDirac spectrum (q-integers [l+1/2]_q): min {:.4}, max {:.4}", eigs[0], eigs[eigs.len() - 1]);

    let mu = mu_half_check(&tr)?;
    println!("\nconformal factor mu^(1/2) = q^(1/2) P+ + q^(-1/2) P-:");
    println!("  display assembly residual   {:.3e}", mu.display_residual);
    println!("  P+ + P- = 1 residual        {:.3e}", mu.sum_residual);
    println!("  idempotency residual        {:.3e}", mu.idempotency_residual);
    println!("  eigenvalue defect           {:.3e}", mu.eigenvalue_residual);

    println!("\nomega-action identities:");
    println!("  composition residual {:.3e}", omega_composition_residual(&tr));
    println!("  adjoint residual     {:.3e}", omega_adjoint_residual(&tr, 0.5));

    let ls: Vec<HalfInt> = [3, 5, 7, 9].iter().map(|&d| HalfInt::from_doubled(d)).collect();
    let twisted = twisted_commutator_sweep(SuqGenerator::A, 0.0, &ls, q, 0)?;
    let untwisted = untwisted_commutator_sweep(SuqGenerator::A, &ls, q, 0)?;
    println!("\ntwisted commutator sweep over l_max = 3/2 .. 9/2:");
    println!("  twisted   {:?} -> {}", twisted.values, twisted.classification);
    println!("  untwisted {:?} -> {}", untwisted.values, untwisted.classification);
    Ok(())
}
