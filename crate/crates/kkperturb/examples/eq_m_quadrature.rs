//! Fractional resolvent powers (1+D^2)^{-alpha} two ways: the eigenbasis
//! functional calculus, and the discretized integral
//!
//!   (1+D^2)^{-alpha} = (sin(alpha pi)/pi) int_0^inf t^{-alpha}(t+1+D^2)^{-1} dt
//!
//! evaluated by resolvent solves on a clipped log grid.
//!
//! Run with: cargo run --example eq_m_quadrature

use kkperturb::opcore::{apply_function, operator_norm, ToleranceConfig};
use kkperturb::randmat::{rand_hermitian, seeded_rng};
use kkperturb::transforms::{resolvent_power_quadrature, QuadratureSpec};

fn main() -> kkperturb::Result<()> {
    let tol = ToleranceConfig::default();
    let mut rng = seeded_rng(7);
    let d = rand_hermitian(&mut rng, 32);
    println!("random Hermitian D, dim 32; quadrature vs functional calculus:");
    for alpha in [0.25, 0.5, 0.75] {
        let quad = resolvent_power_quadrature(&d, alpha, &QuadratureSpec::default(), &tol)?;
        let oracle = apply_function(&d, |x| (1.0 + x * x).powf(-alpha), "oracle")?;
        let rel = operator_norm(&quad.matrix().sub(oracle.matrix())) / operator_norm(oracle.matrix());
        println!("  alpha = {alpha}: relative error {rel:.3e}");
    }
    Ok(())
}
