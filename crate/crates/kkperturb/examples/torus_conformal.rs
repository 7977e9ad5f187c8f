//! Noncommutative torus at Fourier truncation: conformally rescaling the
//! Dirac operator by a right multiplier k° moves the bounded transform only
//! by a locally compact amount. The sweep tracks
//! ||(F_k°Dk° - F_D) U k° <D>^(1/2)|| over truncation radii and the
//! singular-value decay of the difference against the algebra action.
//!
//! Run with: cargo run --example torus_conformal

use num_complex::Complex64 as C64;

use kkperturb::geom_torus::{
    conformal_identity_residual, default_theta, torus_conformal_observable,
    torus_kk_compactness_profile, torus_resolvent_profile, KSpec, TorusBasis,
};

fn main() -> kkperturb::Result<()> {
    let theta = default_theta();
    let tau = C64::new(0.0, 1.0);
    let k = KSpec::default(); // 2 + (U + U*)/2

    println!("theta = {theta:.6}, tau = i, k = 2 + (U+U*)/2");
    println!("\nN   observable   identity residual");
    for n in [4i64, 6, 8, 10, 12] {
        let basis = TorusBasis::new(n, theta)?;
        let value = torus_conformal_observable(&basis, tau, &k, 0.5)?;
        let residual = conformal_identity_residual(&basis, tau, &k)?;
        println!("{n:2}  {value:10.6}   {residual:.3e}");
    }

    let basis = TorusBasis::new(12, theta)?;
    let resolvent = torus_resolvent_profile(&basis, tau);
    println!(
        "\ncompact resolvent proxy at N = 12: (1+D^2)^(-1) decay slope {:.3}",
        resolvent.decay_rate
    );
    let profile = torus_kk_compactness_profile(&basis, tau, &k)?;
    println!(
        "local compactness proxy: singular values of (F_k°Dk° - F_D) U decay with slope {:.3}",
        profile.decay_rate
    );
    Ok(())
}
