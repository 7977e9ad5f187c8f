//! The simplest conformal rescaling, D -> kappa D on a circle truncation
//! D = diag(-N..N): the transform difference F_kD - F_D is uniformly small
//! in norm and decays quadratically along the spectrum, the desk-scale
//! shadow of local compactness.
//!
//! Run with: cargo run --example circle_dilation

use kkperturb::geom_torus::circle_dilation_compare;

fn main() -> kkperturb::Result<()> {
    for kappa in [1.0, 2.0, 8.0] {
        let r = circle_dilation_compare(256, kappa, 0.5)?;
        println!(
            "kappa = {kappa}: ||F_kD - F_D|| = {:.6}, weighted (beta = 1/2) = {:.6}",
            r.norm_diff, r.weighted_norm
        );
    }

    let r = circle_dilation_compare(256, 2.0, 0.0)?;
    println!("\nsingular values of (F_2D - F_D) shift, every 16th index:");
    for (k, sigma) in r.shifted_values.iter().enumerate().step_by(16).take(9) {
        println!("  sigma_{k:3} = {sigma:.6e}");
    }
    println!("decay slope {:.3}", r.shifted_decay_rate);
    Ok(())
}
