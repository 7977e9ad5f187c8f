//! The logarithmic transform L_D = F_D log<D> turns the multiplicative
//! perturbation D -> 2D into a bounded additive one: ||L_2D - L_D|| stays
//! bounded uniformly in the truncation, settling near log 2.
//!
//! Run with: cargo run --example log_dampening

use kkperturb::opcore::operator_norm;
use kkperturb::opcore::HermitianOperator;
use kkperturb::transforms::{log_transform, log_transform_scalar};

fn main() -> kkperturb::Result<()> {
    println!("||L_2D - L_D|| on D = diag(-N..N)   (log 2 = {:.6})", 2.0f64.ln());
    for n in [4i64, 16, 64, 256] {
        let spectrum: Vec<f64> = (-n..=n).map(|k| k as f64).collect();
        let d = HermitianOperator::real_diagonal(&spectrum);
        let gap = operator_norm(
            &log_transform(&d.scale(2.0))?.matrix().sub(log_transform(&d)?.matrix()),
        );
        println!("  N = {n:4}: {gap:.6}");
    }

    // The scalar symbol shows where the sup sits: it peaks at n = 6 slightly
    // above log 2 and then settles down to log 2 from above.
    println!("\nscalar gap |L(2n) - L(n)| near the peak:");
    for n in [1i64, 2, 4, 6, 8, 16, 64, 512] {
        let x = n as f64;
        let gap = log_transform_scalar(2.0 * x) - log_transform_scalar(x);
        println!("  n = {n:4}: {gap:.6}");
    }
    Ok(())
}
