//! Rescaling D to mu D mu* squeezes its resolvent between conjugates of the
//! original one:
//!
//!   C^{-1} mu^{-*}(1+D^2)^{-1}mu^{-1} <= (1+(mu D mu*)^2)^{-1}
//!                                     <= C mu^{-*}(1+D^2)^{-1}mu^{-1},
//!
//! with C = max{||mu||^2, ||mu^{-1}||^2}, together with the fractional
//! domain bounds ||<D>^a mu* (mu<D>mu*)^{-a}|| <= ||mu^{-1}||^a ||mu||^{1-a}.
//!
//! Run with: cargo run --example conformal_sandwich

use kkperturb::opcore::ToleranceConfig;
use kkperturb::perturb::{mu_fractional_bounds_check, sandwich_check, ConformalFactor};
use kkperturb::randmat::{rand_hermitian, rand_invertible_with_cond, seeded_rng};

fn main() -> kkperturb::Result<()> {
    let tol = ToleranceConfig::default();
    let mut rng = seeded_rng(31);

    let mut worst_lower = f64::INFINITY;
    let mut worst_upper = f64::INFINITY;
    let draws = 200;
    for _ in 0..draws {
        let d = rand_hermitian(&mut rng, 10);
        let mu = ConformalFactor::new(rand_invertible_with_cond(&mut rng, 10, 10.0))?;
        let report = sandwich_check(&d, &mu, &tol)?;
        worst_lower = worst_lower.min(report.margin_lower);
        worst_upper = worst_upper.min(report.margin_upper);
    }
    println!("sandwich on {draws} draws: worst margins ({worst_lower:.3e}, {worst_upper:.3e})");

    let d = rand_hermitian(&mut rng, 12);
    let mu = ConformalFactor::new(rand_invertible_with_cond(&mut rng, 12, 20.0))?;
    println!("\nfractional bounds for one draw (cond(mu) = {:.2}):", mu.cond());
    for alpha in [0.25, 0.5, 0.75] {
        let r = mu_fractional_bounds_check(&d, &mu, alpha, &tol)?;
        println!(
            "  alpha = {alpha}: {:.4} <= {:.4} and {:.4} <= {:.4}",
            r.first_lhs, r.first_rhs, r.second_lhs, r.second_rhs
        );
    }
    Ok(())
}
