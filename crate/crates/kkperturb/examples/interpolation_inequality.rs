//! Fractional-power interpolation: for positive invertible A, B and any T,
//!
//!   ||A^a T B^{-a}|| <= ||A T B^{-1}||^a ||T||^{1-a},   0 < a <= 1.
//!
//! Run with: cargo run --example interpolation_inequality

use kkperturb::opcore::{ComplexMatrix, HermitianOperator, ToleranceConfig};
use kkperturb::perturb::interpolation_check;
use kkperturb::randmat::{rand_complex, rand_positive_with_cond, seeded_rng};
use rand::Rng;

fn main() -> kkperturb::Result<()> {
    let tol = ToleranceConfig::default();

    // diagonal equality case: A = diag(1,9), B = I, T = I, alpha = 1/2
    let a = HermitianOperator::real_diagonal(&[1.0, 9.0]);
    let b = HermitianOperator::real_diagonal(&[1.0, 1.0]);
    let report = interpolation_check(&a, &b, &ComplexMatrix::identity(2), 0.5, &tol)?;
    println!("equality case: lhs = {}, rhs = {}", report.lhs, report.rhs);

    let mut rng = seeded_rng(5);
    let draws = 400;
    let mut min_margin = f64::INFINITY;
    for _ in 0..draws {
        let dim = rng.gen_range(2..=12);
        let a = rand_positive_with_cond(&mut rng, dim, 100.0);
        let b = rand_positive_with_cond(&mut rng, dim, 100.0);
        let t = rand_complex(&mut rng, dim);
        let alpha = [0.25, 0.5, 0.75, 1.0][rng.gen_range(0..4)];
        let report = interpolation_check(&a, &b, &t, alpha, &tol)?;
        min_margin = min_margin.min(report.rhs - report.lhs);
    }
    println!("{draws} random draws (cond <= 100): min(rhs - lhs) = {min_margin:.3e}");
    Ok(())
}
