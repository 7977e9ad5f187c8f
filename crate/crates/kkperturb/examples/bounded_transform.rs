//! The bounded transform F_D = D(1+D^2)^{-1/2}: a contraction with the same
//! eigenvectors as D, compressing the spectrum into (-1, 1).
//!
//! Run with: cargo run --example bounded_transform

use kkperturb::opcore::{apply_function, operator_norm, HermitianOperator};
use kkperturb::randmat::{rand_hermitian, seeded_rng};
use kkperturb::transforms::bounded_transform;

fn main() -> kkperturb::Result<()> {
    let d = HermitianOperator::real_diagonal(&[-3.0, -1.0, 0.0, 1.0, 2.0]);
    let f = bounded_transform(&d)?;
    println!("eigenvalues of D and F_D:");
    for (x, y) in d.eig()?.eigenvalues.iter().zip(f.eig()?.eigenvalues.iter()) {
        println!("  {x:+.4}  ->  {y:+.7}");
    }

    let mut rng = seeded_rng(42);
    let d = rand_hermitian(&mut rng, 40);
    let f = bounded_transform(&d)?;
    println!("\nrandom Hermitian, dim 40:");
    println!("  ||D||   = {:.4}", operator_norm(d.matrix()));
    println!("  ||F_D|| = {:.6} (always < 1)", operator_norm(f.matrix()));

    // Rescaling D by kappa is the same as composing the symbol: the pair
    // (id, kappa^{1/2}) rescales the operator, and the transform follows it.
    let kappa = 2.0;
    let lhs = bounded_transform(&d.scale(kappa))?;
    let rhs = apply_function(&d, |x| kappa * x / (1.0 + kappa * kappa * x * x).sqrt(), "symbol")?;
    println!(
        "\nscaling identity F_(kD) vs symbol route: difference {:.3e}",
        lhs.matrix().sub(rhs.matrix()).frobenius_norm()
    );
    Ok(())
}
