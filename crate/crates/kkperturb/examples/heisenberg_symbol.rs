//! The discrete Heisenberg group and its order-2 Clifford symbol: exact
//! degree-2 homogeneity under dilations, and the windowed commutator sups
//! that stay bounded with the (1+ell^2)^(-1/4) weight but diverge with the
//! weaker (1+ell^2)^(-1/8).
//!
//! Run with: cargo run --example heisenberg_symbol

use kkperturb::geom_heisenberg::{
    commutator_bound_sweep, commutator_bound_sweep_with_exponent, dilation_check, ell, heis_mul,
    HeisPoint,
};

fn main() -> kkperturb::Result<()> {
    let g = HeisPoint::new(1, 0, 0);
    let h = HeisPoint::new(0, 1, 0);
    let gh = heis_mul(g, h)?;
    println!("(1,0,0) * (0,1,0) = ({}, {}, {})", gh.a, gh.b, gh.c);

    let p = HeisPoint::new(2, -1, 3);
    println!(
        "symbol at (2,-1,3): gamma coefficients x = {:.4}, y = {:.4}, z = {:.4}",
        ell(p).x,
        ell(p).y,
        ell(p).z
    );

    for t in [2u32, 3] {
        let report = dilation_check(t, 20)?;
        println!(
            "dilation t = {t}: residual {} on {} covered points (coverage {:.3}, jacobian ratio {:.2} -> t^4 = {})",
            report.max_residual,
            report.points_checked,
            report.coverage,
            report.jacobian_ratio,
            t.pow(4)
        );
    }

    let radii = [10i64, 20, 40, 80];
    let bounded = commutator_bound_sweep(HeisPoint::new(1, 0, 0), &radii, 0)?;
    println!(
        "\ncommutator sup with weight exponent -1/4 over R = {radii:?}:\n  {:?} -> {}",
        bounded.values, bounded.classification
    );
    let contrast =
        commutator_bound_sweep_with_exponent(HeisPoint::new(1, 0, 0), &radii, -0.125, 0)?;
    println!(
        "contrast with exponent -1/8:\n  {:?} -> {}",
        contrast.values, contrast.classification
    );
    Ok(())
}
