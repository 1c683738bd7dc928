//! Mehler and Euclidean heat kernels, the semigroups applied to a bump, and the two
//! maximal functions at a few points.

use hermite_hardy::function::BumpFunction;
use hermite_hardy::poly::{Ball, SupportedPoly};
use hermite_hardy::semigroup::{heat_kernel, maximal_fn, mehler_kernel, semigroup_apply, HeatKind, MaximalSpec};

pub fn run_example() -> anyhow::Result<Vec<(f64, f64, f64)>> {
    println!("Mehler kernel K_1(0.5, -0.2) = {}", mehler_kernel(1.0, &[0.5], &[-0.2])?);
    println!("heat kernel   W_1(0.5, -0.2) = {}", heat_kernel(1.0, &[0.5], &[-0.2])?);

    let f = BumpFunction::new(SupportedPoly::bump(Ball::new(vec![0.0], 0.5)?, 4, 1.0));
    for t in [0.01, 0.1, 1.0] {
        let h = semigroup_apply(&f, t, &[0.0], HeatKind::Hermite)?;
        let w = semigroup_apply(&f, t, &[0.0], HeatKind::Laplace)?;
        println!("t = {t:4}: e^(-tL) f(0) = {h:.6}, e^(tΔ) f(0) = {w:.6}");
    }

    let (her, lap) = (MaximalSpec::hermite(), MaximalSpec::laplace(20.0));
    let mut out = Vec::new();
    for x in [0.0, 2.0, 8.0] {
        let (ml, md) = (maximal_fn(&f, &[x], &her)?, maximal_fn(&f, &[x], &lap)?);
        println!("x = {x}: M_L f = {ml:.4e}, M_Δ f = {md:.4e}");
        out.push((x, ml, md));
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example().map(drop)
}
