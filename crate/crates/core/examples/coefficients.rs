//! Hermite coefficients of a compactly supported bump, and how fast Plancherel closes
//! as the truncation level grows.

use hermite_hardy::function::{l2_norm_squared, BumpFunction};
use hermite_hardy::poly::{Ball, SupportedPoly};
use hermite_hardy::spectral::{coefficients, plancherel_profile};

pub fn run_example() -> anyhow::Result<Vec<(u64, f64)>> {
    let ball = Ball::new(vec![1.0], 0.5)?;
    let f = BumpFunction::new(SupportedPoly::bump(ball, 4, 1.0));
    let levels = [16, 64, 256, 1024];
    let coeffs = coefficients(&f, *levels.last().unwrap())?;
    for (mu, c) in coeffs.iter().take(6) {
        println!("<f, Φ_{mu}> = {c:+.6e}");
    }
    let norm2 = l2_norm_squared(&f, *levels.last().unwrap())?;
    let defects: Vec<f64> = plancherel_profile(&f, &coeffs, &levels)?.into_iter().map(|d| d / norm2).collect();
    for (k, d) in levels.iter().zip(&defects) {
        println!("K = {k:5}: Plancherel defect / |f|^2 = {d:.3e}");
    }
    Ok(levels.into_iter().zip(defects).collect())
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example().map(drop)
}
