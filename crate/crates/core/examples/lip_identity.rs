//! `(I − e^{−r²L})^M Φ_μ = (1 − e^{−r²(2|μ|+n)})^M Φ_μ`, with the left side computed by
//! nested semigroup quadratures.

use hermite_hardy::multiindex::MultiIndex;
use hermite_hardy::semigroup::{lip_eigen_check, LipCheck};

pub fn run_example() -> anyhow::Result<Vec<LipCheck>> {
    let mut out = Vec::new();
    for (mu, r, m) in [(3, 0.25, 1), (6, 1.0, 2), (10, 4.0, 1)] {
        let c = lip_eigen_check(&MultiIndex::new(&[mu]), r, m)?;
        println!("μ = {mu:2}, r = {r:4}, M = {m}: factor {:.6e}, residual {:.2e}", c.factor, c.residual);
        out.push(c);
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example().map(drop)
}
