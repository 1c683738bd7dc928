//! The Hardy sum `Σ |<a, Φ_μ>|^p (2|μ|+n)^{−3n(2−p)/4}` of one atom, extended block by
//! block until the last block is negligible, with its block profile.

use hermite_hardy::atoms::{make_plm_atom, PlmAtomParams};
use hermite_hardy::spectral::{converged_coefficients, initial_level, Exponent, HardySum, TruncationPolicy};

pub fn run_example() -> anyhow::Result<HardySum> {
    let (center, r) = (vec![2.0], 0.125);
    let atom = make_plm_atom(&PlmAtomParams::new(1.0, 1, center.clone(), r))?;
    let conv = converged_coefficients(
        &atom.atom_function(),
        1.0,
        r,
        Some(1),
        initial_level(&center, r),
        &TruncationPolicy::default(),
        Exponent::Critical,
    )?;
    print!("{}", conv.profile.to_csv());
    let h = &conv.hardy;
    println!("sum = {} (σ = {}), last block {} carries {:.2e} of it, converged: {}", h.value, h.sigma, h.last_block, h.tail_fraction, h.converged);
    Ok(conv.hardy)
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example().map(drop)
}
