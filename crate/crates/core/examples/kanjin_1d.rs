//! Classical H¹ atoms `r⁻¹ψ((x − x₀)/r)` on the line: `Σ|c_k|(2k+1)^{−3/4}` against the
//! `L¹` norm of the heat maximal function.

use hermite_hardy::verifier::{run, Experiment, ExperimentConfig, Report};

pub fn run_example() -> anyhow::Result<Report> {
    let mut cfg = ExperimentConfig::new(Experiment::Kanjin1d);
    cfg.radii = vec![1.0, 0.5, 0.25, 0.125];
    cfg.centers = vec![vec![2.0]];
    let report = run(&cfg)?;
    for r in &report.rows {
        println!("r = {:6}: sum = {:.6}, proxy = {:.6}, ratio = {:.6}", r.radius, r.hardy_sum, r.proxy.unwrap_or(f64::NAN), r.ratio.unwrap_or(f64::NAN));
    }
    Ok(report)
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example().map(drop)
}
