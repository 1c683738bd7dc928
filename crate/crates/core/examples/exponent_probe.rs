//! The atom sweep with the exponent lowered by δ: exploratory, records how the ratio
//! moves as the radius shrinks.

use hermite_hardy::verifier::{run, Experiment, ExperimentConfig, Report};

pub fn run_example() -> anyhow::Result<Report> {
    let mut cfg = ExperimentConfig::new(Experiment::ExponentProbe);
    cfg.radii = vec![1.0, 0.5, 0.25, 0.125];
    cfg.centers = vec![vec![0.0]];
    cfg.probe_delta = 0.25;
    let report = run(&cfg)?;
    for r in &report.rows {
        println!("r = {:6}: σ = {}, sum = {:.6}, ratio = {:.6}", r.radius, r.sigma, r.hardy_sum, r.ratio.unwrap_or(f64::NAN));
    }
    println!("spearman per center: {:?}", report.trends.iter().map(|t| t.spearman).collect::<Vec<_>>());
    Ok(report)
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example().map(drop)
}
