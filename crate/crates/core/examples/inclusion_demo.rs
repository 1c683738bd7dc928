//! A mean-one bump: the heat maximal function decays like `1/|x|` and is not integrable,
//! the Hermite one is. Writes report.json, rows.csv and inclusion.svg to `out/inclusion`.

use hermite_hardy::verifier::{run, Experiment, ExperimentConfig, Report};

pub fn run_example() -> anyhow::Result<Report> {
    let report = run(&ExperimentConfig::new(Experiment::InclusionDemo))?;
    print!("{}", report.rows_csv());
    if let Some(fit) = report.summary.laplace_fit {
        println!("M_Δ column ≈ {:.4} log R + {:.4} (R² = {:.6})", fit.slope, fit.intercept, fit.r_squared);
    }
    println!("M_L increments: {:?}", report.inclusion_increments);
    if std::env::args().any(|a| a == "--write") {
        report.write_outputs(std::path::Path::new("out/inclusion"))?;
    }
    Ok(report)
}

#[allow(dead_code)]
fn main() -> anyhow::Result<()> {
    run_example().map(drop)
}
