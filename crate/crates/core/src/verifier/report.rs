use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::stats::LinearFit;
use super::svg::{LinePlot, Series};
use crate::error::Result;
use crate::semigroup::MaximalSpec;
use crate::spectral::{BlockProfile, TruncationPolicy};

/// One atom of a sweep (or one classical atom of the 1-d family).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomRow {
    pub id: String,
    pub center: Vec<f64>,
    pub radius: f64,
    pub q: u32,
    pub scale: f64,
    /// Highest level kept after truncation.
    pub level: u64,
    pub hardy_sum: f64,
    pub sigma: f64,
    pub converged: bool,
    pub tail_fraction: f64,
    pub max_normalized_i: Option<f64>,
    pub max_normalized_ii: Option<f64>,
    /// Worst `block_sum / holder_bound − 1` over blocks.
    pub holder_excess: f64,
    /// Atom validator verdict.
    pub valid: bool,
    /// `‖M f‖_p^p` over the proxy box.
    pub proxy: Option<f64>,
    pub ratio: Option<f64>,
    /// Relative gap to the naive double-loop recomputation, for the rows picked for it.
    pub naive_deviation: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InclusionRow {
    pub box_radius: f64,
    /// `‖M_Δ a‖_{L¹([−R, R])}`.
    pub laplace_l1: f64,
    /// `‖M_L a‖_{L¹([−R, R])}`.
    pub hermite_l1: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FarFieldSample {
    pub x: f64,
    pub value: f64,
    /// `(2πe)^{−1/2} / |x − x₀|`.
    pub predicted: f64,
    pub relative_error: f64,
}

/// Spearman correlation of a ratio against `log r` along one center's radii.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trend {
    pub center: Vec<f64>,
    pub points: usize,
    pub spearman: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub rows: usize,
    /// Family supremum of the Hardy sums: the empirical constant.
    pub sup_hardy_sum: Option<f64>,
    pub sup_ratio: Option<f64>,
    pub sup_normalized_i: Option<f64>,
    pub sup_normalized_ii: Option<f64>,
    pub all_converged: bool,
    pub all_valid: bool,
    pub worst_holder_excess: Option<f64>,
    pub naive_checks: usize,
    pub worst_naive_deviation: Option<f64>,
    pub max_abs_spearman: Option<f64>,
    pub laplace_fit: Option<LinearFit>,
    pub laplace_strictly_increasing: Option<bool>,
    pub hermite_final_increment: Option<f64>,
    pub worst_far_field_error: Option<f64>,
    /// Exploratory runs carry no verdict.
    pub exploratory: bool,
    pub pass: bool,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockEntry {
    pub id: String,
    pub profile: BlockProfile,
}

/// Settings the reported constants depend on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fingerprint {
    pub hash: String,
    pub truncation: TruncationPolicy,
    pub coefficient_rule: String,
    pub maximal: Option<MaximalSpec>,
    pub proxy_panel_nodes: usize,
    pub proxy_half_width: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub experiment: String,
    pub fingerprint: Fingerprint,
    pub config: ExperimentConfig,
    pub rows: Vec<AtomRow>,
    pub trends: Vec<Trend>,
    pub inclusion: Vec<InclusionRow>,
    pub inclusion_increments: Vec<f64>,
    pub far_field: Vec<FarFieldSample>,
    pub blocks: Vec<BlockEntry>,
    pub summary: Summary,
}

fn num(v: f64) -> String {
    format!("{v}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

fn to_csv(header: &[&str], records: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory csv");
    for r in records {
        w.write_record(&r).expect("in-memory csv");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv")
}

pub const ROW_COLUMNS: [&str; 17] = [
    "id",
    "center",
    "radius",
    "q",
    "scale",
    "level",
    "hardy_sum",
    "sigma",
    "converged",
    "tail_fraction",
    "max_normalized_I",
    "max_normalized_II",
    "holder_excess",
    "valid",
    "proxy",
    "ratio",
    "naive_deviation",
];

pub const INCLUSION_COLUMNS: [&str; 3] = ["box_radius", "laplace_l1", "hermite_l1"];

impl Report {
    /// `rows.csv`: one line per atom, or per box radius for the inclusion demo.
    pub fn rows_csv(&self) -> String {
        if !self.inclusion.is_empty() {
            return to_csv(
                &INCLUSION_COLUMNS,
                self.inclusion.iter().map(|r| vec![num(r.box_radius), num(r.laplace_l1), num(r.hermite_l1)]),
            );
        }
        to_csv(
            &ROW_COLUMNS,
            self.rows.iter().map(|r| {
                vec![
                    r.id.clone(),
                    r.center.iter().map(|c| num(*c)).collect::<Vec<_>>().join(";"),
                    num(r.radius),
                    r.q.to_string(),
                    num(r.scale),
                    r.level.to_string(),
                    num(r.hardy_sum),
                    num(r.sigma),
                    r.converged.to_string(),
                    num(r.tail_fraction),
                    opt(r.max_normalized_i),
                    opt(r.max_normalized_ii),
                    num(r.holder_excess),
                    r.valid.to_string(),
                    opt(r.proxy),
                    opt(r.ratio),
                    opt(r.naive_deviation),
                ]
            }),
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    fn per_center_series(&self, y: impl Fn(&AtomRow) -> Option<f64>) -> Vec<Series> {
        let mut series: Vec<Series> = Vec::new();
        for row in &self.rows {
            let name = format!("x0 = {}", row.center.iter().map(|c| num(*c)).collect::<Vec<_>>().join(","));
            let Some(v) = y(row) else { continue };
            match series.iter_mut().find(|s| s.name == name) {
                Some(s) => s.points.push((row.radius, v)),
                None => series.push(Series { name, points: vec![(row.radius, v)] }),
            }
        }
        series
    }

    /// Named SVG documents for this report.
    pub fn plots(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        if !self.inclusion.is_empty() {
            let pts = |f: fn(&InclusionRow) -> f64| self.inclusion.iter().map(|r| (r.box_radius, f(r))).collect();
            let plot = LinePlot {
                title: "maximal functions of a mean-one bump, L1 over [-R, R]".into(),
                x_label: "R".into(),
                y_label: "L1 norm".into(),
                log_x: true,
                log_y: false,
                series: vec![
                    Series { name: "heat (Laplacian)".into(), points: pts(|r| r.laplace_l1) },
                    Series { name: "Hermite".into(), points: pts(|r| r.hermite_l1) },
                ],
            };
            out.push(("inclusion.svg".to_string(), plot.render()));
            return out;
        }
        if !self.rows.is_empty() {
            let plot = LinePlot {
                title: format!("{}: Hardy sum vs radius", self.experiment),
                x_label: "r".into(),
                y_label: "Hardy sum".into(),
                log_x: true,
                log_y: true,
                series: self.per_center_series(|r| Some(r.hardy_sum)),
            };
            out.push(("hardy_sum.svg".to_string(), plot.render()));
        }
        if self.rows.iter().any(|r| r.ratio.is_some()) {
            let plot = LinePlot {
                title: format!("{}: Hardy sum / maximal proxy", self.experiment),
                x_label: "r".into(),
                y_label: "ratio".into(),
                log_x: true,
                log_y: true,
                series: self.per_center_series(|r| r.ratio),
            };
            out.push(("ratio.svg".to_string(), plot.render()));
        }
        out
    }

    /// Writes `report.json`, `rows.csv`, `blocks_<id>.csv` and the plots into `dir`.
    pub fn write_outputs(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("report.json"), self.to_json())?;
        std::fs::write(dir.join("rows.csv"), self.rows_csv())?;
        for b in &self.blocks {
            std::fs::write(dir.join(format!("blocks_{}.csv", b.id)), b.profile.to_csv())?;
        }
        for (name, svg) in self.plots() {
            std::fs::write(dir.join(name), svg)?;
        }
        Ok(())
    }
}
