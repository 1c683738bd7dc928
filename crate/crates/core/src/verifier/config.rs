use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::atoms::{check_atom_order, MFunction};
use crate::error::{Error, Result};
use crate::spectral::TruncationPolicy;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Experiment {
    #[serde(rename = "atom-sweep")]
    AtomSweep,
    #[serde(rename = "kanjin-1d")]
    Kanjin1d,
    #[serde(rename = "inclusion-demo")]
    InclusionDemo,
    #[serde(rename = "exponent-probe")]
    ExponentProbe,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::AtomSweep => "atom-sweep",
            Experiment::Kanjin1d => "kanjin-1d",
            Experiment::InclusionDemo => "inclusion-demo",
            Experiment::ExponentProbe => "exponent-probe",
        }
    }
}

/// Quadrature and maximal-function settings shared by the experiments.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureOverrides {
    /// Gauss–Legendre nodes per panel for the `L^p` integrals of maximal functions.
    pub proxy_panel_nodes: usize,
    /// Half-width of the proxy integration box around the atom center.
    pub proxy_half_width: f64,
    /// Log-spaced `t` values per maximal function.
    pub t_count: usize,
    /// Golden-section steps after the grid scan.
    pub refinements: usize,
}

impl Default for QuadratureOverrides {
    fn default() -> Self {
        QuadratureOverrides { proxy_panel_nodes: 8, proxy_half_width: 8.0, t_count: 200, refinements: 20 }
    }
}

/// Bump used by the inclusion demo.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InclusionSettings {
    pub center: f64,
    pub radius: f64,
    /// Integration half-widths `R` of the growth tables.
    pub box_radii: Vec<f64>,
    /// Midpoint of the boxes `[c − R, c + R]`; the bump center when absent.
    pub box_center: Option<f64>,
}

impl Default for InclusionSettings {
    fn default() -> Self {
        InclusionSettings { center: 5.0, radius: 0.25, box_radii: vec![4.0, 8.0, 16.0, 32.0, 64.0], box_center: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    #[serde(default = "one")]
    pub n: usize,
    #[serde(default = "one_f")]
    pub p: f64,
    #[serde(rename = "M", default = "one_u")]
    pub m: u32,
    #[serde(default = "default_radii")]
    pub radii: Vec<f64>,
    /// Atom centers; each has `n` coordinates.
    #[serde(default = "default_centers")]
    pub centers: Vec<Vec<f64>>,
    /// Bump degree; `2M + 2` when absent.
    #[serde(default)]
    pub q: Option<u32>,
    #[serde(default)]
    pub truncation: Option<TruncationPolicy>,
    #[serde(default)]
    pub quadrature: QuadratureOverrides,
    #[serde(default)]
    pub m_function: MFunction,
    /// Exponent offset `δ` of the probe experiment.
    #[serde(default = "default_delta")]
    pub probe_delta: f64,
    /// Compute the maximal-function proxy and ratios.
    #[serde(default = "yes")]
    pub proxy: bool,
    #[serde(default)]
    pub inclusion: InclusionSettings,
    /// Seeds the validators' random sample points and the rows picked for naive rechecks.
    #[serde(default)]
    pub seed: u64,
}

fn one() -> usize {
    1
}
fn one_f() -> f64 {
    1.0
}
fn one_u() -> u32 {
    1
}
fn yes() -> bool {
    true
}
fn default_delta() -> f64 {
    0.25
}
fn default_radii() -> Vec<f64> {
    (0..7).map(|k| 2f64.powi(-k)).collect()
}
fn default_centers() -> Vec<Vec<f64>> {
    vec![vec![0.0], vec![2.0], vec![5.0]]
}

impl ExperimentConfig {
    /// Defaults for `experiment`: n = 1, p = 1, M = 1, radii `2^0..2^−6`, centers {0, 2, 5}.
    pub fn new(experiment: Experiment) -> Self {
        ExperimentConfig {
            experiment,
            n: 1,
            p: 1.0,
            m: 1,
            radii: default_radii(),
            centers: default_centers(),
            q: None,
            truncation: None,
            quadrature: QuadratureOverrides::default(),
            m_function: MFunction::default(),
            probe_delta: default_delta(),
            proxy: true,
            inclusion: InclusionSettings::default(),
            seed: 0,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| Error::Config(format!("bad config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn truncation_policy(&self) -> TruncationPolicy {
        self.truncation.clone().unwrap_or_else(|| TruncationPolicy::for_dimension(self.n))
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=3).contains(&self.n) {
            return Err(Error::config(format!("n must be 1, 2 or 3, got {}", self.n)));
        }
        if !(self.p > 0.0 && self.p <= 1.0) {
            return Err(Error::config(format!("p must lie in (0, 1], got {}", self.p)));
        }
        if self.radii.is_empty() || self.radii.iter().any(|&r| !(r > 0.0 && r.is_finite())) {
            return Err(Error::config("radii must be a non-empty list of positive numbers"));
        }
        if self.centers.is_empty() {
            return Err(Error::config("centers must be non-empty"));
        }
        for c in &self.centers {
            if c.len() != self.n {
                return Err(Error::DimensionMismatch { expected: self.n, got: c.len() });
            }
        }
        let qd = &self.quadrature;
        if qd.proxy_panel_nodes < 2 || qd.t_count < 16 || !(qd.proxy_half_width > 0.0) {
            return Err(Error::config("quadrature overrides: need proxy_panel_nodes >= 2, t_count >= 16, proxy_half_width > 0"));
        }
        if let Some(t) = &self.truncation {
            if !(t.tail_tolerance > 0.0 && t.tail_tolerance < 1.0) || t.growth_blocks < 1 {
                return Err(Error::config("truncation: need 0 < tail_tolerance < 1 and growth_blocks >= 1"));
            }
        }
        match self.experiment {
            Experiment::AtomSweep | Experiment::ExponentProbe => {
                check_atom_order(self.n, self.p, self.m)?;
                if let Some(q) = self.q {
                    if q < 2 * self.m + 2 {
                        return Err(Error::config(format!("q >= 2M + 2 violated: q = {q}, M = {}", self.m)));
                    }
                }
                if self.experiment == Experiment::ExponentProbe && !(self.probe_delta >= 0.0) {
                    return Err(Error::config("probe_delta must be non-negative"));
                }
            }
            Experiment::Kanjin1d => {
                if self.n != 1 || self.p != 1.0 {
                    return Err(Error::config("kanjin-1d needs n = 1 and p = 1"));
                }
            }
            Experiment::InclusionDemo => {
                let inc = &self.inclusion;
                if self.n != 1 {
                    return Err(Error::config("inclusion-demo needs n = 1"));
                }
                if !(inc.radius > 0.0) || inc.box_radii.len() < 2 || inc.box_radii.windows(2).any(|w| !(w[0] > 0.0 && w[0] < w[1])) {
                    return Err(Error::config("inclusion: need radius > 0 and at least two increasing box radii"));
                }
            }
        }
        Ok(())
    }

    /// Short hash of the canonical JSON form; identifies the run's settings in reports.
    pub fn fingerprint(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(json.as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = ExperimentConfig::from_json(r#"{"experiment": "atom-sweep"}"#).unwrap();
        assert_eq!(cfg, ExperimentConfig::new(Experiment::AtomSweep));
        assert_eq!(cfg.radii.len(), 7);
    }

    #[test]
    fn atom_order_is_checked_at_load() {
        let err = ExperimentConfig::from_json(r#"{"experiment": "atom-sweep", "n": 2, "p": 0.5, "M": 1, "centers": [[0, 0]]}"#)
            .unwrap_err();
        assert!(err.is_config());
        assert!(err.to_string().contains("M > n(2-p)/(4p)"), "{err}");
    }

    #[test]
    fn bad_inputs_are_config_errors() {
        for text in [
            r#"{"experiment": "nope"}"#,
            r#"{"experiment": "atom-sweep", "p": 1.5}"#,
            r#"{"experiment": "atom-sweep", "radii": [0.5, -1]}"#,
            r#"{"experiment": "atom-sweep", "centers": [[0, 1]]}"#,
            r#"{"experiment": "kanjin-1d", "p": 0.5, "M": 2}"#,
            r#"{"experiment": "atom-sweep", "q": 3}"#,
            r#"{"experiment": "atom-sweep", "bogus": 1}"#,
        ] {
            assert!(ExperimentConfig::from_json(text).unwrap_err().is_config(), "{text}");
        }
    }

    #[test]
    fn fingerprint_tracks_settings() {
        let a = ExperimentConfig::new(Experiment::AtomSweep);
        let mut b = a.clone();
        assert_eq!(a.fingerprint(), b.fingerprint());
        b.quadrature.t_count = 100;
        assert_ne!(a.fingerprint(), b.fingerprint());
    }
}
