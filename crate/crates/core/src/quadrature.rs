//! Gauss rules: Gauss–Hermite on the line and tensor Gauss–Legendre on boxes.
//!
//! Both rules start from the Golub–Welsch eigenproblem of the symmetric tridiagonal
//! Jacobi matrix, then polish each node with a few Newton steps on the three-term
//! recurrence and take the weights from the Christoffel formula. Eigenvector weights
//! lose relative accuracy for small weights; the Christoffel form does not.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermite::h0;
use crate::sum::pairwise_sum_by;

pub const SQRT_PI: f64 = 1.772_453_850_905_516;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Domain {
    /// `∫_ℝ f(t) e^{−t²} dt`.
    WholeLineGaussian,
    /// `∫_a^b f(t) dt`.
    Interval { a: f64, b: f64 },
}

#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub domain: Domain,
    /// Gauss–Hermite only: `wᵢ e^{tᵢ²}`, the weights to use against Hermite *functions*.
    scaled_weights: Option<Vec<f64>>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Weights for `∫ g(t) dt` when `g` already carries its own Gaussian decay.
    pub fn hermite_function_weights(&self) -> Option<&[f64]> {
        self.scaled_weights.as_deref()
    }

    /// Applies the rule to `f` (weighted by `e^{−t²}` for Gauss–Hermite).
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        pairwise_sum_by(self.len(), &|i| self.weights[i] * f(self.nodes[i]))
    }
}

/// Eigenvalues and squared first eigenvector components of a Jacobi matrix.
fn golub_welsch(off_diagonal: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let m = off_diagonal.len() + 1;
    let mut jac = DMatrix::<f64>::zeros(m, m);
    for (i, &b) in off_diagonal.iter().enumerate() {
        jac[(i, i + 1)] = b;
        jac[(i + 1, i)] = b;
    }
    let eig = SymmetricEigen::new(jac);
    let mut pairs: Vec<(f64, f64)> = (0..m)
        .map(|i| (eig.eigenvalues[i], eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// `h_m(t)` and `h_{m−1}(t)`.
fn hermite_pair(m: usize, t: f64) -> (f64, f64) {
    let mut prev = 0.0;
    let mut cur = h0(t);
    for k in 0..m {
        let kp1 = (k + 1) as f64;
        let next = t * (2.0 / kp1).sqrt() * cur - (k as f64 / kp1).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// `m`-point Gauss–Hermite rule for the weight `e^{−t²}`.
pub fn gauss_hermite(m: usize) -> Result<QuadratureRule> {
    if !(1..=512).contains(&m) {
        return Err(Error::config(format!("Gauss-Hermite node count {m} outside 1..=512")));
    }
    let off: Vec<f64> = (1..m).map(|k| (k as f64 / 2.0).sqrt()).collect();
    let (mut nodes, _) = golub_welsch(&off);
    let mut scaled = Vec::with_capacity(m);
    for t in nodes.iter_mut() {
        // h_m' = √(2m) h_{m−1} − t h_m
        for _ in 0..3 {
            let (hm, hm1) = hermite_pair(m, *t);
            let d = (2.0 * m as f64).sqrt() * hm1 - *t * hm;
            if d == 0.0 {
                break;
            }
            *t -= hm / d;
        }
        let (_, hm1) = hermite_pair(m, *t);
        scaled.push(1.0 / (m as f64 * hm1 * hm1));
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
    }
    let weights = nodes.iter().zip(&scaled).map(|(t, s)| s * (-t * t).exp()).collect();
    Ok(QuadratureRule { nodes, weights, domain: Domain::WholeLineGaussian, scaled_weights: Some(scaled) })
}

/// Eigenvector-based Gauss–Hermite weights `√π v₀²`, kept as an independent route for tests.
pub fn gauss_hermite_eigen_weights(m: usize) -> Vec<f64> {
    let off: Vec<f64> = (1..m).map(|k| (k as f64 / 2.0).sqrt()).collect();
    golub_welsch(&off).1.into_iter().map(|v| SQRT_PI * v).collect()
}

/// `P_m(t)` and `P_m'(t)` (Legendre).
fn legendre_with_derivative(m: usize, t: f64) -> (f64, f64) {
    let mut prev = 1.0;
    let mut cur = t;
    if m == 0 {
        return (1.0, 0.0);
    }
    for k in 1..m {
        let k = k as f64;
        let next = ((2.0 * k + 1.0) * t * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    let deriv = m as f64 * (t * cur - prev) / (t * t - 1.0);
    (cur, deriv)
}

fn compute_gauss_legendre(m: usize) -> QuadratureRule {
    let off: Vec<f64> = (1..m).map(|k| k as f64 / ((4 * k * k - 1) as f64).sqrt()).collect();
    let (mut nodes, _) = golub_welsch(&off);
    let mut weights = Vec::with_capacity(m);
    for t in nodes.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = legendre_with_derivative(m, *t);
            *t -= p / dp;
        }
        let (_, dp) = legendre_with_derivative(m, *t);
        weights.push(2.0 / ((1.0 - *t * *t) * dp * dp));
    }
    // exact symmetry
    for i in 0..m / 2 {
        let x = 0.5 * (nodes[m - 1 - i] - nodes[i]);
        let w = 0.5 * (weights[i] + weights[m - 1 - i]);
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
    }
    QuadratureRule { nodes, weights, domain: Domain::Interval { a: -1.0, b: 1.0 }, scaled_weights: None }
}

/// `m`-point Gauss–Legendre rule on `[−1, 1]`, cached per `m`.
pub fn gauss_legendre(m: usize) -> Result<Arc<QuadratureRule>> {
    if !(1..=1024).contains(&m) {
        return Err(Error::config(format!("Gauss-Legendre node count {m} outside 1..=1024")));
    }
    static CACHE: OnceLock<Mutex<BTreeMap<usize, Arc<QuadratureRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(BTreeMap::new()));
    if let Some(rule) = cache.lock().unwrap().get(&m) {
        return Ok(rule.clone());
    }
    let rule = Arc::new(compute_gauss_legendre(m));
    cache.lock().unwrap().insert(m, rule.clone());
    Ok(rule)
}

/// Axis-aligned box `center ± half_widths`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxRegion {
    pub center: Vec<f64>,
    pub half_widths: Vec<f64>,
}

impl BoxRegion {
    pub fn new(center: Vec<f64>, half_widths: Vec<f64>) -> Result<Self> {
        if center.len() != half_widths.len() {
            return Err(Error::DimensionMismatch { expected: center.len(), got: half_widths.len() });
        }
        if half_widths.iter().any(|&h| !(h > 0.0)) {
            return Err(Error::config("box half-widths must be positive"));
        }
        Ok(BoxRegion { center, half_widths })
    }

    pub fn cube(center: Vec<f64>, half_width: f64) -> Result<Self> {
        let n = center.len();
        Self::new(center, vec![half_width; n])
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn lo(&self, i: usize) -> f64 {
        self.center[i] - self.half_widths[i]
    }

    pub fn hi(&self, i: usize) -> f64 {
        self.center[i] + self.half_widths[i]
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter().enumerate().all(|(i, &v)| v >= self.lo(i) && v <= self.hi(i))
    }
}

/// Composite Gauss–Legendre rule on one axis: a Gauss rule of fixed order on each panel.
#[derive(Clone, Debug, PartialEq)]
pub struct AxisRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl AxisRule {
    /// Gauss–Legendre with `m` nodes on each panel `[breaks[i], breaks[i+1]]`.
    pub fn composite(breaks: &[f64], m: usize) -> Result<Self> {
        let rule = gauss_legendre(m)?;
        let mut nodes = Vec::with_capacity(m * breaks.len().saturating_sub(1));
        let mut weights = Vec::with_capacity(nodes.capacity());
        for w in breaks.windows(2) {
            let (a, b) = (w[0], w[1]);
            if !(b > a) {
                continue;
            }
            let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
            for (t, wt) in rule.nodes.iter().zip(&rule.weights) {
                nodes.push(mid + half * t);
                weights.push(half * wt);
            }
        }
        Ok(AxisRule { nodes, weights })
    }

    /// `panels` equal panels of `m` nodes on `[a, b]`.
    pub fn uniform(a: f64, b: f64, panels: usize, m: usize) -> Result<Self> {
        let panels = panels.max(1);
        let breaks: Vec<f64> = (0..=panels).map(|i| a + (b - a) * i as f64 / panels as f64).collect();
        Self::composite(&breaks, m)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Tensor product of per-axis rules. Nodes are visited row-major (last axis fastest).
///
/// With a [`BallWarp`] the axes are angle rules on `[−π/2, π/2]` and node `(θ₁, …, θₙ)` maps to
/// `x_d = c_d + ρ_d sin θ_d` with `ρ₁ = r`, `ρ_{d+1} = ρ_d cos θ_d`: an iterated rule over the
/// chords of a ball. A function of the form `poly · (1 − |u|²)^s` becomes analytic in the
/// angles, so the ball boundary costs no accuracy.
#[derive(Clone, Debug)]
pub struct TensorRule {
    pub axes: Vec<AxisRule>,
    pub warp: Option<BallWarp>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BallWarp {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl TensorRule {
    pub fn new(axes: Vec<AxisRule>) -> Self {
        TensorRule { axes, warp: None }
    }

    /// Iterated chord rule on the ball `B(center, radius)`; `axes` live on `[−π/2, π/2]`.
    pub fn on_ball(center: Vec<f64>, radius: f64, axes: Vec<AxisRule>) -> Result<Self> {
        if center.len() != axes.len() {
            return Err(Error::DimensionMismatch { expected: center.len(), got: axes.len() });
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::config(format!("ball radius must be positive, got {radius}")));
        }
        if center.len() > 8 {
            return Err(Error::config("ball rules support dimension <= 8"));
        }
        Ok(TensorRule { axes, warp: Some(BallWarp { center, radius }) })
    }

    /// Single-panel `m`-point angle rule on every axis of a ball.
    pub fn on_ball_nodes(center: Vec<f64>, radius: f64, m: usize) -> Result<Self> {
        let half = std::f64::consts::FRAC_PI_2;
        let axes = (0..center.len()).map(|_| AxisRule::uniform(-half, half, 1, m)).collect::<Result<_>>()?;
        Self::on_ball(center, radius, axes)
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(AxisRule::len).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(AxisRule::len).collect()
    }

    /// Single-panel `m`-point rule on every axis of `region`.
    pub fn on_box(region: &BoxRegion, m: usize) -> Result<Self> {
        Self::on_box_panels(region, m, 1)
    }

    pub fn on_box_panels(region: &BoxRegion, m: usize, panels: usize) -> Result<Self> {
        let axes = (0..region.dim())
            .map(|i| AxisRule::uniform(region.lo(i), region.hi(i), panels, m))
            .collect::<Result<_>>()?;
        Ok(TensorRule::new(axes))
    }

    /// Node coordinates and weight of flat node `flat`.
    pub fn node(&self, flat: usize, x: &mut [f64]) -> f64 {
        let mut rem = flat;
        let mut w = 1.0;
        match &self.warp {
            None => {
                for (i, axis) in self.axes.iter().enumerate().rev() {
                    let j = rem % axis.len();
                    rem /= axis.len();
                    x[i] = axis.nodes[j];
                    w *= axis.weights[j];
                }
            }
            Some(warp) => {
                let mut idx = [0usize; 8];
                for (i, axis) in self.axes.iter().enumerate().rev() {
                    idx[i] = rem % axis.len();
                    rem /= axis.len();
                }
                let mut rho = warp.radius;
                for (i, axis) in self.axes.iter().enumerate() {
                    let (s, c) = axis.nodes[idx[i]].sin_cos();
                    x[i] = warp.center[i] + rho * s;
                    w *= rho * c * axis.weights[idx[i]];
                    rho *= c;
                }
            }
        }
        w
    }

    /// Coordinate on axis `d` of any node whose indices on axes `0..=d` flatten to `prefix`.
    pub fn coordinate(&self, d: usize, prefix: usize) -> f64 {
        match &self.warp {
            None => self.axes[d].nodes[prefix % self.axes[d].len()],
            Some(warp) => {
                let mut idx = [0usize; 8];
                let mut rem = prefix;
                for i in (0..=d).rev() {
                    idx[i] = rem % self.axes[i].len();
                    rem /= self.axes[i].len();
                }
                let mut rho = warp.radius;
                for i in 0..d {
                    rho *= self.axes[i].nodes[idx[i]].cos();
                }
                warp.center[d] + rho * self.axes[d].nodes[idx[d]].sin()
            }
        }
    }

    /// Whether the axis-`d` coordinate depends on the indices of earlier axes.
    pub fn is_warped(&self) -> bool {
        self.warp.is_some()
    }

    /// `Σ wᵢ f(xᵢ)` with pairwise reduction; fails on the first non-finite `f`.
    pub fn integrate<F: Fn(&[f64]) -> f64>(&self, f: F) -> Result<f64> {
        let values = self.weighted_values(f)?;
        Ok(crate::sum::pairwise_sum(&values))
    }

    /// `wᵢ f(xᵢ)` at every node in rule order.
    pub fn weighted_values<F: Fn(&[f64]) -> f64>(&self, f: F) -> Result<Vec<f64>> {
        let n = self.dim();
        let mut x = vec![0.0; n];
        let mut out = Vec::with_capacity(self.len());
        for flat in 0..self.len() {
            let w = self.node(flat, &mut x);
            let v = f(&x);
            if !v.is_finite() {
                return Err(Error::NonFinite { value: v, location: x.clone() });
            }
            out.push(w * v);
        }
        Ok(out)
    }
}

/// Tensor Gauss–Legendre approximation of `∫_box f` with `m` nodes per axis.
pub fn integrate_box<F: Fn(&[f64]) -> f64>(f: F, region: &BoxRegion, m: usize) -> Result<f64> {
    if !(2..=256).contains(&m) {
        return Err(Error::config(format!("box rule node count {m} outside 2..=256")));
    }
    if region.dim() > 3 {
        return Err(Error::config("box integration supports dimension <= 3"));
    }
    TensorRule::on_box(region, m)?.integrate(f)
}

/// Per-axis node count resolving `Φ_μ` up to level `max_level` on a box of half-width
/// `half_width`, for an integrand of smoothness degree `q`.
pub fn basis_node_count(half_width: f64, max_level: u64, n: usize, q: usize) -> usize {
    let wave = (2.0 * max_level as f64 + n as f64).sqrt();
    let m = (4.0 * half_width * wave).ceil() as usize + q + 4;
    m.max(32)
}

/// Largest single-panel order used by [`basis_axis_rule`]; beyond it the axis is split.
pub const MAX_PANEL_NODES: usize = 128;

/// Composite rule carrying `total` nodes on `[a, b]` in panels of at most [`MAX_PANEL_NODES`].
pub fn basis_axis_rule(a: f64, b: f64, total: usize) -> Result<AxisRule> {
    let panels = total.div_ceil(MAX_PANEL_NODES);
    let per = total.div_ceil(panels);
    AxisRule::uniform(a, b, panels, per)
}
