//! Heat semigroups `e^{−tL}` (Mehler kernel) and `e^{tΔ}` (Gaussian kernel), their maximal
//! functions, `L^p` quasi-norm proxies and the eigenfunction identity for
//! `(I − e^{−r²L})^M`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::SupportedFunction;
use crate::hermite::phi_unchecked;
use crate::multiindex::MultiIndex;
use crate::quadrature::{AxisRule, BoxRegion, TensorRule};
use crate::sum::pairwise_sum;

const LN_2PI: f64 = 1.837_877_066_409_345_5;
const LN_4PI: f64 = 2.531_024_246_969_290_7;

/// Half-width of the integration window, in kernel standard deviations.
const WINDOW_SIGMAS: f64 = 9.0;
/// Gauss–Legendre nodes per panel in [`semigroup_apply`].
const PANEL_NODES: usize = 16;
const MAX_PANELS_PER_AXIS: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HeatKind {
    /// `e^{−tL}`, `L = −Δ + |x|²`.
    Hermite,
    /// `e^{tΔ}`.
    Laplace,
}

fn check_t(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::config(format!("heat time must be positive, got {t}")));
    }
    Ok(())
}

/// `ln sinh 2t`, exact for tiny and huge `t`.
fn ln_sinh_2t(t: f64) -> f64 {
    2.0 * t + (-(-4.0 * t).exp_m1()).ln() - std::f64::consts::LN_2
}

fn log_mehler(t: f64, x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let th = t.tanh();
    let mut plus = 0.0;
    let mut minus = 0.0;
    for (a, b) in x.iter().zip(y) {
        plus += (a + b) * (a + b);
        minus += (a - b) * (a - b);
    }
    -0.5 * n * (LN_2PI + ln_sinh_2t(t)) - 0.25 * (plus * th + minus / th)
}

fn log_gauss(t: f64, x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let d2: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
    -0.5 * n * (LN_4PI + t.ln()) - d2 / (4.0 * t)
}

/// `K_t(x, y) = (2π sinh 2t)^{−n/2} exp(−¼(|x+y|² tanh t + |x−y|² coth t))`.
pub fn mehler_kernel(t: f64, x: &[f64], y: &[f64]) -> Result<f64> {
    check_t(t)?;
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), got: y.len() });
    }
    Ok(log_mehler(t, x, y).exp())
}

/// `(4πt)^{−n/2} e^{−|x−y|²/4t}`.
pub fn heat_kernel(t: f64, x: &[f64], y: &[f64]) -> Result<f64> {
    check_t(t)?;
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), got: y.len() });
    }
    Ok(log_gauss(t, x, y).exp())
}

impl HeatKind {
    fn log_kernel(self, t: f64, x: &[f64], y: &[f64]) -> f64 {
        match self {
            HeatKind::Hermite => log_mehler(t, x, y),
            HeatKind::Laplace => log_gauss(t, x, y),
        }
    }

    /// Per-coordinate standard deviation of the kernel in `y`, and the map `x ↦` its center.
    fn spread(self, t: f64) -> (f64, f64) {
        match self {
            // the y-quadratic form is ½ coth(2t)|y|² − ..., centered at x / cosh 2t
            HeatKind::Hermite => ((2.0 * t).tanh().sqrt(), 1.0 / (2.0 * t).cosh()),
            HeatKind::Laplace => ((2.0 * t).sqrt(), 1.0),
        }
    }
}

/// Composite rule on `support ∩ window(x, t)`; `None` when the two do not meet.
///
/// Interior panel breaks sit on the lattice `width·ℤ`, independent of `x`, so that nearby
/// points share nodes (see [`lip_eigen_check`]).
fn window_rule(f: &dyn SupportedFunction, t: f64, x: &[f64], kind: HeatKind) -> Result<Option<TensorRule>> {
    let (sigma, shrink) = kind.spread(t);
    let half = WINDOW_SIGMAS * sigma;
    let support = f.support();
    let width = sigma.min(0.5 * f.feature_scale()).max(2.0 * half / MAX_PANELS_PER_AXIS as f64);
    let mut axes = Vec::with_capacity(x.len());
    for (i, &xi) in x.iter().enumerate() {
        let c = xi * shrink;
        let lo = support.lo(i).max(c - half);
        let hi = support.hi(i).min(c + half);
        if lo >= hi {
            return Ok(None);
        }
        let mut breaks = vec![lo];
        let mut k = (lo / width).floor() + 1.0;
        while k * width < hi {
            // skip slivers next to the ends
            if k * width - lo > 1e-3 * width && hi - k * width > 1e-3 * width {
                breaks.push(k * width);
            }
            k += 1.0;
        }
        breaks.push(hi);
        axes.push(AxisRule::composite(&breaks, PANEL_NODES)?);
    }
    Ok(Some(TensorRule::new(axes)))
}

/// `(e^{−tL} f)(x)` or `(e^{tΔ} f)(x)` by quadrature of kernel × f over the support.
pub fn semigroup_apply(f: &dyn SupportedFunction, t: f64, x: &[f64], kind: HeatKind) -> Result<f64> {
    check_t(t)?;
    if x.len() != f.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), got: x.len() });
    }
    let Some(rule) = window_rule(f, t, x, kind)? else { return Ok(0.0) };
    rule.integrate(|y| {
        let v = f.eval(y);
        if v == 0.0 {
            0.0
        } else {
            v * kind.log_kernel(t, x, y).exp()
        }
    })
}

/// `e^{−tL} f` or `e^{tΔ} f` as a function in its own right, for composing semigroups.
pub struct HeatImage<'a> {
    pub f: &'a dyn SupportedFunction,
    pub t: f64,
    pub kind: HeatKind,
}

impl SupportedFunction for HeatImage<'_> {
    fn dim(&self) -> usize {
        self.f.dim()
    }

    fn support(&self) -> BoxRegion {
        let mut b = self.f.support();
        let (sigma, _) = self.kind.spread(self.t);
        for h in &mut b.half_widths {
            *h += WINDOW_SIGMAS * sigma;
        }
        b
    }

    fn eval(&self, x: &[f64]) -> f64 {
        semigroup_apply(self.f, self.t, x, self.kind).unwrap_or(f64::NAN)
    }

    fn smoothness(&self) -> usize {
        self.f.smoothness()
    }

    fn feature_scale(&self) -> f64 {
        self.f.feature_scale()
    }
}

/// Time grid and refinement for a maximal function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MaximalSpec {
    pub kind: HeatKind,
    pub t_min: f64,
    pub t_max: f64,
    pub count: usize,
    pub refinements: usize,
    /// Also count the `t → 0+` limit `|f(x)|`, valid at continuity points of `f`.
    pub include_limit: bool,
}

impl MaximalSpec {
    pub fn hermite() -> Self {
        MaximalSpec { kind: HeatKind::Hermite, t_min: 1e-6, t_max: 10.0, count: 200, refinements: 20, include_limit: true }
    }

    /// Laplace grid for evaluation points within distance `radius` of the origin.
    pub fn laplace(radius: f64) -> Self {
        MaximalSpec {
            kind: HeatKind::Laplace,
            t_min: 1e-6,
            t_max: (4.0 * radius * radius).max(1.0),
            count: 200,
            refinements: 20,
            include_limit: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_min > 0.0 && self.t_min < self.t_max && self.t_max.is_finite()) {
            return Err(Error::config(format!("t bounds must satisfy 0 < t_min < t_max, got [{}, {}]", self.t_min, self.t_max)));
        }
        if self.count < 16 {
            return Err(Error::config(format!("t-grid needs at least 16 points, got {}", self.count)));
        }
        Ok(())
    }

    fn grid(&self) -> Vec<f64> {
        let (a, b) = (self.t_min.ln(), self.t_max.ln());
        (0..self.count).map(|i| (a + (b - a) * i as f64 / (self.count - 1) as f64).exp()).collect()
    }
}

/// `sup_t |S_t f(x)|` over the configured grid plus golden-section refinement around the best
/// grid point. A lower bound for the true supremum that never decreases under refinement.
pub fn maximal_fn(f: &dyn SupportedFunction, x: &[f64], spec: &MaximalSpec) -> Result<f64> {
    spec.validate()?;
    let grid = spec.grid();
    let mut values = Vec::with_capacity(grid.len());
    for &t in &grid {
        values.push(semigroup_apply(f, t, x, spec.kind)?.abs());
    }
    let (best_i, mut best) = values
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });

    // golden-section in log t on the bracket around the best grid point
    let lo = grid[best_i.saturating_sub(1)].ln();
    let hi = grid[(best_i + 1).min(grid.len() - 1)].ln();
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (lo, hi);
    let eval = |s: f64| semigroup_apply(f, s.exp(), x, spec.kind).map(f64::abs);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = eval(c)?;
    let mut fd = eval(d)?;
    for _ in 0..spec.refinements {
        best = best.max(fc).max(fd);
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = eval(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = eval(d)?;
        }
    }
    best = best.max(fc).max(fd);
    if spec.include_limit {
        best = best.max(f.eval(x).abs());
    }
    Ok(best)
}

/// `∫_rule |g|^p`, the `p`-th power of the `L^p` quasi-norm, with powers taken in log space.
pub fn lp_quasi_norm_rule<G: Fn(&[f64]) -> f64 + Sync>(g: G, p: f64, rule: &TensorRule) -> Result<f64> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::config(format!("p must lie in (0, 1], got {p}")));
    }
    let n = rule.dim();
    let values: Vec<f64> = (0..rule.len())
        .into_par_iter()
        .map(|i| {
            let mut x = vec![0.0; n];
            let w = rule.node(i, &mut x);
            let v = g(&x);
            if !v.is_finite() {
                return Err(Error::NonFinite { value: v, location: x });
            }
            Ok(if v == 0.0 { 0.0 } else { w * (p * v.abs().ln()).exp() })
        })
        .collect::<Result<_>>()?;
    Ok(pairwise_sum(&values))
}

/// `∫_box |g|^p` by an `m`-point tensor Gauss–Legendre rule.
pub fn lp_quasi_norm<G: Fn(&[f64]) -> f64 + Sync>(g: G, p: f64, region: &BoxRegion, m: usize) -> Result<f64> {
    lp_quasi_norm_rule(g, p, &TensorRule::on_box(region, m)?)
}

/// Panel breaks on `[lo, hi]` graded geometrically toward a feature at `center` of size `r`:
/// `center ± r·s` for `s ∈ {0, ¼, ½, ¾}` and `center ± r·2^k`, plus `extra` and the ends.
pub fn graded_breaks(center: f64, r: f64, lo: f64, hi: f64, extra: &[f64]) -> Vec<f64> {
    let mut pts = vec![lo, hi];
    for s in [0.0, 0.25, 0.5, 0.75] {
        pts.push(center - r * s);
        pts.push(center + r * s);
    }
    let mut step = r;
    while step < 2.0 * (hi - lo) {
        pts.push(center - step);
        pts.push(center + step);
        step *= 2.0;
    }
    pts.extend_from_slice(extra);
    pts.retain(|&x| x >= lo && x <= hi);
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + b.abs()));
    pts
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LipCheck {
    pub mu: Vec<u32>,
    pub r: f64,
    pub m: u32,
    /// `(1 − e^{−r²λ})^M`.
    pub factor: f64,
    /// Max `|numeric − closed form|` over the samples, relative to the closed form's sup there.
    pub residual: f64,
}

/// Applies `(I − e^{−r²L})^M` to `Φ_μ` by nested semigroup quadratures and compares with
/// `(1 − e^{−r²(2|μ|+n)})^M Φ_μ` at 50 points.
pub fn lip_eigen_check(mu: &MultiIndex, r: f64, m: u32) -> Result<LipCheck> {
    if !(r > 0.0) || m == 0 {
        return Err(Error::config(format!("need r > 0 and M ≥ 1, got r={r}, M={m}")));
    }
    let n = mu.dim();
    let lambda = mu.eigenvalue() as f64;
    let t = r * r;
    let factor = (-(-t * lambda).exp_m1()).powi(m as i32);

    // (I − T)^M = Σ_j (−1)^j C(M, j) T^j; powers[j] = T^j Φ_μ, each a quadrature of the last
    let mut powers: Vec<Arc<dyn SupportedFunction + Send>> = vec![Arc::new(crate::function::HermiteFunction::truncated(mu.clone()))];
    for _ in 0..m {
        let inner = powers.last().expect("non-empty").clone();
        powers.push(Arc::new(MemoImage { inner, t, cache: Mutex::new(HashMap::new()) }));
    }
    let samples = lip_samples(n, lambda);
    let mut numeric = Vec::with_capacity(samples.len());
    for x in &samples {
        let terms: Vec<f64> = (0..=m)
            .map(|j| {
                let sign = if j % 2 == 1 { -1.0 } else { 1.0 };
                sign * binom(m, j) * powers[j as usize].eval(x)
            })
            .collect();
        numeric.push(pairwise_sum(&terms));
    }
    let closed: Vec<f64> = samples.iter().map(|x| factor * phi_unchecked(mu.entries(), x)).collect();
    let scale = closed.iter().fold(0f64, |a, v| a.max(v.abs()));
    let residual = numeric.iter().zip(&closed).map(|(a, b)| (a - b).abs()).fold(0f64, f64::max) / scale;
    if !residual.is_finite() {
        return Err(Error::NonFinite { value: residual, location: vec![] });
    }
    Ok(LipCheck { mu: mu.entries().to_vec(), r, m, factor, residual })
}

/// `e^{−tL} f`, remembering values by exact argument: the outer quadratures of a nested
/// application revisit the same lattice-aligned nodes from many points.
struct MemoImage {
    inner: Arc<dyn SupportedFunction + Send>,
    t: f64,
    cache: Mutex<HashMap<Vec<u64>, f64>>,
}

impl MemoImage {
    fn image(&self) -> HeatImage<'_> {
        HeatImage { f: &*self.inner, t: self.t, kind: HeatKind::Hermite }
    }
}

impl SupportedFunction for MemoImage {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn support(&self) -> BoxRegion {
        self.image().support()
    }

    fn eval(&self, x: &[f64]) -> f64 {
        let key: Vec<u64> = x.iter().map(|v| v.to_bits()).collect();
        if let Some(&v) = self.cache.lock().expect("cache lock").get(&key) {
            return v;
        }
        // computed outside the lock: the inner image has its own cache
        let v = self.image().eval(x);
        self.cache.lock().expect("cache lock").insert(key, v);
        v
    }

    fn smoothness(&self) -> usize {
        self.inner.smoothness()
    }

    fn feature_scale(&self) -> f64 {
        self.inner.feature_scale()
    }
}

fn binom(m: u32, j: u32) -> f64 {
    crate::multiindex::binomial(m as u64, j as u64) as f64
}

/// 50 points over the bulk `|x_i| ≤ √λ + 2`: a line in 1-d, a fixed spiral otherwise.
fn lip_samples(n: usize, lambda: f64) -> Vec<Vec<f64>> {
    let a = lambda.sqrt() + 2.0;
    (0..50)
        .map(|i| {
            let s = -1.0 + 2.0 * (i as f64 + 0.5) / 50.0;
            (0..n).map(|d| a * if d == 0 { s } else { (s * (3.0 + 2.0 * d as f64)).sin() }).collect()
        })
        .collect()
}
