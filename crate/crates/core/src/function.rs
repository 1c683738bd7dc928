//! Functions with a declared support box, the common input of the quadrature-backed
//! operations (coefficients, semigroups, norms).

use crate::error::Result;
use crate::hermite::phi_unchecked;
use crate::multiindex::MultiIndex;
use crate::poly::{Ball, CompiledPoly, SupportedPoly};
use crate::quadrature::BoxRegion;

pub trait SupportedFunction: Sync {
    fn dim(&self) -> usize;

    /// Box outside of which the function vanishes (or is negligible).
    fn support(&self) -> BoxRegion;

    fn eval(&self, x: &[f64]) -> f64;

    /// Polynomial smoothness degree entering the node-count rule.
    fn smoothness(&self) -> usize {
        0
    }

    /// Length over which the function changes appreciably.
    fn feature_scale(&self) -> f64 {
        self.support().half_widths.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// Ball outside of which the function vanishes, when it is of the form
    /// `poly · (1 − |u|²)^s`; lets integrals use a ball-fitted rule.
    fn ball(&self) -> Option<Ball> {
        None
    }
}

/// A [`SupportedPoly`] with its fast evaluator.
pub struct BumpFunction {
    poly: SupportedPoly,
    compiled: CompiledPoly,
}

impl BumpFunction {
    pub fn new(poly: SupportedPoly) -> Self {
        let compiled = poly.compile();
        BumpFunction { poly, compiled }
    }

    pub fn poly(&self) -> &SupportedPoly {
        &self.poly
    }
}

impl From<SupportedPoly> for BumpFunction {
    fn from(poly: SupportedPoly) -> Self {
        BumpFunction::new(poly)
    }
}

impl SupportedFunction for BumpFunction {
    fn dim(&self) -> usize {
        self.poly.dim()
    }

    fn support(&self) -> BoxRegion {
        self.poly.ball.bounding_box()
    }

    fn eval(&self, x: &[f64]) -> f64 {
        self.compiled.eval(x)
    }

    fn smoothness(&self) -> usize {
        self.poly.terms().map(|(s, _)| s).max().unwrap_or(0) as usize
    }

    fn feature_scale(&self) -> f64 {
        self.poly.ball.radius
    }

    fn ball(&self) -> Option<Ball> {
        Some(self.poly.ball.clone())
    }
}

/// `Φ_μ` restricted to a box.
pub struct HermiteFunction {
    pub mu: MultiIndex,
    pub region: BoxRegion,
}

impl HermiteFunction {
    /// `Φ_μ` on the cube `[−R, R]ⁿ` with `R = √(2|μ|+n) + 9`, beyond which `|Φ_μ| < 1e−17`.
    pub fn truncated(mu: MultiIndex) -> Self {
        let half = (mu.eigenvalue() as f64).sqrt() + 9.0;
        let n = mu.dim();
        HermiteFunction { mu, region: BoxRegion { center: vec![0.0; n], half_widths: vec![half; n] } }
    }
}

impl SupportedFunction for HermiteFunction {
    fn dim(&self) -> usize {
        self.mu.dim()
    }

    fn support(&self) -> BoxRegion {
        self.region.clone()
    }

    fn eval(&self, x: &[f64]) -> f64 {
        if !self.region.contains(x) {
            return 0.0;
        }
        phi_unchecked(self.mu.entries(), x)
    }

    fn smoothness(&self) -> usize {
        8
    }

    fn feature_scale(&self) -> f64 {
        // a quarter of the shortest local wavelength 2π/√λ
        std::f64::consts::FRAC_PI_2 / (self.mu.eigenvalue() as f64).sqrt()
    }
}

/// Closure-backed function with an explicit support box.
pub struct FnFunction<F> {
    region: BoxRegion,
    f: F,
    scale: f64,
    smoothness: usize,
}

impl<F: Fn(&[f64]) -> f64 + Sync> FnFunction<F> {
    pub fn new(region: BoxRegion, f: F) -> Self {
        let scale = region.half_widths.iter().cloned().fold(f64::INFINITY, f64::min);
        FnFunction { region, f, scale, smoothness: 0 }
    }

    pub fn with_feature_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn with_smoothness(mut self, q: usize) -> Self {
        self.smoothness = q;
        self
    }
}

impl<F: Fn(&[f64]) -> f64 + Sync> SupportedFunction for FnFunction<F> {
    fn dim(&self) -> usize {
        self.region.dim()
    }

    fn support(&self) -> BoxRegion {
        self.region.clone()
    }

    fn eval(&self, x: &[f64]) -> f64 {
        if !self.region.contains(x) {
            return 0.0;
        }
        (self.f)(x)
    }

    fn smoothness(&self) -> usize {
        self.smoothness
    }

    fn feature_scale(&self) -> f64 {
        self.scale
    }
}

/// `‖f‖₂²` by a composite tensor rule sized like the coefficient rule at level `max_level`.
pub fn l2_norm_squared(f: &dyn SupportedFunction, max_level: u64) -> Result<f64> {
    let rule = crate::spectral::basis_rule(f, max_level)?;
    rule.integrate(|x| f.eval(x).powi(2))
}
