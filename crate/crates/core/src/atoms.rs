//! (p, L, M)-atoms built from polynomial bumps, classical p-atoms, and the auxiliary
//! function `m(x)` with its shells `B_k`.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::{BumpFunction, SupportedFunction};
use crate::poly::{Ball, SupportedPoly, TermDoc};
use crate::quadrature::{AxisRule, TensorRule};

/// Smallest admissible `M`: the integer part of `n(2−p)/(4p)` plus one.
pub fn min_atom_order(n: usize, p: f64) -> u32 {
    (n as f64 * (2.0 - p) / (4.0 * p)).floor() as u32 + 1
}

fn check_p(p: f64) -> Result<()> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::config(format!("p must lie in (0, 1], got {p}")));
    }
    Ok(())
}

/// Checks `M > n(2−p)/(4p)`.
pub fn check_atom_order(n: usize, p: f64, m: u32) -> Result<()> {
    check_p(p)?;
    let bound = n as f64 * (2.0 - p) / (4.0 * p);
    if !(m as f64 > bound) {
        return Err(Error::config(format!(
            "M > n(2-p)/(4p) violated: M = {m}, n(2-p)/(4p) = {bound} (n = {n}, p = {p})"
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlmAtomParams {
    pub p: f64,
    #[serde(rename = "M")]
    pub m: u32,
    pub center: Vec<f64>,
    pub radius: f64,
    /// Bump exponent; defaults to `2M + 2`.
    #[serde(default)]
    pub q: Option<u32>,
}

impl PlmAtomParams {
    pub fn new(p: f64, m: u32, center: Vec<f64>, radius: f64) -> Self {
        PlmAtomParams { p, m, center, radius, q: None }
    }

    pub fn with_q(mut self, q: u32) -> Self {
        self.q = Some(q);
        self
    }

    pub fn bump_degree(&self) -> u32 {
        self.q.unwrap_or(2 * self.m + 2)
    }
}

/// `a = L^M b` with `b = scale·(1 − |(x−x₀)/r|²)^q_+`.
#[derive(Clone, Debug)]
pub struct PlmAtom {
    pub p: f64,
    pub m: u32,
    pub q: u32,
    pub ball: Ball,
    pub scale: f64,
    pub b: SupportedPoly,
    pub a: SupportedPoly,
}

impl PlmAtom {
    pub fn dim(&self) -> usize {
        self.ball.dim()
    }

    /// Right-hand side of the size condition, `r^{2M} V(B)^{1/2 − 1/p}`.
    pub fn size_bound(&self) -> f64 {
        size_bound(&self.ball, self.m, self.p)
    }

    /// `‖(r²L)^k b‖₂` for `k = 0..=M`.
    pub fn scaled_norms(&self) -> Result<Vec<f64>> {
        scaled_norms(&self.b, self.m)
    }

    pub fn atom_function(&self) -> BumpFunction {
        BumpFunction::new(self.a.clone())
    }

    pub fn b_function(&self) -> BumpFunction {
        BumpFunction::new(self.b.clone())
    }

    /// Copy with `b` (and so `a`) multiplied by `factor`.
    pub fn rescaled(&self, factor: f64) -> PlmAtom {
        PlmAtom {
            scale: self.scale * factor,
            b: self.b.scaled(factor),
            a: self.a.scaled(factor),
            ..self.clone()
        }
    }

    pub fn to_doc(&self) -> AtomDoc {
        AtomDoc {
            p: self.p,
            m: self.m,
            q: self.q,
            center: self.ball.center.clone(),
            radius: self.ball.radius,
            scale: self.scale,
            terms: self.b.to_doc(),
        }
    }

    /// Rebuilds the atom from its document; `a` is recomputed from `b`.
    pub fn from_doc(doc: &AtomDoc) -> Result<PlmAtom> {
        check_p(doc.p)?;
        let ball = Ball::new(doc.center.clone(), doc.radius)?;
        let b = SupportedPoly::from_doc(ball.clone(), &doc.terms)?;
        let a = b.apply_l_times(doc.m)?;
        Ok(PlmAtom { p: doc.p, m: doc.m, q: doc.q, ball, scale: doc.scale, b, a })
    }
}

/// JSON document of an atom. `terms` describe `b`, including the scale.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomDoc {
    pub p: f64,
    #[serde(rename = "M")]
    pub m: u32,
    pub q: u32,
    pub center: Vec<f64>,
    pub radius: f64,
    pub scale: f64,
    pub terms: Vec<TermDoc>,
}

fn size_bound(ball: &Ball, m: u32, p: f64) -> f64 {
    ball.radius.powi(2 * m as i32) * ball.volume().powf(0.5 - 1.0 / p)
}

fn scaled_norms(b: &SupportedPoly, m: u32) -> Result<Vec<f64>> {
    let r2 = b.ball.radius * b.ball.radius;
    let mut out = Vec::with_capacity(m as usize + 1);
    let mut lk = b.clone();
    for k in 0..=m {
        if k > 0 {
            lk = lk.apply_l()?;
        }
        out.push(r2.powi(k as i32) * lk.l2_norm(lk.norm_nodes())?);
    }
    Ok(out)
}

/// Builds the extremal atom for the given parameters: the size condition holds with
/// equality at the worst `k`.
pub fn make_plm_atom(params: &PlmAtomParams) -> Result<PlmAtom> {
    let n = params.center.len();
    check_atom_order(n, params.p, params.m)?;
    let q = params.bump_degree();
    if q < 2 * params.m + 2 {
        return Err(Error::config(format!(
            "q >= 2M + 2 violated: q = {q}, M = {} (b must be C^(2M))",
            params.m
        )));
    }
    let ball = Ball::new(params.center.clone(), params.radius)?;
    let unit = SupportedPoly::bump(ball.clone(), q, 1.0);
    let norms = scaled_norms(&unit, params.m)?;
    let worst = norms.iter().cloned().fold(0.0, f64::max);
    let scale = size_bound(&ball, params.m, params.p) / worst;
    let b = unit.scaled(scale);
    let a = b.apply_l_times(params.m)?;
    Ok(PlmAtom { p: params.p, m: params.m, q, ball, scale, b, a })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub measured: f64,
    pub bound: f64,
    /// `bound − measured`; non-negative when the condition holds.
    pub margin: f64,
    pub pass: bool,
}

impl ConditionCheck {
    fn at_most(measured: f64, bound: f64, slack: f64) -> Self {
        ConditionCheck { measured, bound, margin: bound - measured, pass: measured <= bound + slack }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PlmValidation {
    /// Largest `|a − L^M b|` over interior samples, relative to `max |a|`.
    pub representation: ConditionCheck,
    /// Largest `|L^k b|` on the sphere `∂B` relative to its interior maximum, over `k ≤ M`.
    pub boundary: ConditionCheck,
    /// Largest `|L^k b|` sampled outside `B` (exactly zero by construction).
    pub outside_max: f64,
    /// Per `k`: `‖(r²L)^k b‖₂` against `r^{2M} V(B)^{1/2−1/p}`.
    pub size: Vec<ConditionCheck>,
    /// Largest size ratio `‖(r²L)^k b‖₂ / bound`.
    pub worst_size_ratio: f64,
    pub order_ok: bool,
    /// False when `q < 2M + 2`: `L^M b` then has no continuous extension by zero.
    pub smoothness_ok: bool,
    pub pass: bool,
}

const SIZE_REL_TOL: f64 = 1e-8;
const REPRESENTATION_TOL: f64 = 1e-12;

fn random_in_ball(rng: &mut ChaCha8Rng, ball: &Ball, radial: std::ops::Range<f64>) -> Vec<f64> {
    let n = ball.dim();
    loop {
        let dir: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let len = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
        if len < 1e-3 || len > 1.0 {
            continue;
        }
        let rho = rng.gen_range(radial.clone());
        return dir.iter().zip(&ball.center).map(|(d, c)| c + ball.radius * rho * d / len).collect();
    }
}

/// Checks the three atom conditions; failures are reported, not raised.
pub fn validate_plm_atom(atom: &PlmAtom, seed: u64) -> Result<PlmValidation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ball = &atom.ball;

    let recomputed = atom.b.apply_l_times(atom.m)?;
    let (a_c, r_c) = (atom.a.compile(), recomputed.compile());
    let (mut worst_diff, mut worst_val) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let x = random_in_ball(&mut rng, ball, 0.0..0.999);
        let (va, vr) = (a_c.eval(&x), r_c.eval(&x));
        worst_diff = worst_diff.max((va - vr).abs());
        worst_val = worst_val.max(va.abs());
    }
    let representation = ConditionCheck::at_most(worst_diff / worst_val.max(f64::MIN_POSITIVE), REPRESENTATION_TOL, 0.0);

    let mut boundary_rel = 0.0f64;
    let mut outside_max = 0.0f64;
    let mut lk = atom.b.clone();
    for k in 0..=atom.m {
        if k > 0 {
            lk = lk.apply_l()?;
        }
        let c = lk.compile();
        let mut interior = 0.0f64;
        for _ in 0..50 {
            interior = interior.max(c.eval(&random_in_ball(&mut rng, ball, 0.0..0.999)).abs());
        }
        let mut on_sphere = 0.0f64;
        for _ in 0..50 {
            // points on the sphere, nudged inward so that the evaluator does not cut them off
            on_sphere = on_sphere.max(c.eval(&random_in_ball(&mut rng, ball, 0.999_999_999..1.0)).abs());
            outside_max = outside_max.max(c.eval(&random_in_ball(&mut rng, ball, 1.000_001..3.0)).abs());
        }
        boundary_rel = boundary_rel.max(on_sphere / interior.max(f64::MIN_POSITIVE));
    }
    // values within 1e-9 of the sphere: a bump with s ≥ 1 is O(1e-9) there
    let boundary = ConditionCheck::at_most(boundary_rel, 1e-6, 0.0);

    let bound = atom.size_bound();
    let norms = atom.scaled_norms()?;
    let size: Vec<ConditionCheck> = norms
        .iter()
        .map(|&nk| ConditionCheck::at_most(nk / bound, 1.0, SIZE_REL_TOL))
        .collect();
    let worst_size_ratio = size.iter().map(|c| c.measured).fold(0.0, f64::max);

    let order_ok = check_atom_order(atom.dim(), atom.p, atom.m).is_ok();
    let smoothness_ok = atom.q >= 2 * atom.m + 2;
    let pass = representation.pass
        && boundary.pass
        && outside_max == 0.0
        && size.iter().all(|c| c.pass)
        && order_ok
        && smoothness_ok;
    Ok(PlmValidation { representation, boundary, outside_max, size, worst_size_ratio, order_ok, smoothness_ok, pass })
}

/// Which auxiliary function drives the shells.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MFunction {
    /// `Σ_{β ≤ (2,…,2)} |D^β |x|²|^{−(|β|+2)}` over the non-vanishing derivatives.
    #[default]
    Printed,
    /// `1 + |x|`.
    Alternative,
}

impl MFunction {
    /// Infimum over `ℝⁿ`, the default lower edge of `B₀`.
    pub fn infimum(self, n: usize) -> f64 {
        match self {
            MFunction::Printed => n as f64 / 16.0,
            MFunction::Alternative => 1.0,
        }
    }
}

/// `m(x)` as printed: `β = 0` gives `| |x|² |^{−2}`, `β = eᵢ` gives `|2xᵢ|^{−3}`,
/// `β = 2eᵢ` gives `2^{−4}`. Every other `D^β |x|²` vanishes identically and is skipped.
pub fn m_aux(x: &[f64]) -> f64 {
    let r2: f64 = x.iter().map(|v| v * v).sum();
    let mut total = 0.0;
    for term in std::iter::once(r2.abs().powi(-2))
        .chain(x.iter().map(|xi| (2.0 * xi).abs().powi(-3)))
        .chain(std::iter::repeat(2f64.powi(-4)).take(x.len()))
    {
        if !term.is_finite() {
            return f64::INFINITY;
        }
        total += term;
    }
    total
}

pub fn m_alt(x: &[f64]) -> f64 {
    1.0 + x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub fn m_value(kind: MFunction, x: &[f64]) -> f64 {
    match kind {
        MFunction::Printed => m_aux(x),
        MFunction::Alternative => m_alt(x),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shell {
    Index(u32),
    Unclassified,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShellConfig {
    pub m_function: MFunction,
    /// Lower edge `c` of `B₀`; `None` uses the infimum of the m-function.
    pub floor: Option<f64>,
}

impl Default for ShellConfig {
    fn default() -> Self {
        ShellConfig { m_function: MFunction::Printed, floor: None }
    }
}

impl ShellConfig {
    pub fn floor(&self, n: usize) -> f64 {
        self.floor.unwrap_or_else(|| self.m_function.infimum(n))
    }

    pub fn shell_of(&self, x: &[f64]) -> Shell {
        shell_index_of_value(m_value(self.m_function, x), self.floor(x.len()))
    }
}

/// Smallest `k` with `m` in `B_k` (`B₀ = [floor, 1]`, `B_k = [2^{(k−1)/2}, 2^{k/2}]`).
pub fn shell_index_of_value(m: f64, floor: f64) -> Shell {
    if !m.is_finite() || m < floor {
        return Shell::Unclassified;
    }
    if m <= 1.0 {
        return Shell::Index(0);
    }
    let mut k = ((2.0 * m.log2()).ceil() as i64).max(1);
    while k > 1 && m <= 2f64.powf((k - 1) as f64 / 2.0) {
        k -= 1;
    }
    while m > 2f64.powf(k as f64 / 2.0) {
        k += 1;
    }
    Shell::Index(k as u32)
}

pub fn shell_index(x: &[f64], config: &ShellConfig) -> Shell {
    config.shell_of(x)
}

/// Profile of a classical atom.
#[derive(Clone)]
pub enum Profile {
    Poly(SupportedPoly),
    /// Arbitrary function; expected to vanish outside the ball.
    Tabulated(Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>),
}

impl std::fmt::Debug for Profile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Profile::Poly(p) => f.debug_tuple("Poly").field(p).finish(),
            Profile::Tabulated(_) => f.write_str("Tabulated(..)"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ClassicalAtomDescriptor {
    pub ball: Ball,
    pub profile: Profile,
    pub p: f64,
    /// Moment order the atom claims to satisfy, if any.
    pub claimed_moment_order: Option<u32>,
}

impl ClassicalAtomDescriptor {
    fn evaluator(&self) -> Box<dyn Fn(&[f64]) -> f64 + Sync + '_> {
        match &self.profile {
            Profile::Poly(p) => {
                let c = p.compile();
                Box::new(move |x| c.eval(x))
            }
            Profile::Tabulated(f) => Box::new(move |x| f(x)),
        }
    }

    /// `n(1/p − 1)`, rounded down.
    pub fn required_moment_order(&self) -> u32 {
        let v = self.ball.dim() as f64 * (1.0 / self.p - 1.0);
        (v + 1e-12).floor() as u32
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MomentCheck {
    pub exponents: Vec<u32>,
    pub value: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassicalValidation {
    pub shell: Shell,
    /// (i): largest `|a|` at sample points outside the ball.
    pub support: ConditionCheck,
    /// (ii): `‖a‖_∞ ≤ |B|^{−1/p}`.
    pub sup_norm: ConditionCheck,
    /// (iii): `r ≤ 2^{1 − k/2}`; fails when the center is unclassified.
    pub radius: ConditionCheck,
    /// (iv) applies when `r ≤ 2^{−1−k/2}` (always, for an unclassified center).
    pub moments_required: bool,
    pub moment_order: u32,
    pub moments: Vec<MomentCheck>,
    pub moment_tolerance: f64,
    pub pass: bool,
}

fn multi_indices_up_to(n: usize, order: u32) -> Vec<Vec<u32>> {
    (0..=order as u64)
        .flat_map(|k| crate::multiindex::enumerate_level(n, k))
        .map(|m| m.entries().to_vec())
        .collect()
}

/// Checks conditions (i)–(iv) of a classical p-atom.
pub fn validate_classical_atom(desc: &ClassicalAtomDescriptor, shells: &ShellConfig, seed: u64) -> Result<ClassicalValidation> {
    check_p(desc.p)?;
    let ball = &desc.ball;
    let n = ball.dim();
    let f = desc.evaluator();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut outside = 0.0f64;
    for _ in 0..50 {
        outside = outside.max(f(&random_in_ball(&mut rng, ball, 1.000_001..3.0)).abs());
    }
    let support = ConditionCheck::at_most(outside, 0.0, 0.0);

    // tensor grid on the bounding box plus random interior points
    let per_axis: usize = match n {
        1 => 2001,
        2 => 201,
        _ => 41,
    };
    let mut sup = 0.0f64;
    let mut x = vec![0.0; n];
    for flat in 0..per_axis.pow(n as u32) {
        let mut rem = flat;
        for (i, xi) in x.iter_mut().enumerate() {
            *xi = ball.center[i] - ball.radius + 2.0 * ball.radius * (rem % per_axis) as f64 / (per_axis - 1) as f64;
            rem /= per_axis;
        }
        sup = sup.max(f(&x).abs());
    }
    for _ in 0..200 {
        sup = sup.max(f(&random_in_ball(&mut rng, ball, 0.0..1.0)).abs());
    }
    let volume = ball.volume();
    let sup_bound = volume.powf(-1.0 / desc.p);
    let sup_norm = ConditionCheck::at_most(sup, sup_bound, 1e-12 * sup_bound);

    let shell = shells.shell_of(&ball.center);
    let (radius, moments_required) = match shell {
        Shell::Index(k) => {
            let bound = 2f64.powf(1.0 - k as f64 / 2.0);
            let small = ball.radius <= 2f64.powf(-1.0 - k as f64 / 2.0);
            (ConditionCheck::at_most(ball.radius, bound, 0.0), small)
        }
        Shell::Unclassified => {
            (ConditionCheck { measured: ball.radius, bound: 0.0, margin: -ball.radius, pass: false }, true)
        }
    };

    let moment_order = desc.required_moment_order();
    let tolerance = 1e-9 * sup.max(f64::MIN_POSITIVE) * volume;
    let rule = match &desc.profile {
        Profile::Poly(p) if n == 1 => {
            TensorRule::on_box(&ball.bounding_box(), (p.expanded_degree() + moment_order as usize) / 2 + 8)?
        }
        Profile::Poly(p) => {
            TensorRule::on_ball_nodes(ball.center.clone(), ball.radius, p.expanded_degree() + moment_order as usize + 16)?
        }
        Profile::Tabulated(_) => TensorRule::new(
            (0..n)
                .map(|i| AxisRule::uniform(ball.center[i] - ball.radius, ball.center[i] + ball.radius, 16, 32))
                .collect::<Result<_>>()?,
        ),
    };
    let mut moments = Vec::new();
    for beta in multi_indices_up_to(n, moment_order) {
        let value = rule.integrate(|x| {
            let mono: f64 = beta
                .iter()
                .enumerate()
                .map(|(i, &d)| ((x[i] - ball.center[i]) / ball.radius).powi(d as i32))
                .product();
            mono * f(x)
        })?;
        moments.push(MomentCheck { exponents: beta, value, pass: value.abs() <= tolerance });
    }
    let moments_ok = !moments_required || moments.iter().all(|m| m.pass);
    let pass = support.pass && sup_norm.pass && radius.pass && moments_ok;
    Ok(ClassicalValidation {
        shell,
        support,
        sup_norm,
        radius,
        moments_required,
        moment_order,
        moments,
        moment_tolerance: tolerance,
        pass,
    })
}

/// Odd classical bump `ψ(u) = u(1 − u²)^q` on `B(x₀, r)`, scaled to `‖a‖_∞ = |B|^{−1/p}`.
pub fn odd_bump_atom(center: f64, radius: f64, p: f64, q: u32) -> Result<ClassicalAtomDescriptor> {
    let ball = Ball::new(vec![center], radius)?;
    // max of u(1−u²)^q is at u² = 1/(2q+1)
    let u2 = 1.0 / (2.0 * q as f64 + 1.0);
    let peak = u2.sqrt() * (1.0 - u2).powi(q as i32);
    let amp = ball.volume().powf(-1.0 / p) / peak;
    let mut f = SupportedPoly::zero(ball.clone());
    f.add(q, &crate::poly::Polynomial::monomial(&[1], amp));
    Ok(ClassicalAtomDescriptor { ball, profile: Profile::Poly(f), p, claimed_moment_order: Some(1) })
}

impl SupportedFunction for ClassicalAtomDescriptor {
    fn dim(&self) -> usize {
        self.ball.dim()
    }

    fn support(&self) -> crate::quadrature::BoxRegion {
        self.ball.bounding_box()
    }

    fn eval(&self, x: &[f64]) -> f64 {
        match &self.profile {
            Profile::Poly(p) => p.eval(x),
            Profile::Tabulated(f) => f(x),
        }
    }

    fn smoothness(&self) -> usize {
        match &self.profile {
            Profile::Poly(p) => p.terms().map(|(s, _)| s).max().unwrap_or(0) as usize,
            Profile::Tabulated(_) => 0,
        }
    }

    fn feature_scale(&self) -> f64 {
        self.ball.radius
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_bound() {
        assert!(check_atom_order(1, 1.0, 1).is_ok());
        let err = check_atom_order(2, 0.5, 1).unwrap_err();
        assert!(err.to_string().contains("M > n(2-p)/(4p)"));
        assert!(err.to_string().contains("1.5"));
        assert_eq!(min_atom_order(2, 0.5), 2);
        assert_eq!(min_atom_order(1, 1.0), 1);
        assert!(check_atom_order(1, 0.0, 5).is_err());
        assert!(check_atom_order(1, 1.5, 5).is_err());
    }

    #[test]
    fn make_atom_examples() {
        let atom = make_plm_atom(&PlmAtomParams::new(1.0, 1, vec![0.0], 1.0).with_q(4)).unwrap();
        let v = validate_plm_atom(&atom, 1).unwrap();
        assert!(v.pass, "{v:?}");
        assert!((v.worst_size_ratio - 1.0).abs() < 1e-8);

        let atom = make_plm_atom(&PlmAtomParams::new(1.0, 1, vec![5.0], 0.25).with_q(4)).unwrap();
        assert!(validate_plm_atom(&atom, 2).unwrap().pass);

        let err = make_plm_atom(&PlmAtomParams::new(0.5, 1, vec![0.0, 0.0], 1.0)).unwrap_err();
        assert!(err.is_config());
        assert!(make_plm_atom(&PlmAtomParams::new(1.0, 1, vec![0.0], 1.0).with_q(3)).is_err());
        assert!(make_plm_atom(&PlmAtomParams::new(1.0, 1, vec![0.0], -1.0)).is_err());
    }

    #[test]
    fn doubled_scale_fails_size_with_ratio_two() {
        let atom = make_plm_atom(&PlmAtomParams::new(1.0, 1, vec![2.0], 0.5)).unwrap();
        let v = validate_plm_atom(&atom.rescaled(2.0), 9).unwrap();
        assert!(!v.pass);
        assert!((v.worst_size_ratio - 2.0).abs() < 1e-8);
        assert!(v.representation.pass);
    }

    #[test]
    fn low_smoothness_is_flagged() {
        let ball = Ball::new(vec![0.0], 1.0).unwrap();
        let b = SupportedPoly::bump(ball.clone(), 1, 0.1);
        let a = b.apply_l().unwrap();
        let atom = PlmAtom { p: 1.0, m: 1, q: 1, ball, scale: 0.1, b, a };
        let v = validate_plm_atom(&atom, 4).unwrap();
        assert!(v.representation.pass);
        assert!(!v.smoothness_ok);
        assert!(!v.pass);
    }

    #[test]
    fn scale_covariance() {
        let atom = make_plm_atom(&PlmAtomParams::new(1.0, 2, vec![0.3], 0.7)).unwrap();
        let base = atom.scaled_norms().unwrap();
        let doubled = atom.rescaled(2.0).scaled_norms().unwrap();
        for (a, b) in base.iter().zip(&doubled) {
            assert!((b / a - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn doc_round_trip() {
        let atom = make_plm_atom(&PlmAtomParams::new(0.5, 2, vec![1.0 / 3.0, -2.0], 0.3)).unwrap();
        let json = serde_json::to_string(&atom.to_doc()).unwrap();
        for key in ["\"p\"", "\"M\"", "\"q\"", "\"center\"", "\"radius\"", "\"scale\"", "\"terms\""] {
            assert!(json.contains(key));
        }
        let doc: AtomDoc = serde_json::from_str(&json).unwrap();
        assert_eq!(doc, atom.to_doc());
        let back = PlmAtom::from_doc(&doc).unwrap();
        assert_eq!(back.b, atom.b);
        assert_eq!(back.a, atom.a);
    }

    #[test]
    fn m_aux_examples() {
        assert!((m_aux(&[1.0]) - 1.1875).abs() < 1e-15);
        assert!((m_aux(&[1e8]) - 1.0 / 16.0).abs() < 1e-15);
        assert_eq!(m_aux(&[0.0]), f64::INFINITY);
        assert_eq!(m_aux(&[1.0, 0.0]), f64::INFINITY);
        assert!(m_aux(&[3.0, -4.0]) > 2.0 / 16.0);
        assert_eq!(m_alt(&[3.0, 4.0]), 6.0);
    }

    #[test]
    fn shell_examples() {
        assert_eq!(shell_index_of_value(1.0, 1.0 / 16.0), Shell::Index(0));
        assert_eq!(shell_index_of_value(2f64.powf(1.5), 1.0 / 16.0), Shell::Index(3));
        assert_eq!(shell_index_of_value(1.2, 0.1), Shell::Index(1));
        assert_eq!(shell_index_of_value(f64::INFINITY, 0.1), Shell::Unclassified);
        assert_eq!(shell_index_of_value(0.05, 1.0 / 16.0), Shell::Unclassified);

        // x = 10: m ≈ 0.0627, inside [1/16, 1] when B₀ starts at the infimum
        let default = ShellConfig::default();
        assert_eq!(shell_index(&[10.0], &default), Shell::Index(0));
        // and below any stricter lower edge
        let strict = ShellConfig { floor: Some(0.1), ..default };
        assert_eq!(shell_index(&[10.0], &strict), Shell::Unclassified);

        let alt = ShellConfig { m_function: MFunction::Alternative, floor: None };
        assert_eq!(shell_index(&[0.0], &alt), Shell::Index(0));
        // 1 + 7 = 8 = 2^{3} → k = 6
        assert_eq!(shell_index(&[7.0], &alt), Shell::Index(6));
    }

    #[test]
    fn shells_are_contiguous() {
        let floor = 1.0 / 16.0;
        let mut last = 0;
        for i in 0..2000 {
            let m = floor + i as f64 * 0.01;
            match shell_index_of_value(m, floor) {
                Shell::Index(k) => {
                    assert!(k >= last && k <= last + 1);
                    if k > 0 {
                        assert!(2f64.powf((k as f64 - 1.0) / 2.0) <= m && m <= 2f64.powf(k as f64 / 2.0));
                    }
                    last = k;
                }
                Shell::Unclassified => panic!("m={m}"),
            }
        }
    }

    fn sign_atom(center: f64, radius: f64, p: f64, constant: bool) -> ClassicalAtomDescriptor {
        let ball = Ball::new(vec![center], radius).unwrap();
        let h = ball.volume().powf(-1.0 / p);
        let f = move |x: &[f64]| {
            let d = x[0] - center;
            if d.abs() >= radius {
                0.0
            } else if constant {
                h
            } else {
                h * d.signum()
            }
        };
        ClassicalAtomDescriptor { ball, profile: Profile::Tabulated(Arc::new(f)), p, claimed_moment_order: None }
    }

    #[test]
    fn classical_sign_atom() {
        let desc = sign_atom(0.0, 0.5, 1.0, false);
        assert_eq!(desc.required_moment_order(), 0);
        for shells in [ShellConfig::default(), ShellConfig { m_function: MFunction::Alternative, floor: None }] {
            let v = validate_classical_atom(&desc, &shells, 5).unwrap();
            assert!(v.support.pass && v.sup_norm.pass);
            assert!(v.moments_required);
            assert!(v.moments.iter().all(|m| m.pass), "{v:?}");
        }
        let alt = ShellConfig { m_function: MFunction::Alternative, floor: None };
        assert!(validate_classical_atom(&desc, &alt, 5).unwrap().pass);
        // the printed m-function is infinite at the origin
        assert_eq!(validate_classical_atom(&desc, &ShellConfig::default(), 5).unwrap().shell, Shell::Unclassified);
    }

    #[test]
    fn classical_constant_atom_fails_moments() {
        let desc = sign_atom(0.0, 0.5, 1.0, true);
        let alt = ShellConfig { m_function: MFunction::Alternative, floor: None };
        let v = validate_classical_atom(&desc, &alt, 5).unwrap();
        assert!(v.moments_required);
        assert!(!v.moments[0].pass);
        assert!(!v.pass);
        assert!(v.sup_norm.pass);
    }

    #[test]
    fn classical_moment_order_for_small_p() {
        let desc = odd_bump_atom(0.0, 0.25, 0.5, 4).unwrap();
        assert_eq!(desc.required_moment_order(), 1);
        let alt = ShellConfig { m_function: MFunction::Alternative, floor: None };
        let v = validate_classical_atom(&desc, &alt, 1).unwrap();
        // odd bump: zero mean, nonzero first moment
        assert!(v.moments[0].pass);
        assert!(!v.moments[1].pass);
        assert!(v.sup_norm.pass);
        // sampled sup sits just below the true one
        assert!((v.sup_norm.measured / v.sup_norm.bound - 1.0).abs() < 1e-4);
    }
}
