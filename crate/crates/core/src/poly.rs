//! Ball-supported polynomial bumps `Σ_s p_s(u)·(1 − |u|²)^s`, `u = (x − x₀)/r`.
//!
//! Working in the local coordinate `u` keeps coefficients well scaled for small balls
//! far from the origin. The family is closed under `L = −Δ + |x|²`: differentiating
//! `w^s` with `w = 1 − |u|²` only lowers `s` and multiplies by polynomials, so
//! [`SupportedPoly::apply_l`] is exact.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub type Exponents = SmallVec<[u16; 4]>;

/// Sparse multivariate polynomial with a canonical (sorted, zero-free) term map.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Polynomial {
    n: usize,
    terms: BTreeMap<Exponents, f64>,
}

impl Polynomial {
    pub fn zero(n: usize) -> Self {
        Polynomial { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: f64) -> Self {
        let mut p = Self::zero(n);
        p.add_term(SmallVec::from_elem(0, n), c);
        p
    }

    /// `c · u^e`.
    pub fn monomial(exps: &[u16], c: f64) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(SmallVec::from_slice(exps), c);
        p
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, f64)> {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|e| e.iter().map(|&d| d as usize).sum()).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, exps: Exponents, c: f64) {
        debug_assert_eq!(exps.len(), self.n);
        if c == 0.0 {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == 0.0 {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Polynomial, c: f64) {
        for (e, v) in other.terms() {
            self.add_term(e.clone(), c * v);
        }
    }

    pub fn scaled(&self, c: f64) -> Polynomial {
        let mut out = Polynomial::zero(self.n);
        out.add_scaled(self, c);
        out
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.n);
        for (ea, a) in self.terms() {
            for (eb, b) in other.terms() {
                let e: Exponents = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, a * b);
            }
        }
        out
    }

    pub fn partial(&self, i: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.n);
        for (e, c) in self.terms() {
            if e[i] > 0 {
                let mut d = e.clone();
                d[i] -= 1;
                out.add_term(d, c * e[i] as f64);
            }
        }
        out
    }

    pub fn laplacian(&self) -> Polynomial {
        let mut out = Polynomial::zero(self.n);
        for (e, c) in self.terms() {
            for i in 0..self.n {
                if e[i] >= 2 {
                    let mut d = e.clone();
                    d[i] -= 2;
                    out.add_term(d, c * (e[i] as f64) * (e[i] as f64 - 1.0));
                }
            }
        }
        out
    }

    /// Euler operator `u·∇p`: scales each monomial by its total degree.
    pub fn euler(&self) -> Polynomial {
        let mut out = Polynomial::zero(self.n);
        for (e, c) in self.terms() {
            let deg: u32 = e.iter().map(|&d| d as u32).sum();
            out.add_term(e.clone(), c * deg as f64);
        }
        out
    }

    pub fn eval(&self, u: &[f64]) -> f64 {
        self.terms()
            .map(|(e, c)| c * e.iter().zip(u).map(|(&d, &x)| x.powi(d as i32)).product::<f64>())
            .sum()
    }

    /// `|x₀ + r u|²` as a polynomial in `u`.
    pub fn shifted_square_norm(center: &[f64], r: f64) -> Polynomial {
        let n = center.len();
        let mut p = Polynomial::constant(n, center.iter().map(|c| c * c).sum());
        for (i, &c) in center.iter().enumerate() {
            let mut e: Exponents = SmallVec::from_elem(0, n);
            e[i] = 1;
            p.add_term(e.clone(), 2.0 * r * c);
            e[i] = 2;
            p.add_term(e, r * r);
        }
        p
    }

    /// `(1 − |u|²)`.
    pub fn bump_base(n: usize) -> Polynomial {
        let mut p = Polynomial::constant(n, 1.0);
        for i in 0..n {
            let mut e: Exponents = SmallVec::from_elem(0, n);
            e[i] = 2;
            p.add_term(e, -1.0);
        }
        p
    }
}

/// Ball `B(center, radius)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Vec<f64>, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::config(format!("ball radius must be positive, got {radius}")));
        }
        if center.is_empty() {
            return Err(Error::config("ball center needs dimension >= 1"));
        }
        Ok(Ball { center, radius })
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    /// Lebesgue measure `ω_n rⁿ`.
    pub fn volume(&self) -> f64 {
        unit_ball_volume(self.dim()) * self.radius.powi(self.dim() as i32)
    }

    pub fn local(&self, x: &[f64], u: &mut [f64]) {
        for ((ui, &xi), &ci) in u.iter_mut().zip(x).zip(&self.center) {
            *ui = (xi - ci) / self.radius;
        }
    }

    pub fn bounding_box(&self) -> crate::quadrature::BoxRegion {
        crate::quadrature::BoxRegion { center: self.center.clone(), half_widths: vec![self.radius; self.dim()] }
    }
}

pub fn unit_ball_volume(n: usize) -> f64 {
    match n {
        1 => 2.0,
        2 => std::f64::consts::PI,
        3 => 4.0 * std::f64::consts::PI / 3.0,
        _ => {
            // ω_n = 2π/n · ω_{n−2}
            2.0 * std::f64::consts::PI / n as f64 * unit_ball_volume(n - 2)
        }
    }
}

pub const DEFAULT_DEGREE_CAP: usize = 96;

/// `Σ_s p_s(u)·(1 − |u|²)^s` on the ball, zero outside.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportedPoly {
    pub ball: Ball,
    terms: BTreeMap<u32, Polynomial>,
    degree_cap: usize,
}

impl SupportedPoly {
    pub fn zero(ball: Ball) -> Self {
        SupportedPoly { ball, terms: BTreeMap::new(), degree_cap: DEFAULT_DEGREE_CAP }
    }

    /// `c·(1 − |u|²)^q`.
    pub fn bump(ball: Ball, q: u32, c: f64) -> Self {
        let n = ball.dim();
        let mut f = Self::zero(ball);
        f.add(q, &Polynomial::constant(n, c));
        f
    }

    pub fn with_degree_cap(mut self, cap: usize) -> Self {
        self.degree_cap = cap;
        self
    }

    pub fn degree_cap(&self) -> usize {
        self.degree_cap
    }

    pub fn dim(&self) -> usize {
        self.ball.dim()
    }

    pub fn add(&mut self, s: u32, p: &Polynomial) {
        assert_eq!(p.dim(), self.dim());
        let slot = self.terms.entry(s).or_insert_with(|| Polynomial::zero(p.dim()));
        slot.add_scaled(p, 1.0);
        if slot.is_zero() {
            self.terms.remove(&s);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &Polynomial)> {
        self.terms.iter().map(|(&s, p)| (s, p))
    }

    pub fn min_power(&self) -> Option<u32> {
        self.terms.keys().next().copied()
    }

    pub fn max_poly_degree(&self) -> usize {
        self.terms.values().map(Polynomial::degree).max().unwrap_or(0)
    }

    /// Total degree in `u` of the fully expanded function.
    pub fn expanded_degree(&self) -> usize {
        self.terms.iter().map(|(&s, p)| p.degree() + 2 * s as usize).max().unwrap_or(0)
    }

    pub fn scaled(&self, c: f64) -> SupportedPoly {
        let mut out = SupportedPoly::zero(self.ball.clone()).with_degree_cap(self.degree_cap);
        for (s, p) in self.terms() {
            out.add(s, &p.scaled(c));
        }
        out
    }

    /// Value at `x`; exactly zero outside the open ball.
    pub fn eval(&self, x: &[f64]) -> f64 {
        let mut u: SmallVec<[f64; 4]> = SmallVec::from_elem(0.0, self.dim());
        self.ball.local(x, &mut u);
        self.eval_local(&u)
    }

    pub fn eval_local(&self, u: &[f64]) -> f64 {
        let w = 1.0 - u.iter().map(|v| v * v).sum::<f64>();
        if w < 0.0 {
            return 0.0;
        }
        self.terms.iter().map(|(&s, p)| p.eval(u) * w.powi(s as i32)).sum()
    }

    /// `(−Δ + |x|²) f` in the interior of the ball, as another bump polynomial.
    pub fn apply_l(&self) -> Result<SupportedPoly> {
        let n = self.dim();
        let r = self.ball.radius;
        let inv_r2 = 1.0 / (r * r);
        let q = Polynomial::shifted_square_norm(&self.ball.center, r);
        let mut out = SupportedPoly::zero(self.ball.clone()).with_degree_cap(self.degree_cap);
        for (s, p) in self.terms() {
            let sf = s as f64;
            // w^s: −r⁻²Δp + |x|² p
            let mut top = q.mul(p);
            top.add_scaled(&p.laplacian(), -inv_r2);
            out.add(s, &top);
            if s >= 1 {
                // w^{s−1}: r⁻² s (4 u·∇p + (2n + 4(s−1)) p)
                let mut mid = p.euler().scaled(4.0);
                mid.add_scaled(p, 2.0 * n as f64 + 4.0 * (sf - 1.0));
                out.add(s - 1, &mid.scaled(inv_r2 * sf));
            }
            if s >= 2 {
                // w^{s−2}: −4 r⁻² s(s−1) p
                out.add(s - 2, &p.scaled(-4.0 * inv_r2 * sf * (sf - 1.0)));
            }
        }
        let needed = out.max_poly_degree();
        if needed > self.degree_cap {
            return Err(Error::DegreeCap { needed, cap: self.degree_cap });
        }
        Ok(out)
    }

    pub fn apply_l_times(&self, times: u32) -> Result<SupportedPoly> {
        let mut f = self.clone();
        for _ in 0..times {
            f = f.apply_l()?;
        }
        Ok(f)
    }

    /// Single polynomial in `u` equal to `f` inside the ball (all `w^s` multiplied out).
    pub fn expand(&self) -> Polynomial {
        let n = self.dim();
        let base = Polynomial::bump_base(n);
        let mut out = Polynomial::zero(n);
        for (s, p) in self.terms() {
            let mut acc = p.clone();
            for _ in 0..s {
                acc = acc.mul(&base);
            }
            out.add_scaled(&acc, 1.0);
        }
        out
    }

    /// Fast evaluator for quadrature loops.
    pub fn compile(&self) -> CompiledPoly {
        let n = self.dim();
        let max_deg = self.max_poly_degree();
        let terms = self
            .terms()
            .map(|(s, p)| {
                let dense_1d = (n == 1).then(|| {
                    let mut c = vec![0.0; p.degree() + 1];
                    for (e, v) in p.terms() {
                        c[e[0] as usize] = v;
                    }
                    c
                });
                let monos = p.terms().map(|(e, v)| (e.iter().map(|&d| d as usize).collect(), v)).collect();
                CompiledTerm { s, dense_1d, monos }
            })
            .collect();
        CompiledPoly { center: self.ball.center.clone(), radius: self.ball.radius, max_deg, terms }
    }

    /// L² norm over the ball: `m`-point Gauss–Legendre on the interval in 1-d, the `m`-point
    /// iterated chord rule in higher dimensions.
    pub fn l2_norm(&self, m: usize) -> Result<f64> {
        use crate::quadrature::TensorRule;
        let c = self.compile();
        let rule = if self.dim() == 1 {
            TensorRule::on_box(&self.ball.bounding_box(), m)?
        } else {
            TensorRule::on_ball_nodes(self.ball.center.clone(), self.ball.radius, m)?
        };
        Ok(rule.integrate(|x| c.eval(x).powi(2))?.sqrt())
    }

    /// Node count for exact (n = 1) or converged (n > 1, angular rule) ball integrals of `f²`.
    pub fn norm_nodes(&self) -> usize {
        let exact = self.expanded_degree() + 2;
        match self.dim() {
            1 => exact.max(16),
            _ => (exact + 16).max(48),
        }
    }
}

struct CompiledTerm {
    s: u32,
    dense_1d: Option<Vec<f64>>,
    monos: Vec<(Vec<usize>, f64)>,
}

/// Evaluation-only form of a [`SupportedPoly`].
pub struct CompiledPoly {
    center: Vec<f64>,
    radius: f64,
    max_deg: usize,
    terms: Vec<CompiledTerm>,
}

impl CompiledPoly {
    pub fn eval(&self, x: &[f64]) -> f64 {
        let n = self.center.len();
        if n == 1 {
            let u = (x[0] - self.center[0]) / self.radius;
            let w = 1.0 - u * u;
            if w < 0.0 {
                return 0.0;
            }
            return self
                .terms
                .iter()
                .map(|t| {
                    let c = t.dense_1d.as_ref().unwrap();
                    c.iter().rev().fold(0.0, |acc, &v| acc * u + v) * w.powi(t.s as i32)
                })
                .sum();
        }
        let mut u: SmallVec<[f64; 4]> = SmallVec::new();
        let mut w = 1.0;
        for (xi, ci) in x.iter().zip(&self.center) {
            let v = (xi - ci) / self.radius;
            w -= v * v;
            u.push(v);
        }
        if w < 0.0 {
            return 0.0;
        }
        // power table pow[i][d] = u_i^d
        let d = self.max_deg + 1;
        let mut pow = vec![1.0; n * d];
        for i in 0..n {
            for k in 1..d {
                pow[i * d + k] = pow[i * d + k - 1] * u[i];
            }
        }
        self.terms
            .iter()
            .map(|t| {
                let p: f64 = t
                    .monos
                    .iter()
                    .map(|(e, c)| c * e.iter().enumerate().map(|(i, &k)| pow[i * d + k]).product::<f64>())
                    .sum();
                p * w.powi(t.s as i32)
            })
            .sum()
    }
}

/// JSON form of one `w^s` term: `{ "s": 2, "monomials": [{ "exponents": [..], "coeff": .. }] }`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermDoc {
    pub s: u32,
    pub monomials: Vec<MonomialDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonomialDoc {
    pub exponents: Vec<u16>,
    pub coeff: f64,
}

impl SupportedPoly {
    pub fn to_doc(&self) -> Vec<TermDoc> {
        self.terms()
            .map(|(s, p)| TermDoc {
                s,
                monomials: p.terms().map(|(e, c)| MonomialDoc { exponents: e.to_vec(), coeff: c }).collect(),
            })
            .collect()
    }

    pub fn from_doc(ball: Ball, terms: &[TermDoc]) -> Result<Self> {
        let n = ball.dim();
        let mut f = SupportedPoly::zero(ball);
        for t in terms {
            let mut p = Polynomial::zero(n);
            for m in &t.monomials {
                if m.exponents.len() != n {
                    return Err(Error::DimensionMismatch { expected: n, got: m.exponents.len() });
                }
                p.add_term(SmallVec::from_slice(&m.exponents), m.coeff);
            }
            f.add(t.s, &p);
        }
        Ok(f)
    }
}
