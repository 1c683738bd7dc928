//! Normalized Hermite functions `h_k` and their tensor products `Φ_μ`.
//!
//! Values come from the normalized three-term recurrence
//!
//! ```text
//! h_0(t)     = π^{-1/4} e^{-t²/2}
//! h_{k+1}(t) = t √(2/(k+1)) h_k(t) − √(k/(k+1)) h_{k−1}(t)
//! ```
//!
//! which never forms the raw polynomial `H_k`, so it stays bounded by `π^{-1/4}` for
//! all degrees. Far-tail values underflow to zero.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;

/// `π^{-1/4}`.
pub const H0_NORM: f64 = 0.751_125_544_464_942_5;

pub fn h0(t: f64) -> f64 {
    H0_NORM * (-0.5 * t * t).exp()
}

/// `h_0(t), …, h_K(t)` at a single point.
#[derive(Clone, Debug)]
pub struct BasisColumn {
    pub t: f64,
    pub values: Vec<f64>,
}

impl BasisColumn {
    pub fn max_degree(&self) -> usize {
        self.values.len() - 1
    }
}

pub fn hermite_h_all(max_degree: usize, t: f64) -> BasisColumn {
    let mut values = Vec::with_capacity(max_degree + 1);
    let mut prev = 0.0;
    let mut cur = h0(t);
    values.push(cur);
    for k in 0..max_degree {
        let next = recurrence_step(k, t, cur, prev);
        prev = cur;
        cur = next;
        values.push(cur);
    }
    BasisColumn { t, values }
}

#[inline]
fn recurrence_step(k: usize, t: f64, cur: f64, prev: f64) -> f64 {
    let kp1 = (k + 1) as f64;
    t * (2.0 / kp1).sqrt() * cur - (k as f64 / kp1).sqrt() * prev
}

/// Single `h_k(t)`.
pub fn hermite_h(k: usize, t: f64) -> f64 {
    let mut prev = 0.0;
    let mut cur = h0(t);
    for i in 0..k {
        let next = recurrence_step(i, t, cur, prev);
        prev = cur;
        cur = next;
    }
    cur
}

/// Runs the recurrence at many points at once, one degree per [`advance`](Self::advance).
///
/// Used by the coefficient kernels, which need `h_k` at every quadrature node for
/// each `k` in turn but never the whole table.
pub struct HermiteSweep {
    points: Vec<f64>,
    prev: Vec<f64>,
    cur: Vec<f64>,
    degree: usize,
}

impl HermiteSweep {
    pub fn new(points: &[f64]) -> Self {
        HermiteSweep {
            points: points.to_vec(),
            prev: vec![0.0; points.len()],
            cur: points.iter().map(|&t| h0(t)).collect(),
            degree: 0,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `h_degree` at every point.
    pub fn values(&self) -> &[f64] {
        &self.cur
    }

    pub fn advance(&mut self) {
        let kp1 = (self.degree + 1) as f64;
        let a = (2.0 / kp1).sqrt();
        let b = (self.degree as f64 / kp1).sqrt();
        for ((p, c), &t) in self.prev.iter_mut().zip(self.cur.iter_mut()).zip(&self.points) {
            let next = t * a * *c - b * *p;
            *p = *c;
            *c = next;
        }
        self.degree += 1;
    }
}

/// `Φ_μ(x) = Π h_{μᵢ}(xᵢ)`.
pub fn phi(mu: &MultiIndex, x: &[f64]) -> Result<f64> {
    if mu.dim() != x.len() {
        return Err(Error::DimensionMismatch { expected: mu.dim(), got: x.len() });
    }
    Ok(phi_unchecked(mu.entries(), x))
}

pub(crate) fn phi_unchecked(mu: &[u32], x: &[f64]) -> f64 {
    mu.iter().zip(x).map(|(&k, &t)| hermite_h(k as usize, t)).product()
}

/// Sample points per axis used by [`eigen_residual`], independent of the step so that
/// residuals at `h` and `h/2` are compared at the same locations.
fn residual_samples_per_axis(n: usize) -> usize {
    match n {
        1 => 801,
        2 => 61,
        _ => 21,
    }
}

/// Relative residual of `(−Δ_h + |x|²)Φ_μ = (2|μ|+n)Φ_μ` with central differences of step `h`.
///
/// The maximum is taken over a uniform grid on the box `|xᵢ| ≤ √(2|μ|+n) + 2`.
pub fn eigen_residual(mu: &MultiIndex, h: f64) -> f64 {
    assert!(h > 0.0);
    let n = mu.dim();
    let lambda = mu.eigenvalue() as f64;
    let half = lambda.sqrt() + 2.0;
    let per_axis = residual_samples_per_axis(n);
    let step = 2.0 * half / (per_axis - 1) as f64;
    let total = per_axis.pow(n as u32);

    let mut worst: f64 = 0.0;
    let mut x = vec![0.0; n];
    for flat in 0..total {
        let mut rem = flat;
        for xi in x.iter_mut().rev() {
            *xi = -half + (rem % per_axis) as f64 * step;
            rem /= per_axis;
        }
        let centre = phi_unchecked(mu.entries(), &x);
        let mut lap = 0.0;
        for i in 0..n {
            let xi = x[i];
            x[i] = xi + h;
            let plus = phi_unchecked(mu.entries(), &x);
            x[i] = xi - h;
            let minus = phi_unchecked(mu.entries(), &x);
            x[i] = xi;
            lap += (plus - 2.0 * centre + minus) / (h * h);
        }
        let r2: f64 = x.iter().map(|v| v * v).sum();
        let res = (-lap + r2 * centre - lambda * centre).abs();
        worst = worst.max(res);
    }
    worst / lambda
}

/// `(2^k k! √π)^{-1/2}`, computed in log space.
pub fn hermite_normalization(k: usize) -> f64 {
    let mut log = k as f64 * std::f64::consts::LN_2 + 0.5 * PI.ln();
    for i in 2..=k {
        log += (i as f64).ln();
    }
    (-0.5 * log).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gauss_hermite;
    use rand::{Rng, SeedableRng};

    /// Coefficients of `H_k` (ascending powers) from Rodrigues' formula:
    /// `(d/dt)^k e^{-t²} = P_k(t) e^{-t²}` with `P_{k+1} = P_k' − 2t P_k`, and `H_k = (−1)^k P_k`.
    fn rodrigues_poly(k: usize) -> Vec<f64> {
        let mut p = vec![1.0];
        for _ in 0..k {
            let mut next = vec![0.0; p.len() + 1];
            for (i, &c) in p.iter().enumerate() {
                if i > 0 {
                    next[i - 1] += i as f64 * c;
                }
                next[i + 1] -= 2.0 * c;
            }
            p = next;
        }
        if k % 2 == 1 {
            p.iter_mut().for_each(|c| *c = -*c);
        }
        p
    }

    fn rodrigues_h(k: usize, t: f64) -> f64 {
        let poly = rodrigues_poly(k);
        let hk = poly.iter().rev().fold(0.0, |acc, &c| acc * t + c);
        hermite_normalization(k) * hk * (-0.5 * t * t).exp()
    }

    #[test]
    fn rodrigues_polynomials_are_the_physicists_hermite() {
        assert_eq!(rodrigues_poly(2), vec![-2.0, 0.0, 4.0]);
        assert_eq!(rodrigues_poly(3), vec![0.0, -12.0, 0.0, 8.0]);
    }

    #[test]
    fn point_values() {
        let c = hermite_h_all(0, 0.0);
        assert!((c.values[0] - PI.powf(-0.25)).abs() < 1e-15);
        assert!((c.values[0] - 0.751126).abs() < 1e-6);

        let c = hermite_h_all(1, 1.0);
        let expected = 2f64.sqrt() * PI.powf(-0.25) * (-0.5f64).exp();
        assert!((c.values[1] - expected).abs() < 1e-15);
        assert!((c.values[1] - rodrigues_h(1, 1.0)).abs() < 1e-15);
        assert!((c.values[1] - 0.644_288_365_113_475).abs() < 1e-14);

        let c = hermite_h_all(3, 0.0);
        assert_eq!(c.values[1], 0.0);
        assert_eq!(c.values[3], 0.0);
    }

    #[test]
    fn recurrence_agrees_with_rodrigues() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let t: f64 = rng.gen_range(-4.0..4.0);
            let col = hermite_h_all(6, t);
            for k in 0..=6 {
                let want = rodrigues_h(k, t);
                let rel = (col.values[k] - want).abs() / want.abs().max(1e-300);
                assert!(rel < 1e-10 || (col.values[k] - want).abs() < 1e-15, "k={k} t={t}");
            }
        }
    }

    #[test]
    fn parity_and_bound() {
        for i in 0..=120 {
            let t = -6.0 + 0.1 * i as f64;
            let plus = hermite_h_all(40, t);
            let minus = hermite_h_all(40, -t);
            for k in 0..=40 {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                assert!((minus.values[k] - sign * plus.values[k]).abs() <= 1e-14);
                assert!(plus.values[k].abs() <= 1.0 + 1e-9);
            }
        }
        // stays bounded far beyond the raw-polynomial overflow point
        let big = hermite_h_all(10_000, 3.7);
        assert!(big.values.iter().all(|v| v.is_finite() && v.abs() <= 1.0 + 1e-9));
    }

    #[test]
    fn orthonormal_under_gauss_hermite() {
        let rule = gauss_hermite(64).unwrap();
        let scaled = rule.hermite_function_weights().unwrap();
        let cols: Vec<BasisColumn> = rule.nodes.iter().map(|&t| hermite_h_all(40, t)).collect();
        for j in 0..=40 {
            for k in 0..=40 {
                let s: f64 = cols.iter().zip(scaled).map(|(c, w)| w * c.values[j] * c.values[k]).sum();
                let want = if j == k { 1.0 } else { 0.0 };
                assert!((s - want).abs() < 1e-8, "j={j} k={k} s={s}");
            }
        }
    }

    #[test]
    fn phi_examples() {
        let v = phi(&MultiIndex::new(&[0, 0]), &[0.0, 0.0]).unwrap();
        assert!((v - PI.powf(-0.5)).abs() < 1e-15);
        assert!((v - 0.564190).abs() < 1e-6);
        assert_eq!(phi(&MultiIndex::new(&[1, 0]), &[0.0, 3.0]).unwrap(), 0.0);
        let v = phi(&MultiIndex::new(&[2, 1]), &[0.5, -0.5]).unwrap();
        let want = rodrigues_h(2, 0.5) * rodrigues_h(1, -0.5);
        assert!((v - want).abs() < 1e-14);
        assert!(matches!(
            phi(&MultiIndex::new(&[2, 1]), &[0.5]),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        ));
    }

    #[test]
    fn sweep_matches_columns() {
        let pts = [-2.5, 0.0, 0.3, 4.0];
        let mut sweep = HermiteSweep::new(&pts);
        let cols: Vec<_> = pts.iter().map(|&t| hermite_h_all(50, t)).collect();
        for k in 0..=50 {
            assert_eq!(sweep.degree(), k);
            for (i, c) in cols.iter().enumerate() {
                assert_eq!(sweep.values()[i], c.values[k]);
            }
            sweep.advance();
        }
    }

    #[test]
    fn eigen_residual_examples() {
        assert!(eigen_residual(&MultiIndex::new(&[0]), 1e-3) <= 1e-5);
        assert!(eigen_residual(&MultiIndex::new(&[0, 0]), 1e-3) <= 1e-5);
        assert!(eigen_residual(&MultiIndex::new(&[10]), 1e-3) <= 1e-3);
    }

    #[test]
    fn eigen_residual_is_second_order() {
        let mu = MultiIndex::new(&[2]);
        let coarse = eigen_residual(&mu, 1e-2);
        let fine = eigen_residual(&mu, 5e-3);
        let ratio = coarse / fine;
        assert!((3.5..=4.5).contains(&ratio), "ratio={ratio}");
    }
}
