//! Hermite coefficients `⟨f, Φ_μ⟩`, Plancherel checks, the Hardy functional
//! `Σ_μ |⟨f,Φ_μ⟩|^p (2|μ|+n)^{−σ(n,p)}` with `σ(n,p) = 3n(2−p)/4`, and its dyadic block
//! profile split into the low-frequency (II) and high-frequency (I) parts.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::SupportedFunction;
use crate::hermite::{hermite_h_all, HermiteSweep};
use crate::multiindex::{
    block_level_range, block_of_level, count_up_to, enumerate_level, level_count, level_eigenvalue, rank_in_level,
    MultiIndex,
};
use crate::quadrature::{basis_axis_rule, basis_node_count, TensorRule};
use crate::sum::{pairwise_dot, pairwise_sum};

/// `σ(n, p) = 3n(2 − p)/4`.
pub fn sigma(n: usize, p: f64) -> f64 {
    0.75 * n as f64 * (2.0 - p)
}

/// Quadrature used to produce a coefficient table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadSpec {
    /// Level the node-count rule was sized for (≥ the stored maximum level).
    pub rule_level: u64,
    pub nodes_per_axis: Vec<usize>,
}

/// Coefficients `c_μ` for every `|μ| ≤ K`, level-major and lexicographic within a level.
#[derive(Clone, Debug)]
pub struct CoeffVector {
    n: usize,
    max_level: u64,
    values: Vec<f64>,
    pub quad: QuadSpec,
}

impl CoeffVector {
    pub fn from_values(n: usize, max_level: u64, values: Vec<f64>, quad: QuadSpec) -> Result<Self> {
        let want = count_up_to(n, max_level) as usize;
        if values.len() != want {
            return Err(Error::DimensionMismatch { expected: want, got: values.len() });
        }
        Ok(CoeffVector { n, max_level, values, quad })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn max_level(&self) -> u64 {
        self.max_level
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn level_offset(&self, k: u64) -> usize {
        if k == 0 {
            0
        } else {
            count_up_to(self.n, k - 1) as usize
        }
    }

    /// Coefficients on level `k`, in [`enumerate_level`] order.
    pub fn level(&self, k: u64) -> &[f64] {
        let start = self.level_offset(k);
        &self.values[start..start + level_count(self.n, k) as usize]
    }

    /// Contiguous coefficients for levels `lo..=hi`.
    pub fn levels(&self, lo: u64, hi: u64) -> &[f64] {
        let start = self.level_offset(lo);
        let end = self.level_offset(hi + 1);
        &self.values[start..end]
    }

    pub fn get(&self, mu: &MultiIndex) -> Option<f64> {
        if mu.dim() != self.n || mu.level() > self.max_level {
            return None;
        }
        Some(self.values[self.level_offset(mu.level()) + rank_in_level(mu) as usize])
    }

    pub fn iter(&self) -> impl Iterator<Item = (MultiIndex, f64)> + '_ {
        (0..=self.max_level)
            .flat_map(move |k| enumerate_level(self.n, k))
            .zip(self.values.iter().copied())
    }

    /// The same table cut at level `k`.
    pub fn truncated(&self, k: u64) -> CoeffVector {
        let k = k.min(self.max_level);
        CoeffVector {
            n: self.n,
            max_level: k,
            values: self.values[..count_up_to(self.n, k) as usize].to_vec(),
            quad: self.quad.clone(),
        }
    }

    pub fn squared_sum(&self) -> f64 {
        pairwise_dot(&self.values, &self.values)
    }
}

/// Quadrature for `⟨f, Φ_μ⟩` up to level `max_level`: composite Gauss–Legendre on the
/// support box, or the iterated chord rule when `f` declares a ball in dimension ≥ 2.
pub fn basis_rule(f: &dyn SupportedFunction, max_level: u64) -> Result<TensorRule> {
    let q = f.smoothness();
    if let Some(ball) = f.ball().filter(|b| b.dim() >= 2) {
        let n = ball.dim();
        let half = std::f64::consts::FRAC_PI_2;
        // dx = ρ cos θ dθ, so an angle rule sized for half-width ρπ/2 resolves like a box rule
        let m = basis_node_count(ball.radius * half, max_level, n, q);
        let axes = (0..n).map(|_| basis_axis_rule(-half, half, m)).collect::<Result<_>>()?;
        return TensorRule::on_ball(ball.center, ball.radius, axes);
    }
    let region = f.support();
    let n = region.dim();
    let axes = (0..n)
        .map(|i| {
            let m = basis_node_count(region.half_widths[i], max_level, n, q);
            basis_axis_rule(region.lo(i), region.hi(i), m)
        })
        .collect::<Result<_>>()?;
    Ok(TensorRule::new(axes))
}

/// `c_μ = ∫ f Φ_μ` for all `|μ| ≤ max_level`.
pub fn coefficients(f: &dyn SupportedFunction, max_level: u64) -> Result<CoeffVector> {
    coefficients_with_rule(f, max_level, max_level)
}

/// As [`coefficients`], with the quadrature sized for `rule_level ≥ max_level`.
pub fn coefficients_with_rule(f: &dyn SupportedFunction, max_level: u64, rule_level: u64) -> Result<CoeffVector> {
    let rule = basis_rule(f, rule_level.max(max_level))?;
    let weighted = rule.weighted_values(|x| f.eval(x))?;
    let quad = QuadSpec { rule_level: rule_level.max(max_level), nodes_per_axis: rule.axes.iter().map(|a| a.len()).collect() };
    let n = rule.dim();
    let values = if n == 1 {
        sweep_1d(&rule.axes[0].nodes, &weighted, max_level)
    } else {
        contract_tensor(&rule, &weighted, max_level)
    };
    CoeffVector::from_values(n, max_level, values, quad)
}

/// One-dimensional kernel: runs the recurrence across all nodes, one degree at a time.
fn sweep_1d(nodes: &[f64], weighted: &[f64], max_level: u64) -> Vec<f64> {
    let mut out = Vec::with_capacity(max_level as usize + 1);
    let mut sweep = HermiteSweep::new(nodes);
    loop {
        out.push(pairwise_dot(weighted, sweep.values()));
        if sweep.degree() as u64 == max_level {
            break;
        }
        sweep.advance();
    }
    out
}

/// General kernel: contracts the weighted node tensor with per-axis basis tables,
/// last axis first, then gathers `|μ| ≤ K` in level-major order. For warped rules the
/// axis-`d` coordinates depend on the earlier indices, so tables are rebuilt per prefix.
fn contract_tensor(rule: &TensorRule, weighted: &[f64], max_level: u64) -> Vec<f64> {
    let n = rule.dim();
    let kk = max_level as usize + 1;
    let table_for = |axis: usize, outer_index: usize| -> Vec<f64> {
        // t[k * m + j] = h_k(coordinate of node j)
        let m = rule.axes[axis].len();
        let mut t = vec![0.0; kk * m];
        for j in 0..m {
            let x = rule.coordinate(axis, outer_index * m + j);
            for (k, v) in hermite_h_all(max_level as usize, x).values.into_iter().enumerate() {
                t[k * m + j] = v;
            }
        }
        t
    };

    let mut data = weighted.to_vec();
    let mut shape = rule.shape();
    let mut scratch = Vec::new();
    for axis in (0..n).rev() {
        let m = shape[axis];
        let outer: usize = shape[..axis].iter().product();
        let inner: usize = shape[axis + 1..].iter().product();
        let shared = (!rule.is_warped()).then(|| table_for(axis, 0));
        let mut next = vec![0.0; outer * kk * inner];
        for o in 0..outer {
            let local;
            let table = match &shared {
                Some(t) => t,
                None => {
                    local = table_for(axis, o);
                    &local
                }
            };
            for i in 0..inner {
                scratch.clear();
                scratch.extend((0..m).map(|j| data[(o * m + j) * inner + i]));
                for k in 0..kk {
                    next[(o * kk + k) * inner + i] = pairwise_dot(&scratch, &table[k * m..(k + 1) * m]);
                }
            }
        }
        data = next;
        shape[axis] = kk;
    }

    let mut out = Vec::with_capacity(count_up_to(n, max_level) as usize);
    for k in 0..=max_level {
        for mu in enumerate_level(n, k) {
            let flat = mu.entries().iter().fold(0usize, |acc, &e| acc * kk + e as usize);
            out.push(data[flat]);
        }
    }
    out
}

/// `‖f‖₂² − Σ|c_μ|²` with the norm taken by the rule the coefficients were computed with.
pub fn plancherel_defect(f: &dyn SupportedFunction, coeffs: &CoeffVector) -> Result<f64> {
    let norm2 = crate::function::l2_norm_squared(f, coeffs.quad.rule_level)?;
    Ok(norm2 - coeffs.squared_sum())
}

/// Defects at each level in `levels` (ascending), from running partial sums of one table.
pub fn plancherel_profile(f: &dyn SupportedFunction, coeffs: &CoeffVector, levels: &[u64]) -> Result<Vec<f64>> {
    let norm2 = crate::function::l2_norm_squared(f, coeffs.quad.rule_level)?;
    let mut out = Vec::with_capacity(levels.len());
    let mut running = 0.0;
    let mut next_level = 0u64;
    for &k in levels {
        let k = k.min(coeffs.max_level());
        while next_level <= k {
            running += pairwise_dot(coeffs.level(next_level), coeffs.level(next_level));
            next_level += 1;
        }
        out.push(norm2 - running);
    }
    Ok(out)
}

/// Which exponent the Hardy functional uses.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Exponent {
    /// `σ(n, p)`.
    Critical,
    /// `σ(n, p) − delta`, for sharpness probes only.
    Probe { delta: f64 },
}

impl Exponent {
    pub fn value(self, n: usize, p: f64) -> f64 {
        match self {
            Exponent::Critical => sigma(n, p),
            Exponent::Probe { delta } => sigma(n, p) - delta,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    /// `2^j r² ≥ 1`.
    I,
    /// `2^j r² < 1`.
    II,
}

impl Side {
    pub fn of(j: i32, r: f64) -> Side {
        if 2f64.powi(j) * r * r >= 1.0 {
            Side::I
        } else {
            Side::II
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Side::I => "I",
            Side::II => "II",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockRecord {
    pub j: i32,
    pub side: Side,
    /// Indices of the block present in the table.
    pub cardinality: u64,
    pub block_sum: f64,
    /// `Σ_block |c_μ|²`.
    pub l2_mass: f64,
    /// `(Σ|c|²)^{p/2} (Σ λ^{−2σ/(2−p)})^{(2−p)/2}`, the Hölder bound of `block_sum`.
    pub holder_bound: f64,
    /// Side I only: `block_sum · 2^{jn(2−p)/4} · r^{n(2−p)/2}`.
    pub normalized_i: Option<f64>,
    /// Side II with `M` known: `block_sum · 2^{−j(Mp − n(2−p)/4)} · r^{−(2Mp − n(2−p)/2)}`.
    pub normalized_ii: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockProfile {
    pub p: f64,
    pub sigma: f64,
    pub radius: f64,
    pub atom_order: Option<u32>,
    pub records: Vec<BlockRecord>,
}

impl BlockProfile {
    /// Pairwise total over blocks; identical to [`hardy_sum`] for the same inputs.
    pub fn total(&self) -> f64 {
        pairwise_sum(&self.records.iter().map(|r| r.block_sum).collect::<Vec<_>>())
    }

    pub fn max_normalized_i(&self) -> Option<f64> {
        self.records.iter().filter_map(|r| r.normalized_i).reduce(f64::max)
    }

    pub fn max_normalized_ii(&self) -> Option<f64> {
        self.records.iter().filter_map(|r| r.normalized_ii).reduce(f64::max)
    }

    /// Worst `block_sum / holder_bound − 1` (≤ 0 when Hölder holds).
    pub fn worst_holder_excess(&self) -> f64 {
        self.records
            .iter()
            .filter(|r| r.holder_bound > 0.0)
            .map(|r| r.block_sum / r.holder_bound - 1.0)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// CSV with columns `j,side,cardinality,block_sum,normalized_I,normalized_II`.
    pub fn to_csv(&self) -> String {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["j", "side", "cardinality", "block_sum", "normalized_I", "normalized_II"]).expect("in-memory csv");
        for r in &self.records {
            w.write_record([
                r.j.to_string(),
                r.side.label().to_string(),
                r.cardinality.to_string(),
                r.block_sum.to_string(),
                opt(r.normalized_i),
                opt(r.normalized_ii),
            ])
            .expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv")
    }
}

fn check_p(p: f64) -> Result<()> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::config(format!("p must lie in (0, 1], got {p}")));
    }
    Ok(())
}

/// `|c|^p λ^{−σ}` in log space.
#[inline]
fn hardy_term(c: f64, p: f64, log_weight: f64) -> f64 {
    if c == 0.0 {
        return 0.0;
    }
    (p * c.abs().ln() - log_weight).exp()
}

/// Block profile for an arbitrary exponent; [`block_profile`] and [`block_profile_probe`] wrap it.
fn profile_with(coeffs: &CoeffVector, p: f64, r: f64, m: Option<u32>, exponent: Exponent) -> Result<BlockProfile> {
    check_p(p)?;
    if !(r > 0.0) {
        return Err(Error::config(format!("radius must be positive, got {r}")));
    }
    let n = coeffs.dim();
    let sig = exponent.value(n, p);
    let nf = n as f64;
    let last_block = block_of_level(n, coeffs.max_level());
    let mut records = Vec::new();
    let mut buf = Vec::new();
    for j in -1..=last_block {
        let Some(range) = block_level_range(n, j) else { continue };
        let lo = *range.start();
        let hi = (*range.end()).min(coeffs.max_level());
        if lo > hi {
            continue;
        }
        buf.clear();
        let mut holder_weights = Vec::with_capacity((hi - lo + 1) as usize);
        for k in lo..=hi {
            let lambda = level_eigenvalue(n, k) as f64;
            let lw = sig * lambda.ln();
            buf.extend(coeffs.level(k).iter().map(|&c| hardy_term(c, p, lw)));
            holder_weights.push(level_count(n, k) as f64 * (-2.0 * sig / (2.0 - p) * lambda.ln()).exp());
        }
        let block_sum = pairwise_sum(&buf);
        let slice = coeffs.levels(lo, hi);
        let l2_mass = pairwise_dot(slice, slice);
        let holder_bound = l2_mass.powf(p / 2.0) * pairwise_sum(&holder_weights).powf((2.0 - p) / 2.0);
        let side = Side::of(j, r);
        let jf = j as f64;
        let normalized_i = (side == Side::I)
            .then(|| block_sum * 2f64.powf(jf * nf * (2.0 - p) / 4.0) * r.powf(nf * (2.0 - p) / 2.0));
        let normalized_ii = match (side, m) {
            (Side::II, Some(m)) => {
                let mp = m as f64 * p;
                Some(block_sum * 2f64.powf(-jf * (mp - nf * (2.0 - p) / 4.0)) * r.powf(-(2.0 * mp - nf * (2.0 - p) / 2.0)))
            }
            _ => None,
        };
        records.push(BlockRecord {
            j,
            side,
            cardinality: slice.len() as u64,
            block_sum,
            l2_mass,
            holder_bound,
            normalized_i,
            normalized_ii,
        });
    }
    Ok(BlockProfile { p, sigma: sig, radius: r, atom_order: m, records })
}

/// Dyadic block profile with the critical exponent, split at `2^j r² = 1`.
pub fn block_profile(coeffs: &CoeffVector, p: f64, r: f64, atom_order: Option<u32>) -> Result<BlockProfile> {
    profile_with(coeffs, p, r, atom_order, Exponent::Critical)
}

/// Block profile with exponent `σ(n,p) − delta`. Exploratory.
pub fn block_profile_probe(coeffs: &CoeffVector, p: f64, r: f64, atom_order: Option<u32>, delta: f64) -> Result<BlockProfile> {
    profile_with(coeffs, p, r, atom_order, Exponent::Probe { delta })
}

/// Relative size of the last block below which a truncated sum counts as converged.
pub const TAIL_TOLERANCE: f64 = 1e-3;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HardySum {
    pub value: f64,
    pub sigma: f64,
    pub last_block: i32,
    pub last_block_sum: f64,
    /// `last_block_sum / value`.
    pub tail_fraction: f64,
    pub converged: bool,
}

impl HardySum {
    fn from_profile(profile: &BlockProfile) -> HardySum {
        let value = profile.total();
        let last = profile.records.last();
        let last_block_sum = last.map_or(0.0, |r| r.block_sum);
        let tail_fraction = if value > 0.0 { last_block_sum / value } else { 0.0 };
        HardySum {
            value,
            sigma: profile.sigma,
            last_block: last.map_or(-1, |r| r.j),
            last_block_sum,
            tail_fraction,
            converged: tail_fraction < TAIL_TOLERANCE,
        }
    }
}

/// `Σ_{|μ|≤K} |c_μ|^p (2|μ|+n)^{−σ(n,p)}`, summed block by block.
pub fn hardy_sum(coeffs: &CoeffVector, p: f64) -> Result<HardySum> {
    let profile = profile_with(coeffs, p, 1.0, None, Exponent::Critical)?;
    Ok(HardySum::from_profile(&profile))
}

pub fn hardy_sum_of_profile(profile: &BlockProfile) -> HardySum {
    HardySum::from_profile(profile)
}

/// How far coefficient tables are extended before declaring a sum truncated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncationPolicy {
    pub tail_tolerance: f64,
    /// Hard ceiling on the level.
    pub max_level: u64,
    /// Blocks added per extension round.
    pub growth_blocks: i32,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy { tail_tolerance: TAIL_TOLERANCE, max_level: 1 << 24, growth_blocks: 3 }
    }
}

impl TruncationPolicy {
    pub fn for_dimension(n: usize) -> Self {
        let max_level = match n {
            1 => 1 << 24,
            2 => 256,
            _ => 64,
        };
        TruncationPolicy { max_level, ..Default::default() }
    }
}

/// Starting level `⌈4 r⁻² + |x₀|²⌉` for a function living on `B(x₀, r)`.
pub fn initial_level(center: &[f64], r: f64) -> u64 {
    (4.0 / (r * r) + center.iter().map(|c| c * c).sum::<f64>()).ceil() as u64
}

#[derive(Clone, Debug)]
pub struct ConvergedCoefficients {
    pub coeffs: CoeffVector,
    pub hardy: HardySum,
    pub profile: BlockProfile,
}

/// Extends the table block by block until the last block carries less than the policy's
/// tolerance of the running sum, starting from the block of `start_level`.
pub fn converged_coefficients(
    f: &dyn SupportedFunction,
    p: f64,
    r: f64,
    atom_order: Option<u32>,
    start_level: u64,
    policy: &TruncationPolicy,
    exponent: Exponent,
) -> Result<ConvergedCoefficients> {
    check_p(p)?;
    let n = f.dim();
    let block_end = |j: i32| block_level_range(n, j).map(|r| *r.end()).unwrap_or(0);
    let first_block = block_of_level(n, start_level.min(policy.max_level));
    let mut try_block = first_block;
    loop {
        let level = block_end(try_block).min(policy.max_level);
        let coeffs = coefficients(f, level)?;
        let full = profile_with(&coeffs, p, r, atom_order, exponent)?;
        let mut running = Vec::new();
        let mut hit = None;
        for rec in &full.records {
            running.push(rec.block_sum);
            if rec.j >= first_block {
                let total = pairwise_sum(&running);
                if total > 0.0 && rec.block_sum / total < policy.tail_tolerance {
                    hit = Some(rec.j);
                    break;
                }
            }
        }
        let at_cap = level >= policy.max_level;
        if hit.is_some() || at_cap {
            let cut = hit.map(block_end).unwrap_or(level).min(level);
            let coeffs = coeffs.truncated(cut);
            let profile = profile_with(&coeffs, p, r, atom_order, exponent)?;
            let mut hardy = HardySum::from_profile(&profile);
            hardy.converged = hardy.tail_fraction < policy.tail_tolerance;
            return Ok(ConvergedCoefficients { coeffs, hardy, profile });
        }
        try_block += policy.growth_blocks.max(1);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atoms::{make_plm_atom, PlmAtomParams};
    use crate::function::HermiteFunction;

    #[test]
    fn sigma_values() {
        assert_eq!(sigma(1, 1.0), 0.75);
        assert_eq!(sigma(2, 0.5), 2.25);
    }

    #[test]
    fn coefficients_of_ground_state() {
        let f = HermiteFunction { mu: MultiIndex::new(&[0]), region: crate::quadrature::BoxRegion::cube(vec![0.0], 8.0).unwrap() };
        let c = coefficients(&f, 4).unwrap();
        assert!((c.values()[0] - 1.0).abs() < 1e-9);
        for v in &c.values()[1..] {
            assert!(v.abs() < 1e-9);
        }
    }

    #[test]
    fn coefficients_of_tensor_eigenfunction() {
        let f = HermiteFunction {
            mu: MultiIndex::new(&[1, 1]),
            region: crate::quadrature::BoxRegion::cube(vec![0.0, 0.0], 8.0).unwrap(),
        };
        let c = coefficients(&f, 3).unwrap();
        for (mu, v) in c.iter() {
            let want = if mu == MultiIndex::new(&[1, 1]) { 1.0 } else { 0.0 };
            assert!((v - want).abs() < 1e-9, "mu={mu} v={v}");
        }
        assert_eq!(c.get(&MultiIndex::new(&[1, 1])), Some(c.level(2)[1]));
    }

    #[test]
    fn tensor_kernel_matches_sweep_in_one_dimension() {
        let atom = make_plm_atom(&PlmAtomParams::new(1.0, 1, vec![0.7], 0.5)).unwrap();
        let f = atom.atom_function();
        let rule = basis_rule(&f, 60).unwrap();
        let w = rule.weighted_values(|x| f.eval(x)).unwrap();
        let a = sweep_1d(&rule.axes[0].nodes, &w, 60);
        let b = contract_tensor(&rule, &w, 60);
        assert_eq!(a, b);
    }

    #[test]
    fn plancherel_examples() {
        let f2 = HermiteFunction::truncated(MultiIndex::new(&[2]));
        let c = coefficients(&f2, 6).unwrap();
        assert!(plancherel_defect(&f2, &c).unwrap().abs() < 1e-9);

        let f5 = HermiteFunction::truncated(MultiIndex::new(&[5]));
        let c = coefficients(&f5, 4).unwrap();
        assert!((plancherel_defect(&f5, &c).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn hardy_sum_of_single_eigenfunction() {
        let f = HermiteFunction::truncated(MultiIndex::new(&[0]));
        let c = coefficients(&f, 8).unwrap();
        let h = hardy_sum(&c, 1.0).unwrap();
        assert_eq!(h.sigma, 0.75);
        assert!((h.value - 1.0).abs() < 1e-8);

        let f = HermiteFunction::truncated(MultiIndex::new(&[3]));
        let c = coefficients(&f, 8).unwrap();
        let h = hardy_sum(&c, 1.0).unwrap();
        assert!((h.value - 7f64.powf(-0.75)).abs() < 1e-8);
        let prof = block_profile(&c, 1.0, 1.0, None).unwrap();
        let nonzero = prof.records.iter().filter(|r| r.block_sum > 1e-6).count();
        assert_eq!(nonzero, 1);
    }

    #[test]
    fn profile_partitions_the_sum() {
        let atom = make_plm_atom(&PlmAtomParams::new(0.5, 1, vec![2.0], 0.25)).unwrap();
        let c = coefficients(&atom.atom_function(), 300).unwrap();
        let prof = block_profile(&c, 0.5, 0.25, Some(1)).unwrap();
        assert_eq!(prof.total(), hardy_sum(&c, 0.5).unwrap().value);
        assert_eq!(prof.records.iter().map(|r| r.cardinality).sum::<u64>(), 301);
        assert!(prof.worst_holder_excess() <= 1e-12);
        for r in &prof.records {
            assert_eq!(r.side == Side::I, 2f64.powi(r.j) * 0.0625 >= 1.0);
            assert_eq!(r.normalized_i.is_some(), r.side == Side::I);
            assert_eq!(r.normalized_ii.is_some(), r.side == Side::II);
        }
    }

    #[test]
    fn bad_p_is_rejected() {
        let f = HermiteFunction::truncated(MultiIndex::new(&[0]));
        let c = coefficients(&f, 2).unwrap();
        assert!(hardy_sum(&c, 0.0).unwrap_err().is_config());
        assert!(hardy_sum(&c, 1.2).unwrap_err().is_config());
    }

    #[test]
    fn two_dimensional_atom_coefficients_pull_through() {
        let atom = make_plm_atom(&PlmAtomParams::new(1.0, 2, vec![0.3, -0.2], 0.6)).unwrap();
        let ca = coefficients(&atom.atom_function(), 12).unwrap();
        let cb = coefficients(&atom.b_function(), 12).unwrap();
        let scale = ca.values().iter().fold(0f64, |m, v| m.max(v.abs()));
        for ((mu, a), b) in ca.iter().zip(cb.values()) {
            let lam = mu.eigenvalue() as f64;
            assert!((a - lam * lam * b).abs() <= 1e-9 * scale, "mu={mu}");
        }
    }
}
