//! Derivative-free maximisation of `Delta` and bisection threshold scans.
//!
//! Every candidate operator `S = sum_s u_s J_s` is evaluated through the
//! precomputed sandwiches `R_s = sqrt(rho) J_s conj(sqrt(rho))`, so one
//! objective call costs a linear combination and one singular value sweep.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bipartite::{
    all_subsets, bipartite_generators_for, wootters_gap, CoefficientVector, PreparedState,
    SubsetSelector,
};
use crate::error::{Error, Result};
use crate::generators::{
    tripartite_generators, ExampleFamily, GeneratorSet, OperatorTriples, TripartiteSplit,
};
use crate::multipartite::{observation2_bound, observation3_bound, TripleCoefficients};
use crate::numerics::{singular_values, CMatrix, C64, ZERO};
use crate::report::BoundReport;
use crate::states::DensityMatrix;

/// Which subsets `t` an aggregate bound visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubsetStrategy {
    Exhaustive,
    /// Only subsets drawn from the `j` best single generators.
    TopSingletons(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub iterations: usize,
    pub seed: u64,
    pub initial_step: f64,
    pub final_step: f64,
    pub subsets: SubsetStrategy,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            iterations: 200,
            seed: 0x00c0_ffee_5eed,
            initial_step: 0.5,
            final_step: 1e-4,
            subsets: SubsetStrategy::Exhaustive,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts < 1 {
            return Err(Error::InvalidConfig("restarts must be >= 1".into()));
        }
        if self.iterations < 1 {
            return Err(Error::InvalidConfig("iterations must be >= 1".into()));
        }
        let ok = self.initial_step.is_finite()
            && self.final_step.is_finite()
            && self.final_step > 0.0
            && self.final_step <= self.initial_step;
        if !ok {
            return Err(Error::InvalidConfig(
                "steps must satisfy 0 < final_step <= initial_step".into(),
            ));
        }
        if let SubsetStrategy::TopSingletons(0) = self.subsets {
            return Err(Error::InvalidConfig("top_singletons needs j >= 1".into()));
        }
        Ok(())
    }

    fn step(&self, iteration: usize) -> f64 {
        if self.iterations == 1 {
            return self.initial_step;
        }
        let frac = iteration as f64 / (self.iterations - 1) as f64;
        self.initial_step * (self.final_step / self.initial_step).powf(frac)
    }
}

/// Outcome of one coefficient search.
#[derive(Debug, Clone, PartialEq)]
pub struct Optimum {
    pub coefficients: Vec<C64>,
    /// `max(0, gap)` at `coefficients`.
    pub delta: f64,
    /// Best gap seen after each restart; nondecreasing.
    pub trace: Vec<f64>,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Order-independent stream id for a subset (and optional split tag).
fn stream_id(tag: u64, indices: &[usize]) -> u64 {
    indices
        .iter()
        .fold(splitmix64(tag), |h, &i| splitmix64(h ^ i as u64))
}

fn restart_seed(seed: u64, stream: u64, restart: usize) -> u64 {
    seed ^ splitmix64(stream ^ splitmix64(restart as u64))
}

fn from_params(params: &[f64], out: &mut [C64]) {
    let n = out.len();
    for (s, z) in out.iter_mut().enumerate() {
        *z = C64::from_polar(params[s], params[n + s]);
    }
}

/// Maximise `objective` over `n` complex weights `r e^{i theta}`, `r in [0, 1]`.
///
/// Restart 0 starts from all weights equal to 1; the rest start at seeded
/// random points. Each restart then runs coordinate descent on `(r, theta)`
/// with the geometric step schedule of `cfg`.
fn maximize(
    n: usize,
    cfg: &OptimizerConfig,
    stream: u64,
    objective: &mut dyn FnMut(&[C64]) -> Result<f64>,
) -> Result<(Vec<C64>, f64, Vec<f64>)> {
    cfg.validate()?;
    let mut weights = alloc::vec![ZERO; n];
    let mut best_params: Vec<f64> = Vec::new();
    let mut best_value = f64::NEG_INFINITY;
    let mut trace = Vec::with_capacity(cfg.restarts);
    for restart in 0..cfg.restarts {
        let mut params = alloc::vec![0.0; 2 * n];
        if restart == 0 {
            params[..n].fill(1.0);
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(restart_seed(cfg.seed, stream, restart));
            for s in 0..n {
                params[s] = rng.random_range(0.0..=1.0);
                params[n + s] = rng.random_range(0.0..TAU);
            }
        }
        from_params(&params, &mut weights);
        let mut value = objective(&weights)?;
        for it in 0..cfg.iterations {
            let step = cfg.step(it);
            for c in 0..2 * n {
                let delta = if c < n { step } else { step * PI };
                for dir in [1.0, -1.0] {
                    let old = params[c];
                    let mut cand = old + dir * delta;
                    if c < n {
                        cand = cand.clamp(0.0, 1.0);
                    } else {
                        cand = num_traits::Euclid::rem_euclid(&cand, &TAU);
                    }
                    if cand == old {
                        continue;
                    }
                    params[c] = cand;
                    from_params(&params, &mut weights);
                    let v = objective(&weights)?;
                    if v > value {
                        value = v;
                        break;
                    }
                    params[c] = old;
                }
            }
        }
        if value > best_value {
            best_value = value;
            best_params = params;
        }
        trace.push(best_value);
    }
    from_params(&best_params, &mut weights);
    Ok((weights, best_value, trace))
}

/// Rescale so that `max_s |u_s| = 1`; valid because the gap is homogeneous of degree one.
fn rescale_to_unit_max(weights: &mut [C64]) {
    let m = weights.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if m > 0.0 {
        for z in weights.iter_mut() {
            *z /= m;
        }
    }
}

fn combine(sandwiches: &[CMatrix], weights: &[C64]) -> CMatrix {
    let d = sandwiches[0].rows();
    let mut r = CMatrix::zeros(d, d);
    for (rs, &w) in sandwiches.iter().zip(weights) {
        r.axpy(w, rs);
    }
    r
}

fn gap_of(sandwiches: &[CMatrix], weights: &[C64]) -> Result<f64> {
    Ok(wootters_gap(&singular_values(&combine(sandwiches, weights))?))
}

/// Search over the weights of a fixed set of sandwiched operators.
fn optimize_sandwiches(sandwiches: &[CMatrix], cfg: &OptimizerConfig, stream: u64) -> Result<Optimum> {
    let mut objective = |w: &[C64]| gap_of(sandwiches, w);
    let (mut weights, value, trace) = maximize(sandwiches.len(), cfg, stream, &mut objective)?;
    if value > 0.0 {
        rescale_to_unit_max(&mut weights);
    }
    let delta = gap_of(sandwiches, &weights)?.max(value).max(0.0);
    Ok(Optimum {
        coefficients: weights,
        delta,
        trace,
    })
}

/// Best `u` for `Delta_k(rho, t, u)`.
pub fn optimize_u(
    rho: &DensityMatrix,
    gens: &GeneratorSet,
    t: &SubsetSelector,
    cfg: &OptimizerConfig,
) -> Result<Optimum> {
    let prepared = PreparedState::new(rho)?;
    optimize_u_prepared(&prepared, gens, t, cfg, 0)
}

fn optimize_u_prepared(
    prepared: &PreparedState,
    gens: &GeneratorSet,
    t: &SubsetSelector,
    cfg: &OptimizerConfig,
    tag: u64,
) -> Result<Optimum> {
    check_subset(t, gens.len())?;
    if gens.dim() != prepared.dim() {
        return Err(Error::DimensionMismatch {
            expected: gens.dim(),
            found: prepared.dim(),
        });
    }
    let sandwiches: Vec<CMatrix> = t
        .indices()
        .iter()
        .map(|&i| prepared.sandwich(gens.operator(i)))
        .collect();
    optimize_sandwiches(&sandwiches, cfg, stream_id(tag, t.indices()))
}

fn check_subset(t: &SubsetSelector, n: usize) -> Result<()> {
    match t.indices().last() {
        Some(&last) if last < n => Ok(()),
        _ => Err(Error::BadSubset(alloc::format!("{:?} outside N = {n}", t.indices()))),
    }
}

/// Subsets to visit, given per-generator singleton scores for `TopSingletons`.
fn select_subsets(
    n: usize,
    k: usize,
    cfg: &OptimizerConfig,
    mut singleton_score: impl FnMut(usize) -> Result<f64>,
) -> Result<Vec<SubsetSelector>> {
    match cfg.subsets {
        SubsetStrategy::Exhaustive => Ok(all_subsets(n, k)),
        SubsetStrategy::TopSingletons(j) => {
            let j = j.min(n);
            if j < k {
                return Err(Error::InvalidConfig(alloc::format!(
                    "top_singletons({j}) cannot hold subsets of size {k}"
                )));
            }
            let mut scored = Vec::with_capacity(n);
            for t in 0..n {
                scored.push((singleton_score(t)?, t));
            }
            scored.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
            let mut keep: Vec<usize> = scored[..j].iter().map(|&(_, t)| t).collect();
            keep.sort_unstable();
            all_subsets(j, k)
                .into_iter()
                .map(|s| SubsetSelector::new(s.indices().iter().map(|&i| keep[i]).collect(), n))
                .collect()
        }
    }
}

/// Optimised bipartite aggregate using the canonical generators of `rho`'s two factors.
pub fn optimize_bound_bipartite(rho: &DensityMatrix, k: usize, cfg: &OptimizerConfig) -> Result<BoundReport> {
    let gens = bipartite_generators_for(rho)?;
    optimize_bound_with(rho, &gens, k, cfg)
}

/// Optimised bipartite aggregate for an explicit generator set.
pub fn optimize_bound_with(
    rho: &DensityMatrix,
    gens: &GeneratorSet,
    k: usize,
    cfg: &OptimizerConfig,
) -> Result<BoundReport> {
    optimize_bound_tagged(rho, gens, k, cfg, 0)
}

fn optimize_bound_tagged(
    rho: &DensityMatrix,
    gens: &GeneratorSet,
    k: usize,
    cfg: &OptimizerConfig,
    tag: u64,
) -> Result<BoundReport> {
    cfg.validate()?;
    let n = gens.len();
    if k < 1 || k > n {
        return Err(Error::BadK { k, n });
    }
    let assignments = optimize_assignments(rho, gens, k, cfg, tag)?;
    let mut report = crate::bipartite::observation1_bound(rho, gens, k, &assignments)?;
    report.config = Some(cfg.clone());
    Ok(report)
}

fn optimize_assignments(
    rho: &DensityMatrix,
    gens: &GeneratorSet,
    k: usize,
    cfg: &OptimizerConfig,
    tag: u64,
) -> Result<BTreeMap<SubsetSelector, CoefficientVector>> {
    let prepared = PreparedState::new(rho)?;
    let subsets = select_subsets(gens.len(), k, cfg, |t| {
        let s = prepared.sandwich(gens.operator(t));
        gap_of(core::slice::from_ref(&s), &[C64::new(1.0, 0.0)])
    })?;
    let mut assignments = BTreeMap::new();
    for t in subsets {
        let best = optimize_u_prepared(&prepared, gens, &t, cfg, tag)?;
        assignments.insert(t, CoefficientVector::new(best.coefficients)?);
    }
    Ok(assignments)
}

/// Operators used by the joint tripartite bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TripleSource {
    Canonical,
    Example(ExampleFamily),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MultipartiteMode {
    /// One joint operator per subset, mixing all three splits.
    Joint(TripleSource),
    /// The three bipartite aggregates, halved.
    Splits,
}

/// Optimised tripartite bound on `C_tau^2`.
pub fn optimize_bound_multipartite(
    rho: &DensityMatrix,
    k: usize,
    cfg: &OptimizerConfig,
    mode: MultipartiteMode,
) -> Result<BoundReport> {
    cfg.validate()?;
    let dims = rho.dims();
    if dims.len() != 3 {
        return Err(Error::WrongArity {
            expected: 3,
            found: dims.len(),
        });
    }
    if dims[1] != dims[0] || dims[2] != dims[0] {
        return Err(Error::WrongDims);
    }
    let d = dims[0];
    let mut report = match mode {
        MultipartiteMode::Splits => {
            let mut all = BTreeMap::new();
            for split in TripartiteSplit::ALL {
                let gens = tripartite_generators(d, split)?;
                if k < 1 || k > gens.len() {
                    return Err(Error::BadK { k, n: gens.len() });
                }
                let tag = split.party() as u64 + 1;
                for (t, u) in optimize_assignments(rho, &gens, k, cfg, tag)? {
                    all.insert((split, t), u);
                }
            }
            observation3_bound(rho, k, &all)?
        }
        MultipartiteMode::Joint(source) => {
            let triples = match source {
                TripleSource::Canonical => OperatorTriples::canonical(d)?,
                TripleSource::Example(family) => OperatorTriples::example(family),
            };
            if triples.dim() != rho.dim() {
                return Err(Error::DimensionMismatch {
                    expected: triples.dim(),
                    found: rho.dim(),
                });
            }
            let n = triples.len();
            if k < 1 || k > n {
                return Err(Error::BadK { k, n });
            }
            let prepared = PreparedState::new(rho)?;
            let sandwich_triple = |t: usize| -> [CMatrix; 3] {
                let [a, b, c] = triples.triple(t);
                [prepared.sandwich(a), prepared.sandwich(b), prepared.sandwich(c)]
            };
            let single_cfg = cfg.clone();
            let subsets = select_subsets(n, k, cfg, |t| {
                let s = sandwich_triple(t);
                Ok(optimize_sandwiches(&s, &single_cfg, stream_id(7, &[t]))?.delta)
            })?;
            let mut assignments = BTreeMap::new();
            for t in subsets {
                // Layout: all u weights, then all v, then all w.
                let mut sandwiches: Vec<CMatrix> = Vec::with_capacity(3 * k);
                let per: Vec<[CMatrix; 3]> = t.indices().iter().map(|&i| sandwich_triple(i)).collect();
                for part in 0..3 {
                    sandwiches.extend(per.iter().map(|tr| tr[part].clone()));
                }
                let best = optimize_sandwiches(&sandwiches, cfg, stream_id(4, t.indices()))?;
                let c = best.coefficients;
                let x = TripleCoefficients::new(
                    CoefficientVector::new(c[..k].to_vec())?,
                    CoefficientVector::new(c[k..2 * k].to_vec())?,
                    CoefficientVector::new(c[2 * k..].to_vec())?,
                )?;
                assignments.insert(t, x);
            }
            observation2_bound(rho, &triples, k, &assignments)?
        }
    };
    report.config = Some(cfg.clone());
    Ok(report)
}

/// Best `Delta` over all `N` generators with `sum |u_t|^2 = 1`; a bound on `C` itself.
pub fn optimize_total(rho: &DensityMatrix, gens: &GeneratorSet, cfg: &OptimizerConfig) -> Result<Optimum> {
    if gens.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: gens.dim(),
            found: rho.dim(),
        });
    }
    let prepared = PreparedState::new(rho)?;
    let sandwiches: Vec<CMatrix> = gens.operators().iter().map(|j| prepared.sandwich(j)).collect();
    let norm = |w: &[C64]| w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let mut objective = |w: &[C64]| -> Result<f64> {
        let nrm = norm(w);
        if nrm == 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        Ok(gap_of(&sandwiches, w)? / nrm)
    };
    let (mut weights, _, trace) = maximize(sandwiches.len(), cfg, stream_id(9, &[]), &mut objective)?;
    let nrm = norm(&weights);
    for z in weights.iter_mut() {
        *z /= nrm;
    }
    let delta = crate::bipartite::delta_total_bound(rho, gens, &weights)?;
    Ok(Optimum {
        coefficients: weights,
        delta,
        trace,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    /// Midpoint of the final bracket.
    pub threshold: f64,
    pub bracket_width: f64,
    /// Largest `p` seen undetected.
    pub lower: f64,
    /// Smallest `p` seen detected.
    pub upper: f64,
    /// `(p, detector value)` in evaluation order.
    pub evaluations: Vec<(f64, f64)>,
}

/// Bisection for the smallest `p` at which `detector` exceeds `tol_detect`.
///
/// Detection is assumed monotone in `p`; the bracket `[lower, upper]` always
/// has an undetected lower end and a detected upper end.
// Negated comparisons so that NaN arguments are rejected too.
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn threshold_scan(
    mut family: impl FnMut(f64) -> Result<DensityMatrix>,
    mut detector: impl FnMut(&DensityMatrix) -> Result<f64>,
    p_lo: f64,
    p_hi: f64,
    tol_p: f64,
    tol_detect: f64,
) -> Result<ScanResult> {
    if !(p_lo < p_hi) {
        return Err(Error::OutOfRange {
            name: "p_lo",
            value: p_lo,
            lo: f64::NEG_INFINITY,
            hi: p_hi,
        });
    }
    if !(tol_p > 0.0) {
        return Err(Error::OutOfRange {
            name: "tol_p",
            value: tol_p,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    let mut evaluations = Vec::new();
    let mut eval = |p: f64, evaluations: &mut Vec<(f64, f64)>| -> Result<f64> {
        let v = detector(&family(p)?)?;
        evaluations.push((p, v));
        Ok(v)
    };
    let v_hi = eval(p_hi, &mut evaluations)?;
    if !(v_hi > tol_detect) {
        return Err(Error::NotDetectedAtUpperEnd { p: p_hi, value: v_hi });
    }
    let v_lo = eval(p_lo, &mut evaluations)?;
    if v_lo > tol_detect {
        return Err(Error::DetectedAtLowerEnd { p: p_lo, value: v_lo });
    }
    let (mut lo, mut hi) = (p_lo, p_hi);
    while hi - lo > tol_p {
        let mid = 0.5 * (lo + hi);
        if eval(mid, &mut evaluations)? > tol_detect {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(ScanResult {
        threshold: 0.5 * (lo + hi),
        bracket_width: hi - lo,
        lower: lo,
        upper: hi,
        evaluations,
    })
}
