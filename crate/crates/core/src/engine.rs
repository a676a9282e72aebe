//! Monte Carlo simulation of the two-stage vote.
//!
//! Reproducibility contract: a run is a pure function of (seed, samples).
//! Every sample owns a counter-derived RNG stream keyed by its global index,
//! so chunking and thread count never change which numbers are drawn.
//! Estimates are folded in global sample order (capped runs fold fixed
//! 4096-sample block sums in global block order), so the floating-point
//! results are bit-identical across schedules as well.

use std::error::Error;
use std::fmt;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analytics::{asymptotic_objectives, cosine, rho, AnalyticsError};
use crate::model::{
    eval_rule_unchecked, materialize_weights, LimitDist, MarginDistribution, ModelError,
    RepresentationRule, Society, WeightAllocation,
};
use crate::stats::{CdfSketch, EmpiricalWelfare, SampleMeta, SkewNormal, SKETCH_BINS};
use crate::streams::{aux_rng, sample_rng};

/// Default number of samples per parallel work unit.
pub const DEFAULT_CHUNK_SIZE: u64 = 65_536;

/// Default retention cap: runs beyond this keep sketches and streaming
/// moments instead of per-sample arrays.
pub const DEFAULT_SAMPLE_CAP: u64 = 10_000_000;

/// Relative tie threshold for continuous margins: |T| < this times the
/// weight total counts as a tie.
pub const CONTINUOUS_TIE_REL: f64 = 1e-12;

/// Accumulation block for capped runs; block boundaries sit at fixed global
/// sample indices so partial sums are independent of chunking.
const BLOCK: u64 = 4096;

/// Sketch support; normalized welfare beyond +-16 is clamped into the edge
/// bins (|W| <= |S|/sigma, which concentrates near [-4, 4] already).
const SKETCH_RANGE: f64 = 16.0;

/// Aux-stream tag namespace for convergence-sweep size draws.
const SWEEP_TAG_BASE: u64 = 1 << 32;

#[derive(Debug, Clone, PartialEq)]
pub enum EngineError {
    Model(ModelError),
    Analytics(AnalyticsError),
    ZeroSamples,
    ZeroChunk,
    EmptySweep,
    UnsortedSweep,
}

impl fmt::Display for EngineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EngineError::Model(e) => write!(f, "{e}"),
            EngineError::Analytics(e) => write!(f, "{e}"),
            EngineError::ZeroSamples => write!(f, "samples must be at least 1"),
            EngineError::ZeroChunk => write!(f, "chunk size must be at least 1"),
            EngineError::EmptySweep => write!(f, "convergence sweep needs at least one n"),
            EngineError::UnsortedSweep => write!(f, "convergence sweep sizes must be ascending"),
        }
    }
}

impl Error for EngineError {}

impl From<ModelError> for EngineError {
    fn from(e: ModelError) -> Self {
        EngineError::Model(e)
    }
}

impl From<AnalyticsError> for EngineError {
    fn from(e: AnalyticsError) -> Self {
        EngineError::Analytics(e)
    }
}

/// Complete description of one simulation run.
#[derive(Debug, Clone)]
pub struct SimulationSpec {
    pub society: Society,
    pub alloc: WeightAllocation,
    pub rule: RepresentationRule,
    pub margin: MarginDistribution,
    pub samples: u64,
    pub seed: u64,
    /// Samples per parallel work unit; affects scheduling only, never results.
    pub chunk_size: u64,
    /// Largest run that retains per-sample arrays.
    pub sample_cap: u64,
}

impl SimulationSpec {
    pub fn new(
        society: Society,
        alloc: WeightAllocation,
        rule: RepresentationRule,
        margin: MarginDistribution,
        samples: u64,
        seed: u64,
    ) -> Self {
        Self {
            society,
            alloc,
            rule,
            margin,
            samples,
            seed,
            chunk_size: DEFAULT_CHUNK_SIZE,
            sample_cap: DEFAULT_SAMPLE_CAP,
        }
    }
}

/// How a weighted tally of zero is recognized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TieTest {
    /// T == 0 exactly (discrete margins).
    Exact,
    /// |T| below an absolute threshold (continuous margins).
    Threshold(f64),
}

impl TieTest {
    #[inline]
    fn is_tie(self, t: f64) -> bool {
        match self {
            TieTest::Exact => t == 0.0,
            TieTest::Threshold(eps) => t.abs() < eps,
        }
    }
}

/// Realized welfare (or margin) sample, either in full or as a sketch when
/// the run exceeded the retention cap.
#[derive(Debug, Clone)]
pub enum WelfareDistribution {
    Samples(EmpiricalWelfare),
    Sketch(CdfSketch),
}

impl WelfareDistribution {
    /// KS distance to a reference CDF, evaluated pointwise.
    pub fn ks_distance<F: Fn(f64) -> f64>(&self, reference: F) -> f64 {
        match self {
            WelfareDistribution::Samples(emp) => crate::stats::ks_distance(emp, reference),
            WelfareDistribution::Sketch(sketch) => sketch.ks_distance(reference),
        }
    }

    /// KS distance to a skew normal, using the incremental batch CDF over
    /// sorted evaluation points.
    pub fn ks_distance_to_sn(&self, sn: &SkewNormal) -> f64 {
        match self {
            WelfareDistribution::Samples(emp) => {
                let refs = sn.cdf_at_sorted(emp.samples());
                crate::stats::ks_distance_precomputed(emp.samples(), &refs)
            }
            WelfareDistribution::Sketch(sketch) => sketch.ks_distance(|x| sn.cdf(x)),
        }
    }

    /// The retained empirical sample, when below the cap.
    pub fn as_empirical(&self) -> Option<&EmpiricalWelfare> {
        match self {
            WelfareDistribution::Samples(emp) => Some(emp),
            WelfareDistribution::Sketch(_) => None,
        }
    }
}

/// Standard errors of the three estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StdErrors {
    pub u: f64,
    pub delta: f64,
    pub p: f64,
}

/// Point estimates with their standard errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimates {
    pub u_hat: f64,
    pub delta_hat: f64,
    pub p_hat: f64,
    pub std_errors: StdErrors,
}

/// Output of one simulation run.
#[derive(Debug, Clone)]
pub struct SimulationResult {
    /// Welfare W, sorted (or sketched beyond the cap).
    pub welfare: WelfareDistribution,
    /// Normalized margin S/sigma, sorted (or sketched).
    pub s_norm: WelfareDistribution,
    /// Welfare in sample order; empty beyond the cap.
    pub welfare_ordered: Vec<f64>,
    /// S/sigma in sample order, aligned with `welfare_ordered`.
    pub s_norm_ordered: Vec<f64>,
    pub u_hat: f64,
    pub delta_hat: f64,
    pub p_hat: f64,
    pub std_errors: StdErrors,
    pub tie_count: u64,
    pub sigma: f64,
    pub samples: u64,
    pub seed: u64,
    /// Which model produced the run: correlated, intensity, or independent.
    pub model: &'static str,
}

/// One sample draw for a specific model: produces (S, T) from the sample's
/// stream, consuming draws in a fixed order.
pub(crate) trait SampleKernel: Sync {
    fn s_and_t(&self, rng: &mut ChaCha8Rng, negate: bool) -> (f64, f64);
}

struct CorrelatedKernel<'a> {
    sizes: &'a [f64],
    weights: &'a [f64],
    rule: &'a RepresentationRule,
    margin: &'a MarginDistribution,
}

impl SampleKernel for CorrelatedKernel<'_> {
    #[inline]
    fn s_and_t(&self, rng: &mut ChaCha8Rng, negate: bool) -> (f64, f64) {
        let mut s = 0.0;
        let mut t = 0.0;
        for (&size, &weight) in self.sizes.iter().zip(self.weights) {
            let mut x = self.margin.sample(rng);
            if negate {
                x = -x;
            }
            s += size * x;
            t += weight * eval_rule_unchecked(self.rule, x);
        }
        (s, t)
    }
}

/// Scheduling-independent run parameters shared by all models.
pub(crate) struct RunParams {
    pub samples: u64,
    pub seed: u64,
    pub chunk_size: u64,
    pub sample_cap: u64,
    pub sigma: f64,
    pub tie: TieTest,
    pub negate: bool,
    pub model: &'static str,
}

/// Draws one sample's decision and welfare.
///
/// The tie coin comes from the same stream, after the kernel's draws; in a
/// negated (antithetic) pass the coin is flipped along with the margins so
/// that welfare is unchanged bit-for-bit.
#[inline]
fn draw_sample<K: SampleKernel>(
    kernel: &K,
    params: &RunParams,
    index: u64,
) -> (f64, f64, bool) {
    let mut rng = sample_rng(params.seed, index);
    let (s, t) = kernel.s_and_t(&mut rng, params.negate);
    let tie = params.tie.is_tie(t);
    let d = if tie {
        let mut coin = if rng.gen::<bool>() { 1.0 } else { -1.0 };
        if params.negate {
            coin = -coin;
        }
        coin
    } else if t > 0.0 {
        1.0
    } else {
        -1.0
    };
    let s_norm = s / params.sigma;
    let mut w = d * s_norm;
    // Canonicalize so a coin flip on a zero margin cannot leak -0.0.
    if w == 0.0 {
        w = 0.0;
    }
    (w, s_norm, tie)
}

pub(crate) fn run_kernel<K: SampleKernel>(kernel: &K, params: &RunParams) -> SimulationResult {
    if params.samples <= params.sample_cap {
        run_retained(kernel, params)
    } else {
        run_capped(kernel, params)
    }
}

fn chunk_ranges(samples: u64, chunk_size: u64) -> Vec<(u64, u64)> {
    let mut ranges = Vec::new();
    let mut start = 0;
    while start < samples {
        let end = (start + chunk_size).min(samples);
        ranges.push((start, end));
        start = end;
    }
    ranges
}

fn run_retained<K: SampleKernel>(kernel: &K, params: &RunParams) -> SimulationResult {
    let ranges = chunk_ranges(params.samples, params.chunk_size);
    let chunks: Vec<(Vec<f64>, Vec<f64>, u64)> = ranges
        .into_par_iter()
        .map(|(start, end)| {
            let len = (end - start) as usize;
            let mut w = Vec::with_capacity(len);
            let mut s_norm = Vec::with_capacity(len);
            let mut ties = 0u64;
            for index in start..end {
                let (wi, si, tie) = draw_sample(kernel, params, index);
                w.push(wi);
                s_norm.push(si);
                ties += tie as u64;
            }
            (w, s_norm, ties)
        })
        .collect();

    let m = params.samples as usize;
    let mut welfare_ordered = Vec::with_capacity(m);
    let mut s_norm_ordered = Vec::with_capacity(m);
    let mut tie_count = 0;
    for (w, s, ties) in chunks {
        welfare_ordered.extend_from_slice(&w);
        s_norm_ordered.extend_from_slice(&s);
        tie_count += ties;
    }

    let est = estimates_from_arrays(&welfare_ordered, &s_norm_ordered);
    let meta = |kind: &str| SampleMeta {
        count: m,
        seed: params.seed,
        model: format!("{} {kind}", params.model),
    };
    let welfare =
        EmpiricalWelfare::from_samples(welfare_ordered.clone(), meta("welfare")).expect("nonempty");
    let s_norm =
        EmpiricalWelfare::from_samples(s_norm_ordered.clone(), meta("s_norm")).expect("nonempty");

    SimulationResult {
        welfare: WelfareDistribution::Samples(welfare),
        s_norm: WelfareDistribution::Samples(s_norm),
        welfare_ordered,
        s_norm_ordered,
        u_hat: est.u_hat,
        delta_hat: est.delta_hat,
        p_hat: est.p_hat,
        std_errors: est.std_errors,
        tie_count,
        sigma: params.sigma,
        samples: params.samples,
        seed: params.seed,
        model: params.model,
    }
}

/// Streaming accumulator for one chunk of a capped run: per-block partial
/// sums (block boundaries at fixed global indices) plus exact counters.
struct StreamChunk {
    sum_w: Vec<f64>,
    sum_w2: Vec<f64>,
    sum_abs: Vec<f64>,
    sum_d: Vec<f64>,
    sum_d2: Vec<f64>,
    negatives: u64,
    ties: u64,
    sketch_w: CdfSketch,
    sketch_s: CdfSketch,
}

fn run_capped<K: SampleKernel>(kernel: &K, params: &RunParams) -> SimulationResult {
    // Chunks are forced to block multiples so every 4096-sample block lies
    // inside one chunk; the work-unit size itself can then be raised freely
    // without changing any partial sum.
    let chunk = params.chunk_size.max(1 << 20).div_ceil(BLOCK) * BLOCK;
    let ranges = chunk_ranges(params.samples, chunk);

    let chunks: Vec<StreamChunk> = ranges
        .into_par_iter()
        .map(|(start, end)| {
            let blocks = ((end - start).div_ceil(BLOCK)) as usize;
            let mut out = StreamChunk {
                sum_w: Vec::with_capacity(blocks),
                sum_w2: Vec::with_capacity(blocks),
                sum_abs: Vec::with_capacity(blocks),
                sum_d: Vec::with_capacity(blocks),
                sum_d2: Vec::with_capacity(blocks),
                negatives: 0,
                ties: 0,
                sketch_w: CdfSketch::new(-SKETCH_RANGE, SKETCH_RANGE, SKETCH_BINS),
                sketch_s: CdfSketch::new(-SKETCH_RANGE, SKETCH_RANGE, SKETCH_BINS),
            };
            let mut block_start = start;
            while block_start < end {
                let block_end = (block_start + BLOCK).min(end);
                let mut bw = 0.0;
                let mut bw2 = 0.0;
                let mut babs = 0.0;
                let mut bd = 0.0;
                let mut bd2 = 0.0;
                for index in block_start..block_end {
                    let (wi, si, tie) = draw_sample(kernel, params, index);
                    bw += wi;
                    bw2 += wi * wi;
                    let abs_s = si.abs();
                    babs += abs_s;
                    let di = (abs_s - wi) / 2.0;
                    bd += di;
                    bd2 += di * di;
                    out.negatives += (wi < 0.0) as u64;
                    out.ties += tie as u64;
                    out.sketch_w.insert(wi);
                    out.sketch_s.insert(si);
                }
                out.sum_w.push(bw);
                out.sum_w2.push(bw2);
                out.sum_abs.push(babs);
                out.sum_d.push(bd);
                out.sum_d2.push(bd2);
                block_start = block_end;
            }
            out
        })
        .collect();

    let fold = |pick: fn(&StreamChunk) -> &Vec<f64>| -> f64 {
        let mut acc = 0.0;
        for chunk in &chunks {
            for &block in pick(chunk) {
                acc += block;
            }
        }
        acc
    };
    let sum_w = fold(|c| &c.sum_w);
    let sum_w2 = fold(|c| &c.sum_w2);
    let sum_abs = fold(|c| &c.sum_abs);
    let sum_d = fold(|c| &c.sum_d);
    let sum_d2 = fold(|c| &c.sum_d2);

    let mut negatives = 0;
    let mut tie_count = 0;
    let mut sketch_w = CdfSketch::new(-SKETCH_RANGE, SKETCH_RANGE, SKETCH_BINS);
    let mut sketch_s = CdfSketch::new(-SKETCH_RANGE, SKETCH_RANGE, SKETCH_BINS);
    for chunk in &chunks {
        negatives += chunk.negatives;
        tie_count += chunk.ties;
        sketch_w.merge(&chunk.sketch_w);
        sketch_s.merge(&chunk.sketch_s);
    }

    let m = params.samples as f64;
    let u_hat = sum_w / m;
    let mean_abs = sum_abs / m;
    let delta_hat = (mean_abs - u_hat) / 2.0;
    let p_hat = negatives as f64 / m;
    let std_errors = StdErrors {
        u: se_from_sums(sum_w, sum_w2, params.samples),
        delta: se_from_sums(sum_d, sum_d2, params.samples),
        p: (p_hat * (1.0 - p_hat) / m).sqrt(),
    };

    SimulationResult {
        welfare: WelfareDistribution::Sketch(sketch_w),
        s_norm: WelfareDistribution::Sketch(sketch_s),
        welfare_ordered: Vec::new(),
        s_norm_ordered: Vec::new(),
        u_hat,
        delta_hat,
        p_hat,
        std_errors,
        tie_count,
        sigma: params.sigma,
        samples: params.samples,
        seed: params.seed,
        model: params.model,
    }
}

fn se_from_sums(sum: f64, sum_sq: f64, count: u64) -> f64 {
    if count < 2 {
        return f64::INFINITY;
    }
    let m = count as f64;
    let var = ((sum_sq - sum * sum / m) / (m - 1.0)).max(0.0);
    (var / m).sqrt()
}

fn estimates_from_arrays(w: &[f64], s_norm: &[f64]) -> Estimates {
    let m = w.len() as f64;
    let mut sum_w = 0.0;
    let mut sum_abs = 0.0;
    let mut negatives = 0u64;
    for (&wi, &si) in w.iter().zip(s_norm) {
        sum_w += wi;
        sum_abs += si.abs();
        negatives += (wi < 0.0) as u64;
    }
    let u_hat = sum_w / m;
    let mean_abs = sum_abs / m;
    let delta_hat = (mean_abs - u_hat) / 2.0;
    let p_hat = negatives as f64 / m;

    let (u_se, delta_se) = if w.len() < 2 {
        (f64::INFINITY, f64::INFINITY)
    } else {
        let mut var_w = 0.0;
        let mut var_d = 0.0;
        let mean_d = delta_hat;
        for (&wi, &si) in w.iter().zip(s_norm) {
            let dw = wi - u_hat;
            var_w += dw * dw;
            let dd = (si.abs() - wi) / 2.0 - mean_d;
            var_d += dd * dd;
        }
        let denom = m * (m - 1.0);
        ((var_w / denom).sqrt(), (var_d / denom).sqrt())
    };

    Estimates {
        u_hat,
        delta_hat,
        p_hat,
        std_errors: StdErrors {
            u: u_se,
            delta: delta_se,
            p: (p_hat * (1.0 - p_hat) / m).sqrt(),
        },
    }
}

/// Validated ingredients of a correlated-model run.
struct PreparedSpec {
    sizes: Vec<f64>,
    weights: Vec<f64>,
    sigma: f64,
    tie: TieTest,
}

fn prepare(spec: &SimulationSpec) -> Result<PreparedSpec, EngineError> {
    if spec.samples == 0 {
        return Err(EngineError::ZeroSamples);
    }
    if spec.chunk_size == 0 {
        return Err(EngineError::ZeroChunk);
    }
    let violations = crate::model::validate_rule(&spec.rule);
    if !violations.is_empty() {
        return Err(EngineError::Model(ModelError::InvalidRule(violations)));
    }
    let weights = materialize_weights(&spec.society, &spec.alloc)?;
    let sizes = spec.society.sizes().to_vec();
    let sigma = (spec.margin.second_moment() * spec.society.sum_sq_sizes()).sqrt();
    let tie = if spec.margin.is_discrete() {
        TieTest::Exact
    } else {
        let sum_weights: f64 = weights.iter().sum();
        TieTest::Threshold(CONTINUOUS_TIE_REL * sum_weights)
    };
    Ok(PreparedSpec { sizes, weights, sigma, tie })
}

/// Runs the two-stage vote simulation.
pub fn simulate(spec: &SimulationSpec) -> Result<SimulationResult, EngineError> {
    simulate_inner(spec, false)
}

/// Antithetic pass: identical streams with every margin and tie coin
/// negated. By oddness of the rule the welfare samples are bit-identical to
/// [`simulate`]; the normalized margins are exactly negated.
pub fn simulate_negated(spec: &SimulationSpec) -> Result<SimulationResult, EngineError> {
    simulate_inner(spec, true)
}

fn simulate_inner(spec: &SimulationSpec, negate: bool) -> Result<SimulationResult, EngineError> {
    let prep = prepare(spec)?;
    let kernel = CorrelatedKernel {
        sizes: &prep.sizes,
        weights: &prep.weights,
        rule: &spec.rule,
        margin: &spec.margin,
    };
    let params = RunParams {
        samples: spec.samples,
        seed: spec.seed,
        chunk_size: spec.chunk_size,
        sample_cap: spec.sample_cap,
        sigma: prep.sigma,
        tie: prep.tie,
        negate,
        model: "correlated",
    };
    Ok(run_kernel(&kernel, &params))
}

/// Recomputes the three estimates from the retained per-sample arrays; for
/// capped runs the stored streaming estimates are returned unchanged.
pub fn estimate_objectives(result: &SimulationResult) -> Estimates {
    if result.welfare_ordered.is_empty() {
        Estimates {
            u_hat: result.u_hat,
            delta_hat: result.delta_hat,
            p_hat: result.p_hat,
            std_errors: result.std_errors,
        }
    } else {
        estimates_from_arrays(&result.welfare_ordered, &result.s_norm_ordered)
    }
}

/// How group sizes are produced for each n in a convergence sweep.
#[derive(Debug, Clone)]
pub enum SizeGenerator {
    /// Cycle a fixed pattern up to length n.
    Repeat(Vec<f64>),
    /// Draw n sizes i.i.d. from a limiting distribution, from an aux stream
    /// derived from the base seed and n.
    FromLimit(LimitDist),
}

impl SizeGenerator {
    /// Realizes n group sizes; limit draws use an aux stream keyed by the
    /// seed and n, so a given (seed, n) pair always yields the same society.
    pub fn sizes_for(&self, n: usize, seed: u64) -> Vec<f64> {
        match self {
            SizeGenerator::Repeat(pattern) => {
                pattern.iter().copied().cycle().take(n).collect()
            }
            SizeGenerator::FromLimit(limit) => {
                let mut rng = aux_rng(seed, SWEEP_TAG_BASE | n as u64);
                (0..n).map(|_| limit.sample(&mut rng)).collect()
            }
        }
    }
}

/// One row of a convergence sweep.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub n: usize,
    pub u_hat: f64,
    pub delta_hat: f64,
    pub p_hat: f64,
    pub lambda: f64,
    pub u_limit: f64,
    pub delta_limit: f64,
    pub p_limit: f64,
    /// KS distance of realized welfare to SN(lambda).
    pub ks: f64,
    pub tie_count: u64,
}

/// Runs the base spec at each n, with sizes from the generator, recording
/// estimates, asymptotic limits from the realized society, and the KS
/// distance to the limiting skew normal.
pub fn convergence_sweep(
    base: &SimulationSpec,
    n_values: &[usize],
    sizes: &SizeGenerator,
) -> Result<Vec<SweepRow>, EngineError> {
    if n_values.is_empty() {
        return Err(EngineError::EmptySweep);
    }
    if !n_values.windows(2).all(|w| w[0] < w[1]) || n_values[0] == 0 {
        return Err(EngineError::UnsortedSweep);
    }
    let rho_value = rho(&base.margin, &base.rule)?;
    let mut rows = Vec::with_capacity(n_values.len());
    for &n in n_values {
        let society = Society::new(sizes.sizes_for(n, base.seed))?;
        let spec = SimulationSpec {
            society,
            alloc: base.alloc.clone(),
            rule: base.rule.clone(),
            margin: base.margin.clone(),
            samples: base.samples,
            seed: base.seed,
            chunk_size: base.chunk_size,
            sample_cap: base.sample_cap,
        };
        let weights = materialize_weights(&spec.society, &spec.alloc)?;
        let c = cosine(spec.society.sizes(), &weights)?;
        let profile = asymptotic_objectives(rho_value, c)?;
        let result = simulate(&spec)?;
        let sn = SkewNormal::new(profile.lambda).expect("finite or infinite shape");
        let ks = result.welfare.ks_distance_to_sn(&sn);
        rows.push(SweepRow {
            n,
            u_hat: result.u_hat,
            delta_hat: result.delta_hat,
            p_hat: result.p_hat,
            lambda: profile.lambda,
            u_limit: profile.u_limit,
            delta_limit: profile.delta_limit,
            p_limit: profile.p_limit,
            ks,
            tie_count: result.tie_count,
        });
    }
    Ok(rows)
}
