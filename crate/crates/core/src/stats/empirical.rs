//! Empirical welfare distributions: CDF queries, Kolmogorov-Smirnov distance,
//! and a banded first-order stochastic dominance test.

use std::error::Error;
use std::fmt;

/// Provenance of an empirical sample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleMeta {
    pub count: usize,
    pub seed: u64,
    /// Human-readable model descriptor, e.g. "correlated n=3 wta rademacher".
    pub model: String,
}

/// Construction failed: empty sample or NaN values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EmpiricalError {
    Empty,
    NanSample,
}

impl fmt::Display for EmpiricalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EmpiricalError::Empty => write!(f, "empirical distribution needs at least one sample"),
            EmpiricalError::NanSample => write!(f, "samples must not contain NaN"),
        }
    }
}

impl Error for EmpiricalError {}

/// Sorted sample of realized welfare values with a right-continuous step CDF.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalWelfare {
    samples: Vec<f64>,
    meta: SampleMeta,
}

impl EmpiricalWelfare {
    /// Sorts and wraps a sample; rejects empty input and NaNs.
    pub fn from_samples(mut samples: Vec<f64>, meta: SampleMeta) -> Result<Self, EmpiricalError> {
        if samples.is_empty() {
            return Err(EmpiricalError::Empty);
        }
        if samples.iter().any(|v| v.is_nan()) {
            return Err(EmpiricalError::NanSample);
        }
        samples.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(Self { samples, meta })
    }

    /// Ascending sample values.
    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn meta(&self) -> &SampleMeta {
        &self.meta
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Right-continuous empirical CDF: fraction of samples <= x.
    pub fn cdf(&self, x: f64) -> f64 {
        let below = self.samples.partition_point(|&v| v <= x);
        below as f64 / self.samples.len() as f64
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.samples.len() as f64
    }
}

/// Kolmogorov-Smirnov distance between an empirical CDF and a reference CDF,
/// evaluated on both sides of every step.
pub fn ks_distance<F: Fn(f64) -> f64>(emp: &EmpiricalWelfare, cdf: F) -> f64 {
    let values = emp.samples();
    let reference: Vec<f64> = values.iter().map(|&x| cdf(x)).collect();
    ks_distance_precomputed(values, &reference)
}

/// KS distance when the reference CDF has already been evaluated at the
/// sorted sample points (as produced by `SkewNormal::cdf_at_sorted`).
pub fn ks_distance_precomputed(sorted_samples: &[f64], reference_cdf: &[f64]) -> f64 {
    assert_eq!(sorted_samples.len(), reference_cdf.len());
    let m = sorted_samples.len() as f64;
    let mut sup: f64 = 0.0;
    let mut i = 0;
    while i < sorted_samples.len() {
        // Group duplicates so the step is evaluated once per distinct value.
        let mut j = i + 1;
        while j < sorted_samples.len() && sorted_samples[j] == sorted_samples[i] {
            j += 1;
        }
        let c = reference_cdf[i];
        let lo = i as f64 / m;
        let hi = j as f64 / m;
        sup = sup.max((hi - c).abs()).max((lo - c).abs());
        i = j;
    }
    sup
}

/// Two-sample DKW band: eps = sqrt(ln(2/alpha)/(2 m_a)) + sqrt(ln(2/alpha)/(2 m_b)).
pub fn dkw_epsilon(m_a: usize, m_b: usize, alpha: f64) -> f64 {
    let l = (2.0 / alpha).ln();
    (l / (2.0 * m_a as f64)).sqrt() + (l / (2.0 * m_b as f64)).sqrt()
}

/// Outcome of the banded dominance comparison of two empirical distributions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dominance {
    /// First-argument distribution stochastically dominates (F_a <= F_b + eps everywhere).
    Dominates,
    /// Second-argument distribution dominates.
    Dominated,
    /// Neither one-sided check passed, or both did (`statistically_equal`).
    Incomparable { statistically_equal: bool },
}

impl fmt::Display for Dominance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dominance::Dominates => write!(f, "dominates"),
            Dominance::Dominated => write!(f, "dominated"),
            Dominance::Incomparable { statistically_equal: true } => {
                write!(f, "incomparable (statistically equal)")
            }
            Dominance::Incomparable { statistically_equal: false } => write!(f, "incomparable"),
        }
    }
}

/// `alpha` outside (0, 1).
#[derive(Debug, Clone, PartialEq)]
pub struct InvalidAlpha(pub f64);

impl fmt::Display for InvalidAlpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "dominance level alpha must lie in (0, 1), got {}", self.0)
    }
}

impl Error for InvalidAlpha {}

/// Largest signed gaps (sup F_a - F_b, sup F_b - F_a) over the merged support.
pub fn cdf_gaps(a: &EmpiricalWelfare, b: &EmpiricalWelfare) -> (f64, f64) {
    let xs = a.samples();
    let ys = b.samples();
    let (na, nb) = (xs.len() as f64, ys.len() as f64);
    let mut i = 0;
    let mut j = 0;
    let mut sup_ab: f64 = 0.0;
    let mut sup_ba: f64 = 0.0;
    // Sweep the merged sample points; between them both CDFs are constant.
    while i < xs.len() || j < ys.len() {
        let x = match (xs.get(i), ys.get(j)) {
            (Some(&u), Some(&v)) => u.min(v),
            (Some(&u), None) => u,
            (None, Some(&v)) => v,
            (None, None) => break,
        };
        while i < xs.len() && xs[i] <= x {
            i += 1;
        }
        while j < ys.len() && ys[j] <= x {
            j += 1;
        }
        let fa = i as f64 / na;
        let fb = j as f64 / nb;
        sup_ab = sup_ab.max(fa - fb);
        sup_ba = sup_ba.max(fb - fa);
    }
    (sup_ab, sup_ba)
}

/// First-order stochastic dominance of `a` over `b` with a two-sample DKW
/// slack at level `alpha`.
///
/// "a dominates b" means F_a(x) <= F_b(x) + eps for every x in the merged
/// support while the symmetric check fails; two distributions passing both
/// checks are reported incomparable with `statistically_equal` set.
pub fn dominates(
    a: &EmpiricalWelfare,
    b: &EmpiricalWelfare,
    alpha: f64,
) -> Result<Dominance, InvalidAlpha> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(InvalidAlpha(alpha));
    }
    let eps = dkw_epsilon(a.len(), b.len(), alpha);
    let (sup_ab, sup_ba) = cdf_gaps(a, b);
    let a_passes = sup_ab <= eps;
    let b_passes = sup_ba <= eps;
    Ok(match (a_passes, b_passes) {
        (true, false) => Dominance::Dominates,
        (false, true) => Dominance::Dominated,
        (true, true) => Dominance::Incomparable { statistically_equal: true },
        (false, false) => Dominance::Incomparable { statistically_equal: false },
    })
}

/// Fixed-width CDF sketch used when runs exceed the sample retention cap.
///
/// Values are clamped into `[lo, hi]`; with the default 1e4 bins over
/// [-16, 16] the sketch adds at most ~1e-3 of CDF error for welfare-scaled
/// data, which is the documented extra tolerance for KS and dominance
/// queries against it.
#[derive(Debug, Clone, PartialEq)]
pub struct CdfSketch {
    lo: f64,
    hi: f64,
    counts: Vec<u64>,
    total: u64,
}

/// Bin count for sketches built by the engine.
pub const SKETCH_BINS: usize = 10_000;

/// Documented extra CDF tolerance of sketch-based KS/dominance queries.
pub const SKETCH_TOL: f64 = 1e-3;

impl CdfSketch {
    pub fn new(lo: f64, hi: f64, bins: usize) -> Self {
        assert!(lo < hi && bins > 0);
        Self {
            lo,
            hi,
            counts: vec![0; bins],
            total: 0,
        }
    }

    pub fn insert(&mut self, x: f64) {
        let bins = self.counts.len() as f64;
        let t = ((x - self.lo) / (self.hi - self.lo) * bins).floor();
        let idx = (t.max(0.0) as usize).min(self.counts.len() - 1);
        self.counts[idx] += 1;
        self.total += 1;
    }

    pub fn merge(&mut self, other: &CdfSketch) {
        assert!(self.lo == other.lo && self.hi == other.hi && self.counts.len() == other.counts.len());
        for (c, o) in self.counts.iter_mut().zip(&other.counts) {
            *c += o;
        }
        self.total += other.total;
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// CDF at the upper edge of the bin containing x.
    pub fn cdf(&self, x: f64) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        if x < self.lo {
            return 0.0;
        }
        let bins = self.counts.len() as f64;
        let t = ((x - self.lo) / (self.hi - self.lo) * bins).floor();
        let idx = (t.max(0.0) as usize).min(self.counts.len() - 1);
        let cum: u64 = self.counts[..=idx].iter().sum();
        cum as f64 / self.total as f64
    }

    /// KS distance to a reference CDF, evaluated at bin edges; accurate to
    /// one bin of empirical mass plus [`SKETCH_TOL`].
    pub fn ks_distance<F: Fn(f64) -> f64>(&self, cdf: F) -> f64 {
        let bins = self.counts.len();
        let width = (self.hi - self.lo) / bins as f64;
        let mut cum = 0u64;
        let mut sup: f64 = 0.0;
        for (i, &c) in self.counts.iter().enumerate() {
            let lo_frac = cum as f64 / self.total as f64;
            cum += c;
            let hi_frac = cum as f64 / self.total as f64;
            let edge = self.lo + (i + 1) as f64 * width;
            let r = cdf(edge);
            sup = sup.max((hi_frac - r).abs()).max((lo_frac - r).abs());
        }
        sup
    }
}
