//! Two model extensions: preference intensities (margins filtered through a
//! noise CDF) and fully independent preferences (normal group margins).

use std::error::Error;
use std::fmt;

use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, StandardNormal};

use crate::analytics::AnalyticsError;
use crate::engine::{
    run_kernel, EngineError, RunParams, SampleKernel, SimulationResult, TieTest,
    CONTINUOUS_TIE_REL, DEFAULT_CHUNK_SIZE, DEFAULT_SAMPLE_CAP,
};
use crate::model::{
    eval_rule_unchecked, materialize_weights, rule_jump_points, validate_rule, MarginDistribution,
    ModelError, RepresentationRule, Society, WeightAllocation,
};
use crate::stats::{integrate_with_splits, regularized_incomplete_beta, QuadratureError};
use crate::streams::sample_rng;

/// Per-integral quadrature tolerance behind the advertised 1e-10 contract of
/// [`rho_intensity`].
const INTENSITY_RHO_TOL: f64 = 1e-11;

/// Quadrature tolerance for noise second moments feeding sigma.
const MOMENT_TOL: f64 = 1e-13;

#[derive(Debug, Clone, PartialEq)]
pub enum ExtensionsError {
    Model(ModelError),
    Engine(EngineError),
    InvalidCdf(String),
    NonPositiveRho { value: f64 },
    ParameterOutOfRange { what: &'static str, value: f64 },
    Quadrature(QuadratureError),
}

impl fmt::Display for ExtensionsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtensionsError::Model(e) => write!(f, "{e}"),
            ExtensionsError::Engine(e) => write!(f, "{e}"),
            ExtensionsError::InvalidCdf(msg) => write!(f, "invalid noise CDF: {msg}"),
            ExtensionsError::NonPositiveRho { value } => {
                write!(f, "intensity correlation must be positive, got {value}")
            }
            ExtensionsError::ParameterOutOfRange { what, value } => {
                write!(f, "{what} out of range: {value}")
            }
            ExtensionsError::Quadrature(e) => write!(f, "quadrature failed: {e}"),
        }
    }
}

impl Error for ExtensionsError {}

impl From<ModelError> for ExtensionsError {
    fn from(e: ModelError) -> Self {
        ExtensionsError::Model(e)
    }
}

impl From<EngineError> for ExtensionsError {
    fn from(e: EngineError) -> Self {
        ExtensionsError::Engine(e)
    }
}

impl From<QuadratureError> for ExtensionsError {
    fn from(e: QuadratureError) -> Self {
        ExtensionsError::Quadrature(e)
    }
}

impl From<AnalyticsError> for ExtensionsError {
    fn from(e: AnalyticsError) -> Self {
        match e {
            AnalyticsError::Quadrature(q) => ExtensionsError::Quadrature(q),
            AnalyticsError::NonPositiveRho { value } => ExtensionsError::NonPositiveRho { value },
            other => ExtensionsError::InvalidCdf(other.to_string()),
        }
    }
}

/// Piecewise-linear symmetric CDF given by sample points.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedCdf {
    xs: Vec<f64>,
    gs: Vec<f64>,
    half_width: f64,
}

impl TabulatedCdf {
    /// Validates an explicit CDF table: strictly ascending support symmetric
    /// about 0, nondecreasing values running from 0 to 1, and the symmetry
    /// G(-x) = 1 - G(x) within 1e-12.
    pub fn new(xs: Vec<f64>, gs: Vec<f64>) -> Result<Self, ExtensionsError> {
        let n = xs.len();
        if n < 2 || gs.len() != n {
            return Err(ExtensionsError::InvalidCdf(
                "need at least two (x, G) points with equal lengths".into(),
            ));
        }
        if xs.iter().any(|x| !x.is_finite()) || !xs.windows(2).all(|w| w[0] < w[1]) {
            return Err(ExtensionsError::InvalidCdf("support must be finite and strictly ascending".into()));
        }
        if gs.iter().any(|g| !(0.0..=1.0).contains(g)) || !gs.windows(2).all(|w| w[0] <= w[1]) {
            return Err(ExtensionsError::InvalidCdf("values must be nondecreasing within [0, 1]".into()));
        }
        if gs[0].abs() > 1e-12 || (gs[n - 1] - 1.0).abs() > 1e-12 {
            return Err(ExtensionsError::InvalidCdf("values must run from 0 to 1".into()));
        }
        let half_width = xs[n - 1];
        if half_width <= 0.0 {
            return Err(ExtensionsError::InvalidCdf("support must reach past 0".into()));
        }
        for i in 0..n {
            let j = n - 1 - i;
            if (xs[i] + xs[j]).abs() > 1e-12 * half_width {
                return Err(ExtensionsError::InvalidCdf("support must be symmetric about 0".into()));
            }
            if (gs[i] + gs[j] - 1.0).abs() > 1e-12 {
                return Err(ExtensionsError::InvalidCdf("G(-x) must equal 1 - G(x)".into()));
            }
        }
        Ok(Self { xs, gs, half_width })
    }

    /// Interpolated CDF value for x >= 0; beyond the support it is 1.
    fn eval_abs(&self, x: f64) -> f64 {
        if x >= self.half_width {
            return 1.0;
        }
        let hi = self.xs.partition_point(|&p| p <= x);
        let lo = hi - 1;
        let span = self.xs[hi] - self.xs[lo];
        self.gs[lo] + (self.gs[hi] - self.gs[lo]) * (x - self.xs[lo]) / span
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }
}

/// Symmetric noise distribution function G on [-half_width, half_width],
/// known through its CDF.
#[derive(Debug, Clone, PartialEq)]
pub enum EpsilonCdf {
    Uniform { half_width: f64 },
    SymmetricBeta { alpha: f64, half_width: f64 },
    Table(TabulatedCdf),
}

impl EpsilonCdf {
    pub fn uniform(half_width: f64) -> Result<Self, ExtensionsError> {
        let cdf = EpsilonCdf::Uniform { half_width };
        cdf.validate()?;
        Ok(cdf)
    }

    pub fn symmetric_beta(alpha: f64, half_width: f64) -> Result<Self, ExtensionsError> {
        let cdf = EpsilonCdf::SymmetricBeta { alpha, half_width };
        cdf.validate()?;
        Ok(cdf)
    }

    pub fn validate(&self) -> Result<(), ExtensionsError> {
        match self {
            EpsilonCdf::Uniform { half_width } => check_positive("noise half-width", *half_width),
            EpsilonCdf::SymmetricBeta { alpha, half_width } => {
                check_positive("noise shape", *alpha)?;
                check_positive("noise half-width", *half_width)
            }
            EpsilonCdf::Table(_) => Ok(()),
        }
    }

    /// CDF value G(x).
    pub fn eval(&self, x: f64) -> f64 {
        (1.0 + self.centered(x)) / 2.0
    }

    /// 2 G(x) - 1, the signed vote share induced by intensity x.
    ///
    /// Odd by construction: the value at -x is the exact negation of the
    /// value at x.
    #[inline]
    pub fn centered(&self, x: f64) -> f64 {
        if x == 0.0 {
            0.0
        } else if x > 0.0 {
            self.centered_abs(x)
        } else {
            -self.centered_abs(-x)
        }
    }

    fn centered_abs(&self, x: f64) -> f64 {
        match self {
            EpsilonCdf::Uniform { half_width } => (x / half_width).min(1.0),
            EpsilonCdf::SymmetricBeta { alpha, half_width } => {
                let u = (x / half_width).min(1.0);
                2.0 * regularized_incomplete_beta(*alpha, *alpha, (u + 1.0) / 2.0) - 1.0
            }
            EpsilonCdf::Table(t) => 2.0 * t.eval_abs(x) - 1.0,
        }
    }

    /// Positive kink locations, registered as quadrature split points.
    fn split_points(&self) -> Vec<f64> {
        match self {
            EpsilonCdf::Uniform { half_width } | EpsilonCdf::SymmetricBeta { half_width, .. } => {
                if *half_width < 1.0 {
                    vec![*half_width]
                } else {
                    Vec::new()
                }
            }
            EpsilonCdf::Table(t) => t.xs.iter().copied().filter(|&x| x > 0.0 && x < 1.0).collect(),
        }
    }
}

fn check_positive(what: &'static str, value: f64) -> Result<(), ExtensionsError> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(ExtensionsError::ParameterOutOfRange { what, value })
    }
}

/// Intensity model: group margins are intensities Theta, and the effective
/// vote margin is 2 G_eps(Theta) - 1.
#[derive(Debug, Clone, PartialEq)]
pub struct IntensityModel {
    pub theta_dist: MarginDistribution,
    pub eps_cdf: EpsilonCdf,
}

impl IntensityModel {
    pub fn new(theta_dist: MarginDistribution, eps_cdf: EpsilonCdf) -> Result<Self, ExtensionsError> {
        eps_cdf.validate()?;
        Ok(Self { theta_dist, eps_cdf })
    }
}

/// Complete description of one intensity-model run.
#[derive(Debug, Clone)]
pub struct IntensitySpec {
    pub model: IntensityModel,
    pub society: Society,
    pub alloc: WeightAllocation,
    pub rule: RepresentationRule,
    pub samples: u64,
    pub seed: u64,
    pub chunk_size: u64,
    pub sample_cap: u64,
}

impl IntensitySpec {
    pub fn new(
        model: IntensityModel,
        society: Society,
        alloc: WeightAllocation,
        rule: RepresentationRule,
        samples: u64,
        seed: u64,
    ) -> Self {
        Self {
            model,
            society,
            alloc,
            rule,
            samples,
            seed,
            chunk_size: DEFAULT_CHUNK_SIZE,
            sample_cap: DEFAULT_SAMPLE_CAP,
        }
    }
}

/// E[(2 G_eps(Theta) - 1)^2], the margin second moment of the intensity
/// model; closed form where available, else exact sums or quadrature.
pub fn centered_second_moment(
    eps: &EpsilonCdf,
    theta: &MarginDistribution,
) -> Result<f64, ExtensionsError> {
    eps.validate()?;
    // Intensities live on [-1, 1], so a uniform noise CDF reaching at least
    // 1 never clamps and the moment reduces exactly to E[Theta^2] scaled.
    if let EpsilonCdf::Uniform { half_width } = eps {
        if *half_width >= 1.0 {
            return Ok(theta.second_moment() / (half_width * half_width));
        }
    }
    if let Some(atoms) = theta.enumeration() {
        return Ok(atoms
            .into_iter()
            .map(|(x, p)| {
                let c = eps.centered(x);
                p * c * c
            })
            .sum());
    }
    let density = |x: f64| theta.density(x).expect("continuous margin");
    let splits = eps.split_points();
    let moment = 2.0
        * integrate_with_splits(
            |x| {
                let c = eps.centered(x);
                c * c * density(x)
            },
            0.0,
            1.0,
            &splits,
            MOMENT_TOL,
        )?;
    Ok(moment)
}

struct IntensityKernel<'a> {
    sizes: &'a [f64],
    weights: &'a [f64],
    rule: &'a RepresentationRule,
    theta: &'a MarginDistribution,
    eps: &'a EpsilonCdf,
}

impl SampleKernel for IntensityKernel<'_> {
    #[inline]
    fn s_and_t(&self, rng: &mut ChaCha8Rng, negate: bool) -> (f64, f64) {
        let mut s = 0.0;
        let mut t = 0.0;
        for (&size, &weight) in self.sizes.iter().zip(self.weights) {
            let mut x = self.theta.sample(rng);
            if negate {
                x = -x;
            }
            s += size * self.eps.centered(x);
            t += weight * eval_rule_unchecked(self.rule, x);
        }
        (s, t)
    }
}

/// Simulates the intensity model.
///
/// With uniform noise of half-width 1 the effective margin equals the
/// intensity bit-for-bit, so the run reproduces the correlated model's
/// welfare samples exactly under the same seed.
pub fn simulate_intensity(spec: &IntensitySpec) -> Result<SimulationResult, ExtensionsError> {
    if spec.samples == 0 {
        return Err(ExtensionsError::Engine(EngineError::ZeroSamples));
    }
    if spec.chunk_size == 0 {
        return Err(ExtensionsError::Engine(EngineError::ZeroChunk));
    }
    let violations = validate_rule(&spec.rule);
    if !violations.is_empty() {
        return Err(ExtensionsError::Model(ModelError::InvalidRule(violations)));
    }
    spec.model.eps_cdf.validate()?;
    let weights = materialize_weights(&spec.society, &spec.alloc)?;
    let sizes = spec.society.sizes().to_vec();
    let moment = centered_second_moment(&spec.model.eps_cdf, &spec.model.theta_dist)?;
    let sigma = (moment * spec.society.sum_sq_sizes()).sqrt();
    let tie = if spec.model.theta_dist.is_discrete() {
        TieTest::Exact
    } else {
        let sum_weights: f64 = weights.iter().sum();
        TieTest::Threshold(CONTINUOUS_TIE_REL * sum_weights)
    };
    let kernel = IntensityKernel {
        sizes: &sizes,
        weights: &weights,
        rule: &spec.rule,
        theta: &spec.model.theta_dist,
        eps: &spec.model.eps_cdf,
    };
    let params = RunParams {
        samples: spec.samples,
        seed: spec.seed,
        chunk_size: spec.chunk_size,
        sample_cap: spec.sample_cap,
        sigma,
        tie,
        negate: false,
        model: "intensity",
    };
    Ok(run_kernel(&kernel, &params))
}

/// Corr(2 G_eps(Theta) - 1, r(Theta)): exact sums for discrete intensities,
/// quadrature within 1e-10 otherwise.
pub fn rho_intensity(
    model: &IntensityModel,
    rule: &RepresentationRule,
) -> Result<f64, ExtensionsError> {
    model.eps_cdf.validate()?;
    let violations = validate_rule(rule);
    if !violations.is_empty() {
        return Err(ExtensionsError::Model(ModelError::InvalidRule(violations)));
    }
    let eps = &model.eps_cdf;
    let (e_cr, e_cc, e_rr) = if let Some(atoms) = model.theta_dist.enumeration() {
        let mut cr = 0.0;
        let mut cc = 0.0;
        let mut rr = 0.0;
        for (x, p) in atoms {
            let c = eps.centered(x);
            let r = eval_rule_unchecked(rule, x);
            cr += p * c * r;
            cc += p * c * c;
            rr += p * r * r;
        }
        (cr, cc, rr)
    } else {
        let density = |x: f64| model.theta_dist.density(x).expect("continuous margin");
        let mut splits = rule_jump_points(rule);
        splits.extend(eps.split_points());
        let cr = 2.0
            * integrate_with_splits(
                |x| eps.centered(x) * eval_rule_unchecked(rule, x) * density(x),
                0.0,
                1.0,
                &splits,
                INTENSITY_RHO_TOL,
            )?;
        let cc = 2.0
            * integrate_with_splits(
                |x| {
                    let c = eps.centered(x);
                    c * c * density(x)
                },
                0.0,
                1.0,
                &splits,
                INTENSITY_RHO_TOL,
            )?;
        let rr = 2.0
            * integrate_with_splits(
                |x| {
                    let r = eval_rule_unchecked(rule, x);
                    r * r * density(x)
                },
                0.0,
                1.0,
                &splits,
                INTENSITY_RHO_TOL,
            )?;
        (cr, cc, rr)
    };
    if e_cc <= 0.0 || e_rr <= 0.0 {
        return Err(ExtensionsError::NonPositiveRho { value: 0.0 });
    }
    let value = e_cr / (e_cc * e_rr).sqrt();
    if value > 0.0 {
        Ok(value)
    } else {
        Err(ExtensionsError::NonPositiveRho { value })
    }
}

/// Representation rules admitted by the independent-preference model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndepRule {
    WinnerTakeAll,
    Proportional,
}

/// Independent-preference model: group margins are N_i / sqrt(s_i) with
/// standard normal N_i.
#[derive(Debug, Clone, PartialEq)]
pub struct IndepModel {
    pub sizes: Vec<f64>,
    pub rule: IndepRule,
}

impl IndepModel {
    pub fn new(sizes: Vec<f64>, rule: IndepRule) -> Result<Self, ExtensionsError> {
        Society::new(sizes.clone())?;
        Ok(Self { sizes, rule })
    }
}

/// Complete description of one independent-model run.
#[derive(Debug, Clone)]
pub struct IndepSpec {
    pub model: IndepModel,
    pub weights: Vec<f64>,
    pub samples: u64,
    pub seed: u64,
    pub chunk_size: u64,
    pub sample_cap: u64,
}

impl IndepSpec {
    pub fn new(model: IndepModel, weights: Vec<f64>, samples: u64, seed: u64) -> Self {
        Self {
            model,
            weights,
            samples,
            seed,
            chunk_size: DEFAULT_CHUNK_SIZE,
            sample_cap: DEFAULT_SAMPLE_CAP,
        }
    }
}

struct IndepKernel<'a> {
    sqrt_sizes: &'a [f64],
    weights: &'a [f64],
    rule: IndepRule,
}

impl SampleKernel for IndepKernel<'_> {
    #[inline]
    fn s_and_t(&self, rng: &mut ChaCha8Rng, negate: bool) -> (f64, f64) {
        let mut s = 0.0;
        let mut t = 0.0;
        for (&root, &weight) in self.sqrt_sizes.iter().zip(self.weights) {
            let mut z: f64 = StandardNormal.sample(rng);
            if negate {
                z = -z;
            }
            s += root * z;
            t += match self.rule {
                IndepRule::WinnerTakeAll => {
                    weight
                        * if z > 0.0 {
                            1.0
                        } else if z < 0.0 {
                            -1.0
                        } else {
                            0.0
                        }
                }
                IndepRule::Proportional => weight * (z / root),
            };
        }
        (s, t)
    }
}

fn prepare_indep(spec: &IndepSpec) -> Result<(Vec<f64>, f64), ExtensionsError> {
    if spec.samples == 0 {
        return Err(ExtensionsError::Engine(EngineError::ZeroSamples));
    }
    if spec.chunk_size == 0 {
        return Err(ExtensionsError::Engine(EngineError::ZeroChunk));
    }
    let society = Society::new(spec.model.sizes.clone())?;
    let alloc = WeightAllocation::explicit(spec.weights.clone())?;
    materialize_weights(&society, &alloc)?;
    let sigma = society.sum_sizes().sqrt();
    let sqrt_sizes = spec.model.sizes.iter().map(|&s| s.sqrt()).collect();
    Ok((sqrt_sizes, sigma))
}

/// Simulates the independent-preference model; sigma is the square root of
/// the total population and ties (probability zero) still get the coin.
pub fn simulate_indep(spec: &IndepSpec) -> Result<SimulationResult, ExtensionsError> {
    let (sqrt_sizes, sigma) = prepare_indep(spec)?;
    let kernel = IndepKernel {
        sqrt_sizes: &sqrt_sizes,
        weights: &spec.weights,
        rule: spec.model.rule,
    };
    let params = RunParams {
        samples: spec.samples,
        seed: spec.seed,
        chunk_size: spec.chunk_size,
        sample_cap: spec.sample_cap,
        sigma,
        tie: TieTest::Exact,
        negate: false,
        model: "independent",
    };
    Ok(run_kernel(&kernel, &params))
}

/// Inversion-probability limit under winner-take-all in the independent
/// model: arccos(sqrt(2/pi) c*_sqrt) / pi.
pub fn indep_asymptotic_p(c_sqrt_star: f64) -> Result<f64, ExtensionsError> {
    if !(-1e-14..=1.0 + 1e-14).contains(&c_sqrt_star) {
        return Err(ExtensionsError::ParameterOutOfRange {
            what: "c_sqrt_star",
            value: c_sqrt_star,
        });
    }
    let t = ((2.0 / std::f64::consts::PI).sqrt() * c_sqrt_star).clamp(-1.0, 1.0);
    Ok(t.acos() / std::f64::consts::PI)
}

/// Sample Pearson correlation of (S/sigma, T/tau) pairs in the independent
/// model, for checking the Gaussian-limit correlation directly.
pub fn indep_st_correlation(spec: &IndepSpec) -> Result<f64, ExtensionsError> {
    let (sqrt_sizes, sigma) = prepare_indep(spec)?;
    let tau_sq: f64 = match spec.model.rule {
        IndepRule::WinnerTakeAll => spec.weights.iter().map(|a| a * a).sum(),
        IndepRule::Proportional => spec
            .weights
            .iter()
            .zip(&spec.model.sizes)
            .map(|(a, s)| a * a / s)
            .sum(),
    };
    let tau = tau_sq.sqrt();
    let kernel = IndepKernel {
        sqrt_sizes: &sqrt_sizes,
        weights: &spec.weights,
        rule: spec.model.rule,
    };
    let mut sum_s = 0.0;
    let mut sum_t = 0.0;
    let mut sum_ss = 0.0;
    let mut sum_tt = 0.0;
    let mut sum_st = 0.0;
    for index in 0..spec.samples {
        let mut rng = sample_rng(spec.seed, index);
        let (s, t) = kernel.s_and_t(&mut rng, false);
        let sn = s / sigma;
        let tn = t / tau;
        sum_s += sn;
        sum_t += tn;
        sum_ss += sn * sn;
        sum_tt += tn * tn;
        sum_st += sn * tn;
    }
    let m = spec.samples as f64;
    let cov = sum_st / m - (sum_s / m) * (sum_t / m);
    let var_s = sum_ss / m - (sum_s / m) * (sum_s / m);
    let var_t = sum_tt / m - (sum_t / m) * (sum_t / m);
    Ok(cov / (var_s * var_t).sqrt())
}

struct FinitePopKernel<'a> {
    sizes: &'a [f64],
    weights: &'a [f64],
    ballots: &'a [u64],
    binomials: &'a [Binomial],
    rule: IndepRule,
}

impl SampleKernel for FinitePopKernel<'_> {
    #[inline]
    fn s_and_t(&self, rng: &mut ChaCha8Rng, negate: bool) -> (f64, f64) {
        let mut s = 0.0;
        let mut t = 0.0;
        for i in 0..self.sizes.len() {
            let mut ones = self.binomials[i].sample(rng);
            if negate {
                ones = self.ballots[i] - ones;
            }
            // Net +1 ballots minus -1 ballots, over m_i voters.
            let net = 2.0 * ones as f64 - self.ballots[i] as f64;
            let margin = net / self.ballots[i] as f64;
            s += self.sizes[i] * margin;
            t += match self.rule {
                IndepRule::WinnerTakeAll => {
                    self.weights[i]
                        * if net > 0.0 {
                            1.0
                        } else if net < 0.0 {
                            -1.0
                        } else {
                            0.0
                        }
                }
                IndepRule::Proportional => self.weights[i] * margin,
            };
        }
        (s, t)
    }
}

/// Demonstration mode for the independent model: each group casts
/// round(kappa * s_i) actual fair-coin ballots instead of drawing the
/// normal limit. Sigma is the exact standard deviation of S given the
/// realized ballot counts; as kappa grows the welfare law converges to
/// [`simulate_indep`]'s.
pub fn simulate_indep_finite(spec: &IndepSpec, kappa: f64) -> Result<SimulationResult, ExtensionsError> {
    check_positive("ballots per unit size", kappa)?;
    if spec.samples == 0 {
        return Err(ExtensionsError::Engine(EngineError::ZeroSamples));
    }
    if spec.chunk_size == 0 {
        return Err(ExtensionsError::Engine(EngineError::ZeroChunk));
    }
    let society = Society::new(spec.model.sizes.clone())?;
    let alloc = WeightAllocation::explicit(spec.weights.clone())?;
    materialize_weights(&society, &alloc)?;

    let ballots: Vec<u64> = spec
        .model
        .sizes
        .iter()
        .map(|&s| ((kappa * s).round() as u64).max(1))
        .collect();
    let binomials: Vec<Binomial> = ballots
        .iter()
        .map(|&m| Binomial::new(m, 0.5).expect("valid binomial"))
        .collect();
    // Var(S) = sum s_i^2 / m_i exactly: each margin has variance 1/m_i.
    let sigma = spec
        .model
        .sizes
        .iter()
        .zip(&ballots)
        .map(|(&s, &m)| s * s / m as f64)
        .sum::<f64>()
        .sqrt();

    let kernel = FinitePopKernel {
        sizes: &spec.model.sizes,
        weights: &spec.weights,
        ballots: &ballots,
        binomials: &binomials,
        rule: spec.model.rule,
    };
    let params = RunParams {
        samples: spec.samples,
        seed: spec.seed,
        chunk_size: spec.chunk_size,
        sample_cap: spec.sample_cap,
        sigma,
        tie: TieTest::Exact,
        negate: false,
        model: "independent-finite",
    };
    Ok(run_kernel(&kernel, &params))
}
