//! Domain types: societies, weight allocations, representation rules, and
//! margin distributions, with validation and evaluation primitives.
//!
//! All types are immutable after construction and safe to share across
//! threads; random generators are the only stateful objects and are owned by
//! one execution unit at a time.

use std::error::Error;
use std::fmt;

use rand::Rng;
use rand_distr::{Beta, Distribution};

use crate::stats::special::ln_beta;

/// Probability tolerance for distributions that must sum to one.
pub const PROB_TOL: f64 = 1e-12;

/// Validation failure in a domain type.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelError {
    EmptySizes,
    NonPositiveSize { index: usize, value: f64 },
    SizeAboveBound { index: usize, value: f64, bound: f64 },
    NonPositiveBound { value: f64 },
    LengthMismatch { sizes: usize, weights: usize },
    WeightOutOfRange { index: usize, value: f64 },
    AllWeightsZero,
    BadParameter { what: &'static str, value: f64 },
    BadProbabilities { sum: f64 },
    UnsortedSupport,
    SupportOutOfRange { value: f64 },
    DegenerateMargin,
    DomainExceeded { x: f64 },
    InvalidRule(Vec<RuleViolation>),
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::EmptySizes => write!(f, "society needs at least one group"),
            ModelError::NonPositiveSize { index, value } => {
                write!(f, "group size at index {index} must be positive and finite, got {value}")
            }
            ModelError::SizeAboveBound { index, value, bound } => {
                write!(f, "group size {value} at index {index} exceeds the declared bound {bound}")
            }
            ModelError::NonPositiveBound { value } => {
                write!(f, "declared bound must be positive and finite, got {value}")
            }
            ModelError::LengthMismatch { sizes, weights } => {
                write!(f, "explicit weights have length {weights} but the society has {sizes} groups")
            }
            ModelError::WeightOutOfRange { index, value } => {
                write!(f, "weight at index {index} must be finite and nonnegative, got {value}")
            }
            ModelError::AllWeightsZero => write!(f, "weights must not all be zero"),
            ModelError::BadParameter { what, value } => {
                write!(f, "{what} must be positive and finite, got {value}")
            }
            ModelError::BadProbabilities { sum } => {
                write!(f, "probabilities must be positive and sum to 1 within {PROB_TOL}, got sum {sum}")
            }
            ModelError::UnsortedSupport => write!(f, "support points must be strictly ascending"),
            ModelError::SupportOutOfRange { value } => {
                write!(f, "support point {value} lies outside the admissible range")
            }
            ModelError::DegenerateMargin => {
                write!(f, "margin distribution must place positive mass away from zero")
            }
            ModelError::DomainExceeded { x } => {
                write!(f, "representation rules are defined on [-1, 1], got {x}")
            }
            ModelError::InvalidRule(violations) => {
                write!(f, "invalid representation rule:")?;
                for v in violations {
                    write!(f, " {v};")?;
                }
                Ok(())
            }
        }
    }
}

impl Error for ModelError {}

/// Finite discrete limiting size distribution (point masses on sizes).
#[derive(Debug, Clone, PartialEq)]
pub struct LimitDist {
    support: Vec<f64>,
    probs: Vec<f64>,
}

impl LimitDist {
    /// Point masses `probs` on strictly ascending positive `support`;
    /// probabilities must be positive and sum to 1 within 1e-12.
    pub fn new(support: Vec<f64>, probs: Vec<f64>) -> Result<Self, ModelError> {
        if support.is_empty() || support.len() != probs.len() {
            return Err(ModelError::BadProbabilities { sum: 0.0 });
        }
        if !support.windows(2).all(|w| w[0] < w[1]) {
            return Err(ModelError::UnsortedSupport);
        }
        for &s in &support {
            if !(s > 0.0 && s.is_finite()) {
                return Err(ModelError::SupportOutOfRange { value: s });
            }
        }
        let sum: f64 = probs.iter().sum();
        if probs.iter().any(|&p| p.is_nan() || p <= 0.0) || (sum - 1.0).abs() > PROB_TOL {
            return Err(ModelError::BadProbabilities { sum });
        }
        Ok(Self { support, probs })
    }

    /// Equal masses on the given ascending positive support.
    pub fn uniform(support: Vec<f64>) -> Result<Self, ModelError> {
        let p = 1.0 / support.len() as f64;
        let probs = vec![p; support.len()];
        Self::new(support, probs)
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Expectation of `f` under the point masses.
    pub fn mean_of<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.support.iter().zip(&self.probs).map(|(&s, &p)| p * f(s)).sum()
    }

    /// One draw from the point masses.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        for (&s, &p) in self.support.iter().zip(&self.probs) {
            acc += p;
            if u < acc {
                return s;
            }
        }
        *self.support.last().unwrap()
    }
}

/// Finite list of positive group sizes with a declared upper bound, plus an
/// optional limiting size distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct Society {
    sizes: Vec<f64>,
    size_bound: f64,
    limit_dist: Option<LimitDist>,
}

impl Society {
    /// Society with the bound defaulting to the largest provided size.
    pub fn new(sizes: Vec<f64>) -> Result<Self, ModelError> {
        let bound = sizes.iter().cloned().fold(f64::NAN, f64::max);
        Self::with_bound(sizes, bound)
    }

    /// Society with an explicit size bound.
    pub fn with_bound(sizes: Vec<f64>, size_bound: f64) -> Result<Self, ModelError> {
        if sizes.is_empty() {
            return Err(ModelError::EmptySizes);
        }
        if !(size_bound > 0.0 && size_bound.is_finite()) {
            return Err(ModelError::NonPositiveBound { value: size_bound });
        }
        for (index, &value) in sizes.iter().enumerate() {
            if !(value > 0.0 && value.is_finite()) {
                return Err(ModelError::NonPositiveSize { index, value });
            }
            if value > size_bound {
                return Err(ModelError::SizeAboveBound { index, value, bound: size_bound });
            }
        }
        Ok(Self {
            sizes,
            size_bound,
            limit_dist: None,
        })
    }

    /// Attaches a limiting size distribution.
    pub fn with_limit(mut self, limit: LimitDist) -> Self {
        self.limit_dist = Some(limit);
        self
    }

    pub fn sizes(&self) -> &[f64] {
        &self.sizes
    }

    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn size_bound(&self) -> f64 {
        self.size_bound
    }

    pub fn limit_dist(&self) -> Option<&LimitDist> {
        self.limit_dist.as_ref()
    }

    pub fn sum_sizes(&self) -> f64 {
        self.sizes.iter().sum()
    }

    pub fn sum_sq_sizes(&self) -> f64 {
        self.sizes.iter().map(|s| s * s).sum()
    }
}

/// Named size-to-weight map a(s).
#[derive(Debug, Clone, PartialEq)]
pub enum WeightLaw {
    /// a(s) = s.
    Proportional,
    /// a(s) = 1.
    Constant,
    /// a(s) = s^gamma, gamma >= 0.
    Power { gamma: f64 },
    /// Piecewise-constant on size intervals: value index j applies to sizes
    /// with exactly j thresholds at or below them.
    Table { thresholds: Vec<f64>, values: Vec<f64> },
}

impl WeightLaw {
    fn validate(&self) -> Result<(), ModelError> {
        match self {
            WeightLaw::Proportional | WeightLaw::Constant => Ok(()),
            WeightLaw::Power { gamma } => {
                if *gamma >= 0.0 && gamma.is_finite() {
                    Ok(())
                } else {
                    Err(ModelError::BadParameter { what: "power-law exponent", value: *gamma })
                }
            }
            WeightLaw::Table { thresholds, values } => {
                if values.len() != thresholds.len() + 1 {
                    return Err(ModelError::LengthMismatch {
                        sizes: thresholds.len() + 1,
                        weights: values.len(),
                    });
                }
                if !thresholds.windows(2).all(|w| w[0] < w[1]) {
                    return Err(ModelError::UnsortedSupport);
                }
                for (index, &value) in values.iter().enumerate() {
                    if !(value >= 0.0 && value.is_finite()) {
                        return Err(ModelError::WeightOutOfRange { index, value });
                    }
                }
                Ok(())
            }
        }
    }

    /// Raw law value at size s, before any bound clipping.
    pub fn eval(&self, s: f64) -> f64 {
        match self {
            WeightLaw::Proportional => s,
            WeightLaw::Constant => 1.0,
            WeightLaw::Power { gamma } => s.powf(*gamma),
            WeightLaw::Table { thresholds, values } => {
                let j = thresholds.partition_point(|&t| t <= s);
                values[j]
            }
        }
    }
}

/// Voting weights, either explicit per group or as a size-to-weight law.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightAllocation {
    kind: AllocationKind,
    weight_bound: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
enum AllocationKind {
    Explicit(Vec<f64>),
    Law(WeightLaw),
}

impl WeightAllocation {
    /// Explicit nonnegative weights, not all zero; the weight bound defaults
    /// to the largest weight.
    pub fn explicit(weights: Vec<f64>) -> Result<Self, ModelError> {
        Self::check_weights(&weights, None)?;
        Ok(Self {
            kind: AllocationKind::Explicit(weights),
            weight_bound: None,
        })
    }

    /// Explicit weights validated against a declared bound.
    pub fn explicit_with_bound(weights: Vec<f64>, bound: f64) -> Result<Self, ModelError> {
        if !(bound > 0.0 && bound.is_finite()) {
            return Err(ModelError::NonPositiveBound { value: bound });
        }
        Self::check_weights(&weights, Some(bound))?;
        Ok(Self {
            kind: AllocationKind::Explicit(weights),
            weight_bound: Some(bound),
        })
    }

    /// Allocation defined by a law; values are clipped to the declared bound
    /// at materialization (no clipping when the bound is defaulted).
    pub fn law(law: WeightLaw) -> Result<Self, ModelError> {
        law.validate()?;
        Ok(Self {
            kind: AllocationKind::Law(law),
            weight_bound: None,
        })
    }

    /// Law allocation with a declared weight bound.
    pub fn law_with_bound(law: WeightLaw, bound: f64) -> Result<Self, ModelError> {
        if !(bound > 0.0 && bound.is_finite()) {
            return Err(ModelError::NonPositiveBound { value: bound });
        }
        law.validate()?;
        Ok(Self {
            kind: AllocationKind::Law(law),
            weight_bound: Some(bound),
        })
    }

    fn check_weights(weights: &[f64], bound: Option<f64>) -> Result<(), ModelError> {
        for (index, &value) in weights.iter().enumerate() {
            let hi = bound.unwrap_or(f64::INFINITY);
            if !(value >= 0.0 && value.is_finite() && value <= hi) {
                return Err(ModelError::WeightOutOfRange { index, value });
            }
        }
        if weights.iter().all(|&w| w == 0.0) {
            return Err(ModelError::AllWeightsZero);
        }
        Ok(())
    }

    /// The underlying law, if this allocation is law-based.
    pub fn as_law(&self) -> Option<&WeightLaw> {
        match &self.kind {
            AllocationKind::Law(law) => Some(law),
            AllocationKind::Explicit(_) => None,
        }
    }

    /// Law value at size s with bound clipping applied; None for explicit
    /// allocations.
    pub fn law_value(&self, s: f64) -> Option<f64> {
        let law = self.as_law()?;
        let v = law.eval(s);
        Some(match self.weight_bound {
            Some(b) => v.min(b),
            None => v,
        })
    }

    /// Explicit weight list for the society. Explicit allocations are
    /// returned unchanged; laws are evaluated per size and clipped to the
    /// declared bound. A law yielding all-zero weights is a hard error.
    pub fn materialize(&self, society: &Society) -> Result<Vec<f64>, ModelError> {
        match &self.kind {
            AllocationKind::Explicit(weights) => {
                if weights.len() != society.len() {
                    return Err(ModelError::LengthMismatch {
                        sizes: society.len(),
                        weights: weights.len(),
                    });
                }
                Ok(weights.clone())
            }
            AllocationKind::Law(_) => {
                let weights: Vec<f64> = society
                    .sizes()
                    .iter()
                    .map(|&s| self.law_value(s).expect("law allocation"))
                    .collect();
                Self::check_weights(&weights, None)?;
                Ok(weights)
            }
        }
    }
}

/// Explicit weight list for `alloc` on `society`.
pub fn materialize_weights(society: &Society, alloc: &WeightAllocation) -> Result<Vec<f64>, ModelError> {
    alloc.materialize(society)
}

/// A single defect found by [`validate_rule`].
#[derive(Debug, Clone, PartialEq)]
pub enum RuleViolation {
    ShapeMismatch { breakpoints: usize, values: usize },
    BreakpointOutOfRange { value: f64 },
    UnsortedBreakpoints,
    ValueOutOfRange { value: f64 },
    Decreasing { at_index: usize },
    IdenticallyZero,
}

impl fmt::Display for RuleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleViolation::ShapeMismatch { breakpoints, values } => write!(
                f,
                "step rule needs one more value than breakpoints, got {breakpoints} breakpoints and {values} values"
            ),
            RuleViolation::BreakpointOutOfRange { value } => {
                write!(f, "breakpoint {value} outside (0, 1)")
            }
            RuleViolation::UnsortedBreakpoints => write!(f, "breakpoints not strictly ascending"),
            RuleViolation::ValueOutOfRange { value } => {
                write!(f, "step value {value} outside [0, 1]")
            }
            RuleViolation::Decreasing { at_index } => {
                write!(f, "step values decrease at index {at_index}")
            }
            RuleViolation::IdenticallyZero => write!(f, "rule is identically zero"),
        }
    }
}

/// Odd nondecreasing map r from [-1, 1] to [-1, 1].
///
/// Step rules are stored as right-continuous tables on [0, 1] and mirrored by
/// oddness; the value at a breakpoint belongs to the interval on its right.
#[derive(Debug, Clone, PartialEq)]
pub enum RepresentationRule {
    /// r(x) = sign x.
    WinnerTakeAll,
    /// r(x) = x.
    Proportional,
    /// Piecewise-constant: value index j applies on [b_j, b_{j+1}) with
    /// b_0 = 0 and b_{k+1} = 1 implied; r(0) = 0 by oddness.
    Step { breakpoints: Vec<f64>, values: Vec<f64> },
}

impl RepresentationRule {
    /// Step rule from interior breakpoints and per-interval values.
    pub fn step(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self, ModelError> {
        let rule = RepresentationRule::Step { breakpoints, values };
        let violations = validate_rule(&rule);
        if violations.is_empty() {
            Ok(rule)
        } else {
            Err(ModelError::InvalidRule(violations))
        }
    }
}

/// Checks oddness, monotonicity, and non-nullity; an empty report is valid.
///
/// Named rules are valid analytically; step rules are checked on their table
/// (oddness holds by construction for all kinds).
pub fn validate_rule(rule: &RepresentationRule) -> Vec<RuleViolation> {
    let mut violations = Vec::new();
    if let RepresentationRule::Step { breakpoints, values } = rule {
        if values.len() != breakpoints.len() + 1 {
            violations.push(RuleViolation::ShapeMismatch {
                breakpoints: breakpoints.len(),
                values: values.len(),
            });
            return violations;
        }
        for &b in breakpoints {
            if !(b > 0.0 && b < 1.0) {
                violations.push(RuleViolation::BreakpointOutOfRange { value: b });
            }
        }
        if !breakpoints.windows(2).all(|w| w[0] < w[1]) {
            violations.push(RuleViolation::UnsortedBreakpoints);
        }
        for &v in values {
            if !(0.0..=1.0).contains(&v) || v.is_nan() {
                violations.push(RuleViolation::ValueOutOfRange { value: v });
            }
        }
        for (i, pair) in values.windows(2).enumerate() {
            if pair[1] < pair[0] {
                violations.push(RuleViolation::Decreasing { at_index: i + 1 });
            }
        }
        if values.iter().all(|&v| v == 0.0) {
            violations.push(RuleViolation::IdenticallyZero);
        }
    }
    violations
}

/// Evaluates r(x); errors when |x| > 1.
///
/// Oddness is exact by construction: the result for -x is the bitwise
/// negation of the result for x.
pub fn eval_rule(rule: &RepresentationRule, x: f64) -> Result<f64, ModelError> {
    if !(-1.0..=1.0).contains(&x) || x.is_nan() {
        return Err(ModelError::DomainExceeded { x });
    }
    Ok(eval_rule_unchecked(rule, x))
}

/// Rule evaluation without the domain check, for sampling hot loops where
/// margins already lie in [-1, 1].
#[inline]
pub fn eval_rule_unchecked(rule: &RepresentationRule, x: f64) -> f64 {
    match rule {
        RepresentationRule::WinnerTakeAll => {
            if x > 0.0 {
                1.0
            } else if x < 0.0 {
                -1.0
            } else {
                0.0
            }
        }
        RepresentationRule::Proportional => x,
        RepresentationRule::Step { breakpoints, values } => {
            if x == 0.0 {
                return 0.0;
            }
            let mag = x.abs();
            let j = breakpoints.partition_point(|&b| b <= mag);
            let v = values[j];
            if x > 0.0 {
                v
            } else {
                -v
            }
        }
    }
}

/// Strictly ascending interior breakpoints of a step rule, empty for named
/// rules; used to register quadrature split points.
pub fn rule_jump_points(rule: &RepresentationRule) -> Vec<f64> {
    match rule {
        RepresentationRule::Step { breakpoints, .. } => breakpoints.clone(),
        _ => Vec::new(),
    }
}

/// Symmetric nondegenerate law of the group vote margin on [-1, 1].
#[derive(Debug, Clone, PartialEq)]
pub enum MarginDistribution {
    /// +-1 equiprobable.
    Rademacher,
    /// Uniform on [-1, 1].
    Uniform,
    /// X = 2B - 1 with B ~ Beta(alpha, alpha).
    SymmetricBeta { alpha: f64 },
    /// Finite symmetric support.
    DiscreteSymmetric(DiscreteMargin),
}

/// Finite support margin: atoms on [0, 1] mirrored to negative values.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMargin {
    /// Full mirrored support, ascending.
    support: Vec<f64>,
    /// Probability of each support point.
    probs: Vec<f64>,
    /// Cumulative probabilities for sampling.
    cum: Vec<f64>,
    second_moment: f64,
}

impl DiscreteMargin {
    /// Builds the mirrored distribution from atoms on [0, 1].
    ///
    /// `points` must be strictly ascending in [0, 1]; `probs` positive and
    /// summing to 1 within 1e-12. An atom at 0 is allowed only alongside
    /// positive mass elsewhere (nondegeneracy).
    pub fn new(points: Vec<f64>, probs: Vec<f64>) -> Result<Self, ModelError> {
        if points.is_empty() || points.len() != probs.len() {
            return Err(ModelError::BadProbabilities { sum: 0.0 });
        }
        if !points.windows(2).all(|w| w[0] < w[1]) {
            return Err(ModelError::UnsortedSupport);
        }
        for &x in &points {
            if !(0.0..=1.0).contains(&x) || x.is_nan() {
                return Err(ModelError::SupportOutOfRange { value: x });
            }
        }
        let sum: f64 = probs.iter().sum();
        if probs.iter().any(|&p| p.is_nan() || p <= 0.0) || (sum - 1.0).abs() > PROB_TOL {
            return Err(ModelError::BadProbabilities { sum });
        }
        if points.iter().zip(&probs).all(|(&x, _)| x == 0.0) {
            return Err(ModelError::DegenerateMargin);
        }

        let mut support = Vec::new();
        let mut mirrored = Vec::new();
        for (&x, &p) in points.iter().zip(&probs).rev() {
            if x > 0.0 {
                support.push(-x);
                mirrored.push(p / 2.0);
            }
        }
        for (&x, &p) in points.iter().zip(&probs) {
            if x == 0.0 {
                support.push(0.0);
                mirrored.push(p);
            } else {
                support.push(x);
                mirrored.push(p / 2.0);
            }
        }
        let mut cum = Vec::with_capacity(mirrored.len());
        let mut acc = 0.0;
        for &p in &mirrored {
            acc += p;
            cum.push(acc);
        }
        let second_moment = support.iter().zip(&mirrored).map(|(&x, &p)| p * x * x).sum();
        Ok(Self {
            support,
            probs: mirrored,
            cum,
            second_moment,
        })
    }

    /// Full mirrored support, ascending.
    pub fn support(&self) -> &[f64] {
        &self.support
    }

    /// Probability attached to each support point.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }
}

impl MarginDistribution {
    /// Symmetric beta margin X = 2B - 1, B ~ Beta(alpha, alpha), alpha > 0.
    pub fn symmetric_beta(alpha: f64) -> Result<Self, ModelError> {
        if alpha > 0.0 && alpha.is_finite() {
            Ok(MarginDistribution::SymmetricBeta { alpha })
        } else {
            Err(ModelError::BadParameter { what: "beta shape", value: alpha })
        }
    }

    /// One draw; the sequence from a fixed stream is reproducible.
    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            MarginDistribution::Rademacher => {
                if rng.gen::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            MarginDistribution::Uniform => 2.0 * rng.gen::<f64>() - 1.0,
            MarginDistribution::SymmetricBeta { alpha } => {
                let beta = Beta::new(*alpha, *alpha).expect("validated shape");
                2.0 * beta.sample(rng) - 1.0
            }
            MarginDistribution::DiscreteSymmetric(d) => {
                let u: f64 = rng.gen();
                let idx = d.cum.partition_point(|&c| c <= u).min(d.support.len() - 1);
                d.support[idx]
            }
        }
    }

    /// E[X^2], analytic.
    pub fn second_moment(&self) -> f64 {
        match self {
            MarginDistribution::Rademacher => 1.0,
            MarginDistribution::Uniform => 1.0 / 3.0,
            MarginDistribution::SymmetricBeta { alpha } => 1.0 / (2.0 * alpha + 1.0),
            MarginDistribution::DiscreteSymmetric(d) => d.second_moment,
        }
    }

    /// Full support enumeration as (value, probability), ascending; None for
    /// continuous distributions.
    pub fn enumeration(&self) -> Option<Vec<(f64, f64)>> {
        match self {
            MarginDistribution::Rademacher => Some(vec![(-1.0, 0.5), (1.0, 0.5)]),
            MarginDistribution::DiscreteSymmetric(d) => {
                Some(d.support.iter().copied().zip(d.probs.iter().copied()).collect())
            }
            _ => None,
        }
    }

    pub fn is_discrete(&self) -> bool {
        matches!(
            self,
            MarginDistribution::Rademacher | MarginDistribution::DiscreteSymmetric(_)
        )
    }

    /// Lebesgue density on [-1, 1]; None for discrete distributions.
    pub fn density(&self, x: f64) -> Option<f64> {
        match self {
            MarginDistribution::Rademacher | MarginDistribution::DiscreteSymmetric(_) => None,
            MarginDistribution::Uniform => Some(if (-1.0..=1.0).contains(&x) { 0.5 } else { 0.0 }),
            MarginDistribution::SymmetricBeta { alpha } => {
                if !(-1.0..=1.0).contains(&x) {
                    return Some(0.0);
                }
                // Density of 2B - 1: (1 - x^2)^(alpha - 1) / (2^(2 alpha - 1) B(alpha, alpha)).
                let log_c = -(2.0 * alpha - 1.0) * std::f64::consts::LN_2 - ln_beta(*alpha, *alpha);
                Some((log_c + (alpha - 1.0) * (1.0 - x * x).ln()).exp())
            }
        }
    }
}

/// One draw from `dist` using `rng`.
pub fn sample_margin<R: Rng + ?Sized>(dist: &MarginDistribution, rng: &mut R) -> f64 {
    dist.sample(rng)
}
