//! JSON run configuration and its conversion to core types.

use std::error::Error;
use std::fmt;

use serde::{Deserialize, Serialize};
use welfare_core::engine::{SimulationSpec, SizeGenerator};
use welfare_core::extensions::{
    EpsilonCdf, IndepModel, IndepRule, IndepSpec, IntensityModel, IntensitySpec, TabulatedCdf,
};
use welfare_core::model::{
    DiscreteMargin, LimitDist, MarginDistribution, RepresentationRule, Society, WeightAllocation,
    WeightLaw,
};

/// Configuration rejected before any work started.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Error for ConfigError {}

fn bad<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    #[default]
    Correlated,
    Intensity,
    Independent,
}

impl ModelKind {
    pub fn tag(self) -> &'static str {
        match self {
            ModelKind::Correlated => "correlated",
            ModelKind::Intensity => "intensity",
            ModelKind::Independent => "independent",
        }
    }
}

/// Limiting size distribution, given as atoms with optional probabilities
/// (omitted probabilities mean uniform).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitConfig {
    pub support: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probs: Option<Vec<f64>>,
}

impl LimitConfig {
    pub fn to_core(&self) -> Result<LimitDist, ConfigError> {
        let dist = match &self.probs {
            Some(probs) => LimitDist::new(self.support.clone(), probs.clone()),
            None => LimitDist::uniform(self.support.clone()),
        };
        dist.map_err(|e| ConfigError(format!("society.limit: {e}")))
    }
}

/// Society given inline, as a cycled pattern, or drawn from a limit law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SocietyConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sizes: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pattern: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit: Option<LimitConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size_bound: Option<f64>,
}

impl SocietyConfig {
    /// Realizes the group sizes; limit societies draw from an auxiliary
    /// stream keyed by (seed, n), so results are reproducible.
    pub fn build(&self, seed: u64) -> Result<Society, ConfigError> {
        let given = self.sizes.is_some() as u8 + self.pattern.is_some() as u8 + self.limit.is_some() as u8;
        if given != 1 {
            return bad("society: give exactly one of sizes, pattern, or limit");
        }
        let sizes = if let Some(sizes) = &self.sizes {
            if self.n.is_some() {
                return bad("society.n applies to pattern or limit, not inline sizes");
            }
            sizes.clone()
        } else {
            let n = match self.n {
                Some(n) if n > 0 => n,
                _ => return bad("society: pattern and limit need n >= 1"),
            };
            if let Some(pattern) = &self.pattern {
                if pattern.is_empty() {
                    return bad("society.pattern must not be empty");
                }
                SizeGenerator::Repeat(pattern.clone()).sizes_for(n, seed)
            } else {
                let limit = self.limit.as_ref().unwrap().to_core()?;
                SizeGenerator::FromLimit(limit).sizes_for(n, seed)
            }
        };
        let mut society = match self.size_bound {
            Some(bound) => Society::with_bound(sizes, bound),
            None => Society::new(sizes),
        }
        .map_err(|e| ConfigError(format!("society: {e}")))?;
        if let Some(limit) = &self.limit {
            society = society.with_limit(limit.to_core()?);
        }
        Ok(society)
    }

    /// Size generator for convergence sweeps.
    pub fn generator(&self) -> Result<SizeGenerator, ConfigError> {
        if let Some(limit) = &self.limit {
            return Ok(SizeGenerator::FromLimit(limit.to_core()?));
        }
        let pattern = self
            .pattern
            .as_ref()
            .or(self.sizes.as_ref())
            .ok_or_else(|| ConfigError("society: give sizes, pattern, or limit".into()))?;
        if pattern.is_empty() {
            return bad("society pattern must not be empty");
        }
        Ok(SizeGenerator::Repeat(pattern.clone()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LawConfig {
    Proportional,
    Constant,
    Power { gamma: f64 },
    Table { thresholds: Vec<f64>, values: Vec<f64> },
}

impl LawConfig {
    fn to_core(&self) -> WeightLaw {
        match self {
            LawConfig::Proportional => WeightLaw::Proportional,
            LawConfig::Constant => WeightLaw::Constant,
            LawConfig::Power { gamma } => WeightLaw::Power { gamma: *gamma },
            LawConfig::Table { thresholds, values } => WeightLaw::Table {
                thresholds: thresholds.clone(),
                values: values.clone(),
            },
        }
    }
}

/// Weight allocation: explicit per-group weights or a law of group size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AllocationConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub explicit: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub law: Option<LawConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight_bound: Option<f64>,
}

impl AllocationConfig {
    pub fn build(&self) -> Result<WeightAllocation, ConfigError> {
        let alloc = match (&self.explicit, &self.law) {
            (Some(weights), None) => match self.weight_bound {
                Some(bound) => WeightAllocation::explicit_with_bound(weights.clone(), bound),
                None => WeightAllocation::explicit(weights.clone()),
            },
            (None, Some(law)) => match self.weight_bound {
                Some(bound) => WeightAllocation::law_with_bound(law.to_core(), bound),
                None => WeightAllocation::law(law.to_core()),
            },
            _ => return bad("allocation: give exactly one of explicit or law"),
        };
        alloc.map_err(|e| ConfigError(format!("allocation: {e}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum RuleConfig {
    #[default]
    WinnerTakeAll,
    Proportional,
    Step { breakpoints: Vec<f64>, values: Vec<f64> },
}

impl RuleConfig {
    pub fn to_core(&self) -> Result<RepresentationRule, ConfigError> {
        match self {
            RuleConfig::WinnerTakeAll => Ok(RepresentationRule::WinnerTakeAll),
            RuleConfig::Proportional => Ok(RepresentationRule::Proportional),
            RuleConfig::Step { breakpoints, values } => {
                RepresentationRule::step(breakpoints.clone(), values.clone())
                    .map_err(|e| ConfigError(format!("rule: {e}")))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum MarginConfig {
    Rademacher,
    #[default]
    Uniform,
    SymmetricBeta { alpha: f64 },
    Discrete { support: Vec<f64>, probs: Vec<f64> },
}

impl MarginConfig {
    pub fn to_core(&self) -> Result<MarginDistribution, ConfigError> {
        match self {
            MarginConfig::Rademacher => Ok(MarginDistribution::Rademacher),
            MarginConfig::Uniform => Ok(MarginDistribution::Uniform),
            MarginConfig::SymmetricBeta { alpha } => MarginDistribution::symmetric_beta(*alpha)
                .map_err(|e| ConfigError(format!("margin: {e}"))),
            MarginConfig::Discrete { support, probs } => {
                DiscreteMargin::new(support.clone(), probs.clone())
                    .map(MarginDistribution::DiscreteSymmetric)
                    .map_err(|e| ConfigError(format!("margin: {e}")))
            }
        }
    }
}

/// Noise CDF for the intensity model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EpsConfig {
    Uniform { half_width: f64 },
    SymmetricBeta { alpha: f64, half_width: f64 },
    Table { xs: Vec<f64>, gs: Vec<f64> },
}

impl EpsConfig {
    pub fn to_core(&self) -> Result<EpsilonCdf, ConfigError> {
        match self {
            EpsConfig::Uniform { half_width } => EpsilonCdf::uniform(*half_width),
            EpsConfig::SymmetricBeta { alpha, half_width } => {
                EpsilonCdf::symmetric_beta(*alpha, *half_width)
            }
            EpsConfig::Table { xs, gs } => {
                TabulatedCdf::new(xs.clone(), gs.clone()).map(EpsilonCdf::Table)
            }
        }
        .map_err(|e| ConfigError(format!("eps: {e}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompareConfig {
    pub allocation_b: AllocationConfig,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
}

fn default_alpha() -> f64 {
    0.05
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConvergeConfig {
    pub n_values: Vec<usize>,
}

fn default_samples() -> u64 {
    100_000
}

/// One run's complete description; a single JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub model: ModelKind,
    pub society: SocietyConfig,
    pub allocation: AllocationConfig,
    #[serde(default)]
    pub rule: RuleConfig,
    #[serde(default)]
    pub margin: MarginConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<EpsConfig>,
    #[serde(default = "default_samples")]
    pub samples: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chunk_size: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_cap: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(default)]
    pub write_samples: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compare: Option<CompareConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub converge: Option<ConvergeConfig>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError(format!("config parse error: {e}")))
    }

    pub fn build_society(&self) -> Result<Society, ConfigError> {
        self.society.build(self.seed)
    }

    /// Correlated-model simulation spec, optionally with a substitute
    /// allocation (for compare) and seed.
    pub fn sim_spec_with(
        &self,
        alloc_cfg: &AllocationConfig,
        seed: u64,
    ) -> Result<SimulationSpec, ConfigError> {
        let mut spec = SimulationSpec::new(
            self.build_society()?,
            alloc_cfg.build()?,
            self.rule.to_core()?,
            self.margin.to_core()?,
            self.samples,
            seed,
        );
        if let Some(chunk) = self.chunk_size {
            spec.chunk_size = chunk;
        }
        if let Some(cap) = self.sample_cap {
            spec.sample_cap = cap;
        }
        Ok(spec)
    }

    pub fn sim_spec(&self) -> Result<SimulationSpec, ConfigError> {
        self.sim_spec_with(&self.allocation, self.seed)
    }

    /// Intensity model from the margin (read as the intensity law) and eps.
    pub fn intensity_model(&self) -> Result<IntensityModel, ConfigError> {
        let eps = self
            .eps
            .as_ref()
            .ok_or_else(|| ConfigError("intensity model requires an eps noise CDF".into()))?
            .to_core()?;
        IntensityModel::new(self.margin.to_core()?, eps)
            .map_err(|e| ConfigError(format!("intensity model: {e}")))
    }

    pub fn intensity_spec(&self) -> Result<IntensitySpec, ConfigError> {
        let mut spec = IntensitySpec::new(
            self.intensity_model()?,
            self.build_society()?,
            self.allocation.build()?,
            self.rule.to_core()?,
            self.samples,
            self.seed,
        );
        if let Some(chunk) = self.chunk_size {
            spec.chunk_size = chunk;
        }
        if let Some(cap) = self.sample_cap {
            spec.sample_cap = cap;
        }
        Ok(spec)
    }

    pub fn indep_rule(&self) -> Result<IndepRule, ConfigError> {
        match self.rule {
            RuleConfig::WinnerTakeAll => Ok(IndepRule::WinnerTakeAll),
            RuleConfig::Proportional => Ok(IndepRule::Proportional),
            RuleConfig::Step { .. } => {
                bad("independent model supports winner_take_all or proportional rules only")
            }
        }
    }

    pub fn indep_spec(&self) -> Result<IndepSpec, ConfigError> {
        let society = self.build_society()?;
        let alloc = self.allocation.build()?;
        let weights = alloc
            .materialize(&society)
            .map_err(|e| ConfigError(format!("allocation: {e}")))?;
        let model = IndepModel::new(society.sizes().to_vec(), self.indep_rule()?)
            .map_err(|e| ConfigError(format!("independent model: {e}")))?;
        let mut spec = IndepSpec::new(model, weights, self.samples, self.seed);
        if let Some(chunk) = self.chunk_size {
            spec.chunk_size = chunk;
        }
        if let Some(cap) = self.sample_cap {
            spec.sample_cap = cap;
        }
        Ok(spec)
    }
}
