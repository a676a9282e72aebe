//! Welfare analysis of two-tier voting systems.
//!
//! Groups of unequal size each aggregate their members' preferences into a
//! margin, a representation rule maps margins to council votes, and the
//! council's weighted decision either matches or inverts the popular
//! welfare optimum. This crate measures how well a voting-weight
//! allocation performs under that process:
//!
//! - [`engine`]: Monte Carlo simulation of the normalized welfare W with
//!   deterministic, thread-count-independent streams.
//! - [`analytics`]: closed-form asymptotics; the limiting law of W is skew
//!   normal with shape driven by a cosine-similarity index.
//! - [`oracle`]: exact enumeration for discrete margins, in floats or
//!   rationals, used to validate the simulator.
//! - [`stats`]: empirical CDF machinery, dominance tests with DKW bands,
//!   skew-normal evaluation, adaptive quadrature.
//! - [`extensions`]: preference-intensity and independent-preference
//!   variants of the base model.
//! - [`model`]: shared domain types (societies, weight allocations,
//!   representation rules, margin distributions).

pub mod analytics;
pub mod engine;
pub mod extensions;
pub mod model;
pub mod oracle;
pub mod stats;
pub mod streams;

pub use analytics::{
    asymptotic_objectives, cosine, cosine_limit, hat_c_sqrt, lambda_param, rho, sainte_lague,
    sqrt_cosine_limit, AnalyticsError, AsymptoticProfile,
};
pub use engine::{
    convergence_sweep, estimate_objectives, simulate, simulate_negated, EngineError, Estimates,
    SimulationResult, SimulationSpec, SizeGenerator, StdErrors, SweepRow, WelfareDistribution,
};
pub use extensions::{
    centered_second_moment, indep_asymptotic_p, indep_st_correlation, rho_intensity,
    simulate_indep, simulate_indep_finite, simulate_intensity, EpsilonCdf, ExtensionsError,
    IndepModel, IndepRule, IndepSpec, IntensityModel, IntensitySpec, TabulatedCdf,
};
pub use model::{
    LimitDist, MarginDistribution, ModelError, RepresentationRule, Society, WeightAllocation,
    WeightLaw,
};
pub use oracle::{
    exact_vs_simulation, exact_welfare, exact_welfare_rational, Atom, ComparisonReport,
    ExactDistribution, OracleError, RationalAtom, RationalExact,
};
pub use stats::{
    dkw_epsilon, dominates, ks_distance, CdfSketch, Dominance, EmpiricalWelfare, SampleMeta,
    SkewNormal,
};
