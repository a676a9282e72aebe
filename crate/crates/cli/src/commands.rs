//! The five commands behind the welfare-order binary.

use std::error::Error;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use welfare_core::analytics::{
    asymptotic_objectives, cosine, cosine_limit, hat_c_sqrt, rho, sainte_lague, sqrt_cosine_limit,
    AnalyticsError, AsymptoticProfile,
};
use welfare_core::engine::{convergence_sweep, simulate, EngineError, SimulationResult};
use welfare_core::extensions::{
    rho_intensity, simulate_indep, simulate_indep_finite, simulate_intensity, ExtensionsError,
    IndepRule,
};
use welfare_core::model::{ModelError, Society, WeightAllocation};
use welfare_core::oracle::{exact_welfare_with_budget, OracleError, DEFAULT_BUDGET};
use welfare_core::stats::{cdf_gaps, dkw_epsilon, dominates, Dominance, SkewNormal};

use crate::config::{ConfigError, ModelKind, RunConfig};
use crate::io::{atoms_csv, converge_csv, samples_csv, Json};

/// Command failure with its process exit code.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Invalid configuration or model domain (exit 2).
    Config(String),
    /// Enumeration budget exceeded (exit 3).
    Budget(String),
    /// Runtime failure: io or numerical (exit 4).
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Runtime(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) | CliError::Budget(msg) | CliError::Runtime(msg) => {
                write!(f, "{msg}")
            }
        }
    }
}

impl Error for CliError {}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.0)
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<AnalyticsError> for CliError {
    fn from(e: AnalyticsError) -> Self {
        match e {
            AnalyticsError::Quadrature(_) => CliError::Runtime(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<ExtensionsError> for CliError {
    fn from(e: ExtensionsError) -> Self {
        match e {
            ExtensionsError::Quadrature(_) => CliError::Runtime(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

fn write_out(dir: &Path, name: &str, text: &str) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    fs::write(&path, text)
        .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

/// Finite-n square-root proportionality: cosine between sqrt-sizes and
/// weights, the winner-take-all index of the independent model.
fn sqrt_cosine(sizes: &[f64], weights: &[f64]) -> f64 {
    let num: f64 = sizes.iter().zip(weights).map(|(s, a)| s.sqrt() * a).sum();
    let den = (sizes.iter().sum::<f64>() * weights.iter().map(|a| a * a).sum::<f64>()).sqrt();
    num / den
}

fn materialized(cfg: &RunConfig) -> Result<(Society, WeightAllocation, Vec<f64>), CliError> {
    let society = cfg.build_society()?;
    let alloc = cfg.allocation.build()?;
    let weights = alloc.materialize(&society)?;
    Ok((society, alloc, weights))
}

/// The asymptotic profile the configured model is expected to approach, and
/// which finite index stands in for the limiting cosine.
fn model_profile(
    cfg: &RunConfig,
    society: &Society,
    alloc: &WeightAllocation,
    weights: &[f64],
) -> Result<AsymptoticProfile, CliError> {
    let sizes = society.sizes();
    match cfg.model {
        ModelKind::Correlated | ModelKind::Intensity => {
            let correlation = match cfg.model {
                ModelKind::Correlated => rho(&cfg.margin.to_core()?, &cfg.rule.to_core()?)?,
                _ => rho_intensity(&cfg.intensity_model()?, &cfg.rule.to_core()?)?,
            };
            let c_star = match (society.limit_dist(), alloc.as_law()) {
                (Some(limit), Some(_)) => cosine_limit(limit, alloc)?,
                _ => cosine(sizes, weights)?,
            };
            Ok(asymptotic_objectives(correlation, c_star)?)
        }
        ModelKind::Independent => {
            let t = match cfg.indep_rule()? {
                IndepRule::Proportional => hat_c_sqrt(sizes, weights)?,
                IndepRule::WinnerTakeAll => {
                    let c_sqrt = match (society.limit_dist(), alloc.as_law()) {
                        (Some(limit), Some(_)) => sqrt_cosine_limit(limit, alloc)?,
                        _ => sqrt_cosine(sizes, weights),
                    };
                    (2.0 / std::f64::consts::PI).sqrt() * c_sqrt
                }
            };
            Ok(asymptotic_objectives(1.0, t.min(1.0))?)
        }
    }
}

pub fn cmd_indices(cfg: &RunConfig, out_dir: &Path) -> Result<(), CliError> {
    let (society, alloc, weights) = materialized(cfg)?;
    let sizes = society.sizes();
    let cos = cosine(sizes, &weights)?;
    let hat = hat_c_sqrt(sizes, &weights)?;
    let sl = sainte_lague(sizes, &weights)?;
    let mut fields = vec![
        ("model", Json::Str(cfg.model.tag().into())),
        ("n", Json::UInt(sizes.len() as u64)),
        ("cosine", Json::Float(cos)),
        ("hat_c_sqrt", Json::Float(hat)),
        ("c_sqrt", Json::Float(sqrt_cosine(sizes, &weights))),
        ("sainte_lague", Json::Float(sl)),
    ];
    if let (Some(limit), Some(_)) = (society.limit_dist(), alloc.as_law()) {
        fields.push(("cosine_limit", Json::Float(cosine_limit(limit, &alloc)?)));
        fields.push((
            "sqrt_cosine_limit",
            Json::Float(sqrt_cosine_limit(limit, &alloc)?),
        ));
    }
    let profile = model_profile(cfg, &society, &alloc, &weights)?;
    fields.push(("rho", Json::Float(profile.rho)));
    fields.push(("lambda", Json::Float(profile.lambda)));
    fields.push(("u_limit", Json::Float(profile.u_limit)));
    fields.push(("delta_limit", Json::Float(profile.delta_limit)));
    fields.push(("p_limit", Json::Float(profile.p_limit)));
    let path = write_out(out_dir, "indices.json", &Json::obj(fields).render())?;
    println!(
        "indices: cosine {cos:.6} hat_c_sqrt {hat:.6} sainte_lague {sl:.6} -> {}",
        path.display()
    );
    Ok(())
}

fn run_model(cfg: &RunConfig) -> Result<SimulationResult, CliError> {
    match cfg.model {
        ModelKind::Correlated => Ok(simulate(&cfg.sim_spec()?)?),
        ModelKind::Intensity => Ok(simulate_intensity(&cfg.intensity_spec()?)?),
        ModelKind::Independent => {
            let spec = cfg.indep_spec()?;
            match cfg.kappa {
                Some(kappa) => Ok(simulate_indep_finite(&spec, kappa)?),
                None => Ok(simulate_indep(&spec)?),
            }
        }
    }
}

pub fn cmd_simulate(cfg: &RunConfig, out_dir: &Path) -> Result<(), CliError> {
    let (society, alloc, weights) = materialized(cfg)?;
    let profile = model_profile(cfg, &society, &alloc, &weights)?;
    let result = run_model(cfg)?;
    let sn = SkewNormal::new(profile.lambda)
        .map_err(|e| CliError::Runtime(format!("skew normal: {e}")))?;
    let ks = result.welfare.ks_distance_to_sn(&sn);
    let mut fields = vec![
        ("model", Json::Str(result.model.into())),
        ("n", Json::UInt(society.len() as u64)),
        ("samples", Json::UInt(result.samples)),
        ("seed", Json::UInt(result.seed)),
        ("sigma", Json::Float(result.sigma)),
        ("u_hat", Json::Float(result.u_hat)),
        ("delta_hat", Json::Float(result.delta_hat)),
        ("p_hat", Json::Float(result.p_hat)),
        ("u_se", Json::Float(result.std_errors.u)),
        ("delta_se", Json::Float(result.std_errors.delta)),
        ("p_se", Json::Float(result.std_errors.p)),
        ("tie_count", Json::UInt(result.tie_count)),
    ];
    if cfg.model != ModelKind::Independent {
        fields.push(("rho", Json::Float(profile.rho)));
    }
    fields.push(("lambda", Json::Float(profile.lambda)));
    fields.push(("u_limit", Json::Float(profile.u_limit)));
    fields.push(("delta_limit", Json::Float(profile.delta_limit)));
    fields.push(("p_limit", Json::Float(profile.p_limit)));
    fields.push(("ks", Json::Float(ks)));
    let path = write_out(out_dir, "result.json", &Json::obj(fields).render())?;
    if cfg.write_samples {
        if result.welfare_ordered.is_empty() {
            return Err(CliError::Config(
                "write_samples requires samples <= sample_cap".into(),
            ));
        }
        write_out(
            out_dir,
            "samples.csv",
            &samples_csv(&result.welfare_ordered, &result.s_norm_ordered),
        )?;
    }
    println!(
        "simulate[{}]: u_hat {:.6} delta_hat {:.6} p_hat {:.6} ties {} -> {}",
        result.model,
        result.u_hat,
        result.delta_hat,
        result.p_hat,
        result.tie_count,
        path.display()
    );
    Ok(())
}

pub fn cmd_exact(cfg: &RunConfig, out_dir: &Path) -> Result<(), CliError> {
    if cfg.model != ModelKind::Correlated {
        return Err(CliError::Config(
            "exact mode requires the correlated model".into(),
        ));
    }
    let (society, alloc, _) = materialized(cfg)?;
    let budget = cfg.budget.unwrap_or(DEFAULT_BUDGET);
    let exact = exact_welfare_with_budget(
        &society,
        &alloc,
        &cfg.rule.to_core()?,
        &cfg.margin.to_core()?,
        budget,
    )?;
    let fields = vec![
        ("model", Json::Str("correlated".into())),
        ("n", Json::UInt(society.len() as u64)),
        ("sigma", Json::Float(exact.sigma)),
        ("u", Json::Float(exact.u)),
        ("delta", Json::Float(exact.delta)),
        ("p", Json::Float(exact.p)),
        ("atom_count", Json::UInt(exact.atoms.len() as u64)),
    ];
    let path = write_out(out_dir, "exact.json", &Json::obj(fields).render())?;
    write_out(out_dir, "atoms.csv", &atoms_csv(&exact.atoms))?;
    println!(
        "exact: u {:.6} delta {:.6} p {:.6} atoms {} -> {}",
        exact.u,
        exact.delta,
        exact.p,
        exact.atoms.len(),
        path.display()
    );
    Ok(())
}

pub fn cmd_compare(cfg: &RunConfig, out_dir: &Path) -> Result<(), CliError> {
    if cfg.model != ModelKind::Correlated {
        return Err(CliError::Config(
            "compare requires the correlated model".into(),
        ));
    }
    let cmp = cfg
        .compare
        .as_ref()
        .ok_or_else(|| CliError::Config("compare requires a compare section".into()))?;
    let spec_a = cfg.sim_spec()?;
    if cfg.samples > spec_a.sample_cap {
        return Err(CliError::Config(
            "compare requires samples <= sample_cap".into(),
        ));
    }
    let seed_b = cfg.seed.wrapping_add(1);
    let spec_b = cfg.sim_spec_with(&cmp.allocation_b, seed_b)?;
    let society = cfg.build_society()?;
    let weights_a = cfg.allocation.build()?.materialize(&society)?;
    let weights_b = cmp.allocation_b.build()?.materialize(&society)?;
    let cosine_a = cosine(society.sizes(), &weights_a)?;
    let cosine_b = cosine(society.sizes(), &weights_b)?;
    let result_a = simulate(&spec_a)?;
    let result_b = simulate(&spec_b)?;
    let emp_a = result_a.welfare.as_empirical().expect("retained samples");
    let emp_b = result_b.welfare.as_empirical().expect("retained samples");
    let verdict = dominates(emp_a, emp_b, cmp.alpha)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let (sup_ab, sup_ba) = cdf_gaps(emp_a, emp_b);
    let epsilon = dkw_epsilon(emp_a.len(), emp_b.len(), cmp.alpha);
    // Dominance in welfare means a smaller CDF; agreement checks the verdict
    // against the cosine ordering, within a tolerance for cosine ties.
    let agreement = match verdict {
        Dominance::Dominates => cosine_a >= cosine_b - 1e-12,
        Dominance::Dominated => cosine_b >= cosine_a - 1e-12,
        Dominance::Incomparable { statistically_equal } => statistically_equal,
    };
    let statistically_equal =
        verdict == Dominance::Incomparable { statistically_equal: true };
    let fields = vec![
        ("model", Json::Str("correlated".into())),
        ("n", Json::UInt(society.len() as u64)),
        ("samples", Json::UInt(cfg.samples)),
        ("alpha", Json::Float(cmp.alpha)),
        ("seed_a", Json::UInt(cfg.seed)),
        ("seed_b", Json::UInt(seed_b)),
        ("cosine_a", Json::Float(cosine_a)),
        ("cosine_b", Json::Float(cosine_b)),
        ("sup_a_minus_b", Json::Float(sup_ab)),
        ("sup_b_minus_a", Json::Float(sup_ba)),
        ("epsilon", Json::Float(epsilon)),
        ("verdict", Json::Str(verdict.to_string())),
        ("statistically_equal", Json::Bool(statistically_equal)),
        ("agreement", Json::Bool(agreement)),
    ];
    let path = write_out(out_dir, "compare.json", &Json::obj(fields).render())?;
    println!(
        "compare: {verdict} (cosine {cosine_a:.6} vs {cosine_b:.6}, agreement {agreement}) -> {}",
        path.display()
    );
    Ok(())
}

pub fn cmd_converge(cfg: &RunConfig, out_dir: &Path) -> Result<(), CliError> {
    if cfg.model != ModelKind::Correlated {
        return Err(CliError::Config(
            "converge requires the correlated model".into(),
        ));
    }
    let conv = cfg
        .converge
        .as_ref()
        .ok_or_else(|| CliError::Config("converge requires a converge section".into()))?;
    let base = cfg.sim_spec()?;
    let generator = cfg.society.generator()?;
    let rows = convergence_sweep(&base, &conv.n_values, &generator)?;
    let path = write_out(out_dir, "converge.csv", &converge_csv(&rows))?;
    println!("converge: {} rows -> {}", rows.len(), path.display());
    Ok(())
}
