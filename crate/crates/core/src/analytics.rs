//! Proportionality indices, the margin-representation correlation, and the
//! closed-form asymptotic objectives.

use std::error::Error;
use std::fmt;

use crate::model::{
    eval_rule_unchecked, rule_jump_points, LimitDist, MarginDistribution, RepresentationRule,
    WeightAllocation,
};
use crate::stats::{integrate_with_splits, QuadratureError};

/// Per-integral quadrature tolerance; two integrals combine to the advertised
/// 1e-12 budget for the correlation.
const RHO_TOL: f64 = 1e-13;

/// Window around |rho c*| = 1 mapped to an infinite shape parameter.
const BOUNDARY_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub enum AnalyticsError {
    LengthMismatch { left: usize, right: usize },
    NonPositiveSize { index: usize, value: f64 },
    ZeroNorm,
    NonPositiveRho { value: f64 },
    ParameterOutOfRange { what: &'static str, value: f64 },
    LawRequired,
    Quadrature(QuadratureError),
}

impl fmt::Display for AnalyticsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnalyticsError::LengthMismatch { left, right } => {
                write!(f, "size and weight lists differ in length: {left} vs {right}")
            }
            AnalyticsError::NonPositiveSize { index, value } => {
                write!(f, "size at index {index} must be positive, got {value}")
            }
            AnalyticsError::ZeroNorm => write!(f, "weight vector has zero norm"),
            AnalyticsError::NonPositiveRho { value } => write!(
                f,
                "margin-representation correlation must be positive, got {value}; the rule is degenerate on this margin's support"
            ),
            AnalyticsError::ParameterOutOfRange { what, value } => {
                write!(f, "{what} out of range: {value}")
            }
            AnalyticsError::LawRequired => {
                write!(f, "limit indices need a law allocation, not explicit weights")
            }
            AnalyticsError::Quadrature(e) => write!(f, "quadrature failed: {e}"),
        }
    }
}

impl Error for AnalyticsError {}

impl From<QuadratureError> for AnalyticsError {
    fn from(e: QuadratureError) -> Self {
        AnalyticsError::Quadrature(e)
    }
}

/// Asymptotic description of one allocation: correlation, cosine limit, the
/// skew-normal shape, and the three objective limits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticProfile {
    /// Corr(X, r(X)) in (0, 1].
    pub rho: f64,
    /// Asymptotic cosine proportionality in [-1, 1].
    pub c_star: f64,
    /// Skew-normal shape; +-infinity when |rho c*| reaches 1.
    pub lambda: f64,
    /// Limit of the expected welfare.
    pub u_limit: f64,
    /// Limit of the mean majority deficit.
    pub delta_limit: f64,
    /// Limit of the inversion probability.
    pub p_limit: f64,
}

/// Corr(X, r(X)) for a margin distribution and representation rule.
///
/// Named pairs use closed forms; discrete margins use exact sums; continuous
/// margins fall back to quadrature. Fails when the rule vanishes on the
/// margin's support.
pub fn rho(dist: &MarginDistribution, rule: &RepresentationRule) -> Result<f64, AnalyticsError> {
    if matches!(rule, RepresentationRule::Proportional) {
        return Ok(1.0);
    }
    if matches!(dist, MarginDistribution::Rademacher) {
        let r1 = eval_rule_unchecked(rule, 1.0);
        return if r1 > 0.0 {
            Ok(1.0)
        } else {
            Err(AnalyticsError::NonPositiveRho { value: 0.0 })
        };
    }
    if matches!(dist, MarginDistribution::Uniform) {
        return match rule {
            RepresentationRule::WinnerTakeAll => rho_uniform_step(&[], &[1.0]),
            RepresentationRule::Step { breakpoints, values } => rho_uniform_step(breakpoints, values),
            RepresentationRule::Proportional => unreachable!("handled above"),
        };
    }
    if let Some(atoms) = dist.enumeration() {
        let mut e_xr = 0.0;
        let mut e_rr = 0.0;
        for (x, p) in atoms {
            let r = eval_rule_unchecked(rule, x);
            e_xr += p * x * r;
            e_rr += p * r * r;
        }
        return finish_rho(e_xr, dist.second_moment(), e_rr);
    }
    rho_quadrature(dist, rule)
}

/// Correlation for uniform margins and a right-continuous step table on
/// [0, 1], by exact piecewise sums.
///
/// Winner-take-all is the empty table with single value 1.
pub fn rho_uniform_step(breakpoints: &[f64], values: &[f64]) -> Result<f64, AnalyticsError> {
    if values.len() != breakpoints.len() + 1 {
        return Err(AnalyticsError::LengthMismatch {
            left: breakpoints.len() + 1,
            right: values.len(),
        });
    }
    // X uniform on [-1, 1]: E[X r(X)] = int_0^1 x r(x) dx by symmetry, and
    // likewise E[r(X)^2] = int_0^1 r(x)^2 dx; each piece integrates exactly.
    let mut e_xr = 0.0;
    let mut e_rr = 0.0;
    for (j, &v) in values.iter().enumerate() {
        let lo = if j == 0 { 0.0 } else { breakpoints[j - 1] };
        let hi = if j == breakpoints.len() { 1.0 } else { breakpoints[j] };
        e_xr += v * (hi * hi - lo * lo) / 2.0;
        e_rr += v * v * (hi - lo);
    }
    finish_rho(e_xr, 1.0 / 3.0, e_rr)
}

/// Correlation by adaptive quadrature against the margin density, with the
/// rule's jump points registered as panel boundaries.
///
/// Only continuous margins have a density; discrete margins are served by
/// exact sums in [`rho`].
pub fn rho_quadrature(
    dist: &MarginDistribution,
    rule: &RepresentationRule,
) -> Result<f64, AnalyticsError> {
    if dist.is_discrete() {
        return Err(AnalyticsError::ParameterOutOfRange {
            what: "quadrature margin (must be continuous)",
            value: f64::NAN,
        });
    }
    let density = |x: f64| dist.density(x).expect("continuous margin");
    let splits = rule_jump_points(rule);
    // Both integrands are even (r is odd), so integrate over [0, 1] and double.
    let e_xr = 2.0
        * integrate_with_splits(
            |x| x * eval_rule_unchecked(rule, x) * density(x),
            0.0,
            1.0,
            &splits,
            RHO_TOL,
        )?;
    let e_rr = 2.0
        * integrate_with_splits(
            |x| {
                let r = eval_rule_unchecked(rule, x);
                r * r * density(x)
            },
            0.0,
            1.0,
            &splits,
            RHO_TOL,
        )?;
    finish_rho(e_xr, dist.second_moment(), e_rr)
}

fn finish_rho(e_xr: f64, e_xx: f64, e_rr: f64) -> Result<f64, AnalyticsError> {
    if e_rr <= 0.0 {
        return Err(AnalyticsError::NonPositiveRho { value: 0.0 });
    }
    let value = e_xr / (e_xx * e_rr).sqrt();
    if value > 0.0 {
        Ok(value)
    } else {
        Err(AnalyticsError::NonPositiveRho { value })
    }
}

/// Cosine of the angle between the size and weight vectors.
pub fn cosine(sizes: &[f64], weights: &[f64]) -> Result<f64, AnalyticsError> {
    let (dot, ss, aa) = vector_moments(sizes, weights)?;
    Ok(dot / (ss * aa).sqrt())
}

fn vector_moments(sizes: &[f64], weights: &[f64]) -> Result<(f64, f64, f64), AnalyticsError> {
    if sizes.len() != weights.len() {
        return Err(AnalyticsError::LengthMismatch { left: sizes.len(), right: weights.len() });
    }
    let mut dot = 0.0;
    let mut ss = 0.0;
    let mut aa = 0.0;
    for (index, (&s, &a)) in sizes.iter().zip(weights).enumerate() {
        if !(s > 0.0 && s.is_finite()) {
            return Err(AnalyticsError::NonPositiveSize { index, value: s });
        }
        dot += s * a;
        ss += s * s;
        aa += a * a;
    }
    if aa == 0.0 {
        return Err(AnalyticsError::ZeroNorm);
    }
    Ok((dot, ss, aa))
}

/// Large-n cosine proportionality of a law against a limiting size
/// distribution: an exact sum over the finite support.
pub fn cosine_limit(limit: &LimitDist, alloc: &WeightAllocation) -> Result<f64, AnalyticsError> {
    limit_index(limit, alloc, |s| s, |s| s * s)
}

/// The square-root analogue of the cosine limit.
pub fn sqrt_cosine_limit(limit: &LimitDist, alloc: &WeightAllocation) -> Result<f64, AnalyticsError> {
    limit_index(limit, alloc, f64::sqrt, |s| s)
}

fn limit_index<F, G>(
    limit: &LimitDist,
    alloc: &WeightAllocation,
    num_factor: F,
    den_factor: G,
) -> Result<f64, AnalyticsError>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    if alloc.as_law().is_none() {
        return Err(AnalyticsError::LawRequired);
    }
    let mut num = 0.0;
    let mut den_s = 0.0;
    let mut den_a = 0.0;
    for (&s, &p) in limit.support().iter().zip(limit.probs()) {
        let a = alloc.law_value(s).expect("law allocation");
        num += p * num_factor(s) * a;
        den_s += p * den_factor(s);
        den_a += p * a * a;
    }
    if den_a == 0.0 {
        return Err(AnalyticsError::ZeroNorm);
    }
    Ok(num / (den_s * den_a).sqrt())
}

/// Skew-normal shape lambda = rho c* / sqrt(1 - rho^2 c*^2), with +-infinity
/// when |rho c*| is within 1e-14 of 1 (or beyond, from rounding).
pub fn lambda_param(rho: f64, c_star: f64) -> Result<f64, AnalyticsError> {
    check_rho_c(rho, c_star)?;
    let t = rho * c_star;
    if t >= 1.0 - BOUNDARY_TOL {
        return Ok(f64::INFINITY);
    }
    if t <= -1.0 + BOUNDARY_TOL {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(t / (1.0 - t * t).sqrt())
}

fn check_rho_c(rho: f64, c_star: f64) -> Result<(), AnalyticsError> {
    if !(rho > 0.0 && rho <= 1.0 + BOUNDARY_TOL) {
        return Err(AnalyticsError::ParameterOutOfRange { what: "rho", value: rho });
    }
    if c_star.is_nan() || c_star.abs() > 1.0 + BOUNDARY_TOL {
        return Err(AnalyticsError::ParameterOutOfRange { what: "c_star", value: c_star });
    }
    Ok(())
}

/// The three objective limits and the skew-normal shape for one (rho, c*)
/// pair.
///
/// The mean-deficit limit satisfies delta = (sqrt(2/pi) - u)/2 by
/// construction, to rounding.
pub fn asymptotic_objectives(rho: f64, c_star: f64) -> Result<AsymptoticProfile, AnalyticsError> {
    let lambda = lambda_param(rho, c_star)?;
    let t = (rho * c_star).clamp(-1.0, 1.0);
    let u_limit = (2.0 / std::f64::consts::PI).sqrt() * t;
    let delta_limit = (1.0 - t) / (2.0 * std::f64::consts::PI).sqrt();
    let p_limit = t.acos() / std::f64::consts::PI;
    Ok(AsymptoticProfile {
        rho,
        c_star,
        lambda,
        u_limit,
        delta_limit,
        p_limit,
    })
}

/// Finite-n square-root proportionality index.
pub fn hat_c_sqrt(sizes: &[f64], weights: &[f64]) -> Result<f64, AnalyticsError> {
    if sizes.len() != weights.len() {
        return Err(AnalyticsError::LengthMismatch { left: sizes.len(), right: weights.len() });
    }
    let mut num = 0.0;
    let mut sum_s = 0.0;
    let mut sl = 0.0;
    for (index, (&s, &a)) in sizes.iter().zip(weights).enumerate() {
        if !(s > 0.0 && s.is_finite()) {
            return Err(AnalyticsError::NonPositiveSize { index, value: s });
        }
        num += a;
        sum_s += s;
        sl += a * a / s;
    }
    if sl == 0.0 {
        return Err(AnalyticsError::ZeroNorm);
    }
    Ok(num / (sum_s * sl).sqrt())
}

/// Sainte-Lague disproportionality index: sum of a_i^2 / s_i.
pub fn sainte_lague(sizes: &[f64], weights: &[f64]) -> Result<f64, AnalyticsError> {
    if sizes.len() != weights.len() {
        return Err(AnalyticsError::LengthMismatch { left: sizes.len(), right: weights.len() });
    }
    let mut sl = 0.0;
    for (index, (&s, &a)) in sizes.iter().zip(weights).enumerate() {
        if !(s > 0.0 && s.is_finite()) {
            return Err(AnalyticsError::NonPositiveSize { index, value: s });
        }
        sl += a * a / s;
    }
    Ok(sl)
}
