//! Skew normal distribution SN(lambda) with density 2 phi(x) Phi(lambda x).
//!
//! The shape parameter may be +-infinity, in which case the distribution is
//! the half-normal on the corresponding half-line. That case is first-class
//! because it arises whenever rho times the cosine proportionality hits 1
//! (for example proportional weights under the proportional rule).

use std::error::Error;
use std::f64::consts::PI;
use std::fmt;

use super::quadrature::integrate_with_splits;
use super::special::{normal_cdf, normal_pdf};

/// Integration anchor: mass of SN left of -ANCHOR is below 2 Phi(-13) ~ 1.2e-38
/// for every lambda, far under the 1e-10 CDF error budget.
const ANCHOR: f64 = 13.0;

/// Default absolute tolerance for single-point CDF evaluation.
const CDF_TOL: f64 = 1e-11;

/// Per-segment tolerance for batch CDF evaluation over sorted points.
const SEGMENT_TOL: f64 = 1e-12;

/// The shape parameter was NaN.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvalidShape;

impl fmt::Display for InvalidShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "skew normal shape parameter must not be NaN")
    }
}

impl Error for InvalidShape {}

/// Skew normal distribution with extended real shape parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkewNormal {
    lambda: f64,
}

impl SkewNormal {
    /// Creates SN(lambda); `lambda` may be +-infinity but not NaN.
    pub fn new(lambda: f64) -> Result<Self, InvalidShape> {
        if lambda.is_nan() {
            Err(InvalidShape)
        } else {
            Ok(Self { lambda })
        }
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Density 2 phi(x) Phi(lambda x); half-normal density at infinite shape.
    pub fn pdf(&self, x: f64) -> f64 {
        if self.lambda == f64::INFINITY {
            return if x < 0.0 { 0.0 } else { 2.0 * normal_pdf(x) };
        }
        if self.lambda == f64::NEG_INFINITY {
            return if x > 0.0 { 0.0 } else { 2.0 * normal_pdf(x) };
        }
        2.0 * normal_pdf(x) * normal_cdf(self.lambda * x)
    }

    /// CDF by adaptive quadrature of the density, absolute error <= 1e-10.
    ///
    /// Infinite shapes use the elementary half-normal CDF instead.
    pub fn cdf(&self, x: f64) -> f64 {
        if self.lambda == f64::INFINITY {
            return if x <= 0.0 { 0.0 } else { 2.0 * normal_cdf(x) - 1.0 };
        }
        if self.lambda == f64::NEG_INFINITY {
            return if x >= 0.0 { 1.0 } else { 2.0 * normal_cdf(x) };
        }
        if x <= -ANCHOR {
            return 0.0;
        }
        let splits = self.layer_splits();
        let value = if x <= 0.0 {
            self.panel(-ANCHOR, x, &splits, CDF_TOL)
        } else {
            self.panel(-ANCHOR, 0.0, &splits, CDF_TOL) + self.panel(0.0, x.min(ANCHOR), &splits, CDF_TOL)
        };
        value.clamp(0.0, 1.0)
    }

    /// CDF at each point of an ascending slice, sharing work between
    /// neighbors. Cost is one short integration per gap; accumulated error is
    /// bounded by `points.len()` times 1e-12.
    pub fn cdf_at_sorted(&self, points: &[f64]) -> Vec<f64> {
        debug_assert!(points.windows(2).all(|w| w[0] <= w[1]), "points must be ascending");
        if self.lambda.is_infinite() {
            return points.iter().map(|&x| self.cdf(x)).collect();
        }
        let splits = self.layer_splits();
        let mut out = Vec::with_capacity(points.len());
        let mut prev_x = -ANCHOR;
        let mut acc = 0.0;
        for &x in points {
            if x <= -ANCHOR {
                out.push(0.0);
                continue;
            }
            let hi = x.min(ANCHOR);
            if hi > prev_x {
                acc += self.panel(prev_x, hi, &splits, SEGMENT_TOL);
                prev_x = hi;
            }
            out.push(acc.clamp(0.0, 1.0));
        }
        out
    }

    /// Closed-form mean sqrt(2/pi) lambda / sqrt(1 + lambda^2).
    pub fn mean(&self) -> f64 {
        let scale = (2.0 / PI).sqrt();
        if self.lambda.is_infinite() {
            return scale.copysign(self.lambda);
        }
        if self.lambda.abs() <= 1.0 {
            scale * self.lambda / (1.0 + self.lambda * self.lambda).sqrt()
        } else {
            // Rewritten to survive lambda^2 overflow.
            scale.copysign(self.lambda) / (1.0 + (1.0 / self.lambda).powi(2)).sqrt()
        }
    }

    /// For large |lambda| the density has an O(1/|lambda|) boundary layer at
    /// zero; force panel edges there so coarse panels cannot overlook it.
    fn layer_splits(&self) -> Vec<f64> {
        let mut splits = vec![0.0];
        let l = self.lambda.abs();
        if l > 8.0 {
            for k in [1.0, 4.0, ANCHOR] {
                splits.push(k / l);
                splits.push(-k / l);
            }
        }
        splits
    }

    fn panel(&self, a: f64, b: f64, splits: &[f64], tol: f64) -> f64 {
        match integrate_with_splits(|x| self.pdf(x), a, b, splits, tol) {
            Ok(v) => v,
            // The density is analytic; refinement only stalls at tolerances
            // near machine precision, where the estimate is still the best
            // available answer and the CDF contract has no error channel.
            Err(e) => e.best_estimate,
        }
    }
}

/// Result of a grid check that the CDF is decreasing in the shape parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneReport {
    pub pass: bool,
    /// Violations as (x, lambda_low, lambda_high, cdf difference).
    pub failures: Vec<(f64, f64, f64, f64)>,
}

/// Verifies H(x; lambda) is strictly decreasing in lambda at each grid x.
///
/// `lambdas` must be ascending. Successive differences must stay below 1e-12.
pub fn sn_cdf_monotone_check(lambdas: &[f64], xs: &[f64]) -> MonotoneReport {
    const TOL: f64 = 1e-12;
    let mut failures = Vec::new();
    for &x in xs {
        for pair in lambdas.windows(2) {
            let lo = SkewNormal::new(pair[0]).expect("NaN shape in grid");
            let hi = SkewNormal::new(pair[1]).expect("NaN shape in grid");
            let diff = hi.cdf(x) - lo.cdf(x);
            if diff >= TOL {
                failures.push((x, pair[0], pair[1], diff));
            }
        }
    }
    MonotoneReport {
        pass: failures.is_empty(),
        failures,
    }
}

/// Density of SN(lambda) at x.
pub fn sn_pdf(sn: &SkewNormal, x: f64) -> f64 {
    sn.pdf(x)
}

/// CDF of SN(lambda) at x.
pub fn sn_cdf(sn: &SkewNormal, x: f64) -> f64 {
    sn.cdf(x)
}

/// Mean of SN(lambda).
pub fn sn_mean(sn: &SkewNormal) -> f64 {
    sn.mean()
}
