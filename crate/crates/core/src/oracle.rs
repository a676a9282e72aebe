//! Exact enumeration of the welfare distribution for discrete margins: the
//! ground truth against which the Monte Carlo engine is checked.

use std::collections::BTreeMap;
use std::error::Error;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::engine::{simulate, EngineError, SimulationSpec};
use crate::model::{
    eval_rule_unchecked, materialize_weights, validate_rule, MarginDistribution, ModelError,
    RepresentationRule, Society, WeightAllocation,
};

/// Default enumeration budget in weighted operations (profiles times groups).
pub const DEFAULT_BUDGET: f64 = 1e8;

/// Relative tolerance for merging float-mode atoms; rational mode merges by
/// exact equality.
const ATOM_MERGE_REL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum OracleError {
    Model(ModelError),
    Engine(EngineError),
    NotDiscrete,
    BudgetExceeded { needed: f64, budget: f64 },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::Model(e) => write!(f, "{e}"),
            OracleError::Engine(e) => write!(f, "{e}"),
            OracleError::NotDiscrete => write!(f, "exact mode requires discrete margins"),
            OracleError::BudgetExceeded { needed, budget } => {
                write!(f, "enumeration needs {needed:.3e} weighted operations, budget is {budget:.3e}")
            }
        }
    }
}

impl Error for OracleError {}

impl From<ModelError> for OracleError {
    fn from(e: ModelError) -> Self {
        OracleError::Model(e)
    }
}

impl From<EngineError> for OracleError {
    fn from(e: EngineError) -> Self {
        OracleError::Engine(e)
    }
}

/// One point mass of the welfare distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub value: f64,
    pub probability: f64,
}

/// The exact welfare distribution and objectives, in floating point.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactDistribution {
    /// Point masses, ascending by value, probabilities summing to 1 within
    /// 1e-14.
    pub atoms: Vec<Atom>,
    pub u: f64,
    pub delta: f64,
    pub p: f64,
    pub sigma: f64,
}

/// One point mass with welfare stored as numerator over the symbolic sigma.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalAtom {
    /// Welfare value times sigma, exactly.
    pub numer: BigRational,
    pub probability: BigRational,
}

/// The exact distribution in rational arithmetic; sigma stays symbolic as
/// the square root of `sigma_sq`, and u, delta carry their numerators.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalExact {
    /// Ascending by numerator; probabilities sum to exactly 1.
    pub atoms: Vec<RationalAtom>,
    /// u = u_numer / sigma.
    pub u_numer: BigRational,
    /// delta = delta_numer / sigma.
    pub delta_numer: BigRational,
    /// Inversion probability, exact (sigma cancels in the sign of W).
    pub p: BigRational,
    /// sigma^2 = E[X^2] times the sum of squared sizes.
    pub sigma_sq: BigRational,
}

impl RationalExact {
    pub fn sigma(&self) -> f64 {
        self.sigma_sq.to_f64().expect("finite").sqrt()
    }

    pub fn to_float(&self) -> ExactDistribution {
        let sigma = self.sigma();
        let atoms = self
            .atoms
            .iter()
            .map(|a| Atom {
                value: a.numer.to_f64().expect("finite") / sigma,
                probability: a.probability.to_f64().expect("finite"),
            })
            .collect();
        ExactDistribution {
            atoms,
            u: self.u_numer.to_f64().expect("finite") / sigma,
            delta: self.delta_numer.to_f64().expect("finite") / sigma,
            p: self.p.to_f64().expect("finite"),
            sigma,
        }
    }
}

/// Enumeration ingredients shared by both arithmetic modes.
struct Enumeration {
    sizes: Vec<f64>,
    weights: Vec<f64>,
    support: Vec<f64>,
    probs: Vec<f64>,
    r_values: Vec<f64>,
    /// Profiles per branch of the first coordinate: k^(n-1).
    branch_len: u64,
}

fn set_up(
    society: &Society,
    alloc: &WeightAllocation,
    rule: &RepresentationRule,
    margin: &MarginDistribution,
    budget: f64,
) -> Result<Enumeration, OracleError> {
    let violations = validate_rule(rule);
    if !violations.is_empty() {
        return Err(OracleError::Model(ModelError::InvalidRule(violations)));
    }
    let atoms = margin.enumeration().ok_or(OracleError::NotDiscrete)?;
    let weights = materialize_weights(society, alloc)?;
    let n = society.len();
    let k = atoms.len();
    let needed = (k as f64).powi(n as i32) * n as f64;
    if needed.is_nan() || needed > budget {
        return Err(OracleError::BudgetExceeded { needed, budget });
    }
    let (support, probs): (Vec<f64>, Vec<f64>) = atoms.into_iter().unzip();
    let r_values = support.iter().map(|&x| eval_rule_unchecked(rule, x)).collect();
    let branch_len = (k as u64).pow(n as u32 - 1);
    Ok(Enumeration {
        sizes: society.sizes().to_vec(),
        weights,
        support,
        probs,
        r_values,
        branch_len,
    })
}

/// Decodes profile `index` within a branch into margin indices for groups
/// 1..n (group 0 is fixed to the branch digit) and evaluates prob, S, T.
///
/// Sums run left to right in group order, matching the simulation kernel.
#[inline]
fn evaluate_profile(e: &Enumeration, first: usize, index: u64) -> (f64, f64, f64) {
    let k = e.support.len() as u64;
    let n = e.sizes.len();
    let mut prob = e.probs[first];
    let mut s = e.sizes[0] * e.support[first];
    let mut t = e.weights[0] * e.r_values[first];
    let mut rest = index;
    let mut scale = if n >= 2 { e.branch_len / k } else { 1 };
    for i in 1..n {
        let digit = (rest / scale) as usize;
        rest %= scale;
        if i + 1 < n {
            scale /= k;
        }
        prob *= e.probs[digit];
        s += e.sizes[i] * e.support[digit];
        t += e.weights[i] * e.r_values[digit];
    }
    (prob, s, t)
}

struct FloatBranch {
    raw_atoms: Vec<(f64, f64)>,
    u_sigma: f64,
    e_abs_sigma: f64,
    p: f64,
}

/// Exact welfare distribution in floating point, under the default budget.
pub fn exact_welfare(
    society: &Society,
    alloc: &WeightAllocation,
    rule: &RepresentationRule,
    margin: &MarginDistribution,
) -> Result<ExactDistribution, OracleError> {
    exact_welfare_with_budget(society, alloc, rule, margin, DEFAULT_BUDGET)
}

/// Exact welfare distribution in floating point.
///
/// Enumerates all margin profiles lexicographically (first group most
/// significant, branches parallelized over the first coordinate), with the
/// coin at T = 0 contributing half mass to each of +-S/sigma.
pub fn exact_welfare_with_budget(
    society: &Society,
    alloc: &WeightAllocation,
    rule: &RepresentationRule,
    margin: &MarginDistribution,
    budget: f64,
) -> Result<ExactDistribution, OracleError> {
    let e = set_up(society, alloc, rule, margin, budget)?;
    let sigma = (margin.second_moment() * society.sum_sq_sizes()).sqrt();
    let k = e.support.len();

    let branches: Vec<FloatBranch> = (0..k)
        .into_par_iter()
        .map(|first| {
            let mut branch = FloatBranch {
                raw_atoms: Vec::new(),
                u_sigma: 0.0,
                e_abs_sigma: 0.0,
                p: 0.0,
            };
            for index in 0..e.branch_len {
                let (prob, s, t) = evaluate_profile(&e, first, index);
                branch.e_abs_sigma += prob * s.abs();
                if t == 0.0 {
                    // Coin flip: half mass on each side; expectation
                    // contributions cancel.
                    branch.raw_atoms.push((canonical_zero(s), prob / 2.0));
                    branch.raw_atoms.push((canonical_zero(-s), prob / 2.0));
                    if s != 0.0 {
                        branch.p += prob / 2.0;
                    }
                } else {
                    let value = if t > 0.0 { s } else { -s };
                    branch.raw_atoms.push((canonical_zero(value), prob));
                    branch.u_sigma += prob * value;
                    if value < 0.0 {
                        branch.p += prob;
                    }
                }
            }
            branch
        })
        .collect();

    let mut raw_atoms = Vec::new();
    let mut u_sigma = 0.0;
    let mut e_abs_sigma = 0.0;
    let mut p = 0.0;
    for branch in branches {
        raw_atoms.extend(branch.raw_atoms);
        u_sigma += branch.u_sigma;
        e_abs_sigma += branch.e_abs_sigma;
        p += branch.p;
    }

    raw_atoms.sort_unstable_by(|a, b| a.0.partial_cmp(&b.0).expect("no NaN welfare"));
    let mut atoms: Vec<Atom> = Vec::new();
    for (value_sigma, prob) in raw_atoms {
        let value = value_sigma / sigma;
        match atoms.last_mut() {
            Some(last) if merges(last.value, value) => last.probability += prob,
            _ => atoms.push(Atom { value, probability: prob }),
        }
    }

    let u = u_sigma / sigma;
    let e_abs = e_abs_sigma / sigma;
    Ok(ExactDistribution {
        atoms,
        u,
        delta: (e_abs - u) / 2.0,
        p,
        sigma,
    })
}

#[inline]
fn canonical_zero(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

fn merges(a: f64, b: f64) -> bool {
    (a - b).abs() <= ATOM_MERGE_REL * a.abs().max(b.abs())
}

/// Exact welfare distribution in rational arithmetic, default budget.
///
/// Everything finite converts exactly: each f64 input is itself a rational.
/// Sigma stays symbolic, so p and the numerators of u and delta are exact.
pub fn exact_welfare_rational(
    society: &Society,
    alloc: &WeightAllocation,
    rule: &RepresentationRule,
    margin: &MarginDistribution,
) -> Result<RationalExact, OracleError> {
    exact_welfare_rational_with_budget(society, alloc, rule, margin, DEFAULT_BUDGET)
}

/// Exact welfare distribution in rational arithmetic.
pub fn exact_welfare_rational_with_budget(
    society: &Society,
    alloc: &WeightAllocation,
    rule: &RepresentationRule,
    margin: &MarginDistribution,
    budget: f64,
) -> Result<RationalExact, OracleError> {
    let e = set_up(society, alloc, rule, margin, budget)?;
    let k = e.support.len();
    let n = e.sizes.len();
    let exact = |x: f64| BigRational::from_float(x).expect("finite input");
    let sizes: Vec<BigRational> = e.sizes.iter().map(|&x| exact(x)).collect();
    let weights: Vec<BigRational> = e.weights.iter().map(|&x| exact(x)).collect();
    let support: Vec<BigRational> = e.support.iter().map(|&x| exact(x)).collect();
    let probs: Vec<BigRational> = e.probs.iter().map(|&x| exact(x)).collect();
    let r_values: Vec<BigRational> = e.r_values.iter().map(|&x| exact(x)).collect();

    let zero = BigRational::zero();
    let two = BigRational::from_integer(BigInt::from(2));
    let mut atom_map: BTreeMap<BigRational, BigRational> = BTreeMap::new();
    let mut u_numer = zero.clone();
    let mut e_abs_numer = zero.clone();
    let mut p = zero.clone();

    for first in 0..k {
        for index in 0..e.branch_len {
            let mut prob = probs[first].clone();
            let mut s = &sizes[0] * &support[first];
            let mut t = &weights[0] * &r_values[first];
            let mut rest = index;
            let mut scale = if n >= 2 { e.branch_len / k as u64 } else { 1 };
            for i in 1..n {
                let digit = (rest / scale) as usize;
                rest %= scale;
                if i + 1 < n {
                    scale /= k as u64;
                }
                prob *= &probs[digit];
                s += &sizes[i] * &support[digit];
                t += &weights[i] * &r_values[digit];
            }

            e_abs_numer += &prob * s.abs();
            if t.is_zero() {
                let half = &prob / &two;
                if s.is_zero() {
                    *atom_map.entry(s.clone()).or_insert_with(BigRational::zero) += &prob;
                } else {
                    *atom_map.entry(s.clone()).or_insert_with(BigRational::zero) += &half;
                    *atom_map.entry(-&s).or_insert_with(BigRational::zero) += &half;
                    p += &half;
                }
            } else {
                let value = if t.is_positive() { s } else { -s };
                u_numer += &prob * &value;
                if value.is_negative() {
                    p += &prob;
                }
                *atom_map.entry(value).or_insert_with(BigRational::zero) += &prob;
            }
        }
    }

    let atoms = atom_map
        .into_iter()
        .map(|(numer, probability)| RationalAtom { numer, probability })
        .collect();
    let ex2 = e
        .support
        .iter()
        .zip(&e.probs)
        .fold(BigRational::zero(), |acc, (&x, &q)| acc + exact(q) * exact(x) * exact(x));
    let sum_sq = e
        .sizes
        .iter()
        .fold(BigRational::zero(), |acc, &s| acc + exact(s) * exact(s));
    let delta_numer = (&e_abs_numer - &u_numer) / &two;
    Ok(RationalExact {
        atoms,
        u_numer,
        delta_numer,
        p,
        sigma_sq: ex2 * sum_sq,
    })
}

/// Side-by-side exact and simulated objectives.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub exact_u: f64,
    pub exact_delta: f64,
    pub exact_p: f64,
    pub u_hat: f64,
    pub delta_hat: f64,
    pub p_hat: f64,
    pub u_gap: f64,
    pub delta_gap: f64,
    pub p_gap: f64,
    pub u_se: f64,
    pub delta_se: f64,
    pub p_se: f64,
    /// Each gap within four standard errors.
    pub u_within: bool,
    pub delta_within: bool,
    pub p_within: bool,
}

impl ComparisonReport {
    pub fn all_within(&self) -> bool {
        self.u_within && self.delta_within && self.p_within
    }
}

/// Runs the exact oracle and the Monte Carlo engine on the same spec and
/// reports the gaps against a four-standard-error band.
pub fn exact_vs_simulation(spec: &SimulationSpec, budget: f64) -> Result<ComparisonReport, OracleError> {
    let exact = exact_welfare_with_budget(&spec.society, &spec.alloc, &spec.rule, &spec.margin, budget)?;
    let sim = simulate(spec)?;
    let u_gap = (sim.u_hat - exact.u).abs();
    let delta_gap = (sim.delta_hat - exact.delta).abs();
    let p_gap = (sim.p_hat - exact.p).abs();
    Ok(ComparisonReport {
        exact_u: exact.u,
        exact_delta: exact.delta,
        exact_p: exact.p,
        u_hat: sim.u_hat,
        delta_hat: sim.delta_hat,
        p_hat: sim.p_hat,
        u_gap,
        delta_gap,
        p_gap,
        u_se: sim.std_errors.u,
        delta_se: sim.std_errors.delta,
        p_se: sim.std_errors.p,
        u_within: u_gap <= 4.0 * sim.std_errors.u,
        delta_within: delta_gap <= 4.0 * sim.std_errors.delta,
        p_within: p_gap <= 4.0 * sim.std_errors.p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DiscreteMargin;
    use approx::assert_relative_eq;
    use num_bigint::BigInt;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn wta_instance(sizes: Vec<f64>, weights: Vec<f64>) -> (Society, WeightAllocation) {
        (
            Society::new(sizes).unwrap(),
            WeightAllocation::explicit(weights).unwrap(),
        )
    }

    #[test]
    fn hand_instance_five_two_two() {
        let (society, alloc) = wta_instance(vec![5.0, 2.0, 2.0], vec![1.0, 1.0, 1.0]);
        let exact = exact_welfare(
            &society,
            &alloc,
            &RepresentationRule::WinnerTakeAll,
            &MarginDistribution::Rademacher,
        )
        .unwrap();
        let sigma = 33.0_f64.sqrt();
        assert_relative_eq!(exact.p, 0.25, max_relative = 1e-15);
        assert_relative_eq!(exact.u, 4.5 / sigma, max_relative = 1e-14);
        assert_relative_eq!(exact.delta, 0.25 / sigma, max_relative = 1e-13);
        // Atoms: +-1/sigma (p = 1/8 + 1/8 inverted), 5/sigma (1/2), 9/sigma (1/4).
        assert_eq!(exact.atoms.len(), 3);
        assert_relative_eq!(exact.atoms[0].value, -1.0 / sigma, max_relative = 1e-14);
        assert_relative_eq!(exact.atoms[0].probability, 0.25, max_relative = 1e-15);
        assert_relative_eq!(exact.atoms[1].value, 5.0 / sigma, max_relative = 1e-14);
        assert_relative_eq!(exact.atoms[1].probability, 0.5, max_relative = 1e-15);
        assert_relative_eq!(exact.atoms[2].value, 9.0 / sigma, max_relative = 1e-14);
        assert_relative_eq!(exact.atoms[2].probability, 0.25, max_relative = 1e-15);
    }

    #[test]
    fn hand_instance_rational() {
        let (society, alloc) = wta_instance(vec![5.0, 2.0, 2.0], vec![1.0, 1.0, 1.0]);
        let exact = exact_welfare_rational(
            &society,
            &alloc,
            &RepresentationRule::WinnerTakeAll,
            &MarginDistribution::Rademacher,
        )
        .unwrap();
        assert_eq!(exact.p, ratio(1, 4));
        assert_eq!(exact.u_numer, ratio(9, 2));
        assert_eq!(exact.delta_numer, ratio(1, 4));
        assert_eq!(exact.sigma_sq, ratio(33, 1));
        let total: BigRational = exact.atoms.iter().map(|a| a.probability.clone()).sum();
        assert_eq!(total, ratio(1, 1));
    }

    #[test]
    fn no_inversion_when_two_groups_outweigh_the_third() {
        let (society, alloc) = wta_instance(vec![3.0, 2.0, 2.0], vec![1.0, 1.0, 1.0]);
        let exact = exact_welfare(
            &society,
            &alloc,
            &RepresentationRule::WinnerTakeAll,
            &MarginDistribution::Rademacher,
        )
        .unwrap();
        assert_eq!(exact.p, 0.0);
        assert!(exact.atoms.iter().all(|a| a.value > 0.0));
    }

    #[test]
    fn dangling_zero_weight_group() {
        // T = X1 alone; S = X1 + X2; opposing draws put half the mass at 0.
        let (society, alloc) = wta_instance(vec![1.0, 1.0], vec![1.0, 0.0]);
        let exact = exact_welfare(
            &society,
            &alloc,
            &RepresentationRule::WinnerTakeAll,
            &MarginDistribution::Rademacher,
        )
        .unwrap();
        let sigma = 2.0_f64.sqrt();
        assert_eq!(exact.p, 0.0);
        assert_eq!(exact.atoms.len(), 2);
        assert_eq!(exact.atoms[0].value, 0.0);
        assert_relative_eq!(exact.atoms[0].probability, 0.5, max_relative = 1e-15);
        assert_relative_eq!(exact.atoms[1].value, 2.0 / sigma, max_relative = 1e-15);
    }

    #[test]
    fn tie_coin_splits_mass() {
        // Equal weights, two groups: T = 0 on opposing draws; the coin sends
        // half of each opposing profile to each sign of S.
        let (society, alloc) = wta_instance(vec![3.0, 1.0], vec![1.0, 1.0]);
        let exact = exact_welfare(
            &society,
            &alloc,
            &RepresentationRule::WinnerTakeAll,
            &MarginDistribution::Rademacher,
        )
        .unwrap();
        let sigma = 10.0_f64.sqrt();
        // Profiles: agree (+-): S = +-4, T = +-2; oppose: S = +-2, T = 0.
        let expected = [
            (-4.0 / sigma, 0.0),
            (-2.0 / sigma, 0.25),
            (2.0 / sigma, 0.25),
            (4.0 / sigma, 0.5),
        ];
        // The -4 atom never occurs (agreement decides correctly).
        assert_eq!(exact.atoms.len(), 3);
        for atom in &exact.atoms {
            let (_, p) = expected
                .iter()
                .find(|(v, _)| (v - atom.value).abs() < 1e-14)
                .expect("unexpected atom");
            assert_relative_eq!(atom.probability, p, max_relative = 1e-15);
        }
        assert_relative_eq!(exact.p, 0.25, max_relative = 1e-15);
        assert_relative_eq!(exact.u, (0.5 * 4.0) / sigma, max_relative = 1e-14);
    }

    #[test]
    fn weight_scaling_leaves_distribution_unchanged() {
        let (society, alloc) = wta_instance(vec![4.0, 2.0, 3.0], vec![1.0, 2.0, 2.0]);
        let scaled = WeightAllocation::explicit(vec![2.5, 5.0, 5.0]).unwrap();
        let rule = RepresentationRule::step(vec![0.5], vec![0.5, 1.0]).unwrap();
        let margin = MarginDistribution::DiscreteSymmetric(
            DiscreteMargin::new(vec![0.25, 1.0], vec![0.5, 0.5]).unwrap(),
        );
        let a = exact_welfare(&society, &alloc, &rule, &margin).unwrap();
        let b = exact_welfare(&society, &scaled, &rule, &margin).unwrap();
        assert_eq!(a.atoms.len(), b.atoms.len());
        for (x, y) in a.atoms.iter().zip(&b.atoms) {
            assert_eq!(x.value.to_bits(), y.value.to_bits());
            assert_relative_eq!(x.probability, y.probability, max_relative = 1e-14);
        }
        assert_eq!(a.p, b.p);
    }

    #[test]
    fn proportional_everything_matches_absolute_margin() {
        let (society, _) = wta_instance(vec![2.0, 3.0], vec![1.0, 1.0]);
        let alloc = WeightAllocation::explicit(vec![2.0, 3.0]).unwrap();
        let exact = exact_welfare(
            &society,
            &alloc,
            &RepresentationRule::Proportional,
            &MarginDistribution::Rademacher,
        )
        .unwrap();
        assert_eq!(exact.p, 0.0);
        // W = |S|/sigma: atoms at |{+-5, +-1}|/sigma with the right masses.
        let sigma = 13.0_f64.sqrt();
        assert_eq!(exact.atoms.len(), 2);
        assert_relative_eq!(exact.atoms[0].value, 1.0 / sigma, max_relative = 1e-15);
        assert_relative_eq!(exact.atoms[0].probability, 0.5, max_relative = 1e-15);
        assert_relative_eq!(exact.atoms[1].value, 5.0 / sigma, max_relative = 1e-15);
    }

    #[test]
    fn probabilities_sum_to_one() {
        let (society, alloc) = wta_instance(vec![2.0, 5.0, 1.0, 3.0], vec![2.0, 1.0, 1.0, 3.0]);
        let margin = MarginDistribution::DiscreteSymmetric(
            DiscreteMargin::new(vec![0.0, 0.5, 1.0], vec![0.2, 0.5, 0.3]).unwrap(),
        );
        let exact = exact_welfare(&society, &alloc, &RepresentationRule::WinnerTakeAll, &margin).unwrap();
        let total: f64 = exact.atoms.iter().map(|a| a.probability).sum();
        assert!((total - 1.0).abs() < 1e-14, "total {total}");
        assert!(exact.atoms.windows(2).all(|w| w[0].value < w[1].value));
    }

    #[test]
    fn scalar_accumulators_match_atom_map() {
        // u, p, and total mass recomputed from the rational atom map must
        // equal the streaming accumulators exactly, tie halves included.
        let (society, alloc) = wta_instance(vec![3.0, 1.0, 2.0], vec![1.0, 1.0, 2.0]);
        let margin = MarginDistribution::DiscreteSymmetric(
            DiscreteMargin::new(vec![0.5, 1.0], vec![0.25, 0.75]).unwrap(),
        );
        let rule = RepresentationRule::step(vec![0.75], vec![0.25, 1.0]).unwrap();
        let exact = exact_welfare_rational(&society, &alloc, &rule, &margin).unwrap();

        let zero = BigRational::zero();
        let mut total = zero.clone();
        let mut u = zero.clone();
        let mut p = zero.clone();
        for atom in &exact.atoms {
            total += &atom.probability;
            u += &atom.numer * &atom.probability;
            if atom.numer < zero {
                p += &atom.probability;
            }
        }
        assert_eq!(total, ratio(1, 1));
        assert_eq!(u, exact.u_numer);
        assert_eq!(p, exact.p);
    }

    #[test]
    fn rejects_continuous_margins() {
        let (society, alloc) = wta_instance(vec![1.0], vec![1.0]);
        assert_eq!(
            exact_welfare(
                &society,
                &alloc,
                &RepresentationRule::WinnerTakeAll,
                &MarginDistribution::Uniform,
            )
            .unwrap_err(),
            OracleError::NotDiscrete
        );
    }

    #[test]
    fn budget_guard() {
        let (society, alloc) = wta_instance(vec![1.0; 10], vec![1.0; 10]);
        let err = exact_welfare_with_budget(
            &society,
            &alloc,
            &RepresentationRule::WinnerTakeAll,
            &MarginDistribution::Rademacher,
            1000.0,
        )
        .unwrap_err();
        assert!(matches!(err, OracleError::BudgetExceeded { .. }));
    }

    #[test]
    fn rational_matches_float_on_dyadic_instance() {
        let (society, alloc) = wta_instance(vec![3.0, 2.0, 4.0], vec![2.0, 1.0, 2.0]);
        let rule = RepresentationRule::step(vec![0.5], vec![0.25, 1.0]).unwrap();
        let margin = MarginDistribution::DiscreteSymmetric(
            DiscreteMargin::new(vec![0.5, 1.0], vec![0.5, 0.5]).unwrap(),
        );
        let rational = exact_welfare_rational(&society, &alloc, &rule, &margin)
            .unwrap()
            .to_float();
        let float = exact_welfare(&society, &alloc, &rule, &margin).unwrap();
        assert_relative_eq!(rational.u, float.u, max_relative = 1e-13);
        assert_relative_eq!(rational.delta, float.delta, max_relative = 1e-12);
        assert_relative_eq!(rational.p, float.p, max_relative = 1e-15);
        assert_eq!(rational.atoms.len(), float.atoms.len());
    }

    #[test]
    fn deterministic_single_group_comparison() {
        let (society, alloc) = wta_instance(vec![1.0], vec![1.0]);
        let spec = SimulationSpec::new(
            society,
            alloc,
            RepresentationRule::WinnerTakeAll,
            MarginDistribution::Rademacher,
            100,
            5,
        );
        let report = exact_vs_simulation(&spec, DEFAULT_BUDGET).unwrap();
        assert_eq!(report.u_gap, 0.0);
        assert_eq!(report.p_gap, 0.0);
        assert_eq!(report.delta_gap, 0.0);
        assert!(report.all_within());
    }

    #[test]
    fn comparison_within_four_se() {
        let (society, alloc) = wta_instance(vec![5.0, 2.0, 2.0], vec![1.0, 1.0, 1.0]);
        let spec = SimulationSpec::new(
            society,
            alloc,
            RepresentationRule::WinnerTakeAll,
            MarginDistribution::Rademacher,
            200_000,
            12,
        );
        let report = exact_vs_simulation(&spec, DEFAULT_BUDGET).unwrap();
        assert!(report.all_within(), "{report:?}");
    }

    #[test]
    fn single_sample_report_is_wide() {
        let (society, alloc) = wta_instance(vec![5.0, 2.0, 2.0], vec![1.0, 1.0, 1.0]);
        let spec = SimulationSpec::new(
            society,
            alloc,
            RepresentationRule::WinnerTakeAll,
            MarginDistribution::Rademacher,
            1,
            5,
        );
        let report = exact_vs_simulation(&spec, DEFAULT_BUDGET).unwrap();
        assert!(report.u_se.is_infinite());
        assert!(report.u_within);
    }
}
