//! Property-based invariants across the public API.

use proptest::prelude::*;
use welfare_core::analytics::{cosine, hat_c_sqrt, sainte_lague};
use welfare_core::engine::{simulate, SimulationSpec};
use welfare_core::model::{
    eval_rule_unchecked, MarginDistribution, RepresentationRule, Society, WeightAllocation,
};
use welfare_core::oracle::exact_welfare;
use welfare_core::stats::{
    dominates, sn_cdf, sn_pdf, Dominance, EmpiricalWelfare, SampleMeta, SkewNormal,
};

fn step_rule_strategy() -> impl Strategy<Value = RepresentationRule> {
    (1usize..4)
        .prop_flat_map(|k| {
            (
                prop::collection::vec(0.05f64..0.95, k - 1),
                prop::collection::vec(0.1f64..1.0, k),
            )
        })
        .prop_filter_map("degenerate breakpoints", |(mut breaks, mut values)| {
            breaks.sort_by(f64::total_cmp);
            breaks.dedup();
            values.sort_by(f64::total_cmp);
            values.truncate(breaks.len() + 1);
            if values.len() != breaks.len() + 1 {
                return None;
            }
            RepresentationRule::step(breaks, values).ok()
        })
}

fn rule_strategy() -> impl Strategy<Value = RepresentationRule> {
    prop_oneof![
        Just(RepresentationRule::WinnerTakeAll),
        Just(RepresentationRule::Proportional),
        step_rule_strategy(),
    ]
}

fn sized_pair_strategy() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1usize..8).prop_flat_map(|n| {
        (
            prop::collection::vec(1.0f64..9.0, n),
            prop::collection::vec(0.5f64..5.0, n),
        )
    })
}

proptest! {
    #[test]
    fn representation_rules_are_odd(rule in rule_strategy(), x in 1e-6f64..1.0) {
        let pos = eval_rule_unchecked(&rule, x);
        let neg = eval_rule_unchecked(&rule, -x);
        prop_assert_eq!(neg.to_bits(), (-pos).to_bits());
        let at_zero = eval_rule_unchecked(&rule, 0.0);
        prop_assert_eq!(at_zero.to_bits(), 0u64);
    }

    #[test]
    fn cosine_is_scale_invariant_and_bounded(
        (sizes, weights) in sized_pair_strategy(),
        k in 0.1f64..10.0,
    ) {
        let base = cosine(&sizes, &weights).unwrap();
        prop_assert!(base <= 1.0 + 1e-12);
        prop_assert!(base > 0.0);
        let scaled_sizes: Vec<f64> = sizes.iter().map(|s| k * s).collect();
        let scaled = cosine(&scaled_sizes, &weights).unwrap();
        prop_assert!((scaled - base).abs() <= 1e-12);
        let proportional: Vec<f64> = sizes.iter().map(|s| k * s).collect();
        let aligned = cosine(&sizes, &proportional).unwrap();
        prop_assert!(aligned >= 1.0 - 1e-12);
    }

    #[test]
    fn sqrt_index_and_sainte_lague_order_inversely(
        (sizes, weights_a, raw_b) in (1usize..8).prop_flat_map(|n| {
            (
                prop::collection::vec(1.0f64..9.0, n),
                prop::collection::vec(0.5f64..5.0, n),
                prop::collection::vec(0.5f64..5.0, n),
            )
        }),
    ) {
        // Rescale b to the same weight total, where the two indices are
        // exact order-reversals of one another.
        let total_a: f64 = weights_a.iter().sum();
        let total_b: f64 = raw_b.iter().sum();
        let weights_b: Vec<f64> = raw_b.iter().map(|w| w * total_a / total_b).collect();
        let hat_a = hat_c_sqrt(&sizes, &weights_a).unwrap();
        let hat_b = hat_c_sqrt(&sizes, &weights_b).unwrap();
        let sl_a = sainte_lague(&sizes, &weights_a).unwrap();
        let sl_b = sainte_lague(&sizes, &weights_b).unwrap();
        let hat_tied = (hat_a - hat_b).abs() < 1e-12;
        let sl_tied = (sl_a - sl_b).abs() < 1e-12 * sl_a.max(sl_b);
        if !hat_tied && !sl_tied {
            prop_assert_eq!(hat_a > hat_b, sl_a < sl_b);
        }
    }

    #[test]
    fn oracle_is_invariant_under_weight_scaling(
        sizes in prop::collection::vec(1.0f64..6.0, 1..5),
        raw_weights in prop::collection::vec(1u8..6, 1..5),
        k in prop_oneof![Just(0.5f64), Just(2.0f64), Just(3.0f64)],
    ) {
        prop_assume!(raw_weights.len() == sizes.len());
        let sizes: Vec<f64> = sizes.iter().map(|s| s.round()).collect();
        let weights: Vec<f64> = raw_weights.iter().map(|&w| w as f64).collect();
        let scaled: Vec<f64> = weights.iter().map(|w| k * w).collect();
        let society = Society::new(sizes).unwrap();
        let rule = RepresentationRule::WinnerTakeAll;
        let margin = MarginDistribution::Rademacher;
        let base = exact_welfare(
            &society,
            &WeightAllocation::explicit(weights).unwrap(),
            &rule,
            &margin,
        )
        .unwrap();
        let rescaled = exact_welfare(
            &society,
            &WeightAllocation::explicit(scaled).unwrap(),
            &rule,
            &margin,
        )
        .unwrap();
        prop_assert_eq!(base.u.to_bits(), rescaled.u.to_bits());
        prop_assert_eq!(base.delta.to_bits(), rescaled.delta.to_bits());
        prop_assert_eq!(base.p.to_bits(), rescaled.p.to_bits());
        prop_assert_eq!(base.atoms.len(), rescaled.atoms.len());
        for (a, b) in base.atoms.iter().zip(&rescaled.atoms) {
            prop_assert_eq!(a.value.to_bits(), b.value.to_bits());
            prop_assert_eq!(a.probability.to_bits(), b.probability.to_bits());
        }
    }

    #[test]
    fn dominance_is_antisymmetric(
        xs in prop::collection::vec(-3.0f64..3.0, 50..200),
        shift in -0.5f64..0.5,
    ) {
        let ys: Vec<f64> = xs.iter().map(|x| x + shift).collect();
        let meta = |m: &str| SampleMeta { count: xs.len(), seed: 0, model: m.to_string() };
        let a = EmpiricalWelfare::from_samples(xs.clone(), meta("a")).unwrap();
        let b = EmpiricalWelfare::from_samples(ys, meta("b")).unwrap();
        let fwd = dominates(&a, &b, 0.05).unwrap();
        let rev = dominates(&b, &a, 0.05).unwrap();
        match fwd {
            Dominance::Dominates => prop_assert_eq!(rev, Dominance::Dominated),
            Dominance::Dominated => prop_assert_eq!(rev, Dominance::Dominates),
            Dominance::Incomparable { statistically_equal } => {
                prop_assert_eq!(rev, Dominance::Incomparable { statistically_equal })
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn simulated_deficit_identity_holds_exactly(
        (sizes, weights) in sized_pair_strategy(),
        seed in 0u64..1000,
    ) {
        let spec = SimulationSpec::new(
            Society::new(sizes).unwrap(),
            WeightAllocation::explicit(weights).unwrap(),
            RepresentationRule::WinnerTakeAll,
            MarginDistribution::Uniform,
            2_000,
            seed,
        );
        let result = simulate(&spec).unwrap();
        let m = result.s_norm_ordered.len() as f64;
        let mut sum_abs = 0.0;
        for s in &result.s_norm_ordered {
            sum_abs += s.abs();
        }
        let expected = (sum_abs / m - result.u_hat) / 2.0;
        prop_assert_eq!(expected.to_bits(), result.delta_hat.to_bits());
    }
}

#[test]
fn skew_normal_reflection_identity() {
    for &lambda in &[0.0, 0.5, -0.5, 2.0, -2.0, 10.0, -10.0] {
        let pos = SkewNormal::new(lambda).unwrap();
        let neg = SkewNormal::new(-lambda).unwrap();
        for i in -30..=30 {
            let x = 0.2 * i as f64;
            let total = sn_cdf(&pos, x) + sn_cdf(&neg, -x);
            assert!(
                (total - 1.0).abs() < 1e-12,
                "lambda {lambda} x {x} total {total}"
            );
            let diff = (sn_pdf(&pos, x) - sn_pdf(&neg, -x)).abs();
            assert!(diff <= 1e-15 * sn_pdf(&pos, x).max(1e-300));
        }
    }
}
