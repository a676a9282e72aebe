//! Acceptance suite. Runs every criterion in order and prints one
//! "criterion NN: PASS/FAIL" line each, then fails if any criterion failed.
//!
//! Criterion 06 is statistically underpowered at its stated sample size for
//! one allocation pair (the two cosines are separated by less CDF mass than
//! the DKW band resolves); it is reported honestly and the ignored companion
//! test shows the same pair resolving at a larger sample size.

use std::fs;
use std::process::Command;
use std::time::Instant;

use tempfile::TempDir;
use welfare_core::analytics::{
    asymptotic_objectives, cosine, hat_c_sqrt, lambda_param, sainte_lague,
};
use welfare_core::engine::{simulate, SimulationSpec};
use welfare_core::extensions::{simulate_indep, IndepModel, IndepRule, IndepSpec};
use welfare_core::model::{
    MarginDistribution, RepresentationRule, Society, WeightAllocation,
};
use welfare_core::oracle::{exact_welfare, exact_welfare_rational, exact_vs_simulation};
use welfare_core::stats::{
    cdf_gaps, dkw_epsilon, dominates, integrate_with_splits, sn_cdf, sn_mean, sn_pdf, Dominance,
    EmpiricalWelfare, SkewNormal,
};

type Outcome = Result<String, String>;
type WeightLaw = Box<dyn Fn(f64) -> f64>;
type Criterion = (&'static str, fn() -> Outcome);

/// SplitMix64; fixed seeds make every randomized criterion reproducible.
struct SplitMix(u64);

impl SplitMix {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }
}

fn spec_for(
    sizes: Vec<f64>,
    weights: Vec<f64>,
    rule: RepresentationRule,
    margin: MarginDistribution,
    samples: u64,
    seed: u64,
) -> SimulationSpec {
    SimulationSpec::new(
        Society::new(sizes).expect("valid sizes"),
        WeightAllocation::explicit(weights).expect("valid weights"),
        rule,
        margin,
        samples,
        seed,
    )
}

fn random_step_rule(rng: &mut SplitMix) -> RepresentationRule {
    let k = 1 + rng.below(2) as usize;
    let mut breaks: Vec<f64> = Vec::new();
    while breaks.len() < k {
        let b = (1 + rng.below(7)) as f64 / 8.0;
        if !breaks.contains(&b) {
            breaks.push(b);
        }
    }
    breaks.sort_by(f64::total_cmp);
    let mut values: Vec<f64> = (0..=k)
        .map(|_| (1 + rng.below(16)) as f64 / 16.0)
        .collect();
    values.sort_by(f64::total_cmp);
    RepresentationRule::step(breaks, values).expect("valid random step rule")
}

fn criterion_01_oracle_agreement() -> Outcome {
    let start = Instant::now();
    let mut rng = SplitMix(0xC01);
    let mut worst: f64 = 0.0;
    let mut misses = Vec::new();
    for case in 0..20u64 {
        let n = 1 + rng.below(6) as usize;
        let sizes: Vec<f64> = (0..n).map(|_| (1 + rng.below(9)) as f64).collect();
        let weights: Vec<f64> = (0..n).map(|_| (1 + rng.below(9)) as f64).collect();
        let step = random_step_rule(&mut rng);
        for (tag, rule) in [("wta", RepresentationRule::WinnerTakeAll), ("step", step)] {
            let spec = spec_for(
                sizes.clone(),
                weights.clone(),
                rule,
                MarginDistribution::Rademacher,
                1_000_000,
                9_000 + case,
            );
            let report = exact_vs_simulation(&spec, 1e9).map_err(|e| e.to_string())?;
            let ratio = |gap: f64, se: f64| if gap == 0.0 { 0.0 } else { gap / se };
            worst = worst
                .max(ratio(report.u_gap, report.u_se))
                .max(ratio(report.delta_gap, report.delta_se))
                .max(ratio(report.p_gap, report.p_se));
            if !report.all_within() {
                misses.push(format!(
                    "case {case} {tag}: gaps/se {:.2} {:.2} {:.2}",
                    report.u_gap / report.u_se,
                    report.delta_gap / report.delta_se,
                    report.p_gap / report.p_se
                ));
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    if !misses.is_empty() {
        return Err(format!("{} of 40 runs outside 4 se: {}", misses.len(), misses.join("; ")));
    }
    if elapsed >= 120.0 {
        return Err(format!("ran {elapsed:.1}s, limit 120s"));
    }
    Ok(format!(
        "40 oracle-vs-simulation runs within 4 se (worst gap {worst:.2} se) in {elapsed:.1}s"
    ))
}

fn criterion_02_rational_hand_instance() -> Outcome {
    let society = Society::new(vec![5.0, 2.0, 2.0]).expect("sizes");
    let alloc = WeightAllocation::explicit(vec![1.0, 1.0, 1.0]).expect("weights");
    let rule = RepresentationRule::WinnerTakeAll;
    let margin = MarginDistribution::Rademacher;
    let exact = exact_welfare(&society, &alloc, &rule, &margin).map_err(|e| e.to_string())?;
    let rational =
        exact_welfare_rational(&society, &alloc, &rule, &margin).map_err(|e| e.to_string())?;
    let checks = [
        ("p", rational.p.to_string(), "1/4"),
        ("u numerator", rational.u_numer.to_string(), "9/2"),
        ("delta numerator", rational.delta_numer.to_string(), "1/4"),
        ("sigma^2", rational.sigma_sq.to_string(), "33"),
    ];
    let bad: Vec<String> = checks
        .iter()
        .filter(|(_, got, want)| got != want)
        .map(|(what, got, want)| format!("{what} = {got}, want {want}"))
        .collect();
    if !bad.is_empty() {
        return Err(bad.join("; "));
    }
    let sigma = 33.0_f64.sqrt();
    let float_ok = exact.p == 0.25
        && (exact.u - 4.5 / sigma).abs() < 1e-14
        && (exact.delta - 0.25 / sigma).abs() < 1e-14;
    if !float_ok {
        return Err(format!(
            "float mode drifted: u {} delta {} p {}",
            exact.u, exact.delta, exact.p
        ));
    }
    Ok("p = 1/4, u = (9/2)/sqrt(33), delta = (1/4)/sqrt(33), exact in rational mode".into())
}

fn reference_limits() -> (f64, f64, f64) {
    let half_sqrt3 = 3.0_f64.sqrt() / 2.0;
    let u = (2.0 / std::f64::consts::PI).sqrt() * half_sqrt3;
    let delta = (1.0 - half_sqrt3) / (2.0 * std::f64::consts::PI).sqrt();
    (u, delta, 1.0 / 6.0)
}

fn criterion_03_large_n_convergence() -> Outcome {
    let start = Instant::now();
    let n = 1001;
    let spec = spec_for(
        vec![1.0; n],
        vec![1.0; n],
        RepresentationRule::WinnerTakeAll,
        MarginDistribution::Uniform,
        1_000_000,
        33,
    );
    let result = simulate(&spec).map_err(|e| e.to_string())?;
    let (u_limit, delta_limit, p_limit) = reference_limits();
    let gaps = [
        ("u", (result.u_hat - u_limit).abs()),
        ("delta", (result.delta_hat - delta_limit).abs()),
        ("p", (result.p_hat - p_limit).abs()),
    ];
    let elapsed = start.elapsed().as_secs_f64();
    let over: Vec<String> = gaps
        .iter()
        .filter(|(_, g)| *g >= 0.01)
        .map(|(what, g)| format!("{what} gap {g:.4}"))
        .collect();
    if !over.is_empty() {
        return Err(over.join("; "));
    }
    if elapsed >= 300.0 {
        return Err(format!("ran {elapsed:.1}s, limit 300s"));
    }
    Ok(format!(
        "n = 1001, m = 1e6: gaps to limits {:.4} {:.4} {:.4} (all < 0.01) in {elapsed:.1}s",
        gaps[0].1, gaps[1].1, gaps[2].1
    ))
}

fn criterion_04_skew_normal_fit() -> Outcome {
    let n = 1000;
    let spec = spec_for(
        vec![1.0; n],
        vec![1.0; n],
        RepresentationRule::WinnerTakeAll,
        MarginDistribution::Uniform,
        100_000,
        44,
    );
    let result = simulate(&spec).map_err(|e| e.to_string())?;
    let sn = SkewNormal::new(3.0_f64.sqrt()).map_err(|e| e.to_string())?;
    let ks = result.welfare.ks_distance_to_sn(&sn);
    if ks < 0.02 {
        Ok(format!("KS distance to the shape-sqrt(3) skew normal {ks:.4} < 0.02"))
    } else {
        Err(format!("KS distance {ks:.4} >= 0.02"))
    }
}

fn criterion_05_independent_pr_law() -> Outcome {
    let mut rng = SplitMix(0xC05);
    let n = 10;
    let sizes: Vec<f64> = (0..n).map(|_| (1 + rng.below(9)) as f64).collect();
    let weights: Vec<f64> = (0..n).map(|_| (1 + rng.below(50)) as f64 / 10.0).collect();
    let c_hat = hat_c_sqrt(&sizes, &weights).map_err(|e| e.to_string())?;
    let lambda = lambda_param(1.0, c_hat).map_err(|e| e.to_string())?;
    let sn = SkewNormal::new(lambda).map_err(|e| e.to_string())?;
    let model = IndepModel::new(sizes, IndepRule::Proportional).map_err(|e| e.to_string())?;
    let spec = IndepSpec::new(model, weights, 1_000_000, 55);
    let result = simulate_indep(&spec).map_err(|e| e.to_string())?;
    let ks = result.welfare.ks_distance_to_sn(&sn);
    if ks < 0.005 {
        Ok(format!(
            "n = 10, m = 1e6: KS to the exact finite-n skew normal (shape {lambda:.3}) {ks:.5} < 0.005"
        ))
    } else {
        Err(format!("KS {ks:.5} >= 0.005 against shape {lambda:.3}"))
    }
}

struct DominanceRun {
    label: &'static str,
    cosine: f64,
    result: welfare_core::engine::SimulationResult,
}

impl DominanceRun {
    fn empirical(&self) -> &EmpiricalWelfare {
        self.result.welfare.as_empirical().expect("samples retained")
    }
}

fn dominance_society(samples: u64) -> Result<Vec<DominanceRun>, String> {
    let mut rng = SplitMix(0xC06);
    let sizes: Vec<f64> = (0..500).map(|_| (1 + rng.below(3)) as f64).collect();
    let allocations: [(&'static str, WeightLaw); 3] = [
        ("proportional", Box::new(|s| s)),
        ("constant", Box::new(|_| 1.0)),
        ("power(3)", Box::new(|s: f64| s.powi(3))),
    ];
    allocations
        .iter()
        .enumerate()
        .map(|(i, (label, law))| {
            let weights: Vec<f64> = sizes.iter().map(|&s| law(s)).collect();
            let cos = cosine(&sizes, &weights).map_err(|e| e.to_string())?;
            let spec = spec_for(
                sizes.clone(),
                weights,
                RepresentationRule::WinnerTakeAll,
                MarginDistribution::Rademacher,
                samples,
                61 + i as u64,
            );
            let result = simulate(&spec).map_err(|e| e.to_string())?;
            Ok(DominanceRun { label, cosine: cos, result })
        })
        .collect()
}

fn expected_verdict(cos_a: f64, cos_b: f64) -> Dominance {
    if cos_a > cos_b + 1e-12 {
        Dominance::Dominates
    } else if cos_b > cos_a + 1e-12 {
        Dominance::Dominated
    } else {
        Dominance::Incomparable { statistically_equal: true }
    }
}

fn dominance_pairs(runs: &[DominanceRun], alpha: f64) -> Result<(Vec<String>, Vec<String>), String> {
    let mut agreed = Vec::new();
    let mut disagreed = Vec::new();
    for (i, j) in [(0usize, 1usize), (0, 2), (1, 2)] {
        let (a, b) = (&runs[i], &runs[j]);
        let verdict = dominates(a.empirical(), b.empirical(), alpha).map_err(|e| e.to_string())?;
        let expected = expected_verdict(a.cosine, b.cosine);
        let (sup_ab, sup_ba) = cdf_gaps(a.empirical(), b.empirical());
        let eps = dkw_epsilon(a.empirical().len(), b.empirical().len(), alpha);
        let line = format!(
            "{} (cos {:.4}) vs {} (cos {:.4}): verdict {verdict}, sup gaps {:.4}/{:.4}, band {:.4}",
            a.label, a.cosine, b.label, b.cosine, sup_ab, sup_ba, eps
        );
        if verdict == expected {
            agreed.push(line);
        } else {
            disagreed.push(format!("{line}, cosine order expects {expected}"));
        }
    }
    Ok((agreed, disagreed))
}

fn criterion_06_dominance_order() -> Outcome {
    let runs = dominance_society(100_000)?;
    let (agreed, disagreed) = dominance_pairs(&runs, 0.01)?;
    if disagreed.is_empty() {
        Ok(format!("all 3 pairs follow the cosine order: {}", agreed.join("; ")))
    } else {
        Err(format!(
            "{} of 3 pairs off the cosine order: {} [underpowered at m = 1e5: the two \
             skew-normal CDFs differ by less than the band; see the ignored companion test]",
            disagreed.len(),
            disagreed.join("; ")
        ))
    }
}

fn criterion_07_analytic_identities() -> Outcome {
    let mut worst_mean: f64 = 0.0;
    for lambda in [0.0, 0.5, -0.5, 2.0, -2.0, 10.0, -10.0] {
        let sn = SkewNormal::new(lambda).map_err(|e| e.to_string())?;
        let quad = integrate_with_splits(|x| x * sn_pdf(&sn, x), -12.0, 12.0, &[0.0], 1e-12)
            .map_err(|e| e.to_string())?;
        let gap = (sn_mean(&sn) - quad).abs();
        worst_mean = worst_mean.max(gap);
        if gap >= 1e-10 {
            return Err(format!("mean vs quadrature gap {gap:.2e} at shape {lambda}"));
        }
    }
    let mut worst_cdf: f64 = 0.0;
    for lambda in [0.5, 1.0, 2.0, 5.0, 10.0, 50.0] {
        let sn = SkewNormal::new(lambda).map_err(|e| e.to_string())?;
        let gap = (sn_cdf(&sn, 0.0) - (1.0 / lambda).atan() / std::f64::consts::PI).abs();
        worst_cdf = worst_cdf.max(gap);
        if gap >= 1e-10 {
            return Err(format!("cdf(0) vs arctan identity gap {gap:.2e} at shape {lambda}"));
        }
    }
    let mut worst_delta: f64 = 0.0;
    let root_2_pi = (2.0 / std::f64::consts::PI).sqrt();
    for rho_step in 1..=20 {
        for c_step in 0..=20 {
            let rho = rho_step as f64 / 20.0;
            let c = c_step as f64 / 20.0;
            let profile = asymptotic_objectives(rho, c).map_err(|e| e.to_string())?;
            let gap = (profile.delta_limit - (root_2_pi - profile.u_limit) / 2.0).abs();
            worst_delta = worst_delta.max(gap);
            if gap > 1e-14 {
                return Err(format!("deficit identity gap {gap:.2e} at rho {rho} c {c}"));
            }
        }
    }
    Ok(format!(
        "mean gap <= {worst_mean:.1e}, cdf(0) gap <= {worst_cdf:.1e}, deficit identity gap <= {worst_delta:.1e}"
    ))
}

fn criterion_08_sainte_lague_inversion() -> Outcome {
    let mut rng = SplitMix(0xC08);
    let sizes: Vec<f64> = (0..12).map(|_| (1 + rng.below(9)) as f64).collect();
    let mut checked = 0;
    for pair in 0..100 {
        let a: Vec<f64> = (0..12).map(|_| (1 + rng.below(99)) as f64 / 10.0).collect();
        let mut b: Vec<f64> = (0..12).map(|_| (1 + rng.below(99)) as f64 / 10.0).collect();
        let total_a: f64 = a.iter().sum();
        let total_b: f64 = b.iter().sum();
        let scale = total_a / total_b;
        for w in &mut b {
            *w *= scale;
        }
        let dc = hat_c_sqrt(&sizes, &a).map_err(|e| e.to_string())?
            - hat_c_sqrt(&sizes, &b).map_err(|e| e.to_string())?;
        let dsl = sainte_lague(&sizes, &a).map_err(|e| e.to_string())?
            - sainte_lague(&sizes, &b).map_err(|e| e.to_string())?;
        let c_tied = dc.abs() < 1e-12;
        let sl_tied = dsl.abs() < 1e-12;
        if c_tied || sl_tied {
            if !(c_tied && sl_tied) {
                return Err(format!("pair {pair}: tie in one index only (dc {dc:.2e}, dsl {dsl:.2e})"));
            }
        } else if dc.signum() != -dsl.signum() {
            return Err(format!("pair {pair}: same-direction indices (dc {dc:.2e}, dsl {dsl:.2e})"));
        }
        checked += 1;
    }
    Ok(format!("{checked} equal-total pairs ordered oppositely by the two indices"))
}

fn criterion_09_thread_determinism() -> Outcome {
    let config = r#"{
  "society": { "pattern": [1, 2], "n": 200 },
  "allocation": { "law": "proportional" },
  "rule": "winner_take_all",
  "margin": "uniform",
  "samples": 100000,
  "seed": 2718,
  "write_samples": true
}"#;
    let bin = env!("CARGO_BIN_EXE_welfare-order");
    let dir = TempDir::new().map_err(|e| e.to_string())?;
    let config_path = dir.path().join("config.json");
    fs::write(&config_path, config).map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for threads in ["1", "8"] {
        let out_dir = dir.path().join(format!("t{threads}"));
        let status = Command::new(bin)
            .args(["simulate", "--config"])
            .arg(&config_path)
            .arg("--out")
            .arg(&out_dir)
            .args(["--threads", threads])
            .output()
            .map_err(|e| e.to_string())?;
        if !status.status.success() {
            return Err(format!(
                "simulate --threads {threads} failed: {}",
                String::from_utf8_lossy(&status.stderr)
            ));
        }
        let csv = fs::read(out_dir.join("samples.csv")).map_err(|e| e.to_string())?;
        let json = fs::read(out_dir.join("result.json")).map_err(|e| e.to_string())?;
        outputs.push((csv, json));
    }
    if outputs[0] != outputs[1] {
        return Err("samples CSV or summary differs between --threads 1 and --threads 8".into());
    }
    Ok(format!(
        "--threads 1 and --threads 8 emitted byte-identical samples.csv ({} bytes) and result.json",
        outputs[0].0.len()
    ))
}

fn criterion_10_identity_reduction() -> Outcome {
    use welfare_core::extensions::{simulate_intensity, EpsilonCdf, IntensityModel, IntensitySpec};
    let sizes = vec![3.0, 1.0, 2.0, 5.0];
    let weights = vec![2.0, 1.0, 1.0, 3.0];
    let step = RepresentationRule::step(vec![0.4], vec![0.25, 1.0]).expect("step rule");
    for (tag, rule) in [("wta", RepresentationRule::WinnerTakeAll), ("step", step)] {
        let correlated = spec_for(
            sizes.clone(),
            weights.clone(),
            rule.clone(),
            MarginDistribution::Uniform,
            50_000,
            2024,
        );
        let base = simulate(&correlated).map_err(|e| e.to_string())?;
        let model = IntensityModel::new(
            MarginDistribution::Uniform,
            EpsilonCdf::uniform(1.0).map_err(|e| e.to_string())?,
        )
        .map_err(|e| e.to_string())?;
        let spec = IntensitySpec::new(
            model,
            correlated.society.clone(),
            correlated.alloc.clone(),
            rule,
            50_000,
            2024,
        );
        let intensity = simulate_intensity(&spec).map_err(|e| e.to_string())?;
        if intensity.sigma.to_bits() != base.sigma.to_bits() {
            return Err(format!("{tag}: sigma bits differ"));
        }
        if intensity.tie_count != base.tie_count {
            return Err(format!("{tag}: tie counts differ"));
        }
        let same = |xs: &[f64], ys: &[f64]| {
            xs.len() == ys.len()
                && xs.iter().zip(ys).all(|(x, y)| x.to_bits() == y.to_bits())
        };
        if !same(&intensity.welfare_ordered, &base.welfare_ordered) {
            return Err(format!("{tag}: welfare samples differ in bits"));
        }
        if !same(&intensity.s_norm_ordered, &base.s_norm_ordered) {
            return Err(format!("{tag}: margin samples differ in bits"));
        }
    }
    Ok("uniform-noise intensity runs reproduce the correlated runs bit for bit (wta and step)".into())
}

#[test]
fn acceptance_suite() {
    let criteria: Vec<Criterion> = vec![
        ("01 oracle agreement", criterion_01_oracle_agreement),
        ("02 rational hand instance", criterion_02_rational_hand_instance),
        ("03 large-n convergence", criterion_03_large_n_convergence),
        ("04 skew-normal fit", criterion_04_skew_normal_fit),
        ("05 independent-model finite-n law", criterion_05_independent_pr_law),
        ("06 dominance follows cosine order", criterion_06_dominance_order),
        ("07 analytic identities", criterion_07_analytic_identities),
        ("08 Sainte-Lague ordinal inversion", criterion_08_sainte_lague_inversion),
        ("09 thread-count determinism", criterion_09_thread_determinism),
        ("10 intensity identity reduction", criterion_10_identity_reduction),
    ];
    let mut failures = Vec::new();
    for (name, criterion) in criteria {
        match criterion() {
            Ok(detail) => println!("criterion {name}: PASS - {detail}"),
            Err(detail) => {
                println!("criterion {name}: FAIL - {detail}");
                failures.push(name);
            }
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}

/// Companion to criterion 06: the constant vs power(3) pair separates once
/// the band shrinks below the true CDF gap. Slow; run with --ignored.
#[test]
#[ignore]
fn dominance_pair_resolves_with_more_samples() {
    let runs = dominance_society(4_000_000).expect("simulations");
    let (agreed, disagreed) = dominance_pairs(&runs, 0.01).expect("verdicts");
    for line in &agreed {
        println!("agreed: {line}");
    }
    for line in &disagreed {
        println!("disagreed: {line}");
    }
    assert!(
        disagreed.is_empty(),
        "cosine order still unresolved at m = 4e6: {disagreed:?}"
    );
}
