//! Acceptance suite: one test per shipped-behavior criterion, each printing
//! a PASS line with its measured numbers (visible with `--nocapture`).
//!
//! Run with:
//!
//! ```text
//! cargo test -p msf-cli --test acceptance -- --nocapture
//! ```

use std::collections::BTreeSet;
use std::time::Instant;

use msf_circuits::{
    build_c2t_simple, build_c2t_surgery, build_ccz_factory, build_fifteen_to_one,
    build_phase_catalysis, phase_catalysis_t_cost, SQRT_T_DEGREES,
};
use msf_error_analysis::{enumerate_errors_with, ClassifierPath, EnumerateOptions};
use msf_pipeline_sim::{
    catalyst_error_stats, level1_effective_period, mean_bad_closed_form, p_any_bad_closed_form,
    simulate, PipelineConfig,
};
use msf_resource_model::{
    chain_errors, estimate, factoring_workload, toffoli_speedup, DistanceAssignment, FactoryModel,
    PhysicalAssumptions, Regime,
};
use msf_sim_core::{enumerate_branches, run_circuit, FIDELITY_TOL};

fn no_errors() -> BTreeSet<String> {
    BTreeSet::new()
}

fn assert_within(value: f64, target: f64, rel_tol: f64, what: &str) {
    assert!(
        (value - target).abs() <= rel_tol * target.abs(),
        "{what}: {value:.4e} not within {:.0}% of {target:.4e}",
        rel_tol * 100.0
    );
}

#[test]
fn criterion_1_functional_circuit_verification() {
    let start = Instant::now();

    // Error-free 8T→CCZ run reproduces |CCZ⟩.
    let ccz = build_ccz_factory();
    let out = run_circuit(&ccz, 1, &no_errors()).unwrap();
    assert!(out.accepted);
    let ccz_fid = out.output_fidelities(&ccz).unwrap()[0];
    assert!(ccz_fid >= 1.0 - FIDELITY_TOL);

    // Both C2T forms yield three |T⟩ outputs on every measurement branch.
    let simple = build_c2t_simple();
    let branches = enumerate_branches(&simple, &no_errors(), 64).unwrap();
    for b in &branches {
        for f in b.outcome.output_fidelities(&simple).unwrap() {
            assert!(f >= 1.0 - FIDELITY_TOL);
        }
    }
    let surgery = build_c2t_surgery();
    let branches = enumerate_branches(&surgery, &no_errors(), 1 << 10).unwrap();
    assert!(branches.len() > 1);
    for b in &branches {
        for f in b.outcome.output_fidelities(&surgery).unwrap() {
            assert!(f >= 1.0 - FIDELITY_TOL, "surgery branch fidelity {f}");
        }
    }
    let surgery_branches = branches.len();

    // Generalized phase catalysis for twenty random angles, catalyst intact.
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    for trial in 0..20 {
        let theta = rng.gen::<f64>() * 89.9 + 0.1;
        let c = build_phase_catalysis(theta).unwrap();
        let out = run_circuit(&c, trial, &no_errors()).unwrap();
        for (spec, f) in c.outputs.iter().zip(out.output_fidelities(&c).unwrap()) {
            assert!(
                f >= 1.0 - FIDELITY_TOL,
                "θ={theta}: {:?} fidelity {f}",
                spec.role
            );
        }
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    println!(
        "acceptance criterion 1 (functional verification): PASS — ccz fidelity {ccz_fid:.12}, \
         {surgery_branches} surgery branches, 20 random angles, {elapsed:.2?}"
    );
}

#[test]
fn criterion_2_suppression_coefficients_by_exhaustive_oracle() {
    let start = Instant::now();

    // State-vector and Pauli-frame classifiers must agree on every pattern.
    let ccz = build_ccz_factory();
    let report = enumerate_errors_with(
        &ccz,
        EnumerateOptions {
            max_weight: 2,
            harm_tolerance: 1e-6,
            path: ClassifierPath::Both,
        },
    )
    .unwrap();
    let w1 = report.per_weight[&1];
    assert_eq!((w1.detected, w1.undetected_benign + w1.undetected_harmful), (8, 0));
    let w2 = report.per_weight[&2];
    assert_eq!((w2.detected, w2.undetected_harmful), (0, 28));
    assert_eq!(report.leading_term, Some((28, 2)));

    let t15 = build_fifteen_to_one();
    let report = enumerate_errors_with(
        &t15,
        EnumerateOptions {
            max_weight: 3,
            harm_tolerance: 1e-6,
            path: ClassifierPath::Both,
        },
    )
    .unwrap();
    let w3 = report.per_weight[&3];
    assert_eq!(w3.undetected_harmful, 35);
    assert_eq!(report.leading_term, Some((35, 3)));

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 600.0, "took {elapsed:?}");
    println!(
        "acceptance criterion 2 (exhaustive suppression oracle): PASS — ccz (28, 2), \
         t15 (35, 3), both classifier paths agree on all patterns, {elapsed:.2?}"
    );
}

#[test]
fn criterion_3_spreadsheet_error_chain_regression() {
    let start = Instant::now();
    let assumptions = PhysicalAssumptions::default();
    let distances = DistanceAssignment::default();

    let dl = chain_errors(Regime::DistillationLimited, &distances, &assumptions).unwrap();
    assert_within(dl.eps_t1, 3.5e-8, 0.10, "distillation-limited eps_t1");
    assert_within(dl.eps_ccz, 3.4e-14, 0.10, "distillation-limited eps_ccz");

    let min = chain_errors(Regime::MinimalDistance, &distances, &assumptions).unwrap();
    assert_within(min.eps_t1, 1.4e-6, 0.20, "minimal-distance eps_t1");
    assert_within(min.eps_ccz, 5.3e-11, 0.15, "minimal-distance eps_ccz");
    assert_within(
        min.states_before_failure(),
        1.9e10,
        0.20,
        "states before failure",
    );

    let wide = DistanceAssignment::new(7, 19, 31).unwrap();
    let wide_chain = chain_errors(Regime::MinimalDistance, &wide, &assumptions).unwrap();
    let states = wide_chain.states_before_failure();
    assert!(
        (1e11..=1e12).contains(&states),
        "d1=19 states {states:.3e} outside [1e11, 1e12]"
    );

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!(
        "acceptance criterion 3 (error-chain regression): PASS — eps_t1 {:.3e}/{:.3e}, \
         eps_ccz {:.3e}/{:.3e}, states {:.3e} and {:.3e} at d1=19, {elapsed:.2?}",
        dl.eps_t1,
        min.eps_t1,
        dl.eps_ccz,
        min.eps_ccz,
        min.states_before_failure(),
        states
    );
}

#[test]
fn criterion_4_workload_feasibility() {
    let start = Instant::now();
    let assumptions = PhysicalAssumptions::default();
    let ccz = FactoryModel::ccz_factory();

    let w1024 = factoring_workload(1024).unwrap();
    let est_1024 = estimate(
        &w1024,
        &ccz,
        Regime::MinimalDistance,
        &DistanceAssignment::default(),
        &assumptions,
    )
    .unwrap();
    assert!(
        est_1024.success_probability < 0.5,
        "1024-bit success {}",
        est_1024.success_probability
    );

    // At d1 = 19 the topological terms sit well below distillation, so the
    // distillation-limited chain is the operative description.
    let w4096 = factoring_workload(4096).unwrap();
    let wide = DistanceAssignment::new(7, 19, 31).unwrap();
    let est_4096 = estimate(
        &w4096,
        &ccz,
        Regime::DistillationLimited,
        &wide,
        &assumptions,
    )
    .unwrap();
    assert!(
        est_4096.success_probability > 0.5,
        "4096-bit success {}",
        est_4096.success_probability
    );
    let years = est_4096.runtime_years();
    assert!(
        (4.0..=6.0).contains(&years),
        "single-factory production time {years} years"
    );

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!(
        "acceptance criterion 4 (workload feasibility): PASS — 1024-bit success {:.4} < 0.5, \
         4096-bit success {:.4} > 0.5 in {years:.2} years, {elapsed:.2?}",
        est_1024.success_probability, est_4096.success_probability
    );
}

#[test]
fn criterion_5_pipeline_throughput() {
    let start = Instant::now();

    let ccz_cfg = PipelineConfig::ccz_default();
    assert!(ccz_cfg.horizon_d >= 1e5);
    let ccz_stats = simulate(&ccz_cfg).unwrap();
    let ccz_mean = ccz_stats.mean_output_period_d.unwrap();
    assert!(
        (ccz_mean - 5.5).abs() / 5.5 <= 0.02,
        "ccz mean period {ccz_mean}"
    );

    let c2t_cfg = PipelineConfig::c2t_default();
    assert!(c2t_cfg.horizon_d >= 1e5);
    let c2t_stats = simulate(&c2t_cfg).unwrap();
    let c2t_mean = c2t_stats.mean_output_period_d.unwrap();
    assert!(
        (c2t_mean - 6.5).abs() / 6.5 <= 0.02,
        "c2t mean period {c2t_mean}"
    );

    let eff = level1_effective_period(3.25, 0.03).unwrap();
    assert!((eff - 3.35).abs() <= 0.01, "effective period {eff}");

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    println!(
        "acceptance criterion 5 (throughput): PASS — ccz period {ccz_mean:.4}d, \
         c2t period {c2t_mean:.4}d, level-1 effective {eff:.4}d, {elapsed:.2?}"
    );
}

#[test]
fn criterion_6_correlated_error_statistics() {
    let start = Instant::now();

    for (eps, n) in [(1e-3, 50u32), (1e-4, 100u32)] {
        let stats = catalyst_error_stats(n, eps, 20_000, 13);
        let p = p_any_bad_closed_form(eps, n);
        let m = mean_bad_closed_form(eps, n);
        assert!(
            (stats.p_any_bad - p).abs() <= 3.0 * stats.p_any_std_err,
            "(eps={eps}, n={n}) p_any {} vs {p}",
            stats.p_any_bad
        );
        assert!(
            (stats.mean_bad_count - m).abs() <= 3.0 * stats.mean_std_err.max(1e-9),
            "(eps={eps}, n={n}) mean {} vs {m}",
            stats.mean_bad_count
        );
    }

    // Catalyst discard frequency in the full pipeline at the minimal-distance
    // level-1 error rate: about one per hundred thousand distillations.
    let cfg = PipelineConfig {
        t1_error_prob: 1.4e-6,
        horizon_d: 4e7,
        ..PipelineConfig::c2t_default()
    };
    let stats = simulate(&cfg).unwrap();
    let runs = stats.outputs_produced + stats.discarded_runs;
    let rate = stats.catalyst_discard_events as f64 / runs as f64;
    assert!(
        (0.5e-5..=2.0e-5).contains(&rate),
        "catalyst discard rate {rate:.3e} per distillation ({} events in {runs} runs)",
        stats.catalyst_discard_events
    );

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    println!(
        "acceptance criterion 6 (correlated errors): PASS — closed forms within 3σ, \
         catalyst discard rate {rate:.2e}/run over {runs} runs, {elapsed:.2?}"
    );
}

#[test]
fn criterion_7_t_cost_accounting_and_speedups() {
    let start = Instant::now();

    assert_eq!(phase_catalysis_t_cost(SQRT_T_DEGREES), Some(5.0));
    let per_state = phase_catalysis_t_cost(SQRT_T_DEGREES).unwrap() / 2.0;
    assert_eq!(per_state, 2.5);

    let legacy = FactoryModel::legacy_t_factory();
    let ccz = FactoryModel::ccz_factory();
    let c2t = FactoryModel::catalyzed_2t_factory();
    let toffoli_ratio = toffoli_speedup(&legacy, &ccz);
    assert!((toffoli_ratio - 26.0 / 5.5).abs() < 1e-12);
    let t_rate_ratio = toffoli_speedup(&legacy, &c2t);
    assert!((t_rate_ratio - 2.0).abs() < 1e-12);

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!(
        "acceptance criterion 7 (T-cost accounting): PASS — √T run cost 5 ({per_state}/state), \
         Toffoli speedup {toffoli_ratio:.2}, T-rate ratio {t_rate_ratio:.1}, {elapsed:.2?}"
    );
}
