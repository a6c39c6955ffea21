//! Simulation engine: pathwise dominance, estimator consistency, the
//! quantile/probability duality and scheduling-independent output.

use ruincap::cli::{cmd_capital, CGrid, MethodName, RunConfig, SimSettings};
use ruincap::dist::Distribution;
use ruincap::exact::{ruin_finite_exp, ExpPair};
use ruincap::model::RiskModel;
use ruincap::montecarlo::{estimate_ruin_prob, simulate, simulate_path, SimConfig};
use ruincap::Probability;

fn unit_model() -> RiskModel {
    RiskModel::exponential(1.0, 1.0).unwrap()
}

#[test]
fn terminal_deficit_never_exceeds_the_supremum() {
    let m = RiskModel::new(Distribution::erlang(1.6, 2).unwrap(), Distribution::pareto(3.0, 0.3).unwrap()).unwrap();
    let (ts, ys) = (m.t_law.sampler().unwrap(), m.y_law.sampler().unwrap());
    let cfg = SimConfig::new(5_000, 42, 50.0);
    for i in 0..cfg.n_paths {
        let mut rng = cfg.path_rng(i);
        let c = 0.5 * (i % 5) as f64;
        let p = simulate_path(&ts, &ys, c, cfg.t, &mut rng);
        assert!(p.terminal_deficit <= p.sup_deficit, "path {i}: {p:?}");
        assert!(p.sup_deficit >= 0.0);
    }
}

#[test]
fn a_path_without_claims_has_zero_supremum() {
    let m = RiskModel::exponential(1e-6, 1.0).unwrap();
    let (ts, ys) = (m.t_law.sampler().unwrap(), m.y_law.sampler().unwrap());
    let mut rng = SimConfig::new(1, 1, 1.0).path_rng(0);
    let p = simulate_path(&ts, &ys, 2.0, 1.0, &mut rng);
    assert_eq!(p.sup_deficit, 0.0);
    assert_eq!(p.terminal_deficit, -2.0);
}

#[test]
fn trivial_levels() {
    let m = unit_model();
    let zero = estimate_ruin_prob(&m, 0.0, 0.0, &SimConfig::new(1_000, 3, 50.0)).unwrap();
    assert_eq!(zero.point, 1.0);
    let far = estimate_ruin_prob(&m, 1e9, 1.0, &SimConfig::new(1_000, 3, 50.0)).unwrap();
    assert_eq!((far.point, far.stderr), (0.0, 0.0));
}

#[test]
fn estimator_is_consistent_over_repeated_seeds() {
    let m = unit_model();
    let exact = ruin_finite_exp(&ExpPair::new(1.0, 1.0).unwrap(), 50.0, 1.0, 1000.0).unwrap();
    let covered = (0..100u64)
        .filter(|&seed| {
            let e = estimate_ruin_prob(&m, 50.0, 1.0, &SimConfig::new(10_000, seed, 1000.0)).unwrap();
            (e.point - exact).abs() <= 3.0 * e.stderr
        })
        .count();
    assert!(covered >= 99, "{covered} of 100 seeds within 3 stderr of {exact}");
}

#[test]
fn capital_quantile_is_dual_to_the_ruin_probability() {
    let m = unit_model();
    let alpha = Probability::new(0.05).unwrap();
    let set = simulate(&m, &[0.8, 1.0, 1.3], &SimConfig::new(20_000, 8, 200.0)).unwrap();
    for j in 0..set.cs.len() {
        let q = set.capitals(j, alpha).unwrap().nonruin_cap.point;
        // smallest u with estimated ruin probability at most alpha, by bisection
        let (mut lo, mut hi) = (0.0f64, 1e4f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if set.ruin_probability(j, mid).point <= 0.05 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let sorted = &set.sup[j];
        let i = sorted.partition_point(|&x| x < q);
        let gap = sorted[i + 1] - sorted[i - 1];
        assert!((hi - q).abs() <= gap + 1e-9, "c = {}: quantile {q}, bisection {hi}, gap {gap}", set.cs[j]);
    }
}

#[test]
fn var_capital_never_exceeds_nonruin_capital() {
    let m = RiskModel::new(Distribution::erlang(1.6, 2).unwrap(), Distribution::exponential(0.6).unwrap()).unwrap();
    let alpha = Probability::new(0.05).unwrap();
    let grid: Vec<f64> = (0..=30).map(|i| 0.1 * i as f64).collect();
    for seed in 0..5 {
        let set = simulate(&m, &grid, &SimConfig::new(2_000, seed, 200.0)).unwrap();
        for j in 0..grid.len() {
            let e = set.capitals(j, alpha).unwrap();
            assert!(e.var_cap.point <= e.nonruin_cap.point);
            assert!(e.nonruin_cap.ci95.0 <= e.nonruin_cap.point && e.nonruin_cap.point <= e.nonruin_cap.ci95.1);
        }
    }
}

#[test]
fn output_does_not_depend_on_the_thread_count() {
    let cfg = RunConfig {
        methods: vec![MethodName::Mc],
        c_grid: CGrid::new(0.0, 2.5, 0.25),
        sim: Some(SimSettings { n_paths: 4_000, seed: 1729, ..SimSettings::default() }),
        ..RunConfig::default()
    };
    let in_pool = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| cmd_capital(&cfg).unwrap().to_csv_string().unwrap())
    };
    let one = in_pool(1);
    assert_eq!(one, in_pool(3));
    assert_eq!(one, in_pool(8));
}
