//! Property tests for the analytic kernels, bounds and solvers.

use proptest::prelude::*;

use ruincap::approx::{
    capital_asymptotic_bounds, cramer_ruin_exp, ig_ruin_probability, var_clt, IgForm,
};
use ruincap::bounds::{
    adjustment_coefficient, capital_upper_bound_exp, capital_upper_bound_lundberg, lundberg_residual,
};
use ruincap::capital::{capital_curve, nonruin_capital, ultimate_capital, var_capital, Backend, SolveSpec};
use ruincap::model::CapitalKind;
use ruincap::montecarlo::SimConfig;
use ruincap::dist::Distribution;
use ruincap::exact::{aggregate_cdf_exp, ruin_finite_exp, ruin_ultimate_exp, ExpPair};
use ruincap::model::RiskModel;
use ruincap::special::{std_normal_cdf, std_normal_quantile};
use ruincap::table::CurveTable;
use ruincap::Probability;

fn alpha() -> Probability {
    Probability::new(0.05).unwrap()
}

fn unit() -> ExpPair {
    ExpPair::new(1.0, 1.0).unwrap()
}

/// Resolution of the default capital solver: `1e-12` of a bracket of a few hundred.
fn solver_resolution(u: f64) -> f64 {
    1e-9 * (1.0 + u)
}

fn cheap() -> ProptestConfig {
    ProptestConfig { cases: 64, ..ProptestConfig::default() }
}

fn costly() -> ProptestConfig {
    ProptestConfig { cases: 16, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(cheap())]

    #[test]
    fn normal_quantile_inverts_cdf(x in -6.0f64..6.0) {
        prop_assert!((std_normal_quantile(std_normal_cdf(x)).unwrap() - x).abs() <= 1e-8);
    }

    #[test]
    fn finite_ruin_lies_below_ultimate(u in 0.0f64..100.0, c in 0.05f64..3.0, t in 1.0f64..2000.0) {
        let p = unit();
        let fin = ruin_finite_exp(&p, u, c, t).unwrap();
        let ult = ruin_ultimate_exp(&p, u, c).unwrap();
        prop_assert!((0.0..=ult).contains(&fin), "finite {fin} ultimate {ult}");
    }

    #[test]
    fn finite_ruin_is_monotone(u in 0.0f64..80.0, c in 0.1f64..2.5, t in 10.0f64..1500.0) {
        let p = ExpPair::new(0.8, 0.6).unwrap();
        let f = |u, c, t| ruin_finite_exp(&p, u, c, t).unwrap();
        let base = f(u, c, t);
        prop_assert!(f(u + 1.0, c, t) <= base + 1e-6);
        prop_assert!(f(u, c + 0.05, t) <= base + 1e-6);
        prop_assert!(f(u, c, t + 25.0) >= base - 1e-6);
    }

    #[test]
    fn zero_premium_ruin_complements_the_aggregate_cdf(u in 0.0f64..400.0, t in 1.0f64..500.0) {
        let p = unit();
        let s = ruin_finite_exp(&p, u, 0.0, t).unwrap() + aggregate_cdf_exp(&p, t, u).unwrap();
        prop_assert!((s - 1.0).abs() <= f64::EPSILON, "sum {s}");
    }

    #[test]
    fn ig_forms_agree(u in 1.0f64..100.0, c in 0.1f64..2.5, t in 10.0f64..2000.0) {
        let m = RiskModel::exponential(1.0, 1.0).unwrap();
        let a = ig_ruin_probability(&m, u, c, t, IgForm::Closed).unwrap();
        let b = ig_ruin_probability(&m, u, c, t, IgForm::Integral).unwrap();
        prop_assert!((a - b).abs() <= 1e-6, "closed {a} integral {b}");
    }

    #[test]
    fn ig_is_monotone_in_t_and_u(u in 1.0f64..100.0, c in 0.1f64..2.5, t in 10.0f64..2000.0) {
        let m = RiskModel::exponential(1.0, 1.0).unwrap();
        let f = |u, t| ig_ruin_probability(&m, u, c, t, IgForm::Closed).unwrap();
        prop_assert!(f(u, t * 1.1) >= f(u, t) - 1e-12);
        prop_assert!(f(u * 1.1, t) <= f(u, t) + 1e-12);
    }

    #[test]
    fn ultimate_ruin_obeys_the_markov_bound(delta in 0.3f64..3.0, rho in 0.3f64..3.0, excess in 0.05f64..2.0) {
        let p = ExpPair::new(delta, rho).unwrap();
        let m = RiskModel::exponential(delta, rho).unwrap();
        let c = p.c_star() * (1.0 + excess);
        let kappa = adjustment_coefficient(&m, c).unwrap().kappa;
        for u in [1.0, 5.0, 10.0] {
            prop_assert!(ruin_ultimate_exp(&p, u, c).unwrap() <= (-kappa * u).exp() * (1.0 + 1e-12));
        }
    }

    #[test]
    fn closed_bound_sits_below_lundberg_bound(delta in 0.3f64..3.0, rho in 0.3f64..3.0, excess in 0.01f64..2.0) {
        let p = ExpPair::new(delta, rho).unwrap();
        let m = RiskModel::exponential(delta, rho).unwrap();
        let c = p.c_star() * (1.0 + excess);
        let closed = capital_upper_bound_exp(&p, alpha(), c).unwrap();
        let lundberg = capital_upper_bound_lundberg(&m, alpha(), c).unwrap();
        prop_assert!(closed <= lundberg * (1.0 + 1e-9), "{closed} > {lundberg}");
    }

    #[test]
    fn c_star_times_m_is_one(rate in 0.2f64..5.0, shape in 1u32..6, a in 2.5f64..12.0, b in 0.05f64..2.0) {
        for m in [
            RiskModel::new(Distribution::erlang(rate, shape).unwrap(), Distribution::pareto(a, b).unwrap()).unwrap(),
            RiskModel::new(Distribution::exponential(rate).unwrap(), Distribution::kummer(5.0, 5.0).unwrap()).unwrap(),
            RiskModel::new(Distribution::mixture2(rate, 2.0 * rate, 0.4).unwrap(), Distribution::exponential(b).unwrap()).unwrap(),
        ] {
            let k = m.derived_constants().unwrap();
            prop_assert!((k.c_star * k.m_big - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn exponential_constants_match_closed_forms(delta in 0.1f64..5.0, rho in 0.1f64..5.0) {
        let k = RiskModel::exponential(delta, rho).unwrap().derived_constants().unwrap();
        prop_assert!((k.m_big - rho / delta).abs() <= 1e-12 * (rho / delta));
        prop_assert!((k.d2_big - 2.0 * rho / (delta * delta)).abs() <= 1e-12 * (2.0 * rho / (delta * delta)));
    }

    #[test]
    fn claim_scaling_law(scale in 0.2f64..5.0, rate in 0.3f64..3.0, a in 3.5f64..8.0, b in 0.1f64..1.0) {
        let t_law = Distribution::erlang(rate, 2).unwrap();
        for (y, ys) in [
            (Distribution::exponential(rate).unwrap(), Distribution::exponential(rate / scale).unwrap()),
            (Distribution::pareto(a, b).unwrap(), Distribution::pareto(a, b / scale).unwrap()),
            (Distribution::erlang(rate, 3).unwrap(), Distribution::erlang(rate / scale, 3).unwrap()),
        ] {
            let k = RiskModel::new(t_law, y).unwrap().derived_constants().unwrap();
            let ks = RiskModel::new(t_law, ys).unwrap().derived_constants().unwrap();
            prop_assert!((ks.c_star - scale * k.c_star).abs() <= 1e-10 * ks.c_star);
            prop_assert!((ks.m_big - k.m_big / scale).abs() <= 1e-10 * ks.m_big);
            // numerator scales by scale^2, (EY)^3 by scale^3
            prop_assert!((ks.d2_big - k.d2_big / scale).abs() <= 1e-10 * ks.d2_big);
        }
    }

    #[test]
    fn table_round_trip_is_bit_exact(rows in proptest::collection::vec(
        (any::<f64>(), proptest::option::of(any::<f64>())), 1..20)) {
        let mut t = CurveTable::new(["c", "v"]);
        t.push_meta("seed", "1");
        for (c, v) in &rows {
            let clean = |x: f64| if x.is_nan() { None } else { Some(x) };
            t.push_row(vec![clean(*c), v.and_then(clean)]).unwrap();
        }
        let back = CurveTable::from_csv_str(&t.to_csv_string().unwrap()).unwrap();
        prop_assert_eq!(&back.rows, &t.rows);
        prop_assert_eq!(back.to_csv_string().unwrap(), t.to_csv_string().unwrap());
    }
}

proptest! {
    #![proptest_config(costly())]

    #[test]
    fn capital_ordering_chain(c in 0.0f64..2.5) {
        let m = RiskModel::exponential(1.0, 1.0).unwrap();
        let s = SolveSpec::new(Backend::ExactExp);
        let var = var_capital(&m, alpha(), 200.0, c, &s).unwrap().u;
        let non = nonruin_capital(&m, alpha(), 200.0, c, &s).unwrap().u;
        prop_assert!(0.0 <= var && var <= non + solver_resolution(non), "var {var} nonruin {non}");
        if c > 1.0 {
            let ult = ultimate_capital(&m, alpha(), c, &s).unwrap().u;
            prop_assert!(non <= ult + solver_resolution(ult), "nonruin {non} ultimate {ult}");
        }
    }

    #[test]
    fn solved_capital_meets_the_residual(c in 0.0f64..2.5) {
        let m = RiskModel::exponential(1.0, 1.0).unwrap();
        let p = unit();
        let s = SolveSpec::new(Backend::ExactExp);
        let pt = nonruin_capital(&m, alpha(), 200.0, c, &s).unwrap();
        if pt.u > 0.0 {
            prop_assert!((ruin_finite_exp(&p, pt.u, c, 200.0).unwrap() - 0.05).abs() <= s.p_tolerance);
        }
    }

    #[test]
    fn capital_is_monotone_in_c_and_t(c in 0.0f64..2.4) {
        let m = RiskModel::exponential(1.0, 1.0).unwrap();
        let s = SolveSpec::new(Backend::ExactExp);
        let u = |c, t| nonruin_capital(&m, alpha(), t, c, &s).unwrap().u;
        let base = u(c, 200.0);
        prop_assert!(u(c + 0.1, 200.0) <= base + solver_resolution(base));
        prop_assert!(u(c, 250.0) >= base - solver_resolution(base));
    }
}

#[test]
fn lundberg_residual_is_tiny() {
    let models = [
        RiskModel::exponential(1.0, 1.0).unwrap(),
        RiskModel::new(Distribution::erlang(1.6, 2).unwrap(), Distribution::exponential(0.6).unwrap()).unwrap(),
        RiskModel::new(Distribution::mixture2(1.0, 2.0, 2.0 / 3.0).unwrap(), Distribution::erlang(3.0, 2).unwrap())
            .unwrap(),
    ];
    for m in models {
        let cs = m.c_star().unwrap();
        for f in [1.05, 1.3, 2.0, 4.0] {
            let k = adjustment_coefficient(&m, cs * f).unwrap();
            let r = lundberg_residual(&m, cs * f, k.kappa).unwrap();
            assert!(r.abs() <= 1e-10, "{m} c = {}: residual {r:e}", cs * f);
        }
    }
}

#[test]
fn ig_tracks_exact_near_the_critical_premium() {
    let m = RiskModel::exponential(1.0, 1.0).unwrap();
    let p = unit();
    for c in [0.9, 1.0, 1.1] {
        let worst = (1..=20)
            .map(|i| {
                let t = 50.0 * i as f64;
                (ig_ruin_probability(&m, 50.0, c, t, IgForm::Closed).unwrap() - ruin_finite_exp(&p, 50.0, c, t).unwrap())
                    .abs()
            })
            .fold(0.0, f64::max);
        assert!(worst <= 0.02, "c = {c}: sup |ig - exact| = {worst}");
    }
}

#[test]
fn cramer_misses_where_ig_holds_next_to_c_star() {
    // one grid step below c* on the 0.05 grid
    let (u, t, c) = (50.0, 1000.0, 0.95);
    let p = unit();
    let m = RiskModel::exponential(1.0, 1.0).unwrap();
    let exact = ruin_finite_exp(&p, u, c, t).unwrap();
    let cramer = cramer_ruin_exp(&p, u, c, t).unwrap();
    let ig = ig_ruin_probability(&m, u, c, t, IgForm::Closed).unwrap();
    assert!((cramer - exact).abs() > (ig - exact).abs(), "cramer {cramer} ig {ig} exact {exact}");
}

#[test]
fn clt_var_at_zero_premium_is_the_lower_band() {
    let m = RiskModel::exponential(1.0, 1.0).unwrap();
    let v = var_clt(&m, alpha(), 200.0, 0.0).unwrap();
    let band = capital_asymptotic_bounds(&m, alpha(), 200.0, 0.0).unwrap();
    assert!((v - band.lower).abs() <= 1e-10, "{v} vs {}", band.lower);
}

#[test]
fn capital_respects_the_upper_bounds_on_model_grids() {
    let grid: Vec<f64> = (27..=60).map(|i| 0.05 * i as f64).collect();
    // M(i): exact backend against the closed-form bound
    let m1 = RiskModel::exponential(0.8, 0.6).unwrap();
    let p1 = m1.exp_pair().unwrap();
    let exact = SolveSpec::new(Backend::ExactExp);
    for &c in &grid {
        let u = nonruin_capital(&m1, alpha(), 200.0, c, &exact).unwrap().u;
        let b = capital_upper_bound_exp(&p1, alpha(), c).unwrap();
        assert!(u <= b + solver_resolution(b), "M(i) c = {c}: {u} > {b}");
    }
    // M(iv): no exact backend; the simulated capital stands in for the true one
    let m4 = RiskModel::new(Distribution::erlang(1.6, 2).unwrap(), Distribution::exponential(0.6).unwrap()).unwrap();
    let mc = SolveSpec::monte_carlo(SimConfig::new(100_000, 11, 200.0));
    let curve = capital_curve(&m4, alpha(), 200.0, &grid, CapitalKind::Nonruin, &mc).unwrap();
    for (c, p) in grid.iter().zip(&curve.points) {
        let u = p.as_ref().unwrap().u;
        let b = capital_upper_bound_lundberg(&m4, alpha(), *c).unwrap();
        assert!(u <= b, "M(iv) c = {c}: {u} > {b}");
    }
}

#[test]
fn exact_and_ig_capitals_agree_within_one_unit() {
    let m = RiskModel::exponential(1.0, 1.0).unwrap();
    let (e, g) = (SolveSpec::new(Backend::ExactExp), SolveSpec::new(Backend::InverseGaussian));
    let mut worst = (0.0, 0.0);
    for i in 0..=20 {
        let c = 0.5 + 0.05 * i as f64;
        let d = (nonruin_capital(&m, alpha(), 200.0, c, &e).unwrap().u - nonruin_capital(&m, alpha(), 200.0, c, &g).unwrap().u)
            .abs();
        if d > worst.1 {
            worst = (c, d);
        }
    }
    assert!(worst.1 <= 1.0, "largest gap {} at c = {}", worst.1, worst.0);
}
