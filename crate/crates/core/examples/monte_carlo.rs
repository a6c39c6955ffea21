//! Simulated ruin probabilities and capitals with common random numbers.

use ruincap::dist::Distribution;
use ruincap::model::RiskModel;
use ruincap::montecarlo::{simulate, SimConfig};
use ruincap::Probability;

fn main() -> ruincap::Result<()> {
    let m = RiskModel::new(Distribution::erlang(1.6, 2)?, Distribution::exponential(0.6)?)?;
    let alpha = Probability::new(0.05)?;
    let cs = [1.0, 4.0 / 3.0, 1.6, 2.0];
    let set = simulate(&m, &cs, &SimConfig::new(20_000, 1729, 200.0))?;
    println!("    c    VaR [95% CI]               non-ruin [95% CI]          P(ruin | u = 40)");
    for (j, c) in cs.iter().enumerate() {
        let e = set.capitals(j, alpha)?;
        let p = set.ruin_probability(j, 40.0);
        println!(
            "{c:5.3}  {:7.3} [{:7.3}, {:7.3}]  {:7.3} [{:7.3}, {:7.3}]  {:.4} +- {:.4}",
            e.var_cap.point, e.var_cap.ci95.0, e.var_cap.ci95.1,
            e.nonruin_cap.point, e.nonruin_cap.ci95.0, e.nonruin_cap.ci95.1,
            p.point, p.stderr
        );
    }
    Ok(())
}
