//! Adjustment coefficients and capital bounds above c*.

use ruincap::bounds::{
    adjustment_coefficient, capital_upper_bound_exp, capital_upper_bound_lundberg, lundberg_ratio_bounds, RatioVariant,
};
use ruincap::dist::Distribution;
use ruincap::exact::ExpPair;
use ruincap::model::RiskModel;
use ruincap::Probability;

fn main() -> ruincap::Result<()> {
    let alpha = Probability::new(0.05)?;
    let m1 = RiskModel::exponential(0.8, 0.6)?;
    let p1 = ExpPair::new(0.8, 0.6)?;
    let m4 = RiskModel::new(Distribution::erlang(1.6, 2)?, Distribution::exponential(0.6)?)?;
    println!("   c   kappa M(i)  bound M(i)  kappa M(iv)  Lundberg M(iv)  ratio interval M(iv)");
    for c in [1.5, 2.0, 2.5, 3.0] {
        let r = lundberg_ratio_bounds(&m4, c, RatioVariant::YBased)?;
        let (lo, hi) = r.capital_interval(alpha)?;
        println!(
            "{c:4.1}  {:10.6}  {:10.4}  {:11.6}  {:14.4}  [{lo:.3}, {hi:.3}]",
            adjustment_coefficient(&m1, c)?.kappa,
            capital_upper_bound_exp(&p1, alpha, c)?,
            adjustment_coefficient(&m4, c)?.kappa,
            capital_upper_bound_lundberg(&m4, alpha, c)?,
        );
    }
    let pareto = RiskModel::new(Distribution::exponential(0.8)?, Distribution::pareto(10.0, 0.05)?)?;
    if let Err(e) = adjustment_coefficient(&pareto, 2.0) {
        println!("Pareto claims: {e}");
    }
    Ok(())
}
