//! Inverse Gaussian and Cramér approximations against the exact ruin probability,
//! plus the asymptotic capital endpoints.

use ruincap::approx::{capital_asymptotic_endpoints, cramer_ruin_exp, ig_ruin_probability, var_clt, IgForm};
use ruincap::exact::{ruin_finite_exp, ExpPair};
use ruincap::model::RiskModel;
use ruincap::Probability;

fn main() -> ruincap::Result<()> {
    let m = RiskModel::exponential(1.0, 1.0)?;
    let p = ExpPair::new(1.0, 1.0)?;
    println!("u = 50, t = 1000");
    println!("   c     exact       ig      cramer");
    for c in [0.8, 0.9, 1.0, 1.1, 1.2, 1.5] {
        let cr = cramer_ruin_exp(&p, 50.0, c, 1000.0).map_or("excluded".into(), |v| format!("{v:.6}"));
        println!(
            "{c:5.2}  {:.6}  {:.6}  {cr}",
            ruin_finite_exp(&p, 50.0, c, 1000.0)?,
            ig_ruin_probability(&m, 50.0, c, 1000.0, IgForm::Closed)?
        );
    }
    let alpha = Probability::new(0.05)?;
    let e = capital_asymptotic_endpoints(&m, alpha, 200.0)?;
    println!("asymptotic capital at c = 0: {:.3}, at c*: {:.3}", e.u_at_zero, e.u_at_cstar);
    println!("CLT Value-at-Risk at c = 1, t = 200: {:.3}", var_clt(&m, alpha, 200.0, 1.0)?);
    Ok(())
}
