//! Exact finite- and infinite-horizon ruin for exponential waiting times and claims.

use ruincap::exact::{aggregate_cdf_exp, ruin_finite_exp, ruin_ultimate_exp, ExpPair};

fn main() -> ruincap::Result<()> {
    let p = ExpPair::new(1.0, 1.0)?;
    println!("P(V_200 <= 240) = {:.6}", aggregate_cdf_exp(&p, 200.0, 240.0)?);
    println!("   c      t=200      t=1000     ultimate");
    for c in [0.8, 1.0, 1.2, 1.5] {
        let ult = ruin_ultimate_exp(&p, 50.0, c)?;
        println!(
            "{c:5.2}  {:9.6}  {:9.6}  {ult:9.6}",
            ruin_finite_exp(&p, 50.0, c, 200.0)?,
            ruin_finite_exp(&p, 50.0, c, 1000.0)?
        );
    }
    Ok(())
}
