//! Normal quantiles, the scaled Bessel function and the inverse Gaussian law.

use ruincap::special::{bessel_i1_scaled, inverse_gaussian_cdf, std_normal_cdf, std_normal_quantile};
use ruincap::Probability;

fn main() -> ruincap::Result<()> {
    for a in [0.05, 0.025, 0.01] {
        let z = Probability::new(a)?.upper_quantile()?;
        println!("z_{a} = {z:.6}  (Phi(z) = {:.6})", std_normal_cdf(z));
    }
    println!("Phi^-1(1e-12) = {:.6}", std_normal_quantile(1e-12)?);
    for x in [0.5, 1.6, 10.0, 1e4] {
        println!("e^-x I1({x}) = {:.10e}", bessel_i1_scaled(x)?);
    }
    for x in [0.5, 1.0, 2.0] {
        println!("IG(mu = 1, lambda = 3) cdf at {x}: {:.8}", inverse_gaussian_cdf(x, 1.0, 3.0)?);
    }
    Ok(())
}
