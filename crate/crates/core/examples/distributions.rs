//! Moments, densities, tails and sampling for the supported laws.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ruincap::dist::Distribution;

fn main() -> ruincap::Result<()> {
    let laws = [
        Distribution::exponential(0.6)?,
        Distribution::erlang(1.6, 2)?,
        Distribution::mixture2(1.0, 2.0, 2.0 / 3.0)?,
        Distribution::pareto(4.0, 0.35)?,
        Distribution::kummer(5.0, 5.0)?,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for d in &laws {
        let mo = d.moments()?;
        print!("{d}: mean {:.5} variance {:.5} E[X^3] {:?}", mo.mean, mo.variance, mo.third_moment);
        // Kummer supports moments only
        match (d.sf(2.0), d.sample(&mut rng)) {
            (Ok(p), Ok(x)) => println!(" | sf(2) {p:.5} | draw {x:.4}"),
            (Err(e), _) | (_, Err(e)) => println!(" | {e}"),
        }
    }
    Ok(())
}
