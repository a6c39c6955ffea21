//! Value-at-Risk and non-ruin capital along a premium grid with several backends.

use ruincap::capital::{capital_curve, Backend, SolveSpec};
use ruincap::model::{CapitalKind, CapitalPoint, RiskModel};
use ruincap::Probability;

fn main() -> ruincap::Result<()> {
    let m = RiskModel::exponential(1.0, 1.0)?;
    let alpha = Probability::new(0.05)?;
    let grid: Vec<f64> = (0..=10).map(|i| 0.25 * i as f64).collect();
    let exact = SolveSpec::new(Backend::ExactExp);
    let ig = SolveSpec::new(Backend::InverseGaussian);
    let var = capital_curve(&m, alpha, 200.0, &grid, CapitalKind::Var, &exact)?;
    let non = capital_curve(&m, alpha, 200.0, &grid, CapitalKind::Nonruin, &exact)?;
    let approx = capital_curve(&m, alpha, 200.0, &grid, CapitalKind::Nonruin, &ig)?;
    println!("   c       VaR   non-ruin   non-ruin (IG)");
    let show = |p: &ruincap::Result<CapitalPoint>| p.as_ref().map_or("NA".into(), |p| format!("{:9.4}", p.u));
    for (i, c) in grid.iter().enumerate() {
        println!("{c:5.2}  {}  {}  {}", show(&var.points[i]), show(&non.points[i]), show(&approx.points[i]));
    }
    Ok(())
}
