//! Build a run configuration, evaluate it and re-run it from the file's own metadata.

use ruincap::cli::{cmd_ruinprob, rerun, CGrid, MethodName, RunConfig, SimSettings};
use ruincap::dist::Distribution;
use ruincap::model::RiskModel;

fn main() -> ruincap::Result<()> {
    let cfg = RunConfig {
        model: RiskModel::new(Distribution::mixture2(1.0, 2.0, 2.0 / 3.0)?, Distribution::pareto(4.0, 0.35)?)?,
        t: 1000.0,
        u: Some(40.0),
        c_grid: CGrid::new(0.6, 1.6, 0.1),
        methods: vec![MethodName::Ig, MethodName::Mc],
        sim: Some(SimSettings { n_paths: 5_000, ..SimSettings::default() }),
        ..RunConfig::default()
    };
    print!("{}", cfg.to_toml_string()?);
    let table = cmd_ruinprob(&cfg)?;
    let csv = table.to_csv_string()?;
    print!("{csv}");
    assert_eq!(rerun(&table)?.to_csv_string()?, csv);
    println!("# re-run from metadata is identical");
    Ok(())
}
