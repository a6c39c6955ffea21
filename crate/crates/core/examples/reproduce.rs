//! Regenerate a figure preset and write its CSV and verification sidecar.
//!
//! `cargo run --example reproduce -- fig7 out/`

use ruincap::cli::{reproduce, PresetOptions};

fn main() -> ruincap::Result<()> {
    let mut args = std::env::args().skip(1);
    let id = args.next().unwrap_or_else(|| "fig1".into());
    let dir = std::path::PathBuf::from(args.next().unwrap_or_else(|| ".".into()));
    std::fs::create_dir_all(&dir)?;
    for a in reproduce(&id, &PresetOptions::default())? {
        a.table.write_path(dir.join(format!("{}.csv", a.name)))?;
        std::fs::write(dir.join(format!("{}.verify.json", a.name)), a.sidecar.to_json()? + "\n")?;
        println!("{}: {} rows, columns {:?}", a.name, a.table.rows.len(), a.table.header);
        for c in &a.sidecar.checks {
            println!("  {}", c.summary());
        }
    }
    Ok(())
}
