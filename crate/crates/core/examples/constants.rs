//! Derived constants and hypothesis report for the four table models.

use ruincap::cli::table1_models;

fn main() -> ruincap::Result<()> {
    for m in table1_models() {
        let k = m.derived_constants()?;
        let pre = m.preconditions();
        println!(
            "{m}\n  c* {:.4}  M {:.4}  D2 {:.4}  M_V {:.4}  D2_V {:.4}  IG hypotheses {}",
            k.c_star, k.m_big, k.d2_big, k.m_v, k.d2_v, pre.inverse_gaussian()
        );
        for w in pre.warnings() {
            println!("  warning: {w}");
        }
    }
    Ok(())
}
