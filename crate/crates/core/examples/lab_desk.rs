//! Run the bundled desk configuration and print one verdict line per claim.

use std::path::PathBuf;

use segment_hitting::lab::{run, ExperimentConfig};

fn main() -> segment_hitting::Result<()> {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs/desk.json");
    let cfg = ExperimentConfig::from_path(&root)?;
    let out = std::env::temp_dir().join("seghit-lab-desk");
    let summary = run(cfg, None, Some(out.clone()))?;
    for (claim, s) in &summary {
        println!(
            "{claim:<8} {:<4} fitted={:<10.4e} max_dev={:<10.4e} {}",
            s.verdict.label(),
            s.fitted_constant,
            s.max_dev,
            s.note
        );
    }
    println!("reports in {}", out.display());
    Ok(())
}
