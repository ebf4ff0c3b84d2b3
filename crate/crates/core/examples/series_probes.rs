//! Empirical constants of the jump-over bounds for the simple walk.

use segment_hitting::continuum::SegmentSpec;
use segment_hitting::probes::{bound_probe, Probe};
use segment_hitting::walk::Walk;

fn main() -> segment_hitting::Result<()> {
    let walk = Walk::simple();
    for n in [4, 8] {
        let seg = SegmentSpec::new(n)?;
        for p in Probe::ALL {
            let r = bound_probe(&walk, p, seg, None)?;
            println!(
                "n={n:<3} {:<8} rows={:<4} ratio in [{:.4}, {:.4}]  max|lhs-rhs|={:.3e}  budget={:.3e}",
                p.label(),
                r.rows.len(),
                r.c_min,
                r.c_max,
                r.max_abs_diff(),
                r.budget
            );
        }
    }
    Ok(())
}
