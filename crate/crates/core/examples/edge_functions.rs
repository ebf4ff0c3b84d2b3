//! Edge functions of the simple walk and the harmonic-measure comparison.

use segment_hitting::continuum::SegmentSpec;
use segment_hitting::edge::{compute_mu, compute_nu, corollary1_probe};
use segment_hitting::walk::Walk;

fn main() -> segment_hitting::Result<()> {
    let walk = Walk::simple();
    let m = 2000;
    let nu = compute_nu(&walk, m, 1e-6)?;
    let mu = compute_mu(&walk, m, 1e-6)?;
    println!("residual {:.3e}  scale {:.6}  monotone {}", nu.residual, nu.scale, nu.monotone);
    for y in [1, 10, 50, 200, 1000] {
        println!(
            "y={y:<5} nu(-y)sqrt(y)={:.6}  nu(y)s2/(2sqrt(y))={:.6}",
            nu.left_normalized(y).unwrap(),
            nu.right_normalized(y).unwrap()
        );
    }
    for n in [8, 16] {
        let r = corollary1_probe(&walk, SegmentSpec::new(n)?, &mu, &nu)?;
        let ratios: Vec<String> = r.rows.iter().map(|row| format!("{:.3}", row.ratio)).collect();
        println!("n={n}: mean |ratio-1| = {:.4}  [{}]", r.mean_dev(n as i64), ratios.join(" "));
    }
    Ok(())
}
