//! First hits of the negative half-line and of the whole axis.

use segment_hitting::axis::{axis_overstep_law, hit_axis};
use segment_hitting::continuum::h_minus;
use segment_hitting::series::{hit_halfline, Sign};
use segment_hitting::walk::{Site, Walk};

fn main() -> segment_hitting::Result<()> {
    let walk = Walk::simple();
    let h = hit_halfline(&walk, Sign::Minus, Site::axis(8), 256)?;
    println!("mass on [-256, -1]: {:.8}  (two-cut gap {:.2e})", h.total(), h.trunc_err);
    for s in [-1, -4, -8, -32, -128] {
        println!("s={s:5}  H={:.6e}  h={:.6e}", h.get(s), h_minus(8.0, s as f64)?);
    }
    let law = axis_overstep_law(&walk, 400)?;
    let pi = std::f64::consts::PI;
    for s in [10, 100, 400] {
        println!("s={s:4}  s^2 H_0(s) pi / sigma^2 = {:.5}", (s * s) as f64 * law.get(s) * pi / walk.sigma2());
    }
    let from_above = hit_axis(&walk, Site::new(0, 5), 200)?;
    println!("from 5i: H(0) = {:.6}, H(5) = {:.6}, mass {:.8}", from_above.at(0), from_above.at(5), from_above.total());
    Ok(())
}
