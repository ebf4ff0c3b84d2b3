//! Brownian hitting densities of the slit and their consistency.

use num_complex::Complex64;
use segment_hitting::continuum::{
    h_segment_exterior, h_segment_interior, lemma_a1_check, slit_plane_kernel, InteriorNumerator, Side, SlitPoint,
};

fn main() -> segment_hitting::Result<()> {
    // from a real start both sides of the slit are hit with equal density
    for x in [1.1, 2.0, -5.0] {
        for s in [-0.9, 0.0, 0.5] {
            let up = slit_plane_kernel(SlitPoint::boundary(s, Side::Above)?, Complex64::new(x, 0.0))?;
            let h = h_segment_exterior(1.0, x, s)?;
            println!("x={x:5} s={s:5}  2*slit={:.12}  exterior={:.12}", 2.0 * up, h);
        }
    }
    let z = Complex64::new(0.3, 0.8);
    let total: f64 = [Side::Above, Side::Below]
        .iter()
        .map(|&side| {
            let k = 2000;
            (0..k)
                .map(|i| {
                    // midpoint rule in s = cos(t), which removes the endpoint singularity
                    let t = std::f64::consts::PI * (i as f64 + 0.5) / k as f64;
                    let s = t.cos();
                    slit_plane_kernel(SlitPoint::boundary(s, side).unwrap(), z).unwrap() * t.sin() * std::f64::consts::PI / k as f64
                })
                .sum::<f64>()
        })
        .sum();
    println!("mass of the kernel from {z}: {total:.10}");
    for (x, s) in [(0.2, -0.4), (-0.7, 0.6)] {
        let (lhs, rhs) = lemma_a1_check(x, s)?;
        let int = h_segment_interior(1.0, x, s, InteriorNumerator::HalfInteger)?;
        println!("boundary limit at ({x}, {s}): {lhs:.10} vs {rhs:.10}; interior density {int:.6}");
    }
    Ok(())
}
