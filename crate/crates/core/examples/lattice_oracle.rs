//! Three routes to `H^{I(5)}_{10}` for the simple walk.

use segment_hitting::continuum::{h_segment_exterior, SegmentSpec};
use segment_hitting::hitting::hit_segment;
use segment_hitting::mc::{hit_segment_mc, McConfig};
use segment_hitting::potential::potential_kernel;
use segment_hitting::truncated::{default_half_width, hit_segment_truncated};
use segment_hitting::walk::{Site, Walk};

fn main() -> segment_hitting::Result<()> {
    let walk = Walk::simple();
    let pts = [Site::new(1, 0), Site::new(1, 1), Site::new(2, 0)];
    let pk = potential_kernel(&walk, &pts)?;
    for z in pts {
        println!("a({z}) = {:.12}", pk.get(z).unwrap());
    }
    let seg = SegmentSpec::new(5)?;
    let x = Site::axis(10);
    let exact = hit_segment(&walk, seg, x)?;
    let boxed = hit_segment_truncated(&walk, seg, x, default_half_width(seg, x))?;
    let cfg = McConfig { samples: 200_000, escape: Some(40), ..McConfig::default() };
    let mc = hit_segment_mc(&walk, seg, x, &cfg)?;
    println!("box deficit {:.3e}", boxed.deficit);
    println!("   s        pk       box        mc   (se)    continuum");
    for s in seg.sites() {
        let site = Site::axis(s);
        let c = h_segment_exterior(seg.n_star(), 10.0, s as f64)?;
        println!(
            "{s:4} {:.6} {:.6} {:.6} ({:.1e}) {:.6}",
            exact.get(site),
            boxed.get(site),
            mc.get(site),
            mc.stderr_at(site).unwrap_or(0.0),
            c
        );
    }
    Ok(())
}
