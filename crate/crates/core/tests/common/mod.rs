#![allow(dead_code)]

use std::f64::consts::PI;
use std::path::PathBuf;

use segment_hitting::walk::Site;

/// Simple-walk potential kernel on the box `|x|, |y| <= r` from the diagonal
/// closed form `a(k, k) = (4/pi) sum_{j<=k} 1/(2j - 1)` and harmonicity; no Fourier
/// quadrature involved. Loses about a factor 4 of accuracy per unit of radius.
pub struct SrwRecursion {
    r: i64,
    octant: Vec<Vec<f64>>,
}

impl SrwRecursion {
    pub fn new(r: i64) -> SrwRecursion {
        let diag = |k: i64| (1..=k).map(|j| 1.0 / (2 * j - 1) as f64).sum::<f64>() * 4.0 / PI;
        // octant[x][y] for 0 <= y <= x
        let mut o: Vec<Vec<f64>> = vec![vec![0.0]];
        if r >= 1 {
            o.push(vec![1.0, diag(1)]);
        }
        for x in 1..r {
            let xu = x as usize;
            let mut next = vec![0.0; xu + 2];
            next[xu + 1] = diag(x + 1);
            // harmonic at (x, x): 4 a(x,x) = 2 a(x+1,x) + 2 a(x,x-1)
            next[xu] = 2.0 * o[xu][xu] - o[xu][xu - 1];
            for y in 0..xu {
                let below = if y == 0 { o[xu][1] } else { o[xu][y - 1] };
                next[y] = 4.0 * o[xu][y] - o[xu - 1][y] - o[xu][y + 1] - below;
            }
            o.push(next);
        }
        SrwRecursion { r, octant: o }
    }

    pub fn a(&self, z: Site) -> f64 {
        let (x, y) = (z.x.abs(), z.y.abs());
        let (x, y) = if x >= y { (x, y) } else { (y, x) };
        assert!(x <= self.r, "{z} outside the recursion box");
        self.octant[x as usize][y as usize]
    }
}

pub fn configs_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let l: Vec<(f64, f64)> = pts.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let (mx, my) = (l.iter().map(|p| p.0).sum::<f64>() / n, l.iter().map(|p| p.1).sum::<f64>() / n);
    let sxy: f64 = l.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = l.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
