//! First visits to the real axis.
//!
//! From `(k, m)` the first axis visit has Fourier series `e^{ikt} Gamma_m / Gamma_0`,
//! and from an axis site the displacement of the next visit has series
//! `1 - 1 / Gamma_0`. Both are sampled on an FFT grid. Each has a `|t|` kink at
//! the origin, which would alias as `O(N^-2)`; it is removed by subtracting
//! `kappa |2 sin(t/2)|`, whose coefficients `4 / (pi (1 - 4 j^2))` are exact.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hitting::{HittingDistribution, Method, Target};
use crate::spectral::{RootSet, Spectral};
use crate::walk::{Site, Walk};

fn abs_sine_coef(j: i64) -> f64 {
    4.0 / (PI * (1.0 - 4.0 * (j * j) as f64))
}

/// Grid size for a window half-width.
pub fn fft_size(window: i64) -> usize {
    ((16 * window.max(1)) as usize).next_power_of_two().max(1 << 14)
}

/// Fourier coefficients `c_j = (1/2pi) int e^{-ijt} f(t) dt` for `|j| < n/2`,
/// where `f` is continuous with `f(0)` given and a `|t|` kink at `0`.
fn coefficients<F>(spectral: &Spectral, n: usize, f0: Complex64, f: F) -> Result<(Vec<f64>, f64)>
where
    F: Fn(&RootSet) -> Complex64 + Sync,
{
    let eval = |t: f64| -> Result<Complex64> { Ok(f(&spectral.roots(t)?)) };
    // kink: kappa = lim (f(0) - even part of f(t)) / |t|, with one Richardson step
    let slope = |d: f64| -> Result<f64> { Ok((f0.re - 0.5 * (eval(d)? + eval(-d)?).re) / d) };
    let d = 1e-4;
    let kappa = 2.0 * slope(d)? - slope(2.0 * d)?;
    let mut buf: Vec<Complex64> = (0..n)
        .into_par_iter()
        .map(|j| {
            if j == 0 {
                return Ok(f0);
            }
            let t = if j <= n / 2 { 2.0 * PI * j as f64 / n as f64 } else { -2.0 * PI * (n - j) as f64 / n as f64 };
            Ok(eval(t)? + kappa * (2.0 * (0.5 * t).sin()).abs())
        })
        .collect::<Result<Vec<_>>>()?;
    FftPlanner::<f64>::new().plan_fft_forward(n).process(&mut buf);
    let half = (n / 2) as i64;
    let out = (-half + 1..half)
        .map(|j| {
            let idx = j.rem_euclid(n as i64) as usize;
            buf[idx].re / n as f64 - kappa * abs_sine_coef(j)
        })
        .collect();
    Ok((out, kappa))
}

/// Law of the displacement between consecutive axis visits, `H_0(s)` for `|s| <= window`.
#[derive(Debug, Clone, Serialize)]
pub struct OverstepLaw {
    pub window: i64,
    pub values: Vec<f64>,
    pub deficit: f64,
    /// coefficient of `|t|` in `1 / Gamma_0`; equals `sigma^2`
    pub kappa: f64,
}

impl OverstepLaw {
    pub fn get(&self, s: i64) -> f64 {
        if s.abs() > self.window {
            return 0.0;
        }
        self.values[(s + self.window) as usize]
    }
}

/// `H_0` on `[-window, window]`.
pub fn axis_overstep_law(walk: &Walk, window: i64) -> Result<OverstepLaw> {
    if window < 1 {
        return Err(Error::Domain("window must be positive".into()));
    }
    let sp = Spectral::new(walk);
    let n = fft_size(window);
    let (c, kappa) = coefficients(&sp, n, Complex64::new(1.0, 0.0), |r| 1.0 - r.inv_gamma0())?;
    let half = (n / 2) as i64;
    let values: Vec<f64> = (-window..=window).map(|s| c[(s + half - 1) as usize].max(0.0)).collect();
    let deficit = 1.0 - values.iter().sum::<f64>();
    Ok(OverstepLaw { window, values, deficit, kappa })
}

/// First axis visit from `z` restricted to `[-window, window]`; starts on the axis
/// use the next visit after time 0.
pub fn hit_axis(walk: &Walk, z: Site, window: i64) -> Result<HittingDistribution> {
    if window < 1 {
        return Err(Error::Domain("window must be positive".into()));
    }
    let sp = Spectral::new(walk);
    let n = fft_size(window + z.x.abs());
    let (c, _) = if z.y == 0 {
        coefficients(&sp, n, Complex64::new(1.0, 0.0), |r| 1.0 - r.inv_gamma0())?
    } else {
        coefficients(&sp, n, Complex64::new(1.0, 0.0), |r| r.ratio(z.y))?
    };
    let half = (n / 2) as i64;
    let table: BTreeMap<Site, f64> =
        (-window..=window).map(|s| (Site::axis(s), c[(s - z.x + half - 1) as usize].max(0.0))).collect();
    let total: f64 = table.values().sum();
    Ok(HittingDistribution {
        target: Target::Axis,
        start: z,
        table,
        deficit: 1.0 - total,
        method: Method::Fourier,
        stderr: None,
    })
}
