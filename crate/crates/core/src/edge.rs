//! The increasing edge functions `ν` and `μ`.
//!
//! `ν` solves `ν(j) = Σ_{k>=0} H_0(k - j) ν(k)` for every integer `j`, with
//! `ν(y) ~ 2 √y / σ²` and `ν(-y) ~ 1 / √y`. On `j >= 0` this says `ν` is harmonic
//! for the chain of axis visits killed on landing left of 0; on `j < 0` it is an
//! explicit extension. `μ` is `ν` of the reversed walk.
//!
//! The relation is solved directly on `[0, M]`, with the far field `k > M` held at
//! `2 √k / σ²`. `H_0` comes from [`axis_overstep_law`] on `|s| <= 8M`; beyond that
//! it is continued as `c_± / s²` with `c_±` read off the window edge.

use serde::Serialize;

use faer::linalg::solvers::Solve;
use faer::Mat;

use crate::axis::{axis_overstep_law, OverstepLaw};
use crate::continuum::SegmentSpec;
use crate::error::{Error, Result};
use crate::hitting::SegmentOracle;
use crate::quad::{integrate_to_infinity, QuadOpts};
use crate::report::{RatioReport, RatioRow};
use crate::walk::Walk;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Mu,
    Nu,
}

impl EdgeKind {
    pub fn parse(text: &str) -> Result<EdgeKind> {
        match text {
            "mu" => Ok(EdgeKind::Mu),
            "nu" => Ok(EdgeKind::Nu),
            _ => Err(Error::Config(format!("unknown edge function '{text}'"))),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            EdgeKind::Mu => "mu",
            EdgeKind::Nu => "nu",
        }
    }
}

/// Values on `[-M, M]`.
#[derive(Debug, Clone, Serialize)]
pub struct EdgeFunctionTable {
    pub kind: EdgeKind,
    pub m: i64,
    pub values: Vec<f64>,
    /// per-site renewal defect on `[-M, M]`
    pub defects: Vec<f64>,
    /// sup of the defect on `|j| <= M/2`
    pub residual: f64,
    pub sigma2: f64,
    /// factor applied to match `ν(-y) √y -> 1` on `[M/2, M]`
    pub scale: f64,
    pub monotone: bool,
}

impl EdgeFunctionTable {
    pub fn get(&self, j: i64) -> Option<f64> {
        (j.abs() <= self.m).then(|| self.values[(j + self.m) as usize])
    }

    /// `ν(-y) √y`.
    pub fn left_normalized(&self, y: i64) -> Option<f64> {
        Some(self.get(-y)? * (y as f64).sqrt())
    }

    /// `ν(y) σ² / (2 √y)`.
    pub fn right_normalized(&self, y: i64) -> Option<f64> {
        Some(self.get(y)? * self.sigma2 / (2.0 * (y as f64).sqrt()))
    }
}

/// `H_0` continued past the window by its inverse-square tail.
struct Overstep {
    law: OverstepLaw,
    c_plus: f64,
    c_minus: f64,
}

impl Overstep {
    fn new(law: OverstepLaw) -> Overstep {
        let w = law.window;
        let fit = |sign: i64| {
            let pts: Vec<f64> = (w / 2..=w).map(|s| (s * s) as f64 * law.get(sign * s)).collect();
            pts.iter().sum::<f64>() / pts.len() as f64
        };
        let (c_plus, c_minus) = (fit(1), fit(-1));
        Overstep { law, c_plus, c_minus }
    }

    fn get(&self, s: i64) -> f64 {
        if s.abs() <= self.law.window {
            self.law.get(s)
        } else {
            let c = if s > 0 { self.c_plus } else { self.c_minus };
            c / (s * s) as f64
        }
    }
}

/// `Σ_{k > M} H_0(k - j) f(k)` with `f(k) = 2 √k / σ²`.
fn far_field(h: &Overstep, m: i64, j: i64, sigma2: f64) -> Result<f64> {
    let f = |k: f64| 2.0 * k.sqrt() / sigma2;
    let cut = j + h.law.window;
    let mut acc = 0.0;
    for k in (m + 1)..=cut.max(m) {
        acc += h.get(k - j) * f(k as f64);
    }
    // k > cut: the inverse-square tail, summed as an integral from the half-integer
    let start = cut.max(m) as f64 + 0.5;
    let tail = integrate_to_infinity(|k| h.c_plus / (k - j as f64).powi(2) * f(k), start, QuadOpts::rel(1e-12))?;
    Ok(acc + tail.value)
}

/// `ν` for the walk on `[-M, M]`; fails if the renewal defect exceeds `tol`.
pub fn compute_nu(walk: &Walk, m: i64, tol: f64) -> Result<EdgeFunctionTable> {
    edge_table(walk, m, tol, EdgeKind::Nu)
}

/// `μ`: `ν` of the reversed walk.
pub fn compute_mu(walk: &Walk, m: i64, tol: f64) -> Result<EdgeFunctionTable> {
    edge_table(&walk.reversed(), m, tol, EdgeKind::Mu)
}

fn edge_table(walk: &Walk, m: i64, tol: f64, kind: EdgeKind) -> Result<EdgeFunctionTable> {
    if m < 8 {
        return Err(Error::WindowTooSmall(format!("M = {m} < 8")));
    }
    let sigma2 = walk.sigma2();
    let h = Overstep::new(axis_overstep_law(walk, 8 * m)?);
    let size = (m + 1) as usize;
    let rhs_far: Vec<f64> = (-m..=m).map(|j| far_field(&h, m, j, sigma2)).collect::<Result<_>>()?;
    // (I - H) ν = far field on [0, M]
    let a = Mat::<f64>::from_fn(size, size, |j, k| {
        let d = if j == k { 1.0 } else { 0.0 };
        d - h.get(k as i64 - j as i64)
    });
    let b = Mat::<f64>::from_fn(size, 1, |j, _| rhs_far[j + m as usize]);
    let sol = a.partial_piv_lu().solve(&b);
    let right: Vec<f64> = (0..size).map(|k| sol[(k, 0)]).collect();
    let apply = |j: i64| -> f64 {
        let inner: f64 = right.iter().enumerate().map(|(k, v)| h.get(k as i64 - j) * v).sum();
        inner + rhs_far[(j + m) as usize]
    };
    let mut values: Vec<f64> = (-m..0).map(apply).collect();
    values.extend_from_slice(&right);
    // pin the scale by ν(-y) √y -> 1 on [M/2, M]
    let fit: Vec<f64> = (m / 2..=m).map(|y| values[(m - y) as usize] * (y as f64).sqrt()).collect();
    let scale = fit.iter().sum::<f64>() / fit.iter().map(|a| a * a).sum::<f64>();
    for v in values.iter_mut() {
        *v *= scale;
    }
    let defects: Vec<f64> = (-m..=m).map(|j| ((apply(j) * scale) - values[(j + m) as usize]).abs()).collect();
    let residual = (-m / 2..=m / 2).map(|j| defects[(j + m) as usize]).fold(0.0, f64::max);
    let monotone = values.windows(2).all(|w| w[1] > w[0]) && values[0] > 0.0;
    if !(residual <= tol) {
        return Err(Error::NotConverged(format!("renewal defect {residual:e} above {tol:e}")));
    }
    Ok(EdgeFunctionTable { kind, m, values, defects, residual, sigma2, scale, monotone })
}

/// `π hm_{I(n)}(s)` against `μ(-n+s) ν(-n-s)` at every site.
pub fn corollary1_probe(walk: &Walk, seg: SegmentSpec, mu: &EdgeFunctionTable, nu: &EdgeFunctionTable) -> Result<RatioReport> {
    let n = seg.n();
    let oracle = SegmentOracle::new(walk, seg, 0)?;
    let mut rows = Vec::new();
    for (s, &hm) in seg.sites().zip(oracle.hm()) {
        let (a, b) = (mu.get(-n + s), nu.get(-n - s));
        let (a, b) = a.zip(b).map(|p| p).ok_or_else(|| Error::WindowTooSmall(format!("edge tables do not reach {}", 2 * n)))?;
        rows.push(RatioRow::new(n, f64::INFINITY, 0.0, s as f64, std::f64::consts::PI * hm, a * b, 1.0));
    }
    Ok(RatioReport::new("cor1", rows))
}
