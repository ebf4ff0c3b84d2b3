//! Potential kernel `a(z) = sum_n [P(S_n = 0) - P(S_n = z)]`.
//!
//! `a(k, m) = (1/pi) int_0^pi Re[Gamma_0(t) - e^{-ikt} Gamma_{-m}(t)] dt` with the
//! inner transform done exactly by residues (see [`crate::spectral`]). The outer
//! integral uses 16-point Gauss-Legendre panels of width at most `2 / (reach + 1)`,
//! graded geometrically toward `t = 0`.
//!
//! With this convention `sum_e p(e) a(z - e) - a(z) = [z = 0]`, and `x -> a(z - x)`
//! is harmonic for the walk away from `z`.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad::gauss_legendre;
use crate::spectral::{RootSet, Spectral};
use crate::walk::{Site, Walk};

const GRADED_PANELS: usize = 24;
const GRADE: f64 = 0.2;

struct Node {
    t: f64,
    w: f64,
    graded: bool,
    roots: RootSet,
}

/// Evaluator for `a(z)` with `|z.x|, |z.y| <= reach`.
pub struct PotentialKernel {
    walk: Walk,
    reach: i64,
    nodes: Vec<Node>,
}

impl std::fmt::Debug for PotentialKernel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PotentialKernel")
            .field("walk", &self.walk.name())
            .field("reach", &self.reach)
            .field("nodes", &self.nodes.len())
            .finish()
    }
}

impl PotentialKernel {
    pub fn new(walk: &Walk, reach: i64) -> Result<PotentialKernel> {
        let reach = reach.max(4);
        let spectral = Spectral::new(walk);
        let (gx, gw) = gauss_legendre(16);
        let h = (2.0 / (reach as f64 + 1.0)).min(0.25);
        let mut panels: Vec<(f64, f64, bool)> = Vec::new();
        let mut hi = h;
        for _ in 0..GRADED_PANELS {
            panels.push((hi * GRADE, hi, true));
            hi *= GRADE;
        }
        let count = ((PI - h) / h).ceil() as usize;
        let width = (PI - h) / count as f64;
        for j in 0..count {
            panels.push((h + j as f64 * width, h + (j + 1) as f64 * width, false));
        }
        let specs: Vec<(f64, f64, bool)> = panels
            .iter()
            .flat_map(|&(a, b, g)| {
                let (c, r) = (0.5 * (a + b), 0.5 * (b - a));
                gx.iter().zip(&gw).map(move |(x, w)| (c + r * x, r * w, g))
            })
            .collect();
        let nodes = specs
            .into_par_iter()
            .map(|(t, w, graded)| Ok(Node { t, w, graded, roots: spectral.roots(t)? }))
            .collect::<Result<Vec<_>>>()?;
        Ok(PotentialKernel { walk: walk.clone(), reach, nodes })
    }

    pub fn walk(&self) -> &Walk {
        &self.walk
    }

    pub fn reach(&self) -> i64 {
        self.reach
    }

    fn check(&self, z: Site) -> Result<()> {
        if z.x.abs() > self.reach || z.y.abs() > self.reach {
            return Err(Error::Domain(format!("{z} is beyond the kernel reach {}", self.reach)));
        }
        Ok(())
    }

    /// `a(z)` for one point.
    pub fn a(&self, z: Site) -> Result<f64> {
        Ok(self.row(z.y, &[z.x])?[0])
    }

    /// `a(k, m)` for the given `k` (ascending runs are cheapest).
    pub fn row(&self, m: i64, ks: &[i64]) -> Result<Vec<f64>> {
        for &k in ks {
            self.check(Site::new(k, m))?;
        }
        let mut out = vec![0.0; ks.len()];
        for node in &self.nodes {
            let t = node.t;
            if node.graded {
                for (o, &k) in out.iter_mut().zip(ks) {
                    *o += node.w * node.roots.kernel_integrand(k as f64 * t, m).re;
                }
                continue;
            }
            let (g0, gm) = node.roots.gamma_for_kernel(m);
            let step = Complex64::from_polar(1.0, -t);
            let mut prev: Option<(i64, Complex64)> = None;
            for (o, &k) in out.iter_mut().zip(ks) {
                let ph = match prev {
                    Some((pk, p)) if k == pk + 1 && (k & 63) != 0 => p * step,
                    _ => Complex64::from_polar(1.0, -(k as f64) * t),
                };
                prev = Some((k, ph));
                *o += node.w * (g0 - ph * gm).re;
            }
        }
        for o in out.iter_mut() {
            *o /= PI;
        }
        Ok(out)
    }

    /// `a` at arbitrary points, grouped by row and evaluated in parallel.
    pub fn values(&self, points: &[Site]) -> Result<Vec<f64>> {
        let mut rows: BTreeMap<i64, Vec<(i64, usize)>> = BTreeMap::new();
        for (i, p) in points.iter().enumerate() {
            self.check(*p)?;
            rows.entry(p.y).or_default().push((p.x, i));
        }
        let rows: Vec<(i64, Vec<(i64, usize)>)> = rows.into_iter().collect();
        let parts = rows
            .into_par_iter()
            .map(|(m, mut entries)| {
                entries.sort_unstable();
                let mut ks: Vec<i64> = entries.iter().map(|e| e.0).collect();
                ks.dedup();
                let vals = self.row(m, &ks)?;
                let lookup: HashMap<i64, f64> = ks.into_iter().zip(vals).collect();
                Ok(entries.into_iter().map(|(k, i)| (i, lookup[&k])).collect::<Vec<_>>())
            })
            .collect::<Result<Vec<_>>>()?;
        let mut out = vec![0.0; points.len()];
        for part in parts {
            for (i, v) in part {
                out[i] = v;
            }
        }
        for (o, p) in out.iter_mut().zip(points) {
            if *p == Site::ORIGIN {
                *o = 0.0;
            }
        }
        Ok(out)
    }

    /// `|sum_e p(e) a(-e) - 1|`, the defect of the defining relation at the origin.
    pub fn origin_defect(&self) -> Result<f64> {
        let pts: Vec<Site> = self.walk.law().support().iter().map(|&e| -e).collect();
        let vals = self.values(&pts)?;
        let s: f64 = vals.iter().zip(self.walk.law().probs()).map(|(a, p)| a * p).sum();
        Ok((s - 1.0).abs())
    }

    pub fn table(&self, points: &[Site]) -> Result<PotentialKernelTable> {
        let vals = self.values(points)?;
        Ok(PotentialKernelTable {
            law: self.walk.name().to_string(),
            accuracy: self.origin_defect()?.max(1e-14),
            values: points.iter().copied().zip(vals).collect(),
        })
    }
}

/// Stored values of `a` with an accuracy estimate.
#[derive(Debug, Clone, Serialize)]
pub struct PotentialKernelTable {
    pub law: String,
    pub accuracy: f64,
    pub values: BTreeMap<Site, f64>,
}

impl PotentialKernelTable {
    pub fn get(&self, z: Site) -> Option<f64> {
        self.values.get(&z).copied()
    }

    /// `sum_e p(e) a(z - e) - a(z) - [z = 0]` wherever all neighbours are stored.
    pub fn harmonicity_residuals(&self, walk: &Walk) -> Vec<(Site, f64)> {
        self.values
            .iter()
            .filter_map(|(&z, &az)| {
                let mut s = 0.0;
                for (e, p) in walk.law().steps() {
                    s += p * self.get(z - e)?;
                }
                let delta = if z == Site::ORIGIN { 1.0 } else { 0.0 };
                Some((z, s - az - delta))
            })
            .collect()
    }
}

/// `a` for the walk at a single point.
pub fn potential_kernel(walk: &Walk, points: &[Site]) -> Result<PotentialKernelTable> {
    let reach = points.iter().map(|p| p.x.abs().max(p.y.abs())).max().unwrap_or(0) + walk.law().max_jump();
    PotentialKernel::new(walk, reach)?.table(points)
}
