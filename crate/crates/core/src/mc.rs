//! Monte Carlo hitting of finite sets.
//!
//! Walk `i` draws from ChaCha8 seeded by `seed` on stream `i`, so every walk's
//! path is fixed by `(seed, i)` alone. Per-walk contributions are summed in
//! fixed blocks of walks and the block sums in index order, so the table does
//! not depend on the chunking or the number of threads.
//!
//! Two ways to end a walk that has not been absorbed:
//! - censoring at `step_cap` (mass goes to the deficit);
//! - continuation: on leaving the box of half-width `escape`, the walk
//!   contributes the exact row `H_A(exit, .)` from the potential-kernel oracle.

use std::collections::BTreeMap;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::continuum::SegmentSpec;
use crate::error::{Error, Result};
use crate::hitting::{FiniteSetSolver, HittingDistribution, Method, Target};
use crate::potential::PotentialKernel;
use crate::walk::{Site, Walk};

const BLOCK: u64 = 4096;

/// Sampling parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct McConfig {
    pub samples: u64,
    pub seed: u64,
    pub step_cap: u64,
    /// walks per parallel task (rounded up to whole blocks); does not affect results
    pub chunk: u64,
    /// half-width of the continuation box; `None` means pure censoring
    pub escape: Option<i64>,
}

impl Default for McConfig {
    fn default() -> Self {
        McConfig { samples: 100_000, seed: 42, step_cap: 100_000_000, chunk: 65_536, escape: None }
    }
}

impl McConfig {
    fn check(&self) -> Result<()> {
        if self.samples == 0 || self.step_cap == 0 {
            return Err(Error::Config("samples and step_cap must be at least 1".into()));
        }
        Ok(())
    }
}

/// 32-bit threshold sampler for the increment law.
struct Sampler {
    cut: Vec<u64>,
    step: Vec<Site>,
}

impl Sampler {
    fn new(walk: &Walk) -> Sampler {
        let mut acc = 0.0;
        let mut cut = Vec::new();
        let mut step = Vec::new();
        for (e, p) in walk.law().steps() {
            acc += p;
            cut.push((acc * 4_294_967_296.0).round() as u64);
            step.push(e);
        }
        *cut.last_mut().unwrap() = 1 << 32;
        Sampler { cut, step }
    }

    #[inline]
    fn draw(&self, u: u64) -> Site {
        let i = self.cut.iter().position(|&c| u < c).unwrap_or(self.cut.len() - 1);
        self.step[i]
    }
}

/// Dense lookup for target membership.
struct Membership {
    lo: Site,
    w: i64,
    h: i64,
    index: Vec<i32>,
}

impl Membership {
    fn new(sites: &[Site]) -> Membership {
        let lo = Site::new(sites.iter().map(|s| s.x).min().unwrap(), sites.iter().map(|s| s.y).min().unwrap());
        let hi = Site::new(sites.iter().map(|s| s.x).max().unwrap(), sites.iter().map(|s| s.y).max().unwrap());
        let (w, h) = (hi.x - lo.x + 1, hi.y - lo.y + 1);
        let mut index = vec![-1; (w * h) as usize];
        for (i, s) in sites.iter().enumerate() {
            index[((s.y - lo.y) * w + s.x - lo.x) as usize] = i as i32;
        }
        Membership { lo, w, h, index }
    }

    #[inline]
    fn get(&self, s: Site) -> Option<usize> {
        let (dx, dy) = (s.x - self.lo.x, s.y - self.lo.y);
        if dx < 0 || dy < 0 || dx >= self.w || dy >= self.h {
            return None;
        }
        let v = self.index[(dy * self.w + dx) as usize];
        (v >= 0).then_some(v as usize)
    }
}

/// Exact continuation rows on the ring just outside the escape box.
struct Continuation {
    half: i64,
    outer: i64,
    rows: Vec<f64>,
    k: usize,
}

impl Continuation {
    fn new(walk: &Walk, sites: &[Site], half: i64) -> Result<Continuation> {
        let j = walk.law().max_jump();
        let outer = half + j;
        let mut ring = Vec::new();
        for y in -outer..=outer {
            for x in -outer..=outer {
                if x.abs().max(y.abs()) > half {
                    ring.push(Site::new(x, y));
                }
            }
        }
        let span = sites.iter().map(|s| s.x.abs().max(s.y.abs())).max().unwrap();
        let pk = PotentialKernel::new(walk, outer + span + j + 1)?;
        let solver = FiniteSetSolver::new(&pk, sites.to_vec())?;
        let m = solver.rows(&pk, &ring)?;
        let k = sites.len();
        let w = (2 * outer + 1) as usize;
        let mut rows = vec![0.0; w * w * k];
        for (r, s) in ring.iter().enumerate() {
            let c = ((s.y + outer) as usize) * w + (s.x + outer) as usize;
            for i in 0..k {
                rows[c * k + i] = m[(r, i)];
            }
        }
        Ok(Continuation { half, outer, rows, k })
    }

    #[inline]
    fn row(&self, s: Site) -> &[f64] {
        let w = (2 * self.outer + 1) as usize;
        let c = ((s.y + self.outer) as usize) * w + (s.x + self.outer) as usize;
        &self.rows[c * self.k..(c + 1) * self.k]
    }
}

#[derive(Clone)]
struct Tally {
    sum: Vec<f64>,
    sq: Vec<f64>,
    censored: u64,
    escaped: u64,
}

impl Tally {
    fn new(k: usize) -> Tally {
        Tally { sum: vec![0.0; k], sq: vec![0.0; k], censored: 0, escaped: 0 }
    }

    fn merge(&mut self, o: &Tally) {
        for (a, b) in self.sum.iter_mut().zip(&o.sum) {
            *a += b;
        }
        for (a, b) in self.sq.iter_mut().zip(&o.sq) {
            *a += b;
        }
        self.censored += o.censored;
        self.escaped += o.escaped;
    }
}

fn run_block(
    block: u64,
    cfg: &McConfig,
    start: Site,
    sampler: &Sampler,
    members: &Membership,
    cont: Option<&Continuation>,
    k: usize,
) -> Tally {
    let mut t = Tally::new(k);
    let first = block * BLOCK;
    let last = (first + BLOCK).min(cfg.samples);
    for walk_id in first..last {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(walk_id);
        let mut pos = start;
        let mut steps = 0u64;
        let mut bits = 0u64;
        let mut have = 0;
        loop {
            if have == 0 {
                bits = rng.next_u64();
                have = 2;
            }
            let u = bits & 0xffff_ffff;
            bits >>= 32;
            have -= 1;
            pos = pos + sampler.draw(u);
            steps += 1;
            if let Some(i) = members.get(pos) {
                t.sum[i] += 1.0;
                t.sq[i] += 1.0;
                break;
            }
            if let Some(c) = cont {
                if pos.x.abs().max(pos.y.abs()) > c.half {
                    for (i, v) in c.row(pos).iter().enumerate() {
                        t.sum[i] += v;
                        t.sq[i] += v * v;
                    }
                    t.escaped += 1;
                    break;
                }
            }
            if steps >= cfg.step_cap {
                t.censored += 1;
                break;
            }
        }
    }
    t
}

/// Empirical hitting distribution of `sites` from `x` (which must be off the set).
pub fn hit_set_mc(walk: &Walk, sites: &[Site], x: Site, cfg: &McConfig, target: Target) -> Result<HittingDistribution> {
    cfg.check()?;
    let members = Membership::new(sites);
    if members.get(x).is_some() {
        return Err(Error::Domain(format!("start {x} is on the target set")));
    }
    let cont = match cfg.escape {
        Some(r) => {
            let span = sites.iter().map(|s| s.x.abs().max(s.y.abs())).max().unwrap();
            if r <= span || r < x.x.abs().max(x.y.abs()) {
                return Err(Error::Config(format!("escape half-width {r} must enclose the set and the start")));
            }
            Some(Continuation::new(walk, sites, r)?)
        }
        None => None,
    };
    let sampler = Sampler::new(walk);
    let k = sites.len();
    let blocks = cfg.samples.div_ceil(BLOCK);
    let per_task = (cfg.chunk.max(1).div_ceil(BLOCK)) as usize;
    let tallies: Vec<Tally> = (0..blocks)
        .collect::<Vec<_>>()
        .par_iter()
        .with_min_len(per_task)
        .map(|&b| run_block(b, cfg, x, &sampler, &members, cont.as_ref(), k))
        .collect();
    let mut total = Tally::new(k);
    for t in &tallies {
        total.merge(t);
    }
    let n = cfg.samples as f64;
    let mut table = BTreeMap::new();
    let mut stderr = BTreeMap::new();
    for (i, &s) in sites.iter().enumerate() {
        let mean = total.sum[i] / n;
        let var = if cont.is_some() {
            // empirical variance of the per-walk contribution
            ((total.sq[i] / n - mean * mean) * n / (n - 1.0).max(1.0)).max(0.0)
        } else {
            mean * (1.0 - mean)
        };
        table.insert(s, mean);
        stderr.insert(s, (var / n).sqrt());
    }
    Ok(HittingDistribution {
        target,
        start: x,
        table,
        deficit: total.censored as f64 / n,
        method: Method::MonteCarlo,
        stderr: Some(stderr),
    })
}

/// Empirical `H^{I(n)}_x` for a start off the segment.
pub fn hit_segment_mc(walk: &Walk, seg: SegmentSpec, x: Site, cfg: &McConfig) -> Result<HittingDistribution> {
    let sites: Vec<Site> = seg.sites().map(Site::axis).collect();
    hit_set_mc(walk, &sites, x, cfg, Target::Segment(seg.n() as u32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hitting::hit_segment;

    #[test]
    fn deterministic_across_chunking() {
        let w = Walk::simple();
        let seg = SegmentSpec::new(2).unwrap();
        let base = McConfig { samples: 20_000, seed: 7, step_cap: 10_000, chunk: 4096, escape: None };
        let a = hit_segment_mc(&w, seg, Site::new(3, 0), &base).unwrap();
        let b = hit_segment_mc(&w, seg, Site::new(3, 0), &McConfig { chunk: 50_000, ..base }).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let c = pool.install(|| hit_segment_mc(&w, seg, Site::new(3, 0), &McConfig { chunk: 1, ..base }).unwrap());
        assert_eq!(a.table, b.table);
        assert_eq!(a.table, c.table);
        assert_eq!(a.deficit, c.deficit);
    }

    #[test]
    fn continuation_is_unbiased() {
        let w = Walk::simple();
        let seg = SegmentSpec::new(2).unwrap();
        let x = Site::new(3, 1);
        let exact = hit_segment(&w, seg, x).unwrap();
        let cfg = McConfig { samples: 40_000, seed: 3, step_cap: 1 << 40, chunk: 8192, escape: Some(12) };
        let mc = hit_segment_mc(&w, seg, x, &cfg).unwrap();
        assert_eq!(mc.deficit, 0.0);
        for s in seg.sites() {
            let se = mc.stderr_at(Site::axis(s)).unwrap();
            assert!((mc.at(s) - exact.at(s)).abs() < 5.0 * se, "{s}");
        }
        assert!((mc.total() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn censoring_goes_to_deficit() {
        let w = Walk::simple();
        let seg = SegmentSpec::new(1).unwrap();
        let cfg = McConfig { samples: 2000, seed: 1, step_cap: 5, chunk: 4096, escape: None };
        let mc = hit_segment_mc(&w, seg, Site::new(10, 0), &cfg).unwrap();
        assert_eq!(mc.total(), 0.0);
        assert_eq!(mc.deficit, 1.0);
    }
}
