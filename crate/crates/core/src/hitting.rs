//! Exact hitting distributions of finite sets through the potential kernel.
//!
//! For a finite set `A` and `y in A` the bounded function `x -> H_A(x, y)` is
//! `hm_A(y) + sum_z c_z(y) a(z - x)` with `sum_z c_z(y) = 0`; matching the
//! boundary values `[x = y]` on `A` gives a bordered linear system. Starts on
//! `A` itself use one step of the walk first ("after time 0").

use std::collections::{BTreeMap, HashMap};

use faer::linalg::solvers::Solve;
use faer::Mat;
use serde::Serialize;

use crate::continuum::SegmentSpec;
use crate::error::{Error, Result};
use crate::potential::PotentialKernel;
use crate::walk::{Site, Walk};

/// Which set a distribution refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Target {
    Segment(u32),
    Axis,
    HalfLinePlus,
    HalfLineMinus,
    Set,
}

impl Target {
    pub fn label(&self) -> String {
        match self {
            Target::Segment(n) => format!("segment({n})"),
            Target::Axis => "axis".into(),
            Target::HalfLinePlus => "halfline+".into(),
            Target::HalfLineMinus => "halfline-".into(),
            Target::Set => "set".into(),
        }
    }
}

/// How a distribution was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    PotentialKernel,
    TruncatedSolve,
    MonteCarlo,
    Fourier,
    Series,
}

impl Method {
    pub fn label(&self) -> &'static str {
        match self {
            Method::PotentialKernel => "pk",
            Method::TruncatedSolve => "solve",
            Method::MonteCarlo => "mc",
            Method::Fourier => "fourier",
            Method::Series => "series",
        }
    }
}

/// A (sub-)probability table over target sites.
#[derive(Debug, Clone, Serialize)]
pub struct HittingDistribution {
    pub target: Target,
    pub start: Site,
    pub table: BTreeMap<Site, f64>,
    pub deficit: f64,
    pub method: Method,
    pub stderr: Option<BTreeMap<Site, f64>>,
}

impl HittingDistribution {
    pub fn get(&self, s: Site) -> f64 {
        self.table.get(&s).copied().unwrap_or(0.0)
    }

    /// Value at the axis site `s`.
    pub fn at(&self, s: i64) -> f64 {
        self.get(Site::axis(s))
    }

    pub fn total(&self) -> f64 {
        self.table.values().sum()
    }

    pub fn stderr_at(&self, s: Site) -> Option<f64> {
        self.stderr.as_ref().and_then(|m| m.get(&s).copied())
    }
}

/// Bordered boundary-representation solve for one finite set.
#[derive(Debug, Clone)]
pub struct FiniteSetSolver {
    sites: Vec<Site>,
    index: HashMap<Site, usize>,
    /// `coef[(z, y)] = c_z(y)`
    coef: Mat<f64>,
    hm: Vec<f64>,
    residual: f64,
}

fn abs_max(m: &Mat<f64>) -> f64 {
    let mut v: f64 = 0.0;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            v = v.max(m[(i, j)].abs());
        }
    }
    v
}

impl FiniteSetSolver {
    pub fn new(pk: &PotentialKernel, sites: Vec<Site>) -> Result<FiniteSetSolver> {
        let n = sites.len();
        if n == 0 {
            return Err(Error::Domain("target set is empty".into()));
        }
        let index: HashMap<Site, usize> = sites.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        if index.len() != n {
            return Err(Error::Domain("target set has repeated sites".into()));
        }
        let diffs: Vec<Site> = sites.iter().flat_map(|&w| sites.iter().map(move |&z| z - w)).collect();
        let vals = pk.values(&diffs)?;
        let b = Mat::<f64>::from_fn(n + 1, n + 1, |w, z| match (w < n, z < n) {
            (true, true) => vals[w * n + z],
            (false, false) => 0.0,
            _ => 1.0,
        });
        let rhs = Mat::<f64>::from_fn(n + 1, n, |i, j| if i == j { 1.0 } else { 0.0 });
        let lu = b.partial_piv_lu();
        let x = lu.solve(&rhs);
        let resid = &b * &x - &rhs;
        let residual = abs_max(&resid);
        if !residual.is_finite() || residual > 1e-8 {
            let cond = abs_max(&b) * abs_max(&x) * (n + 1) as f64;
            return Err(Error::SingularSystem(cond));
        }
        let coef = Mat::<f64>::from_fn(n, n, |z, y| x[(z, y)]);
        let hm = (0..n).map(|y| x[(n, y)]).collect();
        Ok(FiniteSetSolver { sites, index, coef, hm, residual })
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn contains(&self, s: Site) -> bool {
        self.index.contains_key(&s)
    }

    /// Harmonic measure from infinity.
    pub fn hm(&self) -> &[f64] {
        &self.hm
    }

    /// Max-norm residual of the bordered solve.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// Rows `H_A(x, .)` for every start (sites ordered as [`FiniteSetSolver::sites`]).
    pub fn rows(&self, pk: &PotentialKernel, starts: &[Site]) -> Result<Mat<f64>> {
        self.rows_for(pk, starts, None)
    }

    /// Like [`FiniteSetSolver::rows`] but only for the target columns listed.
    pub fn rows_for(&self, pk: &PotentialKernel, starts: &[Site], cols: Option<&[usize]>) -> Result<Mat<f64>> {
        let n = self.sites.len();
        let cols: Vec<usize> = cols.map(|c| c.to_vec()).unwrap_or_else(|| (0..n).collect());
        // off-set evaluation points, including one-step successors of on-set starts
        let mut eval: Vec<Site> = Vec::new();
        let mut eval_index: HashMap<Site, usize> = HashMap::new();
        let mut push = |s: Site, eval: &mut Vec<Site>| {
            if !self.index.contains_key(&s) && !eval_index.contains_key(&s) {
                eval_index.insert(s, eval.len());
                eval.push(s);
            }
        };
        for &x in starts {
            if self.contains(x) {
                for e in pk.walk().law().support() {
                    push(x + *e, &mut eval);
                }
            } else {
                push(x, &mut eval);
            }
        }
        let pts: Vec<Site> = eval.iter().flat_map(|&x| self.sites.iter().map(move |&z| z - x)).collect();
        let vals = pk.values(&pts)?;
        let g = Mat::<f64>::from_fn(eval.len(), n, |i, z| vals[i * n + z]);
        let c = Mat::<f64>::from_fn(n, cols.len(), |z, j| self.coef[(z, cols[j])]);
        let mut h = &g * &c;
        for i in 0..eval.len() {
            for (j, &y) in cols.iter().enumerate() {
                h[(i, j)] += self.hm[y];
            }
        }
        let col_of: HashMap<usize, usize> = cols.iter().enumerate().map(|(j, &y)| (y, j)).collect();
        let mut out = Mat::<f64>::zeros(starts.len(), cols.len());
        for (r, &x) in starts.iter().enumerate() {
            if self.contains(x) {
                for (e, p) in pk.walk().law().steps() {
                    let y = x + e;
                    if let Some(&iy) = self.index.get(&y) {
                        if let Some(&j) = col_of.get(&iy) {
                            out[(r, j)] += p;
                        }
                    } else {
                        let i = eval_index[&y];
                        for j in 0..cols.len() {
                            out[(r, j)] += p * h[(i, j)];
                        }
                    }
                }
            } else {
                let i = eval_index[&x];
                for j in 0..cols.len() {
                    out[(r, j)] = h[(i, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn distribution(&self, pk: &PotentialKernel, x: Site, target: Target) -> Result<HittingDistribution> {
        let row = self.rows(pk, &[x])?;
        let table: BTreeMap<Site, f64> = self.sites.iter().enumerate().map(|(j, &s)| (s, row[(0, j)])).collect();
        let total: f64 = table.values().sum();
        Ok(HittingDistribution {
            target,
            start: x,
            table,
            deficit: (1.0 - total).abs(),
            method: Method::PotentialKernel,
            stderr: None,
        })
    }
}

/// Kernel reach needed for a set and some starts.
pub fn reach_for(walk: &Walk, sites: &[Site], starts: &[Site]) -> i64 {
    let j = walk.law().max_jump();
    let mut r = 0;
    for &z in sites {
        for &w in sites {
            r = r.max((z.x - w.x).abs()).max((z.y - w.y).abs());
        }
        for &x in starts {
            r = r.max((z.x - x.x).abs() + j).max((z.y - x.y).abs() + j);
        }
    }
    r + 1
}

/// `H_A(x, .)` for a finite set `A`; also returns `hm_A`.
pub fn hit_finite_set(walk: &Walk, sites: &[Site], x: Site) -> Result<(HittingDistribution, Vec<f64>)> {
    let pk = PotentialKernel::new(walk, reach_for(walk, sites, &[x]))?;
    let solver = FiniteSetSolver::new(&pk, sites.to_vec())?;
    let d = solver.distribution(&pk, x, Target::Set)?;
    Ok((d, solver.hm.clone()))
}

/// Reusable exact oracle for one segment.
#[derive(Debug)]
pub struct SegmentOracle {
    seg: SegmentSpec,
    pk: PotentialKernel,
    solver: FiniteSetSolver,
}

impl SegmentOracle {
    /// Oracle valid for starts `z` with `|z.x|, |z.y| <= radius`.
    pub fn new(walk: &Walk, seg: SegmentSpec, radius: i64) -> Result<SegmentOracle> {
        let sites: Vec<Site> = seg.sites().map(Site::axis).collect();
        let reach = (radius + seg.n()).max(2 * seg.n()) + walk.law().max_jump() + 1;
        let pk = PotentialKernel::new(walk, reach)?;
        let solver = FiniteSetSolver::new(&pk, sites)?;
        Ok(SegmentOracle { seg, pk, solver })
    }

    pub fn segment(&self) -> SegmentSpec {
        self.seg
    }

    pub fn kernel(&self) -> &PotentialKernel {
        &self.pk
    }

    pub fn solver(&self) -> &FiniteSetSolver {
        &self.solver
    }

    pub fn hit(&self, x: Site) -> Result<HittingDistribution> {
        self.solver.distribution(&self.pk, x, Target::Segment(self.seg.n() as u32))
    }

    /// Rows for many starts at once; column `j` is site `-n + 1 + j`.
    pub fn hit_many(&self, starts: &[Site]) -> Result<Mat<f64>> {
        self.solver.rows(&self.pk, starts)
    }

    /// `hm_{I(n)}(s)` for `s = -n+1, ..., n-1`.
    pub fn hm(&self) -> &[f64] {
        self.solver.hm()
    }
}

/// `H^{I(n)}_x` by the potential-kernel method.
pub fn hit_segment(walk: &Walk, seg: SegmentSpec, x: Site) -> Result<HittingDistribution> {
    let radius = x.x.abs().max(x.y.abs());
    SegmentOracle::new(walk, seg, radius)?.hit(x)
}
