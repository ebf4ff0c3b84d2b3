//! Half-line hitting and the jump-over operators.
//!
//! `H^-_z(s)` is the first visit after time 0 to `{-1, -2, ...}`, `H^+_z(s)` the
//! first visit to `{1, 2, ...}`. Reflection `x -> -x` swaps them:
//! `H^+_z(s)[p] = H^-_{-z}(-s)[mirrored p]`.
//!
//! For the segment `I(n)` put `L = (-inf, n-1]` and `R = [-n+1, inf)` on the
//! axis. A walk from `x >= n` alternates between first visits to `L` and to `R`
//! until it lands in `I(n) = L ∩ R`, so
//! `H^{I(n)} = (1 + Λ)(Q_I + K_I)` with `Λ = Σ_k Q^k`.
//! The decomposition only uses `I(n) ⊂ L, R`; replacing `L` and `R` by the
//! truncations `[n-D, n-1]` and `[-n+1, D-n]` keeps it exact while making every
//! operator a finite matrix. The truncated `Q` approximates the full one away
//! from the cut; `trunc_err` estimates the gap from a second build at `D/2`.

use std::collections::BTreeMap;

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::continuum::SegmentSpec;
use crate::error::{Error, Result};
use crate::hitting::{FiniteSetSolver, HittingDistribution, Method, Target};
use crate::potential::PotentialKernel;
use crate::walk::{Site, Walk};

/// Largest half-line truncation; dense solves stay at most `MAX_D` square.
pub const MAX_D: i64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn parse(text: &str) -> Result<Sign> {
        match text {
            "+" | "plus" => Ok(Sign::Plus),
            "-" | "minus" => Ok(Sign::Minus),
            _ => Err(Error::Config(format!("unknown half-line sign '{text}'"))),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        }
    }
}

/// `H^±_z` on `1 <= |s| <= d`; `tail_bound` is the mass beyond `d`.
#[derive(Debug, Clone, Serialize)]
pub struct HalfLineDistribution {
    pub sign: Sign,
    pub start: Site,
    pub table: BTreeMap<i64, f64>,
    pub tail_bound: f64,
    pub d: i64,
    /// largest change of an entry between the two cuts; bounds the error of the coarser one
    pub trunc_err: f64,
}

impl HalfLineDistribution {
    pub fn get(&self, s: i64) -> f64 {
        self.table.get(&s).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.table.values().sum()
    }

    /// `tail_bound * sqrt(d)`; roughly constant since tails decay like `|s|^{-3/2}`.
    pub fn tail_constant(&self) -> f64 {
        self.tail_bound * (self.d as f64).sqrt()
    }
}

/// Exact hitting of `{-d, ..., -1}`; column `j` is the site `-(j + 1)`.
struct LeftSolver {
    pk: PotentialKernel,
    solver: FiniteSetSolver,
}

impl LeftSolver {
    fn new(walk: &Walk, d: i64, max_start: i64) -> Result<LeftSolver> {
        let sites: Vec<Site> = (1..=d).map(|j| Site::axis(-j)).collect();
        let pk = PotentialKernel::new(walk, d + max_start + walk.law().max_jump() + 1)?;
        let solver = FiniteSetSolver::new(&pk, sites)?;
        Ok(LeftSolver { pk, solver })
    }

    fn rows(&self, starts: &[Site], cols: usize) -> Result<Mat<f64>> {
        let c: Vec<usize> = (0..cols).collect();
        self.solver.rows_for(&self.pk, starts, Some(&c))
    }
}

/// `H^±_start` on `1 <= |s| <= d`.
///
/// Cutting the half-line at `c` lets mass that belongs beyond `c` land on the
/// kept sites, an excess of relative size `O(1/c)`. Solves at `c = 2d` and `4d`
/// are combined by one Richardson step.
pub fn hit_halfline(walk: &Walk, sign: Sign, start: Site, d: i64) -> Result<HalfLineDistribution> {
    Ok(hit_halfline_many(walk, sign, &[start], d)?.remove(0))
}

/// Rows on `[-d, -1]` for the half-line `{-c, ..., -1}`.
fn cut_rows(law: &Walk, zs: &[Site], d: i64, c: i64) -> Result<Mat<f64>> {
    let reach = zs.iter().map(|z| z.x.abs().max(z.y.abs())).max().unwrap_or(0);
    LeftSolver::new(law, c, reach)?.rows(zs, d as usize)
}

/// [`hit_halfline`] for several starts sharing the solves.
pub fn hit_halfline_many(walk: &Walk, sign: Sign, starts: &[Site], d: i64) -> Result<Vec<HalfLineDistribution>> {
    if d < 1 || 4 * d > MAX_D {
        return Err(Error::BudgetInfeasible(format!("truncation {d} outside [1, {}]", MAX_D / 4)));
    }
    let law = match sign {
        Sign::Minus => walk.clone(),
        Sign::Plus => walk.mirrored(),
    };
    let flip = |z: Site| if sign == Sign::Plus { Site::new(-z.x, z.y) } else { z };
    let zs: Vec<Site> = starts.iter().map(|&z| flip(z)).collect();
    for (z, start) in zs.iter().zip(starts) {
        if z.y == 0 && z.x < -2 * d {
            return Err(Error::Domain(format!("start {start} lies beyond the truncated half-line")));
        }
    }
    let coarse = cut_rows(&law, &zs, d, 2 * d)?;
    let fine = cut_rows(&law, &zs, d, 4 * d)?;
    let orient = if sign == Sign::Minus { -1 } else { 1 };
    Ok(starts
        .iter()
        .enumerate()
        .map(|(i, &start)| {
            let mut trunc_err: f64 = 0.0;
            let table: BTreeMap<i64, f64> = (0..d as usize)
                .map(|j| {
                    let (a, b) = (coarse[(i, j)], fine[(i, j)]);
                    trunc_err = trunc_err.max((a - b).abs());
                    (orient * (j as i64 + 1), 2.0 * b - a)
                })
                .collect();
            let tail_bound = 1.0 - table.values().sum::<f64>();
            HalfLineDistribution { sign, start, table, tail_bound, d, trunc_err }
        })
        .collect())
}

/// Like [`hit_halfline`], doubling `d` until the tail is within `budget`.
pub fn hit_halfline_within(walk: &Walk, sign: Sign, start: Site, budget: f64) -> Result<HalfLineDistribution> {
    let mut d = (4 * start.x.abs().max(start.y.abs())).max(64);
    loop {
        if 4 * d > MAX_D {
            return Err(Error::BudgetInfeasible(format!("tail budget {budget:e} needs a cut beyond {}", MAX_D / 4)));
        }
        let h = hit_halfline(walk, sign, start, d)?;
        if h.tail_bound <= budget {
            return Ok(h);
        }
        d *= 2;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OperatorKind {
    Q,
    Lambda,
    KI,
    QI,
}

impl OperatorKind {
    pub fn label(self) -> &'static str {
        match self {
            OperatorKind::Q => "Q",
            OperatorKind::Lambda => "Lambda",
            OperatorKind::KI => "K_I",
            OperatorKind::QI => "Q_I",
        }
    }
}

/// Dense operator; entry `(i, j)` is `(x, y) = (row_lo + i, col_lo + j)`.
#[derive(Debug, Clone)]
pub struct OperatorTable {
    pub kind: OperatorKind,
    pub n: i64,
    pub row_lo: i64,
    pub col_lo: i64,
    pub entries: Mat<f64>,
    pub trunc_err: f64,
}

impl OperatorTable {
    pub fn rows(&self) -> std::ops::Range<i64> {
        self.row_lo..self.row_lo + self.entries.nrows() as i64
    }

    pub fn cols(&self) -> std::ops::Range<i64> {
        self.col_lo..self.col_lo + self.entries.ncols() as i64
    }

    /// Zero outside the stored domain.
    pub fn get(&self, x: i64, y: i64) -> f64 {
        if self.rows().contains(&x) && self.cols().contains(&y) {
            self.entries[((x - self.row_lo) as usize, (y - self.col_lo) as usize)]
        } else {
            0.0
        }
    }

    pub fn row_sum(&self, x: i64) -> f64 {
        self.cols().map(|y| self.get(x, y)).sum()
    }

    pub fn max_entry(&self) -> f64 {
        let mut m: f64 = 0.0;
        for j in 0..self.entries.ncols() {
            for i in 0..self.entries.nrows() {
                m = m.max(self.entries[(i, j)]);
            }
        }
        m
    }

    /// Restriction to `rows x cols`.
    fn block(&self, kind: OperatorKind, rows: std::ops::Range<i64>, cols: std::ops::Range<i64>) -> OperatorTable {
        let entries = Mat::from_fn(rows.clone().count(), cols.clone().count(), |i, j| {
            self.get(rows.start + i as i64, cols.start + j as i64)
        });
        OperatorTable { kind, n: self.n, row_lo: rows.start, col_lo: cols.start, entries, trunc_err: self.trunc_err }
    }
}

/// `Q`, `K_I` and `Q_I` for one segment and cut.
#[derive(Debug, Clone)]
pub struct SeriesTables {
    pub n: i64,
    pub d: i64,
    /// rows `[n, d - n]`, columns `(-n, d - n]`
    pub q: OperatorTable,
    /// rows `[n, d - n]`, columns `(-n, n)`
    pub k_i: OperatorTable,
}

impl SeriesTables {
    pub fn q_i(&self) -> OperatorTable {
        self.q.block(OperatorKind::QI, self.q.rows(), -self.n + 1..self.n)
    }

    /// `Q` restricted to columns `y >= n`: the square block driving `Λ`.
    pub fn q_square(&self) -> OperatorTable {
        self.q.block(OperatorKind::Q, self.q.rows(), self.q.rows())
    }

    /// `p_n = sup_{x, y >= n} Q(x, y)` over the table.
    pub fn p_n(&self) -> f64 {
        self.q_square().max_entry()
    }
}

/// `(Q, K_I)` for the cut `d`, as raw matrices.
fn raw_tables(walk: &Walk, n: i64, d: i64) -> Result<(Mat<f64>, Mat<f64>)> {
    let dx = d - 2 * n;
    let du = d as usize;
    let left = LeftSolver::new(walk, d, dx)?;
    let starts: Vec<Site> = (0..=dx).map(Site::axis).collect();
    // hm[x'][j]: from x' = x - n to s' = s - n = -(j + 1)
    let hm = left.rows(&starts, du)?;
    let right = LeftSolver::new(&walk.mirrored(), d, d - 2 * n)?;
    let back: Vec<Site> = (0..=d - 2 * n).map(Site::axis).collect();
    // hp[t][j]: from s + n = -t to y + n = j + 1
    let hp = right.rows(&back, du)?;
    let skip = (2 * n - 1) as usize;
    let a = Mat::<f64>::from_fn(hm.nrows(), du - skip, |i, j| hm[(i, j + skip)]);
    let q = &a * &hp;
    let k = Mat::<f64>::from_fn(hm.nrows(), (2 * n - 1) as usize, |i, j| {
        // y = -n + 1 + j, s' = y - n
        hm[(i, (2 * n - 2) as usize - j)]
    });
    Ok((q, k))
}

/// Build `Q` and `K_I` on rows `[n, d - n]`; `d >= 8n`.
pub fn build_q(walk: &Walk, seg: SegmentSpec, d: i64) -> Result<SeriesTables> {
    let n = seg.n();
    if d < 8 * n || d > MAX_D {
        return Err(Error::BudgetInfeasible(format!("cut {d} outside [8n, {MAX_D}] for n = {n}")));
    }
    let (q, k) = raw_tables(walk, n, d)?;
    let (qh, kh) = raw_tables(walk, n, d / 2)?;
    // compare where both cuts are far: x - n, y + n <= d / 16
    let rows = (d / 16) as usize;
    let cols = (d / 16 + 2 * n - 1) as usize;
    let mut err: f64 = 0.0;
    for i in 0..=rows {
        for j in 0..cols {
            err = err.max((q[(i, j)] - qh[(i, j)]).abs());
        }
        for j in 0..k.ncols() {
            err = err.max((k[(i, j)] - kh[(i, j)]).abs());
        }
    }
    Ok(tables_from(n, d, q, k, err))
}

fn tables_from(n: i64, d: i64, q: Mat<f64>, k: Mat<f64>, trunc_err: f64) -> SeriesTables {
    SeriesTables {
        n,
        d,
        q: OperatorTable { kind: OperatorKind::Q, n, row_lo: n, col_lo: -n + 1, entries: q, trunc_err },
        k_i: OperatorTable { kind: OperatorKind::KI, n, row_lo: n, col_lo: -n + 1, entries: k, trunc_err },
    }
}

fn inf_norm(m: &Mat<f64>) -> f64 {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)].abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// Neumann series `Σ_{k>=1} Q^k` of a square table, summed by doubling until
/// the remainder bound drops below `1e-10`; `kmax` caps the number of terms.
pub fn neumann(q: &Mat<f64>, kmax: u64) -> Result<(Mat<f64>, f64)> {
    let mut s = q.clone();
    let mut p = q.clone();
    let mut terms = 1u64;
    loop {
        // Λ = S_m + Q^m Λ, so |Λ - S_m| <= |P| |S_m| / (1 - |P|)
        let pn = inf_norm(&p);
        if pn < 1.0 {
            let tail = pn * inf_norm(&s) / (1.0 - pn);
            if tail < 1e-10 {
                return Ok((s, tail));
            }
        }
        if terms >= kmax || !pn.is_finite() {
            return Err(Error::SeriesNotConverged(format!("{terms} terms, |Q^m| = {pn:e}")));
        }
        s = &s + &p * &s;
        p = &p * &p;
        terms *= 2;
    }
}

/// `Λ = Σ_k Q^k` on the square block `x, y >= n` of `Q`.
pub fn lambda_series(q: &OperatorTable, kmax: u64) -> Result<OperatorTable> {
    if q.kind != OperatorKind::Q {
        return Err(Error::Config(format!("lambda_series needs a Q table, got {}", q.kind.label())));
    }
    let sq = q.block(OperatorKind::Q, q.rows(), q.rows());
    let p_n = sq.max_entry();
    if p_n >= 1.0 {
        return Err(Error::SeriesNotConverged(format!("p_n = {p_n} >= 1")));
    }
    let (lam, tail) = neumann(&sq.entries, kmax)?;
    Ok(OperatorTable {
        kind: OperatorKind::Lambda,
        n: q.n,
        row_lo: sq.row_lo,
        col_lo: sq.col_lo,
        entries: lam,
        trunc_err: q.trunc_err + tail,
    })
}

/// Default cut for a start: `max(64n, 4|x|)`, at least `8n`.
pub fn default_cut(seg: SegmentSpec, x: i64) -> i64 {
    (64 * seg.n()).max(4 * x.abs()).max(8 * seg.n()).min(MAX_D)
}

/// `H^{I(n)}_x = (1 + Λ)(Q_I + K_I)(x, .)` for an axis start `|x| >= n`;
/// starts `x <= -n` use the reflected law.
pub fn reconstruct_segment_hit(walk: &Walk, seg: SegmentSpec, x: i64, d: Option<i64>) -> Result<HittingDistribution> {
    let n = seg.n();
    if x.abs() < n {
        return Err(Error::Domain(format!("start {x} is not outside the segment of index {n}")));
    }
    let (law, xr) = if x >= n { (walk.clone(), x) } else { (walk.mirrored(), -x) };
    let d = d.unwrap_or_else(|| default_cut(seg, x));
    if xr > d - n || d < 4 * n || d > MAX_D {
        return Err(Error::BudgetInfeasible(format!("cut {d} does not cover start {x} for n = {n}")));
    }
    let (q, k) = raw_tables(&law, n, d)?;
    let tabs = tables_from(n, d, q, k, 0.0);
    let lam = lambda_series(&tabs.q, 1 << 40)?;
    let qi = tabs.q_i();
    let i = (xr - n) as usize;
    let mut row = vec![0.0; (2 * n - 1) as usize];
    for (j, r) in row.iter_mut().enumerate() {
        let direct = qi.entries[(i, j)] + tabs.k_i.entries[(i, j)];
        let via: f64 = (0..lam.entries.ncols())
            .map(|u| lam.entries[(i, u)] * (qi.entries[(u, j)] + tabs.k_i.entries[(u, j)]))
            .sum();
        *r = direct + via;
    }
    let table: BTreeMap<Site, f64> = seg
        .sites()
        .zip(&row)
        .map(|(s, &v)| (Site::axis(if x >= n { s } else { -s }), v))
        .collect();
    let total: f64 = table.values().sum();
    Ok(HittingDistribution {
        target: Target::Segment(n as u32),
        start: Site::axis(x),
        table,
        deficit: (1.0 - total).abs() + lam.trunc_err,
        method: Method::Series,
        stderr: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hitting::hit_segment;
    use crate::walk::make_skew_walk;

    #[test]
    fn halfline_mass_and_reflection() {
        let w = Walk::new(make_skew_walk()).unwrap();
        let m = hit_halfline(&w, Sign::Minus, Site::new(3, 0), 256).unwrap();
        assert!((m.total() + m.tail_bound - 1.0).abs() < 1e-9);
        assert!(m.tail_bound > 0.0 && m.tail_constant() < 2.0);
        assert!(m.table.values().all(|&v| v >= -1e-14));
        let mirrored = w.mirrored();
        let p = hit_halfline(&mirrored, Sign::Plus, Site::new(-3, 0), 256).unwrap();
        for s in 1..=256 {
            assert!((p.get(s) - m.get(-s)).abs() < 1e-12);
        }
    }

    #[test]
    fn reconstruction_matches_oracle() {
        for (walk, n, x) in [(Walk::simple(), 2, 4), (Walk::new(make_skew_walk()).unwrap(), 3, 6)] {
            let seg = SegmentSpec::new(n).unwrap();
            let oracle = hit_segment(&walk, seg, Site::axis(x)).unwrap();
            for start in [x, -x] {
                let rec = reconstruct_segment_hit(&walk, seg, start, None).unwrap();
                let oracle = if start == x { oracle.clone() } else { hit_segment(&walk, seg, Site::axis(start)).unwrap() };
                for s in seg.sites() {
                    assert!((rec.at(s) - oracle.at(s)).abs() < 1e-9, "{} {start} {s}", walk.name());
                }
                assert!(rec.deficit < 1e-8);
            }
        }
    }

    #[test]
    fn truncation_estimate_shrinks() {
        let seg = SegmentSpec::new(2).unwrap();
        let errs: Vec<f64> = [64, 128, 256]
            .iter()
            .map(|&d| build_q(&Walk::simple(), seg, d).unwrap().q.trunc_err)
            .collect();
        assert!(errs[2] < errs[1] && errs[1] < errs[0]);
    }

    #[test]
    fn lambda_is_resolvent() {
        let tabs = build_q(&Walk::simple(), SegmentSpec::new(2).unwrap(), 64).unwrap();
        let lam = lambda_series(&tabs.q, 1 << 40).unwrap();
        let sq = tabs.q_square();
        // Λ = Q + ΛQ
        let lq = &lam.entries * &sq.entries;
        for i in 0..sq.entries.nrows() {
            for j in 0..sq.entries.ncols() {
                let r = lam.entries[(i, j)] - sq.entries[(i, j)] - lq[(i, j)];
                assert!(r.abs() < 1e-9);
                assert!(lam.entries[(i, j)] >= sq.entries[(i, j)] - 1e-15);
            }
        }
        for x in tabs.q.rows() {
            assert!(tabs.q.row_sum(x) + tabs.k_i.row_sum(x) <= 1.0 + 1e-9);
        }
        assert!(tabs.p_n() < 1.0 && tabs.q.trunc_err < tabs.p_n(), "{} {}", tabs.p_n(), tabs.q.trunc_err);
    }
}
