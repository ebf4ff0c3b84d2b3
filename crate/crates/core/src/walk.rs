//! Increment laws on the square lattice and their moment data.
//!
//! A [`WalkLaw`] is a finite-support distribution of the increment `S_1`.
//! [`Walk`] couples a law with its [`MomentReport`] and is only obtainable
//! through [`validate`], so every downstream computation can rely on a zero
//! mean, irreducible, finite-support increment.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const SUM_TOL: f64 = 1e-12;
const MEAN_TOL: f64 = 1e-12;
const MAX_CONVOLUTIONS: usize = 64;

/// A point of `Z + iZ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Site {
    pub x: i64,
    pub y: i64,
}

impl Site {
    pub const ORIGIN: Site = Site { x: 0, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        Site { x, y }
    }

    /// A site on the real axis.
    pub const fn axis(x: i64) -> Self {
        Site { x, y: 0 }
    }

    pub fn on_axis(self) -> bool {
        self.y == 0
    }

    /// Parses `"a"`, `"a+bi"`, `"a-bi"`, `"bi"` or `"a,b"`.
    pub fn parse(text: &str) -> Result<Site> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Config(format!("cannot parse lattice point '{text}'"));
        if let Some((a, b)) = t.split_once(',') {
            return Ok(Site::new(a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?));
        }
        let Some(body) = t.strip_suffix('i') else {
            return Ok(Site::axis(t.parse().map_err(|_| bad())?));
        };
        // split at the last sign that is not the leading one
        let cut = body
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(k, _)| k)
            .last();
        let (re, im) = match cut {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let im = match im {
            "" | "+" => 1,
            "-" => -1,
            s => s.parse().map_err(|_| bad())?,
        };
        Ok(Site::new(re.parse().map_err(|_| bad())?, im))
    }
}

impl Add for Site {
    type Output = Site;
    fn add(self, o: Site) -> Site {
        Site::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Site {
    type Output = Site;
    fn sub(self, o: Site) -> Site {
        Site::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Site {
    type Output = Site;
    fn neg(self) -> Site {
        Site::new(-self.x, -self.y)
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y == 0 {
            write!(f, "{}", self.x)
        } else if self.y > 0 {
            write!(f, "{}+{}i", self.x, self.y)
        } else {
            write!(f, "{}{}i", self.x, self.y)
        }
    }
}

/// Finite-support increment distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkLaw {
    name: String,
    support: Vec<Site>,
    probs: Vec<f64>,
}

impl WalkLaw {
    /// Builds a law, checking only structural well-formedness: positive
    /// probabilities summing to one and distinct support points.
    pub fn new(name: impl Into<String>, steps: impl IntoIterator<Item = (Site, f64)>) -> Result<Self> {
        let (support, probs): (Vec<Site>, Vec<f64>) = steps.into_iter().unzip();
        if support.is_empty() {
            return Err(Error::BadProbabilities("empty support".into()));
        }
        if let Some(p) = probs.iter().find(|p| !(p.is_finite() && **p > 0.0)) {
            return Err(Error::BadProbabilities(format!("non-positive probability {p}")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > SUM_TOL {
            return Err(Error::BadProbabilities(format!("probabilities sum to {total}")));
        }
        let mut seen = HashSet::new();
        if let Some(dup) = support.iter().find(|s| !seen.insert(**s)) {
            return Err(Error::BadProbabilities(format!("duplicate support point {dup}")));
        }
        Ok(WalkLaw { name: name.into(), support, probs })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn support(&self) -> &[Site] {
        &self.support
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn steps(&self) -> impl Iterator<Item = (Site, f64)> + '_ {
        self.support.iter().copied().zip(self.probs.iter().copied())
    }

    /// The law of `-S_1` (time reversal).
    pub fn reversed(&self) -> WalkLaw {
        WalkLaw {
            name: format!("{}-reversed", self.name),
            support: self.support.iter().map(|&s| -s).collect(),
            probs: self.probs.clone(),
        }
    }

    /// Reflection `x + iy -> -x + iy`; exchanges the roles of the two half-lines of the axis.
    pub fn mirrored(&self) -> WalkLaw {
        WalkLaw {
            name: format!("{}-mirrored", self.name),
            support: self.support.iter().map(|s| Site::new(-s.x, s.y)).collect(),
            probs: self.probs.clone(),
        }
    }

    /// Characteristic function `E exp(i theta . S_1)`.
    pub fn characteristic(&self, t1: f64, t2: f64) -> Complex64 {
        self.steps()
            .map(|(s, p)| Complex64::from_polar(p, t1 * s.x as f64 + t2 * s.y as f64))
            .sum()
    }

    /// Largest coordinate magnitude among support points.
    pub fn max_jump(&self) -> i64 {
        self.support.iter().map(|s| s.x.abs().max(s.y.abs())).max().unwrap_or(0)
    }

    pub fn is_simple(&self) -> bool {
        let mut pts = self.support.clone();
        pts.sort();
        let mut srw = vec![Site::new(-1, 0), Site::new(0, -1), Site::new(0, 1), Site::new(1, 0)];
        srw.sort();
        pts == srw && self.probs.iter().all(|&p| (p - 0.25).abs() < 1e-15)
    }

    /// Loads a law from JSON: either a bare list of `{dx, dy, p}` records or
    /// `{"name": .., "steps": [..]}`. `p` may be a number or a string `"a/b"`.
    pub fn from_json_str(text: &str, default_name: &str) -> Result<WalkLaw> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Prob {
            Num(f64),
            Text(String),
        }
        #[derive(Deserialize)]
        struct Record {
            dx: i64,
            dy: i64,
            p: Prob,
        }
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum File {
            Bare(Vec<Record>),
            Named { name: Option<String>, steps: Vec<Record> },
        }
        let file: File = serde_json::from_str(text)?;
        let (name, records) = match file {
            File::Bare(r) => (default_name.to_string(), r),
            File::Named { name, steps } => (name.unwrap_or_else(|| default_name.to_string()), steps),
        };
        let mut steps = Vec::with_capacity(records.len());
        for r in records {
            let p = match r.p {
                Prob::Num(v) => v,
                Prob::Text(t) => parse_ratio(&t)?,
            };
            steps.push((Site::new(r.dx, r.dy), p));
        }
        WalkLaw::new(name, steps)
    }

    pub fn from_path(path: &Path) -> Result<WalkLaw> {
        let text = std::fs::read_to_string(path)?;
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("law");
        WalkLaw::from_json_str(&text, stem)
    }

    /// Resolves a CLI-style walk argument: `srw`, one of the bundled names,
    /// or a path to a JSON law file.
    pub fn resolve(spec: &str) -> Result<WalkLaw> {
        match spec {
            "srw" => Ok(make_simple_walk()),
            "skew" => Ok(make_skew_walk()),
            "diagonal" => Ok(make_diagonal_walk()),
            path => WalkLaw::from_path(Path::new(path)),
        }
    }
}

fn parse_ratio(t: &str) -> Result<f64> {
    let bad = || Error::BadProbabilities(format!("cannot parse probability '{t}'"));
    match t.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|_| bad())?;
            let b: f64 = b.trim().parse().map_err(|_| bad())?;
            Ok(a / b)
        }
        None => t.trim().parse().map_err(|_| bad()),
    }
}

/// The symmetric simple random walk: `±1, ±i` with probability 1/4 each.
pub fn make_simple_walk() -> WalkLaw {
    let s = [Site::new(1, 0), Site::new(-1, 0), Site::new(0, 1), Site::new(0, -1)];
    WalkLaw::new("srw", s.into_iter().map(|p| (p, 0.25))).expect("simple walk is well formed")
}

/// An asymmetric law: `+2` w.p. 1/6, `-1` w.p. 1/3, `±i` w.p. 1/4.
/// Zero mean, covariance `diag(1, 1/2)`, and `mu != nu` for its edge functions.
pub fn make_skew_walk() -> WalkLaw {
    WalkLaw::new(
        "skew",
        [
            (Site::new(2, 0), 1.0 / 6.0),
            (Site::new(-1, 0), 1.0 / 3.0),
            (Site::new(0, 1), 0.25),
            (Site::new(0, -1), 0.25),
        ],
    )
    .expect("skew walk is well formed")
}

/// A correlated law: `±1` and `±(1+i)`, each 1/4. Covariance `[[1, 1/2], [1/2, 1/2]]`.
pub fn make_diagonal_walk() -> WalkLaw {
    WalkLaw::new(
        "diagonal",
        [
            (Site::new(1, 0), 0.25),
            (Site::new(-1, 0), 0.25),
            (Site::new(1, 1), 0.25),
            (Site::new(-1, -1), 0.25),
        ],
    )
    .expect("diagonal walk is well formed")
}

/// Moments of the increment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentReport {
    pub mean: [f64; 2],
    /// `Q = (sigma_ij)`.
    pub covariance: [[f64; 2]; 2],
    /// `sqrt(det Q)`.
    pub sigma2: f64,
    /// `E[|S^(1)|^2 log |S^(1)|]`.
    pub first_coord_log_moment: f64,
}

/// Checks the standing assumptions (zero mean, irreducibility) and returns the moments.
pub fn validate(law: &WalkLaw) -> Result<MomentReport> {
    let (mut mx, mut my) = (0.0, 0.0);
    for (s, p) in law.steps() {
        mx += p * s.x as f64;
        my += p * s.y as f64;
    }
    if mx.abs() > MEAN_TOL || my.abs() > MEAN_TOL {
        return Err(Error::NotZeroMean(mx, my));
    }
    check_irreducible(law)?;
    let mut cov = [[0.0; 2]; 2];
    let mut log_moment = 0.0;
    for (s, p) in law.steps() {
        let (x, y) = (s.x as f64, s.y as f64);
        cov[0][0] += p * x * x;
        cov[0][1] += p * x * y;
        cov[1][1] += p * y * y;
        if s.x != 0 {
            log_moment += p * x * x * x.abs().ln();
        }
    }
    cov[1][0] = cov[0][1];
    let det = cov[0][0] * cov[1][1] - cov[0][1] * cov[1][0];
    if !(cov[0][0] > 0.0 && det > 0.0) {
        return Err(Error::NotIrreducible("covariance is degenerate".into()));
    }
    Ok(MomentReport {
        mean: [mx, my],
        covariance: cov,
        sigma2: det.sqrt(),
        first_coord_log_moment: log_moment,
    })
}

/// Breadth-first closure of sums of at most 64 increments; the law is accepted
/// when the four unit vectors are reachable.
fn check_irreducible(law: &WalkLaw) -> Result<()> {
    let targets = [Site::new(1, 0), Site::new(0, 1), Site::new(-1, 0), Site::new(0, -1)];
    let mut found = [false; 4];
    let mut seen: HashSet<Site> = HashSet::from([Site::ORIGIN]);
    let mut queue = VecDeque::from([(Site::ORIGIN, 0usize)]);
    while let Some((site, depth)) = queue.pop_front() {
        if depth == MAX_CONVOLUTIONS {
            continue;
        }
        for &step in law.support() {
            let next = site + step;
            if seen.insert(next) {
                if let Some(k) = targets.iter().position(|&t| t == next) {
                    found[k] = true;
                    if found.iter().all(|&f| f) {
                        return Ok(());
                    }
                }
                queue.push_back((next, depth + 1));
            }
        }
    }
    let missing: Vec<String> = targets
        .iter()
        .zip(found)
        .filter(|(_, f)| !f)
        .map(|(t, _)| t.to_string())
        .collect();
    Err(Error::NotIrreducible(format!(
        "{} not reachable within {MAX_CONVOLUTIONS} steps",
        missing.join(", ")
    )))
}

/// A validated law together with its moments.
#[derive(Debug, Clone)]
pub struct Walk {
    law: WalkLaw,
    moments: MomentReport,
}

impl Walk {
    pub fn new(law: WalkLaw) -> Result<Walk> {
        let moments = validate(&law)?;
        Ok(Walk { law, moments })
    }

    pub fn simple() -> Walk {
        Walk::new(make_simple_walk()).expect("simple walk validates")
    }

    pub fn law(&self) -> &WalkLaw {
        &self.law
    }

    pub fn moments(&self) -> &MomentReport {
        &self.moments
    }

    pub fn sigma2(&self) -> f64 {
        self.moments.sigma2
    }

    pub fn name(&self) -> &str {
        self.law.name()
    }

    pub fn reversed(&self) -> Walk {
        Walk::new(self.law.reversed()).expect("reversal preserves the standing assumptions")
    }

    pub fn mirrored(&self) -> Walk {
        Walk::new(self.law.mirrored()).expect("reflection preserves the standing assumptions")
    }
}
