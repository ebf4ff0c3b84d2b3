//! Partial Fourier transforms of the Green function in the vertical variable.
//!
//! For fixed `t` (the frequency paired with the first coordinate) put
//! `Gamma_m(t) = (1/2pi) int e^{i m v} / (1 - phi(t, v)) dv`. With `w = e^{iv}`,
//! `L = -min dy`, `U = max dy`, the integrand is `w^{m-1+L} / P(w)` with
//! `P(w) = w^L (1 - phi)` a polynomial of degree `L + U` having `L` roots inside
//! and `U` outside the unit circle whenever `t != 0`. Residues give `Gamma_m`
//! exactly. Roots are solved in `u = w - 1` so the two roots that approach `1`
//! as `t -> 0` keep full relative accuracy.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::walk::Walk;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// `e^z - 1` without cancellation near `z = 0`.
pub fn expm1c(z: Complex64) -> Complex64 {
    let (s, c) = z.im.sin_cos();
    let half = (0.5 * z.im).sin();
    Complex64::new(z.re.exp_m1() * c - 2.0 * half * half, z.re.exp() * s)
}

/// `log(1 + u)` without cancellation near `u = 0`.
pub fn log1pc(u: Complex64) -> Complex64 {
    let re = 0.5 * (2.0 * u.re + u.norm_sqr()).ln_1p();
    Complex64::new(re, u.im.atan2(1.0 + u.re))
}

fn binom(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// One root of `P`: `log r` and the residue weight `c` with `Gamma_m = sum c r^m`
/// over the roots of one side.
#[derive(Debug, Clone, Copy)]
pub struct Root {
    pub log_r: Complex64,
    pub coef: Complex64,
}

/// Roots of `P` at one frequency, split by the unit circle.
#[derive(Debug, Clone)]
pub struct RootSet {
    pub inside: Vec<Root>,
    pub outside: Vec<Root>,
    low: i64,
    high: i64,
}

impl RootSet {
    fn side_for(&self, m: i64) -> &[Root] {
        if m >= 1 - self.low {
            &self.inside
        } else {
            debug_assert!(m < self.high);
            &self.outside
        }
    }

    /// `Gamma_m` at this frequency.
    pub fn gamma(&self, m: i64) -> Complex64 {
        self.side_for(m).iter().map(|r| r.coef * (r.log_r * m as f64).exp()).sum()
    }

    /// `Gamma_m / Gamma_0`, the Fourier transform of the first axis visit from height `m`.
    pub fn ratio(&self, m: i64) -> Complex64 {
        if m == 0 {
            return Complex64::new(1.0, 0.0);
        }
        let side = self.side_for(m);
        let g0: Complex64 = side.iter().map(|r| r.coef).sum();
        let gm: Complex64 = side.iter().map(|r| r.coef * (r.log_r * m as f64).exp()).sum();
        gm / g0
    }

    /// `1 / Gamma_0`.
    pub fn inv_gamma0(&self) -> Complex64 {
        self.inside.iter().map(|r| r.coef).sum::<Complex64>().inv()
    }

    /// `Gamma_0 - e^{-i k t} Gamma_{-m}` with the cancellation at small `t` removed.
    pub fn kernel_integrand(&self, kt: f64, m: i64) -> Complex64 {
        // the inside representation covers -m >= 1 - L, the outside one -m <= U - 1
        let side = if -m >= 1 - self.low { &self.inside } else { &self.outside };
        side.iter()
            .map(|r| -r.coef * expm1c(Complex64::new(0.0, -kt) - r.log_r * m as f64))
            .sum()
    }

    /// `Gamma_{-m}` from the side used by [`RootSet::kernel_integrand`].
    pub fn gamma_for_kernel(&self, m: i64) -> (Complex64, Complex64) {
        let side = if -m >= 1 - self.low { &self.inside } else { &self.outside };
        let g0 = side.iter().map(|r| r.coef).sum();
        let gm = side.iter().map(|r| r.coef * (-r.log_r * m as f64).exp()).sum();
        (g0, gm)
    }
}

/// Precomputed increment data for root solves.
#[derive(Debug, Clone)]
pub struct Spectral {
    steps: Vec<(f64, usize, f64)>,
    low: usize,
    high: usize,
}

impl Spectral {
    pub fn new(walk: &Walk) -> Spectral {
        let law = walk.law();
        let low = law.support().iter().map(|s| -s.y).max().unwrap().max(0) as usize;
        let high = law.support().iter().map(|s| s.y).max().unwrap().max(0) as usize;
        let steps = law.steps().map(|(s, p)| (s.x as f64, (s.y + low as i64) as usize, p)).collect();
        Spectral { steps, low, high }
    }

    pub fn degree(&self) -> usize {
        self.low + self.high
    }

    /// Coefficients of `P(1 + u)` in powers of `u`.
    fn u_coefficients(&self, t: f64) -> Vec<Complex64> {
        let d = self.degree();
        let l = self.low;
        let mut c = vec![Complex64::new(0.0, 0.0); d + 1];
        let mut c0 = Complex64::new(0.0, 0.0);
        let mut tilt = Complex64::new(0.0, 0.0);
        for &(dx, j, p) in &self.steps {
            let a = dx * t;
            let h = (0.5 * a).sin();
            // 1 - e^{ia} and e^{ia} - 1 written without cancellation
            let one_minus = Complex64::new(2.0 * h * h, -a.sin());
            c0 += p * one_minus;
            tilt += p * (j as f64 - l as f64) * -one_minus;
        }
        c[0] = c0;
        if d >= 1 {
            c[1] = l as f64 * c0 - tilt;
        }
        for (i, ci) in c.iter_mut().enumerate().skip(2) {
            let mut v = Complex64::new(binom(l, i), 0.0);
            for &(dx, j, p) in &self.steps {
                v -= p * binom(j, i) * (I * dx * t).exp();
            }
            *ci = v;
        }
        c
    }

    /// Roots of `P` at frequency `t`, which must not be a multiple of `2 pi`.
    pub fn roots(&self, t: f64) -> Result<RootSet> {
        let c = self.u_coefficients(t);
        let d = self.degree();
        let lead = c[d];
        if lead.norm() < 1e-13 {
            return Err(Error::NotConverged(format!("degenerate characteristic polynomial at t = {t}")));
        }
        let us = polynomial_roots(&c)?;
        let mut inside = Vec::with_capacity(self.low);
        let mut outside = Vec::with_capacity(self.high);
        for (i, &ui) in us.iter().enumerate() {
            let mut dp = lead;
            for (j, &uj) in us.iter().enumerate() {
                if j != i {
                    dp *= ui - uj;
                }
            }
            let log_r = log1pc(ui);
            let w = (log_r * (self.low as f64 - 1.0)).exp() / dp;
            // |1 + u| < 1 iff 2 Re u + |u|^2 < 0
            if 2.0 * ui.re + ui.norm_sqr() < 0.0 {
                inside.push(Root { log_r, coef: w });
            } else {
                outside.push(Root { log_r, coef: -w });
            }
        }
        if inside.len() != self.low || outside.len() != self.high {
            return Err(Error::NotConverged(format!(
                "root split {}/{} at t = {t}, expected {}/{}",
                inside.len(),
                outside.len(),
                self.low,
                self.high
            )));
        }
        Ok(RootSet { inside, outside, low: self.low as i64, high: self.high as i64 })
    }
}

fn horner(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = c[c.len() - 1];
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev().skip(1) {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// All roots of `sum c_i u^i` (`c` non-empty leading coefficient).
pub fn polynomial_roots(c: &[Complex64]) -> Result<Vec<Complex64>> {
    let d = c.len() - 1;
    match d {
        0 => return Ok(vec![]),
        1 => return Ok(vec![-c[0] / c[1]]),
        2 => {
            let (a, b, cc) = (c[2], c[1], c[0]);
            let disc = (b * b - 4.0 * a * cc).sqrt();
            let q = if (b.conj() * disc).re >= 0.0 { -0.5 * (b + disc) } else { -0.5 * (b - disc) };
            if q.norm() == 0.0 {
                return Ok(vec![Complex64::new(0.0, 0.0); 2]);
            }
            return Ok(vec![q / a, cc / q]);
        }
        _ => {}
    }
    // Aberth-Ehrlich from a circle matched to the coefficient scale
    let radius = (c[0] / c[d]).norm().powf(1.0 / d as f64).max(1e-3);
    let mut z: Vec<Complex64> =
        (0..d).map(|k| Complex64::from_polar(radius, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / d as f64)).collect();
    let mut converged = false;
    for _ in 0..500 {
        let mut worst: f64 = 0.0;
        for i in 0..d {
            let (p, dp) = horner(c, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..d).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let step = ratio / (1.0 - ratio * s);
            z[i] -= step;
            worst = worst.max(step.norm() / z[i].norm().max(1e-300));
        }
        if worst < 1e-15 {
            converged = true;
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = horner(c, *zi);
            if dp.norm() == 0.0 {
                break;
            }
            *zi -= p / dp;
        }
    }
    if !converged && z.iter().any(|&zi| horner(c, zi).0.norm() > 1e-10 * c.iter().map(|a| a.norm()).sum::<f64>()) {
        return Err(Error::NotConverged("polynomial root iteration".into()));
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk::{make_skew_walk, Site, WalkLaw};
    use std::f64::consts::PI;

    fn gamma_direct(walk: &Walk, t: f64, m: i64) -> Complex64 {
        // periodic analytic integrand: the trapezoid rule converges geometrically
        let n = 4096;
        (0..n)
            .map(|j| {
                let v = 2.0 * PI * j as f64 / n as f64;
                (I * (m as f64) * v).exp() / (1.0 - walk.law().characteristic(t, v))
            })
            .sum::<Complex64>()
            / n as f64
    }

    fn tall_walk() -> Walk {
        Walk::new(
            WalkLaw::new(
                "tall",
                [
                    (Site::new(1, 0), 0.25),
                    (Site::new(-1, 0), 0.25),
                    (Site::new(0, 1), 0.125),
                    (Site::new(0, -1), 0.125),
                    (Site::new(1, 2), 0.125),
                    (Site::new(-1, -2), 0.125),
                ],
            )
            .unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn simple_walk_gamma0_closed_form() {
        let w = Walk::simple();
        let sp = Spectral::new(&w);
        for &t in &[1e-7, 1e-3, 0.5, 2.0, PI] {
            let am1 = 2.0 * (0.5 * t).sin().powi(2);
            let exact = 2.0 / (am1 * (am1 + 2.0)).sqrt();
            let g = sp.roots(t).unwrap().gamma(0);
            assert!((g.re - exact).abs() < 1e-12 * exact && g.im.abs() < 1e-12 * exact, "{t} {g} {exact}");
        }
    }

    #[test]
    fn gamma_matches_direct_integral() {
        for walk in [Walk::simple(), Walk::new(make_skew_walk()).unwrap(), tall_walk()] {
            let sp = Spectral::new(&walk);
            for &t in &[0.3, 1.1, -2.5] {
                let rs = sp.roots(t).unwrap();
                for m in -4..=4 {
                    let g = rs.gamma(m);
                    let d = gamma_direct(&walk, t, m);
                    assert!((g - d).norm() < 1e-11 * d.norm().max(1.0), "{} t={t} m={m} {g} {d}", walk.name());
                }
            }
        }
    }

    #[test]
    fn both_representations_agree() {
        let walk = tall_walk();
        let sp = Spectral::new(&walk);
        let rs = sp.roots(0.9).unwrap();
        // Gamma_0 and Gamma_{+-1} from both sides
        for m in -1..=1i64 {
            let a: Complex64 = rs.inside.iter().map(|r| r.coef * (r.log_r * m as f64).exp()).sum();
            let b: Complex64 = rs.outside.iter().map(|r| r.coef * (r.log_r * m as f64).exp()).sum();
            assert!((a - b).norm() < 1e-12 * a.norm());
        }
    }

    #[test]
    fn one_step_identity() {
        // sum_e p(e) e^{i e1 t} Gamma_{e2}/Gamma_0 = 1 - 1/Gamma_0
        for walk in [Walk::simple(), Walk::new(make_skew_walk()).unwrap(), tall_walk()] {
            let sp = Spectral::new(&walk);
            for &t in &[1e-6, 0.2, 3.0] {
                let rs = sp.roots(t).unwrap();
                let lhs: Complex64 =
                    walk.law().steps().map(|(s, p)| p * (I * (s.x as f64) * t).exp() * rs.ratio(s.y)).sum();
                let rhs = 1.0 - rs.inv_gamma0();
                assert!((lhs - rhs).norm() < 1e-12, "{t}: {lhs} {rhs}");
            }
        }
    }

    #[test]
    fn small_frequency_kink() {
        // 1/Gamma_0 ~ sigma^2 |t|
        for walk in [Walk::simple(), Walk::new(make_skew_walk()).unwrap(), tall_walk()] {
            let sp = Spectral::new(&walk);
            let t = 1e-7;
            let v = sp.roots(t).unwrap().inv_gamma0().re / t;
            assert!((v - walk.sigma2()).abs() < 1e-5, "{} {v}", walk.name());
        }
    }

    #[test]
    fn complex_helpers() {
        let z = Complex64::new(1e-9, -2e-9);
        assert!((expm1c(z) - z).norm() < 1e-17);
        let big = Complex64::new(0.3, 2.0);
        assert!((expm1c(big) - (big.exp() - 1.0)).norm() < 1e-15);
        assert!((log1pc(z) - z).norm() < 1e-17);
        assert!((log1pc(big) - (1.0 + big).ln()).norm() < 1e-15);
    }

    #[test]
    fn aberth_finds_known_roots() {
        let roots = [Complex64::new(1e-4, 2e-4), Complex64::new(-3.0, 0.5), Complex64::new(0.2, -1.0), Complex64::new(5.0, 0.0)];
        // expand prod (u - r)
        let mut c = vec![Complex64::new(1.0, 0.0)];
        for r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
            for (i, &a) in c.iter().enumerate() {
                next[i + 1] += a;
                next[i] -= a * r;
            }
            c = next;
        }
        let found = polynomial_roots(&c).unwrap();
        for r in roots {
            let best = found.iter().map(|f| (f - r).norm()).fold(f64::INFINITY, f64::min);
            assert!(best < 1e-12 * r.norm().max(1e-4), "{r}");
        }
    }
}
