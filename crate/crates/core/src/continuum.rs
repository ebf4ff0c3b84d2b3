//! Brownian hitting densities of half-lines and segments of the real axis.
//!
//! The segment `(-n_*, n_*)` with `n_* = n - 1/2` is the continuum shadow of
//! the lattice sites `{-n+1, ..., n-1}`. Slit-plane kernels are written for the
//! unit slit `[-1, 1]` and reached through the Joukowski map
//! `z = (w + 1/w) / 2`, whose inverse `f` sends the slit plane onto `|w| > 1`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad::{integrate, integrate_to_infinity, QuadOpts};

/// The target segment: lattice sites `{-n+1, ..., n-1}` and the interval `(-n_*, n_*)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SegmentSpec {
    n: u32,
}

impl SegmentSpec {
    pub fn new(n: u32) -> Result<SegmentSpec> {
        if n == 0 {
            return Err(Error::Domain("segment index n must be at least 1".into()));
        }
        Ok(SegmentSpec { n })
    }

    pub fn n(&self) -> i64 {
        self.n as i64
    }

    pub fn n_star(&self) -> f64 {
        self.n as f64 - 0.5
    }

    pub fn sites(&self) -> impl Iterator<Item = i64> + Clone {
        let n = self.n as i64;
        -n + 1..n
    }

    pub fn len(&self) -> usize {
        2 * self.n as usize - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, s: i64) -> bool {
        s.abs() < self.n as i64
    }
}

/// `h^-_x(s) = sqrt(x) / (pi (x - s) sqrt(-s))`, the density of the first hit of
/// the negative half-line from `x > 0`.
pub fn h_minus(x: f64, s: f64) -> Result<f64> {
    if !(x > 0.0 && s < 0.0) {
        return Err(Error::Domain(format!("h_minus needs x > 0 > s, got x = {x}, s = {s}")));
    }
    Ok(x.sqrt() / (PI * (x - s) * (-s).sqrt()))
}

/// `h^+_x(s)` for `x < 0 < s`: the mirror image of [`h_minus`].
pub fn h_plus(x: f64, s: f64) -> Result<f64> {
    if !(x < 0.0 && s > 0.0) {
        return Err(Error::Domain(format!("h_plus needs x < 0 < s, got x = {x}, s = {s}")));
    }
    h_minus(-x, -s)
}

/// Hitting density of `(-n_*, n_*)` from a real start outside `[-n_*, n_*]`.
pub fn h_segment_exterior(n_star: f64, x: f64, s: f64) -> Result<f64> {
    if !(x.abs() > n_star && s.abs() < n_star) {
        return Err(Error::Domain(format!(
            "exterior density needs |x| > {n_star} > |s|, got x = {x}, s = {s}"
        )));
    }
    Ok((x * x - n_star * n_star).sqrt() / (PI * (x - s).abs() * (n_star * n_star - s * s).sqrt()))
}

/// Which numerator the interior extension uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InteriorNumerator {
    /// `n_*^2 - x s`, consistent with the boundary-limit identity.
    #[default]
    HalfInteger,
    /// `n^2 - x s` with `n = n_* + 1/2`.
    Integer,
}

/// Interior extension `(n_*^2 - x s) / (pi (x - s)^2 sqrt((n_*^2 - x^2)(n_*^2 - s^2)))`.
pub fn h_segment_interior(n_star: f64, x: f64, s: f64, numerator: InteriorNumerator) -> Result<f64> {
    if !(x.abs() < n_star && s.abs() < n_star) {
        return Err(Error::Domain(format!("interior density needs |x|, |s| < {n_star}")));
    }
    if x == s {
        return Err(Error::SingularArguments(format!("x = s = {x}")));
    }
    let top = match numerator {
        InteriorNumerator::HalfInteger => n_star * n_star - x * s,
        InteriorNumerator::Integer => (n_star + 0.5).powi(2) - x * s,
    };
    let n2 = n_star * n_star;
    Ok(top / (PI * (x - s).powi(2) * ((n2 - x * x) * (n2 - s * s)).sqrt()))
}

/// Side of the unit slit a boundary point is approached from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    Above,
    Below,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Above => 1.0,
            Side::Below => -1.0,
        }
    }

    pub fn parse(text: &str) -> Result<Side> {
        match text {
            "above" | "+" | "up" => Ok(Side::Above),
            "below" | "-" | "down" => Ok(Side::Below),
            other => Err(Error::Config(format!("unknown side '{other}'"))),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Side::Above => "above",
            Side::Below => "below",
        }
    }
}

/// A point of the slit plane, or a boundary point `s ± i0` of the unit slit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SlitPoint {
    Boundary { s: f64, side: Side },
    Off(Complex64),
}

impl SlitPoint {
    pub fn boundary(s: f64, side: Side) -> Result<SlitPoint> {
        if s.abs() >= 1.0 {
            return Err(Error::Domain(format!("boundary point needs |s| < 1, got {s}")));
        }
        Ok(SlitPoint::Boundary { s, side })
    }

    pub fn off(z: Complex64) -> Result<SlitPoint> {
        if on_slit(z) {
            return Err(Error::OnSlit(format!("{z}")));
        }
        Ok(SlitPoint::Off(z))
    }

    /// `f(z)` for this point, with `|f| = 1` on the boundary.
    pub fn image(&self) -> Complex64 {
        match *self {
            SlitPoint::Boundary { s, side } => boundary_f(s, side).expect("checked at construction"),
            SlitPoint::Off(z) => joukowski_inverse(z).expect("checked at construction"),
        }
    }
}

fn on_slit(z: Complex64) -> bool {
    z.im == 0.0 && z.re.abs() <= 1.0
}

/// `f(z) = z + sqrt(z^2 - 1)`, evaluated as `z (1 + sqrt(1 - 1/z^2))` with the
/// principal root, which is the branch with `|f(z)| > 1` on the slit plane.
pub fn joukowski_inverse(z: Complex64) -> Result<Complex64> {
    if on_slit(z) {
        return Err(Error::OnSlit(format!("{z}")));
    }
    let w = z * (1.0 + (1.0 - (z * z).inv()).sqrt());
    Ok(w)
}

/// `f(s ± i0) = s ± i sqrt(1 - s^2)`.
pub fn boundary_f(s: f64, side: Side) -> Result<Complex64> {
    if s.abs() >= 1.0 {
        return Err(Error::Domain(format!("boundary_f needs |s| < 1, got {s}")));
    }
    Ok(Complex64::new(s, side.sign() * ((1.0 - s) * (1.0 + s)).sqrt()))
}

/// Poisson kernel of the slit plane: density (per unit `s`) of the first hit of
/// the side `s ± i0` for Brownian motion started at `z`.
pub fn slit_plane_kernel(target: SlitPoint, z: Complex64) -> Result<f64> {
    let SlitPoint::Boundary { s, side } = target else {
        return Err(Error::Domain("kernel target must be a boundary point".into()));
    };
    let w = joukowski_inverse(z)?;
    let r = w.norm();
    let theta = w.arg();
    let theta_s = side.sign() * s.acos();
    let r2m1 = (r - 1.0) * (r + 1.0);
    let denom = r * r - 2.0 * r * (theta - theta_s).cos() + 1.0;
    Ok(r2m1 / (denom * 2.0 * PI * ((1.0 - s) * (1.0 + s)).sqrt()))
}

/// Linear change of variables taking `Q^{1/2} B` to a time-changed standard
/// Brownian motion while fixing the real axis pointwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnisotropicMap {
    pub qmat: [[f64; 2]; 2],
    pub omega: f64,
    pub lam: f64,
}

impl AnisotropicMap {
    pub fn new(qmat: [[f64; 2]; 2]) -> Result<AnisotropicMap> {
        let det = qmat[0][0] * qmat[1][1] - qmat[0][1] * qmat[1][0];
        if qmat[0][1] != qmat[1][0] || !(qmat[1][1] > 0.0 && qmat[0][0] > 0.0 && det > 0.0) {
            return Err(Error::Domain("covariance must be symmetric positive definite".into()));
        }
        Ok(AnisotropicMap { qmat, omega: qmat[0][1] / qmat[1][1], lam: det.sqrt() / qmat[1][1] })
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        Complex64::new(z.re - self.omega * z.im, self.lam * z.im)
    }
}

/// Slit-plane kernel for the process `Q^{1/2} B`.
pub fn anisotropic_kernel(map: &AnisotropicMap, z: Complex64, target: SlitPoint) -> Result<f64> {
    slit_plane_kernel(target, map.apply(z))
}

fn quad_opts() -> QuadOpts {
    QuadOpts { rel_tol: 1e-11, abs_tol: 1e-300, max_intervals: 20_000 }
}

/// `J_n(a, b) = int_0^inf sqrt(t) / (sqrt(t + 2 n_*) (t + a)(t + b)) dt`, via `t = u^2`.
pub fn j_integral(n_star: f64, a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Domain(format!("J needs a, b > 0, got {a}, {b}")));
    }
    let two_n = 2.0 * n_star;
    let f = |u: f64| {
        let t = u * u;
        2.0 * t / ((t + two_n).sqrt() * (t + a) * (t + b))
    };
    // split near the scales sqrt(a), sqrt(b) where the integrand turns over
    let knots = {
        let mut k = vec![0.0, a.sqrt().min(b.sqrt()), a.sqrt().max(b.sqrt())];
        k.dedup();
        k
    };
    let mut total = 0.0;
    for w in knots.windows(2) {
        if w[1] > w[0] {
            total += integrate(f, w[0], w[1], quad_opts())?.value;
        }
    }
    let last = *knots.last().unwrap();
    total += integrate_to_infinity(f, last, quad_opts())?.value;
    Ok(total)
}

/// Continuum analogue of `Q`: start `x > n_*` jumps over the segment to the
/// left half-line and comes back, first landing at `y > -n_*`.
pub fn q_continuum(n_star: f64, x: f64, y: f64) -> Result<f64> {
    if !(x > n_star && y > -n_star) {
        return Err(Error::Domain(format!("q needs x > n_* and y > -n_*, got x = {x}, y = {y}")));
    }
    let j = j_integral(n_star, x + n_star, y + n_star)?;
    Ok(((x - n_star) / (y + n_star)).sqrt() * j / (PI * PI))
}

/// `k_I(x, s) = h^-_{x - n_*}(s - n_*)` for `|s| < n_*`.
pub fn k_continuum(n_star: f64, x: f64, s: f64) -> Result<f64> {
    if s.abs() >= n_star {
        return Err(Error::Domain(format!("k_I needs |s| < n_*, got {s}")));
    }
    h_minus(x - n_star, s - n_star)
}

/// Both sides of the boundary-limit identity for the unit slit:
/// `1/(s-x)^2 + int_{|xi|>=1} (xi-x)^-2 h(xi, s) dxi` against
/// `(1 - x s) / ((s-x)^2 sqrt((1-x^2)(1-s^2)))`.
pub fn lemma_a1_check(x: f64, s: f64) -> Result<(f64, f64)> {
    if !(x.abs() < 1.0 && s.abs() < 1.0) {
        return Err(Error::Domain("boundary-limit check needs interior points of the unit slit".into()));
    }
    if x == s {
        return Err(Error::SingularArguments(format!("x = s = {x}")));
    }
    let root_s = ((1.0 - s) * (1.0 + s)).sqrt();
    // xi = ±(1 + u^2): sqrt(xi^2 - 1) = u sqrt(2 + u^2), d xi = 2u du
    let side = |sign: f64| {
        move |u: f64| {
            let t = u * u;
            let xi = sign * (1.0 + t);
            2.0 * t * (2.0 + t).sqrt() / ((xi - x).powi(2) * PI * (xi - s).abs() * root_s)
        }
    };
    let right = integrate(side(1.0), 0.0, 1.0, quad_opts())?.value
        + integrate_to_infinity(side(1.0), 1.0, quad_opts())?.value;
    let left = integrate(side(-1.0), 0.0, 1.0, quad_opts())?.value
        + integrate_to_infinity(side(-1.0), 1.0, quad_opts())?.value;
    let lhs = 1.0 / (s - x).powi(2) + right + left;
    let rhs = (1.0 - x * s) / ((s - x).powi(2) * ((1.0 - x * x) * (1.0 - s * s)).sqrt());
    Ok((lhs, rhs))
}

/// Both sides of `1/(1 - cos(a - b)) + 1/(1 - cos(a + b)) = 2 (1 - x s) / (x - s)^2`
/// with `x = cos a`, `s = cos b`.
pub fn angle_identity(theta_x: f64, theta_s: f64) -> (f64, f64) {
    // 1 - cos t = 2 sin^2(t/2)
    let (dm, dp) = (((theta_x - theta_s) / 2.0).sin(), ((theta_x + theta_s) / 2.0).sin());
    let lhs = 1.0 / (2.0 * dm * dm) + 1.0 / (2.0 * dp * dp);
    // x - s in product form; the plain difference of cosines cancels near x = s
    let diff = -2.0 * dp * dm;
    (lhs, 2.0 * (1.0 - theta_x.cos() * theta_s.cos()) / (diff * diff))
}

/// `int h(x, s) ds` over the segment, through `s = n_* sin(phi)`.
pub fn exterior_mass(n_star: f64, x: f64) -> Result<f64> {
    if x.abs() <= n_star {
        return Err(Error::Domain("exterior mass needs |x| > n_*".into()));
    }
    let c = (x * x - n_star * n_star).sqrt() / PI;
    Ok(integrate(|phi| c / (x - n_star * phi.sin()).abs(), -PI / 2.0, PI / 2.0, quad_opts())?.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn h_minus_values() {
        assert!(close(h_minus(1.0, -1.0).unwrap(), 1.0 / (2.0 * PI), 1e-15));
        assert!(close(h_minus(4.0, -1.0).unwrap(), 2.0 / (5.0 * PI), 1e-15));
        assert!(h_minus(-1.0, -1.0).is_err());
        assert!(h_minus(1.0, 0.0).is_err());
        assert!(close(h_plus(-4.0, 1.0).unwrap(), 2.0 / (5.0 * PI), 1e-15));
    }

    #[test]
    fn h_minus_total_mass() {
        // s = -u^2 removes the inverse square root at 0
        let f = |u: f64| 2.0 * u * h_minus(2.0, -u * u).unwrap();
        let m = integrate(f, 0.0, 1.0, QuadOpts::rel(1e-12)).unwrap().value
            + integrate_to_infinity(f, 1.0, QuadOpts::rel(1e-12)).unwrap().value;
        assert!(close(m, 1.0, 1e-10), "{m}");
    }

    #[test]
    fn exterior_values() {
        assert!(close(h_segment_exterior(0.5, 1.0, 0.0).unwrap(), 0.75f64.sqrt() / (PI * 0.5), 1e-15));
        assert!(close(h_segment_exterior(0.5, 2.0, 0.0).unwrap(), 3.75f64.sqrt() / PI, 1e-15));
        assert!(close(h_segment_exterior(0.5, 1.0, 0.0).unwrap(), 0.551_328_895_421_792, 1e-12));
        assert!(close(h_segment_exterior(0.5, 2.0, 0.0).unwrap(), 0.616_404_444_061_499_9, 1e-12));
        assert!(h_segment_exterior(0.5, 0.4, 0.0).is_err());
        assert!(h_segment_exterior(0.5, 1.0, 0.5).is_err());
    }

    #[test]
    fn exterior_normalized() {
        for &(ns, x) in &[(0.5, 0.6), (1.0, 1.01), (4.5, 20.0), (4.5, -5.0), (15.5, 16.0)] {
            assert!(close(exterior_mass(ns, x).unwrap(), 1.0, 1e-8));
        }
    }

    #[test]
    fn exterior_scaling() {
        for &c in &[2.0, 10.0] {
            for &(x, s) in &[(1.2, 0.3), (-3.0, -0.9), (5.0, 0.0)] {
                let base = h_segment_exterior(1.0, x, s).unwrap();
                let scaled = h_segment_exterior(c, c * x, c * s).unwrap();
                assert!(close(base / c, scaled, 1e-14 * base));
            }
        }
    }

    #[test]
    fn interior_values() {
        let v = h_segment_interior(1.0, 0.0, 0.5, InteriorNumerator::HalfInteger).unwrap();
        assert!(close(v * PI, 4.618_802_153_517_006, 1e-12));
        assert!(close(v, 1.470_210_387_791_445_6, 1e-12));
        let a = h_segment_interior(1.0, 0.3, -0.3, InteriorNumerator::HalfInteger).unwrap();
        let b = h_segment_interior(1.0, -0.3, 0.3, InteriorNumerator::HalfInteger).unwrap();
        assert_eq!(a, b);
        assert!(matches!(
            h_segment_interior(1.0, 0.2, 0.2, InteriorNumerator::HalfInteger),
            Err(Error::SingularArguments(_))
        ));
        // n_* = 3.5: integer numerator is n^2 - xs = 16 - xs
        let p = h_segment_interior(3.5, 1.0, -2.0, InteriorNumerator::Integer).unwrap();
        let h = h_segment_interior(3.5, 1.0, -2.0, InteriorNumerator::HalfInteger).unwrap();
        assert!(close(p / h, 18.0 / 14.25, 1e-14));
    }

    #[test]
    fn interior_local_singularity() {
        // (x - s)^2 h -> 1/pi as s -> x
        for &x in &[0.0, 0.2, -0.7] {
            let s = x + 1e-6;
            let v = h_segment_interior(1.0, x, s, InteriorNumerator::HalfInteger).unwrap();
            assert!(close(v * (x - s).powi(2) * PI, 1.0, 1e-5));
        }
    }

    #[test]
    fn joukowski_values() {
        let f2 = joukowski_inverse(Complex64::new(2.0, 0.0)).unwrap();
        assert!(close(f2.re, 2.0 + 3f64.sqrt(), 1e-14) && f2.im.abs() < 1e-15);
        let fm2 = joukowski_inverse(Complex64::new(-2.0, 0.0)).unwrap();
        assert!(close(fm2.norm(), 2.0 + 3f64.sqrt(), 1e-14));
        assert!(joukowski_inverse(Complex64::new(0.3, 0.0)).is_err());
        assert!(joukowski_inverse(Complex64::new(1.0, 0.0)).is_err());
        // branch: |f| > 1 on a sign-covering grid
        for i in -6..=6 {
            for j in -6..=6 {
                let z = Complex64::new(i as f64 * 0.37, j as f64 * 0.29);
                if on_slit(z) {
                    continue;
                }
                assert!(joukowski_inverse(z).unwrap().norm() > 1.0, "{z}");
            }
        }
    }

    #[test]
    fn boundary_values() {
        let w = boundary_f(0.5, Side::Above).unwrap();
        assert!(close(w.im, 0.866_025_403_784_438_6, 1e-15));
        assert!(close(w.arg(), PI / 3.0, 1e-15));
        let w = boundary_f(0.0, Side::Below).unwrap();
        assert!(close(w.re, 0.0, 0.0) && close(w.im, -1.0, 0.0));
        assert!(close(w.arg(), -PI / 2.0, 1e-15));
        assert!(boundary_f(1.0, Side::Above).is_err());
    }

    #[test]
    fn slit_kernel_golden() {
        let t = SlitPoint::boundary(0.0, Side::Above).unwrap();
        let v = slit_plane_kernel(t, Complex64::new(2.0, 0.0)).unwrap();
        let r = 2.0 + 3f64.sqrt();
        let hand = (r * r - 1.0) / (r * r + 1.0) / (2.0 * PI);
        assert!(close(v, hand, 1e-15));
        assert!(close(v, 0.137_832_223_855_448_2, 1e-12));
        assert!(close(2.0 * v, h_segment_exterior(1.0, 2.0, 0.0).unwrap(), 1e-14));
    }

    #[test]
    fn slit_kernel_total_mass() {
        let z = Complex64::new(1.5, 0.7);
        let f = |phi: f64| {
            let s = phi.sin();
            let ds = phi.cos();
            let up = slit_plane_kernel(SlitPoint::Boundary { s, side: Side::Above }, z).unwrap();
            let dn = slit_plane_kernel(SlitPoint::Boundary { s, side: Side::Below }, z).unwrap();
            (up + dn) * ds
        };
        let m = integrate(f, -PI / 2.0 + 1e-300, PI / 2.0 - 1e-16, QuadOpts::rel(1e-12)).unwrap().value;
        assert!(close(m, 1.0, 1e-8), "{m}");
    }

    #[test]
    fn anisotropic_identity_and_axis() {
        let id = AnisotropicMap::new([[1.0, 0.0], [0.0, 1.0]]).unwrap();
        let corr = AnisotropicMap::new([[1.0, 0.5], [0.5, 1.0]]).unwrap();
        let t = SlitPoint::boundary(0.3, Side::Below).unwrap();
        for &(x, y) in &[(0.2, 0.4), (-2.0, 1.0), (3.0, -0.5)] {
            let z = Complex64::new(x, y);
            assert_eq!(anisotropic_kernel(&id, z, t).unwrap(), slit_plane_kernel(t, z).unwrap());
        }
        let z = Complex64::new(2.5, 0.0);
        assert_eq!(anisotropic_kernel(&corr, z, t).unwrap(), slit_plane_kernel(t, z).unwrap());
        let zt = corr.apply(Complex64::new(0.0, 1.0));
        assert!(close(zt.re, -0.5, 1e-15) && close(zt.im, 0.75f64.sqrt(), 1e-15));
        assert!(AnisotropicMap::new([[1.0, 2.0], [2.0, 1.0]]).is_err());
    }

    #[test]
    fn q_matches_direct_integral() {
        let (ns, x, y) = (1.5, 4.0, 3.0);
        let q = q_continuum(ns, x, y).unwrap();
        // first form: integrate h^- h^+ over u < -n_*, with u = -n_* - t^2
        let f = |t: f64| {
            let u = -ns - t * t;
            2.0 * t * h_minus(x - ns, u - ns).unwrap() * h_plus(u + ns, y + ns).unwrap()
        };
        let direct = integrate(f, 0.0, 1.0, QuadOpts::rel(1e-12)).unwrap().value
            + integrate_to_infinity(f, 1.0, QuadOpts::rel(1e-12)).unwrap().value;
        assert!(close(q, direct, 1e-9 * q), "{q} {direct}");
        assert!(q_continuum(ns, 1.0, 3.0).is_err());
    }

    #[test]
    fn q_sub_probability() {
        let (ns, x) = (4.5, 9.0);
        let f = |y: f64| q_continuum(ns, x, y).unwrap();
        // y = -n_* + t^2 for the inverse square root at y = -n_*
        let g = |t: f64| 2.0 * t * f(-ns + t * t);
        let mass = integrate(g, 1e-12, 10.0, QuadOpts::rel(1e-9)).unwrap().value
            + integrate_to_infinity(g, 10.0, QuadOpts::rel(1e-9)).unwrap().value;
        assert!(mass > 0.0 && mass < 1.0, "{mass}");
    }

    #[test]
    fn boundary_limit_values() {
        let (lhs, rhs) = lemma_a1_check(0.0, 0.5).unwrap();
        assert!(close(rhs, 4.618_802_153_517_006, 1e-12));
        assert!(close(lhs, rhs, 1e-6), "{lhs} {rhs}");
        let (lhs, rhs) = lemma_a1_check(0.3, -0.3).unwrap();
        assert!(close(lhs, rhs, 1e-6));
        let a = lemma_a1_check(0.4, -0.1).unwrap();
        let b = lemma_a1_check(-0.4, 0.1).unwrap();
        assert!(close(a.0, b.0, 1e-9) && close(a.1, b.1, 1e-12));
    }

    #[test]
    fn segment_spec() {
        let s = SegmentSpec::new(3).unwrap();
        assert_eq!(s.n_star(), 2.5);
        assert_eq!(s.sites().collect::<Vec<_>>(), vec![-2, -1, 0, 1, 2]);
        assert_eq!(s.len(), 5);
        assert!(SegmentSpec::new(0).is_err());
    }
}
