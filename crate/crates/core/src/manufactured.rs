//! Separated exact solutions `u(x, t) = k(x) l(t)`.
//!
//! With `l' = -l^(2 gamma + 1)` and forcing `f = -g(x) l^(2 gamma + 1)`, the
//! equation reduces to `k + (int k^2)^gamma Lap k = g`. Writing `w(x, alpha)`
//! for the solution of `w + alpha Lap w = g` with homogeneous boundary data,
//! `k = w(., alpha)` solves it as soon as `alpha = (int w(., alpha)^2)^gamma`,
//! a scalar fixed point solved here by bracketed root finding.

use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::mesh::Point;
use crate::quadrature::{integrate_adaptive, integrate_interval};

/// `l(t)` solving `l' = -l^(2 gamma + 1)`.
///
/// For `gamma > 0` this is `(2 gamma (t - C))^(-1 / (2 gamma))`, defined for
/// `t > C`. For `gamma < 0` it is `[2 |gamma| (C - t)]_+^(1 / (2 |gamma|))`,
/// which vanishes from `t = C` on.
pub fn l_of_t(gamma: f64, c: f64, t: f64) -> Result<f64> {
    if gamma == 0.0 {
        return Err(Error::GammaZero);
    }
    if gamma > 0.0 {
        let base = 2.0 * gamma * (t - c);
        if !(base > 0.0) {
            return Err(Error::OutsideTimeDomain { gamma, c, t });
        }
        Ok(base.powf(-1.0 / (2.0 * gamma)))
    } else {
        let base = 2.0 * gamma.abs() * (c - t);
        Ok(if base > 0.0 {
            base.powf(1.0 / (2.0 * gamma.abs()))
        } else {
            0.0
        })
    }
}

/// Variation-of-constants solution of `w + alpha w'' = g` on `[0, x]`:
///
/// ```text
/// w(x) = (C1 + 1/sqrt(alpha) int_0^x g(s) cos(s/sqrt(alpha)) ds) sin(x/sqrt(alpha))
///      + (C2 - 1/sqrt(alpha) int_0^x g(s) sin(s/sqrt(alpha)) ds) cos(x/sqrt(alpha))
/// ```
pub fn w_profile_1d(g: &dyn Fn(f64) -> f64, alpha: f64, c1: f64, c2: f64, x: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::NonpositiveAlpha(alpha));
    }
    let r = alpha.sqrt();
    let ic = integrate_adaptive(&|s| g(s) * (s / r).cos(), 0.0, x, 1e-15);
    let is = integrate_adaptive(&|s| g(s) * (s / r).sin(), 0.0, x, 1e-15);
    Ok((c1 + ic / r) * (x / r).sin() + (c2 - is / r) * (x / r).cos())
}

/// Separated solution `X(x) Y(y)` of `w + alpha Lap w = 0` vanishing on the
/// edges `x = 0` and `y = 0`.
pub fn w_profile_2d(a2: f64, b2: f64, lambda: f64, alpha: f64, x: f64, y: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::NonpositiveAlpha(alpha));
    }
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::LambdaOutOfRange(lambda));
    }
    Ok(a2 * ((lambda / alpha).sqrt() * x).sin() * b2 * (((1.0 - lambda) / alpha).sqrt() * y).sin())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseId {
    Example1,
    Example2,
    Example3,
}

impl CaseId {
    pub const ALL: [CaseId; 3] = [CaseId::Example1, CaseId::Example2, CaseId::Example3];

    pub fn as_str(self) -> &'static str {
        match self {
            CaseId::Example1 => "example1",
            CaseId::Example2 => "example2",
            CaseId::Example3 => "example3",
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CaseId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "example1" => Ok(CaseId::Example1),
            "example2" => Ok(CaseId::Example2),
            "example3" => Ok(CaseId::Example3),
            other => Err(Error::Config(format!(
                "unknown case `{other}`, expected example1, example2 or example3"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaSolveConfig {
    pub bracket: (f64, f64),
    /// Bound on `|alpha - G(alpha)|`.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Composite Gauss-Legendre layout for `int w^2`.
    pub panels: usize,
    pub points: usize,
}

impl AlphaSolveConfig {
    pub fn for_case(id: CaseId) -> Self {
        let bracket = match id {
            CaseId::Example1 => (0.1, 0.3),
            CaseId::Example2 => (0.1, 0.12),
            // the 2D map is only defined below 1 / pi^2
            CaseId::Example3 => (0.045, 0.055),
        };
        Self {
            bracket,
            tolerance: 1e-14,
            max_iterations: 200,
            panels: 8,
            points: 16,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.bracket;
        if !(lo > 0.0) {
            return Err(Error::NonpositiveAlpha(lo));
        }
        if !(hi > lo) {
            return Err(Error::Config(format!("empty bracket [{lo}, {hi}]")));
        }
        if !(self.tolerance > 0.0) || self.panels == 0 || self.points == 0 || self.max_iterations == 0 {
            return Err(Error::Config(
                "alpha solver needs positive tolerance, panels, points and iterations".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaSolution {
    pub alpha: f64,
    /// `|alpha - G(alpha)|` at the returned root.
    pub residual: f64,
    pub iterations: usize,
}

/// Finds `alpha` with `alpha = G(alpha)` inside the configured bracket.
///
/// Secant steps on `alpha - G(alpha)` are taken while they stay inside the
/// current bracket and halve it at least every second step; otherwise the
/// bracket is bisected.
pub fn solve_alpha(map: &dyn Fn(f64) -> f64, config: &AlphaSolveConfig) -> Result<AlphaSolution> {
    config.validate()?;
    let residual = |a: f64| a - map(a);
    let (mut lo, mut hi) = config.bracket;
    let mut f_lo = residual(lo);
    let f_hi = residual(hi);
    for (a, fa) in [(lo, f_lo), (hi, f_hi)] {
        if fa.abs() <= config.tolerance {
            return Ok(AlphaSolution {
                alpha: a,
                residual: fa.abs(),
                iterations: 0,
            });
        }
    }
    if !(f_lo * f_hi < 0.0) {
        return Err(Error::NoSignChange { lo, hi });
    }
    let (mut x0, mut f0, mut x1, mut f1) = (lo, f_lo, hi, f_hi);
    let mut width_checkpoint = hi - lo;
    let mut force_bisect = false;
    for iteration in 1..=config.max_iterations {
        let secant = if f1 != f0 {
            x1 - f1 * (x1 - x0) / (f1 - f0)
        } else {
            f64::NAN
        };
        let x = if !force_bisect && secant > lo && secant < hi {
            secant
        } else {
            0.5 * (lo + hi)
        };
        let fx = residual(x);
        if !fx.is_finite() {
            return Err(Error::NoSignChange { lo, hi });
        }
        if fx.abs() <= config.tolerance {
            return Ok(AlphaSolution {
                alpha: x,
                residual: fx.abs(),
                iterations: iteration,
            });
        }
        if (fx < 0.0) == (f_lo < 0.0) {
            lo = x;
            f_lo = fx;
        } else {
            hi = x;
        }
        if hi - lo <= 4.0 * f64::EPSILON * x.abs() {
            // bracket exhausted at machine precision
            return Ok(AlphaSolution {
                alpha: x,
                residual: fx.abs(),
                iterations: iteration,
            });
        }
        (x0, f0, x1, f1) = (x1, f1, x, fx);
        if iteration % 2 == 0 {
            force_bisect = hi - lo > 0.5 * width_checkpoint;
            width_checkpoint = hi - lo;
        } else {
            force_bisect = false;
        }
    }
    Err(Error::RootNoConvergence(config.max_iterations))
}

const SQRT_3_2: f64 = 1.224_744_871_391_589;

fn example1_c1(alpha: f64) -> f64 {
    let r = alpha.sqrt();
    (1.0 - 2.0 * alpha + 2.0 * alpha * (1.0 / r).cos()) / (1.0 / r).sin()
}

fn example1_w(alpha: f64, c1: f64, x: f64) -> f64 {
    let r = alpha.sqrt();
    c1 * (x / r).sin() - 2.0 * alpha * (x / r).cos() - x * x + 2.0 * alpha
}

fn example2_c1(alpha: f64) -> f64 {
    let r = alpha.sqrt();
    (E - r * (1.0 / r).sin() - (1.0 / r).cos()) / ((alpha + 1.0) * (2.0f64 / 3.0).sqrt() * (1.0 / r).sin())
}

fn example2_w(alpha: f64, c1: f64, x: f64) -> f64 {
    let r = alpha.sqrt();
    let p = SQRT_3_2 / (alpha + 1.0);
    (c1 + r * p) * (x / r).sin() + p * (x / r).cos() - p * x.exp()
}

fn example3_amplitude() -> f64 {
    (8.0 / (PI * PI)).powf(0.25)
}

/// The map `G(alpha) = (int w(., alpha)^2)^gamma` of one shipped case.
///
/// Example 3 keeps the amplitude `(8 / pi^2)^(1/4)` and the `x` frequency
/// `pi` fixed and lets the `y` frequency `sqrt((1 - pi^2 alpha) / alpha)`
/// follow `alpha`; the result is NaN for `alpha >= 1 / pi^2`.
pub fn fixed_point_map(id: CaseId, alpha: f64, config: &AlphaSolveConfig) -> f64 {
    let integrate = |f: &dyn Fn(f64) -> f64| integrate_interval(f, 0.0, 1.0, config.panels, config.points);
    match id {
        CaseId::Example1 => {
            let c1 = example1_c1(alpha);
            integrate(&|x| example1_w(alpha, c1, x).powi(2)).powf(0.5)
        }
        CaseId::Example2 => {
            let c1 = example2_c1(alpha);
            integrate(&|x| example2_w(alpha, c1, x).powi(2)).powf(-1.0 / 3.0)
        }
        CaseId::Example3 => {
            let omega = ((1.0 - PI * PI * alpha) / alpha).sqrt();
            let amp = example3_amplitude();
            let ix = integrate(&|x| (PI * x).sin().powi(2));
            let iy = integrate(&|y| (omega * y).sin().powi(2));
            (amp * amp * ix * iy).powi(2)
        }
    }
}

/// Solves the fixed point of a shipped case with its default bracket.
pub fn solve_case_alpha(id: CaseId) -> Result<AlphaSolution> {
    let config = AlphaSolveConfig::for_case(id);
    solve_alpha(&|a| fixed_point_map(id, a, &config), &config)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Profile {
    /// `C1 sin(x/r) - 2 alpha cos(x/r) - x^2 + 2 alpha`, from `g = -x^2`.
    Quadratic { c1: f64 },
    /// From `g = -sqrt(3/2) e^x`.
    Exponential { c1: f64 },
    /// `C3 sin(pi x) sin(pi y)`.
    SineProduct { amplitude: f64 },
}

/// One of the three shipped exact solutions, with every constant resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct ManufacturedCase {
    pub id: CaseId,
    pub gamma: f64,
    /// Time shift `C` of `l(t)`.
    pub c: f64,
    pub alpha: f64,
    pub dim: usize,
    /// `|alpha - G(alpha)|` reached by the root finder.
    pub alpha_residual: f64,
    profile: Profile,
    pub notes: &'static str,
}

/// Builds a shipped case, solving its fixed point on the way.
pub fn make_case(id: CaseId) -> Result<ManufacturedCase> {
    let solved = solve_case_alpha(id)?;
    let alpha = solved.alpha;
    let (gamma, c, dim, profile, notes) = match id {
        CaseId::Example1 => (
            0.5,
            -1.0,
            1,
            Profile::Quadratic { c1: example1_c1(alpha) },
            "gamma = 1/2 (the coefficient (int u^2)^(1/2) and l(t) = 1/(t+1) both require it); f = x^2/(t+1)^2",
        ),
        CaseId::Example2 => (
            -1.0 / 3.0,
            1.0,
            1,
            Profile::Exponential { c1: example2_c1(alpha) },
            "gamma = -1/3, C = 1: extinction at t = 1; f = e^x sqrt([1-t]_+)",
        ),
        CaseId::Example3 => (
            2.0,
            -0.25,
            2,
            Profile::SineProduct {
                amplitude: example3_amplitude(),
            },
            "gamma = 2, C = -1/4, f = 0; profile sin(pi x) sin(pi y) (the y factor must vanish at y = 0)",
        ),
    };
    Ok(ManufacturedCase {
        id,
        gamma,
        c,
        alpha,
        dim,
        alpha_residual: solved.residual,
        profile,
        notes,
    })
}

impl ManufacturedCase {
    pub fn is_on_boundary(&self, p: Point) -> bool {
        let out = |v: f64| v <= 0.0 || v >= 1.0;
        out(p[0]) || (self.dim == 2 && out(p[1]))
    }

    /// Closed-form spatial profile `k(x) = w(x, alpha)`, without any boundary
    /// handling.
    pub fn profile(&self, p: Point) -> f64 {
        let x = p[0];
        match self.profile {
            Profile::Quadratic { c1 } => example1_w(self.alpha, c1, x),
            Profile::Exponential { c1 } => example2_w(self.alpha, c1, x),
            Profile::SineProduct { amplitude } => amplitude * (PI * x).sin() * (PI * p[1]).sin(),
        }
    }

    /// `g` in `k + alpha Lap k = g`.
    pub fn g(&self, p: Point) -> f64 {
        match self.profile {
            Profile::Quadratic { .. } => -p[0] * p[0],
            Profile::Exponential { .. } => -SQRT_3_2 * p[0].exp(),
            Profile::SineProduct { .. } => 0.0,
        }
    }

    /// `k`-amplitudes `(C1, C2)` of the 1D profile, or `(A2 B2, lambda)` in 2D.
    pub fn constants(&self) -> (f64, f64) {
        match self.profile {
            Profile::Quadratic { c1 } | Profile::Exponential { c1 } => (c1, 0.0),
            Profile::SineProduct { amplitude } => (amplitude, PI * PI * self.alpha),
        }
    }

    pub fn l(&self, t: f64) -> f64 {
        l_of_t(self.gamma, self.c, t).unwrap_or(f64::NAN)
    }

    /// Closed form `k(x) l(t)`, without boundary handling.
    pub fn u_closed_form(&self, p: Point, t: f64) -> f64 {
        self.profile(p) * self.l(t)
    }

    /// Exact solution, with the homogeneous Dirichlet trace on the boundary.
    pub fn u(&self, p: Point, t: f64) -> f64 {
        if self.is_on_boundary(p) {
            0.0
        } else {
            self.u_closed_form(p, t)
        }
    }

    pub fn u0(&self, p: Point) -> f64 {
        self.u(p, 0.0)
    }

    /// `f = -g(x) l(t)^(2 gamma + 1)`.
    pub fn f(&self, p: Point, t: f64) -> f64 {
        let g = self.g(p);
        if g == 0.0 {
            return 0.0;
        }
        -g * self.l(t).powf(2.0 * self.gamma + 1.0)
    }

    pub fn has_forcing(&self) -> bool {
        !matches!(self.profile, Profile::SineProduct { .. })
    }

    /// Time from which the solution vanishes identically, if any.
    pub fn extinction_time(&self) -> Option<f64> {
        (self.gamma < 0.0 && self.c > 0.0).then_some(self.c)
    }

    /// Final time of the reference experiment for this case.
    pub fn default_t_end(&self) -> f64 {
        match self.id {
            CaseId::Example1 => 10.0,
            CaseId::Example2 => 2.0,
            CaseId::Example3 => 1.0,
        }
    }

    /// `int_Omega u(., t)^2` by tensor Gauss-Legendre quadrature.
    pub fn energy(&self, t: f64) -> f64 {
        let l = self.l(t);
        integrate_domain(self.dim, &|p| self.profile(p).powi(2)) * l * l
    }

    /// `(int u(., t)^2)^gamma`, or `None` after extinction.
    pub fn coefficient(&self, t: f64) -> Option<f64> {
        let s = self.energy(t);
        (s > 0.0).then(|| s.powf(self.gamma))
    }
}

fn integrate_domain(dim: usize, f: &dyn Fn(Point) -> f64) -> f64 {
    if dim == 1 {
        integrate_interval(|x| f([x, 0.0]), 0.0, 1.0, 8, 16)
    } else {
        integrate_interval(|y| integrate_interval(|x| f([x, y]), 0.0, 1.0, 8, 16), 0.0, 1.0, 8, 16)
    }
}

/// Residuals of a shipped case against the strong form and the fixed point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualReport {
    /// `max |u_t - a(u) Lap u - f|` over the sample grid.
    pub max_pde_residual: f64,
    /// `|alpha - G(alpha)|`.
    pub fixed_point_residual: f64,
    /// `max |a(u(., t)) - alpha l(t)^(2 gamma)|` over the sampled times.
    pub max_coefficient_mismatch: f64,
    /// `max |u|` at boundary sample points.
    pub max_boundary_trace: f64,
    /// Same, for the unclipped closed form.
    pub max_closed_form_boundary_trace: f64,
    /// `int u_0`.
    pub initial_mass: f64,
    pub samples: usize,
}

impl ResidualReport {
    pub fn passes(&self, pde_tol: f64, fixed_point_tol: f64) -> bool {
        self.max_pde_residual <= pde_tol
            && self.fixed_point_residual <= fixed_point_tol
            && self.max_boundary_trace == 0.0
            && self.initial_mass > 0.0
    }
}

/// Sixth-order central difference for a first derivative.
fn d1(f: &dyn Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x - 3.0 * h) + 9.0 * f(x - 2.0 * h) - 45.0 * f(x - h) + 45.0 * f(x + h) - 9.0 * f(x + 2.0 * h) + f(x + 3.0 * h))
        / (60.0 * h)
}

/// Sixth-order central difference for a second derivative.
fn d2(f: &dyn Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (2.0 * f(x - 3.0 * h) - 27.0 * f(x - 2.0 * h) + 270.0 * f(x - h) - 490.0 * f(x) + 270.0 * f(x + h)
        - 27.0 * f(x + 2.0 * h)
        + 2.0 * f(x + 3.0 * h))
        / (180.0 * h * h)
}

/// Samples the strong-form residual `u_t - (int u^2)^gamma Lap u - f` with
/// finite-difference derivatives and a quadrature-evaluated coefficient.
///
/// 1D cases use a 50 x 50 `(x, t)` grid, the 2D case 20 x 20 x 10. The time
/// range is the reference horizon, stopped short of any extinction time.
pub fn verify_case(case: &ManufacturedCase) -> ResidualReport {
    let (n_space, n_time) = if case.dim == 1 { (50, 50) } else { (20, 10) };
    let horizon = match case.extinction_time() {
        Some(te) => 0.98 * te,
        None => case.default_t_end(),
    };
    let hx = 1e-2;
    let ht = 1e-3;
    let mut max_pde: f64 = 0.0;
    let mut max_coeff: f64 = 0.0;
    let mut samples = 0;
    let space_points: Vec<Point> = if case.dim == 1 {
        (1..=n_space).map(|i| [i as f64 / (n_space + 1) as f64, 0.0]).collect()
    } else {
        (1..=n_space)
            .flat_map(|j| {
                (1..=n_space).map(move |i| [i as f64 / (n_space + 1) as f64, j as f64 / (n_space + 1) as f64])
            })
            .collect()
    };
    for jt in 0..n_time {
        let t = horizon * jt as f64 / (n_time - 1) as f64;
        let a = case.energy(t).powf(case.gamma);
        max_coeff = max_coeff.max((a - case.alpha * case.l(t).powf(2.0 * case.gamma)).abs());
        for &p in &space_points {
            let u_t = d1(&|s| case.u_closed_form(p, s), t, ht);
            let mut lap = d2(&|x| case.u_closed_form([x, p[1]], t), p[0], hx);
            if case.dim == 2 {
                lap += d2(&|y| case.u_closed_form([p[0], y], t), p[1], hx);
            }
            max_pde = max_pde.max((u_t - a * lap - case.f(p, t)).abs());
            samples += 1;
        }
    }

    let boundary_points: Vec<Point> = if case.dim == 1 {
        vec![[0.0, 0.0], [1.0, 0.0]]
    } else {
        (0..=20)
            .flat_map(|i| {
                let s = i as f64 / 20.0;
                [[s, 0.0], [s, 1.0], [0.0, s], [1.0, s]]
            })
            .collect()
    };
    let mut max_trace: f64 = 0.0;
    let mut max_raw: f64 = 0.0;
    for jt in 0..n_time {
        let t = case.default_t_end() * jt as f64 / (n_time - 1) as f64;
        for &p in &boundary_points {
            max_trace = max_trace.max(case.u(p, t).abs());
            max_raw = max_raw.max(case.u_closed_form(p, t).abs());
        }
    }

    let config = AlphaSolveConfig::for_case(case.id);
    ResidualReport {
        max_pde_residual: max_pde,
        fixed_point_residual: (case.alpha - fixed_point_map(case.id, case.alpha, &config)).abs(),
        max_coefficient_mismatch: max_coeff,
        max_boundary_trace: max_trace,
        max_closed_form_boundary_trace: max_raw,
        initial_mass: integrate_domain(case.dim, &|p| case.u0(p)),
        samples,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l_of_t_values() {
        assert_eq!(l_of_t(0.5, -1.0, 0.0).unwrap(), 1.0);
        assert!((l_of_t(0.5, -1.0, 3.0).unwrap() - 0.25).abs() < 1e-15);
        assert_eq!(l_of_t(-1.0 / 3.0, 1.0, 1.0).unwrap(), 0.0);
        assert_eq!(l_of_t(-1.0 / 3.0, 1.0, 1.7).unwrap(), 0.0);
        assert!((l_of_t(-1.0 / 3.0, 1.0, 0.0).unwrap() - (2.0f64 / 3.0).powf(1.5)).abs() < 1e-15);
        assert_eq!(l_of_t(2.0, -0.25, 0.0).unwrap(), 1.0);
        assert!(matches!(l_of_t(0.0, 1.0, 0.0), Err(Error::GammaZero)));
        assert!(matches!(l_of_t(0.5, 1.0, 0.5), Err(Error::OutsideTimeDomain { .. })));
    }

    #[test]
    fn homogeneous_profile_is_a_sine() {
        let alpha = 0.3;
        for x in [0.0, 0.2, 0.9] {
            let w = w_profile_1d(&|_| 0.0, alpha, 1.0, 0.0, x).unwrap();
            assert!((w - (x / alpha.sqrt()).sin()).abs() < 1e-15);
        }
        assert!(matches!(
            w_profile_1d(&|_| 0.0, 0.0, 1.0, 0.0, 0.5),
            Err(Error::NonpositiveAlpha(_))
        ));
    }

    #[test]
    fn quadratic_forcing_matches_closed_form() {
        let (alpha, c1, c2) = (0.2236, 0.7, 0.3);
        let r = f64::sqrt(alpha);
        for i in 0..=10 {
            let x = i as f64 / 10.0;
            let w = w_profile_1d(&|s| -s * s, alpha, c1, c2, x).unwrap();
            let closed = c1 * (x / r).sin() + (c2 - 2.0 * alpha) * (x / r).cos() - x * x + 2.0 * alpha;
            assert!((w - closed).abs() < 1e-13, "x = {x}: {w} vs {closed}");
        }
    }

    #[test]
    fn profile_2d_checks() {
        let alpha = 1.0 / (2.0 * PI * PI);
        let lambda = PI * PI * alpha;
        let w = w_profile_2d(1.0, 1.0, lambda, alpha, 0.5, 0.5).unwrap();
        assert!((w - 1.0).abs() < 1e-14);
        assert_eq!(w_profile_2d(1.0, 1.0, lambda, alpha, 0.0, 0.3).unwrap(), 0.0);
        assert!(matches!(
            w_profile_2d(1.0, 1.0, 1.0, alpha, 0.1, 0.1),
            Err(Error::LambdaOutOfRange(_))
        ));
        assert!(matches!(
            w_profile_2d(1.0, 1.0, 0.5, -1.0, 0.1, 0.1),
            Err(Error::NonpositiveAlpha(_))
        ));
    }

    #[test]
    fn alpha_solver_errors() {
        let cfg = AlphaSolveConfig {
            bracket: (0.5, 0.6),
            ..AlphaSolveConfig::for_case(CaseId::Example1)
        };
        assert!(matches!(solve_alpha(&|a| a * a, &cfg), Err(Error::NoSignChange { .. })));
        let cfg = AlphaSolveConfig {
            bracket: (-1.0, 0.6),
            ..cfg
        };
        assert!(matches!(solve_alpha(&|a| a, &cfg), Err(Error::NonpositiveAlpha(_))));
        let cfg = AlphaSolveConfig {
            bracket: (0.1, 3.0),
            max_iterations: 2,
            ..cfg
        };
        assert!(matches!(
            solve_alpha(&|a| a.cos(), &cfg),
            Err(Error::RootNoConvergence(2))
        ));
    }

    #[test]
    fn alpha_solver_on_a_known_root() {
        let cfg = AlphaSolveConfig {
            bracket: (0.1, 1.0),
            ..AlphaSolveConfig::for_case(CaseId::Example1)
        };
        let s = solve_alpha(&|a| a.cos(), &cfg).unwrap();
        assert!((s.alpha - 0.739_085_133_215_160_6).abs() < 1e-14);
    }

    #[test]
    fn case_ids_round_trip() {
        for id in CaseId::ALL {
            assert_eq!(id.as_str().parse::<CaseId>().unwrap(), id);
        }
        assert!("example4".parse::<CaseId>().is_err());
    }
}
