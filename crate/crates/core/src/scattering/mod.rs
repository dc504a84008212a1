//! Zero-energy two-body scattering in hyperbolic space.
//!
//! The regular radial solution of `-μ Δf + ½ V f = 0` is integrated outward as
//! the pair `(f, p)` with `p = sinh^{d-1}(r) f'`, so that
//!
//! ```text
//! f' = p / sinh^{d-1}(r),    p' = sinh^{d-1}(r) V(r) f / (2μ).
//! ```
//!
//! Outside the support of `V` the flux `p` is constant and the solution is
//! `α + β F_d(r)` with `F_2(r) = ln tanh(r/2)` and `F_3(r) = -coth r`. The
//! scattering length is the zero of that exterior solution.

mod ode;
mod potential;
mod profile;

use serde::{Deserialize, Serialize};

use crate::error::{require_nonnegative, require_positive, Error, Result};
use crate::geometry::Dimension;

pub use potential::{Cell, Potential, PotentialKind, PotentialSpec};
pub use profile::RadialProfile;

use ode::Dopri5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct ScatteringParams {
    mu: f64,
    d: Dimension,
}

#[derive(Deserialize)]
struct RawParams {
    mu: f64,
    d: Dimension,
}

impl TryFrom<RawParams> for ScatteringParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        ScatteringParams::new(raw.d, raw.mu)
    }
}

impl ScatteringParams {
    pub fn new(d: Dimension, mu: f64) -> Result<Self> {
        require_positive("mu", mu)?;
        Ok(Self { mu, d })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn dimension(&self) -> Dimension {
        self.d
    }
}

/// Numerical settings of the radial solver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Absolute and relative local error tolerance of the integrator.
    pub tol: f64,
    /// Number of uniform cells of the output grid (breakpoints of `V` are added).
    pub cells: usize,
    /// Radius where the regular series start is handed to the integrator.
    pub r_start: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            cells: 4096,
            r_start: 1e-6,
        }
    }
}

impl SolverOptions {
    fn validate(&self) -> Result<()> {
        require_positive("tol", self.tol)?;
        require_positive("r_start", self.r_start)?;
        if self.cells < 2 {
            return Err(Error::InvalidParameter {
                name: "cells",
                value: self.cells as f64,
                reason: "output grid needs at least 2 cells",
            });
        }
        Ok(())
    }
}

/// The harmonic primitive `F_d` with `F_d' = 1 / sinh^{d-1}`.
pub fn harmonic_primitive(d: Dimension, r: f64) -> f64 {
    match d {
        Dimension::Two => (0.5 * r).tanh().ln(),
        Dimension::Three => -r.tanh().recip(),
    }
}

/// The exterior zero-energy solution vanishing at the scattering length `a`.
pub fn f_infinity(d: Dimension, a: f64, r: f64) -> Result<f64> {
    require_positive("a", a)?;
    require_positive("r", r)?;
    Ok(f_infinity_unchecked(d, a, r))
}

pub(crate) fn f_infinity_unchecked(d: Dimension, a: f64, r: f64) -> f64 {
    match d {
        Dimension::Two => ((0.5 * r).tanh() / (0.5 * a).tanh()).ln(),
        Dimension::Three => 1.0 - a.tanh() / r.tanh(),
    }
}

/// Radial derivative of [`f_infinity`].
pub fn f_infinity_derivative(d: Dimension, a: f64, r: f64) -> Result<f64> {
    require_positive("a", a)?;
    require_positive("r", r)?;
    Ok(match d {
        Dimension::Two => r.sinh().recip(),
        Dimension::Three => a.tanh() / (r.sinh() * r.sinh()),
    })
}

/// The flux constant `f_∞'(r) sinh^{d-1}(r)`: 1 in d = 2 and `tanh a` in d = 3.
pub fn c_d(d: Dimension, a: f64) -> Result<f64> {
    require_nonnegative("a", a)?;
    Ok(match d {
        Dimension::Two => 1.0,
        Dimension::Three => a.tanh(),
    })
}

/// Energy of the two-body minimizer on the ball of radius `radius`:
/// `μ C_d(a) vol(S^{d-1}) / f_∞(R)`.
pub fn scattering_energy(d: Dimension, a: f64, mu: f64, radius: f64) -> Result<f64> {
    require_nonnegative("a", a)?;
    require_positive("mu", mu)?;
    require_positive("R", radius)?;
    if a == 0.0 {
        return Ok(0.0);
    }
    if radius <= a {
        return Err(Error::InvalidParameter {
            name: "R",
            value: radius,
            reason: "outer radius must exceed the scattering length",
        });
    }
    Ok(mu * d.sphere_area() * c_d(d, a)? / f_infinity_unchecked(d, a, radius))
}

/// The d = 3 energy as printed with a factor `a` instead of `tanh a`; kept only
/// for reports. Returns `None` in d = 2 where no variant exists.
pub fn scattering_energy_printed_variant(d: Dimension, a: f64, mu: f64, radius: f64) -> Option<f64> {
    match d {
        Dimension::Two => None,
        Dimension::Three if a > 0.0 && radius > a => {
            Some(4.0 * std::f64::consts::PI * mu * a / f_infinity_unchecked(d, a, radius))
        }
        Dimension::Three => Some(0.0),
    }
}

/// Output grid on `[0, r_max]`: uniform cells plus every breakpoint of `V`.
fn output_grid(v: &Potential, r_max: f64, cells: usize) -> Vec<f64> {
    let h = r_max / cells as f64;
    let mut grid: Vec<f64> = (0..=cells).map(|i| i as f64 * h).collect();
    grid[cells] = r_max;
    let merge_tol = 1e-9 * h;
    for b in v.breakpoints() {
        if b < r_max {
            grid.retain(|&x| (x - b).abs() > merge_tol);
            grid.push(b);
        }
    }
    grid.sort_by(f64::total_cmp);
    grid
}

/// Raw, unnormalized integration result.
struct RawSolution {
    grid: Vec<f64>,
    values: Vec<f64>,
    /// `(f, p)` at the support radius.
    at_support: [f64; 2],
}

const RESCALE_LIMIT: f64 = 1e200;

fn integrate(v: &Potential, params: &ScatteringParams, r_max: f64, opts: &SolverOptions) -> Result<RawSolution> {
    opts.validate()?;
    let r0 = v.support_radius();
    if !(r_max.is_finite() && r_max > r0) {
        return Err(Error::InvalidParameter {
            name: "r_max",
            value: r_max,
            reason: "outer radius must exceed the support radius R0",
        });
    }
    let d = params.d;
    let grid = output_grid(v, r_max, opts.cells);
    let mut values = Vec::with_capacity(grid.len());
    let mut solver = Dopri5::new(opts.tol, opts.r_start.max(1e-3 * (grid[1] - grid[0])));

    // (radius, state) to start from, and the index of the first node still to fill
    let (mut r, mut y, first) = if v.is_hardcore() {
        let n_inside = grid.partition_point(|&x| x <= r0);
        values.resize(n_inside, 0.0);
        (r0, [0.0, 1.0], n_inside)
    } else {
        // regular series: f = 1 + c r^2 with 2 d c = V(0) / (2 μ)
        let c = v.value(0.0) / (4.0 * params.mu * d.get() as f64);
        let rs = opts.r_start.min(0.5 * grid[1]);
        values.push(1.0);
        let y0 = [1.0 + c * rs * rs, d.sinh_power(rs) * 2.0 * c * rs];
        (rs, y0, 1)
    };

    let mut at_support = if v.is_hardcore() { Some(y) } else { None };
    for &node in &grid[first..] {
        let mid = 0.5 * (r + node);
        let kappa = v.value(mid) / (2.0 * params.mu);
        let rhs = |s: f64, y: &[f64; 2]| {
            let w = d.sinh_power(s);
            [y[1] / w, w * kappa * y[0]]
        };
        y = solver.advance(rhs, r, y, node)?;
        r = node;
        values.push(y[0]);
        if at_support.is_none() && node >= r0 {
            at_support = Some(y);
        }
        if y[0].abs() > RESCALE_LIMIT {
            // linear ODE: rescaling the whole solution is harmless
            let s = RESCALE_LIMIT.recip();
            values.iter_mut().for_each(|x| *x *= s);
            y = [y[0] * s, y[1] * s];
            if let Some(a) = at_support.as_mut() {
                a[0] *= s;
                a[1] *= s;
            }
        }
    }
    let at_support = at_support.expect("grid always contains the support radius");
    Ok(RawSolution {
        grid,
        values,
        at_support,
    })
}

fn normalize(raw: RawSolution) -> Result<(RadialProfile, f64)> {
    let RawSolution { grid, mut values, .. } = raw;
    let norm = values[values.len() - 1];
    if !(norm.is_finite() && norm > 0.0) {
        return Err(Error::IntegrationFailure {
            r: grid[grid.len() - 1],
            reason: "solution does not stay positive",
        });
    }
    for x in values.iter_mut() {
        *x = (*x / norm).clamp(0.0, 1.0);
    }
    let last = values.len() - 1;
    values[last] = 1.0;
    Ok((RadialProfile::new(grid, values)?, norm))
}

/// Regular radial solution on `(0, r_max]`, normalized to `f(r_max) = 1`.
pub fn solve_zero_energy(v: &Potential, params: &ScatteringParams, r_max: f64) -> Result<RadialProfile> {
    solve_zero_energy_with(v, params, r_max, &SolverOptions::default())
}

pub fn solve_zero_energy_with(
    v: &Potential,
    params: &ScatteringParams,
    r_max: f64,
    opts: &SolverOptions,
) -> Result<RadialProfile> {
    Ok(normalize(integrate(v, params, r_max, opts)?)?.0)
}

/// The two-body minimizer normalized at `radius`; its exterior part equals
/// `f_∞(r) / f_∞(R)`.
pub fn minimizer_profile(v: &Potential, params: &ScatteringParams, radius: f64) -> Result<RadialProfile> {
    minimizer_profile_with(v, params, radius, &SolverOptions::default())
}

pub fn minimizer_profile_with(
    v: &Potential,
    params: &ScatteringParams,
    radius: f64,
    opts: &SolverOptions,
) -> Result<RadialProfile> {
    if !(radius > v.support_radius()) {
        return Err(Error::InvalidParameter {
            name: "R",
            value: radius,
            reason: "minimizer radius must exceed the support radius R0",
        });
    }
    solve_zero_energy_with(v, params, radius, opts)
}

/// Scattering length together with the data it was derived from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatteringSolution {
    pub a: f64,
    /// Exterior solution `α + β F_d(r)` of the profile normalized at its outer radius.
    pub alpha: f64,
    pub beta: f64,
    pub c_d: f64,
    pub profile: RadialProfile,
    pub params: ScatteringParams,
    pub potential: Potential,
}

impl ScatteringSolution {
    /// The matched exterior solution `α + β F_d(r)`.
    pub fn exterior(&self, r: f64) -> f64 {
        self.alpha + self.beta * harmonic_primitive(self.params.d, r)
    }
}

/// Scattering length with the profile normalized at `R0 + 1`.
pub fn scattering_length(v: &Potential, params: &ScatteringParams) -> Result<ScatteringSolution> {
    scattering_length_with(v, params, v.support_radius() + 1.0, &SolverOptions::default())
}

pub fn scattering_length_with(
    v: &Potential,
    params: &ScatteringParams,
    r_max: f64,
    opts: &SolverOptions,
) -> Result<ScatteringSolution> {
    let d = params.d;
    let r0 = v.support_radius();
    let raw = integrate(v, params, r_max, opts)?;
    let [f0, p0] = raw.at_support;
    let (profile, norm) = normalize(raw)?;
    let beta = p0 / norm;
    let alpha = f0 / norm - beta * harmonic_primitive(d, r0);

    let a = if v.is_hardcore() {
        r0
    } else if beta == 0.0 {
        0.0
    } else {
        match_scattering_length(d, alpha, beta)?
    };
    if !(a <= r0) {
        return Err(Error::MatchingFailure(format!(
            "scattering length {a} exceeds the support radius {r0}"
        )));
    }
    Ok(ScatteringSolution {
        a,
        alpha,
        beta,
        c_d: c_d(d, a)?,
        profile,
        params: *params,
        potential: v.clone(),
    })
}

/// Root of `α + β F_d(a) = 0`.
fn match_scattering_length(d: Dimension, alpha: f64, beta: f64) -> Result<f64> {
    if !(beta > 0.0) {
        return Err(Error::MatchingFailure(format!(
            "exterior flux β = {beta} must be positive"
        )));
    }
    match d {
        Dimension::Two => {
            // ln tanh(a/2) = -α/β
            if !(alpha > 0.0) {
                return Err(Error::MatchingFailure(format!(
                    "no root: α = {alpha} must be positive in d = 2"
                )));
            }
            Ok(2.0 * (-alpha / beta).exp().atanh())
        }
        Dimension::Three => {
            // coth a = α/β
            let t = beta / alpha;
            if !(t > 0.0 && t < 1.0) {
                return Err(Error::MatchingFailure(format!(
                    "no root: β/α = {t} must lie in (0, 1) in d = 3"
                )));
            }
            Ok(t.atanh())
        }
    }
}
