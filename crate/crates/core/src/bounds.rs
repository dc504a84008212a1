//! Energy upper bounds and condensate-fraction lower bounds.
//!
//! The chain is: scattering length `a` → diluteness `Y` → per-particle energy
//! bound → `1 - (E/N) / Ξ`. The integrals `I`, `J`, `K` of a trial profile
//! feed the general trial-state estimate; `i_bound` and `k_bound` are their
//! closed-form majorants for the two-body minimizer.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{require_nonnegative, require_positive, Error, Result};
use crate::geometry::Dimension;
use crate::scattering::{f_infinity_unchecked, Potential, RadialProfile};

/// Minimum number of Simpson panels used by [`quad_integrals`].
pub const MIN_QUAD_CELLS: usize = 4096;

/// Diluteness parameter: `ρ tanh a` in d = 3 and `ρ / ln(1 / tanh(a/2))` in d = 2.
pub fn diluteness_y(d: Dimension, rho: f64, a: f64) -> Result<f64> {
    require_positive("rho", rho)?;
    require_nonnegative("a", a)?;
    if a == 0.0 {
        return Ok(0.0);
    }
    Ok(match d {
        Dimension::Two => rho / (-(0.5 * a).tanh().ln()),
        Dimension::Three => rho * a.tanh(),
    })
}

/// The d = 2 diluteness with a product instead of a quotient. Reported next to
/// [`diluteness_y`] for auditing; `None` in d = 3 where both forms agree.
pub fn diluteness_y_printed_variant(d: Dimension, rho: f64, a: f64) -> Option<f64> {
    match d {
        Dimension::Two if a > 0.0 => Some(rho * (-(0.5 * a).tanh().ln())),
        Dimension::Two | Dimension::Three => None,
    }
}

/// `e^{2 R0}` in d = 3 and 1 in d = 2: the factor the simplified bound carries.
fn growth_factor(d: Dimension, r0: f64) -> f64 {
    match d {
        Dimension::Two => 1.0,
        Dimension::Three => (2.0 * r0).exp(),
    }
}

/// Largest `Y` for which the simplified energy bound is proven.
pub fn y_cap(d: Dimension, r0: f64) -> Result<f64> {
    require_positive("R0", r0)?;
    let s = (r0 + 1.0) * (r0 + 1.0);
    Ok(match d {
        Dimension::Two => (8.0 * PI * s).recip(),
        Dimension::Three => (8.0 * (2.0 * r0).exp() * s).recip(),
    })
}

/// Coefficients `(A, B)` of the simplified bound `A Y (1 + B Y)`.
pub fn simplified_coefficients(d: Dimension, mu: f64, r0: f64) -> (f64, f64) {
    let g = growth_factor(d, r0);
    (16.0 * PI * mu * g, 8.0 * PI * g / 3.0)
}

/// Both branches of the threshold `Y0(ε)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Y0Threshold {
    /// Positive root of `A Y (1 + B Y) = ε`.
    pub eps_branch: f64,
    pub cap: f64,
}

impl Y0Threshold {
    pub fn value(&self) -> f64 {
        self.eps_branch.min(self.cap)
    }

    pub fn eps_branch_active(&self) -> bool {
        self.eps_branch <= self.cap
    }
}

pub fn y0_branches(d: Dimension, eps: f64, mu: f64, r0: f64) -> Result<Y0Threshold> {
    require_positive("eps", eps)?;
    require_positive("mu", mu)?;
    let cap = y_cap(d, r0)?;
    // sqrt(1 + x) - 1 without cancellation for small x
    let x = 2.0 * eps / (3.0 * mu);
    let root = x / ((1.0 + x).sqrt() + 1.0);
    let eps_branch = 3.0 * root / (16.0 * PI * growth_factor(d, r0));
    Ok(Y0Threshold { eps_branch, cap })
}

/// Threshold `Y0(ε)` below which the simplified energy bound is at most `ε`.
pub fn y0_threshold(d: Dimension, eps: f64, mu: f64, r0: f64) -> Result<f64> {
    Ok(y0_branches(d, eps, mu, r0)?.value())
}

/// The integrals `I`, `J`, `K` of a radial trial profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralTriple {
    pub i: f64,
    pub j: f64,
    pub k: f64,
}

impl IntegralTriple {
    pub fn new(i: f64, j: f64, k: f64) -> Result<Self> {
        require_nonnegative("I", i)?;
        require_nonnegative("J", j)?;
        require_nonnegative("K", k)?;
        Ok(Self { i, j, k })
    }
}

/// Quadrature of `I = ∫(1 - f²)`, `J = ∫(μ f'² + ½ V f²)` and `K = ∫ f f'` over
/// `H^d` for a profile extended by 1 beyond its outer radius.
///
/// The profile is taken piecewise linear, so `f'` is constant on each cell.
/// Cells are split at the breakpoints of `V` and refined until at least
/// [`MIN_QUAD_CELLS`] Simpson panels are used.
pub fn quad_integrals(profile: &RadialProfile, v: &Potential, mu: f64, d: Dimension) -> Result<IntegralTriple> {
    require_positive("mu", mu)?;
    let r0 = v.support_radius();
    let outer = profile.outer_radius();
    if outer < r0 {
        return Err(Error::InvalidProfile(format!(
            "profile ends at {outer}, inside the potential support {r0}"
        )));
    }
    if v.is_hardcore() && profile.iter().any(|(r, f)| r < r0 && f != 0.0) {
        return Err(Error::InvalidProfile(
            "profile must vanish inside the hardcore".to_string(),
        ));
    }
    let grid = profile.grid();
    let values = profile.values();
    let cells = grid.len() - 1;
    let refine = MIN_QUAD_CELLS.div_ceil(cells).max(1);
    let breaks = v.breakpoints();
    let area = d.sphere_area();

    let (mut i_sum, mut j_sum, mut k_sum) = (0.0, 0.0, 0.0);
    let mut points = Vec::with_capacity(refine + 4);
    for c in 0..cells {
        let (r_lo, r_hi) = (grid[c], grid[c + 1]);
        let (f_lo, f_hi) = (values[c], values[c + 1]);
        let slope = (f_hi - f_lo) / (r_hi - r_lo);
        let f_at = |r: f64| f_lo + slope * (r - r_lo);

        points.clear();
        points.extend((0..=refine).map(|s| r_lo + (r_hi - r_lo) * s as f64 / refine as f64));
        points[refine] = r_hi;
        points.extend(breaks.iter().copied().filter(|&b| b > r_lo && b < r_hi));
        points.sort_by(f64::total_cmp);

        for w in points.windows(2) {
            let (a, b) = (w[0], w[1]);
            let h = b - a;
            if h <= 0.0 {
                continue;
            }
            let m = 0.5 * (a + b);
            // V is constant on the panel; hardcore contributes nothing since f = 0 there
            let pot = if v.is_hardcore() { 0.0 } else { 0.5 * v.value(m) };
            let simpson = |g: &dyn Fn(f64) -> f64| h / 6.0 * (g(a) + 4.0 * g(m) + g(b));
            let wt = |r: f64| area * d.sinh_power(r);
            i_sum += simpson(&|r| (1.0 - f_at(r).powi(2)) * wt(r));
            j_sum += simpson(&|r| (mu * slope * slope + pot * f_at(r).powi(2)) * wt(r));
            k_sum += simpson(&|r| f_at(r) * slope * wt(r));
        }
    }
    IntegralTriple::new(i_sum.max(0.0), j_sum, k_sum)
}

fn require_radius_above_a(a: f64, radius: f64) -> Result<()> {
    require_positive("a", a)?;
    if !(radius > a) || !radius.is_finite() {
        return Err(Error::InvalidParameter {
            name: "R",
            value: radius,
            reason: "outer radius must exceed the scattering length",
        });
    }
    Ok(())
}

/// `C_d(a) vol(S^{d-1}) / f_∞(R)`, the common factor of the minimizer estimates.
fn flux_over_f_infinity(d: Dimension, a: f64, radius: f64) -> f64 {
    let c = match d {
        Dimension::Two => 1.0,
        Dimension::Three => a.tanh(),
    };
    c * d.sphere_area() / f_infinity_unchecked(d, a, radius)
}

/// Closed-form majorant of `I(f_R)`: `C_d(a) vol(S^{d-1}) (R² - a²) / f_∞(R)`.
pub fn i_bound(d: Dimension, a: f64, radius: f64) -> Result<f64> {
    require_radius_above_a(a, radius)?;
    Ok(flux_over_f_infinity(d, a, radius) * (radius * radius - a * a))
}

/// Closed-form majorant of `K(f_R)`: `R C_d(a) vol(S^{d-1}) / f_∞(R)`.
pub fn k_bound(d: Dimension, a: f64, radius: f64) -> Result<f64> {
    require_radius_above_a(a, radius)?;
    Ok(radius * flux_over_f_infinity(d, a, radius))
}

/// `C_d(a) vol(S^{d-1}) / f_∞(R)` without the factor `R`. This is the form the
/// energy bound is assembled from; it only majorizes `K(f_R)` for `R - a <= 1`.
pub fn k_bound_without_radius(d: Dimension, a: f64, radius: f64) -> Result<f64> {
    require_radius_above_a(a, radius)?;
    Ok(flux_over_f_infinity(d, a, radius))
}

/// Gas density, kinetic coefficient and optional particle number.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGas")]
pub struct GasParameters {
    pub d: Dimension,
    pub rho: f64,
    pub mu: f64,
    pub n: Option<u64>,
}

#[derive(Deserialize)]
struct RawGas {
    d: Dimension,
    rho: f64,
    mu: f64,
    n: Option<u64>,
}

impl TryFrom<RawGas> for GasParameters {
    type Error = Error;

    fn try_from(raw: RawGas) -> Result<Self> {
        GasParameters::new(raw.d, raw.rho, raw.mu, raw.n)
    }
}

impl GasParameters {
    pub fn new(d: Dimension, rho: f64, mu: f64, n: Option<u64>) -> Result<Self> {
        require_positive("rho", rho)?;
        require_positive("mu", mu)?;
        if let Some(n) = n {
            if n < 2 {
                return Err(Error::InvalidParameter {
                    name: "N",
                    value: n as f64,
                    reason: "at least two particles are required",
                });
            }
        }
        Ok(Self { d, rho, mu, n })
    }
}

/// Per-particle trial-state energy `(1 - ρI)^{-2} (ρJ + (2/3) μ (ρK)²)`.
pub fn trial_energy_bound(gas: &GasParameters, t: &IntegralTriple) -> Result<f64> {
    let rho_i = gas.rho * t.i;
    if !(rho_i < 1.0) {
        return Err(Error::InvalidRegime {
            condition: "rho * I < 1",
            value: rho_i,
            threshold: 1.0,
        });
    }
    let rho_k = gas.rho * t.k;
    Ok((gas.rho * t.j + 2.0 / 3.0 * gas.mu * rho_k * rho_k) / ((1.0 - rho_i) * (1.0 - rho_i)))
}

/// [`trial_energy_bound`] times `N`; requires `gas.n`.
pub fn trial_energy_bound_total(gas: &GasParameters, t: &IntegralTriple) -> Result<f64> {
    let n = gas.n.ok_or(Error::InvalidParameter {
        name: "N",
        value: f64::NAN,
        reason: "particle number required for the total energy",
    })?;
    Ok(n as f64 * trial_energy_bound(gas, t)?)
}

/// The smallness quantity `ρ C_d(a) vol(S^{d-1}) (R² - a²) / f_∞(R)` that must
/// stay below 1 for [`energy_upper_bound`].
pub fn energy_bound_proviso(d: Dimension, rho: f64, a: f64, radius: f64) -> Result<f64> {
    require_positive("rho", rho)?;
    require_nonnegative("a", a)?;
    if a == 0.0 {
        return Ok(0.0);
    }
    Ok(rho * i_bound(d, a, radius)?)
}

/// Per-particle energy upper bound built from the minimizer at radius `R`:
///
/// ```text
/// x = ρ C_d(a) vol(S^{d-1}) / f_∞(R)
/// E/N <= μ x (1 + (2/3) x) / (1 - x (R² - a²))²
/// ```
pub fn energy_upper_bound(d: Dimension, rho: f64, a: f64, mu: f64, radius: f64) -> Result<f64> {
    require_positive("mu", mu)?;
    let proviso = energy_bound_proviso(d, rho, a, radius)?;
    if a == 0.0 {
        return Ok(0.0);
    }
    if !(proviso < 1.0) {
        return Err(Error::InvalidRegime {
            condition: "energy bound smallness proviso",
            value: proviso,
            threshold: 1.0,
        });
    }
    let x = rho * flux_over_f_infinity(d, a, radius);
    Ok(mu * x * (1.0 + 2.0 / 3.0 * x) / ((1.0 - proviso) * (1.0 - proviso)))
}

/// The radius `max(R0, a + 1)` at which the simplified bound is derived.
pub fn default_radius(r0: f64, a: f64) -> f64 {
    r0.max(a + 1.0)
}

/// `16πμ g Y (1 + (8π/3) g Y)` with `g = 1` (d = 2) or `e^{2 R0}` (d = 3).
pub fn simplified_upper_bound(d: Dimension, y: f64, mu: f64, r0: f64) -> Result<f64> {
    require_nonnegative("Y", y)?;
    require_positive("mu", mu)?;
    let cap = y_cap(d, r0)?;
    if y > cap {
        return Err(Error::InvalidRegime {
            condition: "Y <= Y cap",
            value: y,
            threshold: cap,
        });
    }
    let (a_c, b_c) = simplified_coefficients(d, mu, r0);
    Ok(a_c * y * (1.0 + b_c * y))
}

/// `1 - (E/N) / Ξ`, unclamped.
pub fn condensate_fraction_lower(e_over_n: f64, gap: f64) -> Result<f64> {
    require_nonnegative("E/N", e_over_n)?;
    require_positive("gap", gap)?;
    Ok(1.0 - e_over_n / gap)
}

/// Which formula produced a reported number.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub quantity: String,
    pub formula: String,
}

impl Provenance {
    pub fn new(quantity: &str, formula: &str) -> Self {
        Self {
            quantity: quantity.to_string(),
            formula: formula.to_string(),
        }
    }
}

/// A printed formula variant evaluated next to the implemented one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrintedVariant {
    pub quantity: String,
    pub printed_formula: String,
    pub printed_value: Option<f64>,
    pub implemented_value: f64,
}

/// Inputs of [`evaluate_bounds`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundInput {
    pub d: Dimension,
    pub rho: f64,
    pub mu: f64,
    /// Scattering length.
    pub a: f64,
    /// Support radius of the potential.
    pub r0: f64,
    /// Radius of the minimizer; defaults to `max(R0, a + 1)`.
    pub radius: Option<f64>,
    pub eps: Option<f64>,
    pub gap: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Validity {
    /// Smallness proviso of the radius-`R` energy bound.
    pub energy_bound_proviso: bool,
    /// `Y` is below the cap of the simplified bound.
    pub y_threshold: bool,
}

/// Everything derived from a gas and its scattering length. Fields whose
/// preconditions fail are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub y: f64,
    pub y_cap: f64,
    pub y0: Option<f64>,
    pub radius: f64,
    pub proviso_value: f64,
    pub validity: Validity,
    /// Bound at radius `R` (tighter, needs the smallness proviso).
    pub energy_upper_at_radius: Option<f64>,
    /// Simplified bound in terms of `Y` alone.
    pub energy_upper_per_particle: Option<f64>,
    pub gap: Option<f64>,
    /// `1 - energy_upper_per_particle / gap`, unclamped.
    pub fraction_lower: Option<f64>,
    pub provenance: Vec<Provenance>,
    pub printed_variants: Vec<PrintedVariant>,
}

pub fn evaluate_bounds(input: &BoundInput) -> Result<BoundReport> {
    let BoundInput { d, rho, mu, a, r0, .. } = *input;
    require_positive("mu", mu)?;
    require_positive("R0", r0)?;
    let y = diluteness_y(d, rho, a)?;
    let cap = y_cap(d, r0)?;
    let radius = input.radius.unwrap_or_else(|| default_radius(r0, a));
    if a > 0.0 && !(radius > a) {
        return Err(Error::InvalidParameter {
            name: "R",
            value: radius,
            reason: "outer radius must exceed the scattering length",
        });
    }
    let proviso_value = energy_bound_proviso(d, rho, a, radius)?;
    let validity = Validity {
        energy_bound_proviso: proviso_value < 1.0,
        y_threshold: y <= cap,
    };
    let energy_upper_at_radius = validity
        .energy_bound_proviso
        .then(|| energy_upper_bound(d, rho, a, mu, radius))
        .transpose()?;
    let energy_upper = validity
        .y_threshold
        .then(|| simplified_upper_bound(d, y, mu, r0))
        .transpose()?;
    let y0 = input.eps.map(|eps| y0_threshold(d, eps, mu, r0)).transpose()?;
    if let Some(gap) = input.gap {
        require_positive("gap", gap)?;
    }
    let fraction_lower = match (energy_upper, input.gap) {
        (Some(e), Some(gap)) => Some(condensate_fraction_lower(e, gap)?),
        _ => None,
    };

    let mut provenance = vec![
        Provenance::new(
            "y",
            match d {
                Dimension::Two => "Y = rho / ln(1 / tanh(a/2))",
                Dimension::Three => "Y = rho * tanh(a)",
            },
        ),
        Provenance::new(
            "y_cap",
            match d {
                Dimension::Two => "(8 pi (R0 + 1)^2)^-1",
                Dimension::Three => "(8 exp(2 R0) (R0 + 1)^2)^-1",
            },
        ),
        Provenance::new(
            "energy_upper_at_radius",
            "mu x (1 + 2x/3) / (1 - x (R^2 - a^2))^2, x = rho C_d(a) vol(S^{d-1}) / f_inf(R)",
        ),
        Provenance::new(
            "energy_upper_per_particle",
            match d {
                Dimension::Two => "16 pi mu Y (1 + 8 pi Y / 3)",
                Dimension::Three => "16 pi mu e^{2R0} Y (1 + 8 pi e^{2R0} Y / 3)",
            },
        ),
    ];
    if y0.is_some() {
        provenance.push(Provenance::new(
            "y0",
            "min(3 (sqrt(2 eps / (3 mu) + 1) - 1) / (16 pi g), Y cap), g = 1 or e^{2R0}",
        ));
    }
    if fraction_lower.is_some() {
        provenance.push(Provenance::new("fraction_lower", "1 - (E/N) / gap"));
    }

    let mut printed_variants = Vec::new();
    if d == Dimension::Two {
        printed_variants.push(PrintedVariant {
            quantity: "y".into(),
            printed_formula: "rho * ln(1 / tanh(a/2))".into(),
            printed_value: diluteness_y_printed_variant(d, rho, a),
            implemented_value: y,
        });
    }

    Ok(BoundReport {
        y,
        y_cap: cap,
        y0,
        radius,
        proviso_value,
        validity,
        energy_upper_at_radius,
        energy_upper_per_particle: energy_upper,
        gap: input.gap,
        fraction_lower,
        provenance,
        printed_variants,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scattering::{minimizer_profile, ScatteringParams};
    use approx::assert_relative_eq;

    const D2: Dimension = Dimension::Two;
    const D3: Dimension = Dimension::Three;

    #[test]
    fn diluteness_values() {
        assert_eq!(diluteness_y(D2, 0.3, 0.0).unwrap(), 0.0);
        assert_eq!(diluteness_y(D3, 0.3, 0.0).unwrap(), 0.0);
        assert_relative_eq!(diluteness_y(D3, 0.01, 1.0).unwrap(), 0.007_615_941_559_557_649, max_relative = 1e-14);
        assert_relative_eq!(diluteness_y(D2, 0.01, 0.5).unwrap(), 0.007_108_183_859_917_098_5, max_relative = 1e-13);
        assert!(diluteness_y(D2, 0.0, 0.5).is_err());
    }

    #[test]
    fn y0_values() {
        assert_relative_eq!(y0_threshold(D2, 1.0, 1.0, 1.0).unwrap(), 1.0 / (32.0 * PI), max_relative = 1e-15);
        assert_relative_eq!(y0_threshold(D2, 0.01, 1.0, 1.0).unwrap(), 1.986_132_067_256_276e-4, max_relative = 1e-9);
        let cap = y0_branches(D3, 1e9, 1.0, 1.0).unwrap();
        assert!(!cap.eps_branch_active());
        assert_relative_eq!(cap.value(), 0.004_229_227_601_144_146_6, max_relative = 1e-14);
    }

    #[test]
    fn closed_form_bounds() {
        assert_relative_eq!(i_bound(D2, 0.5, 2.0).unwrap(), 20.768_798_152_350_677, max_relative = 1e-13);
        assert_relative_eq!(i_bound(D3, 0.5, 2.0).unwrap(), 41.826_976_204_679_685, max_relative = 1e-13);
        assert_relative_eq!(k_bound(D2, 0.5, 2.0).unwrap(), 11.076_692_347_920_361, max_relative = 1e-13);
        assert_relative_eq!(k_bound(D3, 0.5, 2.0).unwrap(), 22.307_720_642_495_832, max_relative = 1e-13);
        assert!(i_bound(D2, 1.0, 1.0).is_err());
        assert!(k_bound(D3, 1.0, 0.5).is_err());
        // (R² - a²) / f_∞(R) -> 2R sinh R as a -> R: the bound stays finite
        let near = i_bound(D2, 1.0 - 1e-9, 1.0).unwrap();
        assert_relative_eq!(near, 4.0 * PI * 1f64.sinh(), max_relative = 1e-6);
    }

    #[test]
    fn trial_energy_values() {
        let gas = GasParameters::new(D2, 0.01, 1.0, Some(10)).unwrap();
        let zero = IntegralTriple::new(0.0, 0.0, 0.0).unwrap();
        assert_eq!(trial_energy_bound(&gas, &zero).unwrap(), 0.0);
        let t = IntegralTriple::new(20.0, 5.5, 11.0).unwrap();
        assert_relative_eq!(trial_energy_bound(&gas, &t).unwrap(), 0.098_541_666_666_666_67, max_relative = 1e-14);
        assert_relative_eq!(trial_energy_bound_total(&gas, &t).unwrap(), 0.985_416_666_666_666_7, max_relative = 1e-14);
        let edge = IntegralTriple::new(100.0, 1.0, 1.0).unwrap();
        assert!(trial_energy_bound(&gas, &edge).unwrap_err().is_regime());
    }

    #[test]
    fn energy_upper_bound_values() {
        assert_eq!(energy_upper_bound(D2, 0.001, 0.0, 1.0, 1.5).unwrap(), 0.0);
        assert_relative_eq!(energy_upper_bound(D2, 0.001, 0.5, 1.0, 1.5).unwrap(), 0.006_800_682_144_522_918_9, max_relative = 1e-12);
        assert_relative_eq!(energy_upper_bound(D3, 0.001, 0.5, 1.0, 1.5).unwrap(), 0.012_546_661_630_153_966, max_relative = 1e-12);
        assert!(energy_upper_bound(D2, 1.0, 0.5, 1.0, 1.5).unwrap_err().is_regime());
    }

    #[test]
    fn simplified_bound_values() {
        assert_eq!(simplified_upper_bound(D2, 0.0, 1.0, 1.0).unwrap(), 0.0);
        assert_relative_eq!(simplified_upper_bound(D2, 0.005, 1.0, 1.0).unwrap(), 0.261_854_990_315_012_1, max_relative = 1e-14);
        let cap = 1.0 / (32.0 * PI);
        assert!(simplified_upper_bound(D2, cap, 1.0, 1.0).is_ok());
        let err = simplified_upper_bound(D2, cap * (1.0 + 1e-12), 1.0, 1.0).unwrap_err();
        assert_eq!(
            err,
            Error::InvalidRegime { condition: "Y <= Y cap", value: cap * (1.0 + 1e-12), threshold: cap }
        );
    }

    #[test]
    fn condensate_fraction_values() {
        assert_eq!(condensate_fraction_lower(0.0, 0.2).unwrap(), 1.0);
        assert_relative_eq!(condensate_fraction_lower(0.1, 975.0 / 4096.0).unwrap(), 0.579_897_435_897_435_9, max_relative = 1e-14);
        assert_eq!(condensate_fraction_lower(1.0, 0.5).unwrap(), -1.0);
        assert!(condensate_fraction_lower(0.1, 0.0).is_err());
    }

    #[test]
    fn quad_integrals_of_free_profile_vanish() {
        let v = Potential::zero(1.0).unwrap();
        let params = ScatteringParams::new(D3, 1.0).unwrap();
        let prof = minimizer_profile(&v, &params, 2.0).unwrap();
        let t = quad_integrals(&prof, &v, 1.0, D3).unwrap();
        assert_eq!(t, IntegralTriple { i: 0.0, j: 0.0, k: 0.0 });
    }

    #[test]
    fn quad_j_matches_scattering_energy() {
        let v = Potential::hardcore(0.5).unwrap();
        let params = ScatteringParams::new(D2, 1.0).unwrap();
        let prof = minimizer_profile(&v, &params, 2.0).unwrap();
        let t = quad_integrals(&prof, &v, 1.0, D2).unwrap();
        assert_relative_eq!(t.j, 5.538_346_173_960_180_5, max_relative = 1e-4);
        assert!(t.i < 20.768_798_152_350_677);
        assert!(t.k < 11.076_692_347_920_361);
    }

    #[test]
    fn quad_rejects_mismatched_support() {
        let prof = RadialProfile::new(vec![0.0, 0.5, 1.0], vec![0.0, 0.5, 1.0]).unwrap();
        assert!(quad_integrals(&prof, &Potential::step(2.0, 1.0).unwrap(), 1.0, D2).is_err());
        assert!(quad_integrals(&prof, &Potential::hardcore(0.75).unwrap(), 1.0, D2).is_err());
    }

    #[test]
    fn report_for_free_gas() {
        let report = evaluate_bounds(&BoundInput {
            d: D2,
            rho: 0.01,
            mu: 1.0,
            a: 0.0,
            r0: 1.0,
            radius: None,
            eps: Some(0.1),
            gap: Some(975.0 / 4096.0),
        })
        .unwrap();
        assert_eq!(report.y, 0.0);
        assert_eq!(report.energy_upper_per_particle, Some(0.0));
        assert_eq!(report.fraction_lower, Some(1.0));
        assert_eq!(report.radius, 1.0);
    }

    #[test]
    fn report_drops_fields_outside_regime() {
        let report = evaluate_bounds(&BoundInput {
            d: D3,
            rho: 10.0,
            mu: 1.0,
            a: 0.5,
            r0: 0.5,
            radius: None,
            eps: None,
            gap: Some(0.75),
        })
        .unwrap();
        assert!(!report.validity.y_threshold);
        assert!(!report.validity.energy_bound_proviso);
        assert_eq!(report.energy_upper_per_particle, None);
        assert_eq!(report.energy_upper_at_radius, None);
        assert_eq!(report.fraction_lower, None);
    }
}
