//! Manifold families with volume-independent spectral gaps, and the
//! condensation certificate built on top of them.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::bounds::{
    condensate_fraction_lower, diluteness_y, simplified_upper_bound, y0_threshold, y_cap, PrintedVariant,
    Provenance,
};
use crate::error::{require_positive, Error, Result};
use crate::geometry::Dimension;
use crate::scattering::{scattering_length_with, Potential, ScatteringParams, SolverOptions};

/// `λ1 >= 1/4 - (7/64)^2` for congruence quotients of the modular group.
pub const KIM_SARNAK_GAP: f64 = 975.0 / 4096.0;
pub const SELBERG_GAP: f64 = 3.0 / 16.0;
/// `(2d - 3) / 4` at d = 3.
pub const DIM3_STANDARD_GAP: f64 = 3.0 / 4.0;

/// `(1/4) (ln 2 / (2π + ln 2))^2`, the earlier random-surface constant.
pub fn mirzakhani_gap() -> f64 {
    let ln2 = std::f64::consts::LN_2;
    let q = ln2 / (2.0 * PI + ln2);
    0.25 * q * q
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ManifoldFamily {
    /// `H^2 / Γ(L)` for the principal congruence subgroup of level `L`.
    ModularSurface { level: u64 },
    /// A 3-d congruence quotient; the index over the level-1 quotient and the
    /// level-1 volume are supplied by the caller.
    CongruenceQuotient3 { level: u64, index: u64, vol_x1: f64 },
    /// A compact surface of genus `g`, in the high-probability set where
    /// `λ1 >= 3/16 - α`.
    RandomSurface { genus: u64, alpha: f64 },
    Custom { d: Dimension, volume: f64, gap: f64 },
}

impl ManifoldFamily {
    fn name(&self) -> &'static str {
        match self {
            ManifoldFamily::ModularSurface { .. } => "modular_surface",
            ManifoldFamily::CongruenceQuotient3 { .. } => "congruence_quotient3",
            ManifoldFamily::RandomSurface { .. } => "random_surface",
            ManifoldFamily::Custom { .. } => "custom",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GapPolicy {
    KimSarnak,
    #[serde(rename = "selberg_3_16")]
    Selberg316,
    Dim3Standard,
    #[serde(rename = "random_3_16_minus_alpha")]
    Random316MinusAlpha,
    Mirzakhani,
    Custom,
}

impl GapPolicy {
    pub fn name(self) -> &'static str {
        match self {
            GapPolicy::KimSarnak => "kim_sarnak",
            GapPolicy::Selberg316 => "selberg_3_16",
            GapPolicy::Dim3Standard => "dim3_standard",
            GapPolicy::Random316MinusAlpha => "random_3_16_minus_alpha",
            GapPolicy::Mirzakhani => "mirzakhani",
            GapPolicy::Custom => "custom",
        }
    }

    /// Strongest available policy for a family.
    pub fn default_for(family: &ManifoldFamily) -> Self {
        match family {
            ManifoldFamily::ModularSurface { .. } => GapPolicy::KimSarnak,
            ManifoldFamily::CongruenceQuotient3 { .. } => GapPolicy::Dim3Standard,
            ManifoldFamily::RandomSurface { .. } => GapPolicy::Random316MinusAlpha,
            ManifoldFamily::Custom { .. } => GapPolicy::Custom,
        }
    }

    fn compatible_with(self, family: &ManifoldFamily) -> bool {
        matches!(
            (family, self),
            (ManifoldFamily::ModularSurface { .. }, GapPolicy::KimSarnak | GapPolicy::Selberg316)
                | (ManifoldFamily::CongruenceQuotient3 { .. }, GapPolicy::Dim3Standard)
                | (
                    ManifoldFamily::RandomSurface { .. },
                    GapPolicy::Random316MinusAlpha | GapPolicy::Mirzakhani
                )
                | (ManifoldFamily::Custom { .. }, GapPolicy::Custom)
        )
    }
}

/// A validated manifold family together with the spectral-gap constant used for it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawModel")]
pub struct ManifoldModel {
    family: ManifoldFamily,
    gap_policy: GapPolicy,
}

#[derive(Deserialize)]
struct RawModel {
    family: ManifoldFamily,
    gap_policy: GapPolicy,
}

impl TryFrom<RawModel> for ManifoldModel {
    type Error = Error;

    fn try_from(raw: RawModel) -> Result<Self> {
        ManifoldModel::new(raw.family, raw.gap_policy)
    }
}

impl ManifoldModel {
    pub fn new(family: ManifoldFamily, gap_policy: GapPolicy) -> Result<Self> {
        match family {
            ManifoldFamily::ModularSurface { level } if level < 1 => {
                return Err(Error::InvalidModel("level L must be >= 1".into()));
            }
            ManifoldFamily::CongruenceQuotient3 { level, index, vol_x1 } => {
                if level < 1 || index < 1 {
                    return Err(Error::InvalidModel("level and index must be >= 1".into()));
                }
                require_positive("vol_x1", vol_x1)?;
            }
            ManifoldFamily::RandomSurface { genus, alpha } => {
                if genus < 2 {
                    return Err(Error::InvalidModel(format!("genus {genus} must be >= 2")));
                }
                if !(alpha > 0.0 && alpha < 3.0 / 16.0) {
                    return Err(Error::InvalidModel(format!(
                        "alpha = {alpha} must lie in (0, 3/16); alpha = 3/16 leaves no gap"
                    )));
                }
            }
            ManifoldFamily::Custom { volume, gap, .. } => {
                require_positive("volume", volume)?;
                require_positive("gap", gap)?;
            }
            ManifoldFamily::ModularSurface { .. } => {}
        }
        if !gap_policy.compatible_with(&family) {
            return Err(Error::IncompatibleGapPolicy {
                policy: gap_policy.name(),
                model: family.name(),
            });
        }
        Ok(Self { family, gap_policy })
    }

    pub fn with_default_policy(family: ManifoldFamily) -> Result<Self> {
        Self::new(family, GapPolicy::default_for(&family))
    }

    pub fn family(&self) -> &ManifoldFamily {
        &self.family
    }

    pub fn gap_policy(&self) -> GapPolicy {
        self.gap_policy
    }

    pub fn dimension(&self) -> Dimension {
        match self.family {
            ManifoldFamily::ModularSurface { .. } | ManifoldFamily::RandomSurface { .. } => Dimension::Two,
            ManifoldFamily::CongruenceQuotient3 { .. } => Dimension::Three,
            ManifoldFamily::Custom { d, .. } => d,
        }
    }

    pub fn volume(&self) -> f64 {
        match self.family {
            ManifoldFamily::ModularSurface { level } => modular_index(level) as f64 * PI / 3.0,
            ManifoldFamily::CongruenceQuotient3 { index, vol_x1, .. } => index as f64 * vol_x1,
            ManifoldFamily::RandomSurface { genus, .. } => 2.0 * PI * (2.0 * genus as f64 - 2.0),
            ManifoldFamily::Custom { volume, .. } => volume,
        }
    }

    /// Lower bound `Ξ` on the first nonzero Laplace eigenvalue.
    pub fn spectral_gap(&self) -> f64 {
        match (self.gap_policy, self.family) {
            (GapPolicy::KimSarnak, _) => KIM_SARNAK_GAP,
            (GapPolicy::Selberg316, _) => SELBERG_GAP,
            (GapPolicy::Dim3Standard, _) => DIM3_STANDARD_GAP,
            (GapPolicy::Random316MinusAlpha, ManifoldFamily::RandomSurface { alpha, .. }) => 3.0 / 16.0 - alpha,
            (GapPolicy::Mirzakhani, _) => mirzakhani_gap(),
            (GapPolicy::Custom, ManifoldFamily::Custom { gap, .. }) => gap,
            _ => unreachable!("policy compatibility is checked at construction"),
        }
    }
}

/// Volume of a model; see [`ManifoldModel::volume`].
pub fn volume(model: &ManifoldModel) -> f64 {
    model.volume()
}

/// Spectral gap of a model; see [`ManifoldModel::spectral_gap`].
pub fn spectral_gap(model: &ManifoldModel) -> f64 {
    model.spectral_gap()
}

fn factor_cache() -> &'static Mutex<HashMap<u64, Vec<(u64, u32)>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Vec<(u64, u32)>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Prime factorization `[(p, k), ...]` in increasing order of `p`. Memoized.
pub fn prime_factors(n: u64) -> Vec<(u64, u32)> {
    if let Some(f) = factor_cache().lock().expect("factor cache poisoned").get(&n) {
        return f.clone();
    }
    let mut factors = Vec::new();
    let mut m = n;
    let mut p = 2u64;
    while p.saturating_mul(p) <= m {
        if m % p == 0 {
            let mut k = 0;
            while m % p == 0 {
                m /= p;
                k += 1;
            }
            factors.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        factors.push((m, 1));
    }
    factor_cache()
        .lock()
        .expect("factor cache poisoned")
        .insert(n, factors.clone());
    factors
}

/// `[SL2(Z) : Γ(L)] = L^3 ∏_{p | L} (1 - p^{-2})`, evaluated in integers as
/// `∏ p^{3k-2} (p^2 - 1)` over `p^k || L`.
pub fn modular_index(level: u64) -> u128 {
    prime_factors(level)
        .into_iter()
        .map(|(p, k)| {
            let p = p as u128;
            p.pow(3 * k - 2) * (p * p - 1)
        })
        .product()
}

/// Inputs echoed into a certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateInputs {
    pub model: ManifoldModel,
    pub n: u64,
    pub potential: Potential,
    pub mu: f64,
    pub eps: f64,
}

/// Route 1: evaluate the simplified energy bound and compare the fraction to `1 - ε`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectRoute {
    pub y_cap: f64,
    pub y_below_cap: bool,
    pub energy_upper: Option<f64>,
    /// `1 - energy_upper / Ξ` before clamping.
    pub fraction_lower_unclamped: Option<f64>,
    pub certified: bool,
}

/// Route 2: test `Y < Y0(Ξ ε)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorollaryRoute {
    pub y0_of_gap_eps: f64,
    pub condition_met: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CondensateCertificate {
    pub inputs: CertificateInputs,
    pub dimension: Dimension,
    pub volume: f64,
    pub rho: f64,
    pub a: f64,
    pub y: f64,
    pub gap: f64,
    pub energy_upper: Option<f64>,
    /// Lower bound on the condensate fraction, clamped at 0.
    pub fraction_lower: f64,
    pub corollary_condition_met: bool,
    pub certified: bool,
    pub failure_reason: Option<String>,
    pub direct: DirectRoute,
    pub corollary: CorollaryRoute,
    pub provenance: Vec<Provenance>,
    pub printed_variants: Vec<PrintedVariant>,
}

/// Certificate that the condensate fraction of `n` bosons on `model` is at least `1 - eps`.
pub fn certify_bec(
    model: &ManifoldModel,
    n: u64,
    v: &Potential,
    mu: f64,
    eps: f64,
) -> Result<CondensateCertificate> {
    certify_bec_with(model, n, v, mu, eps, &SolverOptions::default())
}

pub fn certify_bec_with(
    model: &ManifoldModel,
    n: u64,
    v: &Potential,
    mu: f64,
    eps: f64,
    opts: &SolverOptions,
) -> Result<CondensateCertificate> {
    if n < 2 {
        return Err(Error::InvalidParameter {
            name: "N",
            value: n as f64,
            reason: "at least two particles are required",
        });
    }
    require_positive("mu", mu)?;
    require_positive("eps", eps)?;
    let d = model.dimension();
    let r0 = v.support_radius();
    let params = ScatteringParams::new(d, mu)?;
    let a = scattering_length_with(v, &params, r0 + 1.0, opts)?.a;
    assemble_certificate(model, n, v, mu, eps, a)
}

/// Certificate from a precomputed scattering length; `a` must belong to `v` at this `mu`.
pub fn assemble_certificate(
    model: &ManifoldModel,
    n: u64,
    v: &Potential,
    mu: f64,
    eps: f64,
    a: f64,
) -> Result<CondensateCertificate> {
    let d = model.dimension();
    let r0 = v.support_radius();
    let volume = model.volume();
    let rho = n as f64 / volume;
    let y = diluteness_y(d, rho, a)?;
    let gap = model.spectral_gap();

    let cap = y_cap(d, r0)?;
    let y_below_cap = y <= cap;
    let energy_upper = if y_below_cap {
        Some(simplified_upper_bound(d, y, mu, r0)?)
    } else {
        None
    };
    let fraction_unclamped = energy_upper
        .map(|e| condensate_fraction_lower(e, gap))
        .transpose()?;
    let direct_certified = fraction_unclamped.is_some_and(|f| f >= 1.0 - eps);
    let direct = DirectRoute {
        y_cap: cap,
        y_below_cap,
        energy_upper,
        fraction_lower_unclamped: fraction_unclamped,
        certified: direct_certified,
    };

    let y0 = y0_threshold(d, gap * eps, mu, r0)?;
    let corollary = CorollaryRoute {
        y0_of_gap_eps: y0,
        condition_met: y < y0,
    };

    let certified = direct.certified || corollary.condition_met;
    let fraction_lower = fraction_unclamped.unwrap_or(0.0).max(0.0);
    let failure_reason = if certified {
        None
    } else if !y_below_cap {
        Some(format!("Y = {y:e} exceeds the cap {cap:e} of the energy bound"))
    } else {
        Some(format!(
            "fraction lower bound {fraction_lower} is below 1 - eps = {}; Y = {y:e} >= Y0(gap * eps) = {y0:e}",
            1.0 - eps
        ))
    };

    let provenance = vec![
        Provenance::new("volume", volume_formula(model)),
        Provenance::new("rho", "N / volume"),
        Provenance::new("a", "zero of the matched exterior zero-energy solution"),
        Provenance::new(
            "y",
            match d {
                Dimension::Two => "Y = rho / ln(1 / tanh(a/2))",
                Dimension::Three => "Y = rho * tanh(a)",
            },
        ),
        Provenance::new("gap", model.gap_policy().name()),
        Provenance::new(
            "energy_upper",
            match d {
                Dimension::Two => "16 pi mu Y (1 + 8 pi Y / 3)",
                Dimension::Three => "16 pi mu e^{2R0} Y (1 + 8 pi e^{2R0} Y / 3)",
            },
        ),
        Provenance::new("fraction_lower", "max(0, 1 - energy_upper / gap)"),
        Provenance::new("corollary_condition_met", "Y < Y0(gap * eps)"),
    ];

    let corollary_printed = match d {
        Dimension::Two => PrintedVariant {
            quantity: "corollary_condition".into(),
            printed_formula: "rho * ln(1 / tanh(a))".into(),
            printed_value: (a > 0.0).then(|| rho * (-a.tanh().ln())),
            implemented_value: y,
        },
        Dimension::Three => PrintedVariant {
            quantity: "corollary_condition".into(),
            printed_formula: "rho * ln(tanh(a))".into(),
            printed_value: (a > 0.0).then(|| rho * a.tanh().ln()),
            implemented_value: y,
        },
    };
    let mut printed_variants = vec![corollary_printed];
    if let Some(p) = crate::bounds::diluteness_y_printed_variant(d, rho, a) {
        printed_variants.push(PrintedVariant {
            quantity: "y".into(),
            printed_formula: "rho * ln(1 / tanh(a/2))".into(),
            printed_value: Some(p),
            implemented_value: y,
        });
    }

    Ok(CondensateCertificate {
        inputs: CertificateInputs {
            model: *model,
            n,
            potential: v.clone(),
            mu,
            eps,
        },
        dimension: d,
        volume,
        rho,
        a,
        y,
        gap,
        energy_upper,
        fraction_lower,
        corollary_condition_met: corollary.condition_met,
        certified,
        failure_reason,
        direct,
        corollary,
        provenance,
        printed_variants,
    })
}

fn volume_formula(model: &ManifoldModel) -> &'static str {
    match model.family() {
        ManifoldFamily::ModularSurface { .. } => "L^3 prod_{p | L} (1 - p^-2) * pi / 3",
        ManifoldFamily::CongruenceQuotient3 { .. } => "index * vol(X_1)",
        ManifoldFamily::RandomSurface { .. } => "2 pi (2g - 2)",
        ManifoldFamily::Custom { .. } => "user supplied",
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn modular(level: u64) -> ManifoldModel {
        ManifoldModel::with_default_policy(ManifoldFamily::ModularSurface { level }).unwrap()
    }

    #[test]
    fn modular_volumes() {
        assert_relative_eq!(modular(1).volume(), PI / 3.0, max_relative = 1e-15);
        assert_relative_eq!(modular(2).volume(), 2.0 * PI, max_relative = 1e-15);
        assert_relative_eq!(modular(6).volume(), 48.0 * PI, max_relative = 1e-15);
        assert_eq!(modular_index(50), 90_000);
        assert_eq!(modular_index(1), 1);
    }

    #[test]
    fn random_surface_volume_and_gap() {
        let m = ManifoldModel::with_default_policy(ManifoldFamily::RandomSurface { genus: 2, alpha: 1.0 / 16.0 })
            .unwrap();
        assert_relative_eq!(m.volume(), 4.0 * PI, max_relative = 1e-15);
        assert_eq!(m.spectral_gap(), 0.125);
        let mz = ManifoldModel::new(ManifoldFamily::RandomSurface { genus: 3, alpha: 0.1 }, GapPolicy::Mirzakhani)
            .unwrap();
        assert_relative_eq!(mz.spectral_gap(), 0.002_467_951_322_620_838, max_relative = 1e-14);
    }

    #[test]
    fn gaps() {
        assert_eq!(modular(5).spectral_gap(), 975.0 / 4096.0);
        let s = ManifoldModel::new(ManifoldFamily::ModularSurface { level: 5 }, GapPolicy::Selberg316).unwrap();
        assert_eq!(s.spectral_gap(), 0.1875);
        let c3 = ManifoldModel::with_default_policy(ManifoldFamily::CongruenceQuotient3 {
            level: 3,
            index: 24,
            vol_x1: 0.3,
        })
        .unwrap();
        assert_eq!(c3.spectral_gap(), 0.75);
        assert_relative_eq!(c3.volume(), 7.2, max_relative = 1e-15);
        assert_eq!(c3.dimension(), Dimension::Three);
    }

    #[test]
    fn invalid_models() {
        assert!(ManifoldModel::with_default_policy(ManifoldFamily::ModularSurface { level: 0 }).is_err());
        assert!(ManifoldModel::with_default_policy(ManifoldFamily::RandomSurface { genus: 1, alpha: 0.1 }).is_err());
        assert!(
            ManifoldModel::with_default_policy(ManifoldFamily::RandomSurface { genus: 2, alpha: 3.0 / 16.0 }).is_err()
        );
        assert!(matches!(
            ManifoldModel::new(ManifoldFamily::ModularSurface { level: 2 }, GapPolicy::Mirzakhani),
            Err(Error::IncompatibleGapPolicy { .. })
        ));
        assert!(ManifoldModel::new(
            ManifoldFamily::Custom { d: Dimension::Two, volume: 1.0, gap: 0.1 },
            GapPolicy::KimSarnak
        )
        .is_err());
        assert!(ManifoldModel::with_default_policy(ManifoldFamily::Custom {
            d: Dimension::Two,
            volume: 1.0,
            gap: 0.0
        })
        .is_err());
    }

    #[test]
    fn factorization() {
        assert_eq!(prime_factors(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(prime_factors(97), vec![(97, 1)]);
        assert!(prime_factors(1).is_empty());
    }

    #[test]
    fn free_gas_certifies_fully() {
        let v = Potential::zero(1.0).unwrap();
        let cert = certify_bec(&modular(7), 1000, &v, 1.0, 0.01).unwrap();
        assert!(cert.certified);
        assert_eq!(cert.fraction_lower, 1.0);
        assert_eq!(cert.y, 0.0);
        assert!(cert.failure_reason.is_none());
    }

    #[test]
    fn dense_gas_fails_with_reason() {
        let v = Potential::hardcore(0.5).unwrap();
        let cert = certify_bec(&modular(2), 1_000_000, &v, 1.0, 0.1).unwrap();
        assert!(!cert.certified);
        assert!(!cert.direct.y_below_cap);
        assert_eq!(cert.energy_upper, None);
        assert_eq!(cert.fraction_lower, 0.0);
        assert!(cert.failure_reason.unwrap().contains("cap"));
    }

    #[test]
    fn raw_model_is_validated() {
        let raw = RawModel {
            family: ManifoldFamily::RandomSurface { genus: 2, alpha: 0.1875 },
            gap_policy: GapPolicy::Random316MinusAlpha,
        };
        assert!(ManifoldModel::try_from(raw).is_err());
    }

    #[test]
    fn scale_invariance() {
        let v = Potential::hardcore(0.05).unwrap();
        let small = ManifoldModel::with_default_policy(ManifoldFamily::Custom {
            d: Dimension::Three,
            volume: 1.0e6,
            gap: 0.75,
        })
        .unwrap();
        let big = ManifoldModel::with_default_policy(ManifoldFamily::Custom {
            d: Dimension::Three,
            volume: 2.0e6,
            gap: 0.75,
        })
        .unwrap();
        let c1 = certify_bec(&small, 100, &v, 1.0, 0.1).unwrap();
        let c2 = certify_bec(&big, 200, &v, 1.0, 0.1).unwrap();
        assert_eq!(c1.rho, c2.rho);
        assert_eq!(c1.y, c2.y);
        assert_eq!(c1.energy_upper, c2.energy_upper);
        assert_eq!(c1.fraction_lower, c2.fraction_lower);
        assert_eq!(c1.certified, c2.certified);
    }
}
