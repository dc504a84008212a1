//! Report types written by the subcommands. Every report re-parses into its
//! own type with equality.

use hypgas_core::bounds::{BoundReport, PrintedVariant, Provenance};
use hypgas_core::manifolds::{CertificateInputs, CondensateCertificate};
use hypgas_core::oracles::{InequalityCase, InequalityReport};
use hypgas_core::{Dimension, Potential, SolverOptions};
use serde::{Deserialize, Serialize};

use crate::args::Axis;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report<I, D> {
    pub command: String,
    pub version: String,
    pub inputs: I,
    pub derived: D,
    pub provenance: Vec<Provenance>,
    /// Regime provisos that failed and other caveats.
    pub warnings: Vec<String>,
    pub settings: Settings,
}

impl<I, D> Report<I, D> {
    pub fn new(command: &str, inputs: I, derived: D, settings: Settings) -> Self {
        Self {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            inputs,
            derived,
            provenance: Vec::new(),
            warnings: Vec::new(),
            settings,
        }
    }
}

/// Numerical settings used to produce a report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Settings {
    pub solver: SolverOptions,
    /// Coarsest spacing of the discrete minimizer, when it was used.
    pub oracle_h: Option<f64>,
    pub oracle_profile_h: Option<f64>,
}

impl Settings {
    pub fn solver(solver: SolverOptions) -> Self {
        Self {
            solver,
            oracle_h: None,
            oracle_profile_h: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatterInputs {
    pub d: Dimension,
    pub mu: f64,
    pub potential: Potential,
    pub radius: Option<f64>,
}

/// Uniform samples of a radial profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileSamples {
    /// Radius the profile is normalized at.
    pub radius: f64,
    pub r: Vec<f64>,
    pub f: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatterDerived {
    pub a: f64,
    pub alpha: f64,
    pub beta: f64,
    pub c_d: f64,
    pub radius: f64,
    /// Energy of the minimizer on the ball of radius `radius`.
    pub energy: f64,
    pub profile: ProfileSamples,
    pub printed_variants: Vec<PrintedVariant>,
}

pub type ScatterReport = Report<ScatterInputs, ScatterDerived>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundInputs {
    pub d: Dimension,
    pub rho: f64,
    pub mu: f64,
    pub potential: Potential,
    pub eps: f64,
    pub gap: f64,
    pub radius: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundDerived {
    pub a: f64,
    #[serde(flatten)]
    pub bounds: BoundReport,
}

pub type BoundCliReport = Report<BoundInputs, BoundDerived>;

pub type CertifyReport = Report<CertificateInputs, CondensateCertificate>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepInputs {
    pub d: Dimension,
    pub potential: Potential,
    pub axes: Vec<Axis>,
    /// Values of the parameters that are not swept.
    pub rho: f64,
    pub mu: f64,
    pub eps: f64,
    pub gap: f64,
    pub radius: Option<f64>,
}

/// Table with one row per grid point; empty cells are `null`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
}

pub type SweepReport = Report<SweepInputs, SweepTable>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyCheck {
    pub d: Dimension,
    pub a: f64,
    pub radius: f64,
    pub closed_form: f64,
    pub extrapolated: f64,
    pub relative_error: f64,
    pub order: Option<f64>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileCheck {
    pub d: Dimension,
    pub a: f64,
    pub radius: f64,
    /// Largest deviation between the oracle and the radial solver at the oracle nodes.
    pub sup_deviation: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyInputs {
    pub energy_tolerance: f64,
    pub order_minimum: f64,
    pub order_tolerance: f64,
    pub profile_tolerance: f64,
    pub cases: Vec<InequalityCase>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyDerived {
    pub energy: Vec<EnergyCheck>,
    pub profile: Vec<ProfileCheck>,
    pub inequalities: InequalityReport,
    pub passed: bool,
}

pub type VerifyReport = Report<VerifyInputs, VerifyDerived>;
