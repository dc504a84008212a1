use anyhow::Context;
use hypgas_core::bounds::{default_radius, evaluate_bounds, BoundInput, BoundReport, PrintedVariant, Provenance};
use hypgas_core::manifolds::{
    certify_bec_with, GapPolicy, ManifoldFamily, ManifoldModel, DIM3_STANDARD_GAP, KIM_SARNAK_GAP,
};
use hypgas_core::oracles::{default_case_grid, discrete_minimizer, inequality_report};
use hypgas_core::scattering::{
    minimizer_profile_with, scattering_energy, scattering_energy_printed_variant, scattering_length_with,
};
use hypgas_core::{Dimension, Potential, ScatteringParams, SolverOptions};
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{
    AxisParam, BoundArgs, CertifyArgs, Format, ModelKind, OutputArgs, ScatterArgs, SweepArgs, VerifyArgs,
};
use crate::report::*;
use crate::{read_potential, thread_pool, usage, Outcome, EXIT_NOT_CERTIFIED, EXIT_OK};

/// Relative tolerance of the oracle energy against the closed form.
pub const ENERGY_TOLERANCE: f64 = 1e-4;
/// Expected convergence order of the oracle energy.
pub const ORDER_MINIMUM: f64 = 2.0;
/// Resolution of the three-grid order estimate.
pub const ORDER_TOLERANCE: f64 = 1e-3;
/// Sup-norm tolerance between oracle and solver profiles.
pub const PROFILE_TOLERANCE: f64 = 1e-4;

fn default_gap(d: Dimension) -> f64 {
    match d {
        Dimension::Two => KIM_SARNAK_GAP,
        Dimension::Three => DIM3_STANDARD_GAP,
    }
}

fn json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    let mut s = serde_json::to_string_pretty(value).context("serializing report")?;
    s.push('\n');
    Ok(s)
}

fn csv_table(columns: &[String], rows: &[Vec<Option<f64>>]) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(columns)?;
    for row in rows {
        w.write_record(row.iter().map(|c| c.map(|x| x.to_string()).unwrap_or_default()))?;
    }
    let bytes = w.into_inner().context("flushing CSV")?;
    Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
}

fn json_only(output: &OutputArgs, command: &str) -> anyhow::Result<()> {
    if output.format == Format::Csv {
        return Err(usage(format!("`{command}` only writes JSON reports")));
    }
    Ok(())
}

fn scattering_length_of(v: &Potential, d: Dimension, mu: f64, opts: &SolverOptions) -> anyhow::Result<f64> {
    let params = ScatteringParams::new(d, mu)?;
    Ok(scattering_length_with(v, &params, v.support_radius() + 1.0, opts)?.a)
}

fn check_radius(radius: f64, a: f64) -> anyhow::Result<()> {
    if !(radius.is_finite() && radius > 0.0 && (a == 0.0 || radius > a)) {
        return Err(usage(format!("R = {radius} must be positive and exceed a = {a}")));
    }
    Ok(())
}

pub fn scatter(args: &ScatterArgs) -> anyhow::Result<Outcome> {
    let v = read_potential(&args.potential.potential)?;
    let (d, mu) = (args.d, args.potential.mu);
    let opts = args.solver.options();
    let params = ScatteringParams::new(d, mu)?;
    let r0 = v.support_radius();
    if args.profile_points < 2 {
        return Err(usage("--profile-points must be at least 2"));
    }

    let base = scattering_length_with(&v, &params, r0 + 1.0, &opts)?;
    let a = base.a;
    let radius = args.radius.unwrap_or_else(|| default_radius(r0, a));
    check_radius(radius, a)?;
    let mut warnings = Vec::new();
    let profile_radius = if radius > r0 {
        radius
    } else {
        warnings.push(format!(
            "R = {radius} does not exceed R0 = {r0}; the profile is normalized at R0 + 1"
        ));
        r0 + 1.0
    };
    let sol = if profile_radius == r0 + 1.0 {
        base
    } else {
        let mut s = scattering_length_with(&v, &params, profile_radius, &opts)?;
        s.a = a;
        s
    };
    let energy = scattering_energy(d, a, mu, radius)?;
    let r: Vec<f64> = (0..args.profile_points)
        .map(|i| profile_radius * i as f64 / (args.profile_points - 1) as f64)
        .collect();
    let f: Vec<f64> = r.iter().map(|&x| sol.profile.eval(x)).collect();

    if args.output.format == Format::Csv {
        let rows: Vec<Vec<Option<f64>>> = r.iter().zip(&f).map(|(&x, &y)| vec![Some(x), Some(y)]).collect();
        return Ok(Outcome {
            output: csv_table(&["r".into(), "f".into()], &rows)?,
            status: EXIT_OK,
        });
    }

    let printed_variants = match scattering_energy_printed_variant(d, a, mu, radius) {
        Some(p) => vec![PrintedVariant {
            quantity: "energy".into(),
            printed_formula: "4 pi mu a / (1 - tanh(a) / tanh(R))".into(),
            printed_value: Some(p),
            implemented_value: energy,
        }],
        None => Vec::new(),
    };
    let derived = ScatterDerived {
        a,
        alpha: sol.alpha,
        beta: sol.beta,
        c_d: sol.c_d,
        radius,
        energy,
        profile: ProfileSamples {
            radius: profile_radius,
            r,
            f,
        },
        printed_variants,
    };
    let inputs = ScatterInputs {
        d,
        mu,
        potential: v.clone(),
        radius: args.radius,
    };
    let mut report = Report::new("scatter", inputs, derived, Settings::solver(opts));
    report.provenance = vec![
        Provenance::new(
            "a",
            if v.is_hardcore() {
                "a = R0 for a hardcore"
            } else {
                "zero of the exterior solution alpha + beta F_d(r) matched at R0"
            },
        ),
        Provenance::new("c_d", "f_inf'(r) sinh^{d-1}(r): 1 in d = 2, tanh(a) in d = 3"),
        Provenance::new("energy", "mu C_d(a) vol(S^{d-1}) / f_inf(R)"),
    ];
    report.warnings = warnings;
    Ok(Outcome {
        output: json(&report)?,
        status: EXIT_OK,
    })
}

/// Column names shared by `bound --format csv` and `sweep`.
fn bound_columns() -> Vec<String> {
    [
        "rho",
        "mu",
        "eps",
        "gap",
        "radius",
        "a",
        "y",
        "y_cap",
        "y0",
        "proviso_value",
        "energy_upper_at_radius",
        "energy_upper_per_particle",
        "fraction_lower",
    ]
    .map(String::from)
    .to_vec()
}

fn bound_row(input: &BoundInput, b: &BoundReport) -> Vec<Option<f64>> {
    vec![
        Some(input.rho),
        Some(input.mu),
        input.eps,
        input.gap,
        Some(b.radius),
        Some(input.a),
        Some(b.y),
        Some(b.y_cap),
        b.y0,
        Some(b.proviso_value),
        b.energy_upper_at_radius,
        b.energy_upper_per_particle,
        b.fraction_lower,
    ]
}

fn bound_warnings(b: &BoundReport) -> Vec<String> {
    let mut w = Vec::new();
    if !b.validity.energy_bound_proviso {
        w.push(format!(
            "smallness proviso fails at R = {}: {} >= 1; no radius-R energy bound",
            b.radius, b.proviso_value
        ));
    }
    if !b.validity.y_threshold {
        w.push(format!(
            "Y = {} exceeds the cap {}; no simplified energy bound",
            b.y, b.y_cap
        ));
    }
    w
}

pub fn bound(args: &BoundArgs) -> anyhow::Result<Outcome> {
    let v = read_potential(&args.potential.potential)?;
    let (d, mu) = (args.d, args.potential.mu);
    let opts = args.solver.options();
    let a = scattering_length_of(&v, d, mu, &opts)?;
    if let Some(r) = args.radius {
        check_radius(r, a)?;
    }
    let gap = args.gap.unwrap_or_else(|| default_gap(d));
    let input = BoundInput {
        d,
        rho: args.rho,
        mu,
        a,
        r0: v.support_radius(),
        radius: args.radius,
        eps: Some(args.eps),
        gap: Some(gap),
    };
    let bounds = evaluate_bounds(&input)?;
    if args.output.format == Format::Csv {
        return Ok(Outcome {
            output: csv_table(&bound_columns(), &[bound_row(&input, &bounds)])?,
            status: EXIT_OK,
        });
    }
    let warnings = bound_warnings(&bounds);
    let mut provenance = vec![Provenance::new("a", "scattering length of the potential")];
    provenance.extend(bounds.provenance.iter().cloned());
    let inputs = BoundInputs {
        d,
        rho: args.rho,
        mu,
        potential: v,
        eps: args.eps,
        gap,
        radius: args.radius,
    };
    let mut report = Report::new("bound", inputs, BoundDerived { a, bounds }, Settings::solver(opts));
    report.provenance = provenance;
    report.warnings = warnings;
    Ok(Outcome {
        output: json(&report)?,
        status: EXIT_OK,
    })
}

fn required<T>(value: Option<T>, flag: &str, model: &str) -> anyhow::Result<T> {
    value.ok_or_else(|| usage(format!("--model {model} requires {flag}")))
}

fn build_model(args: &CertifyArgs) -> anyhow::Result<ManifoldModel> {
    let family = match args.model {
        ModelKind::Modular => ManifoldFamily::ModularSurface {
            level: required(args.level, "--L", "modular")?,
        },
        ModelKind::Congruence3 => ManifoldFamily::CongruenceQuotient3 {
            level: required(args.level, "--L", "congruence3")?,
            index: required(args.index, "--index", "congruence3")?,
            vol_x1: required(args.vol_x1, "--vol-x1", "congruence3")?,
        },
        ModelKind::Random => ManifoldFamily::RandomSurface {
            genus: required(args.genus, "--g", "random")?,
            alpha: required(args.alpha, "--alpha", "random")?,
        },
        ModelKind::Custom => ManifoldFamily::Custom {
            d: required(args.d, "--d", "custom")?,
            volume: required(args.volume, "--volume", "custom")?,
            gap: required(args.gap, "--gap", "custom")?,
        },
    };
    let policy = args
        .gap_policy
        .map(GapPolicy::from)
        .unwrap_or_else(|| GapPolicy::default_for(&family));
    Ok(ManifoldModel::new(family, policy)?)
}

pub fn certify(args: &CertifyArgs) -> anyhow::Result<Outcome> {
    json_only(&args.output, "certify")?;
    let v = read_potential(&args.potential.potential)?;
    let model = build_model(args)?;
    if let Some(d) = args.d {
        if d != model.dimension() {
            return Err(usage(format!(
                "--d {d} does not match the model dimension {}",
                model.dimension()
            )));
        }
    }
    let opts = args.solver.options();
    let cert = certify_bec_with(&model, args.n, &v, args.potential.mu, args.eps, &opts)?;
    let status = if cert.certified { EXIT_OK } else { EXIT_NOT_CERTIFIED };
    let mut report = Report::new("certify", cert.inputs.clone(), cert.clone(), Settings::solver(opts));
    report.provenance = cert.provenance.clone();
    if !cert.direct.y_below_cap {
        report.warnings.push("Y exceeds the cap of the simplified energy bound".into());
    }
    if let Some(reason) = &cert.failure_reason {
        report.warnings.push(reason.clone());
    }
    Ok(Outcome {
        output: json(&report)?,
        status,
    })
}

pub fn sweep(args: &SweepArgs) -> anyhow::Result<Outcome> {
    let v = read_potential(&args.potential.potential)?;
    let d = args.d;
    if args.axes.len() > 2 {
        return Err(usage("at most two sweep axes are supported"));
    }
    if args.axes.len() == 2 && args.axes[0].param == args.axes[1].param {
        return Err(usage("the two sweep axes must vary different parameters"));
    }
    let opts = args.solver.options();
    let gap = args.gap.unwrap_or_else(|| default_gap(d));
    let base = [args.rho, args.potential.mu, args.eps, gap, args.radius.unwrap_or(f64::NAN)];
    let slot = |p: AxisParam| match p {
        AxisParam::Rho => 0,
        AxisParam::Mu => 1,
        AxisParam::Eps => 2,
        AxisParam::Gap => 3,
        AxisParam::Radius => 4,
    };

    // lexicographic: the first axis varies slowest
    let mut points: Vec<[f64; 5]> = vec![base];
    for axis in &args.axes {
        let values = axis.values();
        points = points
            .iter()
            .flat_map(|p| {
                values.iter().map(move |&x| {
                    let mut q = *p;
                    q[slot(axis.param)] = x;
                    q
                })
            })
            .collect();
    }

    let pool = thread_pool()?;
    let rows: Vec<Vec<Option<f64>>> = pool.install(|| -> anyhow::Result<_> {
        // the scattering length depends on μ only
        let mut mus: Vec<f64> = points.iter().map(|p| p[1]).collect();
        mus.sort_by(f64::total_cmp);
        mus.dedup();
        let lengths: Vec<(f64, f64)> = mus
            .par_iter()
            .map(|&mu| Ok((mu, scattering_length_of(&v, d, mu, &opts)?)))
            .collect::<anyhow::Result<_>>()?;
        points
            .par_iter()
            .map(|p| {
                let a = lengths
                    .iter()
                    .find(|(mu, _)| *mu == p[1])
                    .map(|&(_, a)| a)
                    .expect("every μ has a scattering length");
                let radius = (!p[4].is_nan()).then_some(p[4]);
                if let Some(r) = radius {
                    check_radius(r, a)?;
                }
                let input = BoundInput {
                    d,
                    rho: p[0],
                    mu: p[1],
                    a,
                    r0: v.support_radius(),
                    radius,
                    eps: Some(p[2]),
                    gap: Some(p[3]),
                };
                Ok(bound_row(&input, &evaluate_bounds(&input)?))
            })
            .collect()
    })?;

    let columns = bound_columns();
    if args.output.format == Format::Csv {
        return Ok(Outcome {
            output: csv_table(&columns, &rows)?,
            status: EXIT_OK,
        });
    }
    let inputs = SweepInputs {
        d,
        potential: v,
        axes: args.axes.clone(),
        rho: args.rho,
        mu: args.potential.mu,
        eps: args.eps,
        gap,
        radius: args.radius,
    };
    let mut report = Report::new("sweep", inputs, SweepTable { columns, rows }, Settings::solver(opts));
    report.provenance = vec![Provenance::new("rows", "one bound evaluation per grid point, first axis slowest")];
    Ok(Outcome {
        output: json(&report)?,
        status: EXIT_OK,
    })
}

/// `d ∈ {2, 3}`, `a ∈ {0.25, 0.5, 1}`, `R ∈ {a + 1, a + 2}` with a hardcore of radius `a`.
pub fn oracle_grid() -> Vec<(Dimension, f64, f64)> {
    let mut cases = Vec::new();
    for d in [Dimension::Two, Dimension::Three] {
        for a in [0.25, 0.5, 1.0] {
            for extra in [1.0, 2.0] {
                cases.push((d, a, a + extra));
            }
        }
    }
    cases
}

fn energy_check(d: Dimension, a: f64, radius: f64, h: f64) -> anyhow::Result<EnergyCheck> {
    let v = Potential::hardcore(a)?;
    let params = ScatteringParams::new(d, 1.0)?;
    let res = discrete_minimizer(&v, &params, radius, h)?;
    let closed_form = scattering_energy(d, a, 1.0, radius)?;
    let extrapolated = res.convergence.extrapolated_energy;
    let relative_error = (extrapolated - closed_form).abs() / closed_form;
    let order = res.convergence.order;
    let passed =
        relative_error <= ENERGY_TOLERANCE && order.is_some_and(|p| p >= ORDER_MINIMUM - ORDER_TOLERANCE);
    Ok(EnergyCheck {
        d,
        a,
        radius,
        closed_form,
        extrapolated,
        relative_error,
        order,
        passed,
    })
}

fn profile_check(d: Dimension, a: f64, radius: f64, h: f64, opts: &SolverOptions) -> anyhow::Result<ProfileCheck> {
    let v = Potential::hardcore(a)?;
    let params = ScatteringParams::new(d, 1.0)?;
    let oracle = discrete_minimizer(&v, &params, radius, h)?;
    let solver = minimizer_profile_with(&v, &params, radius, opts)?;
    let sup_deviation = oracle
        .profile
        .iter()
        .map(|(r, f)| (f - solver.eval(r)).abs())
        .fold(0.0, f64::max);
    Ok(ProfileCheck {
        d,
        a,
        radius,
        sup_deviation,
        passed: sup_deviation <= PROFILE_TOLERANCE,
    })
}

pub fn verify(args: &VerifyArgs) -> anyhow::Result<Outcome> {
    json_only(&args.output, "verify")?;
    let opts = args.solver.options();
    let grid = oracle_grid();
    let cases = default_case_grid();
    let pool = thread_pool()?;
    let (energy, profile, inequalities) = pool.install(|| -> anyhow::Result<_> {
        let energy: Vec<EnergyCheck> = grid
            .par_iter()
            .map(|&(d, a, r)| energy_check(d, a, r, args.h))
            .collect::<anyhow::Result<_>>()?;
        let profile: Vec<ProfileCheck> = grid
            .par_iter()
            .map(|&(d, a, r)| profile_check(d, a, r, args.profile_h, &opts))
            .collect::<anyhow::Result<_>>()?;
        Ok((energy, profile, inequality_report(&cases)))
    })?;
    let passed = energy.iter().all(|c| c.passed) && profile.iter().all(|c| c.passed) && inequalities.passed;

    let inputs = VerifyInputs {
        energy_tolerance: ENERGY_TOLERANCE,
        order_minimum: ORDER_MINIMUM,
        order_tolerance: ORDER_TOLERANCE,
        profile_tolerance: PROFILE_TOLERANCE,
        cases,
    };
    let derived = VerifyDerived {
        energy,
        profile,
        inequalities,
        passed,
    };
    let settings = Settings {
        solver: opts,
        oracle_h: Some(args.h),
        oracle_profile_h: Some(args.profile_h),
    };
    let mut report = Report::new("verify", inputs, derived, settings);
    report.provenance = vec![
        Provenance::new("energy", "Richardson extrapolation of the discrete minimizer over h, h/2, h/4"),
        Provenance::new("profile", "sup over oracle nodes of |f_oracle - f_solver|"),
        Provenance::new("inequalities", "I <= i_bound, K <= k_bound, radius-R bound <= simplified bound"),
    ];
    if !passed {
        report.warnings.push("at least one verification check failed".into());
    }
    Ok(Outcome {
        output: json(&report)?,
        status: if passed { EXIT_OK } else { EXIT_NOT_CERTIFIED },
    })
}
