use hypgas_core::bounds::{
    condensate_fraction_lower, default_radius, diluteness_y, energy_bound_proviso, energy_upper_bound,
    quad_integrals, simplified_coefficients, simplified_upper_bound, trial_energy_bound, y0_branches,
    y0_threshold, y_cap, GasParameters,
};
use hypgas_core::scattering::minimizer_profile;
use hypgas_core::{Dimension, Potential, ScatteringParams};
use proptest::prelude::*;

const DIMS: [Dimension; 2] = [Dimension::Two, Dimension::Three];

#[test]
fn y0_threshold_is_sound() {
    for d in DIMS {
        for eps in [0.01, 0.1, 1.0] {
            for mu in [0.5, 1.0, 2.0] {
                for r0 in [0.5, 1.0] {
                    let y0 = y0_threshold(d, eps, mu, r0).unwrap();
                    for k in 0..100 {
                        let y = y0 * k as f64 / 99.0;
                        let e = simplified_upper_bound(d, y, mu, r0).unwrap();
                        assert!(e <= eps + 1e-12, "d = {d}, eps = {eps}, mu = {mu}, R0 = {r0}, Y = {y}: {e}");
                    }
                }
            }
        }
    }
}

#[test]
fn quadratic_root_identity() {
    let mut active = 0;
    for d in DIMS {
        for eps in [1e-4, 1e-3, 0.01, 0.1, 1.0] {
            for mu in [0.5, 1.0, 2.0] {
                for r0 in [0.01, 0.5, 1.0] {
                    let branches = y0_branches(d, eps, mu, r0).unwrap();
                    if branches.eps_branch_active() {
                        active += 1;
                        let (a_c, b_c) = simplified_coefficients(d, mu, r0);
                        let y0 = branches.value();
                        let e = a_c * y0 * (1.0 + b_c * y0);
                        assert!(((e - eps) / eps).abs() < 1e-12, "{e} vs {eps}");
                    } else {
                        assert_eq!(branches.value(), y_cap(d, r0).unwrap());
                    }
                }
            }
        }
    }
    assert!(active > 10);
}

#[test]
fn simplification_only_loosens() {
    for d in DIMS {
        for a in [0.05, 0.25, 0.5, 1.0] {
            for rho in [1e-5, 1e-4, 1e-3] {
                let r0 = a;
                let y = diluteness_y(d, rho, a).unwrap();
                let radius = default_radius(r0, a);
                if y > y_cap(d, r0).unwrap() || energy_bound_proviso(d, rho, a, radius).unwrap() >= 1.0 {
                    continue;
                }
                let tight = energy_upper_bound(d, rho, a, 1.0, radius).unwrap();
                let loose = simplified_upper_bound(d, y, 1.0, r0).unwrap();
                assert!(tight <= loose + 1e-12, "d = {d}, a = {a}, rho = {rho}: {tight} > {loose}");
            }
        }
    }
}

#[test]
fn trial_energy_from_true_minimizer_is_finite() {
    for d in DIMS {
        let v = Potential::hardcore(0.5).unwrap();
        let profile = minimizer_profile(&v, &ScatteringParams::new(d, 1.0).unwrap(), 1.5).unwrap();
        let t = quad_integrals(&profile, &v, 1.0, d).unwrap();
        let gas = GasParameters::new(d, 1e-3, 1.0, None).unwrap();
        assert!(gas.rho * t.i < 1.0);
        let e = trial_energy_bound(&gas, &t).unwrap();
        assert!(e.is_finite() && e >= 0.0);
    }
}

proptest! {
    #[test]
    fn simplified_bound_increases_in_y(r0 in 0.01..2.0f64, mu in 0.1..5.0f64, s in 0.0..1.0f64, t in 0.0..1.0f64, three in any::<bool>()) {
        let d = if three { Dimension::Three } else { Dimension::Two };
        let cap = y_cap(d, r0).unwrap();
        let (lo, hi) = if s < t { (s, t) } else { (t, s) };
        prop_assume!(hi - lo > 1e-9);
        let e_lo = simplified_upper_bound(d, lo * cap, mu, r0).unwrap();
        let e_hi = simplified_upper_bound(d, hi * cap, mu, r0).unwrap();
        prop_assert!(e_hi > e_lo);
    }

    #[test]
    fn fraction_monotone(e1 in 0.0..2.0f64, de in 1e-6..1.0f64, gap in 0.01..1.0f64, dg in 1e-6..1.0f64) {
        let f = condensate_fraction_lower(e1, gap).unwrap();
        prop_assert!(condensate_fraction_lower(e1 + de, gap).unwrap() < f);
        if e1 > 0.0 {
            prop_assert!(condensate_fraction_lower(e1, gap + dg).unwrap() > f);
        }
    }

    #[test]
    fn y_increases_with_density(a in 0.01..3.0f64, rho in 1e-6..1.0f64, three in any::<bool>()) {
        let d = if three { Dimension::Three } else { Dimension::Two };
        prop_assert!(diluteness_y(d, 2.0 * rho, a).unwrap() > diluteness_y(d, rho, a).unwrap());
    }
}
