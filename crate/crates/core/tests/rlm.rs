use std::f64::consts::{FRAC_PI_2, PI};

use planckian::quadrature::{uniform_breaks, GaussLegendre};
use planckian::rlm::*;
use planckian::special::fermi_dirac;
use proptest::prelude::*;

fn constant(energy: f64, g: f64, p0: f64) -> RlmConfig {
    RlmConfig::new(energy, 1.0, p0, CouplingSchedule::constant(g).unwrap()).unwrap()
}

fn decaying(energy: f64, a: f64, b: f64, p0: f64) -> RlmConfig {
    RlmConfig::new(energy, 1.0, p0, CouplingSchedule::decaying(a, b).unwrap()).unwrap()
}

/// Lorentzian average of the Fermi function after `ν = E + γ tan φ`.
fn lorentzian_average(energy: f64, g: f64) -> f64 {
    let gamma = 0.5 * g * g;
    let gl = GaussLegendre::new(20);
    let breaks = uniform_breaks(-FRAC_PI_2, FRAC_PI_2, 400);
    gl.composite(&breaks, |phi| fermi_dirac(energy + gamma * phi.tan(), 1.0)) / PI
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn constant_occupation_stays_a_probability(energy in -4.0f64..4.0, g in 0.1f64..3.0, p0 in 0.0f64..1.0, t in 0.0f64..30.0) {
        let p = rlm_occupation(&constant(energy, g, p0), t).unwrap();
        prop_assert!((-PROBABILITY_SLACK..=1.0 + PROBABILITY_SLACK).contains(&p), "{p}");
    }

    #[test]
    fn decaying_occupation_stays_a_probability(energy in -4.0f64..4.0, a in 0.2f64..2.0, b in 0.01f64..1.0, p0 in 0.0f64..1.0, t in 0.0f64..5.0) {
        let p = rlm_occupation_decaying(energy, 1.0, a, b, p0, t).unwrap();
        prop_assert!((-PROBABILITY_SLACK..=1.0 + PROBABILITY_SLACK).contains(&p), "{p}");
    }

    #[test]
    fn initial_occupation_decays_with_integrated_rate(energy in -3.0f64..3.0, g in 0.1f64..2.0, t in 0.0f64..10.0) {
        let full = rlm_occupation(&constant(energy, g, 1.0), t).unwrap();
        let empty = rlm_occupation(&constant(energy, g, 0.0), t).unwrap();
        prop_assert!((full - empty - (-g * g * t).exp()).abs() < 1e-9);
    }

    #[test]
    fn decaying_memory_is_a_power_law(energy in -3.0f64..3.0, a in 0.2f64..2.0, b in 0.01f64..1.0, t in 0.0f64..5.0) {
        let full = rlm_occupation_decaying(energy, 1.0, a, b, 1.0, t).unwrap();
        let empty = rlm_occupation_decaying(energy, 1.0, a, b, 0.0, t).unwrap();
        prop_assert!((full - empty - (b / (t + b)).powf(a)).abs() < 1e-9);
    }

    #[test]
    fn general_schedule_matches_closed_form(energy in -2.0f64..2.0, a in 0.3f64..1.5, b in 0.02f64..0.5, p0 in 0.0f64..1.0, t in 0.0f64..2.0) {
        let general = rlm_occupation(&decaying(energy, a, b, p0), t).unwrap();
        let closed = rlm_occupation_decaying(energy, 1.0, a, b, p0, t).unwrap();
        prop_assert!((general - closed).abs() < 1e-5, "{general} vs {closed}");
    }
}

#[test]
fn steady_state_matches_lorentzian_average() {
    for energy in [-3.0, -0.4, 0.0, 1.0, 4.0] {
        for g in [0.2, 0.9, 2.5] {
            let closed = rlm_steady_state_constant(energy, g, 1.0).unwrap();
            let direct = lorentzian_average(energy, g);
            assert!((closed - direct).abs() < 1e-8, "E={energy} g={g}: {closed} vs {direct}");
        }
    }
}

#[test]
fn finite_coupling_window_remembers_initial_state() {
    for schedule in [
        CouplingSchedule::constant(0.8).unwrap().with_cutoff(1.5).unwrap(),
        CouplingSchedule::decaying(0.5, 0.1).unwrap().with_cutoff(1.5).unwrap(),
    ] {
        let late = |p0| rlm_occupation(&RlmConfig::new(1.0, 1.0, p0, schedule).unwrap(), 40.0).unwrap();
        assert!(late(1.0) - late(0.0) > 1e-3);
    }
    // without the window the constant machine forgets
    let late = |p0| rlm_occupation(&constant(1.0, 0.8, p0), 60.0).unwrap();
    assert!((late(1.0) - late(0.0)).abs() < 1e-9);
}

#[test]
fn thermalization_time_is_first_crossing() {
    let cfg = constant(1.0, 0.5, 0.0);
    let eps = 0.05;
    let ThermalizationOutcome::Reached(t) = thermalization_time(&cfg, eps).unwrap() else {
        panic!("weak coupling should thermalize");
    };
    assert!(rlm_bures_to_thermal(&cfg, t).unwrap() <= eps + 1e-9);
    let times: Vec<f64> = (0..200).map(|k| t * k as f64 / 200.0).collect();
    let tr = trajectory(&cfg, &times).unwrap();
    assert!(tr.d_to_thermal.iter().all(|&d| d > eps));
}

#[test]
fn thermalization_times_agree_with_single_queries() {
    let cfg = constant(1.0, 0.7, 1.0);
    let eps = [0.02, 0.1, 0.3];
    let many = thermalization_times(&cfg, &eps).unwrap();
    for (e, m) in eps.iter().zip(&many) {
        assert_eq!(*m, thermalization_time(&cfg, *e).unwrap());
    }
}

#[test]
fn forbidden_region_margins_track_speed_limit() {
    let cfg = decaying(0.0, 1.0, 0.01, 0.0);
    let times: Vec<f64> = (0..50).map(|k| k as f64 * 0.02).collect();
    let report = forbidden_region_check(&cfg, 0.0, 1.0, &times).unwrap();
    for k in 0..times.len() {
        let far = report.first.d_to_thermal[k].max(report.second.d_to_thermal[k]);
        assert!((report.margins[k] - (far - report.rhs[k])).abs() < 1e-15);
        if k > 0 {
            assert!((report.rhs[k - 1] - report.rhs[k] - 0.02 / 4.0).abs() < 1e-12);
        }
    }
    assert!(report.min_margin() >= -FORBIDDEN_REGION_TOL);
}

#[test]
fn config_validation() {
    assert!(CouplingSchedule::constant(-1.0).is_err());
    assert!(CouplingSchedule::decaying(0.0, 0.1).is_err());
    assert!(CouplingSchedule::decaying(1.0, 0.0).is_err());
    assert!(RlmConfig::new(0.0, 1.0, 1.5, CouplingSchedule::constant(1.0).unwrap()).is_err());
    assert!(RlmConfig::new(0.0, 0.0, 0.5, CouplingSchedule::constant(1.0).unwrap()).is_err());
    assert!(trajectory(&constant(0.0, 1.0, 0.5), &[1.0, 0.5]).is_err());
}
