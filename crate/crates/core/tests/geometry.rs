use nalgebra::DVector;
use planckian::quantum::*;
use planckian::random::*;
use planckian::Complex64;
use proptest::prelude::*;

/// Closed-form qubit fidelity `Tr ρσ + 2√(det ρ det σ)`. Determinants at
/// rounding level belong to pure states and are set to zero.
fn qubit_fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
    let overlap = (rho.matrix() * sigma.matrix()).trace().re;
    let det = |m: &DensityMatrix| {
        let d = m.matrix().determinant().re;
        if d < 1e-14 { 0.0 } else { d }
    };
    overlap + 2.0 * (det(rho) * det(sigma)).sqrt()
}

fn dim() -> impl Strategy<Value = usize> {
    prop_oneof![Just(2usize), Just(3), Just(4)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn metric_axioms(seed in any::<u64>(), d in dim(), rank in 1usize..=4) {
        let mut rng = seeded(seed);
        let a = random_density_rank(&mut rng, d, rank.min(d));
        let b = random_density(&mut rng, d);
        let c = random_density_rank(&mut rng, d, 1);
        let ab = bures_angle(&a, &b).unwrap();
        prop_assert!((ab - bures_angle(&b, &a).unwrap()).abs() < 1e-9);
        prop_assert!(bures_angle(&a, &a).unwrap() < 1e-9);
        prop_assert!(bures_angle(&c, &c).unwrap() < 1e-9);
        let slack = ab + bures_angle(&b, &c).unwrap() - bures_angle(&a, &c).unwrap();
        prop_assert!(slack >= -1e-9, "triangle slack {slack}");
    }

    #[test]
    fn squared_angle_is_jointly_convex(seed in any::<u64>(), d in dim(), k in 1u32..=9) {
        let lambda = k as f64 / 10.0;
        let mut rng = seeded(seed);
        let (r1, r2, s1, s2) = (
            random_density(&mut rng, d),
            random_density_rank(&mut rng, d, 1),
            random_density(&mut rng, d),
            random_density(&mut rng, d),
        );
        let lhs = bures_angle(&r1.mix(&r2, lambda).unwrap(), &s1.mix(&s2, lambda).unwrap()).unwrap().powi(2);
        let rhs = lambda * bures_angle(&r1, &s1).unwrap().powi(2) + (1.0 - lambda) * bures_angle(&r2, &s2).unwrap().powi(2);
        prop_assert!(lhs <= rhs + 1e-9, "{lhs} > {rhs}");
    }

    #[test]
    fn partial_trace_never_increases_angle(seed in any::<u64>(), machine in 2usize..=3) {
        let mut rng = seeded(seed);
        let d = 2 * machine;
        let (rho, sigma) = (random_density(&mut rng, d), random_density(&mut rng, d));
        let full = bures_angle(&rho, &sigma).unwrap();
        for keep in [Subsystem::System, Subsystem::Machine] {
            let reduced = bures_angle(
                &partial_trace(&rho, (2, machine), keep).unwrap(),
                &partial_trace(&sigma, (2, machine), keep).unwrap(),
            ).unwrap();
            prop_assert!(reduced <= full + 1e-9);
        }
    }

    #[test]
    fn gibbs_state_ignores_energy_offset(seed in any::<u64>(), d in dim(), shift in -20.0f64..20.0, beta in 0.05f64..5.0) {
        let mut rng = seeded(seed);
        let h = random_hermitian(&mut rng, d);
        let a = gibbs_state(&h, beta).unwrap();
        let b = gibbs_state(&h.shifted(shift), beta).unwrap();
        prop_assert!((a.matrix() - b.matrix()).camax() < 1e-12);
    }

    #[test]
    fn qubit_fidelity_matches_closed_form(seed in any::<u64>(), rank in 1usize..=2) {
        let mut rng = seeded(seed);
        let (rho, sigma) = (random_density_rank(&mut rng, 2, rank), random_density(&mut rng, 2));
        prop_assert!((fidelity(&rho, &sigma).unwrap() - qubit_fidelity(&rho, &sigma)).abs() < 1e-10);
    }

    #[test]
    fn bures_distance_and_angle_agree(seed in any::<u64>(), d in dim()) {
        let mut rng = seeded(seed);
        let (rho, sigma) = (random_density(&mut rng, d), random_density(&mut rng, d));
        let root_f = sqrt_fidelity(&rho, &sigma).unwrap();
        prop_assert!((bures_angle(&rho, &sigma).unwrap() - root_f.acos()).abs() < 1e-12);
        prop_assert!((bures_distance(&rho, &sigma).unwrap() - (2.0 * (1.0 - root_f)).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn classical_angle_matches_diagonal_states(p in 0.0f64..1.0, q in 0.0f64..1.0) {
        let (a, b) = ([p, 1.0 - p], [q, 1.0 - q]);
        let quantum = bures_angle(&DensityMatrix::from_diagonal(&a).unwrap(), &DensityMatrix::from_diagonal(&b).unwrap()).unwrap();
        prop_assert!((bures_angle_classical(&a, &b).unwrap() - quantum).abs() < 1e-12);
    }

    #[test]
    fn eigendecomposition_identities(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let h = random_hermitian(&mut rng, 4);
        let s = h.eig();
        let m = h.matrix();
        let trace: f64 = s.eigenvalues.iter().sum();
        let det: f64 = s.eigenvalues.iter().product();
        prop_assert!((trace - m.trace().re).abs() < 1e-11);
        prop_assert!((det - m.determinant().re).abs() < 1e-10 * (1.0 + det.abs()));
        for k in 0..4 {
            let v = s.eigenvectors.column(k);
            let residual = (m * v - v * Complex64::from(s.eigenvalues[k])).norm();
            prop_assert!(residual < 1e-11);
        }
        prop_assert!(s.eigenvalues.as_slice().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn partial_trace_matches_index_loop(seed in any::<u64>(), ds in 1usize..=3, dm in 1usize..=3) {
        let mut rng = seeded(seed);
        let rho = random_density(&mut rng, ds * dm);
        let m = rho.matrix();
        let sys = partial_trace(&rho, (ds, dm), Subsystem::System).unwrap();
        let mac = partial_trace(&rho, (ds, dm), Subsystem::Machine).unwrap();
        for i in 0..ds {
            for k in 0..ds {
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..dm {
                    acc += m[(i * dm + j, k * dm + j)];
                }
                prop_assert!((sys.matrix()[(i, k)] - acc).norm() < 1e-14);
            }
        }
        for j in 0..dm {
            for l in 0..dm {
                let mut acc = Complex64::new(0.0, 0.0);
                for i in 0..ds {
                    acc += m[(i * dm + j, i * dm + l)];
                }
                prop_assert!((mac.matrix()[(j, l)] - acc).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn propagation_preserves_spectrum(seed in any::<u64>(), t in 0.0f64..3.0) {
        let mut rng = seeded(seed);
        let (h0, h1) = (random_hermitian(&mut rng, 3), random_hermitian(&mut rng, 3));
        let sched = Schedule::piecewise(vec![
            Segment { start: 0.0, end: 1.5, hamiltonian: h0 },
            Segment { start: 1.5, end: 3.0, hamiltonian: h1 },
        ]).unwrap();
        let rho = random_density(&mut rng, 3);
        let out = propagate(&rho, &sched, t, default_steps(&sched, t)).unwrap();
        prop_assert!((out.trace() - 1.0).abs() < 1e-12);
        prop_assert!((out.purity() - rho.purity()).abs() < 1e-12);
    }
}

#[test]
fn zero_temperature_gibbs_state_is_ground_projector() {
    let h = HermitianOperator::from_real_diagonal(&[1.0, -2.0, -2.0]);
    let w = gibbs_state(&h, f64::INFINITY).unwrap();
    assert_eq!(w.populations(), vec![0.0, 0.5, 0.5]);
}

#[test]
fn pure_state_fidelity_is_squared_overlap() {
    let a = DVector::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
    let s = 0.5f64.sqrt();
    let b = DVector::from_vec(vec![Complex64::new(s, 0.0), Complex64::new(0.0, s)]);
    let f = fidelity(&DensityMatrix::pure(&a).unwrap(), &DensityMatrix::pure(&b).unwrap()).unwrap();
    assert!((f - 0.5).abs() < 1e-14);
}

#[test]
fn midpoint_error_quarters_when_steps_double() {
    let sched = Schedule::parametric(0.0, 2.0, 2.0, 2, |t| {
        HermitianOperator::pauli_z().add_scaled(&HermitianOperator::pauli_x(), t.cos()).unwrap()
    })
    .unwrap();
    let exact = unitary(&sched, 2.0, 4096).unwrap();
    let err = |n| (unitary(&sched, 2.0, n).unwrap() - &exact).norm();
    let ratio = err(40) / err(80);
    assert!((ratio - 4.0).abs() < 0.2, "ratio {ratio}");
}
