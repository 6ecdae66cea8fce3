use planckian::bound::{pairwise_chi, Epsilon};
use planckian::machines::*;
use planckian::quantum::*;
use planckian::random::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn optimal_time_saturates_bound(seed in any::<u64>(), d in 2usize..=3, beta in 0.1f64..4.0) {
        let mut rng = seeded(seed);
        let (h1, h2) = (random_hermitian(&mut rng, d), random_hermitian(&mut rng, d));
        let task = TwoPointTask::new(h1.clone(), h2.clone(), beta).unwrap();
        let tau = optimal_two_point_time(&task).unwrap();
        let chi = pairwise_chi(&h1, &h2, beta, Epsilon::zero()).unwrap();
        prop_assert!((tau - beta * chi).abs() < 1e-12);
    }

    #[test]
    fn discrimination_reaches_gibbs_angle(seed in any::<u64>(), d in 2usize..=3, beta in 0.1f64..4.0) {
        let mut rng = seeded(seed);
        let task = TwoPointTask::new(random_hermitian(&mut rng, d), random_hermitian(&mut rng, d), beta).unwrap();
        let tau = optimal_two_point_time(&task).unwrap();
        let angle = discrimination_overlap(&task, tau).unwrap().sqrt().acos();
        let target = bures_angle(&gibbs_state(&task.h1, beta).unwrap(), &gibbs_state(&task.h2, beta).unwrap()).unwrap();
        prop_assert!((angle - target).abs() < 1e-10);
    }

    #[test]
    fn purification_overlap_reaches_fidelity(p in 0.01f64..0.99, q in 0.01f64..0.99) {
        // Uhlmann: the best machine-side unitary achieves the fidelity.
        let best = qubit_purification_overlap([p, 1.0 - p], [q, 1.0 - q]);
        let f = fidelity(&DensityMatrix::from_diagonal(&[p, 1.0 - p]).unwrap(), &DensityMatrix::from_diagonal(&[q, 1.0 - q]).unwrap()).unwrap();
        prop_assert!((best - f).abs() < 1e-9);
    }
}

#[test]
fn optimal_time_grows_with_inverse_temperature() {
    let (h1, h2) = (HermitianOperator::zeros(2), HermitianOperator::from_real_diagonal(&[0.0, 1.0]));
    let mut prev = 0.0;
    for k in 1..=60 {
        let beta = 0.1 * k as f64;
        let tau = optimal_two_point_time(&TwoPointTask::new(h1.clone(), h2.clone(), beta).unwrap()).unwrap();
        assert!(tau > prev, "β = {beta}");
        prev = tau;
    }
}

#[test]
fn discrimination_overlap_is_periodic() {
    let task = TwoPointTask::new(HermitianOperator::zeros(2), HermitianOperator::pauli_z(), 1.0).unwrap();
    let period = 2.0 * std::f64::consts::PI / task.kappa_norm();
    assert!((discrimination_overlap(&task, period).unwrap() - 1.0).abs() < 1e-14);
    assert!(discrimination_overlap(&task, 0.5 * period).unwrap() < 1e-14);
    assert!(discrimination_overlap(&task, -1.0).is_err());
}
