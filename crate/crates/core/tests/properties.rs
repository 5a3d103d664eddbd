use nlevel::*;
use proptest::prelude::*;

fn energies(max_n: usize) -> impl Strategy<Value = Vec<f64>> {
    (2..=max_n).prop_flat_map(|n| prop::collection::vec(-20.0..20.0f64, n))
}

fn hermitian(max_n: usize) -> impl Strategy<Value = ComplexMatrix> {
    (2..=max_n).prop_flat_map(|n| {
        prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64), n * n).prop_map(move |raw| {
            let a = ComplexMatrix::from_fn(n, |r, c| {
                let (re, im) = raw[r * n + c];
                Complex64::new(re, im)
            });
            (&a + &a.adjoint()).scale(Complex64::new(0.5, 0.0))
        })
    })
}

fn populations_diff(a: &Trajectory, b: &Trajectory) -> f64 {
    a.populations
        .iter()
        .zip(&b.populations)
        .flat_map(|(x, y)| x.iter().zip(y).map(|(p, q)| (p - q).abs()))
        .fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decomposition_round_trips(e in energies(12)) {
        let d = energies_to_deltas(&SystemSpec::undriven(e.clone())).unwrap();
        prop_assert!(d.pairing_residual() <= 1e-12);
        let back = deltas_to_energies(&d).unwrap();
        for (a, b) in back.iter().zip(&e) {
            prop_assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn decomposition_is_linear(e in energies(10), scale in -4.0..4.0f64) {
        let d = energies_to_deltas(&SystemSpec::undriven(e.clone())).unwrap();
        let scaled: Vec<f64> = e.iter().map(|x| x * scale).collect();
        let ds = energies_to_deltas(&SystemSpec::undriven(scaled)).unwrap();
        for (a, b) in d.values.iter().zip(&ds.values) {
            prop_assert!((a * scale - b).norm() <= 1e-13 * (1.0 + scale.abs()) * 20.0);
        }
    }

    #[test]
    fn full_hamiltonian_is_hermitian(
        e in energies(8),
        g in 0.0..5.0f64,
        omega in -5.0..5.0f64,
        t in -100.0..100.0f64,
        include_delta0: bool,
    ) {
        let mut spec = SystemSpec::driven(e, g, omega, DriveModel::Generalized);
        spec.include_delta0 = include_delta0;
        prop_assert!(build_full_hamiltonian(&spec, t).unwrap().hermitian_residual() <= 1e-12);
    }

    #[test]
    fn jacobi_decomposes_random_hermitian(h in hermitian(8)) {
        let n = h.dim();
        let eig = hermitian_eig(&h).unwrap();
        let lambda: Vec<_> = eig.values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let residual = (&h * &eig.vectors).max_abs_diff(&(&eig.vectors * &ComplexMatrix::from_diagonal(&lambda))).unwrap();
        prop_assert!(residual <= 1e-10, "residual {residual:e}");
        let ortho = (&eig.vectors.adjoint() * &eig.vectors).max_abs_diff(&ComplexMatrix::identity(n)).unwrap();
        prop_assert!(ortho <= 1e-10, "orthonormality {ortho:e}");
        prop_assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn exp_step_preserves_norm(h in hermitian(6), dt in -3.0..3.0f64, seed in 0usize..6) {
        let n = h.dim();
        let psi = StateVector::basis(n, seed % n).unwrap();
        let out = exp_step(&h, dt, &psi).unwrap();
        prop_assert!((out.norm() - 1.0).abs() <= 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn global_energy_offset_leaves_populations_unchanged(
        e in energies(5),
        offset in -10.0..10.0f64,
        g in 0.0..1.5f64,
        omega in 0.1..3.0f64,
    ) {
        let base = SystemSpec::driven(e.clone(), g, omega, DriveModel::Generalized);
        let shifted = SystemSpec::driven(e.iter().map(|x| x + offset).collect(), g, omega, DriveModel::Generalized);
        let mut with_constant = base.clone();
        with_constant.include_delta0 = true;
        let cfg = EvolutionConfig::new(5.0, 0.01, InitialState::Basis(0));
        let reference = evolve(&base, &cfg).unwrap();
        prop_assert!(populations_diff(&reference, &evolve(&shifted, &cfg).unwrap()) <= 1e-9);
        prop_assert!(populations_diff(&reference, &evolve(&with_constant, &cfg).unwrap()) <= 1e-9);
    }

    #[test]
    fn cosine_and_generalized_trajectories_agree(
        e0 in -3.0..3.0f64,
        e1 in -3.0..3.0f64,
        g in 0.0..2.0f64,
        omega in -3.0..3.0f64,
    ) {
        let cfg = EvolutionConfig { sample_every: 5, ..EvolutionConfig::new(10.0, 0.01, InitialState::Basis(1)) };
        let a = evolve(&SystemSpec::driven(vec![e0, e1], g, omega, DriveModel::Cosine2), &cfg).unwrap();
        let b = evolve(&SystemSpec::driven(vec![e0, e1], g, omega, DriveModel::Generalized), &cfg).unwrap();
        prop_assert_eq!(&a.times, &b.times);
        prop_assert!(populations_diff(&a, &b) <= 1e-12);
    }

    #[test]
    fn trajectory_rows_are_probability_vectors(
        e in energies(8),
        g in 0.0..3.0f64,
        omega in -3.0..3.0f64,
    ) {
        let n = e.len();
        let spec = SystemSpec::driven(e, g, omega, DriveModel::Generalized);
        let amps = (0..n).map(|k| Complex64::new(1.0, k as f64)).collect();
        let cfg = EvolutionConfig::new(3.0, 0.01, InitialState::Amplitudes(amps));
        let traj = evolve(&spec, &cfg).unwrap();
        for row in &traj.populations {
            prop_assert!((row.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
            prop_assert!(row.iter().all(|p| (-1e-12..=1.0 + 1e-12).contains(p)));
        }
        prop_assert!(traj.norm_errors.iter().all(|&x| x <= 1e-9));
    }
}

#[test]
fn algebra_identities_hold_through_sixteen_levels() {
    for n in 2..=16 {
        let s1 = build_shift(n).unwrap();
        let w = build_fourier(n).unwrap();
        assert!(similarity_diagonalize_shift(n).unwrap().max_abs_diff(&s1).unwrap() <= 1e-12, "n={n}");
        assert!((&w * &w.adjoint()).max_abs_diff(&ComplexMatrix::identity(n)).unwrap() <= 1e-12, "n={n}");
    }
}

#[test]
fn undriven_basis_states_are_stationary() {
    let spec = SystemSpec::driven(vec![0.0, 0.4, 1.7, 3.2], 0.0, 2.0, DriveModel::Generalized);
    for k in 0..4 {
        let traj = evolve(&spec, &EvolutionConfig::new(20.0, 0.1, InitialState::Basis(k))).unwrap();
        for row in &traj.populations {
            assert!((row[k] - 1.0).abs() <= 1e-12);
        }
    }
}

#[test]
fn full_transfer_under_resonant_rwa() {
    let g = 0.25;
    let period = std::f64::consts::TAU / g;
    let spec = SystemSpec::driven(vec![0.0, 1.5], g, -1.5, DriveModel::Rwa2);
    let traj = evolve(&spec, &EvolutionConfig::new(period, period / 2000.0, InitialState::Basis(0))).unwrap();
    let max_transfer = traj.populations.iter().map(|p| p[1]).fold(0.0, f64::max);
    assert!(max_transfer >= 1.0 - 1e-3, "max transfer {max_transfer}");
    let back = traj.populations.last().unwrap()[0];
    assert!((back - 1.0).abs() <= 1e-3, "returned population {back}");
}

#[test]
fn non_hermitian_step_is_a_numerical_error() {
    let bad = build_shift(3).unwrap();
    let err = exp_step(&bad, 0.1, &StateVector::basis(3, 0).unwrap()).unwrap_err();
    assert!(matches!(err, Error::NonHermitian { .. }));
    assert!(err.is_numerical());
}
