use proptest::prelude::*;
use pt_entangle::dynamics::{damped_state, evolve_exact, DensityMatrix, EvolutionSpec};
use pt_entangle::eigen::mat_exp_2x2_hermitian;
use pt_entangle::matrix::{tensor_product, Complex, ComplexMatrix};
use pt_entangle::metrics::{
    analyze, bell_max, concurrence, concurrence_pure_oracle, purity, steering_parameter,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_amplitudes(rng: &mut impl Rng) -> [Complex; 4] {
    loop {
        let a: [Complex; 4] = std::array::from_fn(|_| {
            Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let n: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 0.1 {
            return a.map(|z| z / n);
        }
    }
}

fn random_mixed(rng: &mut impl Rng) -> DensityMatrix {
    let mut a = ComplexMatrix::zeros(4).unwrap();
    // Rank 1 to 4, so the sample includes both pure and full-rank states.
    let rank = rng.gen_range(1..=4);
    for i in 0..4 {
        for j in 0..rank {
            a[(i, j)] = Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        }
    }
    let m = a * a.adjoint();
    let t = m.trace().re;
    DensityMatrix::new(m.scale_re(1.0 / t)).unwrap()
}

fn random_unitary(rng: &mut impl Rng) -> ComplexMatrix {
    let h = ComplexMatrix::from_rows(&[
        [
            Complex::new(rng.gen_range(-2.0..2.0), 0.0),
            Complex::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
        ],
        [
            Complex::new(0.0, 0.0),
            Complex::new(rng.gen_range(-2.0..2.0), 0.0),
        ],
    ])
    .unwrap();
    let mut h = h;
    h[(1, 0)] = h[(0, 1)].conj();
    mat_exp_2x2_hermitian(&h, 1.0).unwrap()
}

fn bell() -> DensityMatrix {
    let h = Complex::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let z = Complex::new(0.0, 0.0);
    DensityMatrix::from_pure(&[h, z, z, h]).unwrap()
}

#[test]
fn concurrence_matches_pure_state_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let psi = random_amplitudes(&mut rng);
        let rho = DensityMatrix::from_pure(&psi).unwrap();
        let c = concurrence(&rho, false).unwrap();
        let oracle = concurrence_pure_oracle(&psi).unwrap();
        assert!((c - oracle).abs() < 1e-8, "{c} vs {oracle}");
    }
}

#[test]
fn pure_states_satisfy_bell_concurrence_relation() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..300 {
        let psi = random_amplitudes(&mut rng);
        let rho = DensityMatrix::from_pure(&psi).unwrap();
        let c = concurrence_pure_oracle(&psi).unwrap();
        let b = bell_max(&rho).unwrap();
        assert!((b - 2.0 * (1.0 + c * c).sqrt()).abs() < 1e-9);
    }
}

#[test]
fn local_unitaries_leave_measures_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..200 {
        let rho = random_mixed(&mut rng);
        let u = tensor_product(&random_unitary(&mut rng), &random_unitary(&mut rng)).unwrap();
        let rotated = DensityMatrix::new(u * *rho.matrix() * u.adjoint()).unwrap();
        let c0 = concurrence(&rho, false).unwrap();
        let c1 = concurrence(&rotated, false).unwrap();
        assert!((c0 - c1).abs() < 1e-8, "{c0} vs {c1}");
        let b0 = bell_max(&rho).unwrap();
        let b1 = bell_max(&rotated).unwrap();
        assert!((b0 - b1).abs() < 1e-8);
        assert!((purity(&rho).unwrap() - purity(&rotated).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn werner_states() {
    let id = ComplexMatrix::identity(4).unwrap().scale_re(0.25);
    for k in 0..=20 {
        let p = k as f64 / 20.0;
        let rho = DensityMatrix::new(bell().matrix().scale_re(p) + id.scale_re(1.0 - p)).unwrap();
        let c = concurrence(&rho, false).unwrap();
        assert!(
            (c - ((3.0 * p - 1.0) / 2.0).max(0.0)).abs() < 1e-8,
            "p = {p}: {c}"
        );
        assert!((bell_max(&rho).unwrap() - 2.0 * 2f64.sqrt() * p).abs() < 1e-12);
        assert!((steering_parameter(&rho, 3).unwrap().0 - 3.0 * p * p).abs() < 1e-12);
    }
}

#[test]
fn rabi_steering_law() {
    for &g in &[1.0, 0.4] {
        for k in 0..=100 {
            let t = 0.0628 * k as f64;
            let rho = evolve_exact(&bell(), &EvolutionSpec::rabi(g).unwrap(), t).unwrap();
            let cos = (2.0 * g * t).cos();
            let s3 = steering_parameter(&rho, 3).unwrap().0;
            assert!((s3 - (1.0 + 2.0 * cos * cos)).abs() < 1e-7);
            let s2 = steering_parameter(&rho, 2).unwrap().0;
            assert!((s2 - (1.0 + cos * cos)).abs() < 1e-7);
            assert!((concurrence(&rho, false).unwrap() - 1.0).abs() < 1e-8);
        }
    }
}

#[test]
fn damping_concurrence_decays_monotonically() {
    let mut previous = f64::INFINITY;
    for k in 0..=60 {
        let t = 0.05 * k as f64;
        let c = concurrence(&damped_state(t, 1.0).unwrap(), false).unwrap();
        assert!((c - (-t / 2.0).exp()).abs() < 1e-9);
        assert!(c < previous);
        previous = c;
    }
}

#[test]
fn product_states_are_classical() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..200 {
        let a = random_mixed(&mut rng);
        let r1 = a.reduced(pt_entangle::matrix::Qubit::Two);
        let b = random_mixed(&mut rng);
        let r2 = b.reduced(pt_entangle::matrix::Qubit::One);
        let rho = DensityMatrix::new(tensor_product(&r1, &r2).unwrap()).unwrap();
        let report = analyze(&rho).unwrap();
        assert!(report.concurrence < 1e-8);
        assert!(report.bell_max <= 2.0 + 1e-12);
        assert!(report.s3 <= 1.0 + 1e-12);
        assert!(report.reduced_1.max_abs_diff(&r1) < 1e-12);
        assert!(report.reduced_2.max_abs_diff(&r2) < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn measures_stay_in_range(seed in any::<u64>()) {
        let rho = random_mixed(&mut ChaCha8Rng::seed_from_u64(seed));
        let r = analyze(&rho).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&r.concurrence));
        prop_assert!(r.bell_max <= 2.0 * 2f64.sqrt() + 1e-12);
        prop_assert!(r.s3 >= r.s2 - 1e-15);
        prop_assert!(r.s3 <= 3.0 + 1e-12);
        prop_assert!((0.25 - 1e-12..=1.0 + 1e-12).contains(&r.purity));
    }

    #[test]
    fn auto_normalize_scales_out(seed in any::<u64>(), k in 0.1f64..10.0) {
        let rho = random_mixed(&mut ChaCha8Rng::seed_from_u64(seed));
        let scaled = DensityMatrix::new(rho.matrix().scale_re(k)).unwrap();
        let c0 = concurrence(&rho, false).unwrap();
        prop_assert!((concurrence(&scaled, true).unwrap() - c0).abs() < 1e-9);
        if (k - 1.0).abs() > 1e-6 {
            prop_assert!(concurrence(&scaled, false).is_err());
        }
    }
}
