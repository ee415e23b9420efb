mod oracles;

use concurrence::measures::concurrence_pure;
use concurrence::random::{haar_isometry, seeded_rng};
use concurrence::states::{self, haar_random_pure, random_density};
use concurrence::tensor::{kron, partial_trace, purity};
use concurrence::{DensityMatrix, DimProfile, Partition};
use oracles::*;
use proptest::prelude::*;

fn dims_strategy() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(2usize..=3, 2..=4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cut_concurrence_is_symmetric(dims in dims_strategy(), seed in any::<u64>(), mask in 1usize..15) {
        let n = dims.len();
        let side: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        prop_assume!(!side.is_empty() && side.len() < n);
        let psi = haar_random_pure(&DimProfile::new(dims).unwrap(), seed);
        let cut = Partition::versus_rest(side, n).unwrap();
        let a = concurrence_pure(&psi, &cut).unwrap();
        let b = concurrence_pure(&psi, &cut.swapped()).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn schmidt_reductions_share_purity(dims in dims_strategy(), seed in any::<u64>(), mask in 1usize..15) {
        let n = dims.len();
        let side: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        prop_assume!(!side.is_empty() && side.len() < n);
        let profile = DimProfile::new(dims).unwrap();
        let psi = haar_random_pure(&profile, seed);
        let rest = profile.complement(&side);
        let pa = purity(&psi.reduced(&side).unwrap());
        let pb = purity(&psi.reduced(&rest).unwrap());
        prop_assert!((pa - pb).abs() < 1e-12);
    }

    #[test]
    fn kron_is_associative(seed in any::<u64>(), a in 1usize..4, b in 1usize..4, c in 1usize..4) {
        let mut rng = seeded_rng(seed, 0);
        let x = gaussian_density(&mut rng, a, a);
        let y = gaussian_density(&mut rng, b, b);
        let z = gaussian_density(&mut rng, c, c);
        let left = kron(&kron(&x, &y), &z);
        let right = kron(&x, &kron(&y, &z));
        prop_assert!(max_abs_diff(&left, &right) < 1e-14);
    }

    #[test]
    fn partial_traces_compose(dims in dims_strategy(), seed in any::<u64>(), drop_first in 0usize..4, drop_second in 0usize..3) {
        let n = dims.len();
        prop_assume!(n >= 3);
        let profile = DimProfile::new(dims).unwrap();
        let rho = random_density(&profile, 2, seed).unwrap();
        let first = drop_first % n;
        let keep1: Vec<usize> = (0..n).filter(|&p| p != first).collect();
        let second = drop_second % keep1.len();
        let step1 = partial_trace(&rho, &keep1).unwrap();
        let keep_local: Vec<usize> = (0..keep1.len()).filter(|&p| p != second).collect();
        let step2 = partial_trace(&step1, &keep_local).unwrap();
        let keep_direct: Vec<usize> = keep_local.iter().map(|&p| keep1[p]).collect();
        let direct = partial_trace(&rho, &keep_direct).unwrap();
        prop_assert!(max_abs_diff(step2.matrix(), direct.matrix()) < 1e-12);
    }

    #[test]
    fn isometry_ensembles_are_consistent(seed in any::<u64>(), rank in 1usize..5, extra in 0usize..4) {
        let profile = DimProfile::new(vec![2, 3]).unwrap();
        let rho = random_density(&profile, rank, seed).unwrap();
        let mut rng = seeded_rng(seed, 1);
        let e = concurrence::measures::decompose_from_isometry(&rho, &haar_isometry(&mut rng, rank + extra, rank)).unwrap();
        let total: f64 = e.members().iter().map(|(p, _)| p).sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        prop_assert!(e.members().iter().all(|(p, _)| *p > 0.0));
        prop_assert!(e.realization_error() < 1e-8);
    }
}

/// Haar average of `Tr ρ_A²` on `d_A ⊗ d_B` is `(d_A + d_B)/(d_A d_B + 1)`.
#[test]
fn haar_mean_reduced_purity() {
    for (da, db) in [(2, 2), (2, 3), (3, 3)] {
        let p = DimProfile::new(vec![da, db]).unwrap();
        let mean: f64 =
            (0..1000).map(|s| purity(&haar_random_pure(&p, s).reduced(&[0]).unwrap())).sum::<f64>() / 1000.0;
        let want = (da + db) as f64 / (da * db + 1) as f64;
        assert!((mean - want).abs() < 0.02, "{da}⊗{db}: mean purity {mean}, want {want}");
    }
}

#[test]
fn family_is_linear_in_t() {
    let r0 = states::paper_family_2223(0.0).unwrap();
    let r1 = states::paper_family_2223(1.0).unwrap();
    for k in 0..=20 {
        let t = k as f64 / 20.0;
        let rt = states::paper_family_2223(t).unwrap();
        let lin = r0.matrix() * concurrence::C64::new(1.0 - t, 0.0) + r1.matrix() * concurrence::C64::new(t, 0.0);
        assert!(max_abs_diff(rt.matrix(), &lin) < 1e-14);
    }
}

#[test]
fn antisymmetric_state_flips_sign_under_swaps() {
    let psi = states::antisymmetric_qutrit();
    for order in [[1, 0, 2], [2, 1, 0], [0, 2, 1]] {
        let swapped = psi.permute(&order).unwrap();
        for (a, b) in psi.amplitudes().iter().zip(swapped.amplitudes()) {
            assert_eq!(*a, -*b);
        }
    }
    for k in 0..3 {
        let r = psi.reduced(&[k]).unwrap();
        let want = nalgebra::DMatrix::identity(3, 3) * concurrence::C64::new(1.0 / 3.0, 0.0);
        assert!(max_abs_diff(r.matrix(), &want) < 1e-15);
    }
}

#[test]
fn catalog_states_are_valid() {
    for (name, _) in states::CATALOG {
        let spec = states::StateSpec::named(name).with("t", 0.5).with_dims(vec![2, 3]);
        let state = spec.build().unwrap();
        let rho: DensityMatrix = state.density();
        let report = concurrence::tensor::validate_density(rho.matrix(), &concurrence::Tolerances::default());
        assert!(report.passed, "{name}: {:?}", report.failures);
    }
}
