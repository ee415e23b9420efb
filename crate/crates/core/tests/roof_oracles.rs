mod oracles;

use concurrence::measures::{
    coa_upper_bound, concurrence_assistance, concurrence_two_qubit, convex_roof_concurrence, decompose_from_isometry,
    OptimizerOptions,
};
use concurrence::random::{haar_isometry, seeded_rng};
use concurrence::states::random_density;
use concurrence::{DensityMatrix, DimProfile, Partition};
use oracles::*;

fn cut() -> Partition {
    Partition::new(vec![0], vec![1]).unwrap()
}

#[test]
fn closed_form_matches_independent_oracle() {
    let p = DimProfile::new(vec![2, 2]).unwrap();
    let mut rng = seeded_rng(21, 0);
    for s in 0..200 {
        let m = gaussian_density(&mut rng, 4, 1 + s % 4);
        let rho = DensityMatrix::new(m.clone(), p.clone()).unwrap();
        let got = concurrence_two_qubit(&rho).unwrap();
        // The oracle takes square roots of near-zero eigenvalues.
        assert!((got - wootters(&m)).abs() < 1e-7, "state {s}");
    }
}

#[test]
fn roof_matches_closed_form_on_two_qubits() {
    let p = DimProfile::new(vec![2, 2]).unwrap();
    let opts = OptimizerOptions::new(22);
    for s in 0..40 {
        let rho = random_density(&p, 1 + (s % 4) as usize, 1000 + s).unwrap();
        let est = convex_roof_concurrence(&rho, &cut(), &opts).unwrap();
        let want = wootters(rho.matrix());
        assert!(est.value >= want - 1e-9, "roof estimate below the true minimum");
        assert!(est.value - want < 5e-3, "state {s}: {} vs {want}", est.value);
    }
}

#[test]
fn assistance_matches_lambda_sum_on_two_qubits() {
    let p = DimProfile::new(vec![2, 2]).unwrap();
    let opts = OptimizerOptions::new(23);
    for s in 0..30 {
        let rho = random_density(&p, 2 + (s % 3) as usize, 2000 + s).unwrap();
        let est = concurrence_assistance(&rho, &cut(), &opts).unwrap();
        let want = two_qubit_assistance(rho.matrix());
        assert!(est.value <= want + 1e-9, "assistance estimate above the true maximum");
        assert!(want - est.value < 5e-3, "state {s}: {} vs {want}", est.value);
    }
}

#[test]
fn assistance_never_exceeds_purity_cap() {
    let opts = OptimizerOptions::new(24).with_restarts(4);
    for dims in [vec![2, 2], vec![2, 3], vec![3, 3]] {
        let p = DimProfile::new(dims.clone()).unwrap();
        for s in 0..10u64 {
            let rho = random_density(&p, 1 + s as usize % p.total(), 3000 + s).unwrap();
            let est = concurrence_assistance(&rho, &cut(), &opts).unwrap();
            let cap_a = (2.0 * (1.0 - purity(&brute_partial_trace(rho.matrix(), &dims, &[0])))).max(0.0).sqrt();
            let cap_b = (2.0 * (1.0 - purity(&brute_partial_trace(rho.matrix(), &dims, &[1])))).max(0.0).sqrt();
            assert!(est.value <= cap_a.min(cap_b) + 1e-9);
            assert!((coa_upper_bound(&rho, &cut()).unwrap() - cap_a.min(cap_b)).abs() < 1e-12);
        }
    }
}

#[test]
fn witnesses_realize_the_state() {
    let opts = OptimizerOptions::new(25);
    let p = DimProfile::new(vec![2, 3]).unwrap();
    for s in 0..5 {
        let rho = random_density(&p, 3, 4000 + s).unwrap();
        for est in [
            convex_roof_concurrence(&rho, &cut(), &opts).unwrap(),
            concurrence_assistance(&rho, &cut(), &opts).unwrap(),
        ] {
            let w = &est.witness;
            let total: f64 = w.members().iter().map(|(p, _)| p).sum();
            assert!((total - 1.0).abs() < 1e-12);
            assert!(w.realization_error() < 1e-8);
            let avg = w
                .average(|psi| concurrence::measures::concurrence_pure(psi, &cut()))
                .unwrap();
            // Near-product members turn 1e-16 purity noise into ~1e-8.
            assert!((avg - est.value).abs() < 1e-7, "{avg} vs {}", est.value);
        }
    }
}

#[test]
fn any_isometry_gives_a_valid_ensemble() {
    let p = DimProfile::new(vec![3, 3]).unwrap();
    for s in 0..20u64 {
        let rho = random_density(&p, 4, 5000 + s).unwrap();
        let mut rng = seeded_rng(26, s);
        let k = 4 + (s % 5) as usize;
        let e = decompose_from_isometry(&rho, &haar_isometry(&mut rng, k, 4)).unwrap();
        assert!(e.len() <= k);
        assert!(e.realization_error() < 1e-10);
        let roof = e.average(|psi| concurrence::measures::concurrence_pure(psi, &cut())).unwrap();
        // Any ensemble average lies between the roof and the assistance.
        assert!(roof <= coa_upper_bound(&rho, &cut()).unwrap() + 1e-9);
    }
}
