use std::collections::BTreeMap;

use concbound::bipartite::{
    all_subsets, build_operator, concurrence_pure, concurrence_pure_sumrule,
    decomposition_average, delta_k, lambda_spectrum, CoefficientVector, SubsetSelector,
};
use concbound::generators::{bipartite_generators, Bipartition};
use concbound::numerics::{hermitian_eig, singular_values, takagi, CMatrix, C64};
use concbound::optimizer::{optimize_bound_bipartite, OptimizerConfig};
use concbound::report::BoundReport;
use concbound::states::{
    random_decomposition, random_density, random_pure, random_unitary, w_noise,
};
use proptest::prelude::*;

fn weights(k: usize) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec((0.0..=1.0f64, 0.0..std::f64::consts::TAU), k)
        .prop_map(|v| v.into_iter().map(|(r, t)| C64::from_polar(r, t)).collect())
}

fn subset_and_weights(n: usize) -> impl Strategy<Value = (SubsetSelector, Vec<C64>)> {
    (1..=3usize)
        .prop_flat_map(move |k| (prop::sample::subsequence((0..n).collect::<Vec<_>>(), k), weights(k)))
        .prop_map(move |(idx, w)| (SubsetSelector::new(idx, n).unwrap(), w))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn delta_is_homogeneous(seed in 0u64..10_000, rank in 1usize..=9, (t, u) in subset_and_weights(9), c in 0.05..1.0f64, phi in 0.0..std::f64::consts::TAU) {
        let g = bipartite_generators(3, 3).unwrap();
        let rho = random_density(&[3, 3], rank, seed).unwrap();
        let base = delta_k(&rho, &g, &t, &CoefficientVector::new(u.clone()).unwrap()).unwrap();
        let scaled: Vec<C64> = u.iter().map(|z| z * C64::from_polar(c, phi)).collect();
        let d = delta_k(&rho, &g, &t, &CoefficientVector::new(scaled).unwrap()).unwrap();
        prop_assert!((d - c * base).abs() <= 1e-9);
    }

    #[test]
    fn delta_below_every_decomposition(seed in 0u64..10_000, rank in 1usize..=6, extra in 0usize..4, (t, u) in subset_and_weights(9)) {
        let g = bipartite_generators(3, 3).unwrap();
        let rho = random_density(&[3, 3], rank, seed).unwrap();
        let u = CoefficientVector::new(u).unwrap();
        let delta = delta_k(&rho, &g, &t, &u).unwrap();
        let dec = random_decomposition(&rho, rank + extra, seed ^ 0xdead).unwrap();
        let avg = decomposition_average(&dec, &build_operator(&g, &t, &u).unwrap()).unwrap();
        prop_assert!(delta <= avg + 1e-8, "{} > {}", delta, avg);
    }

    #[test]
    fn spectrum_nonnegative_and_sorted(seed in 0u64..10_000, (t, u) in subset_and_weights(9)) {
        let g = bipartite_generators(3, 3).unwrap();
        let rho = random_density(&[3, 3], 3, seed).unwrap();
        let s = build_operator(&g, &t, &CoefficientVector::new(u).unwrap()).unwrap();
        let l = lambda_spectrum(&rho, &s).unwrap();
        prop_assert_eq!(l.len(), 9);
        prop_assert!(l.iter().all(|&x| x >= 0.0));
        prop_assert!(l.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn sum_rule_matches_purity(seed in 0u64..100_000, m in 2usize..=4, n in 2usize..=3) {
        let psi = random_pure(&[m, n], seed).unwrap();
        let g = bipartite_generators(m, n).unwrap();
        let split = Bipartition::first_vs_rest(2).unwrap();
        let a = concurrence_pure(&psi, &split).unwrap();
        let b = concurrence_pure_sumrule(&psi, &g).unwrap();
        prop_assert!((a - b).abs() <= 1e-9);
    }

    #[test]
    fn hermitian_eig_reconstructs(seed in 0u64..10_000, n in 1usize..=12) {
        let u = random_unitary(n, seed);
        let d: Vec<f64> = (0..n).map(|i| (i as f64 - 3.0) * 0.7).collect();
        let h = u.matmul(&CMatrix::from_real_diag(&d)).matmul(&u.adjoint());
        let eig = hermitian_eig(&h, 1e-9).unwrap();
        prop_assert!(eig.reconstruct_with(|x| x).max_abs_diff(&h) <= 1e-10);
        for (got, want) in eig.values.iter().zip(&d) {
            prop_assert!((got - want).abs() <= 1e-10);
        }
    }

    #[test]
    fn singular_values_are_unitarily_invariant(seed in 0u64..10_000, n in 1usize..=9) {
        let u = random_unitary(n, seed);
        let v = random_unitary(n, seed + 1);
        let d: Vec<f64> = (0..n).map(|i| if i % 3 == 0 { 0.0 } else { 1.0 / (i + 1) as f64 }).collect();
        let a = u.matmul(&CMatrix::from_real_diag(&d)).matmul(&v);
        let mut want = d.clone();
        want.sort_by(|x, y| y.total_cmp(x));
        let got = singular_values(&a).unwrap();
        for (g, w) in got.iter().zip(&want) {
            prop_assert!((g - w).abs() <= 1e-12);
        }
    }

    #[test]
    fn takagi_reconstructs(seed in 0u64..10_000, n in 1usize..=8) {
        let u = random_unitary(n, seed);
        let d: Vec<f64> = (0..n).map(|i| ((i * 7 + 3) % 5) as f64 * 0.25).collect();
        let y = u.matmul(&CMatrix::from_real_diag(&d)).matmul(&u.transpose());
        let t = takagi(&y, 1e-10).unwrap();
        prop_assert!(t.reconstruct().max_abs_diff(&y) <= 1e-8);
        let unit = t.vectors.adjoint().matmul(&t.vectors);
        prop_assert!(unit.max_abs_diff(&CMatrix::identity(n)) <= 1e-9);
    }
}

#[test]
fn report_roundtrips_through_json() {
    let rho = w_noise(0.9).unwrap();
    let cfg = OptimizerConfig {
        restarts: 2,
        iterations: 10,
        ..OptimizerConfig::default()
    };
    let report = concbound::optimizer::optimize_bound_multipartite(
        &rho,
        1,
        &cfg,
        concbound::optimizer::MultipartiteMode::Splits,
    )
    .unwrap();
    let text = serde_json::to_string(&report).unwrap();
    let back: BoundReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, report);
    assert!((back.recompute() - back.bound_on_c_squared).abs() < 1e-15);
}

#[test]
fn identical_config_gives_identical_bytes() {
    let rho = random_density(&[3, 3], 2, 77).unwrap();
    let cfg = OptimizerConfig {
        restarts: 3,
        iterations: 20,
        ..OptimizerConfig::default()
    };
    let a = serde_json::to_vec(&optimize_bound_bipartite(&rho, 2, &cfg).unwrap()).unwrap();
    let b = serde_json::to_vec(&optimize_bound_bipartite(&rho, 2, &cfg).unwrap()).unwrap();
    assert_eq!(a, b);
    let other = OptimizerConfig { seed: 1, ..cfg };
    let c = serde_json::to_vec(&optimize_bound_bipartite(&rho, 2, &other).unwrap()).unwrap();
    assert_ne!(a, c);
}

#[test]
fn missing_subsets_only_lower_the_bound() {
    let g = bipartite_generators(3, 3).unwrap();
    let psi = random_pure(&[3, 3], 5).unwrap();
    let rho = psi.projector();
    let full: BTreeMap<_, _> = all_subsets(9, 1)
        .into_iter()
        .map(|t| (t, CoefficientVector::ones(1)))
        .collect();
    let partial: BTreeMap<_, _> = full.iter().take(4).map(|(t, u)| (t.clone(), u.clone())).collect();
    let a = concbound::bipartite::observation1_bound(&rho, &g, 1, &full).unwrap();
    let b = concbound::bipartite::observation1_bound(&rho, &g, 1, &partial).unwrap();
    assert!(b.bound_on_c_squared <= a.bound_on_c_squared + 1e-15);
    // For a pure state with k = 1 the aggregate is the sum rule itself.
    let c = concurrence_pure(&psi, &Bipartition::first_vs_rest(2).unwrap()).unwrap();
    assert!((a.bound_on_c_squared - c * c).abs() < 1e-12);
}
