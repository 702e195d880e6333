mod common;

use bellnoise::source_ops::{
    certify, min_eigenvalue_at, minimal_positive_beta, ConstructionKind, DilationRegistry,
    DEFAULT_BETA_TOL,
};
use bellnoise::states::{random_state, symmetrize_marginals, BipartiteState};
use bellnoise::thresholds::{beta_bell, beta_chsh, DEFAULT_MARGINAL_TOL};
use common::{bell_dilation, left_dilation, right_dilation, rng};
use proptest::prelude::*;

fn registry() -> DilationRegistry {
    DilationRegistry::standard(DEFAULT_MARGINAL_TOL)
}

/// A random state accepted by every construction when `symmetric`.
fn sample(seed: u64, d1: usize, d2: usize, rank: usize, symmetric: bool) -> BipartiteState {
    let rho = random_state(d1, d2, rank.min(d1 * d2), &mut rng(seed)).unwrap();
    if symmetric {
        symmetrize_marginals(&rho).unwrap()
    } else {
        rho
    }
}

fn oracle(
    kind: ConstructionKind,
    rho: &BipartiteState,
    beta: f64,
) -> bellnoise::linalg::ComplexMatrix {
    match kind {
        ConstructionKind::Right => right_dilation(rho, beta),
        ConstructionKind::Left => left_dilation(rho, beta),
        ConstructionKind::Bell => bell_dilation(rho, beta),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn dilations_are_source_operators(seed in any::<u64>(), d in 2usize..=3, d2 in 2usize..=3, rank in 1usize..=4, beta in 0.0..=1.0f64) {
        let reg = registry();
        for kind in ConstructionKind::ALL {
            let symmetric = kind == ConstructionKind::Bell;
            let rho = sample(seed, d, if symmetric { d } else { d2 }, rank, symmetric);
            let t = reg.get(kind.name()).unwrap().build(&rho, beta).unwrap();
            prop_assert!(t.matrix.max_abs_diff(&oracle(kind, &rho, beta)) < 1e-12);
            prop_assert!(t.matrix.hermiticity_residual() < 1e-10);
            prop_assert!((t.trace() - 1.0).abs() < 1e-10);
            prop_assert!(t.marginal_residual() < 1e-10, "{:?}: {}", kind, t.marginal_residual());
        }
    }

    #[test]
    fn min_eigenvalue_is_concave_in_beta(seed in any::<u64>(), d in 2usize..=3, rank in 1usize..=4) {
        let rho = sample(seed, d, d, rank, true);
        for dil in registry().iter() {
            let lam: Vec<f64> = (0..=10)
                .map(|k| min_eigenvalue_at(dil, &rho, k as f64 / 10.0).unwrap())
                .collect();
            for k in 1..10 {
                prop_assert!(lam[k] >= 0.5 * (lam[k - 1] + lam[k + 1]) - 1e-9, "{}: {:?}", dil.name(), lam);
            }
        }
    }

    #[test]
    fn certificate_dominates_analytic_bound(seed in any::<u64>(), d in 2usize..=3, rank in 1usize..=4, beta in 0.0..=1.0f64) {
        let rho = sample(seed, d, d, rank, true);
        for dil in registry().iter() {
            let cert = certify(&dil.build(&rho, beta).unwrap(), 1e-9).unwrap();
            prop_assert!(cert.min_eigenvalue >= cert.analytic_lower_bound - 1e-9,
                "{}: {} < {}", dil.name(), cert.min_eigenvalue, cert.analytic_lower_bound);
            if beta >= cert.formula_threshold {
                prop_assert!(cert.is_dso);
            }
        }
    }

    #[test]
    fn minimal_beta_within_thresholds(seed in any::<u64>(), d1 in 2usize..=3, d2 in 2usize..=3, rank in 1usize..=4) {
        let reg = registry();
        let rho = sample(seed, d1, d2, rank, false);
        let right = minimal_positive_beta(&rho, reg.get("right").unwrap(), DEFAULT_BETA_TOL).unwrap();
        let left = minimal_positive_beta(&rho, reg.get("left").unwrap(), DEFAULT_BETA_TOL).unwrap();
        prop_assert!(right.beta <= right.formula_threshold + DEFAULT_BETA_TOL);
        prop_assert!(left.beta <= left.formula_threshold + DEFAULT_BETA_TOL);
        prop_assert!(right.beta.min(left.beta) <= beta_chsh(&rho) + DEFAULT_BETA_TOL);

        let sym = sample(seed, d1, d1, rank, true);
        let bell = minimal_positive_beta(&sym, reg.get("bell").unwrap(), DEFAULT_BETA_TOL).unwrap();
        prop_assert!(bell.beta <= beta_bell(&sym, DEFAULT_MARGINAL_TOL).unwrap() + DEFAULT_BETA_TOL);
    }
}

#[test]
fn bell_construction_requires_equal_marginals() {
    let rho = random_state(2, 2, 2, &mut rng(3)).unwrap();
    assert!(registry().get("bell").unwrap().build(&rho, 0.9).is_err());
    let rect = random_state(2, 3, 2, &mut rng(4)).unwrap();
    assert!(minimal_positive_beta(&rect, registry().get("bell").unwrap(), 1e-8).is_err());
    assert!(registry().get("middle").is_err());
}

#[test]
fn bell_dilation_traces_to_target_on_every_factor() {
    let rho = sample(17, 3, 3, 4, true);
    let t = registry().get("bell").unwrap().build(&rho, 0.7).unwrap();
    assert_eq!(t.marginal_factors, &[0, 1, 2]);
    assert!(t.marginal_residual() < 1e-10);
}
