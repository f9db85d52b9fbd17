mod common;

use nalgebra::DMatrix;
use netgompertz::graph::fixtures;
use netgompertz::{
    classify_regime, decompose, epidemic_threshold, katz_centrality, EpidemicParams, Error, Regime,
    SpectralData,
};
use proptest::prelude::*;

#[test]
fn reconstruction_on_random_graphs() {
    let mut rng = common::rng(7);
    for _ in 0..50 {
        let (g, s) = common::random_graph(&mut rng, 2, 30);
        let m = s.eigenvectors();
        let recon = m * DMatrix::from_diagonal(s.eigenvalues()) * m.transpose();
        assert!((recon - g.adjacency()).amax() < 1e-8);
        let ortho = m.transpose() * m - DMatrix::identity(g.n(), g.n());
        assert!(ortho.amax() < 1e-10);
        assert!(s.eigenvalues().as_slice().windows(2).all(|w| w[0] >= w[1]));
        for i in 0..g.n() {
            assert!((s.zeta().row(i).sum() - 1.0).abs() < 1e-10);
            assert!(s.zeta()[(i, 0)] > 0.0);
            assert!(m[(i, 0)] >= 0.0);
        }
    }
}

#[test]
fn star_spectrum() {
    let s = decompose(&fixtures::star(5)).unwrap();
    let expected = [2.0, 0.0, 0.0, 0.0, -2.0];
    for (l, e) in s.eigenvalues().iter().zip(expected) {
        assert!((l - e).abs() < 1e-10);
    }
}

#[test]
fn katz_matches_neumann_series() {
    let mut rng = common::rng(11);
    for _ in 0..20 {
        let (g, s) = common::random_graph(&mut rng, 2, 25);
        let alpha = 0.5 / s.lambda1();
        let c = katz_centrality(&g, &s, alpha).unwrap();

        // Tail after K terms is bounded by sqrt(n) (alpha lambda1)^(K+1) / (1 - alpha lambda1).
        let n = g.n() as f64;
        let mut term = common::ones(g.n());
        let mut sum = term.clone() * 0.0;
        let mut k = 0;
        while n.sqrt() * 0.5f64.powi(k + 1) / 0.5 > 1e-12 {
            term = g.adjacency() * term * alpha;
            sum += &term;
            k += 1;
        }
        assert!(common::max_abs_diff(&c, &sum) < 1e-8);
        assert!(c.iter().all(|&v| v > 0.0));
    }
}

#[test]
fn katz_refuses_outside_convergence() {
    let g = fixtures::cycle(5);
    let s = decompose(&g).unwrap();
    assert!(matches!(
        katz_centrality(&g, &s, 1.0 / s.lambda1()),
        Err(Error::ResolventDivergent { .. })
    ));
    let tiny = katz_centrality(&g, &s, 1e-12).unwrap();
    assert!(tiny.amax() < 1e-10);
}

#[test]
fn threshold_values() {
    let th = epidemic_threshold(2.0, 0.9);
    assert!((th.tau - 0.617284).abs() < 1e-6);
    assert!((th.q_tau - 0.9 * th.tau).abs() < 1e-15);
    assert!((epidemic_threshold(2.0, 1.0 - 1e-12).tau - 0.5).abs() < 1e-9);
    let q = 1.0 - 1.0 / 82.0;
    assert!((epidemic_threshold(4.7333, q).tau - 0.21652).abs() < 1e-5);
}

#[test]
fn paper_setting_is_supercritical() {
    let s = SpectralData::from_symmetric(DMatrix::from_element(1, 1, 4.7333)).unwrap();
    let params = EpidemicParams::new(0.03, 0.02, 1.0 / 82.0).unwrap();
    assert_eq!(classify_regime(&s, &params).unwrap(), Regime::Supercritical);
}

#[test]
fn zeta_is_invariant_under_sign_flips() {
    let g = fixtures::barbell(4, 2);
    let s = decompose(&g).unwrap();
    let mut flipped = s.eigenvectors().clone();
    for nu in (1..g.n()).step_by(2) {
        flipped.column_mut(nu).neg_mut();
    }
    for nu in 0..g.n() {
        let w = flipped.column(nu).sum();
        for i in 0..g.n() {
            assert!((flipped[(i, nu)] * w - s.zeta()[(i, nu)]).abs() < 1e-14);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tau_exceeds_inverse_spectral_radius(lambda1 in 0.5f64..20.0, p in 1e-6f64..0.999) {
        let th = epidemic_threshold(lambda1, 1.0 - p);
        prop_assert!(th.tau > 1.0 / lambda1);
        prop_assert!(th.q_tau < th.tau);
    }

    #[test]
    fn regimes_partition_the_beta_e_axis(seed in any::<u64>(), frac in 0.05f64..3.0, p in 0.01f64..0.5) {
        let mut rng = common::rng(seed);
        let (_, s) = common::random_graph(&mut rng, 2, 15);
        let q = 1.0 - p;
        let th = epidemic_threshold(s.lambda1(), q);
        let beta_e = frac * th.tau;
        prop_assume!((beta_e - th.tau).abs() > 1e-9 && (beta_e - th.q_tau).abs() > 1e-9);
        let params = EpidemicParams::from_effective(beta_e, 0.3, p).unwrap();
        let regime = classify_regime(&s, &params).unwrap();
        let expected = if beta_e < th.q_tau {
            Regime::Gompertz
        } else if beta_e < th.tau {
            Regime::BoundedNonGompertz
        } else {
            Regime::Supercritical
        };
        prop_assert_eq!(regime, expected);
    }
}
