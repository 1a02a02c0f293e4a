mod common;

use common::*;
use nalgebra::{DMatrix, DVector};
use netgame::{
    regular_wbar_bound, equilibrium, make_complete, make_complete_bipartite, make_equal_magnitude_network,
    regularity_margin, wbar_keeps_regular, spectrum, validate_network, welfare, Error,
    GameConfig, Network,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn arb_network(max_n: usize) -> impl Strategy<Value = Network> {
    (2..=max_n, 0.5f64..2.0).prop_flat_map(|(n, wbar)| {
        prop::collection::vec(0.0..=1.0f64, n * (n - 1) / 2)
            .prop_map(move |u| {
                let links: Vec<f64> = u.iter().map(|x| x * wbar).collect();
                Network::from_upper(n, wbar, &links)
            })
    })
}

proptest! {
    #[test]
    fn eigenpairs_have_small_residuals(g in arb_network(9)) {
        let s = spectrum(g.matrix()).unwrap();
        let n = g.n();
        for l in 0..n {
            let u = s.vector(l);
            let lam = s.eigenvalues[l];
            let r = (g.matrix() * &u - &u * lam).norm();
            prop_assert!(r <= 1e-10 * lam.abs().max(1.0));
            prop_assert!((u.norm() - 1.0).abs() < 1e-12);
            let top = u.iter().cloned().fold(0.0, |m: f64, x| if x.abs() > m.abs() { x } else { m });
            prop_assert!(top > 0.0);
            for k in 0..l {
                prop_assert!(u.dot(&s.vector(k)).abs() <= 1e-10);
            }
            if l > 0 {
                prop_assert!(s.eigenvalues[l - 1] >= lam);
            }
        }
    }

    #[test]
    fn extreme_eigenvalues_are_bounded_by_extremal_graphs(g in arb_network(9)) {
        let n = g.n();
        let wbar = g.wbar();
        let s = spectrum(g.matrix()).unwrap();
        let pq = ((n / 2) * n.div_ceil(2)) as f64;
        prop_assert!(s.largest() <= wbar * (n - 1) as f64 + 1e-10);
        prop_assert!(s.smallest() >= -wbar * pq.sqrt() - 1e-10);
    }

    #[test]
    fn welfare_equals_squared_equilibrium_norm(
        g in arb_network(7),
        frac in 0.05f64..0.95,
        positive in any::<bool>(),
        seed in any::<u64>(),
    ) {
        let n = g.n();
        let sign = if positive { 1.0 } else { -1.0 };
        let phi = sign * frac * regular_wbar_bound(sign, n).unwrap() / g.wbar();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = DVector::from_fn(n, |_, _| rand::Rng::random_range(&mut rng, -2.0..2.0));
        let cfg = GameConfig::new(phi, a.clone(), g.clone()).unwrap();
        let eq = equilibrium(&cfg, &a, &g).unwrap();
        // Independent check: residual of the best-response system.
        let resid = (&eq.x - g.matrix() * &eq.x * phi - &a).norm();
        prop_assert!(resid <= 1e-12 * a.norm().max(1.0));
        let w = welfare(&cfg, &a, &g).unwrap();
        prop_assert!((w - eq.x.norm_squared()).abs() <= 1e-10 * w.max(1e-300));
        prop_assert!((eq.payoffs.sum() * 2.0 - w).abs() <= 1e-10 * w.max(1e-300));
        prop_assert!(regularity_margin(&cfg, &g) > 0.0);
    }

    #[test]
    fn relabelling_permutes_the_spectrum_trivially(g in arb_network(7), seed in any::<u64>()) {
        let n = g.n();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut rng);
        let h = g.permuted(&perm).unwrap();
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(h.weight(i, j), g.weight(perm[i], perm[j]));
            }
        }
        let a = spectrum(g.matrix()).unwrap();
        let b = spectrum(h.matrix()).unwrap();
        prop_assert!((a.eigenvalues - b.eigenvalues).amax() < 1e-10);
    }
}

#[test]
fn complete_graph_spectrum() {
    let s = spectrum(make_complete(4, 1.0).unwrap().matrix()).unwrap();
    assert!((s.largest() - 3.0).abs() < 1e-12);
    let u = s.vector(0);
    assert!(u.iter().all(|x| (x - 0.5).abs() < 1e-12));
}

#[test]
fn complete_bipartite_spectrum() {
    let s = spectrum(make_complete_bipartite(2, 3, 1.0).unwrap().matrix()).unwrap();
    assert!((s.smallest() + 6f64.sqrt()).abs() < 1e-12);
    // ∝ (√3, √3, −√2, −√2, −√2), normalized by √12.
    let u = s.vector(4);
    let expect = [3f64.sqrt(), 3f64.sqrt(), -(2f64.sqrt()), -(2f64.sqrt()), -(2f64.sqrt())];
    for i in 0..5 {
        assert!((u[i] - expect[i] / 12f64.sqrt()).abs() < 1e-12);
    }
    let s = spectrum(make_complete_bipartite(2, 2, 1.0).unwrap().matrix()).unwrap();
    assert!((s.smallest() + 2.0).abs() < 1e-12);
}

#[test]
fn extremal_graphs_attain_the_bounds() {
    for n in 2..=9 {
        let k = spectrum(make_complete(n, 1.5).unwrap().matrix()).unwrap();
        assert!((k.largest() - 1.5 * (n - 1) as f64).abs() < 1e-10);
        let b = make_complete_bipartite(n / 2, n - n / 2, 1.5);
        if let Ok(b) = b {
            let s = spectrum(b.matrix()).unwrap();
            let pq = ((n / 2) * (n - n / 2)) as f64;
            assert!((s.smallest() + 1.5 * pq.sqrt()).abs() < 1e-10);
        }
    }
}

#[test]
fn equal_magnitude_network_attains_its_bound() {
    for n in [5, 7, 9, 11] {
        let g = make_equal_magnitude_network(n, 1.0).unwrap();
        let s = spectrum(g.matrix()).unwrap();
        assert!((s.smallest() + (n - 1) as f64 / 2.0).abs() < 1e-10, "n = {n}");
        let u = s.vector(n - 1);
        let m = 1.0 / (n as f64).sqrt();
        assert!(u.iter().all(|x| (x.abs() - m).abs() < 1e-10));
        assert!(!s.principal_is_degenerate(-1.0));
    }
    assert!(make_equal_magnitude_network(6, 1.0).is_err());
}

#[test]
fn constructors_pass_validation() {
    let nets = [
        make_complete(5, 0.7).unwrap(),
        make_complete_bipartite(2, 3, 0.7).unwrap(),
        make_equal_magnitude_network(7, 0.7).unwrap(),
        four_ghat(),
        five_ghat(),
    ];
    for g in nets {
        assert!(validate_network(g.matrix().clone(), g.wbar()).is_ok());
    }
}

#[test]
fn regular_wbar_bound_values() {
    assert!((regular_wbar_bound(0.2, 4).unwrap() - 1.0 / 0.6).abs() < 1e-15);
    assert!((regular_wbar_bound(-0.2, 4).unwrap() - 2.5).abs() < 1e-15);
    assert!((regular_wbar_bound(-0.2, 3).unwrap() - 2.0 / (0.2 * 8f64.sqrt())).abs() < 1e-15);
    assert_eq!(regular_wbar_bound(0.0, 4).unwrap_err(), Error::PhiZero);
    assert!(wbar_keeps_regular(0.15, 5, 1.0));
    assert!(!wbar_keeps_regular(0.3, 5, 1.0));
}

#[test]
fn every_network_in_the_box_is_regular_below_the_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for k in 0..200 {
        let n = 2 + k % 7;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let phi = random_phi(&mut rng, n, 1.0, sign) / 0.9 * 0.999;
        let g = random_network(&mut rng, n, 1.0, 0.0, 1.0);
        let lam = spectrum(g.matrix()).unwrap().principal_value(phi);
        assert!(lam < 1.0);
        // The extremal graph for this sign stays regular too.
        let ext = if phi > 0.0 {
            make_complete(n, 1.0).unwrap()
        } else {
            make_complete_bipartite(n / 2, n - n / 2, 1.0).unwrap()
        };
        assert!(spectrum(ext.matrix()).unwrap().principal_value(phi) < 1.0);
    }
}

#[test]
fn invalid_inputs_are_rejected() {
    let asym = DMatrix::from_row_slice(2, 2, &[0.0, 0.5, 0.4, 0.0]);
    assert!(matches!(
        validate_network(asym, 1.0),
        Err(Error::Asymmetric { .. })
    ));
    let out = DMatrix::from_row_slice(2, 2, &[0.0, 1.5, 1.5, 0.0]);
    assert!(matches!(
        validate_network(out, 1.0),
        Err(Error::OutOfBox { .. })
    ));
    let g = make_complete(3, 1.0).unwrap();
    assert!(matches!(
        GameConfig::new(0.6, DVector::zeros(3), g.clone()),
        Err(Error::SingularSystem { .. })
    ));
    assert!(matches!(
        GameConfig::new(0.1, DVector::zeros(2), g),
        Err(Error::DimensionMismatch { .. })
    ));
}

#[test]
fn tiny_symmetry_noise_is_absorbed() {
    let w = DMatrix::from_row_slice(2, 2, &[0.0, 0.5, 0.5 + 1e-13, 0.0]);
    let g = validate_network(w, 1.0).unwrap();
    assert_eq!(g.weight(0, 1), g.weight(1, 0));
}
