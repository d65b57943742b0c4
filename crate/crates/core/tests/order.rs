use macroent_core::algebra::{DensityMatrix, C64};
use macroent_core::models::{build, Boundary, ChainSpec, Model, SectorSpectrum};
use macroent_core::order::{
    classify_decay, correlation_series, correlator, ensemble_correlator, state_correlator, CorrelatorKind, DecayClass,
};
use macroent_core::thermal::ChainEnsemble;
use proptest::prelude::*;

#[test]
fn neel_product_state() {
    // |0101>: up, down, up, down
    let mut psi = vec![C64::new(0.0, 0.0); 16];
    psi[0b0101] = C64::new(1.0, 0.0);
    let rho = DensityMatrix::pure(&psi).unwrap();
    assert_eq!(state_correlator(&rho, 4, CorrelatorKind::Zz, 0, 1, false).unwrap(), -1.0);
    assert_eq!(state_correlator(&rho, 4, CorrelatorKind::Zz, 0, 2, false).unwrap(), 1.0);
    assert_eq!(state_correlator(&rho, 4, CorrelatorKind::Zz, 0, 1, true).unwrap(), 0.0);
}

#[test]
fn maximally_mixed_has_no_connected_correlation() {
    let rho = DensityMatrix::maximally_mixed(8);
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        assert_eq!(state_correlator(&rho, 3, CorrelatorKind::Zz, i, j, true).unwrap(), 0.0);
        assert_eq!(state_correlator(&rho, 3, CorrelatorKind::FullDot, i, j, false).unwrap(), 0.0);
    }
}

#[test]
fn dimer_full_dot_gibbs_oracle() {
    let ops = build(&ChainSpec::dimer(1.0, 0.0).unwrap()).unwrap();
    // levels -3 (singlet, <s.s> = -3) and +1 (triplet, <s.s> = +1)
    let e3 = 3f64.exp();
    let em1 = (-1f64).exp();
    let expected = (-3.0 * e3 + 3.0 * em1) / (e3 + 3.0 * em1);
    let got = correlator(&ops, 1.0, CorrelatorKind::FullDot, 0, 1, false).unwrap();
    assert!((got - expected).abs() < 1e-12, "{got} vs {expected}");
}

#[test]
fn argument_errors() {
    let ops = build(&ChainSpec::dimer(1.0, 0.0).unwrap()).unwrap();
    assert!(correlator(&ops, 1.0, CorrelatorKind::Zz, 0, 0, false).is_err());
    assert!(correlator(&ops, 1.0, CorrelatorKind::Zz, 0, 2, false).is_err());
    assert!(correlator(&ops, 1.0, CorrelatorKind::FullDot, 0, 1, true).is_err());
    assert!(correlator(&ops, 0.0, CorrelatorKind::Zz, 0, 1, false).is_err());
}

#[test]
fn dense_and_sector_routes_agree() {
    for model in [Model::Xxx { j: 1.0 }, Model::Xx { j: 0.7 }, Model::Alternating { j1: 1.0, j2: 0.3 }] {
        let spec = ChainSpec::new(6, model, 0.9, Boundary::Open).unwrap();
        let ops = build(&spec).unwrap();
        let spectrum = SectorSpectrum::new(&spec).unwrap();
        let ens = ChainEnsemble::new(&spectrum, spec.field_b, 0.8).unwrap();
        for (i, j) in [(0, 1), (1, 4), (5, 2)] {
            for (kind, connected) in
                [(CorrelatorKind::Zz, false), (CorrelatorKind::Zz, true), (CorrelatorKind::FullDot, false)]
            {
                let a = correlator(&ops, 0.8, kind, i, j, connected).unwrap();
                let b = ensemble_correlator(&ens, kind, i, j, connected).unwrap();
                assert!((a - b).abs() < 1e-10, "{model:?} {kind:?} ({i},{j}): {a} vs {b}");
            }
        }
    }
}

#[test]
fn hot_heisenberg_ring_decays_exponentially() {
    let spec = ChainSpec::new(12, Model::Xxx { j: 1.0 }, 0.0, Boundary::Periodic).unwrap();
    let series = correlation_series(&spec, 10.0, CorrelatorKind::Zz, true).unwrap();
    assert_eq!(series.separations, vec![1, 2, 3, 4, 5, 6]);
    let c = classify_decay(&series).unwrap();
    assert_eq!(c.class, DecayClass::Exponential, "{c:?} {:?}", series.values);
    assert!(c.sign_alternating);
    let xi = c.xi.unwrap();
    assert!(xi > 0.0 && xi < 1.0, "xi = {xi}");
}

fn chain(model_index: usize, n: usize, b: f64, periodic: bool) -> ChainSpec {
    let model = [Model::Xxx { j: 1.0 }, Model::Xx { j: -0.6 }, Model::Alternating { j1: 1.0, j2: 0.4 }][model_index];
    let boundary = if periodic { Boundary::Periodic } else { Boundary::Open };
    ChainSpec::new(n, model, b, boundary).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn symmetric_and_bounded(m in 0usize..3, half in 1usize..=3, b in -3.0f64..3.0, t in 0.05f64..5.0, periodic: bool) {
        let spec = chain(m, 2 * half, b, periodic);
        let spectrum = SectorSpectrum::new(&spec).unwrap();
        let ens = ChainEnsemble::new(&spectrum, b, t).unwrap();
        let n = spec.num_sites;
        for i in 0..n {
            for j in 0..n {
                if i == j { continue; }
                for kind in [CorrelatorKind::Zz, CorrelatorKind::FullDot] {
                    let a = ensemble_correlator(&ens, kind, i, j, false).unwrap();
                    let r = ensemble_correlator(&ens, kind, j, i, false).unwrap();
                    prop_assert_eq!(a, r);
                }
                let zz = ensemble_correlator(&ens, CorrelatorKind::Zz, i, j, false).unwrap();
                prop_assert!(zz.abs() <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn translation_invariant_on_rings(m in 0usize..2, n in 3usize..=8, b in -2.0f64..2.0, t in 0.1f64..5.0) {
        let spec = chain(m, n, b, true);
        let spectrum = SectorSpectrum::new(&spec).unwrap();
        let ens = ChainEnsemble::new(&spectrum, b, t).unwrap();
        for r in 1..n {
            let reference = ensemble_correlator(&ens, CorrelatorKind::FullDot, 0, r, false).unwrap();
            for i in 1..n {
                let c = ensemble_correlator(&ens, CorrelatorKind::FullDot, i, (i + r) % n, false).unwrap();
                prop_assert!((c - reference).abs() < 1e-10);
            }
        }
    }
}
