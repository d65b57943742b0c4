use macroent_core::algebra::{
    concurrence, eigh, expectation, negativity, partial_trace, thermal_state, Bipartition, CMatrix, DensityMatrix,
    HermitianOperator, C64,
};
use macroent_core::models::{build, Boundary, ChainSpec, Model};
use proptest::collection::vec;
use proptest::prelude::*;

fn hermitian(dim: usize, raw: &[f64]) -> HermitianOperator {
    let m = CMatrix::from_fn(dim, |i, j| {
        let (a, b) = (i.min(j), i.max(j));
        let re = raw[2 * (a * dim + b)];
        let im = if i == j { 0.0 } else { raw[2 * (a * dim + b) + 1] };
        C64::new(re, if i <= j { im } else { -im })
    });
    HermitianOperator::new(m).unwrap()
}

fn random_hermitian() -> impl Strategy<Value = HermitianOperator> {
    (2usize..=64).prop_flat_map(|d| vec(-1.0f64..1.0, 2 * d * d).prop_map(move |raw| hermitian(d, &raw)))
}

/// Ginibre-style random density matrix `A A^dag / tr`.
fn random_state(dim: usize, raw: &[f64]) -> DensityMatrix {
    let a = CMatrix::from_fn(dim, |i, j| C64::new(raw[2 * (i * dim + j)], raw[2 * (i * dim + j) + 1]));
    let p = &a * &a.adjoint();
    let tr = p.trace().re;
    DensityMatrix::new(p.scale(1.0 / tr)).unwrap()
}

fn qubit(theta: f64, phi: f64) -> [C64; 2] {
    [C64::new((theta / 2.0).cos(), 0.0), C64::from_polar((theta / 2.0).sin(), phi)]
}

fn off_diagonal_norm(m: &CMatrix) -> f64 {
    let mut s = 0.0;
    for i in 0..m.dim() {
        for j in 0..m.dim() {
            if i != j {
                s += m[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn dimer() -> HermitianOperator {
    build(&ChainSpec::dimer(1.0, 0.0).unwrap()).unwrap().h_exchange().clone()
}

#[test]
fn dimer_gibbs_weights() {
    let rho = thermal_state(&eigh(&dimer()).unwrap(), 1.0).unwrap();
    let spectrum = eigh(&HermitianOperator::new(rho.matrix().clone()).unwrap()).unwrap();
    let z = 3f64.exp() + 3.0 * (-1f64).exp();
    let expected = [(-1f64).exp() / z, (-1f64).exp() / z, (-1f64).exp() / z, 3f64.exp() / z];
    for (got, want) in spectrum.eigenvalues().iter().zip(expected) {
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
    }
    let energy = expectation(&rho, &dimer()).unwrap();
    let closed = (-3.0 * 3f64.exp() + 3.0 * (-1f64).exp()) / z;
    assert!((energy - closed).abs() < 1e-12);
}

#[test]
fn thermal_dimer_concurrence_threshold() {
    let d = eigh(&dimer()).unwrap();
    let t_star = 4.0 / 3f64.ln();
    let c = |t: f64| concurrence(&thermal_state(&d, t).unwrap()).unwrap();
    assert!(c(t_star * (1.0 - 1e-6)) > 0.0);
    assert_eq!(c(t_star * (1.0 + 1e-6)), 0.0);
    assert!((c(1e-3) - 1.0).abs() < 1e-12);
}

#[test]
fn heisenberg_four_site_ground_state_negativity() {
    let cases = [(Boundary::Open, 0.5), (Boundary::Periodic, 1.0)];
    for (boundary, frozen) in cases {
        let spec = ChainSpec::new(4, Model::Xxx { j: 1.0 }, 0.0, boundary).unwrap();
        let d = eigh(build(&spec).unwrap().h_exchange()).unwrap();
        let rho = DensityMatrix::pure(d.eigenvector(0)).unwrap();
        let n = negativity(&rho, &Bipartition::new(&[0, 1], 4).unwrap()).unwrap();
        assert!((n - frozen).abs() < 1e-10, "{boundary:?}: {n}");
    }
}

#[test]
fn singlet_concurrence_is_one() {
    // unnormalized amplitudes keep every density-matrix entry exactly representable
    let psi = [C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(-1.0, 0.0), C64::new(0.0, 0.0)];
    let c = concurrence(&DensityMatrix::pure(&psi).unwrap()).unwrap();
    assert!((c - 1.0).abs() <= 2.0 * f64::EPSILON, "{c}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn thermal_states_are_valid(h in random_hermitian(), log_t in -3.0f64..3.0) {
        let t = 10f64.powf(log_t);
        let d = eigh(&h).unwrap();
        let rho = thermal_state(&d, t).unwrap();
        // revalidate through the checked constructor
        prop_assert!(DensityMatrix::new(rho.matrix().clone()).is_ok());
        prop_assert!(rho.matrix().hermiticity_deviation() <= 1e-12);
        prop_assert!((rho.matrix().trace().re - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn decomposition_reconstructs_and_is_unitary(h in random_hermitian()) {
        let d = eigh(&h).unwrap();
        let err = (&d.reconstruct() - h.matrix()).frobenius_norm() / h.matrix().frobenius_norm().max(1e-300);
        prop_assert!(err <= 1e-9, "reconstruction {err}");
        let v = d.eigenvector_matrix();
        let gram = &v.adjoint() * &v;
        prop_assert!((&gram - &CMatrix::identity(h.dim())).max_abs() <= 1e-10);
        prop_assert!(d.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn populations_fall_with_energy(h in random_hermitian(), log_t in -2.0f64..2.0) {
        let d = eigh(&h).unwrap();
        let rho = thermal_state(&d, 10f64.powf(log_t)).unwrap();
        let p: Vec<f64> = (0..d.dim())
            .map(|k| {
                let v = d.eigenvector(k);
                let rv = rho.matrix().matvec(v);
                v.iter().zip(&rv).map(|(a, b)| (a.conj() * b).re).sum()
            })
            .collect();
        for w in p.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-12);
        }
    }

    #[test]
    fn energy_grows_with_temperature(h in random_hermitian()) {
        let d = eigh(&h).unwrap();
        let mut last = f64::NEG_INFINITY;
        for k in 0..30 {
            let t = 10f64.powf(-2.0 + 0.15 * k as f64);
            let e = expectation(&thermal_state(&d, t).unwrap(), &h).unwrap();
            prop_assert!(e >= last - 1e-10, "T={t}: {e} < {last}");
            last = e;
        }
    }

    #[test]
    fn temperature_limits(h in random_hermitian()) {
        let d = eigh(&h).unwrap();
        let ev = d.eigenvalues();
        let width = (ev[ev.len() - 1] - ev[0]).max(1e-12);
        let hot = thermal_state(&d, 1e9 * width).unwrap();
        prop_assert!(off_diagonal_norm(hot.matrix()) < 1e-6);
        let gap = ev[1] - ev[0];
        prop_assume!(gap > 1e-6);
        let cold = thermal_state(&d, 1e-3 * gap).unwrap();
        let g = d.eigenvector(0);
        let projector = CMatrix::from_fn(d.dim(), |i, j| g[i] * g[j].conj());
        prop_assert!((&projector - cold.matrix()).max_abs() < 1e-6);
    }

    #[test]
    fn product_states_have_no_concurrence(a in 0.0f64..3.2, b in 0.0f64..6.3, c in 0.0f64..3.2, d in 0.0f64..6.3) {
        let (x, y) = (qubit(a, b), qubit(c, d));
        let psi = [x[0] * y[0], x[0] * y[1], x[1] * y[0], x[1] * y[1]];
        let rho = DensityMatrix::pure(&psi).unwrap();
        prop_assert!(concurrence(&rho).unwrap() < 1e-7);
        prop_assert!(negativity(&rho, &Bipartition::new(&[0], 2).unwrap()).unwrap() < 1e-12);
    }

    #[test]
    fn ppt_matches_concurrence(raw in vec(-1.0f64..1.0, 32), p in 0.0f64..1.0) {
        // white-noise admixture moves the state across the separable boundary
        let base = random_state(4, &raw);
        let rho = DensityMatrix::new(&base.matrix().scale(p) + &CMatrix::identity(4).scale((1.0 - p) / 4.0)).unwrap();
        let c = concurrence(&rho).unwrap();
        let n = negativity(&rho, &Bipartition::new(&[0], 2).unwrap()).unwrap();
        if c > 1e-6 {
            prop_assert!(n > 0.0, "C = {c}, N = {n}");
        }
        if n > 1e-10 {
            prop_assert!(c > 0.0, "C = {c}, N = {n}");
        }
        if c == 0.0 {
            prop_assert!(n < 1e-10);
        }
    }

    #[test]
    fn partial_traces_commute(raw in vec(-1.0f64..1.0, 2 * 256)) {
        let rho = random_state(16, &raw);
        // trace out site 1 then site 3 (index 2 after the first trace), and the reverse
        let a = partial_trace(&partial_trace(&rho, &[0, 2, 3], 4).unwrap(), &[0, 1], 3).unwrap();
        let b = partial_trace(&partial_trace(&rho, &[0, 1, 2], 4).unwrap(), &[0, 2], 3).unwrap();
        let direct = partial_trace(&rho, &[0, 2], 4).unwrap();
        prop_assert!((a.matrix() - b.matrix()).max_abs() < 1e-14);
        prop_assert!((a.matrix() - direct.matrix()).max_abs() < 1e-14);
        prop_assert!((direct.matrix().trace().re - 1.0).abs() < 1e-12);
    }
}
