//! Thermodynamic observables of chain thermal states.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::algebra::{eigh, expectation, thermal_state, CMatrix, HermitianOperator, SpectralDecomposition};
use crate::error::check_temperature;
use crate::models::{ModelOperators, Sector, SectorSpectrum};
use crate::{Error, Result};

/// Landé factor used in every susceptibility.
pub const G_FACTOR: f64 = 2.0;

/// Relative temperature step of the centered heat-capacity difference.
pub const HEAT_CAPACITY_STEP: f64 = 1e-4;

/// Thermal averages at one `(T, B)` point.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ThermoPoint {
    pub temperature: f64,
    pub field_b: f64,
    /// Exchange energy `<H_ex>`.
    pub u: f64,
    /// `<M>` with `M = 1/2 sum sigma_z`.
    pub m: f64,
    /// `g^2 (<M^2> - <M>^2) / T`.
    pub chi: f64,
    /// `d<H_total>/dT`.
    pub c: f64,
}

impl ThermoPoint {
    /// Thermodynamic internal energy `<H_total> = <H_ex> - B <M>`.
    pub fn internal_energy(&self) -> f64 {
        self.u - self.field_b * self.m
    }
}

/// Mean of `energies` under Gibbs weights at `t`, ground-shifted.
fn thermal_mean(energies: &[f64], t: f64) -> f64 {
    let e0 = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let (mut z, mut acc) = (0.0, 0.0);
    for &e in energies {
        let w = (-(e - e0) / t).exp();
        z += w;
        acc += w * e;
    }
    acc / z
}

fn heat_capacity_fd(energies: &[f64], t: f64) -> f64 {
    let h = HEAT_CAPACITY_STEP * t;
    (thermal_mean(energies, t + h) - thermal_mean(energies, t - h)) / (2.0 * h)
}

/// Observables of the thermal state of `ops.h_total()`, by dense diagonalization.
pub fn observables(ops: &ModelOperators, temperature: f64) -> Result<ThermoPoint> {
    check_temperature(temperature)?;
    let spec = eigh(ops.h_total())?;
    observables_with(ops, &spec, temperature)
}

/// As [`observables`], reusing a decomposition of `ops.h_total()`.
pub fn observables_with(ops: &ModelOperators, spec: &SpectralDecomposition, temperature: f64) -> Result<ThermoPoint> {
    check_temperature(temperature)?;
    let rho = thermal_state(spec, temperature)?;
    let u = expectation(&rho, ops.h_exchange())?;
    let m = expectation(&rho, ops.magnetization())?;
    // centered second moment; <M^2> - <M>^2 cancels near saturation
    let shift = HermitianOperator::new_unchecked(CMatrix::identity(ops.magnetization().dim()).scale(m));
    let var = expectation(&rho, &ops.magnetization().difference(&shift).squared())?;
    let chi = (G_FACTOR * G_FACTOR * var / temperature).max(0.0);
    let c = heat_capacity_fd(spec.eigenvalues(), temperature);
    Ok(ThermoPoint { temperature, field_b: ops.field_b(), u, m, chi, c })
}

/// `<H_total>(T_hi) - <H_total>(T_lo)` reconstructed by trapezoid integration of
/// the finite-difference heat capacity over `steps` intervals.
pub fn energy_from_heat_capacity(ops: &ModelOperators, t_lo: f64, t_hi: f64, steps: usize) -> Result<f64> {
    check_temperature(t_lo)?;
    check_temperature(t_hi)?;
    if t_hi <= t_lo || steps == 0 {
        return Err(Error::InvalidArgument(alloc::format!(
            "need 0 < T_lo < T_hi and steps >= 1, got [{t_lo}, {t_hi}] with {steps} steps"
        )));
    }
    let energies = eigh(ops.h_total())?.eigenvalues().to_vec();
    let dt = (t_hi - t_lo) / steps as f64;
    let mut sum = 0.0;
    for i in 0..=steps {
        let t = t_lo + dt * i as f64;
        let w = if i == 0 || i == steps { 0.5 } else { 1.0 };
        sum += w * heat_capacity_fd(&energies, t);
    }
    Ok(sum * dt)
}

/// Direct `<H_total>` at `temperature`; the reference for [`energy_from_heat_capacity`].
pub fn total_energy(ops: &ModelOperators, temperature: f64) -> Result<f64> {
    check_temperature(temperature)?;
    Ok(thermal_mean(eigh(ops.h_total())?.eigenvalues(), temperature))
}

/// Gibbs ensemble over a [`SectorSpectrum`] at fixed `(T, B)`.
#[derive(Debug, Clone)]
pub struct ChainEnsemble<'a> {
    spectrum: &'a SectorSpectrum,
    field_b: f64,
    temperature: f64,
    // weights[sector][level], normalized over the whole spectrum
    weights: Vec<Vec<f64>>,
}

impl<'a> ChainEnsemble<'a> {
    pub fn new(spectrum: &'a SectorSpectrum, field_b: f64, temperature: f64) -> Result<Self> {
        check_temperature(temperature)?;
        if !field_b.is_finite() {
            return Err(Error::InvalidArgument(alloc::format!("field must be finite, got {field_b}")));
        }
        let e0 = spectrum.ground_energy(field_b);
        let mut z = 0.0;
        let mut weights: Vec<Vec<f64>> = spectrum
            .sectors()
            .iter()
            .map(|s| {
                s.energies()
                    .iter()
                    .map(|&e| {
                        let w = (-(e - field_b * s.magnetization() - e0) / temperature).exp();
                        z += w;
                        w
                    })
                    .collect()
            })
            .collect();
        if !(z.is_finite() && z > 0.0) {
            return Err(Error::NonFinite("partition function"));
        }
        for w in weights.iter_mut().flatten() {
            *w /= z;
        }
        Ok(Self { spectrum, field_b, temperature, weights })
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn field_b(&self) -> f64 {
        self.field_b
    }

    pub fn spectrum(&self) -> &SectorSpectrum {
        self.spectrum
    }

    /// `sum_k w_k f(sector, level)`, skipping levels whose weight underflowed.
    pub fn average(&self, f: impl Fn(&Sector, usize) -> f64) -> f64 {
        let mut acc = 0.0;
        for (sector, ws) in self.spectrum.sectors().iter().zip(&self.weights) {
            for (k, &w) in ws.iter().enumerate() {
                if w > 0.0 {
                    acc += w * f(sector, k);
                }
            }
        }
        acc
    }

    /// z-axis susceptibility from magnetization fluctuations.
    pub fn chi(&self) -> f64 {
        let m = self.average(|s, _| s.magnetization());
        let var = self.average(|s, _| (s.magnetization() - m).powi(2));
        G_FACTOR * G_FACTOR * var / self.temperature
    }

    /// The full [`ThermoPoint`]; the heat capacity is the energy variance over `T^2`.
    pub fn thermo_point(&self) -> ThermoPoint {
        let b = self.field_b;
        let u = self.average(|s, k| s.energies()[k]);
        let m = self.average(|s, _| s.magnetization());
        let e = u - b * m;
        let var = self.average(|s, k| (s.energies()[k] - b * s.magnetization() - e).powi(2));
        let t = self.temperature;
        ThermoPoint { temperature: t, field_b: b, u, m, chi: self.chi(), c: var / (t * t) }
    }
}

/// Per-site thermodynamics of the periodic XX ring of `num_modes` sites from
/// its Jordan-Wigner free-fermion solution.
///
/// With `n_j = (1 + sigma_z_j)/2` the ring maps to fermions with dispersion
/// `eps(k) = 4J cos k - B`. The boundary condition depends on fermion parity
/// (even: antiperiodic momenta, odd: periodic), so the partition function is
/// the parity-projected combination of four free traces. The result is exact
/// for the finite ring. Returned `u` and `m` are per site; `chi` and `c` are
/// per site as well.
pub fn xx_thermo_free_fermion(j: f64, b: f64, temperature: f64, num_modes: usize) -> Result<ThermoPoint> {
    check_temperature(temperature)?;
    if num_modes < 2 {
        return Err(Error::InvalidArgument(alloc::format!("need at least two modes, got {num_modes}")));
    }
    if !(j.is_finite() && b.is_finite()) {
        return Err(Error::InvalidArgument("couplings must be finite".into()));
    }
    let n = num_modes;
    let beta = 1.0 / temperature;
    let grid = |offset: f64| -> Vec<f64> { (0..n).map(|q| 2.0 * PI * (q as f64 + offset) / n as f64).collect() };
    let antiperiodic = grid(0.5);
    let periodic = grid(0.0);

    // each term: (coefficient, sign, momenta)
    let terms: [(f64, f64, &[f64]); 4] =
        [(0.5, 1.0, &antiperiodic), (0.5, -1.0, &antiperiodic), (0.5, 1.0, &periodic), (-0.5, -1.0, &periodic)];

    struct Term {
        log_scale: f64,
        value: f64,
        // sums over k of a_k d(term)/d(-beta eps_k), for a_k = 1, hopping, eps, eps^2-ish
        occupation: f64,
        hopping: f64,
        occ_var: f64,
        hop_occ: f64,
        hop_var: f64,
    }

    let evaluate = |coef: f64, sign: f64, ks: &[f64]| -> Term {
        let eps: Vec<f64> = ks.iter().map(|&k| 4.0 * j * k.cos() - b).collect();
        let hop: Vec<f64> = ks.iter().map(|&k| 4.0 * j * k.cos()).collect();
        let mu: Vec<f64> = eps.iter().map(|&e| (-beta * e).max(0.0)).collect();
        // (1 + s x_k) = e^{mu_k} f_k with x_k = e^{-beta eps_k}
        let y: Vec<f64> = eps.iter().zip(&mu).map(|(&e, &m)| (-beta * e - m).exp()).collect();
        let f: Vec<f64> = mu.iter().zip(&y).map(|(&m, &yk)| (-m).exp() + sign * yk).collect();
        let log_scale = mu.iter().sum();
        let value: f64 = coef * f.iter().product::<f64>();
        // products of f over all q except k (and except k, l) via explicit loops; n is small
        let mut prefix = vec![1.0; n + 1];
        for q in 0..n {
            prefix[q + 1] = prefix[q] * f[q];
        }
        let mut suffix = vec![1.0; n + 1];
        for q in (0..n).rev() {
            suffix[q] = suffix[q + 1] * f[q];
        }
        let without = |k: usize| prefix[k] * suffix[k + 1];
        let mut occupation = 0.0;
        let mut hopping = 0.0;
        for k in 0..n {
            let d = coef * sign * y[k] * without(k);
            occupation += d;
            hopping += hop[k] * d;
        }
        // second moments: <n_k n_l> and <n_k^2> = <n_k>
        let (mut occ_var, mut hop_occ, mut hop_var) = (0.0, 0.0, 0.0);
        for k in 0..n {
            for l in 0..n {
                let d = if k == l {
                    coef * sign * y[k] * without(k)
                } else {
                    let mut p = 1.0;
                    for (q, &fq) in f.iter().enumerate() {
                        if q != k && q != l {
                            p *= fq;
                        }
                    }
                    coef * y[k] * y[l] * p
                };
                occ_var += d;
                hop_occ += hop[k] * d;
                hop_var += hop[k] * hop[l] * d;
            }
        }
        Term { log_scale, value, occupation, hopping, occ_var, hop_occ, hop_var }
    };

    let evaluated: Vec<Term> = terms.iter().map(|&(c, s, ks)| evaluate(c, s, ks)).collect();
    let top = evaluated.iter().map(|t| t.log_scale).fold(f64::NEG_INFINITY, f64::max);
    let mut z = 0.0;
    let (mut nf, mut hop, mut nn, mut hn, mut hh) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for t in &evaluated {
        let s = (t.log_scale - top).exp();
        z += s * t.value;
        nf += s * t.occupation;
        hop += s * t.hopping;
        nn += s * t.occ_var;
        hn += s * t.hop_occ;
        hh += s * t.hop_var;
    }
    if !(z.is_finite() && z > 0.0) {
        return Err(Error::NoConvergence { what: "free-fermion partition sum", iterations: n });
    }
    let nf = nf / z;
    let u = hop / z;
    let var_n = nn / z - nf * nf;
    let cov_hn = hn / z - u * nf;
    let var_h = hh / z - u * u;
    // H_total = H_hop - B N_f + const
    let var_e = var_h - 2.0 * b * cov_hn + b * b * var_n;
    let nn_sites = n as f64;
    Ok(ThermoPoint {
        temperature,
        field_b: b,
        u: u / nn_sites,
        m: (nf - 0.5 * nn_sites) / nn_sites,
        chi: (G_FACTOR * G_FACTOR * var_n / temperature).max(0.0) / nn_sites,
        c: (var_e * beta * beta).max(0.0) / nn_sites,
    })
}
