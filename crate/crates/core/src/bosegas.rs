//! Ideal Bose gas in a box: mode energies, separable-configuration energies,
//! the separability transition temperature and the low-dimensional
//! condensate-fraction divergence.
//!
//! Natural units `hbar = k_B = 1`.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::quad::integrate;
use crate::{Error, Result};

/// `B_{2k} / (2k)!` for `k = 1..=7`.
const BERNOULLI_OVER_FACTORIAL: [f64; 7] = [
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40_320.0,
    5.0 / 66.0 / 3_628_800.0,
    -691.0 / 2730.0 / 479_001_600.0,
    7.0 / 6.0 / 87_178_291_200.0,
];

/// Riemann zeta for real `s > 1`: sixteen direct terms plus an
/// Euler-Maclaurin tail.
pub fn zeta(s: f64) -> Result<f64> {
    if !(s.is_finite() && s > 1.0) {
        return Err(Error::InvalidArgument(format!("zeta needs s > 1, got {s}")));
    }
    const N: f64 = 16.0;
    let mut sum = 0.0;
    for n in 1..16 {
        sum += (n as f64).powf(-s);
    }
    sum += N.powf(1.0 - s) / (s - 1.0) + 0.5 * N.powf(-s);
    // rising factorial s (s+1) ... (s+2k-2)
    let mut rising = s;
    let mut power = N.powf(-s - 1.0);
    for (k, c) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        sum += c * rising * power;
        let k2 = 2.0 * (k + 1) as f64;
        rising *= (s + k2 - 1.0) * (s + k2);
        power /= N * N;
    }
    Ok(sum)
}

/// `E_k = (k pi / L)^2 / 2m`.
pub fn mode_energy(k: u64, length: f64, mass: f64) -> Result<f64> {
    if k < 1 {
        return Err(Error::InvalidArgument("mode index starts at 1".into()));
    }
    check_positive("length", length)?;
    check_positive("mass", mass)?;
    let q = k as f64 * PI / length;
    Ok(q * q / (2.0 * mass))
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must be positive and finite, got {x}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoxGasSpec {
    pub mass: f64,
    /// Length to the power `dimension`.
    pub volume: f64,
    pub dimension: u32,
    pub num_particles: u64,
    pub num_regions: u64,
}

impl BoxGasSpec {
    pub fn new(mass: f64, volume: f64, dimension: u32, num_particles: u64, num_regions: u64) -> Result<Self> {
        let spec = Self { mass, volume, dimension, num_particles, num_regions };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        check_positive("mass", self.mass)?;
        check_positive("volume", self.volume)?;
        if self.dimension < 1 {
            return Err(Error::InvalidArgument("dimension must be at least 1".into()));
        }
        if self.num_particles < 1 || self.num_regions < 1 {
            return Err(Error::InvalidArgument("particle and region counts must be positive".into()));
        }
        Ok(())
    }

    pub fn density(&self) -> f64 {
        self.num_particles as f64 / self.volume
    }

    fn require_1d(&self) -> Result<f64> {
        self.validate()?;
        if self.dimension != 1 {
            return Err(Error::InvalidArgument(format!(
                "box energies are only defined here for d = 1, got d = {}",
                self.dimension
            )));
        }
        Ok(self.volume)
    }
}

/// Energy with every particle in the lowest box mode (`d = 1`).
pub fn condensation_energy(spec: &BoxGasSpec) -> Result<f64> {
    let length = spec.require_1d()?;
    Ok(spec.num_particles as f64 * mode_energy(1, length, spec.mass)?)
}

/// Lowest energy of a configuration separable over `regions` equal
/// segments of the box (`d = 1`). Each particle sits in the ground mode of a
/// segment of length `L / regions`.
pub fn min_separable_energy(spec: &BoxGasSpec, regions: u64) -> Result<f64> {
    if regions < 1 {
        return Err(Error::InvalidArgument("at least one region is required".into()));
    }
    let m = regions as f64;
    Ok(m * m * condensation_energy(spec)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TransitionReport {
    /// Below this temperature no state separable over `num_regions` regions is compatible.
    pub t_trans: f64,
    /// `t_trans` at one region per particle: an upper estimate of the condensation temperature.
    pub t_crit: f64,
    /// Ideal-gas condensation temperature; zero for `d <= 2`.
    pub t_bec: f64,
    /// `None` when `t_bec` is zero.
    pub ratio_crit_over_bec: Option<f64>,
}

fn t_trans_formula(mass: f64, volume: f64, d: u32, n: f64, m: f64) -> Result<f64> {
    let d = d as f64;
    let z = zeta(1.0 + d / 2.0)?;
    let prefactor = 2.0 * PI / (mass * volume.powf(2.0 / d));
    Ok(prefactor * (PI * n * m.powf(2.0 / d) / (2.0 * z)).powf(2.0 / (2.0 + d)))
}

/// Separability transition, its one-particle-per-region limit and the
/// standard condensation temperature.
pub fn transition_temperatures(spec: &BoxGasSpec) -> Result<TransitionReport> {
    spec.validate()?;
    let d = spec.dimension as f64;
    let n = spec.num_particles as f64;
    let t_trans = t_trans_formula(spec.mass, spec.volume, spec.dimension, n, spec.num_regions as f64)?;

    let rho = spec.density();
    let zeta_d = zeta(1.0 + d / 2.0)?;
    let t_crit = 2.0 * PI * rho.powf(2.0 / d) / spec.mass * (PI / (2.0 * zeta_d)).powf(2.0 / (2.0 + d));
    let at_m_eq_n = t_trans_formula(spec.mass, spec.volume, spec.dimension, n, n)?;
    if (t_crit - at_m_eq_n).abs() > 1e-10 * t_crit {
        return Err(Error::NonFinite("critical temperature identity"));
    }

    let t_bec = if spec.dimension > 2 { 2.0 * PI / spec.mass * (rho / zeta(d / 2.0)?).powf(2.0 / d) } else { 0.0 };
    let ratio_crit_over_bec = (t_bec > 0.0).then(|| t_crit / t_bec);
    if !(t_trans.is_finite() && t_crit.is_finite() && t_bec.is_finite()) {
        return Err(Error::NonFinite("transition temperature"));
    }
    Ok(TransitionReport { t_trans, t_crit, t_bec, ratio_crit_over_bec })
}

/// Density exponent of `t_crit`: `t_crit ~ rho^(2/d)`.
pub fn homes_scaling_exponent(d: u32) -> Result<f64> {
    if d < 1 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    Ok(2.0 / d as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "class", rename_all = "snake_case"))]
pub enum DivergenceClass {
    /// `I(eps) ~ eps^exponent`
    Power {
        exponent: f64,
    },
    /// `I(eps) ~ ln(1/eps)`
    Logarithmic,
    Convergent,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FractionProbe {
    pub dimension: u32,
    pub epsilon: f64,
    pub p_max: f64,
    /// Integral from `epsilon` to `p_max`.
    pub integral: f64,
    pub class: DivergenceClass,
    /// Correlation coefficient of the winning fit; 1 for the convergent class.
    pub fit_correlation: f64,
}

const PROBE_TOL: f64 = 1e-8;
const CONVERGENT_VARIATION: f64 = 0.01;
const MIN_CORRELATION: f64 = 0.999;
/// The winning fit must beat the other by this factor in `1 - r^2`.
const FIT_SEPARATION: f64 = 10.0;

fn fraction_integrand(d: u32, p: f64) -> f64 {
    p.powi(d as i32 - 1) / (0.5 * p * p).exp_m1()
}

fn correlation(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    (sxy / (sxx * syy).sqrt(), sxy / sxx)
}

/// Integrates `p^(d-1) / (exp(p^2/2) - 1)` from each of `samples` cutoffs
/// spread logarithmically over `[epsilon, 10 epsilon]` up to `p_max`, then
/// classifies how the integral grows as the cutoff shrinks.
pub fn condensate_fraction_probe(d: u32, epsilon: f64, p_max: f64, samples: usize) -> Result<FractionProbe> {
    if d < 1 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    check_positive("epsilon", epsilon)?;
    if !(p_max.is_finite() && p_max > 10.0 * epsilon) {
        return Err(Error::InvalidArgument(format!(
            "p_max must exceed ten times epsilon, got epsilon = {epsilon}, p_max = {p_max}"
        )));
    }
    if samples < 3 {
        return Err(Error::InvalidArgument("at least 3 samples are needed".into()));
    }
    let mut log_eps = Vec::with_capacity(samples);
    let mut values = Vec::with_capacity(samples);
    for i in 0..samples {
        let eps = epsilon * 10f64.powf(i as f64 / (samples - 1) as f64);
        log_eps.push(eps.ln());
        values.push(integrate(|p| fraction_integrand(d, p), eps, p_max, PROBE_TOL)?);
    }
    let integral = values[0];
    let (lo, hi) = values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let probe =
        |class, fit_correlation| FractionProbe { dimension: d, epsilon, p_max, integral, class, fit_correlation };
    if (hi - lo) < CONVERGENT_VARIATION * lo.abs() {
        return Ok(probe(DivergenceClass::Convergent, 1.0));
    }

    let log_values: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let (r_pow, slope) = correlation(&log_eps, &log_values);
    let (r_log, _) = correlation(&log_eps, &values);
    let miss_pow = 1.0 - r_pow * r_pow;
    let miss_log = 1.0 - r_log * r_log;
    if miss_log * FIT_SEPARATION < miss_pow && r_log.abs() >= MIN_CORRELATION {
        return Ok(probe(DivergenceClass::Logarithmic, r_log.abs()));
    }
    if miss_pow * FIT_SEPARATION < miss_log && r_pow.abs() >= MIN_CORRELATION {
        return Ok(probe(DivergenceClass::Power { exponent: slope }, r_pow.abs()));
    }
    Err(Error::AmbiguousDivergence(format!(
        "d = {d}: power-law correlation {r_pow:.6}, logarithmic correlation {r_log:.6}"
    )))
}
