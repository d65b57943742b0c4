//! Two-point spin correlations in chain thermal states and classification of
//! their decay with separation.
//!
//! Classification only describes the finite window of separations it is
//! given; nothing is extrapolated to infinite chains.

use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::algebra::{eigh, embed_product, expectation, pauli, thermal_state, DensityMatrix, HermitianOperator};
use crate::models::{Boundary, ChainSpec, ModelOperators, SectorSpectrum};
use crate::thermal::ChainEnsemble;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum CorrelatorKind {
    /// `<sigma^z_i sigma^z_j>`
    Zz,
    /// `<sigma_i . sigma_j>`
    FullDot,
}

fn check_pair(kind: CorrelatorKind, i: usize, j: usize, num_sites: usize, connected: bool) -> Result<()> {
    if i == j {
        return Err(Error::InvalidSites("correlator needs two distinct sites"));
    }
    for site in [i, j] {
        if site >= num_sites {
            return Err(Error::SiteOutOfRange { site, num_sites });
        }
    }
    if connected && kind == CorrelatorKind::FullDot {
        return Err(Error::InvalidArgument("the connected form is only defined for the zz correlator".into()));
    }
    Ok(())
}

/// Correlator in a given state of `num_sites` spins.
pub fn state_correlator(
    rho: &DensityMatrix,
    num_sites: usize,
    kind: CorrelatorKind,
    i: usize,
    j: usize,
    connected: bool,
) -> Result<f64> {
    check_pair(kind, i, j, num_sites, connected)?;
    let pair = |p: &crate::algebra::CMatrix| -> Result<f64> {
        let op = HermitianOperator::new(embed_product(&[(i, p), (j, p)], num_sites)?)?;
        expectation(rho, &op)
    };
    let z = pauli::z();
    let mut value = pair(&z)?;
    if kind == CorrelatorKind::FullDot {
        value += pair(&pauli::x())? + pair(&pauli::y())?;
    }
    if connected {
        let single = |s: usize| -> Result<f64> {
            expectation(rho, &HermitianOperator::new(embed_product(&[(s, &z)], num_sites)?)?)
        };
        value -= single(i)? * single(j)?;
    }
    Ok(value)
}

/// Correlator in the Gibbs state of `h_total` at `temperature`.
pub fn correlator(
    ops: &ModelOperators,
    temperature: f64,
    kind: CorrelatorKind,
    i: usize,
    j: usize,
    connected: bool,
) -> Result<f64> {
    check_pair(kind, i, j, ops.num_sites(), connected)?;
    let rho = thermal_state(&eigh(ops.h_total())?, temperature)?;
    state_correlator(&rho, ops.num_sites(), kind, i, j, connected)
}

/// Correlator evaluated on the magnetization-resolved spectrum; scales to
/// the largest chains supported.
pub fn ensemble_correlator(
    ensemble: &ChainEnsemble<'_>,
    kind: CorrelatorKind,
    i: usize,
    j: usize,
    connected: bool,
) -> Result<f64> {
    let spectrum = ensemble.spectrum();
    check_pair(kind, i, j, spectrum.num_sites(), connected)?;
    let (a, b) = (spectrum.site_bit(i), spectrum.site_bit(j));
    let sz = |s: u32, bit: u32| if s & bit == 0 { 1.0 } else { -1.0 };
    let mut value = ensemble.average(|sector, k| sector.diagonal_expectation(k, |s| sz(s, a) * sz(s, b)));
    if kind == CorrelatorKind::FullDot {
        value += ensemble.average(|sector, k| sector.flip_expectation(k, a, b));
    }
    if connected {
        let zi = ensemble.average(|sector, k| sector.diagonal_expectation(k, |s| sz(s, a)));
        let zj = ensemble.average(|sector, k| sector.diagonal_expectation(k, |s| sz(s, b)));
        value -= zi * zj;
    }
    Ok(value)
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CorrelationSeries {
    pub separations: Vec<usize>,
    pub values: Vec<f64>,
    pub connected: bool,
}

impl CorrelationSeries {
    pub fn new(separations: Vec<usize>, values: Vec<f64>, connected: bool) -> Result<Self> {
        let series = Self { separations, values, connected };
        series.validate()?;
        Ok(series)
    }

    fn validate(&self) -> Result<()> {
        if self.separations.len() != self.values.len() {
            return Err(Error::DimensionMismatch { expected: self.separations.len(), found: self.values.len() });
        }
        if self.separations.first().is_some_and(|&r| r < 1) {
            return Err(Error::InvalidArgument("separations start at 1".into()));
        }
        if self.separations.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument("separations must be strictly increasing".into()));
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("correlation values"));
        }
        Ok(())
    }
}

/// `C(0, r)` for `r = 1 ..= r_max` in the Gibbs state of `spec` at its own
/// field, where `r_max` is `N/2` on rings and `N - 1` on open chains.
pub fn correlation_series(
    spec: &ChainSpec,
    temperature: f64,
    kind: CorrelatorKind,
    connected: bool,
) -> Result<CorrelationSeries> {
    let spectrum = SectorSpectrum::new(spec)?;
    let ensemble = ChainEnsemble::new(&spectrum, spec.field_b, temperature)?;
    let n = spec.num_sites;
    let r_max = match spec.boundary {
        Boundary::Periodic => n / 2,
        Boundary::Open => n - 1,
    };
    let separations: Vec<usize> = (1..=r_max).collect();
    let values = separations
        .iter()
        .map(|&r| ensemble_correlator(&ensemble, kind, 0, r, connected))
        .collect::<Result<Vec<_>>>()?;
    CorrelationSeries::new(separations, values, connected)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum DecayClass {
    Lro,
    PowerLaw,
    Exponential,
    Inconclusive,
}

/// Relative RMS residual of each candidate model; `None` when the fit is
/// degenerate with a constant.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FitScores {
    pub constant: f64,
    pub power_law: Option<f64>,
    pub exponential: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DecayClassification {
    pub class: DecayClass,
    pub eta: Option<f64>,
    pub xi: Option<f64>,
    /// `max(0, 1 - s)` for the winning relative RMS residual `s`.
    pub fit_quality: f64,
    pub scores: FitScores,
    pub dropped_points: usize,
    /// A period-two sign pattern was found and factored out.
    pub sign_alternating: bool,
    pub r_min: usize,
    pub r_max: usize,
}

pub const MIN_POINTS: usize = 5;
/// Top two scores closer than this fraction make the result inconclusive.
pub const SELECTION_MARGIN: f64 = 0.10;
/// `eta` below this, or `r_max / xi` below this, is indistinguishable from a constant.
pub const DEGENERATE_DECAY: f64 = 0.01;
const ZERO_THRESHOLD: f64 = 1e-14;

fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    (my - slope * mx, slope)
}

fn relative_rms(y: &[f64], pred: impl Fn(usize) -> f64) -> f64 {
    let sum: f64 = y.iter().enumerate().map(|(k, &v)| ((v - pred(k)) / v).powi(2)).sum();
    (sum / y.len() as f64).sqrt()
}

/// Fits a constant, `a r^-eta` and `a exp(-r/xi)` to `|C(r)|` and picks the
/// best by relative RMS residual.
pub fn classify_decay(series: &CorrelationSeries) -> Result<DecayClassification> {
    series.validate()?;
    let scale = series.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let kept: Vec<(usize, f64)> = series
        .separations
        .iter()
        .zip(&series.values)
        .filter(|(_, v)| v.abs() > ZERO_THRESHOLD * scale)
        .map(|(&r, &v)| (r, v))
        .collect();
    let dropped = series.values.len() - kept.len();
    if kept.len() < MIN_POINTS {
        return Err(Error::TooFewPoints { needed: MIN_POINTS, available: kept.len(), dropped });
    }

    let parity = |r: usize, v: f64| if r.is_multiple_of(2) == (v > 0.0) { 1 } else { -1 };
    let p0 = parity(kept[0].0, kept[0].1);
    let sign_alternating = kept.iter().all(|&(r, v)| parity(r, v) == p0)
        && kept.iter().any(|&(_, v)| v > 0.0)
        && kept.iter().any(|&(_, v)| v < 0.0);

    let r: Vec<f64> = kept.iter().map(|&(r, _)| r as f64).collect();
    let y: Vec<f64> = kept.iter().map(|&(_, v)| v.abs()).collect();
    let log_r: Vec<f64> = r.iter().map(|x| x.ln()).collect();
    let log_y: Vec<f64> = y.iter().map(|x| x.ln()).collect();
    let r_max = *r.last().unwrap();

    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let constant = relative_rms(&y, |_| mean);

    let (ln_a, slope) = linear_fit(&log_r, &log_y);
    let eta = -slope;
    let power_law = (eta.abs() >= DEGENERATE_DECAY).then(|| relative_rms(&y, |k| ln_a.exp() * r[k].powf(slope)));

    let (ln_b, rate) = linear_fit(&r, &log_y);
    let xi = -1.0 / rate;
    let exponential =
        (rate.abs() * r_max >= DEGENERATE_DECAY).then(|| relative_rms(&y, |k| (ln_b + rate * r[k]).exp()));

    let scores = FitScores { constant, power_law, exponential };
    let mut ranked: Vec<(DecayClass, f64)> =
        [(DecayClass::Lro, Some(constant)), (DecayClass::PowerLaw, power_law), (DecayClass::Exponential, exponential)]
            .into_iter()
            .filter_map(|(c, s)| s.map(|s| (c, s)))
            .collect();
    ranked.sort_by(|a, b| a.1.total_cmp(&b.1));

    let (best, best_score) = ranked[0];
    let class = match ranked.get(1) {
        Some(&(_, second)) if second - best_score < SELECTION_MARGIN * second => DecayClass::Inconclusive,
        _ => best,
    };
    if !best_score.is_finite() {
        return Err(Error::NonFinite("decay fit"));
    }
    Ok(DecayClassification {
        class,
        eta: (class == DecayClass::PowerLaw).then_some(eta),
        xi: (class == DecayClass::Exponential).then_some(xi),
        fit_quality: (1.0 - best_score).max(0.0),
        scores,
        dropped_points: dropped,
        sign_alternating,
        r_min: kept[0].0,
        r_max: kept[kept.len() - 1].0,
    })
}

impl core::fmt::Display for DecayClass {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            DecayClass::Lro => "lro",
            DecayClass::PowerLaw => "power_law",
            DecayClass::Exponential => "exponential",
            DecayClass::Inconclusive => "inconclusive",
        })
    }
}
