//! Energy and susceptibility entanglement witnesses and (T, B) phase diagrams.
//!
//! Verdicts are one-sided: a positive margin proves entanglement, anything
//! else is [`Verdict::Unknown`]. No witness here can certify separability.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec::Vec;


use crate::error::check_temperature;
use crate::models::{ChainSpec, SectorSpectrum};
use crate::thermal::{ChainEnsemble, ThermoPoint, G_FACTOR};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum WitnessKind {
    /// `|U + B M| > N |J|`
    EnergyWitness,
    /// `chi < g^2 N / (6 T)`
    SusceptibilityWitness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Verdict {
    Entangled,
    Unknown,
}

impl Verdict {
    pub fn is_entangled(self) -> bool {
        self == Verdict::Entangled
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Entangled => "entangled",
            Verdict::Unknown => "unknown",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WitnessVerdict {
    pub witness_id: WitnessKind,
    pub value: f64,
    pub bound: f64,
    /// Positive means entangled, for both witnesses.
    pub margin: f64,
    pub verdict: Verdict,
}

/// Margins within this fraction of the bound are rounding noise and read as 0.
/// Saturated ferromagnets attain the energy bound exactly with product states.
pub const MARGIN_ROUNDING: f64 = 1e-12;

impl WitnessVerdict {
    fn from_margin(witness_id: WitnessKind, value: f64, bound: f64, margin: f64) -> Self {
        let margin = if margin.abs() <= MARGIN_ROUNDING * bound.abs().max(1.0) { 0.0 } else { margin };
        let verdict = if margin > 0.0 { Verdict::Entangled } else { Verdict::Unknown };
        Self { witness_id, value, bound, margin, verdict }
    }
}

/// Energy witness on the internal energy `u = <H_total>`, field `b` and
/// magnetization `m`: entangled when `|u + b m| > n |j|`.
pub fn energy_witness(u: f64, b: f64, m: f64, n: usize, j: f64) -> Result<WitnessVerdict> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("energy witness needs N >= 2, got {n}")));
    }
    if !(j.is_finite() && j != 0.0) {
        return Err(Error::InvalidArgument(format!("energy witness needs finite nonzero J, got {j}")));
    }
    let value = (u + b * m).abs();
    let bound = n as f64 * j.abs();
    Ok(WitnessVerdict::from_margin(WitnessKind::EnergyWitness, value, bound, value - bound))
}

/// Separable threshold `g^2 mu_B^2 N / (6 k_B T)` in natural units.
pub fn transition_susceptibility(temperature: f64, n: usize, g: f64) -> f64 {
    g * g * n as f64 / (6.0 * temperature)
}

/// Susceptibility witness: entangled when `chi` lies below the separable threshold.
pub fn susceptibility_witness(chi: f64, temperature: f64, n: usize, g: f64) -> Result<WitnessVerdict> {
    check_temperature(temperature)?;
    if n < 1 {
        return Err(Error::InvalidArgument("susceptibility witness needs N >= 1".into()));
    }
    let bound = transition_susceptibility(temperature, n, g);
    Ok(WitnessVerdict::from_margin(WitnessKind::SusceptibilityWitness, chi, bound, bound - chi))
}

/// Temperature below which gapped ground-state entanglement survives, `T ~ J1 / k_B`.
pub fn gap_transition_estimate(j1: f64) -> Result<f64> {
    if !(j1.is_finite() && j1 > 0.0) {
        return Err(Error::InvalidArgument(format!("J1 must be positive, got {j1}")));
    }
    Ok(j1)
}

/// Both witnesses at one `(T, B)` point.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PhaseCell {
    pub thermo: ThermoPoint,
    /// Susceptibility at the same temperature and zero field; the witness input.
    pub chi_zero_field: f64,
    pub energy: WitnessVerdict,
    pub susceptibility: WitnessVerdict,
}

impl PhaseCell {
    pub fn any_entangled(&self) -> bool {
        self.energy.verdict.is_entangled() || self.susceptibility.verdict.is_entangled()
    }
}

/// Witness margins over a `(T, B)` grid, stored B-major.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PhaseDiagram {
    pub spec: ChainSpec,
    pub t_axis: Vec<f64>,
    pub b_axis: Vec<f64>,
    pub cells: Vec<PhaseCell>,
}

impl PhaseDiagram {
    pub fn cell(&self, t_index: usize, b_index: usize) -> &PhaseCell {
        &self.cells[b_index * self.t_axis.len() + t_index]
    }
}

fn evaluate_cell(spec: &ChainSpec, spectrum: &SectorSpectrum, t: f64, b: f64, chi0: f64) -> Result<PhaseCell> {
    let thermo = ChainEnsemble::new(spectrum, b, t)?.thermo_point();
    let n = spec.num_sites;
    let energy = energy_witness(thermo.internal_energy(), b, thermo.m, n, spec.witness_coupling())?;
    let susceptibility = susceptibility_witness(chi0, t, n, G_FACTOR)?;
    if !(thermo.u.is_finite() && thermo.m.is_finite() && thermo.chi.is_finite() && chi0.is_finite()) {
        return Err(Error::NonFinite("thermal observables"));
    }
    Ok(PhaseCell { thermo, chi_zero_field: chi0, energy, susceptibility })
}

/// Evaluates both witnesses for `spec` at its own field and `temperature`.
pub fn witness_point(spec: &ChainSpec, temperature: f64) -> Result<PhaseCell> {
    check_temperature(temperature)?;
    let spectrum = SectorSpectrum::new(spec)?;
    let chi0 = ChainEnsemble::new(&spectrum, 0.0, temperature)?.chi();
    evaluate_cell(spec, &spectrum, temperature, spec.field_b, chi0)
}

fn check_axis(name: &str, axis: &[f64], positive: bool) -> Result<()> {
    if axis.is_empty() {
        return Err(Error::InvalidArgument(format!("{name} axis is empty")));
    }
    if axis.iter().any(|x| !x.is_finite() || (positive && *x <= 0.0)) {
        return Err(Error::InvalidArgument(format!("{name} axis has invalid values")));
    }
    if axis.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(format!("{name} axis is not strictly increasing")));
    }
    Ok(())
}

/// Evaluates both witnesses over every `(T, B)` pair. The field of `spec` is
/// ignored in favour of `b_axis`. Cells are independent; with the `parallel`
/// feature they are computed concurrently and merged in grid order, so the
/// result does not depend on scheduling.
pub fn sweep(spec: &ChainSpec, t_axis: &[f64], b_axis: &[f64]) -> Result<PhaseDiagram> {
    check_axis("temperature", t_axis, true)?;
    check_axis("field", b_axis, false)?;
    let spectrum = SectorSpectrum::new(spec)?;
    let chi0: Vec<f64> =
        t_axis.iter().map(|&t| ChainEnsemble::new(&spectrum, 0.0, t).map(|e| e.chi())).collect::<Result<_>>()?;

    let nt = t_axis.len();
    let run = |index: usize| -> Result<PhaseCell> {
        let (it, ib) = (index % nt, index / nt);
        let (t, b) = (t_axis[it], b_axis[ib]);
        evaluate_cell(spec, &spectrum, t, b, chi0[it]).map_err(|e| Error::Cell {
            temperature: t,
            field: b,
            source: Box::new(e),
        })
    };
    let count = nt * b_axis.len();

    #[cfg(feature = "parallel")]
    let cells = {
        use rayon::prelude::*;
        (0..count).into_par_iter().map(run).collect::<Result<Vec<_>>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let cells = (0..count).map(run).collect::<Result<Vec<_>>>()?;

    Ok(PhaseDiagram { spec: *spec, t_axis: t_axis.to_vec(), b_axis: b_axis.to_vec(), cells })
}
