//! Brute-force checks of the separable bounds: maximize the exchange energy
//! over product states, and locate witness crossing temperatures.
//!
//! The exchange energy is linear in each site's state, so its extremum over
//! separable (mixed) states is attained on pure product states, which is all
//! the search covers.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[cfg(not(feature = "std"))]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{HermitianOperator, C64};
use crate::models::{ChainSpec, SectorSpectrum};
use crate::thermal::{ChainEnsemble, G_FACTOR};
use crate::witness::{energy_witness, susceptibility_witness, WitnessKind};
use crate::{Error, Result};

pub const DEFAULT_RESTARTS: usize = 1000;
pub const MAX_SWEEPS: usize = 10_000;
const ASCENT_TOL: f64 = 1e-10;
const CROSSING_REL_WIDTH: f64 = 1e-6;

/// Bloch angles of a pure product state, one pair per site.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProductStateParam {
    /// Polar angles in `[0, pi]`.
    pub theta: Vec<f64>,
    /// Azimuths in `[0, 2 pi)`.
    pub phi: Vec<f64>,
}

impl ProductStateParam {
    pub fn num_sites(&self) -> usize {
        self.theta.len()
    }

    pub fn bloch_vectors(&self) -> Vec<[f64; 3]> {
        self.theta.iter().zip(&self.phi).map(|(&t, &p)| [t.sin() * p.cos(), t.sin() * p.sin(), t.cos()]).collect()
    }

    fn from_bloch(vectors: &[[f64; 3]]) -> Self {
        let mut theta = Vec::with_capacity(vectors.len());
        let mut phi = Vec::with_capacity(vectors.len());
        for v in vectors {
            theta.push(v[2].clamp(-1.0, 1.0).acos());
            let p = v[1].atan2(v[0]);
            phi.push(if p < 0.0 { p + 2.0 * PI } else { p });
        }
        Self { theta, phi }
    }
}

/// Expectation of a two-local Hamiltonian in product states:
/// `c + sum_i h_i . n_i + sum_{i<j} n_i^T K_ij n_j` over Bloch vectors `n_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductObjective {
    num_sites: usize,
    constant: f64,
    fields: Vec<[f64; 3]>,
    // couplings[i * n + j] for i < j
    couplings: Vec<[[f64; 3]; 3]>,
}

/// `P|s> = phase(s) |s ^ flip>` for one Pauli factor on one bit.
fn pauli_action(axis: usize, bit_set: bool) -> (bool, C64) {
    match (axis, bit_set) {
        (0, _) => (true, C64::new(1.0, 0.0)),
        (1, false) => (true, C64::new(0.0, 1.0)),
        (1, true) => (true, C64::new(0.0, -1.0)),
        (_, false) => (false, C64::new(1.0, 0.0)),
        (_, true) => (false, C64::new(-1.0, 0.0)),
    }
}

impl ProductObjective {
    /// Expands `h` in Pauli strings of weight at most two. Fails when `h`
    /// carries higher-weight terms.
    pub fn from_operator(h: &HermitianOperator) -> Result<Self> {
        let dim = h.dim();
        if !dim.is_power_of_two() || dim < 2 {
            return Err(Error::InvalidArgument(format!("dimension {dim} is not a qubit register")));
        }
        let n = dim.trailing_zeros() as usize;
        let m = h.matrix();
        let bit = |site: usize| 1usize << (n - 1 - site);
        // tr(H P) / dim for P = prod of (site, axis)
        let coefficient = |factors: &[(usize, usize)]| -> f64 {
            let mut acc = C64::new(0.0, 0.0);
            for s in 0..dim {
                let mut flip = 0usize;
                let mut phase = C64::new(1.0, 0.0);
                for &(site, axis) in factors {
                    let (flips, p) = pauli_action(axis, s & bit(site) != 0);
                    if flips {
                        flip |= bit(site);
                    }
                    phase *= p;
                }
                acc += phase * m[(s, s ^ flip)];
            }
            acc.re / dim as f64
        };
        let constant = coefficient(&[]);
        let mut weight = constant * constant;
        let mut fields = vec![[0.0; 3]; n];
        for (i, f) in fields.iter_mut().enumerate() {
            for a in 0..3 {
                f[a] = coefficient(&[(i, a)]);
                weight += f[a] * f[a];
            }
        }
        let mut couplings = vec![[[0.0; 3]; 3]; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let k = &mut couplings[i * n + j];
                for a in 0..3 {
                    for b in 0..3 {
                        k[a][b] = coefficient(&[(i, a), (j, b)]);
                        weight += k[a][b] * k[a][b];
                    }
                }
            }
        }
        // Parseval: ||H||_F^2 = dim * sum of squared Pauli coefficients
        let norm = m.frobenius_norm();
        let total = norm * norm / dim as f64;
        if (total - weight).abs() > 1e-9 * total.max(1.0) {
            return Err(Error::InvalidArgument("operator has terms beyond two-site interactions".into()));
        }
        Ok(Self { num_sites: n, constant, fields, couplings })
    }

    /// The exchange part of a chain, read off its bond list.
    pub fn from_chain(spec: &ChainSpec) -> Result<Self> {
        spec.validate()?;
        let n = spec.num_sites;
        let mut couplings = vec![[[0.0; 3]; 3]; n * n];
        let z = if spec.model.is_isotropic() { 1.0 } else { 0.0 };
        for bond in spec.bonds() {
            let (i, j) = (bond.left.min(bond.right), bond.left.max(bond.right));
            let k = &mut couplings[i * n + j];
            k[0][0] += bond.coupling;
            k[1][1] += bond.coupling;
            k[2][2] += bond.coupling * z;
        }
        Ok(Self { num_sites: n, constant: 0.0, fields: vec![[0.0; 3]; n], couplings })
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    pub fn value(&self, n: &[[f64; 3]]) -> f64 {
        let sites = self.num_sites;
        let mut e = self.constant;
        for i in 0..sites {
            e += dot(&self.fields[i], &n[i]);
            for j in i + 1..sites {
                let k = &self.couplings[i * sites + j];
                for a in 0..3 {
                    e += n[i][a] * dot(&k[a], &n[j]);
                }
            }
        }
        e
    }

    fn local_field(&self, i: usize, n: &[[f64; 3]]) -> [f64; 3] {
        let sites = self.num_sites;
        let mut f = self.fields[i];
        for (j, nj) in n.iter().enumerate() {
            if j > i {
                let k = &self.couplings[i * sites + j];
                for a in 0..3 {
                    f[a] += dot(&k[a], nj);
                }
            } else if j < i {
                let k = &self.couplings[j * sites + i];
                for a in 0..3 {
                    for b in 0..3 {
                        f[b] += nj[a] * k[a][b];
                    }
                }
            }
        }
        f
    }

    /// Coordinate ascent on `sign * value` from `start`. Each site is turned
    /// along `sign` times its local field. Returns the value after every sweep.
    pub fn ascend(&self, start: &mut [[f64; 3]], sign: f64, max_sweeps: usize) -> Result<Vec<f64>> {
        if start.len() != self.num_sites {
            return Err(Error::DimensionMismatch { expected: self.num_sites, found: start.len() });
        }
        let mut trace = vec![sign * self.value(start)];
        for _ in 0..max_sweeps {
            for i in 0..self.num_sites {
                let f = self.local_field(i, start);
                let norm = dot(&f, &f).sqrt();
                if norm > 0.0 {
                    start[i] = [sign * f[0] / norm, sign * f[1] / norm, sign * f[2] / norm];
                }
            }
            let v = sign * self.value(start);
            let gain = v - trace[trace.len() - 1];
            trace.push(v);
            if gain < ASCENT_TOL {
                return Ok(trace);
            }
        }
        Err(Error::AscentStalled { sweeps: max_sweeps, best_so_far: trace[trace.len() - 1] })
    }
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn random_bloch(rng: &mut ChaCha8Rng, n: usize) -> Vec<[f64; 3]> {
    (0..n)
        .map(|_| {
            let z: f64 = 2.0 * rng.random::<f64>() - 1.0;
            let phi: f64 = 2.0 * PI * rng.random::<f64>();
            let r = (1.0 - z * z).max(0.0).sqrt();
            [r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OracleReport {
    /// Largest `|<H_ex>|` found over product states.
    pub best_value: f64,
    pub bound: f64,
    /// `bound - best_value`; small means the bound is tight.
    pub gap: f64,
    pub restarts_used: usize,
    pub seed: u64,
    pub best_state: ProductStateParam,
}

/// Maximizes `|<objective>|` over product states from `restarts` random
/// starts and compares it with `bound`. Restart `k` draws from the ChaCha8
/// stream `k` of `seed`, so results do not depend on scheduling.
pub fn max_abs_over_products(
    objective: &ProductObjective,
    bound: f64,
    restarts: usize,
    seed: u64,
) -> Result<OracleReport> {
    if restarts < 1 {
        return Err(Error::InvalidArgument("at least one restart is required".into()));
    }
    let n = objective.num_sites();
    let run = |k: usize| -> Result<(f64, Vec<[f64; 3]>)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(k as u64);
        let start = random_bloch(&mut rng, n);
        let mut best = (f64::NEG_INFINITY, start.clone());
        for sign in [1.0, -1.0] {
            let mut state = start.clone();
            let trace = objective.ascend(&mut state, sign, MAX_SWEEPS)?;
            let v = trace[trace.len() - 1];
            if v > best.0 {
                best = (v, state);
            }
        }
        Ok(best)
    };

    #[cfg(feature = "parallel")]
    let results = {
        use rayon::prelude::*;
        (0..restarts).into_par_iter().map(run).collect::<Result<Vec<_>>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let results = (0..restarts).map(run).collect::<Result<Vec<_>>>()?;

    let mut best = &results[0];
    for r in &results[1..] {
        if r.0 > best.0 {
            best = r;
        }
    }
    Ok(OracleReport {
        best_value: best.0,
        bound,
        gap: bound - best.0,
        restarts_used: restarts,
        seed,
        best_state: ProductStateParam::from_bloch(&best.1),
    })
}

/// Product-state maximum of `|<H_ex>|` for a chain against the separable
/// bound `N |J|`.
pub fn max_abs_exchange_over_products(spec: &ChainSpec, restarts: usize, seed: u64) -> Result<OracleReport> {
    let objective = ProductObjective::from_chain(spec)?;
    let bound = spec.num_sites as f64 * spec.witness_coupling();
    max_abs_over_products(&objective, bound, restarts, seed)
}

/// Temperature where the margin of `witness` changes sign inside
/// `[t_lo, t_hi]`, by bisection to a relative bracket width of `1e-6`.
///
/// The energy witness is evaluated at the chain's own field; the
/// susceptibility witness always at zero field.
pub fn witness_crossing_temperature(spec: &ChainSpec, witness: WitnessKind, t_lo: f64, t_hi: f64) -> Result<f64> {
    crate::error::check_temperature(t_lo)?;
    crate::error::check_temperature(t_hi)?;
    if t_hi <= t_lo {
        return Err(Error::InvalidArgument(format!("empty bracket [{t_lo}, {t_hi}]")));
    }
    let spectrum = SectorSpectrum::new(spec)?;
    let n = spec.num_sites;
    let margin = |t: f64| -> Result<f64> {
        match witness {
            WitnessKind::EnergyWitness => {
                let p = ChainEnsemble::new(&spectrum, spec.field_b, t)?.thermo_point();
                Ok(energy_witness(p.internal_energy(), spec.field_b, p.m, n, spec.witness_coupling())?.margin)
            }
            WitnessKind::SusceptibilityWitness => {
                let chi = ChainEnsemble::new(&spectrum, 0.0, t)?.chi();
                Ok(susceptibility_witness(chi, t, n, G_FACTOR)?.margin)
            }
        }
    };
    let (mut lo, mut hi) = (t_lo, t_hi);
    let lo_flagged = margin(lo)? > 0.0;
    let hi_flagged = margin(hi)? > 0.0;
    if lo_flagged == hi_flagged {
        return Err(Error::NoCrossing { t_lo, t_hi, always_entangled: lo_flagged });
    }
    while hi - lo > CROSSING_REL_WIDTH * hi {
        let mid = 0.5 * (lo + hi);
        if (margin(mid)? > 0.0) == lo_flagged {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
