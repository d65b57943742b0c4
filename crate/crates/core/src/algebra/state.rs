use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use super::eigen::{eigh, SpectralDecomposition};
use super::matrix::{CMatrix, C64};
use crate::error::check_temperature;
use crate::{Error, Result};

/// Dense diagonalization ceiling: 2^12 = 4096 basis states.
pub const MAX_SITES: usize = 12;

const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-10;
const POSITIVITY_TOL: f64 = 1e-10;
const IMAG_RESIDUE_TOL: f64 = 1e-10;

/// A dense Hermitian matrix, checked at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator(CMatrix);

impl HermitianOperator {
    /// Accepts `m` when `|m - m^dagger|` is within 1e-12 of its largest entry.
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.dim() == 0 {
            return Err(Error::InvalidArgument("operator dimension must be at least 1".into()));
        }
        let scale = m.max_abs().max(1.0);
        let dev = m.hermiticity_deviation() / scale;
        if !dev.is_finite() || dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        Ok(Self(m))
    }

    pub(crate) fn new_unchecked(m: CMatrix) -> Self {
        Self(m)
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self(self.0.scale(s))
    }

    pub fn sum(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    pub fn difference(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }

    /// `self * self`, which stays Hermitian.
    pub fn squared(&self) -> Self {
        Self(&self.0 * &self.0)
    }
}

/// A validated density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(CMatrix);

impl DensityMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        let h = HermitianOperator::new(m)?;
        let tr = h.matrix().trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState("trace differs from 1"));
        }
        let min = eigh(&h)?.eigenvalues()[0];
        if min < -POSITIVITY_TOL {
            return Err(Error::InvalidState("negative eigenvalue"));
        }
        Ok(Self(h.into_matrix()))
    }

    /// Projector onto a normalized copy of `psi`.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if psi.is_empty() || norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("zero or non-finite state vector"));
        }
        let n = psi.len();
        let m = CMatrix::from_fn(n, |i, j| psi[i] * psi[j].conj() / (norm * norm));
        Ok(Self(m))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(CMatrix::identity(dim).scale(1.0 / dim as f64))
    }

    /// Product `self ⊗ other`, with `self` on the leading sites.
    pub fn tensor(&self, other: &Self) -> Self {
        Self(self.0.kron(&other.0))
    }

    pub(crate) fn new_unchecked(m: CMatrix) -> Self {
        Self(m)
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    /// Diagonal of the matrix in the computational basis.
    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.0[(i, i)].re).collect()
    }
}

fn num_qubits(dim: usize) -> Option<usize> {
    dim.is_power_of_two().then(|| dim.trailing_zeros() as usize)
}

/// `1 ⊗ … ⊗ op ⊗ … ⊗ 1` with `op` acting on `site` (site 0 leftmost).
pub fn embed_local(op: &HermitianOperator, site: usize, num_sites: usize) -> Result<HermitianOperator> {
    embed_product(&[(site, op.matrix())], num_sites).map(HermitianOperator::new_unchecked)
}

/// Tensor product of 2x2 factors on distinct sites, identity elsewhere.
///
/// The result is Hermitian when every factor is; that is left to the caller.
pub fn embed_product(factors: &[(usize, &CMatrix)], num_sites: usize) -> Result<CMatrix> {
    if num_sites == 0 || num_sites > MAX_SITES {
        return Err(Error::InvalidArgument(alloc::format!("num_sites must be in 1..={MAX_SITES}, got {num_sites}")));
    }
    for (k, &(site, op)) in factors.iter().enumerate() {
        if site >= num_sites {
            return Err(Error::SiteOutOfRange { site, num_sites });
        }
        if op.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: op.dim() });
        }
        if factors[..k].iter().any(|&(s, _)| s == site) {
            return Err(Error::InvalidSites("repeated site in tensor product"));
        }
    }
    let dim = 1usize << num_sites;
    let bit = |index: usize, site: usize| (index >> (num_sites - 1 - site)) & 1;
    let mut mask = 0usize;
    for &(site, _) in factors {
        mask |= 1 << (num_sites - 1 - site);
    }
    let mut out = CMatrix::zeros(dim);
    for r in 0..dim {
        // identity factors force matching bits outside the mask
        let free = r & !mask;
        let sub = factors.len();
        for pattern in 0..(1usize << sub) {
            let mut c = free;
            for (k, &(site, _)) in factors.iter().enumerate() {
                if (pattern >> k) & 1 == 1 {
                    c |= 1 << (num_sites - 1 - site);
                }
            }
            let mut amp = C64::new(1.0, 0.0);
            for &(site, op) in factors {
                amp *= op[(bit(r, site), bit(c, site))];
                if amp.re == 0.0 && amp.im == 0.0 {
                    break;
                }
            }
            out[(r, c)] = amp;
        }
    }
    Ok(out)
}

/// Gibbs state `exp(-H/T)/Z` built in the eigenbasis from ground-shifted energies.
pub fn thermal_state(spec: &SpectralDecomposition, temperature: f64) -> Result<DensityMatrix> {
    check_temperature(temperature)?;
    let weights = gibbs_weights(spec.eigenvalues(), temperature)?;
    let n = spec.dim();
    let mut rho = CMatrix::zeros(n);
    for (k, &w) in weights.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let v = spec.eigenvector(k);
        for i in 0..n {
            let vi = v[i] * w;
            if vi.re == 0.0 && vi.im == 0.0 {
                continue;
            }
            for j in 0..n {
                rho[(i, j)] += vi * v[j].conj();
            }
        }
    }
    if rho.as_slice().iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite("thermal state"));
    }
    Ok(DensityMatrix::new_unchecked(rho))
}

/// Normalized Boltzmann weights of `energies` at `temperature`, shifted by the minimum.
pub(crate) fn gibbs_weights(energies: &[f64], temperature: f64) -> Result<Vec<f64>> {
    let e0 = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let mut w: Vec<f64> = energies.iter().map(|&e| (-(e - e0) / temperature).exp()).collect();
    let z: f64 = w.iter().sum();
    if !z.is_finite() || z <= 0.0 {
        return Err(Error::NonFinite("partition function"));
    }
    for x in &mut w {
        *x /= z;
    }
    Ok(w)
}

/// `tr(rho * obs)`; the imaginary part must vanish to 1e-10.
pub fn expectation(rho: &DensityMatrix, obs: &HermitianOperator) -> Result<f64> {
    if rho.dim() != obs.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), found: obs.dim() });
    }
    let v = rho.matrix().trace_product(obs.matrix());
    let scale = obs.matrix().max_abs().max(1.0);
    if v.im.abs() > IMAG_RESIDUE_TOL * scale {
        return Err(Error::ComplexExpectation(v.im));
    }
    Ok(v.re)
}

/// Reduced state on `keep_sites`, ordered by ascending site index.
pub fn partial_trace(rho: &DensityMatrix, keep_sites: &[usize], num_sites: usize) -> Result<DensityMatrix> {
    if num_qubits(rho.dim()) != Some(num_sites) {
        return Err(Error::DimensionMismatch { expected: 1 << num_sites.min(63), found: rho.dim() });
    }
    let keep = site_mask(keep_sites, num_sites)?;
    if keep == 0 {
        return Err(Error::InvalidSites("keep set is empty"));
    }
    let kept: Vec<usize> = (0..num_sites).filter(|s| keep >> s & 1 == 1).collect();
    let traced: Vec<usize> = (0..num_sites).filter(|s| keep >> s & 1 == 0).collect();
    let compose = |sites: &[usize], bits: usize| -> usize {
        let mut idx = 0;
        for (k, &s) in sites.iter().enumerate() {
            if (bits >> (sites.len() - 1 - k)) & 1 == 1 {
                idx |= 1 << (num_sites - 1 - s);
            }
        }
        idx
    };
    let dk = 1usize << kept.len();
    let dt = 1usize << traced.len();
    let m = rho.matrix();
    let out = CMatrix::from_fn(dk, |a, b| {
        let (ia, ib) = (compose(&kept, a), compose(&kept, b));
        (0..dt)
            .map(|t| {
                let it = compose(&traced, t);
                m[(ia | it, ib | it)]
            })
            .sum()
    });
    Ok(DensityMatrix::new_unchecked(out))
}

/// Bit mask (bit `s` for site `s`) of a duplicate-free, in-range site list.
pub(crate) fn site_mask(sites: &[usize], num_sites: usize) -> Result<u64> {
    let mut mask = 0u64;
    for &s in sites {
        if s >= num_sites {
            return Err(Error::SiteOutOfRange { site: s, num_sites });
        }
        if mask >> s & 1 == 1 {
            return Err(Error::InvalidSites("repeated site"));
        }
        mask |= 1 << s;
    }
    Ok(mask)
}
