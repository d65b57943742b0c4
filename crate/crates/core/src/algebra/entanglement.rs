//! Two-qubit concurrence and bipartite negativity.

use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use num_traits::Float;

use super::eigen::eigh;
use super::matrix::{pauli, CMatrix};
use super::state::{site_mask, DensityMatrix, HermitianOperator};
use crate::{Error, Result};

/// One side of a bipartition of `num_sites` qubits. The other side is the complement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    num_sites: usize,
    mask: u64,
}

impl Bipartition {
    pub fn new(side_a: &[usize], num_sites: usize) -> Result<Self> {
        let mask = site_mask(side_a, num_sites)?;
        if mask == 0 || mask.count_ones() as usize == num_sites {
            return Err(Error::InvalidSites("bipartition side must be a nonempty proper subset"));
        }
        Ok(Self { num_sites, mask })
    }

    /// Every bipartition up to swapping the two sides (side A never holds the last site).
    pub fn all(num_sites: usize) -> Vec<Self> {
        if num_sites < 2 {
            return Vec::new();
        }
        let half = 1u64 << (num_sites - 1);
        (1..half).map(|mask| Self { num_sites, mask }).collect()
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    pub fn side_a(&self) -> Vec<usize> {
        (0..self.num_sites).filter(|s| self.mask >> s & 1 == 1).collect()
    }

    // the mask in basis-index bit positions (big-endian sites)
    fn index_mask(&self) -> usize {
        let mut m = 0usize;
        for s in 0..self.num_sites {
            if self.mask >> s & 1 == 1 {
                m |= 1 << (self.num_sites - 1 - s);
            }
        }
        m
    }
}

/// Partial transpose over side A of `partition`.
pub fn partial_transpose(rho: &DensityMatrix, partition: &Bipartition) -> Result<CMatrix> {
    let dim = 1usize << partition.num_sites;
    if rho.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: rho.dim() });
    }
    let a = partition.index_mask();
    let m = rho.matrix();
    Ok(CMatrix::from_fn(dim, |i, j| {
        let i2 = (i & !a) | (j & a);
        let j2 = (j & !a) | (i & a);
        m[(i2, j2)]
    }))
}

/// Sum of the magnitudes of the negative eigenvalues of the partial transpose.
pub fn negativity(rho: &DensityMatrix, partition: &Bipartition) -> Result<f64> {
    let pt = HermitianOperator::new(partial_transpose(rho, partition)?)?;
    let spec = eigh(&pt)?;
    Ok(spec.eigenvalues().iter().filter(|&&l| l < 0.0).map(|l| -l).sum())
}

/// Wootters concurrence of a two-qubit state.
///
/// The square roots of the eigenvalues of `rho (Y⊗Y) rho* (Y⊗Y)` are taken as the
/// eigenvalues of `sqrt(sqrt(rho) rho~ sqrt(rho))`, which keeps every step Hermitian.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch { expected: 4, found: rho.dim() });
    }
    let yy = pauli::y().kron(&pauli::y());
    let flipped = &(&yy * &rho.matrix().conj()) * &yy;

    let spec = eigh(&HermitianOperator::new_unchecked(rho.matrix().clone()))?;
    let mut sqrt_rho = CMatrix::zeros(4);
    for (k, &l) in spec.eigenvalues().iter().enumerate() {
        let s = l.max(0.0).sqrt();
        let v = spec.eigenvector(k);
        for i in 0..4 {
            for j in 0..4 {
                sqrt_rho[(i, j)] += v[i] * v[j].conj() * s;
            }
        }
    }
    let mut r = &(&sqrt_rho * &flipped) * &sqrt_rho;
    // symmetrize away rounding before the Hermitian solve
    r = (&r + &r.adjoint()).scale(0.5);
    let mut s: Vec<f64> =
        eigh(&HermitianOperator::new_unchecked(r))?.eigenvalues().iter().map(|&l| l.max(0.0).sqrt()).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok((s[0] - s[1] - s[2] - s[3]).max(0.0))
}
