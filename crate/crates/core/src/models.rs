//! Chain Hamiltonians: XXX, XX and the alternating J1-J2 chain.
//!
//! Exchange is written with Pauli matrices and a `+J` sign, so a single XXX
//! bond `J sigma_1 . sigma_2` has levels (-3J, J, J, J). The magnetization is
//! `M = 1/2 sum sigma_z` and the field enters as `H_total = H_ex - B M`, which
//! puts the dimer singlet/triplet crossing at `B = 4J`.
//!
//! Two independent constructions are provided. [`build`] assembles dense
//! operators from embedded Pauli products. [`SectorSpectrum`] works directly on
//! bit strings, one conserved-magnetization block at a time, which is what
//! makes twelve-site chains and large sweeps affordable.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;


use crate::algebra::{eigh, embed_product, hermitian_eigen, pauli, CMatrix, HermitianOperator, MAX_SITES};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum Model {
    /// `J sum sigma_j . sigma_{j+1}`
    Xxx { j: f64 },
    /// `J sum (sigma^x_j sigma^x_{j+1} + sigma^y_j sigma^y_{j+1})`
    Xx { j: f64 },
    /// Heisenberg bonds alternating `J1` (from even sites) and `J2` (from odd sites).
    Alternating { j1: f64, j2: f64 },
}

impl Model {
    /// Whether bonds carry the full `sigma . sigma` exchange (as opposed to planar XX).
    pub fn is_isotropic(&self) -> bool {
        !matches!(self, Model::Xx { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Boundary {
    #[default]
    Open,
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ChainSpec {
    pub num_sites: usize,
    pub model: Model,
    pub field_b: f64,
    pub boundary: Boundary,
}

/// A nearest-neighbour bond `left -- right` with its coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bond {
    pub left: usize,
    pub right: usize,
    pub coupling: f64,
}

impl ChainSpec {
    pub fn new(num_sites: usize, model: Model, field_b: f64, boundary: Boundary) -> Result<Self> {
        let spec = Self { num_sites, model, field_b, boundary };
        spec.validate()?;
        Ok(spec)
    }

    /// Open two-site XXX chain.
    pub fn dimer(j: f64, field_b: f64) -> Result<Self> {
        Self::new(2, Model::Xxx { j }, field_b, Boundary::Open)
    }

    pub fn with_field(self, field_b: f64) -> Self {
        Self { field_b, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: alloc::string::String| Err(Error::InvalidModel(msg));
        if !(2..=MAX_SITES).contains(&self.num_sites) {
            return bad(format!("num_sites must be in 2..={MAX_SITES}, got {}", self.num_sites));
        }
        if !self.field_b.is_finite() {
            return bad(format!("field must be finite, got {}", self.field_b));
        }
        match self.model {
            Model::Xxx { j } | Model::Xx { j } => {
                if !j.is_finite() || j == 0.0 {
                    return bad(format!("coupling J must be finite and nonzero, got {j}"));
                }
            }
            Model::Alternating { j1, j2 } => {
                if !self.num_sites.is_multiple_of(2) {
                    return bad(format!("alternating chain needs an even site count, got {}", self.num_sites));
                }
                // J2 = 0 is accepted: it decouples the chain into dimers
                if !(j1.is_finite() && j1 > 0.0) || !(j2.is_finite() && j2 >= 0.0) {
                    return bad(format!("alternating chain needs J1 > 0 and J2 >= 0, got J1 = {j1}, J2 = {j2}"));
                }
            }
        }
        Ok(())
    }

    pub fn bonds(&self) -> Vec<Bond> {
        let n = self.num_sites;
        let coupling = |index: usize| match self.model {
            Model::Xxx { j } | Model::Xx { j } => j,
            Model::Alternating { j1, j2 } => {
                if index.is_multiple_of(2) {
                    j1
                } else {
                    j2
                }
            }
        };
        let count = match self.boundary {
            Boundary::Open => n - 1,
            Boundary::Periodic => n,
        };
        (0..count).map(|b| Bond { left: b, right: (b + 1) % n, coupling: coupling(b) }).collect()
    }

    /// The `|J|` that enters the separable energy bound `N|J|`.
    ///
    /// For the alternating chain this is the mean `(|J1| + |J2|)/2`, so that
    /// `N|J|` still dominates `sum_bonds |J_b|` for either boundary.
    pub fn witness_coupling(&self) -> f64 {
        match self.model {
            Model::Xxx { j } | Model::Xx { j } => j.abs(),
            Model::Alternating { j1, j2 } => 0.5 * (j1.abs() + j2.abs()),
        }
    }
}

/// Dense exchange, magnetization and total Hamiltonian of one chain.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelOperators {
    num_sites: usize,
    field_b: f64,
    h_exchange: HermitianOperator,
    magnetization: HermitianOperator,
    h_total: HermitianOperator,
}

impl ModelOperators {
    /// Assembles operators from explicit parts; `h_total = h_exchange - field_b * magnetization`.
    pub fn from_parts(h_exchange: HermitianOperator, magnetization: HermitianOperator, field_b: f64) -> Result<Self> {
        let dim = h_exchange.dim();
        if magnetization.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: magnetization.dim() });
        }
        if !dim.is_power_of_two() {
            return Err(Error::InvalidArgument(format!("dimension {dim} is not a power of two")));
        }
        let h_total = h_exchange.difference(&magnetization.scaled(field_b));
        Ok(Self { num_sites: dim.trailing_zeros() as usize, field_b, h_exchange, magnetization, h_total })
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    pub fn field_b(&self) -> f64 {
        self.field_b
    }

    pub fn h_exchange(&self) -> &HermitianOperator {
        &self.h_exchange
    }

    pub fn magnetization(&self) -> &HermitianOperator {
        &self.magnetization
    }

    pub fn h_total(&self) -> &HermitianOperator {
        &self.h_total
    }
}

/// Builds the dense operators of `spec`.
pub fn build(spec: &ChainSpec) -> Result<ModelOperators> {
    spec.validate()?;
    let n = spec.num_sites;
    let dim = 1usize << n;
    let (x, y, z) = (pauli::x(), pauli::y(), pauli::z());

    let mut h = CMatrix::zeros(dim);
    for bond in spec.bonds() {
        let mut terms = vec![&x, &y];
        if spec.model.is_isotropic() {
            terms.push(&z);
        }
        for p in terms {
            let term = embed_product(&[(bond.left, p), (bond.right, p)], n)?;
            h = &h + &term.scale(bond.coupling);
        }
    }
    let mut m = CMatrix::zeros(dim);
    for site in 0..n {
        m = &m + &embed_product(&[(site, &z)], n)?.scale(0.5);
    }
    ModelOperators::from_parts(HermitianOperator::new(h)?, HermitianOperator::new(m)?, spec.field_b)
}

/// Lowest excitation energy of `h_total`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralGap {
    /// `E1 - E0`; zero when the ground level is degenerate.
    pub gap: f64,
    pub degenerate: bool,
}

pub fn spectral_gap(ops: &ModelOperators) -> Result<SpectralGap> {
    let spec = eigh(ops.h_total())?;
    let e = spec.eigenvalues();
    if e.len() < 2 {
        return Err(Error::InvalidArgument("gap needs at least two levels".into()));
    }
    let scale = e.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
    let gap = e[1] - e[0];
    if gap <= 1e-9 * scale {
        Ok(SpectralGap { gap: 0.0, degenerate: true })
    } else {
        Ok(SpectralGap { gap, degenerate: false })
    }
}

/// Eigenstates of one conserved-magnetization block.
#[derive(Debug, Clone, PartialEq)]
pub struct Sector {
    magnetization: f64,
    states: Vec<u32>,
    energies: Vec<f64>,
    // eigenvector k occupies vectors[k*dim..(k+1)*dim], components over `states`
    vectors: Vec<f64>,
}

impl Sector {
    /// Eigenvalue of `M = 1/2 sum sigma_z` shared by every state in the block.
    pub fn magnetization(&self) -> f64 {
        self.magnetization
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    /// Computational basis indices spanning the block, ascending.
    pub fn states(&self) -> &[u32] {
        &self.states
    }

    /// Exchange energies, ascending.
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn eigenvector(&self, k: usize) -> &[f64] {
        let d = self.dim();
        &self.vectors[k * d..(k + 1) * d]
    }

    fn index_of(&self, state: u32) -> Option<usize> {
        self.states.binary_search(&state).ok()
    }

    /// `<k| O |k>` for an operator diagonal in the computational basis.
    pub fn diagonal_expectation(&self, k: usize, f: impl Fn(u32) -> f64) -> f64 {
        self.eigenvector(k).iter().zip(&self.states).map(|(&a, &s)| a * a * f(s)).sum()
    }

    /// `<k| sigma^x_a sigma^x_b + sigma^y_a sigma^y_b |k>` with `a`, `b` given as bit masks.
    pub fn flip_expectation(&self, k: usize, bit_a: u32, bit_b: u32) -> f64 {
        let v = self.eigenvector(k);
        let both = bit_a | bit_b;
        let mut acc = 0.0;
        for (idx, &s) in self.states.iter().enumerate() {
            if ((s & bit_a) == 0) != ((s & bit_b) == 0) {
                if let Some(t) = self.index_of(s ^ both) {
                    acc += 2.0 * v[idx] * v[t];
                }
            }
        }
        acc
    }
}

/// Exchange spectrum resolved by conserved total `sigma_z`.
///
/// Every model here commutes with `M`, so the spectrum at field `B` is
/// `E_ex - B m` with the same eigenvectors; one decomposition serves all fields.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorSpectrum {
    num_sites: usize,
    sectors: Vec<Sector>,
}

impl SectorSpectrum {
    pub fn new(spec: &ChainSpec) -> Result<Self> {
        spec.validate()?;
        let n = spec.num_sites;
        let bonds = spec.bonds();
        let isotropic = spec.model.is_isotropic();
        let mut sectors = Vec::with_capacity(n + 1);
        for down in 0..=n {
            let states: Vec<u32> = (0u32..1 << n).filter(|s| s.count_ones() as usize == down).collect();
            let d = states.len();
            let mut h = vec![0.0; d * d];
            for (col, &s) in states.iter().enumerate() {
                for bond in &bonds {
                    let a = 1u32 << (n - 1 - bond.left);
                    let b = 1u32 << (n - 1 - bond.right);
                    let aligned = ((s & a) == 0) == ((s & b) == 0);
                    if isotropic {
                        h[col * d + col] += if aligned { bond.coupling } else { -bond.coupling };
                    }
                    if !aligned {
                        let row = states.binary_search(&(s ^ a ^ b)).expect("flip stays in sector");
                        h[row * d + col] += 2.0 * bond.coupling;
                    }
                }
            }
            let (energies, vectors) = hermitian_eigen(d, h)?;
            sectors.push(Sector { magnetization: 0.5 * n as f64 - down as f64, states, energies, vectors });
        }
        Ok(Self { num_sites: n, sectors })
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    pub fn sectors(&self) -> &[Sector] {
        &self.sectors
    }

    /// All `h_total` levels at field `b`, in sector order.
    pub fn total_energies(&self, b: f64) -> Vec<f64> {
        self.sectors.iter().flat_map(|s| s.energies.iter().map(move |&e| e - b * s.magnetization)).collect()
    }

    /// Ground energy of `h_total` at field `b`.
    pub fn ground_energy(&self, b: f64) -> f64 {
        self.total_energies(b).into_iter().fold(f64::INFINITY, f64::min)
    }

    /// Bit mask of `site` inside a basis index.
    pub fn site_bit(&self, site: usize) -> u32 {
        1 << (self.num_sites - 1 - site)
    }
}
