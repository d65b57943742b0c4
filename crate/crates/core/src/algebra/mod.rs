//! Operator algebra on finite-dimensional Hilbert spaces.

mod eigen;
mod entanglement;
mod matrix;
mod state;

pub(crate) use eigen::hermitian_eigen;
pub use eigen::{eigh, SpectralDecomposition};
pub use entanglement::{concurrence, negativity, partial_transpose, Bipartition};
pub use matrix::{pauli, CMatrix, C64};
pub use state::{
    embed_local, embed_product, expectation, partial_trace, thermal_state, DensityMatrix, HermitianOperator, MAX_SITES,
};
