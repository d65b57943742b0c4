use alloc::boxed::Box;
use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("operator is not Hermitian (relative deviation {0:e})")]
    NotHermitian(f64),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("site {site} out of range for {num_sites} sites")]
    SiteOutOfRange { site: usize, num_sites: usize },

    #[error("invalid site set: {0}")]
    InvalidSites(&'static str),

    #[error("temperature must be positive and finite, got {0}")]
    InvalidTemperature(f64),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    #[error("coordinate ascent did not settle within {sweeps} sweeps (best so far {best_so_far})")]
    AscentStalled { sweeps: usize, best_so_far: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(&'static str),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("expectation value has imaginary residue {0:e}")]
    ComplexExpectation(f64),

    #[error(
        "no sign change of the witness margin in [{t_lo}, {t_hi}] ({})",
        if *always_entangled { "entangled throughout" } else { "never flagged" }
    )]
    NoCrossing { t_lo: f64, t_hi: f64, always_entangled: bool },

    #[error("need at least {needed} usable points, have {available} ({dropped} dropped)")]
    TooFewPoints { needed: usize, available: usize, dropped: usize },

    #[error("divergence class is ambiguous: {0}")]
    AmbiguousDivergence(String),

    #[error("cell T = {temperature:?}, B = {field:?}: {source}")]
    Cell {
        temperature: f64,
        field: f64,
        #[source]
        source: Box<Error>,
    },
}

pub(crate) fn check_temperature(t: f64) -> Result<()> {
    if t.is_finite() && t > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidTemperature(t))
    }
}
