//! Conversion between natural units and (meV, K).
//!
//! Internally `k_B = 1` and energies and temperatures share one unit. Only
//! the command-line boundary converts.

/// Boltzmann constant in meV per kelvin.
pub const K_B_MEV_PER_K: f64 = 8.617333e-2;

/// Temperature in kelvin equivalent to a thermal energy in meV.
pub fn kelvin_from_mev(energy_mev: f64) -> f64 {
    energy_mev / K_B_MEV_PER_K
}

/// Thermal energy in meV of a temperature in kelvin.
pub fn mev_from_kelvin(temperature_k: f64) -> f64 {
    temperature_k * K_B_MEV_PER_K
}
