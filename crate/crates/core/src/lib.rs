//! Thermodynamic entanglement witnesses for thermal spin chains and free Bose gases.
//!
//! The crate is `no_std` + `alloc` when built without the default `std` feature.
//! Everything here is pure computation: dense Hermitian operator algebra, the
//! chain Hamiltonians, thermal observables, the energy and susceptibility
//! witnesses, closed-form Bose gas thresholds, correlation decay classification
//! and a brute-force product-state oracle that certifies separable bounds.
//!
//! Conventions used throughout:
//!
//! - natural units, `hbar = k_B = mu_B = 1`; see [`units`] for the meV/K boundary
//! - big-endian site order: site 0 is the most significant bit of a basis index
//! - `|0>` is the `sigma_z = +1` eigenstate
//! - exchange terms are written with Pauli matrices, `H = +J sum sigma_i . sigma_j`,
//!   so `J > 0` is antiferromagnetic and the dimer ground state is the singlet

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod algebra;
pub mod bosegas;
mod error;
pub mod models;
pub mod oracle;
pub mod order;
pub mod quad;
pub mod thermal;
pub mod units;
pub mod witness;

pub use error::{Error, Result};
