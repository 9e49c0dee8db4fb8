//! Classical statevector simulation of quantum circuits that prepare
//! Gibbs-weighted superpositions of Ising spin-glass configurations.
//!
//! The crate is organised bottom-up:
//!
//! - [`statevec`]: dense complex register, gate application, measurement, sampling.
//! - [`ising`]: classical models and the exact brute-force/recursive oracle.
//! - [`gates`]: the `R`, `S`, XOR and `Ω` unitaries and their field variants.
//! - [`interference`]: Euler-angle plane rotations that select one bond-sign subspace.
//! - [`builder`]: circuit plans for chains, trees and assembled lattices, and their execution.
//! - [`commutators`]: `S`/`Ω` commutation relations as explicit register matrices.
//! - [`sampler`]: repeated preparation and measurement, ground-state search, bond statistics.
//!
//! Spin `-1` is the qubit state `|−⟩` (bit 0) and spin `+1` is `|+⟩` (bit 1).
//! Bit `k` of a register index is qubit `k`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod builder;
pub mod commutators;
pub mod error;
pub mod gates;
pub mod interference;
pub mod ising;
pub mod modelfile;
pub mod parallel;
pub mod rng;
pub mod sampler;
pub mod statevec;
pub mod stats;

pub use error::{Error, Result};
pub use parallel::Parallelism;

/// Spin value, always `-1` or `+1`.
pub type Spin = i8;

/// Spin encoded by bit `bit` (0 or 1) of a basis index.
#[inline]
pub fn spin_of_bit(bit: usize) -> Spin {
    if bit & 1 == 1 {
        1
    } else {
        -1
    }
}

/// Bit encoding spin `s`.
#[inline]
pub fn bit_of_spin(s: Spin) -> usize {
    usize::from(s > 0)
}

/// Spin configuration of `n` sites encoded in the low bits of `index`.
pub fn spins_from_index(index: u64, n: usize) -> Vec<Spin> {
    (0..n).map(|k| spin_of_bit(((index >> k) & 1) as usize)).collect()
}

/// Index whose bit `k` encodes `spins[k]`.
pub fn index_from_spins(spins: &[Spin]) -> u64 {
    spins
        .iter()
        .enumerate()
        .fold(0u64, |acc, (k, &s)| acc | ((bit_of_spin(s) as u64) << k))
}
