//! Entanglement entropies, negativities and area-law diagnostics for
//! quasi-free bosonic and fermionic lattices, stabilizer states and
//! matrix-product states, with an exact-diagonalization reference engine.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bosonic;
pub mod error;
pub mod fermionic;
pub mod lattice;
pub mod numerics;
pub mod oracle;
pub mod stabilizer;
pub mod tensor;
pub mod toeplitz;

pub use error::{Error, Result};
