//! Finite-dimensional matrix realizations of q-deformed algebras built from
//! multimode q-bosons, with numerical verification of their defining
//! relations.
//!
//! The crate is organised bottom-up:
//!
//! * [`qnum`]: deformation parameters and q-number arithmetic.
//! * [`fock`]: fixed-number Fock sectors and sparse q-boson operators.
//! * [`algebra`]: Chevalley triples, relation checks, the sl_q(2) Casimir,
//!   coproducts and q-tensor operators.
//! * [`maps`]: deforming maps between classical and deformed generators.
//! * [`chains`]: the vibrational, rotational and gamma-unstable chains of
//!   gl_q(6) and their verification.
//! * [`spectra`]: deformed rotor spectra, Hamiltonians and fitting.

pub mod algebra;
pub mod chains;
mod error;
pub mod fock;
pub mod maps;
pub mod operator;
pub mod qnum;
pub mod spectra;

pub use error::{Error, Result};
pub use fock::FockBasis;
pub use operator::{Operator, Space};
pub use qnum::DeformationParameter;
