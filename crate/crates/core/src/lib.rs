//! Exact proofs of terminating hypergeometric identities by creative
//! telescoping and determinant vanishing on degree-bounded integer grids.
#![no_std]
extern crate alloc;

pub mod error;
pub mod exactalg;
pub mod gosper;
pub mod hyperterm;
pub mod synd;
pub mod telescope;

pub use error::Error;
