//! Odd unitary groups over Z/m with a pseudoinvolution: forms, elementary transvections and
//! their relations, congruence membership, and explicit extraction of transvections from
//! normal closures.

pub mod error;
pub mod extraction;
pub mod group;
pub mod heisenberg;
pub mod ideals;
pub mod io;
pub mod matrix;
pub mod quadratic;
pub mod ring;
pub mod selftest;
pub mod transvections;

pub use error::{OdduError, Result};
