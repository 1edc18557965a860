//! An LCF-style kernel for higher-order logic in which every theorem carries
//! a taint label from a finite join-semilattice, recording the strongest
//! foundational axiom its proof depends on.

pub mod engine;
pub mod frontend;
pub mod kernel;
pub mod lattice;
pub mod syntax;
pub mod theory;
