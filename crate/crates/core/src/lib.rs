//! Scalable quantum benchmarking toolkit.
//!
//! The crate is organized around a small circuit IR ([`circuit`]) that every
//! other module consumes: an OpenQASM 2.0 subset front-end ([`qasm`]), six
//! hardware-agnostic application features ([`features`]), Pauli observable
//! machinery with simultaneous diagonalization ([`pauli`]), a noisy
//! trajectory-sampling simulator ([`sim`]), the benchmark family generators
//! and their score functions ([`bench`]), and suite coverage / correlation
//! analysis ([`analysis`]).

pub mod analysis;
pub mod bench;
pub mod circuit;
pub mod features;
pub mod pauli;
pub mod qasm;
pub mod rng;
pub mod sim;

#[doc(hidden)]
pub mod testutil;
