//! Ciphertext bridges between encryption schemes.
//!
//! A *bridge* converts ciphertexts of one scheme into ciphertexts of another
//! scheme that decrypt to the embedded plaintext, without touching any secret
//! key at conversion time. This crate provides:
//!
//! - concrete schemes: Goldwasser-Micali ([`gm`]), Sander-Young-Yung ([`syy`]),
//!   CSGN ([`csgn`]), and a transparent homomorphic stand-in ([`mockfhe`]);
//! - the bridge abstraction, its canonical graph scheme, and correctness
//!   checking ([`bridge_core`]);
//! - a generic bridge compiler that homomorphically evaluates the source
//!   scheme's decryption circuit, with four concrete CSGN instantiations
//!   ([`gentry`]);
//! - the entangled GM-to-SYY bridge and a homomorphic comparison circuit
//!   ([`gm_syy`]);
//! - exact finite distributions with morphisms and fiber products ([`findist`]);
//! - a statistical IND-CPA game harness with positive and negative controls
//!   ([`secgames`]).
//!
//! All randomized operations take an explicit RNG handle; nothing reads global
//! randomness, so every result is reproducible from a seed.

pub mod bridge_core;
pub mod csgn;
pub mod encoding;
mod error;
pub mod findist;
pub mod gentry;
pub mod gm;
pub mod gm_syy;
pub mod mockfhe;
pub mod numtheory;
pub mod scheme_core;
pub mod secgames;
pub mod syy;

pub use error::{Error, Result};

/// Transparent homomorphic backend over the two-element field.
pub type MockF2 = mockfhe::MockFhe<scheme_core::F2>;
/// Transparent homomorphic backend over a prime field of odd characteristic.
pub type MockFp = mockfhe::MockFhe<scheme_core::Fp>;
