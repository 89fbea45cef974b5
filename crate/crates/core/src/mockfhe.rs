//! A transparent, deliberately insecure homomorphic backend.
//!
//! Ciphertexts carry their plaintext in the clear plus a multiplicative
//! depth counter; evaluation is the plain circuit evaluation with depth
//! bookkeeping. A finite capacity models a somewhat-homomorphic scheme:
//! decryption refuses ciphertexts whose depth exceeds it. Anything built
//! on this backend is for correctness testing only and must be labelled
//! insecure when serialized.

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::scheme_core::{
    BitPlaintext, Circuit, Gate, HomomorphicScheme, MulHomomorphic, RekeyableScheme, Ring, Scheme,
};
use crate::{Error, Result};

/// The backend, generic over the plaintext ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MockFhe<R: Ring> {
    ring: R,
    capacity: Option<u32>,
}

impl<R: Ring> MockFhe<R> {
    /// Depth-limited instance ("somewhat homomorphic").
    pub fn with_capacity(ring: R, capacity: u32) -> Self {
        MockFhe {
            ring,
            capacity: Some(capacity),
        }
    }

    /// No depth limit at all.
    pub fn unbounded(ring: R) -> Self {
        MockFhe {
            ring,
            capacity: None,
        }
    }

    pub fn capacity(&self) -> Option<u32> {
        self.capacity
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MockSecretKey {
    pub key_id: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MockPublicKey {
    pub key_id: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MockEvalKey {
    pub key_id: u64,
}

/// Plaintext in the clear, a depth counter, and a cosmetic blinding tag.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MockCiphertext<E> {
    pub value: E,
    pub depth: u32,
    pub tag: u64,
}

impl<R: Ring> MockFhe<R> {
    fn fresh<E>(&self, value: E, rng: &mut dyn RngCore) -> MockCiphertext<E> {
        MockCiphertext {
            value,
            depth: 0,
            tag: rng.gen(),
        }
    }

    fn check_depth(&self, depth: u32) -> Result<()> {
        match self.capacity {
            Some(cap) if depth > cap => Err(Error::DepthExceeded {
                depth,
                capacity: cap,
            }),
            _ => Ok(()),
        }
    }
}

impl<R: Ring> Scheme for MockFhe<R> {
    type Plaintext = R::Elem;
    type Ciphertext = MockCiphertext<R::Elem>;
    type SecretKey = MockSecretKey;
    type PublicKey = MockPublicKey;

    fn keygen(&self, rng: &mut dyn RngCore) -> Result<(MockSecretKey, MockPublicKey)> {
        let key_id = rng.gen();
        Ok((MockSecretKey { key_id }, MockPublicKey { key_id }))
    }

    fn encrypt(
        &self,
        _pk: &MockPublicKey,
        m: &R::Elem,
        rng: &mut dyn RngCore,
    ) -> Result<MockCiphertext<R::Elem>> {
        Ok(self.fresh(m.clone(), rng))
    }

    fn decrypt(&self, _sk: &MockSecretKey, c: &MockCiphertext<R::Elem>) -> Result<R::Elem> {
        self.check_depth(c.depth)?;
        Ok(c.value.clone())
    }

    fn plaintexts(&self) -> Vec<R::Elem> {
        self.ring.elements()
    }

    fn plaintext_bits(&self) -> usize {
        let count = self.ring.elements().len();
        (usize::BITS - (count - 1).leading_zeros()).max(1) as usize
    }

    fn encode_plaintext(&self, m: &R::Elem) -> Vec<bool> {
        let index = self
            .ring
            .elements()
            .iter()
            .position(|e| e == m)
            .expect("plaintext is a ring element");
        (0..self.plaintext_bits())
            .map(|b| index >> b & 1 == 1)
            .collect()
    }

    fn decode_plaintext(&self, bits: &[bool]) -> Option<R::Elem> {
        if bits.len() != self.plaintext_bits() {
            return None;
        }
        let index = bits
            .iter()
            .enumerate()
            .fold(0usize, |acc, (b, &bit)| acc | (usize::from(bit) << b));
        self.ring.elements().get(index).cloned()
    }
}

impl<R: Ring> HomomorphicScheme for MockFhe<R> {
    type PlaintextRing = R;
    type EvalKey = MockEvalKey;

    fn plaintext_ring(&self) -> &R {
        &self.ring
    }

    fn keygen_eval(
        &self,
        rng: &mut dyn RngCore,
    ) -> Result<(MockSecretKey, MockPublicKey, MockEvalKey)> {
        let (sk, pk) = self.keygen(rng)?;
        Ok((sk, pk, MockEvalKey { key_id: pk.key_id }))
    }

    fn eval(
        &self,
        _evk: &MockEvalKey,
        circuit: &Circuit,
        inputs: &[MockCiphertext<R::Elem>],
        rng: &mut dyn RngCore,
    ) -> Result<MockCiphertext<R::Elem>> {
        if inputs.len() != circuit.inputs() {
            return Err(Error::DimensionMismatch {
                expected: circuit.inputs(),
                got: inputs.len(),
            });
        }
        if circuit.outputs().len() != 1 {
            return Err(Error::Circuit(format!(
                "evaluation needs a single output, circuit has {}",
                circuit.outputs().len()
            )));
        }
        let ring = &self.ring;
        let mut wires: Vec<(R::Elem, u32)> =
            inputs.iter().map(|c| (c.value.clone(), c.depth)).collect();
        for gate in circuit.gates() {
            let out = match *gate {
                Gate::Xor(a, b) => {
                    if ring.characteristic() != 2 {
                        return Err(Error::UnsupportedGate { kind: "xor" });
                    }
                    (
                        ring.add(&wires[a].0, &wires[b].0),
                        wires[a].1.max(wires[b].1),
                    )
                }
                Gate::Add(a, b) => (
                    ring.add(&wires[a].0, &wires[b].0),
                    wires[a].1.max(wires[b].1),
                ),
                Gate::Sub(a, b) => (
                    ring.sub(&wires[a].0, &wires[b].0),
                    wires[a].1.max(wires[b].1),
                ),
                Gate::And(a, b) => {
                    if ring.characteristic() != 2 {
                        return Err(Error::UnsupportedGate { kind: "and" });
                    }
                    (
                        ring.mul(&wires[a].0, &wires[b].0),
                        wires[a].1.max(wires[b].1) + 1,
                    )
                }
                Gate::Mul(a, b) => (
                    ring.mul(&wires[a].0, &wires[b].0),
                    wires[a].1.max(wires[b].1) + 1,
                ),
                Gate::Pow(a, exp) => pow_with_depth(ring, &wires[a], exp),
                Gate::Const(v) => (ring.lift(v), 0),
            };
            wires.push(out);
        }
        let (value, depth) = wires[circuit.outputs()[0]].clone();
        Ok(MockCiphertext {
            value,
            depth,
            tag: rng.gen(),
        })
    }

    fn encrypt_trivial(&self, _pk: &MockPublicKey, m: &R::Elem) -> Result<MockCiphertext<R::Elem>> {
        Ok(MockCiphertext {
            value: m.clone(),
            depth: 0,
            tag: 0,
        })
    }

    fn is_compact(&self) -> bool {
        true
    }
}

/// Square-and-multiply over ciphertext values, charging one depth level per
/// constituent multiplication along the dependency chain.
fn pow_with_depth<R: Ring>(ring: &R, base: &(R::Elem, u32), exp: u64) -> (R::Elem, u32) {
    if exp == 0 {
        return (ring.one(), 0);
    }
    let mut acc: Option<(R::Elem, u32)> = None;
    let mut sq = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc = Some(match acc {
                None => sq.clone(),
                Some(a) => (ring.mul(&a.0, &sq.0), a.1.max(sq.1) + 1),
            });
        }
        e >>= 1;
        if e > 0 {
            sq = (ring.mul(&sq.0, &sq.0), sq.1 + 1);
        }
    }
    acc.expect("exp > 0 sets the accumulator")
}

impl<R: Ring> MulHomomorphic for MockFhe<R> {
    fn hom_mul(
        &self,
        _pk: &MockPublicKey,
        a: &MockCiphertext<R::Elem>,
        b: &MockCiphertext<R::Elem>,
        rng: &mut dyn RngCore,
    ) -> Result<MockCiphertext<R::Elem>> {
        Ok(MockCiphertext {
            value: self.ring.mul(&a.value, &b.value),
            depth: a.depth.max(b.depth) + 1,
            tag: rng.gen(),
        })
    }
}

impl<R: Ring> RekeyableScheme for MockFhe<R> {
    fn public_key_for(&self, sk: &MockSecretKey, _rng: &mut dyn RngCore) -> Result<MockPublicKey> {
        Ok(MockPublicKey { key_id: sk.key_id })
    }
}

impl<R: Ring> BitPlaintext for MockFhe<R> {
    fn embed_bit(&self, bit: bool) -> R::Elem {
        if bit {
            self.ring.one()
        } else {
            self.ring.zero()
        }
    }

    fn extract_bit(&self, m: &R::Elem) -> Option<bool> {
        if *m == self.ring.zero() {
            Some(false)
        } else if *m == self.ring.one() {
            Some(true)
        } else {
            None
        }
    }
}
