//! Contracts every encryption scheme in this crate satisfies, plus the
//! product construction and the knowledge-augmented wrapper.

mod circuit;
mod ring;

pub use circuit::{
    eval_circuit_plain, random_boolean_circuit, random_ring_circuit, Circuit, CircuitBuilder, Gate,
    Wire,
};
pub use ring::{Fp, Ring, F2};

use rand::{Rng, RngCore};

use crate::{Error, Result};

/// A public-key encryption scheme over a finite plaintext space.
///
/// The value carries the scheme parameters (key sizes, dimensions); keys and
/// ciphertexts are plain data. Symmetric schemes set `is_symmetric` and make
/// the public key equal to the secret key; the game harness then exposes an
/// encryption oracle instead of the key.
pub trait Scheme {
    type Plaintext: Clone + Eq + std::fmt::Debug;
    type Ciphertext: Clone + std::fmt::Debug;
    type SecretKey: Clone;
    type PublicKey: Clone;

    fn keygen(&self, rng: &mut dyn RngCore) -> Result<(Self::SecretKey, Self::PublicKey)>;

    fn encrypt(
        &self,
        pk: &Self::PublicKey,
        m: &Self::Plaintext,
        rng: &mut dyn RngCore,
    ) -> Result<Self::Ciphertext>;

    fn decrypt(&self, sk: &Self::SecretKey, c: &Self::Ciphertext) -> Result<Self::Plaintext>;

    /// The whole plaintext space, in a stable order.
    fn plaintexts(&self) -> Vec<Self::Plaintext>;

    /// Uniform plaintext.
    fn sample_plaintext(&self, rng: &mut dyn RngCore) -> Self::Plaintext {
        let all = self.plaintexts();
        all[rng.gen_range(0..all.len())].clone()
    }

    /// Width of the canonical plaintext bit encoding.
    fn plaintext_bits(&self) -> usize;

    fn encode_plaintext(&self, m: &Self::Plaintext) -> Vec<bool>;

    /// Inverse of [`Scheme::encode_plaintext`]; `None` off the image.
    fn decode_plaintext(&self, bits: &[bool]) -> Option<Self::Plaintext>;

    fn is_symmetric(&self) -> bool {
        false
    }
}

/// Schemes that can derive a fresh public key for an existing secret key.
pub trait RekeyableScheme: Scheme {
    fn public_key_for(
        &self,
        sk: &Self::SecretKey,
        rng: &mut dyn RngCore,
    ) -> Result<Self::PublicKey>;
}

/// A homomorphic scheme: the plaintext space carries a ring structure and
/// an evaluation key drives circuit evaluation on ciphertexts.
pub trait HomomorphicScheme: Scheme {
    type PlaintextRing: Ring<Elem = Self::Plaintext>;
    type EvalKey: Clone;

    fn plaintext_ring(&self) -> &Self::PlaintextRing;

    fn keygen_eval(
        &self,
        rng: &mut dyn RngCore,
    ) -> Result<(Self::SecretKey, Self::PublicKey, Self::EvalKey)>;

    fn eval(
        &self,
        evk: &Self::EvalKey,
        circuit: &Circuit,
        inputs: &[Self::Ciphertext],
        rng: &mut dyn RngCore,
    ) -> Result<Self::Ciphertext>;

    /// Deterministic noiseless embedding of a plaintext into the ciphertext
    /// space, used for publicly known circuit inputs.
    fn encrypt_trivial(
        &self,
        pk: &Self::PublicKey,
        m: &Self::Plaintext,
    ) -> Result<Self::Ciphertext>;

    /// Whether evaluation outputs have size independent of the circuit.
    /// Metadata only; nothing enforces it.
    fn is_compact(&self) -> bool {
        false
    }
}

/// Schemes homomorphic for plaintext multiplication only.
pub trait MulHomomorphic: Scheme {
    fn hom_mul(
        &self,
        pk: &Self::PublicKey,
        a: &Self::Ciphertext,
        b: &Self::Ciphertext,
        rng: &mut dyn RngCore,
    ) -> Result<Self::Ciphertext>;
}

/// Schemes whose plaintext space contains the two bit values.
pub trait BitPlaintext: Scheme {
    fn embed_bit(&self, bit: bool) -> Self::Plaintext;

    /// `None` when the plaintext is neither embedded bit.
    fn extract_bit(&self, m: &Self::Plaintext) -> Option<bool>;
}

/// Componentwise product of any number of copies of a scheme.
///
/// Keygen, encryption and decryption all act per component; the plaintext
/// space is the cartesian product.
#[derive(Debug, Clone)]
pub struct ProductScheme<S: Scheme> {
    components: Vec<S>,
}

impl<S: Scheme + Clone> ProductScheme<S> {
    pub fn new(components: Vec<S>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidParameter("product of zero schemes".into()));
        }
        Ok(ProductScheme { components })
    }

    /// `p` copies of the same scheme.
    pub fn power(scheme: S, p: usize) -> Result<Self> {
        Self::new(vec![scheme; p])
    }

    pub fn components(&self) -> &[S] {
        &self.components
    }

    pub fn arity(&self) -> usize {
        self.components.len()
    }
}

impl<S: Scheme> Scheme for ProductScheme<S> {
    type Plaintext = Vec<S::Plaintext>;
    type Ciphertext = Vec<S::Ciphertext>;
    type SecretKey = Vec<S::SecretKey>;
    type PublicKey = Vec<S::PublicKey>;

    fn keygen(&self, rng: &mut dyn RngCore) -> Result<(Self::SecretKey, Self::PublicKey)> {
        let mut sks = Vec::with_capacity(self.components.len());
        let mut pks = Vec::with_capacity(self.components.len());
        for s in &self.components {
            let (sk, pk) = s.keygen(rng)?;
            sks.push(sk);
            pks.push(pk);
        }
        Ok((sks, pks))
    }

    fn encrypt(
        &self,
        pk: &Self::PublicKey,
        m: &Self::Plaintext,
        rng: &mut dyn RngCore,
    ) -> Result<Self::Ciphertext> {
        if m.len() != self.components.len() || pk.len() != self.components.len() {
            return Err(Error::DimensionMismatch {
                expected: self.components.len(),
                got: m.len(),
            });
        }
        self.components
            .iter()
            .zip(pk)
            .zip(m)
            .map(|((s, pk), m)| s.encrypt(pk, m, rng))
            .collect()
    }

    fn decrypt(&self, sk: &Self::SecretKey, c: &Self::Ciphertext) -> Result<Self::Plaintext> {
        if c.len() != self.components.len() || sk.len() != self.components.len() {
            return Err(Error::DimensionMismatch {
                expected: self.components.len(),
                got: c.len(),
            });
        }
        self.components
            .iter()
            .zip(sk)
            .zip(c)
            .map(|((s, sk), c)| s.decrypt(sk, c))
            .collect()
    }

    fn plaintexts(&self) -> Vec<Self::Plaintext> {
        let mut acc: Vec<Vec<S::Plaintext>> = vec![vec![]];
        for s in &self.components {
            let mut next = Vec::new();
            for prefix in &acc {
                for m in s.plaintexts() {
                    let mut row = prefix.clone();
                    row.push(m);
                    next.push(row);
                }
            }
            acc = next;
        }
        acc
    }

    fn sample_plaintext(&self, rng: &mut dyn RngCore) -> Self::Plaintext {
        self.components
            .iter()
            .map(|s| s.sample_plaintext(rng))
            .collect()
    }

    fn plaintext_bits(&self) -> usize {
        self.components.iter().map(|s| s.plaintext_bits()).sum()
    }

    fn encode_plaintext(&self, m: &Self::Plaintext) -> Vec<bool> {
        self.components
            .iter()
            .zip(m)
            .flat_map(|(s, m)| s.encode_plaintext(m))
            .collect()
    }

    fn decode_plaintext(&self, bits: &[bool]) -> Option<Self::Plaintext> {
        if bits.len() != self.plaintext_bits() {
            return None;
        }
        let mut out = Vec::with_capacity(self.components.len());
        let mut offset = 0;
        for s in &self.components {
            let w = s.plaintext_bits();
            out.push(s.decode_plaintext(&bits[offset..offset + w])?);
            offset += w;
        }
        Some(out)
    }

    fn is_symmetric(&self) -> bool {
        self.components.iter().all(|s| s.is_symmetric())
    }
}

/// A scheme whose public key is augmented with oracle-produced data `K`.
///
/// Encryption and decryption are exactly the base scheme's; only what an
/// adversary sees changes.
#[derive(Clone)]
pub struct KnowledgeWrapped<S, K, F> {
    base: S,
    oracle: F,
    _marker: std::marker::PhantomData<fn() -> K>,
}

impl<S, K, F> KnowledgeWrapped<S, K, F>
where
    S: Scheme,
    K: Clone,
    F: Fn(&S::SecretKey, &S::PublicKey, &mut dyn RngCore) -> Result<K>,
{
    pub fn new(base: S, oracle: F) -> Self {
        KnowledgeWrapped {
            base,
            oracle,
            _marker: std::marker::PhantomData,
        }
    }

    pub fn base(&self) -> &S {
        &self.base
    }
}

impl<S, K, F> Scheme for KnowledgeWrapped<S, K, F>
where
    S: Scheme,
    K: Clone,
    F: Fn(&S::SecretKey, &S::PublicKey, &mut dyn RngCore) -> Result<K>,
{
    type Plaintext = S::Plaintext;
    type Ciphertext = S::Ciphertext;
    type SecretKey = S::SecretKey;
    type PublicKey = (S::PublicKey, K);

    fn keygen(&self, rng: &mut dyn RngCore) -> Result<(Self::SecretKey, Self::PublicKey)> {
        let (sk, pk) = self.base.keygen(rng)?;
        let k = (self.oracle)(&sk, &pk, rng)?;
        Ok((sk, (pk, k)))
    }

    fn encrypt(
        &self,
        pk: &Self::PublicKey,
        m: &Self::Plaintext,
        rng: &mut dyn RngCore,
    ) -> Result<Self::Ciphertext> {
        self.base.encrypt(&pk.0, m, rng)
    }

    fn decrypt(&self, sk: &Self::SecretKey, c: &Self::Ciphertext) -> Result<Self::Plaintext> {
        self.base.decrypt(sk, c)
    }

    fn plaintexts(&self) -> Vec<Self::Plaintext> {
        self.base.plaintexts()
    }

    fn plaintext_bits(&self) -> usize {
        self.base.plaintext_bits()
    }

    fn encode_plaintext(&self, m: &Self::Plaintext) -> Vec<bool> {
        self.base.encode_plaintext(m)
    }

    fn decode_plaintext(&self, bits: &[bool]) -> Option<Self::Plaintext> {
        self.base.decode_plaintext(bits)
    }

    fn is_symmetric(&self) -> bool {
        self.base.is_symmetric()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gm::GmScheme;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn product_of_one_scheme_behaves_like_the_scheme() {
        let gm = GmScheme::new(24).unwrap();
        let product = ProductScheme::new(vec![gm]).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(131);
        let (sk, pk) = product.keygen(&mut rng).unwrap();
        for m in [vec![false], vec![true]] {
            let c = product.encrypt(&pk, &m, &mut rng).unwrap();
            assert_eq!(product.decrypt(&sk, &c).unwrap(), m);
        }
        assert_eq!(product.plaintexts().len(), 2);
    }

    #[test]
    fn paired_scheme_decrypts_componentwise() {
        let gm = GmScheme::new(24).unwrap();
        let product = ProductScheme::power(gm, 2).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(132);
        let (sk, pk) = product.keygen(&mut rng).unwrap();
        let m = vec![false, true];
        let c = product.encrypt(&pk, &m, &mut rng).unwrap();
        assert_eq!(product.decrypt(&sk, &c).unwrap(), m);
        // keys are independent: distinct moduli with overwhelming probability
        assert_ne!(pk[0].n, pk[1].n);
    }

    #[test]
    fn product_round_trips_on_random_pairs() {
        let gm = GmScheme::new(16).unwrap();
        let product = ProductScheme::power(gm, 2).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(133);
        let (sk, pk) = product.keygen(&mut rng).unwrap();
        for _ in 0..100 {
            let m = product.sample_plaintext(&mut rng);
            let c = product.encrypt(&pk, &m, &mut rng).unwrap();
            assert_eq!(product.decrypt(&sk, &c).unwrap(), m);
        }
    }

    #[test]
    fn product_plaintext_codec_is_the_concatenation() {
        let gm = GmScheme::new(16).unwrap();
        let product = ProductScheme::power(gm, 3).unwrap();
        assert_eq!(product.plaintext_bits(), 3);
        for m in product.plaintexts() {
            let bits = product.encode_plaintext(&m);
            assert_eq!(product.decode_plaintext(&bits), Some(m));
        }
        assert_eq!(product.decode_plaintext(&[true]), None);
    }

    #[test]
    fn knowledge_wrapper_is_bit_identical_to_the_base_scheme() {
        let gm = GmScheme::new(24).unwrap();
        let wrapped = KnowledgeWrapped::new(gm, |_: &_, _: &_, _: &mut dyn RngCore| Ok(42u8));
        for seed in [134u64, 135, 136] {
            let mut rng_base = ChaCha20Rng::seed_from_u64(seed);
            let mut rng_wrapped = ChaCha20Rng::seed_from_u64(seed);
            let (sk_b, pk_b) = gm.keygen(&mut rng_base).unwrap();
            let (sk_w, (pk_w, k)) = wrapped.keygen(&mut rng_wrapped).unwrap();
            assert_eq!(pk_b, pk_w);
            assert_eq!(k, 42);
            for m in [false, true] {
                let mut r1 = ChaCha20Rng::seed_from_u64(seed ^ 1);
                let mut r2 = ChaCha20Rng::seed_from_u64(seed ^ 1);
                let c_b = gm.encrypt(&pk_b, &m, &mut r1).unwrap();
                let c_w = wrapped.encrypt(&(pk_w.clone(), k), &m, &mut r2).unwrap();
                assert_eq!(c_b, c_w);
                assert_eq!(
                    gm.decrypt(&sk_b, &c_b).unwrap(),
                    wrapped.decrypt(&sk_w, &c_w).unwrap()
                );
            }
        }
    }
}
