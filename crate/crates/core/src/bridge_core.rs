//! The bridge abstraction: a public procedure converting ciphertexts of a
//! source scheme into ciphertexts of a target scheme that decrypt to the
//! embedded plaintext.
//!
//! Every bridge carries an injective plaintext embedding with a computable
//! partial inverse, a three-stage key generator (source keys; target secret
//! key derived from the source secret key, then a target public key; finally
//! the bridge key), and the conversion map itself. The canonically attached
//! *graph scheme* encrypts `m` as a pair of an ordinary source encryption
//! and a bridged second encryption; its IND-CPA security is what "security
//! of the bridge" means.

use rand::RngCore;

use crate::findist::hoeffding_half_width;
use crate::scheme_core::{RekeyableScheme, Scheme};
use crate::{Error, Result};

/// A unidirectional bridge between two encryption schemes.
///
/// `convert` receives the target public key alongside the bridge key: both
/// are public data, and the concrete bridges here need parameters of the
/// target key (a modulus, an evaluation key) to do their work.
pub trait Bridge {
    type Source: Scheme;
    type TargetPlaintext: Clone + Eq + std::fmt::Debug;
    type TargetCiphertext: Clone + std::fmt::Debug;
    type SecretKey2: Clone;
    type PublicKey2: Clone;
    type BridgeKey: Clone;

    fn source_scheme(&self) -> &Self::Source;

    /// The injective plaintext embedding.
    fn embed(&self, m: &<Self::Source as Scheme>::Plaintext) -> Self::TargetPlaintext;

    /// Partial inverse of [`Bridge::embed`]; `None` off the image.
    fn embed_inverse(
        &self,
        m: &Self::TargetPlaintext,
    ) -> Option<<Self::Source as Scheme>::Plaintext>;

    /// Stages two and three of bridge key generation: derive the target
    /// secret key from the source secret key, generate a target public key,
    /// and produce the bridge key from the full quadruple.
    ///
    /// Exposed separately because the knowledge-wrapper security games hand
    /// exactly this tail to an oracle; ordinary callers use
    /// [`Bridge::keygen`].
    fn keygen_tail(
        &self,
        sk1: &<Self::Source as Scheme>::SecretKey,
        pk1: &<Self::Source as Scheme>::PublicKey,
        rng: &mut dyn RngCore,
    ) -> Result<(Self::SecretKey2, Self::PublicKey2, Self::BridgeKey)>;

    /// The full three-stage generator.
    fn keygen(&self, rng: &mut dyn RngCore) -> Result<BridgeKeyMaterial<Self>> {
        let (sk1, pk1) = self.source_scheme().keygen(rng)?;
        let (sk2, pk2, bk) = self.keygen_tail(&sk1, &pk1, rng)?;
        Ok(BridgeKeyMaterial {
            sk1,
            pk1,
            sk2,
            pk2,
            bk,
        })
    }

    /// The bridge map: converts a source ciphertext into a target one.
    fn convert(
        &self,
        pk2: &Self::PublicKey2,
        bk: &Self::BridgeKey,
        c: &<Self::Source as Scheme>::Ciphertext,
        rng: &mut dyn RngCore,
    ) -> Result<Self::TargetCiphertext>;

    /// Target-side decryption.
    fn decrypt_target(
        &self,
        sk2: &Self::SecretKey2,
        c: &Self::TargetCiphertext,
    ) -> Result<Self::TargetPlaintext>;

    /// Declared upper bound on the per-ciphertext conversion failure
    /// probability; zero for deterministically correct bridges.
    fn failure_bound(&self) -> f64 {
        0.0
    }
}

impl<B: Bridge> Bridge for &B {
    type Source = B::Source;
    type TargetPlaintext = B::TargetPlaintext;
    type TargetCiphertext = B::TargetCiphertext;
    type SecretKey2 = B::SecretKey2;
    type PublicKey2 = B::PublicKey2;
    type BridgeKey = B::BridgeKey;

    fn source_scheme(&self) -> &Self::Source {
        (*self).source_scheme()
    }

    fn embed(&self, m: &<Self::Source as Scheme>::Plaintext) -> Self::TargetPlaintext {
        (*self).embed(m)
    }

    fn embed_inverse(
        &self,
        m: &Self::TargetPlaintext,
    ) -> Option<<Self::Source as Scheme>::Plaintext> {
        (*self).embed_inverse(m)
    }

    fn keygen_tail(
        &self,
        sk1: &<Self::Source as Scheme>::SecretKey,
        pk1: &<Self::Source as Scheme>::PublicKey,
        rng: &mut dyn RngCore,
    ) -> Result<(Self::SecretKey2, Self::PublicKey2, Self::BridgeKey)> {
        (*self).keygen_tail(sk1, pk1, rng)
    }

    fn convert(
        &self,
        pk2: &Self::PublicKey2,
        bk: &Self::BridgeKey,
        c: &<Self::Source as Scheme>::Ciphertext,
        rng: &mut dyn RngCore,
    ) -> Result<Self::TargetCiphertext> {
        (*self).convert(pk2, bk, c, rng)
    }

    fn decrypt_target(
        &self,
        sk2: &Self::SecretKey2,
        c: &Self::TargetCiphertext,
    ) -> Result<Self::TargetPlaintext> {
        (*self).decrypt_target(sk2, c)
    }

    fn failure_bound(&self) -> f64 {
        (*self).failure_bound()
    }
}

/// Everything the three-stage generator produces.
pub struct BridgeKeyMaterial<B: Bridge + ?Sized> {
    pub sk1: <B::Source as Scheme>::SecretKey,
    pub pk1: <B::Source as Scheme>::PublicKey,
    pub sk2: B::SecretKey2,
    pub pk2: B::PublicKey2,
    pub bk: B::BridgeKey,
}

impl<B: Bridge + ?Sized> Clone for BridgeKeyMaterial<B> {
    fn clone(&self) -> Self {
        BridgeKeyMaterial {
            sk1: self.sk1.clone(),
            pk1: self.pk1.clone(),
            sk2: self.sk2.clone(),
            pk2: self.pk2.clone(),
            bk: self.bk.clone(),
        }
    }
}

/// The identity bridge of a scheme to itself: one secret key, two
/// independently generated public keys, an empty bridge key, and a
/// conversion map that returns its input untouched.
#[derive(Debug, Clone)]
pub struct IdentityBridge<S: RekeyableScheme> {
    scheme: S,
}

impl<S: RekeyableScheme> IdentityBridge<S> {
    pub fn new(scheme: S) -> Self {
        IdentityBridge { scheme }
    }
}

impl<S: RekeyableScheme> Bridge for IdentityBridge<S> {
    type Source = S;
    type TargetPlaintext = S::Plaintext;
    type TargetCiphertext = S::Ciphertext;
    type SecretKey2 = S::SecretKey;
    type PublicKey2 = S::PublicKey;
    type BridgeKey = ();

    fn source_scheme(&self) -> &S {
        &self.scheme
    }

    fn embed(&self, m: &S::Plaintext) -> S::Plaintext {
        m.clone()
    }

    fn embed_inverse(&self, m: &S::Plaintext) -> Option<S::Plaintext> {
        Some(m.clone())
    }

    fn keygen_tail(
        &self,
        sk1: &S::SecretKey,
        _pk1: &S::PublicKey,
        rng: &mut dyn RngCore,
    ) -> Result<(S::SecretKey, S::PublicKey, ())> {
        let pk2 = self.scheme.public_key_for(sk1, rng)?;
        Ok((sk1.clone(), pk2, ()))
    }

    fn convert(
        &self,
        _pk2: &S::PublicKey,
        _bk: &(),
        c: &S::Ciphertext,
        _rng: &mut dyn RngCore,
    ) -> Result<S::Ciphertext> {
        Ok(c.clone())
    }

    fn decrypt_target(&self, sk2: &S::SecretKey, c: &S::Ciphertext) -> Result<S::Plaintext> {
        self.scheme.decrypt(sk2, c)
    }
}

/// The encryption scheme canonically attached to a bridge.
///
/// Keygen is the bridge's generator. Encryption draws two independent
/// source encryptions `a`, `b` and outputs `(a, convert(b))`; decryption
/// reads only the first component.
pub struct GraphScheme<B: Bridge> {
    bridge: B,
}

pub struct GraphPublicKey<B: Bridge> {
    pub pk1: <B::Source as Scheme>::PublicKey,
    pub pk2: B::PublicKey2,
    pub bk: B::BridgeKey,
}

impl<B: Bridge> Clone for GraphPublicKey<B> {
    fn clone(&self) -> Self {
        GraphPublicKey {
            pk1: self.pk1.clone(),
            pk2: self.pk2.clone(),
            bk: self.bk.clone(),
        }
    }
}

impl<B: Bridge> GraphScheme<B> {
    pub fn new(bridge: B) -> Self {
        GraphScheme { bridge }
    }

    pub fn bridge(&self) -> &B {
        &self.bridge
    }

    /// Decrypts the second component under the target scheme and pulls it
    /// back through the embedding.
    pub fn decrypt_second(
        &self,
        sk: &(<B::Source as Scheme>::SecretKey, B::SecretKey2),
        c: &(<B::Source as Scheme>::Ciphertext, B::TargetCiphertext),
    ) -> Result<Option<<B::Source as Scheme>::Plaintext>> {
        let m2 = self.bridge.decrypt_target(&sk.1, &c.1)?;
        Ok(self.bridge.embed_inverse(&m2))
    }
}

impl<B: Bridge> Scheme for GraphScheme<B> {
    type Plaintext = <B::Source as Scheme>::Plaintext;
    type Ciphertext = (<B::Source as Scheme>::Ciphertext, B::TargetCiphertext);
    type SecretKey = (<B::Source as Scheme>::SecretKey, B::SecretKey2);
    type PublicKey = GraphPublicKey<B>;

    fn keygen(&self, rng: &mut dyn RngCore) -> Result<(Self::SecretKey, Self::PublicKey)> {
        let keys = self.bridge.keygen(rng)?;
        Ok((
            (keys.sk1, keys.sk2),
            GraphPublicKey {
                pk1: keys.pk1,
                pk2: keys.pk2,
                bk: keys.bk,
            },
        ))
    }

    fn encrypt(
        &self,
        pk: &Self::PublicKey,
        m: &Self::Plaintext,
        rng: &mut dyn RngCore,
    ) -> Result<Self::Ciphertext> {
        let source = self.bridge.source_scheme();
        let a = source.encrypt(&pk.pk1, m, rng)?;
        let b = source.encrypt(&pk.pk1, m, rng)?;
        let second = self.bridge.convert(&pk.pk2, &pk.bk, &b, rng)?;
        Ok((a, second))
    }

    fn decrypt(&self, sk: &Self::SecretKey, c: &Self::Ciphertext) -> Result<Self::Plaintext> {
        self.bridge.source_scheme().decrypt(&sk.0, &c.0)
    }

    fn plaintexts(&self) -> Vec<Self::Plaintext> {
        self.bridge.source_scheme().plaintexts()
    }

    fn plaintext_bits(&self) -> usize {
        self.bridge.source_scheme().plaintext_bits()
    }

    fn encode_plaintext(&self, m: &Self::Plaintext) -> Vec<bool> {
        self.bridge.source_scheme().encode_plaintext(m)
    }

    fn decode_plaintext(&self, bits: &[bool]) -> Option<Self::Plaintext> {
        self.bridge.source_scheme().decode_plaintext(bits)
    }

    fn is_symmetric(&self) -> bool {
        self.bridge.source_scheme().is_symmetric()
    }
}

/// Empirical bridge correctness over uniform plaintexts.
#[derive(Debug, Clone)]
pub struct BridgeCheck {
    pub trials: usize,
    pub failures: usize,
    pub failure_rate: f64,
    /// 95% Hoeffding half-width on the failure rate.
    pub half_width: f64,
    /// The bridge's declared bound, for comparison.
    pub declared_bound: f64,
}

/// Measures `Pr[dec2(convert(enc1(m))) != embed(m)]` over uniform
/// plaintexts, regenerating keys every `block` trials.
pub fn check_bridge_correctness<B: Bridge>(
    bridge: &B,
    trials: usize,
    block: usize,
    rng: &mut dyn RngCore,
) -> Result<BridgeCheck> {
    if trials == 0 || block == 0 {
        return Err(Error::InvalidParameter(
            "trials and block must be positive".into(),
        ));
    }
    let source = bridge.source_scheme();
    let mut failures = 0usize;
    let mut done = 0usize;
    while done < trials {
        let keys = bridge.keygen(rng)?;
        for _ in 0..block.min(trials - done) {
            let m = source.sample_plaintext(rng);
            let c1 = source.encrypt(&keys.pk1, &m, rng)?;
            let c2 = bridge.convert(&keys.pk2, &keys.bk, &c1, rng)?;
            let got = bridge.decrypt_target(&keys.sk2, &c2)?;
            if got != bridge.embed(&m) {
                failures += 1;
            }
            done += 1;
        }
    }
    Ok(BridgeCheck {
        trials,
        failures,
        failure_rate: failures as f64 / trials as f64,
        half_width: hoeffding_half_width(trials),
        declared_bound: bridge.failure_bound(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gm::GmScheme;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn identity_bridge_map_is_bit_identical() {
        let scheme = GmScheme::new(24).unwrap();
        let bridge = IdentityBridge::new(scheme);
        let mut rng = ChaCha20Rng::seed_from_u64(81);
        let keys = bridge.keygen(&mut rng).unwrap();
        for m in [false, true] {
            let c = scheme.encrypt(&keys.pk1, &m, &mut rng).unwrap();
            let c2 = bridge.convert(&keys.pk2, &keys.bk, &c, &mut rng).unwrap();
            assert_eq!(c, c2);
        }
    }

    #[test]
    fn identity_bridge_has_zero_failures() {
        let bridge = IdentityBridge::new(GmScheme::new(24).unwrap());
        let mut rng = ChaCha20Rng::seed_from_u64(82);
        let report = check_bridge_correctness(&bridge, 400, 100, &mut rng).unwrap();
        assert_eq!(report.failures, 0);
        assert_eq!(report.declared_bound, 0.0);
    }

    #[test]
    fn identity_bridge_key_serializes_empty() {
        let bridge = IdentityBridge::new(GmScheme::new(24).unwrap());
        let mut rng = ChaCha20Rng::seed_from_u64(83);
        let keys = bridge.keygen(&mut rng).unwrap();
        assert_eq!(serde_json::to_string(&keys.bk).unwrap(), "null");
    }

    #[test]
    fn graph_scheme_round_trips_and_ignores_second_component() {
        let scheme = GmScheme::new(24).unwrap();
        let graph = GraphScheme::new(IdentityBridge::new(scheme));
        let mut rng = ChaCha20Rng::seed_from_u64(84);
        let (sk, pk) = graph.keygen(&mut rng).unwrap();
        for _ in 0..50 {
            let m = rng.gen::<bool>();
            let (a, b) = graph.encrypt(&pk, &m, &mut rng).unwrap();
            assert_eq!(graph.decrypt(&sk, &(a.clone(), b.clone())).unwrap(), m);
            // corrupt the second component: decryption must not notice
            let junk = scheme.encrypt(&pk.pk1, &!m, &mut rng).unwrap();
            assert_eq!(graph.decrypt(&sk, &(a, junk)).unwrap(), m);
        }
    }

    #[test]
    fn graph_scheme_encryptions_are_independent_draws() {
        let scheme = GmScheme::new(24).unwrap();
        let graph = GraphScheme::new(IdentityBridge::new(scheme));
        let mut rng = ChaCha20Rng::seed_from_u64(85);
        let (_, pk) = graph.keygen(&mut rng).unwrap();
        for _ in 0..200 {
            let (a, b) = graph.encrypt(&pk, &true, &mut rng).unwrap();
            // identity bridge passes b through; distinct randomizers make
            // a collision essentially impossible at this modulus size
            assert_ne!(a, b);
        }
    }

    #[test]
    fn graph_second_component_decrypts_to_the_embedding() {
        let scheme = GmScheme::new(24).unwrap();
        let graph = GraphScheme::new(IdentityBridge::new(scheme));
        let mut rng = ChaCha20Rng::seed_from_u64(86);
        let (sk, pk) = graph.keygen(&mut rng).unwrap();
        for m in [false, true] {
            let c = graph.encrypt(&pk, &m, &mut rng).unwrap();
            assert_eq!(graph.decrypt_second(&sk, &c).unwrap(), Some(m));
        }
    }
}
