//! The Goldwasser-Micali bit encryption scheme.
//!
//! A bit is encrypted as `gamma^m * xi^2 mod N` for a uniform unit `xi`,
//! where `gamma` is a unit of Jacobi symbol 1 that is a nonresidue modulo
//! both prime factors. Decryption tests quadratic residuosity modulo `p`.
//! Multiplying ciphertexts adds plaintexts, so the scheme is XOR
//! homomorphic with zero decryption error.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::encoding::serde_hex;
use crate::numtheory::{
    gen_gm_modulus, is_probable_prime, jacobi, legendre_euler, uniform_unit, Modulus,
};
use crate::scheme_core::{BitPlaintext, RekeyableScheme, Scheme};
use crate::{Error, Result};

/// GM with an `N` of the given bit length. Sizes down to 16 bits are
/// accepted for tests; nothing below about 1024 bits is secure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GmScheme {
    bits: u64,
}

impl GmScheme {
    pub fn new(bits: u64) -> Result<Self> {
        if bits < 16 {
            return Err(Error::InvalidParameter(format!(
                "GM modulus size {bits} below 16 bits"
            )));
        }
        Ok(GmScheme { bits })
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GmSecretKey {
    #[serde(with = "serde_hex")]
    pub p: BigUint,
    #[serde(with = "serde_hex")]
    pub q: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GmPublicKey {
    pub n: Modulus,
    #[serde(with = "serde_hex")]
    pub gamma: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GmCiphertext {
    #[serde(rename = "c", with = "serde_hex")]
    pub value: BigUint,
}

impl GmPublicKey {
    /// `gamma` itself is a deterministic encryption of 1 (randomizer 1);
    /// the comparison circuit leans on this.
    pub fn one_ciphertext(&self) -> GmCiphertext {
        GmCiphertext {
            value: self.gamma.clone(),
        }
    }

    fn check_unit(&self, value: &BigUint) -> Result<()> {
        if value >= self.n.value() {
            return Err(Error::CiphertextRange);
        }
        if !value.gcd(self.n.value()).is_one() {
            return Err(Error::NotAUnit);
        }
        Ok(())
    }
}

/// Builds a keypair from explicit parts, validating every invariant: `p`,
/// `q` distinct odd primes, `eta` a nonresidue modulo both, `u` a unit.
pub fn keypair_from_parts(
    p: BigUint,
    q: BigUint,
    eta: BigUint,
    u: BigUint,
) -> Result<(GmSecretKey, GmPublicKey)> {
    let mut rng = ChaCha20Rng::seed_from_u64(0x6d72); // witnesses for the primality check
    if p == q {
        return Err(Error::InvalidParameter("p and q must be distinct".into()));
    }
    for prime in [&p, &q] {
        if !is_probable_prime(prime, &mut rng) || prime.is_even() {
            return Err(Error::InvalidParameter(format!(
                "{prime} is not an odd prime"
            )));
        }
    }
    let n = Modulus::new(&p * &q)?;
    if legendre_euler(&eta, &p) != -1 || legendre_euler(&eta, &q) != -1 {
        return Err(Error::InvalidParameter(
            "eta must be a nonresidue modulo both primes".into(),
        ));
    }
    if !u.gcd(n.value()).is_one() {
        return Err(Error::NotAUnit);
    }
    let gamma = eta * (&u * &u) % n.value();
    Ok((GmSecretKey { p, q }, GmPublicKey { n, gamma }))
}

/// Encrypts with an explicit randomizer instead of a sampled one.
pub fn encrypt_with(pk: &GmPublicKey, m: bool, xi: &BigUint) -> Result<GmCiphertext> {
    pk.check_unit(xi)?;
    let n = pk.n.value();
    let mut value = xi * xi % n;
    if m {
        value = value * &pk.gamma % n;
    }
    Ok(GmCiphertext { value })
}

/// Ciphertext product; decrypts to the XOR of the plaintexts.
pub fn homomorphic_xor(
    pk: &GmPublicKey,
    a: &GmCiphertext,
    b: &GmCiphertext,
) -> Result<GmCiphertext> {
    pk.check_unit(&a.value)?;
    pk.check_unit(&b.value)?;
    Ok(GmCiphertext {
        value: &a.value * &b.value % pk.n.value(),
    })
}

/// Multiplies in a fresh square; the plaintext is unchanged.
pub fn rerandomize(
    pk: &GmPublicKey,
    c: &GmCiphertext,
    rng: &mut dyn RngCore,
) -> Result<GmCiphertext> {
    pk.check_unit(&c.value)?;
    let xi = uniform_unit(pk.n.value(), rng)?;
    Ok(GmCiphertext {
        value: &c.value * (&xi * &xi % pk.n.value()) % pk.n.value(),
    })
}

impl Scheme for GmScheme {
    type Plaintext = bool;
    type Ciphertext = GmCiphertext;
    type SecretKey = GmSecretKey;
    type PublicKey = GmPublicKey;

    fn keygen(&self, rng: &mut dyn RngCore) -> Result<(GmSecretKey, GmPublicKey)> {
        let modulus = gen_gm_modulus(self.bits, rng)?;
        let u = uniform_unit(modulus.n.value(), rng)?;
        let gamma = modulus.eta * (&u * &u) % modulus.n.value();
        Ok((
            GmSecretKey {
                p: modulus.p,
                q: modulus.q,
            },
            GmPublicKey {
                n: modulus.n,
                gamma,
            },
        ))
    }

    fn encrypt(&self, pk: &GmPublicKey, m: &bool, rng: &mut dyn RngCore) -> Result<GmCiphertext> {
        // uniform unit, not uniform residue: a non-unit would leak a factor
        let xi = uniform_unit(pk.n.value(), rng)?;
        encrypt_with(pk, *m, &xi)
    }

    fn decrypt(&self, sk: &GmSecretKey, c: &GmCiphertext) -> Result<bool> {
        let n = Modulus::new(&sk.p * &sk.q)?;
        if c.value >= *n.value() {
            return Err(Error::CiphertextRange);
        }
        if !c.value.gcd(n.value()).is_one() {
            return Err(Error::NotAUnit);
        }
        let p = Modulus::new(sk.p.clone())?;
        Ok(jacobi(&c.value, &p) == -1)
    }

    fn plaintexts(&self) -> Vec<bool> {
        vec![false, true]
    }

    fn plaintext_bits(&self) -> usize {
        1
    }

    fn encode_plaintext(&self, m: &bool) -> Vec<bool> {
        vec![*m]
    }

    fn decode_plaintext(&self, bits: &[bool]) -> Option<bool> {
        match bits {
            [b] => Some(*b),
            _ => None,
        }
    }
}

impl RekeyableScheme for GmScheme {
    fn public_key_for(&self, sk: &GmSecretKey, rng: &mut dyn RngCore) -> Result<GmPublicKey> {
        let n = Modulus::new(&sk.p * &sk.q)?;
        const ATTEMPTS: usize = 4096;
        for _ in 0..ATTEMPTS {
            let eta = uniform_unit(n.value(), rng)?;
            if legendre_euler(&eta, &sk.p) == -1 && legendre_euler(&eta, &sk.q) == -1 {
                let u = uniform_unit(n.value(), rng)?;
                let gamma = eta * (&u * &u) % n.value();
                return Ok(GmPublicKey { n, gamma });
            }
        }
        Err(Error::SamplingExhausted {
            what: "nonresidue",
            attempts: ATTEMPTS,
        })
    }
}

impl BitPlaintext for GmScheme {
    fn embed_bit(&self, bit: bool) -> bool {
        bit
    }

    fn extract_bit(&self, m: &bool) -> Option<bool> {
        Some(*m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn toy_keys() -> (GmSecretKey, GmPublicKey) {
        keypair_from_parts(
            BigUint::from(7u8),
            BigUint::from(11u8),
            BigUint::from(6u8),
            BigUint::one(),
        )
        .unwrap()
    }

    #[test]
    fn forced_toy_key_is_77_6() {
        let (sk, pk) = toy_keys();
        assert_eq!(pk.n.value(), &BigUint::from(77u8));
        assert_eq!(pk.gamma, BigUint::from(6u8));
        assert_eq!(sk.p, BigUint::from(7u8));
    }

    #[test]
    fn from_parts_rejects_bad_input() {
        let ok = BigUint::from(7u8);
        assert!(
            keypair_from_parts(ok.clone(), ok.clone(), BigUint::from(6u8), BigUint::one()).is_err()
        );
        assert!(keypair_from_parts(
            BigUint::from(8u8),
            BigUint::from(11u8),
            BigUint::from(6u8),
            BigUint::one()
        )
        .is_err());
        // 2 is a residue mod 7, so it cannot serve as eta
        assert!(keypair_from_parts(
            BigUint::from(7u8),
            BigUint::from(11u8),
            BigUint::from(2u8),
            BigUint::one()
        )
        .is_err());
    }

    #[test]
    fn toy_encryption_of_one_with_unit_randomizer() {
        let (sk, pk) = toy_keys();
        let scheme = GmScheme::new(16).unwrap();
        let c = encrypt_with(&pk, true, &BigUint::one()).unwrap();
        assert_eq!(c.value, BigUint::from(6u8));
        assert!(scheme.decrypt(&sk, &c).unwrap());
        let c0 = encrypt_with(&pk, false, &BigUint::one()).unwrap();
        assert_eq!(c0.value, BigUint::one());
        assert!(!scheme.decrypt(&sk, &c0).unwrap());
    }

    #[test]
    fn generated_gammas_have_jacobi_one() {
        let scheme = GmScheme::new(32).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(41);
        for _ in 0..20 {
            let (_, pk) = scheme.keygen(&mut rng).unwrap();
            assert_eq!(jacobi(&pk.gamma, &pk.n), 1);
        }
    }

    #[test]
    fn round_trips_are_exact() {
        let scheme = GmScheme::new(32).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(42);
        let (sk, pk) = scheme.keygen(&mut rng).unwrap();
        for i in 0..1000 {
            let m = i % 2 == 0;
            let c = scheme.encrypt(&pk, &m, &mut rng).unwrap();
            assert_eq!(jacobi(&c.value, &pk.n), 1);
            assert_eq!(scheme.decrypt(&sk, &c).unwrap(), m);
        }
    }

    #[test]
    fn xor_law_over_all_plaintext_pairs() {
        let scheme = GmScheme::new(32).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(43);
        let (sk, pk) = scheme.keygen(&mut rng).unwrap();
        for a in [false, true] {
            for b in [false, true] {
                for _ in 0..50 {
                    let ca = scheme.encrypt(&pk, &a, &mut rng).unwrap();
                    let cb = scheme.encrypt(&pk, &b, &mut rng).unwrap();
                    let c = homomorphic_xor(&pk, &ca, &cb).unwrap();
                    assert_eq!(scheme.decrypt(&sk, &c).unwrap(), a ^ b);
                }
            }
        }
    }

    #[test]
    fn xor_with_encryption_of_zero_is_identity_on_plaintexts() {
        let scheme = GmScheme::new(24).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(44);
        let (sk, pk) = scheme.keygen(&mut rng).unwrap();
        for m in [false, true] {
            let c = scheme.encrypt(&pk, &m, &mut rng).unwrap();
            let zero = scheme.encrypt(&pk, &false, &mut rng).unwrap();
            let mixed = homomorphic_xor(&pk, &c, &zero).unwrap();
            assert_eq!(scheme.decrypt(&sk, &mixed).unwrap(), m);
        }
    }

    #[test]
    fn rerandomization_preserves_the_plaintext() {
        let scheme = GmScheme::new(24).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(45);
        let (sk, pk) = scheme.keygen(&mut rng).unwrap();
        for m in [false, true] {
            let c = scheme.encrypt(&pk, &m, &mut rng).unwrap();
            for _ in 0..100 {
                let r = rerandomize(&pk, &c, &mut rng).unwrap();
                assert_eq!(scheme.decrypt(&sk, &r).unwrap(), m);
            }
        }
    }

    #[test]
    fn gamma_classes_decrypt_to_one() {
        let scheme = GmScheme::new(24).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(46);
        let (sk, pk) = scheme.keygen(&mut rng).unwrap();
        for _ in 0..100 {
            let xi = uniform_unit(pk.n.value(), &mut rng).unwrap();
            let c = encrypt_with(&pk, true, &xi).unwrap();
            assert!(scheme.decrypt(&sk, &c).unwrap());
        }
        assert!(scheme.decrypt(&sk, &pk.one_ciphertext()).unwrap());
    }

    #[test]
    fn non_unit_ciphertext_is_rejected_loudly() {
        let (sk, pk) = toy_keys();
        let scheme = GmScheme::new(16).unwrap();
        let shared_factor = GmCiphertext {
            value: BigUint::from(7u8),
        };
        assert!(matches!(
            scheme.decrypt(&sk, &shared_factor),
            Err(Error::NotAUnit)
        ));
        let oversized = GmCiphertext {
            value: BigUint::from(100u8),
        };
        assert!(matches!(
            scheme.decrypt(&sk, &oversized),
            Err(Error::CiphertextRange)
        ));
        assert!(homomorphic_xor(&pk, &shared_factor, &pk.one_ciphertext()).is_err());
    }

    #[test]
    fn rekeying_keeps_the_modulus_and_decryptability() {
        let scheme = GmScheme::new(32).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(47);
        let (sk, pk) = scheme.keygen(&mut rng).unwrap();
        let pk2 = scheme.public_key_for(&sk, &mut rng).unwrap();
        assert_eq!(pk.n, pk2.n);
        assert_ne!(pk.gamma, pk2.gamma);
        for m in [false, true] {
            let c = scheme.encrypt(&pk2, &m, &mut rng).unwrap();
            assert_eq!(scheme.decrypt(&sk, &c).unwrap(), m);
        }
    }

    #[test]
    fn key_and_ciphertext_json_shapes() {
        let (_, pk) = toy_keys();
        let json = serde_json::to_string(&pk).unwrap();
        assert_eq!(json, r#"{"n":"4d","gamma":"6"}"#);
        let ct = pk.one_ciphertext();
        assert_eq!(serde_json::to_string(&ct).unwrap(), r#"{"c":"6"}"#);
        let back: GmPublicKey = serde_json::from_str(&json).unwrap();
        assert_eq!(back, pk);
    }
}
