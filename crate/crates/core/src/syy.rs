//! The Sander-Young-Yung scheme over the multiplicative monoid on bits.
//!
//! A plaintext bit is a vector of GM encryptions: the all-zeros bit vector
//! encodes 1, any nonzero vector encodes 0. The randomized AND multiplies
//! the decrypted vectors by fresh invertible matrices and sums them, which
//! is correct unless both operands encode 0 and the two images collide --
//! an event of probability exactly `1 / (2^ell - 1)`.

use num_bigint::BigUint;
use rand::RngCore;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::encoding::{biguint_from_hex, biguint_to_hex};
use crate::gm::{encrypt_with, GmCiphertext, GmPublicKey, GmScheme, GmSecretKey};
use crate::numtheory::{uniform_unit, Gf2Matrix, Gf2Vec};
use crate::scheme_core::{BitPlaintext, MulHomomorphic, RekeyableScheme, Scheme};
use crate::{Error, Result};

/// SYY with vectors of length `ell` over a GM modulus of `bits` bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SyyScheme {
    bits: u64,
    ell: usize,
}

impl SyyScheme {
    pub fn new(bits: u64, ell: usize) -> Result<Self> {
        if ell < 1 {
            return Err(Error::InvalidParameter(
                "vector length must be at least 1".into(),
            ));
        }
        GmScheme::new(bits)?;
        Ok(SyyScheme { bits, ell })
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    fn gm(&self) -> GmScheme {
        GmScheme::new(self.bits).expect("validated at construction")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyySecretKey {
    #[serde(flatten)]
    pub gm: GmSecretKey,
    pub ell: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyyPublicKey {
    #[serde(flatten)]
    pub gm: GmPublicKey,
    pub ell: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyyCiphertext {
    pub components: Vec<GmCiphertext>,
}

impl SyyCiphertext {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

impl Scheme for SyyScheme {
    type Plaintext = bool;
    type Ciphertext = SyyCiphertext;
    type SecretKey = SyySecretKey;
    type PublicKey = SyyPublicKey;

    fn keygen(&self, rng: &mut dyn RngCore) -> Result<(SyySecretKey, SyyPublicKey)> {
        let (sk, pk) = self.gm().keygen(rng)?;
        Ok((
            SyySecretKey {
                gm: sk,
                ell: self.ell,
            },
            SyyPublicKey {
                gm: pk,
                ell: self.ell,
            },
        ))
    }

    fn encrypt(&self, pk: &SyyPublicKey, m: &bool, rng: &mut dyn RngCore) -> Result<SyyCiphertext> {
        let v = if *m {
            Gf2Vec::zero(self.ell)
        } else {
            Gf2Vec::random_nonzero(self.ell, rng)
        };
        self.encrypt_vector(pk, &v, rng)
    }

    fn decrypt(&self, sk: &SyySecretKey, c: &SyyCiphertext) -> Result<bool> {
        Ok(self.decrypt_vector(sk, c)?.is_zero())
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

impl SyyScheme {
    /// GM-encrypts each bit of `v`.
    pub fn encrypt_vector(
        &self,
        pk: &SyyPublicKey,
        v: &Gf2Vec,
        rng: &mut dyn RngCore,
    ) -> Result<SyyCiphertext> {
        if v.len() != self.ell {
            return Err(Error::DimensionMismatch {
                expected: self.ell,
                got: v.len(),
            });
        }
        let gm = self.gm();
        let components = (0..self.ell)
            .map(|i| gm.encrypt(&pk.gm, &v.get(i), rng))
            .collect::<Result<Vec<_>>>()?;
        Ok(SyyCiphertext { components })
    }

    /// Componentwise GM decryption.
    pub fn decrypt_vector(&self, sk: &SyySecretKey, c: &SyyCiphertext) -> Result<Gf2Vec> {
        if c.components.len() != sk.ell {
            return Err(Error::DimensionMismatch {
                expected: sk.ell,
                got: c.components.len(),
            });
        }
        let gm = self.gm();
        let mut v = Gf2Vec::zero(c.components.len());
        for (i, comp) in c.components.iter().enumerate() {
            v.set(i, gm.decrypt(&sk.gm, comp)?);
        }
        Ok(v)
    }

    /// The randomized AND: fresh invertible `A`, `B`, then
    /// `z_i = prod_{a_ij = 1} x_j * prod_{b_ij = 1} y_j * r_i^2`.
    pub fn and(
        &self,
        pk: &SyyPublicKey,
        x: &SyyCiphertext,
        y: &SyyCiphertext,
        rng: &mut dyn RngCore,
    ) -> Result<SyyCiphertext> {
        let a = Gf2Matrix::random_nonsingular(self.ell, rng)?;
        let b = Gf2Matrix::random_nonsingular(self.ell, rng)?;
        self.and_with_matrices(pk, x, y, &a, &b, rng)
    }

    /// [`SyyScheme::and`] with caller-chosen matrices. Exists so small cases
    /// can be verified exhaustively over all of `GL_ell(F_2)`.
    pub fn and_with_matrices(
        &self,
        pk: &SyyPublicKey,
        x: &SyyCiphertext,
        y: &SyyCiphertext,
        a: &Gf2Matrix,
        b: &Gf2Matrix,
        rng: &mut dyn RngCore,
    ) -> Result<SyyCiphertext> {
        if x.len() != self.ell || y.len() != self.ell {
            return Err(Error::DimensionMismatch {
                expected: self.ell,
                got: x.len().max(y.len()),
            });
        }
        if a.dim() != self.ell || b.dim() != self.ell {
            return Err(Error::DimensionMismatch {
                expected: self.ell,
                got: a.dim(),
            });
        }
        let n = pk.gm.n.value();
        let mut components = Vec::with_capacity(self.ell);
        for i in 0..self.ell {
            let mut acc = BigUint::from(1u8);
            for j in a.row(i).iter_ones() {
                acc = acc * &x.components[j].value % n;
            }
            for j in b.row(i).iter_ones() {
                acc = acc * &y.components[j].value % n;
            }
            let r = uniform_unit(n, rng)?;
            components.push(GmCiphertext {
                value: acc * (&r * &r % n) % n,
            });
        }
        Ok(SyyCiphertext { components })
    }

    /// Deterministic encryption of 1: componentwise squares of explicit
    /// units (the zero vector in the exponent).
    pub fn one_ciphertext(
        &self,
        pk: &SyyPublicKey,
        rng: &mut dyn RngCore,
    ) -> Result<SyyCiphertext> {
        let n = pk.gm.n.value();
        let components = (0..self.ell)
            .map(|_| {
                let r = uniform_unit(n, rng)?;
                encrypt_with(&pk.gm, false, &r)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SyyCiphertext { components })
    }
}

impl MulHomomorphic for SyyScheme {
    fn hom_mul(
        &self,
        pk: &SyyPublicKey,
        a: &SyyCiphertext,
        b: &SyyCiphertext,
        rng: &mut dyn RngCore,
    ) -> Result<SyyCiphertext> {
        self.and(pk, a, b, rng)
    }
}

impl RekeyableScheme for SyyScheme {
    fn public_key_for(&self, sk: &SyySecretKey, rng: &mut dyn RngCore) -> Result<SyyPublicKey> {
        let gm_pk = self.gm().public_key_for(&sk.gm, rng)?;
        Ok(SyyPublicKey {
            gm: gm_pk,
            ell: self.ell,
        })
    }
}

impl BitPlaintext for SyyScheme {
    fn embed_bit(&self, bit: bool) -> bool {
        bit
    }

    fn extract_bit(&self, m: &bool) -> Option<bool> {
        Some(*m)
    }
}

impl Serialize for SyyCiphertext {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            components: Vec<String>,
        }
        Repr {
            components: self
                .components
                .iter()
                .map(|c| biguint_to_hex(&c.value))
                .collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for SyyCiphertext {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            components: Vec<String>,
        }
        let repr = Repr::deserialize(de)?;
        let components = repr
            .components
            .iter()
            .map(|hex| biguint_from_hex(hex).map(|value| GmCiphertext { value }))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        Ok(SyyCiphertext { components })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn setup(ell: usize, seed: u64) -> (SyyScheme, SyySecretKey, SyyPublicKey, ChaCha20Rng) {
        let scheme = SyyScheme::new(16, ell).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let (sk, pk) = scheme.keygen(&mut rng).unwrap();
        (scheme, sk, pk, rng)
    }

    #[test]
    fn encryptions_of_one_are_all_zero_vectors() {
        let (scheme, sk, pk, mut rng) = setup(3, 51);
        for _ in 0..50 {
            let c = scheme.encrypt(&pk, &true, &mut rng).unwrap();
            assert!(scheme.decrypt_vector(&sk, &c).unwrap().is_zero());
        }
    }

    #[test]
    fn encryptions_of_zero_have_a_set_bit() {
        let (scheme, sk, pk, mut rng) = setup(3, 52);
        for _ in 0..200 {
            let c = scheme.encrypt(&pk, &false, &mut rng).unwrap();
            assert!(!scheme.decrypt_vector(&sk, &c).unwrap().is_zero());
        }
    }

    #[test]
    fn round_trips_are_exact() {
        let (scheme, sk, pk, mut rng) = setup(4, 53);
        for i in 0..1000 {
            let m = i % 2 == 0;
            let c = scheme.encrypt(&pk, &m, &mut rng).unwrap();
            assert_eq!(scheme.decrypt(&sk, &c).unwrap(), m);
        }
    }

    #[test]
    fn decryption_by_vector_class() {
        let (scheme, sk, pk, mut rng) = setup(4, 54);
        let ones = scheme
            .encrypt_vector(&pk, &Gf2Vec::zero(4), &mut rng)
            .unwrap();
        assert!(scheme.decrypt(&sk, &ones).unwrap());
        let mixed = scheme.encrypt_vector(
            &pk,
            &Gf2Vec::from_bits(&[true, false, true, false]),
            &mut rng,
        );
        assert!(!scheme.decrypt(&sk, &mixed.unwrap()).unwrap());
    }

    #[test]
    fn and_is_exact_when_an_operand_encrypts_one() {
        let (scheme, sk, pk, mut rng) = setup(4, 55);
        for _ in 0..300 {
            let one = scheme.encrypt(&pk, &true, &mut rng).unwrap();
            let other_bit = rng.gen::<bool>();
            let other = scheme.encrypt(&pk, &other_bit, &mut rng).unwrap();
            let z = scheme.and(&pk, &one, &other, &mut rng).unwrap();
            assert_eq!(scheme.decrypt(&sk, &z).unwrap(), other_bit);
            let z = scheme.and(&pk, &other, &one, &mut rng).unwrap();
            assert_eq!(scheme.decrypt(&sk, &z).unwrap(), other_bit);
        }
    }

    #[test]
    fn and_failure_exactly_when_images_collide_exhaustive_ell_2() {
        // over all nonzero (v_x, v_y) and all invertible (A, B):
        // dec(x (.) y) is wrong exactly when A v_x = B v_y
        let (scheme, sk, pk, mut rng) = setup(2, 56);
        let invertible: Vec<Gf2Matrix> = Gf2Matrix::enumerate_all(2)
            .into_iter()
            .filter(|m| m.is_nonsingular())
            .collect();
        assert_eq!(invertible.len(), 6);
        let nonzero = [[true, false], [false, true], [true, true]];
        let mut failures = 0usize;
        let mut cases = 0usize;
        for vx in nonzero {
            for vy in nonzero {
                let vx = Gf2Vec::from_bits(&vx);
                let vy = Gf2Vec::from_bits(&vy);
                let x = scheme.encrypt_vector(&pk, &vx, &mut rng).unwrap();
                let y = scheme.encrypt_vector(&pk, &vy, &mut rng).unwrap();
                for a in &invertible {
                    for b in &invertible {
                        let z = scheme
                            .and_with_matrices(&pk, &x, &y, a, b, &mut rng)
                            .unwrap();
                        let collided = a.mul_vec(&vx).unwrap() == b.mul_vec(&vy).unwrap();
                        // both operands encrypt 0, so the AND should be 0
                        let wrong = scheme.decrypt(&sk, &z).unwrap();
                        assert_eq!(wrong, collided);
                        cases += 1;
                        failures += usize::from(wrong);
                    }
                }
            }
        }
        // 12 colliding (A, B) pairs out of 36 for every (v_x, v_y)
        assert_eq!(cases, 9 * 36);
        assert_eq!(failures, 9 * 12);
    }

    #[test]
    fn and_double_zero_failure_rate_at_ell_4() {
        let (scheme, sk, pk, mut rng) = setup(4, 57);
        let trials = 100_000;
        let mut failures = 0usize;
        for _ in 0..trials {
            let x = scheme.encrypt(&pk, &false, &mut rng).unwrap();
            let y = scheme.encrypt(&pk, &false, &mut rng).unwrap();
            let z = scheme.and(&pk, &x, &y, &mut rng).unwrap();
            failures += usize::from(scheme.decrypt(&sk, &z).unwrap());
        }
        let rate = failures as f64 / trials as f64;
        let exact = 1.0 / 15.0;
        assert!(
            (rate - exact).abs() <= 0.3 * exact,
            "rate = {rate}, expected about {exact}"
        );
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let (scheme, _, pk, mut rng) = setup(4, 58);
        let short = SyyScheme::new(16, 2).unwrap();
        let (_, pk2) = short.keygen(&mut rng).unwrap();
        let x = scheme.encrypt(&pk, &true, &mut rng).unwrap();
        let y = short.encrypt(&pk2, &true, &mut rng).unwrap();
        assert!(scheme.and(&pk, &x, &y, &mut rng).is_err());
    }

    #[test]
    fn ciphertext_json_is_a_component_list() {
        let (scheme, _, pk, mut rng) = setup(2, 59);
        let c = scheme.encrypt(&pk, &true, &mut rng).unwrap();
        let json = serde_json::to_string(&c).unwrap();
        assert!(json.starts_with(r#"{"components":["#), "{json}");
        let back: SyyCiphertext = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
    }
}
