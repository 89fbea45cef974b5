//! The entangled GM-to-SYY bridge and the homomorphic comparison circuit.
//!
//! Both schemes share the secret primes; the bridge key is empty. A GM
//! ciphertext `c` converts to the SYY vector `((c * gamma')^{w_1} r_1^2,
//! ..., (c * gamma')^{w_ell} r_ell^2)` where `w_i` are the row weights of a
//! fresh invertible matrix. A nonsingular matrix has some odd-weight row,
//! which makes the conversion correct deterministically in both directions.
//!
//! Comparing two encrypted bit vectors folds the converted per-position
//! equality bits `c_i * d_i * gamma` through the SYY AND; the only failure
//! source is the AND itself, bounded by `(n - 1) / (2^ell - 1)`.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use rand::RngCore;

use crate::bridge_core::Bridge;
use crate::gm::{homomorphic_xor, GmCiphertext, GmPublicKey, GmScheme, GmSecretKey};
use crate::numtheory::{jacobi, uniform_unit, Gf2Matrix};
use crate::scheme_core::{RekeyableScheme, Scheme};
use crate::syy::{SyyCiphertext, SyyPublicKey, SyyScheme, SyySecretKey};
use crate::{Error, Result};

/// How conversion exponentiates `(c * gamma')` by a row weight `w`.
///
/// Even powers are squares and vanish into the `r_i^2` randomizer, so only
/// the parity of `w` matters for decryption; `Parity` exploits that, `Full`
/// computes the literal power. Both consume randomness identically, so runs
/// from a shared seed are decryption-equivalent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExponentMode {
    #[default]
    Parity,
    Full,
}

/// Fold shape for the comparison circuit; the failure bound is the same.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FoldOrder {
    #[default]
    Sequential,
    Balanced,
}

/// The bridge; also owns the comparison-circuit evaluator.
#[derive(Debug, Clone, Copy)]
pub struct GmSyyBridge {
    gm: GmScheme,
    syy: SyyScheme,
    pub exponent_mode: ExponentMode,
    pub fold: FoldOrder,
}

impl GmSyyBridge {
    pub fn new(bits: u64, ell: usize) -> Result<Self> {
        Ok(GmSyyBridge {
            gm: GmScheme::new(bits)?,
            syy: SyyScheme::new(bits, ell)?,
            exponent_mode: ExponentMode::default(),
            fold: FoldOrder::default(),
        })
    }

    pub fn with_exponent_mode(mut self, mode: ExponentMode) -> Self {
        self.exponent_mode = mode;
        self
    }

    pub fn with_fold(mut self, fold: FoldOrder) -> Self {
        self.fold = fold;
        self
    }

    pub fn ell(&self) -> usize {
        self.syy.ell()
    }

    pub fn syy_scheme(&self) -> &SyyScheme {
        &self.syy
    }

    fn check_input(&self, pk2: &SyyPublicKey, c: &GmCiphertext) -> Result<()> {
        let n = pk2.gm.n.value();
        if c.value >= *n {
            return Err(Error::CiphertextRange);
        }
        if !c.value.gcd(n).is_one() {
            return Err(Error::NotAUnit);
        }
        if jacobi(&c.value, &pk2.gm.n) != 1 {
            return Err(Error::Bridge(
                "ciphertext outside the Jacobi-one subgroup".into(),
            ));
        }
        Ok(())
    }

    /// Homomorphically evaluates the equality test of two encrypted bit
    /// vectors: converts each `c_i * d_i * gamma` and folds through the SYY
    /// AND. The result decrypts to 1 exactly for equal vectors, except with
    /// probability at most `(n - 1) / (2^ell - 1)`.
    pub fn compare_eval(
        &self,
        pk1: &GmPublicKey,
        pk2: &SyyPublicKey,
        xs: &[GmCiphertext],
        ys: &[GmCiphertext],
        rng: &mut dyn RngCore,
    ) -> Result<SyyCiphertext> {
        if xs.len() != ys.len() {
            return Err(Error::DimensionMismatch {
                expected: xs.len(),
                got: ys.len(),
            });
        }
        if xs.is_empty() {
            return Err(Error::InvalidParameter("comparing empty vectors".into()));
        }
        if pk1.n != pk2.gm.n {
            return Err(Error::Bridge(
                "comparison keys must share the modulus".into(),
            ));
        }
        let gamma = pk1.one_ciphertext();
        let mut terms = Vec::with_capacity(xs.len());
        for (c, d) in xs.iter().zip(ys) {
            let sum = homomorphic_xor(pk1, c, d)?;
            let bit = homomorphic_xor(pk1, &sum, &gamma)?;
            terms.push(self.convert(pk2, &(), &bit, rng)?);
        }
        match self.fold {
            FoldOrder::Sequential => {
                let mut acc = terms.remove(0);
                for t in &terms {
                    acc = self.syy.and(pk2, &acc, t, rng)?;
                }
                Ok(acc)
            }
            FoldOrder::Balanced => {
                let mut layer = terms;
                while layer.len() > 1 {
                    let mut next = Vec::with_capacity(layer.len().div_ceil(2));
                    for pair in layer.chunks(2) {
                        next.push(if pair.len() == 2 {
                            self.syy.and(pk2, &pair[0], &pair[1], rng)?
                        } else {
                            pair[0].clone()
                        });
                    }
                    layer = next;
                }
                Ok(layer.pop().expect("nonempty fold"))
            }
        }
    }

    /// Failure bound of [`GmSyyBridge::compare_eval`] at vector length `n`.
    pub fn compare_failure_bound(&self, n: usize) -> f64 {
        (n.saturating_sub(1)) as f64 / ((1u64 << self.ell()) - 1) as f64
    }
}

impl Bridge for GmSyyBridge {
    type Source = GmScheme;
    type TargetPlaintext = bool;
    type TargetCiphertext = SyyCiphertext;
    type SecretKey2 = SyySecretKey;
    type PublicKey2 = SyyPublicKey;
    type BridgeKey = ();

    fn source_scheme(&self) -> &GmScheme {
        &self.gm
    }

    fn embed(&self, m: &bool) -> bool {
        *m
    }

    fn embed_inverse(&self, m: &bool) -> Option<bool> {
        Some(*m)
    }

    fn keygen_tail(
        &self,
        sk1: &GmSecretKey,
        _pk1: &GmPublicKey,
        rng: &mut dyn RngCore,
    ) -> Result<(SyySecretKey, SyyPublicKey, ())> {
        // the same primes secretly back both schemes; only gamma' is fresh
        let sk2 = SyySecretKey {
            gm: sk1.clone(),
            ell: self.syy.ell(),
        };
        let pk2 = SyyPublicKey {
            gm: self.gm.public_key_for(sk1, rng)?,
            ell: self.syy.ell(),
        };
        Ok((sk2, pk2, ()))
    }

    fn convert(
        &self,
        pk2: &SyyPublicKey,
        _bk: &(),
        c: &GmCiphertext,
        rng: &mut dyn RngCore,
    ) -> Result<SyyCiphertext> {
        self.check_input(pk2, c)?;
        let ell = self.syy.ell();
        let n = pk2.gm.n.value();
        let shifted = &c.value * &pk2.gm.gamma % n;
        let a = Gf2Matrix::random_nonsingular(ell, rng)?;
        let mut components = Vec::with_capacity(ell);
        for i in 0..ell {
            let w = a.row_weight(i);
            let t = match self.exponent_mode {
                ExponentMode::Parity => {
                    if w % 2 == 1 {
                        shifted.clone()
                    } else {
                        BigUint::one()
                    }
                }
                ExponentMode::Full => shifted.modpow(&BigUint::from(w), n),
            };
            let r = uniform_unit(n, rng)?;
            components.push(GmCiphertext {
                value: t * (&r * &r % n) % n,
            });
        }
        Ok(SyyCiphertext { components })
    }

    fn decrypt_target(&self, sk2: &SyySecretKey, c: &SyyCiphertext) -> Result<bool> {
        self.syy.decrypt(sk2, c)
    }
}
