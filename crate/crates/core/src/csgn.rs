//! The CSGN symmetric scheme over bit vectors with componentwise
//! multiplication.
//!
//! The secret key is the characteristic vector of a subset `S` of the `n`
//! positions. A fresh ciphertext has exactly `d` zero positions: encrypting
//! 1 keeps every zero outside `S`; encrypting 0 places `k ~ X` of them
//! inside `S`. Decryption multiplies the components indexed by `S`, so
//! componentwise products decrypt to the AND of the plaintexts with no
//! error at all.

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::findist::{FiniteDistribution, Sampler as _};
use crate::numtheory::Gf2Vec;
use crate::scheme_core::{BitPlaintext, MulHomomorphic, RekeyableScheme, Scheme};
use crate::{Error, Result};

/// CSGN parameters: vector length `n`, zeros per fresh ciphertext `d`,
/// subset size `s`, and optionally the in-subset zero-count distribution.
#[derive(Debug, Clone)]
pub struct CsgnScheme {
    n: usize,
    d: usize,
    s: usize,
    zero_count: Option<FiniteDistribution<u64>>,
}

impl CsgnScheme {
    pub fn new(n: usize, d: usize, s: usize) -> Result<Self> {
        if d < 1 || s < 1 {
            return Err(Error::InvalidParameter("d and s must be at least 1".into()));
        }
        if s + d > n {
            return Err(Error::InvalidParameter(format!(
                "s + d = {} exceeds n = {n}; encrypting 1 would be impossible",
                s + d
            )));
        }
        Ok(CsgnScheme {
            n,
            d,
            s,
            zero_count: None,
        })
    }

    /// Non-normative test preset.
    pub fn toy() -> Self {
        Self::new(256, 16, 32).expect("preset is valid")
    }

    /// Overrides the distribution of the number of in-subset zeros used
    /// when encrypting 0. Support must lie in `{1, ..., min(d, s)}`.
    pub fn with_zero_count(mut self, dist: FiniteDistribution<u64>) -> Result<Self> {
        Self::validate_dist(&dist, self.d, self.s)?;
        self.zero_count = Some(dist);
        Ok(self)
    }

    fn validate_dist(dist: &FiniteDistribution<u64>, d: usize, s: usize) -> Result<()> {
        if dist.support().is_empty() {
            return Err(Error::InvalidParameter(
                "zero-count distribution is empty".into(),
            ));
        }
        for &k in dist.support() {
            if k < 1 || k > d as u64 {
                return Err(Error::InvalidParameter(format!(
                    "zero count {k} outside 1..={d}"
                )));
            }
            if k > s as u64 {
                return Err(Error::InvalidParameter(format!(
                    "zero count {k} exceeds the subset size {s}"
                )));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn s(&self) -> usize {
        self.s
    }

    fn effective_dist(&self) -> Result<FiniteDistribution<u64>> {
        match &self.zero_count {
            Some(d) => Ok(d.clone()),
            None => {
                // default: uniform on 1..=d, which requires d <= s
                let top = self.d.min(self.s) as u64;
                if (self.d as u64) > top {
                    return Err(Error::InvalidParameter(format!(
                        "uniform default needs d <= s, got d = {} > s = {}; \
                         supply a distribution explicitly",
                        self.d, self.s
                    )));
                }
                FiniteDistribution::uniform((1..=top).collect())
            }
        }
    }
}

/// Key material; the scheme is symmetric, so this doubles as both keys.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsgnKey {
    pub n: usize,
    pub d: usize,
    pub s: usize,
    /// Sorted positions of the secret subset.
    pub subset: Vec<usize>,
    /// Distribution of in-subset zeros when encrypting 0.
    pub zero_count: FiniteDistribution<u64>,
}

impl CsgnKey {
    /// Characteristic bit vector of the subset.
    pub fn char_vec(&self) -> Gf2Vec {
        let mut v = Gf2Vec::zero(self.n);
        for &i in &self.subset {
            v.set(i, true);
        }
        v
    }

    fn complement(&self) -> Vec<usize> {
        let inside: std::collections::HashSet<usize> = self.subset.iter().copied().collect();
        (0..self.n).filter(|i| !inside.contains(i)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsgnCiphertext {
    pub bits: Gf2Vec,
}

impl CsgnCiphertext {
    pub fn zero_positions(&self) -> usize {
        self.bits.len() - self.bits.weight()
    }
}

/// Componentwise product; decrypts to the AND of the plaintexts, always.
pub fn multiply(a: &CsgnCiphertext, b: &CsgnCiphertext) -> Result<CsgnCiphertext> {
    if a.bits.len() != b.bits.len() {
        return Err(Error::DimensionMismatch {
            expected: a.bits.len(),
            got: b.bits.len(),
        });
    }
    Ok(CsgnCiphertext {
        bits: a.bits.and(&b.bits),
    })
}

impl Scheme for CsgnScheme {
    type Plaintext = bool;
    type Ciphertext = CsgnCiphertext;
    type SecretKey = CsgnKey;
    type PublicKey = CsgnKey;

    fn keygen(&self, rng: &mut dyn RngCore) -> Result<(CsgnKey, CsgnKey)> {
        let dist = self.effective_dist()?;
        Self::validate_dist(&dist, self.d, self.s)?;
        let mut subset: Vec<usize> = rand::seq::index::sample(rng, self.n, self.s)
            .into_iter()
            .collect();
        subset.sort_unstable();
        let key = CsgnKey {
            n: self.n,
            d: self.d,
            s: self.s,
            subset,
            zero_count: dist,
        };
        Ok((key.clone(), key))
    }

    fn encrypt(&self, key: &CsgnKey, m: &bool, rng: &mut dyn RngCore) -> Result<CsgnCiphertext> {
        let outside = key.complement();
        let mut bits = Gf2Vec::zero(self.n);
        for i in 0..self.n {
            bits.set(i, true);
        }
        let zero_indices: Vec<usize> = if *m {
            // all d zeros outside the subset
            rand::seq::index::sample(rng, outside.len(), self.d)
                .into_iter()
                .map(|i| outside[i])
                .collect()
        } else {
            let k = key.zero_count.sampler().sample(rng) as usize;
            let mut picks: Vec<usize> = rand::seq::index::sample(rng, key.subset.len(), k)
                .into_iter()
                .map(|i| key.subset[i])
                .collect();
            picks.extend(
                rand::seq::index::sample(rng, outside.len(), self.d - k)
                    .into_iter()
                    .map(|i| outside[i]),
            );
            picks
        };
        for i in zero_indices {
            bits.set(i, false);
        }
        Ok(CsgnCiphertext { bits })
    }

    fn decrypt(&self, key: &CsgnKey, c: &CsgnCiphertext) -> Result<bool> {
        if c.bits.len() != key.n {
            return Err(Error::DimensionMismatch {
                expected: key.n,
                got: c.bits.len(),
            });
        }
        Ok(key.subset.iter().all(|&i| c.bits.get(i)))
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

    fn is_symmetric(&self) -> bool {
        true
    }
}

impl MulHomomorphic for CsgnScheme {
    fn hom_mul(
        &self,
        _key: &CsgnKey,
        a: &CsgnCiphertext,
        b: &CsgnCiphertext,
        _rng: &mut dyn RngCore,
    ) -> Result<CsgnCiphertext> {
        multiply(a, b)
    }
}

impl RekeyableScheme for CsgnScheme {
    fn public_key_for(&self, sk: &CsgnKey, _rng: &mut dyn RngCore) -> Result<CsgnKey> {
        Ok(sk.clone())
    }
}

impl BitPlaintext for CsgnScheme {
    fn embed_bit(&self, bit: bool) -> bool {
        bit
    }

    fn extract_bit(&self, m: &bool) -> Option<bool> {
        Some(*m)
    }
}
