//! Four bridges out of the subset-product scheme, one per representation of
//! its decryption:
//!
//! 1. product of inner products with the encrypted standard basis vectors
//!    of the secret subset;
//! 2. product of encryptions of the complemented secret key bits over the
//!    zero positions (multiplicative homomorphism suffices);
//! 3. the Fermat normalization `1 - (1 + <c, sk>)^(p-1)` over a prime field
//!    with `p` larger than the subset size;
//! 4. a product of encrypted cyclic-shift matrices in compact first-line
//!    form, whose top-right entry is the subset equality test.

use rand::RngCore;

use crate::bridge_core::Bridge;
use crate::csgn::{CsgnCiphertext, CsgnKey, CsgnScheme};
use crate::scheme_core::{
    BitPlaintext, CircuitBuilder, HomomorphicScheme, MulHomomorphic, Ring, Wire,
};
use crate::{Error, Result};

fn ones_of(c: &CsgnCiphertext) -> Vec<usize> {
    c.bits.iter_ones().collect()
}

fn check_length(key_n: usize, c: &CsgnCiphertext) -> Result<()> {
    if c.bits.len() != key_n {
        return Err(Error::DimensionMismatch {
            expected: key_n,
            got: c.bits.len(),
        });
    }
    Ok(())
}

/// Bridge 1: `f(bk, c) = prod_i sum_{c[j]=1} e_i[j]` with the basis vectors
/// of the secret subset encrypted entrywise.
pub struct CsgnBridge1<H> {
    source: CsgnScheme,
    target: H,
}

impl<H: HomomorphicScheme + BitPlaintext> CsgnBridge1<H> {
    pub fn new(source: CsgnScheme, target: H) -> Self {
        CsgnBridge1 { source, target }
    }
}

impl<H: HomomorphicScheme + BitPlaintext> Bridge for CsgnBridge1<H> {
    type Source = CsgnScheme;
    type TargetPlaintext = H::Plaintext;
    type TargetCiphertext = H::Ciphertext;
    type SecretKey2 = (CsgnKey, H::SecretKey);
    type PublicKey2 = (H::PublicKey, H::EvalKey);
    type BridgeKey = Vec<Vec<H::Ciphertext>>;

    fn source_scheme(&self) -> &CsgnScheme {
        &self.source
    }

    fn embed(&self, m: &bool) -> H::Plaintext {
        self.target.embed_bit(*m)
    }

    fn embed_inverse(&self, m: &H::Plaintext) -> Option<bool> {
        self.target.extract_bit(m)
    }

    fn keygen_tail(
        &self,
        key: &CsgnKey,
        _pk1: &CsgnKey,
        rng: &mut dyn RngCore,
    ) -> Result<(Self::SecretKey2, Self::PublicKey2, Self::BridgeKey)> {
        let (sk_h, pk_h, evk) = self.target.keygen_eval(rng)?;
        let n = key.n;
        let bk = key
            .subset
            .iter()
            .map(|&pos| {
                (0..n)
                    .map(|j| {
                        self.target
                            .encrypt(&pk_h, &self.target.embed_bit(j == pos), rng)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(((key.clone(), sk_h), (pk_h, evk), bk))
    }

    fn convert(
        &self,
        pk2: &Self::PublicKey2,
        bk: &Self::BridgeKey,
        c: &CsgnCiphertext,
        rng: &mut dyn RngCore,
    ) -> Result<H::Ciphertext> {
        check_length(self.source.n(), c)?;
        let n = self.source.n();
        let s = bk.len();
        let ones = ones_of(c);
        let mut b = CircuitBuilder::new(s * n);
        let mut factors = Vec::with_capacity(s);
        for i in 0..s {
            let wires: Vec<Wire> = ones.iter().map(|&j| i * n + j).collect();
            factors.push(b.reduce(wires, |b, x, y| b.add(x, y), |b| b.constant(0)));
        }
        let out = b.reduce(factors, |b, x, y| b.mul(x, y), |b| b.constant(1));
        let circuit = b.finish(vec![out])?;
        let inputs: Vec<H::Ciphertext> = bk.iter().flatten().cloned().collect();
        self.target.eval(&pk2.1, &circuit, &inputs, rng)
    }

    fn decrypt_target(&self, sk2: &Self::SecretKey2, c: &H::Ciphertext) -> Result<H::Plaintext> {
        self.target.decrypt(&sk2.1, c)
    }
}

/// Bridge 2: `f(bk, c) = prod_{c[i]=0} enc(1 - sk[i])`; the empty product
/// is a fresh encryption of 1. Needs only multiplicative homomorphism.
pub struct CsgnBridge2<H> {
    source: CsgnScheme,
    target: H,
    declared_bound: f64,
}

impl<H: MulHomomorphic + BitPlaintext> CsgnBridge2<H> {
    pub fn new(source: CsgnScheme, target: H) -> Self {
        CsgnBridge2 {
            source,
            target,
            declared_bound: 0.0,
        }
    }

    /// Declares the conversion failure bound; exact targets keep zero,
    /// randomized-AND targets pay per multiplication.
    pub fn with_failure_bound(mut self, bound: f64) -> Self {
        self.declared_bound = bound;
        self
    }

    pub fn target_scheme(&self) -> &H {
        &self.target
    }
}

impl<H: MulHomomorphic + BitPlaintext> Bridge for CsgnBridge2<H> {
    type Source = CsgnScheme;
    type TargetPlaintext = H::Plaintext;
    type TargetCiphertext = H::Ciphertext;
    type SecretKey2 = (CsgnKey, H::SecretKey);
    type PublicKey2 = H::PublicKey;
    type BridgeKey = Vec<H::Ciphertext>;

    fn source_scheme(&self) -> &CsgnScheme {
        &self.source
    }

    fn embed(&self, m: &bool) -> H::Plaintext {
        self.target.embed_bit(*m)
    }

    fn embed_inverse(&self, m: &H::Plaintext) -> Option<bool> {
        self.target.extract_bit(m)
    }

    fn keygen_tail(
        &self,
        key: &CsgnKey,
        _pk1: &CsgnKey,
        rng: &mut dyn RngCore,
    ) -> Result<(Self::SecretKey2, Self::PublicKey2, Self::BridgeKey)> {
        let (sk_h, pk_h) = self.target.keygen(rng)?;
        let char_vec = key.char_vec();
        let bk = (0..key.n)
            .map(|i| {
                self.target
                    .encrypt(&pk_h, &self.target.embed_bit(!char_vec.get(i)), rng)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(((key.clone(), sk_h), pk_h, bk))
    }

    fn convert(
        &self,
        pk2: &H::PublicKey,
        bk: &Self::BridgeKey,
        c: &CsgnCiphertext,
        rng: &mut dyn RngCore,
    ) -> Result<H::Ciphertext> {
        check_length(self.source.n(), c)?;
        let zeros: Vec<usize> = (0..c.bits.len()).filter(|&i| !c.bits.get(i)).collect();
        let Some((&first, rest)) = zeros.split_first() else {
            return self.target.encrypt(pk2, &self.target.embed_bit(true), rng);
        };
        let mut acc = bk[first].clone();
        for &i in rest {
            acc = self.target.hom_mul(pk2, &acc, &bk[i], rng)?;
        }
        Ok(acc)
    }

    fn decrypt_target(&self, sk2: &Self::SecretKey2, c: &H::Ciphertext) -> Result<H::Plaintext> {
        self.target.decrypt(&sk2.1, c)
    }

    fn failure_bound(&self) -> f64 {
        self.declared_bound
    }
}

/// Bridge 3: `f(bk, c) = enc(1) - (enc(1) + sum_{c[i]=1} enc(sk[i]))^(p-1)`
/// where the in-subset key entries carry a composition of `p - 1`.
pub struct CsgnBridge3<H> {
    source: CsgnScheme,
    target: H,
}

impl<H: HomomorphicScheme + BitPlaintext> CsgnBridge3<H> {
    /// The plaintext characteristic must exceed the subset size so the
    /// inner sum can reach `p - 1` exactly on full overlap.
    pub fn new(source: CsgnScheme, target: H) -> Result<Self> {
        let p = target.plaintext_ring().characteristic();
        if p <= source.s() as u64 {
            return Err(Error::InvalidParameter(format!(
                "plaintext characteristic {p} must exceed the subset size {}",
                source.s()
            )));
        }
        Ok(CsgnBridge3 { source, target })
    }

    /// Key entry for subset rank `rank` (zero-based): all ones except the
    /// last, which tops the composition up to `p - 1`.
    fn composition_entry(&self, rank: usize) -> u64 {
        let p = self.target.plaintext_ring().characteristic();
        let s = self.source.s() as u64;
        if (rank as u64) < s - 1 {
            1
        } else {
            p - s
        }
    }
}

impl<H: HomomorphicScheme + BitPlaintext> Bridge for CsgnBridge3<H> {
    type Source = CsgnScheme;
    type TargetPlaintext = H::Plaintext;
    type TargetCiphertext = H::Ciphertext;
    type SecretKey2 = (CsgnKey, H::SecretKey);
    type PublicKey2 = (H::PublicKey, H::EvalKey);
    type BridgeKey = Vec<H::Ciphertext>;

    fn source_scheme(&self) -> &CsgnScheme {
        &self.source
    }

    fn embed(&self, m: &bool) -> H::Plaintext {
        self.target.embed_bit(*m)
    }

    fn embed_inverse(&self, m: &H::Plaintext) -> Option<bool> {
        self.target.extract_bit(m)
    }

    fn keygen_tail(
        &self,
        key: &CsgnKey,
        _pk1: &CsgnKey,
        rng: &mut dyn RngCore,
    ) -> Result<(Self::SecretKey2, Self::PublicKey2, Self::BridgeKey)> {
        let (sk_h, pk_h, evk) = self.target.keygen_eval(rng)?;
        let ring = self.target.plaintext_ring();
        let mut values = vec![ring.zero(); key.n];
        for (rank, &pos) in key.subset.iter().enumerate() {
            values[pos] = ring.lift(self.composition_entry(rank));
        }
        let bk = values
            .into_iter()
            .map(|v| self.target.encrypt(&pk_h, &v, rng))
            .collect::<Result<Vec<_>>>()?;
        Ok(((key.clone(), sk_h), (pk_h, evk), bk))
    }

    fn convert(
        &self,
        pk2: &Self::PublicKey2,
        bk: &Self::BridgeKey,
        c: &CsgnCiphertext,
        rng: &mut dyn RngCore,
    ) -> Result<H::Ciphertext> {
        check_length(self.source.n(), c)?;
        let ones = ones_of(c);
        let p = self.target.plaintext_ring().characteristic();
        let mut b = CircuitBuilder::new(2 + ones.len());
        let mut summands: Vec<Wire> = vec![b.input(1)];
        summands.extend(ones.iter().enumerate().map(|(k, _)| 2 + k));
        let sum = b.reduce(summands, |b, x, y| b.add(x, y), |b| b.constant(0));
        let power = b.pow(sum, p - 1);
        let fresh_one = b.input(0);
        let out = b.sub(fresh_one, power);
        let circuit = b.finish(vec![out])?;
        let one = self.target.plaintext_ring().one();
        let mut inputs = vec![
            self.target.encrypt(&pk2.0, &one, rng)?,
            self.target.encrypt(&pk2.0, &one, rng)?,
        ];
        inputs.extend(ones.iter().map(|&i| bk[i].clone()));
        self.target.eval(&pk2.1, &circuit, &inputs, rng)
    }

    fn decrypt_target(&self, sk2: &Self::SecretKey2, c: &H::Ciphertext) -> Result<H::Plaintext> {
        self.target.decrypt(&sk2.1, c)
    }
}

/// Bridge 4: encrypted cyclic-shift matrices over `Z_(s+1)`, multiplied as
/// cyclic convolutions of their compact first-line form; the slot at index
/// `s` of the final line is the equality test.
pub struct CsgnBridge4<H> {
    source: CsgnScheme,
    target: H,
}

impl<H: HomomorphicScheme + BitPlaintext> CsgnBridge4<H> {
    /// The convolution circuit is boolean arithmetic, so the plaintext ring
    /// must have characteristic two.
    pub fn new(source: CsgnScheme, target: H) -> Result<Self> {
        if target.plaintext_ring().characteristic() != 2 {
            return Err(Error::InvalidParameter(
                "shift-matrix products need a characteristic-two plaintext".into(),
            ));
        }
        Ok(CsgnBridge4 { source, target })
    }

    /// Group order: subset size plus one.
    pub fn order(&self) -> usize {
        self.source.s() + 1
    }
}

/// Cyclic convolution of two wire groups of length `m`.
fn convolve(b: &mut CircuitBuilder, lhs: &[Wire], rhs: &[Wire]) -> Vec<Wire> {
    let m = lhs.len();
    (0..m)
        .map(|k| {
            let mut terms = Vec::with_capacity(m);
            for (i, &l) in lhs.iter().enumerate() {
                let r = rhs[(k + m - i) % m];
                terms.push(b.mul(l, r));
            }
            b.reduce(terms, |b, x, y| b.add(x, y), |b| b.constant(0))
        })
        .collect()
}

impl<H: HomomorphicScheme + BitPlaintext> Bridge for CsgnBridge4<H> {
    type Source = CsgnScheme;
    type TargetPlaintext = H::Plaintext;
    type TargetCiphertext = H::Ciphertext;
    type SecretKey2 = (CsgnKey, H::SecretKey);
    type PublicKey2 = (H::PublicKey, H::EvalKey);
    type BridgeKey = Vec<Vec<H::Ciphertext>>;

    fn source_scheme(&self) -> &CsgnScheme {
        &self.source
    }

    fn embed(&self, m: &bool) -> H::Plaintext {
        self.target.embed_bit(*m)
    }

    fn embed_inverse(&self, m: &H::Plaintext) -> Option<bool> {
        self.target.extract_bit(m)
    }

    fn keygen_tail(
        &self,
        key: &CsgnKey,
        _pk1: &CsgnKey,
        rng: &mut dyn RngCore,
    ) -> Result<(Self::SecretKey2, Self::PublicKey2, Self::BridgeKey)> {
        let (sk_h, pk_h, evk) = self.target.keygen_eval(rng)?;
        let m = self.order();
        let char_vec = key.char_vec();
        let bk = (0..key.n)
            .map(|i| {
                // shift by one for subset members, identity otherwise
                let shift = usize::from(char_vec.get(i));
                (0..m)
                    .map(|j| {
                        self.target
                            .encrypt(&pk_h, &self.target.embed_bit(j == shift), rng)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(((key.clone(), sk_h), (pk_h, evk), bk))
    }

    fn convert(
        &self,
        pk2: &Self::PublicKey2,
        bk: &Self::BridgeKey,
        c: &CsgnCiphertext,
        rng: &mut dyn RngCore,
    ) -> Result<H::Ciphertext> {
        check_length(self.source.n(), c)?;
        let m = self.order();
        let ones = ones_of(c);
        let mut b = CircuitBuilder::new(ones.len() * m);
        let mut factors: Vec<Vec<Wire>> = (0..ones.len())
            .map(|k| (k * m..(k + 1) * m).collect())
            .collect();
        if factors.is_empty() {
            // empty product: the identity element
            let identity: Vec<Wire> = (0..m).map(|j| b.constant(u64::from(j == 0))).collect();
            factors.push(identity);
        }
        while factors.len() > 1 {
            let mut next = Vec::with_capacity(factors.len().div_ceil(2));
            for pair in factors.chunks(2) {
                next.push(if pair.len() == 2 {
                    convolve(&mut b, &pair[0], &pair[1])
                } else {
                    pair[0].clone()
                });
            }
            factors = next;
        }
        let out = factors[0][self.source.s()];
        let circuit = b.finish(vec![out])?;
        let inputs: Vec<H::Ciphertext> = ones.iter().flat_map(|&i| bk[i].iter().cloned()).collect();
        self.target.eval(&pk2.1, &circuit, &inputs, rng)
    }

    fn decrypt_target(&self, sk2: &Self::SecretKey2, c: &H::Ciphertext) -> Result<H::Plaintext> {
        self.target.decrypt(&sk2.1, c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bridge_core::check_bridge_correctness;
    use crate::mockfhe::MockFhe;
    use crate::numtheory::Gf2Vec;
    use crate::scheme_core::{eval_circuit_plain, Fp, Scheme, F2};
    use crate::syy::SyyScheme;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn small_source() -> CsgnScheme {
        CsgnScheme::new(32, 6, 8).unwrap()
    }

    fn artificial(bits: &[bool]) -> CsgnCiphertext {
        CsgnCiphertext {
            bits: Gf2Vec::from_bits(bits),
        }
    }

    #[test]
    fn bridge1_is_exact_over_the_mock_backend() {
        let bridge = CsgnBridge1::new(small_source(), MockFhe::unbounded(F2));
        let mut rng = ChaCha20Rng::seed_from_u64(111);
        let check = check_bridge_correctness(&bridge, 300, 100, &mut rng).unwrap();
        assert_eq!(check.failures, 0);
    }

    #[test]
    fn bridge1_matches_the_subset_product_on_arbitrary_vectors() {
        let source = small_source();
        let bridge = CsgnBridge1::new(source.clone(), MockFhe::unbounded(F2));
        let mut rng = ChaCha20Rng::seed_from_u64(112);
        let keys = bridge.keygen(&mut rng).unwrap();
        for _ in 0..200 {
            let bits: Vec<bool> = (0..32).map(|_| rng.gen()).collect();
            let c = artificial(&bits);
            let expected = source.decrypt(&keys.sk1, &c).unwrap();
            let out = bridge.convert(&keys.pk2, &keys.bk, &c, &mut rng).unwrap();
            assert_eq!(
                bridge.decrypt_target(&keys.sk2, &out).unwrap(),
                u64::from(expected)
            );
        }
    }

    #[test]
    fn bridge2_handles_the_empty_product_and_subset_zeros() {
        let source = small_source();
        let bridge = CsgnBridge2::new(source.clone(), MockFhe::unbounded(F2));
        let mut rng = ChaCha20Rng::seed_from_u64(113);
        let keys = bridge.keygen(&mut rng).unwrap();
        // all ones: empty product is an encryption of 1
        let all_ones = artificial(&[true; 32]);
        let out = bridge
            .convert(&keys.pk2, &keys.bk, &all_ones, &mut rng)
            .unwrap();
        assert_eq!(bridge.decrypt_target(&keys.sk2, &out).unwrap(), 1);
        // a zero at a subset position forces 0
        let mut bits = vec![true; 32];
        bits[keys.sk1.subset[2]] = false;
        let out = bridge
            .convert(&keys.pk2, &keys.bk, &artificial(&bits), &mut rng)
            .unwrap();
        assert_eq!(bridge.decrypt_target(&keys.sk2, &out).unwrap(), 0);
        // a zero outside the subset does not
        let outside = (0..32).find(|i| !keys.sk1.subset.contains(i)).unwrap();
        let mut bits = vec![true; 32];
        bits[outside] = false;
        let out = bridge
            .convert(&keys.pk2, &keys.bk, &artificial(&bits), &mut rng)
            .unwrap();
        assert_eq!(bridge.decrypt_target(&keys.sk2, &out).unwrap(), 1);
    }

    #[test]
    fn bridge2_is_exact_over_the_mock_backend() {
        let bridge = CsgnBridge2::new(small_source(), MockFhe::unbounded(F2));
        let mut rng = ChaCha20Rng::seed_from_u64(114);
        let check = check_bridge_correctness(&bridge, 300, 100, &mut rng).unwrap();
        assert_eq!(check.failures, 0);
    }

    #[test]
    fn bridge2_into_syy_stays_under_the_union_bound() {
        let source = CsgnScheme::new(32, 8, 8).unwrap();
        let ell = 8usize;
        let bound = (source.d() as f64 - 1.0) * 2f64.powi(1 - ell as i32);
        let bridge =
            CsgnBridge2::new(source, SyyScheme::new(16, ell).unwrap()).with_failure_bound(bound);
        let mut rng = ChaCha20Rng::seed_from_u64(115);
        let check = check_bridge_correctness(&bridge, 400, 100, &mut rng).unwrap();
        assert!(
            check.failure_rate <= bound + 3.0 * (bound / 400f64).sqrt(),
            "rate {} above bound {bound}",
            check.failure_rate
        );
    }

    #[test]
    fn bridge3_rejects_small_characteristic() {
        let source = CsgnScheme::new(32, 6, 8).unwrap();
        assert!(CsgnBridge3::new(source, MockFhe::unbounded(Fp::new(7).unwrap())).is_err());
    }

    #[test]
    fn bridge3_fermat_cases_by_hand() {
        // s = 3, p = 5, composition (1, 1, 2)
        let source = CsgnScheme::new(8, 2, 3).unwrap();
        let bridge =
            CsgnBridge3::new(source.clone(), MockFhe::unbounded(Fp::new(5).unwrap())).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(116);
        let keys = bridge.keygen(&mut rng).unwrap();
        assert_eq!(bridge.composition_entry(0), 1);
        assert_eq!(bridge.composition_entry(2), 2);
        // full overlap: inner sum is p - 1, the power term vanishes
        let all_ones = artificial(&[true; 8]);
        let out = bridge
            .convert(&keys.pk2, &keys.bk, &all_ones, &mut rng)
            .unwrap();
        assert_eq!(bridge.decrypt_target(&keys.sk2, &out).unwrap(), 1);
        // drop one subset position: Fermat sends the power to 1
        for victim in 0..3 {
            let mut bits = vec![true; 8];
            bits[keys.sk1.subset[victim]] = false;
            let out = bridge
                .convert(&keys.pk2, &keys.bk, &artificial(&bits), &mut rng)
                .unwrap();
            assert_eq!(bridge.decrypt_target(&keys.sk2, &out).unwrap(), 0);
        }
    }

    #[test]
    fn bridge3_is_exact_over_the_mock_backend() {
        let source = CsgnScheme::new(8, 2, 3).unwrap();
        let bridge = CsgnBridge3::new(source, MockFhe::unbounded(Fp::new(5).unwrap())).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(117);
        let check = check_bridge_correctness(&bridge, 300, 100, &mut rng).unwrap();
        assert_eq!(check.failures, 0);
    }

    #[test]
    fn cyclic_first_line_form_reconstructs_matrix_products() {
        // expand(v)[i][j] = v[(j - i) mod m]; products of such matrices
        // over F_2 must match the convolution of their first lines
        fn expand(v: &[bool]) -> Vec<Vec<bool>> {
            let m = v.len();
            (0..m)
                .map(|i| (0..m).map(|j| v[(j + m - i) % m]).collect())
                .collect()
        }
        fn mat_mul(a: &[Vec<bool>], b: &[Vec<bool>]) -> Vec<Vec<bool>> {
            let m = a.len();
            (0..m)
                .map(|i| {
                    (0..m)
                        .map(|j| (0..m).fold(false, |acc, k| acc ^ (a[i][k] & b[k][j])))
                        .collect()
                })
                .collect()
        }
        fn conv(a: &[bool], b: &[bool]) -> Vec<bool> {
            let m = a.len();
            (0..m)
                .map(|k| (0..m).fold(false, |acc, i| acc ^ (a[i] & b[(k + m - i) % m])))
                .collect()
        }
        for m in 2..=6usize {
            for sa in 0..m {
                for sb in 0..m {
                    let mut va = vec![false; m];
                    va[sa] = true;
                    let mut vb = vec![false; m];
                    vb[sb] = true;
                    assert_eq!(expand(&conv(&va, &vb)), mat_mul(&expand(&va), &expand(&vb)));
                    // basis convolution is addition in the cyclic group
                    let mut expected = vec![false; m];
                    expected[(sa + sb) % m] = true;
                    assert_eq!(conv(&va, &vb), expected);
                }
            }
        }
    }

    #[test]
    fn convolution_circuit_matches_the_plain_convolution() {
        let mut rng = ChaCha20Rng::seed_from_u64(118);
        for m in 1..=5usize {
            for _ in 0..20 {
                let a: Vec<bool> = (0..m).map(|_| rng.gen()).collect();
                let c: Vec<bool> = (0..m).map(|_| rng.gen()).collect();
                let mut b = CircuitBuilder::new(2 * m);
                let lhs: Vec<Wire> = (0..m).collect();
                let rhs: Vec<Wire> = (m..2 * m).collect();
                let out = convolve(&mut b, &lhs, &rhs);
                let circuit = b.finish(out).unwrap();
                let inputs: Vec<u64> = a.iter().chain(&c).map(|&bit| u64::from(bit)).collect();
                let got = eval_circuit_plain(&circuit, &F2, &inputs).unwrap();
                let expected: Vec<u64> = (0..m)
                    .map(|k| {
                        u64::from((0..m).fold(false, |acc, i| acc ^ (a[i] & c[(k + m - i) % m])))
                    })
                    .collect();
                assert_eq!(got, expected);
            }
        }
    }

    #[test]
    fn bridge4_exhaustive_at_tiny_parameters() {
        // s = 2, n = 4: check against decryption on all 16 vectors
        let source = CsgnScheme::new(4, 1, 2).unwrap();
        let bridge = CsgnBridge4::new(source.clone(), MockFhe::unbounded(F2)).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(119);
        let keys = bridge.keygen(&mut rng).unwrap();
        for code in 0..16u8 {
            let bits: Vec<bool> = (0..4).map(|i| code >> i & 1 == 1).collect();
            let c = artificial(&bits);
            let expected = source.decrypt(&keys.sk1, &c).unwrap();
            let out = bridge.convert(&keys.pk2, &keys.bk, &c, &mut rng).unwrap();
            assert_eq!(
                bridge.decrypt_target(&keys.sk2, &out).unwrap(),
                u64::from(expected),
                "vector {bits:?}"
            );
        }
    }

    #[test]
    fn bridge4_is_exact_over_the_mock_backend() {
        let source = CsgnScheme::new(16, 3, 4).unwrap();
        let bridge = CsgnBridge4::new(source, MockFhe::unbounded(F2)).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(120);
        let check = check_bridge_correctness(&bridge, 300, 100, &mut rng).unwrap();
        assert_eq!(check.failures, 0);
    }

    #[test]
    fn bridge4_rejects_odd_characteristic() {
        let source = CsgnScheme::new(16, 3, 4).unwrap();
        assert!(CsgnBridge4::new(source, MockFhe::unbounded(Fp::new(5).unwrap())).is_err());
    }

    #[test]
    fn embeddings_invert_exactly_and_reject_off_image_values() {
        let source = CsgnScheme::new(8, 2, 3).unwrap();
        let b3 = CsgnBridge3::new(source.clone(), MockFhe::unbounded(Fp::new(5).unwrap())).unwrap();
        for m in [false, true] {
            assert_eq!(b3.embed_inverse(&b3.embed(&m)), Some(m));
        }
        for off_image in 2..5u64 {
            assert_eq!(b3.embed_inverse(&off_image), None);
        }
        let b1 = CsgnBridge1::new(source, MockFhe::unbounded(F2));
        for m in [false, true] {
            assert_eq!(b1.embed_inverse(&b1.embed(&m)), Some(m));
        }
    }
}
