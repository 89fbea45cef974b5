//! The generic recipe for building bridges out of homomorphic evaluation.
//!
//! Express the source scheme's decryption (composed with the plaintext
//! embedding) as a boolean circuit over the secret key bits and ciphertext
//! bits. The bridge key is the vector of target-scheme encryptions of the
//! secret key bits; conversion injects the ciphertext bits as trivial
//! encryptions and evaluates the rewritten circuit homomorphically, which
//! hands back a target encryption of the embedded plaintext.
//!
//! The rewrite maps `XOR(x, y)` to `2(x + y) - (x + y)^2` and `AND` to
//! plain multiplication, turning a boolean circuit into a ring circuit that
//! agrees with it on 0/1 inputs over any plaintext ring.

mod csgn_bridges;

pub use csgn_bridges::{CsgnBridge1, CsgnBridge2, CsgnBridge3, CsgnBridge4};

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::RngCore;

use crate::bridge_core::Bridge;
use crate::csgn::CsgnScheme;
use crate::gm::{GmCiphertext, GmScheme, GmSecretKey};
use crate::numtheory::{jacobi, Modulus};
use crate::scheme_core::{
    eval_circuit_plain, BitPlaintext, Circuit, CircuitBuilder, Gate, HomomorphicScheme,
    ProductScheme, Ring, Scheme, Wire, F2,
};
use crate::{Error, Result};

/// Bit-level views of keys and ciphertexts, the raw material for expressing
/// decryption as a boolean circuit.
pub trait BitRepresentable: Scheme {
    fn secret_key_len(&self) -> usize;
    fn secret_key_bits(&self, sk: &Self::SecretKey) -> Vec<bool>;
    fn ciphertext_len(&self) -> usize;
    fn ciphertext_bits(&self, c: &Self::Ciphertext) -> Vec<bool>;
}

impl BitRepresentable for CsgnScheme {
    fn secret_key_len(&self) -> usize {
        self.n()
    }

    fn secret_key_bits(&self, sk: &Self::SecretKey) -> Vec<bool> {
        sk.char_vec().to_bits()
    }

    fn ciphertext_len(&self) -> usize {
        self.n()
    }

    fn ciphertext_bits(&self, c: &Self::Ciphertext) -> Vec<bool> {
        c.bits.to_bits()
    }
}

impl BitRepresentable for GmScheme {
    /// The table-based circuit bakes the key into its gates, so no secret
    /// key bits travel in the bridge key.
    fn secret_key_len(&self) -> usize {
        0
    }

    fn secret_key_bits(&self, _sk: &GmSecretKey) -> Vec<bool> {
        Vec::new()
    }

    fn ciphertext_len(&self) -> usize {
        self.bits() as usize
    }

    fn ciphertext_bits(&self, c: &GmCiphertext) -> Vec<bool> {
        (0..self.bits()).map(|i| c.value.bit(i)).collect()
    }
}

/// A boolean circuit computing the embedded decryption
/// `(sk bits, ct bits) -> plaintext bits`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecCircuit {
    sk_bits: usize,
    ct_bits: usize,
    circuit: Circuit,
}

impl DecCircuit {
    pub fn new(sk_bits: usize, ct_bits: usize, circuit: Circuit) -> Result<Self> {
        if circuit.inputs() != sk_bits + ct_bits {
            return Err(Error::Circuit(format!(
                "decryption circuit takes {} inputs, expected {} + {}",
                circuit.inputs(),
                sk_bits,
                ct_bits
            )));
        }
        if !circuit.is_boolean() {
            return Err(Error::Circuit("decryption circuit must be boolean".into()));
        }
        Ok(DecCircuit {
            sk_bits,
            ct_bits,
            circuit,
        })
    }

    pub fn sk_bits(&self) -> usize {
        self.sk_bits
    }

    pub fn ct_bits(&self) -> usize {
        self.ct_bits
    }

    pub fn output_bits(&self) -> usize {
        self.circuit.outputs().len()
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    /// Reference boolean evaluation.
    pub fn eval_plain(&self, sk_bits: &[bool], ct_bits: &[bool]) -> Result<Vec<bool>> {
        let inputs: Vec<u64> = sk_bits
            .iter()
            .chain(ct_bits)
            .map(|&b| u64::from(b))
            .collect();
        Ok(eval_circuit_plain(&self.circuit, &F2, &inputs)?
            .into_iter()
            .map(|v| v == 1)
            .collect())
    }
}

/// Rewrites a boolean circuit into ring gates: `XOR(x, y)` becomes
/// `2(x + y) - (x + y)^2`, `AND` becomes multiplication, constants pass
/// through. The result agrees with the boolean circuit on 0/1 inputs over
/// every ring.
pub fn rewrite_boolean_to_ring(circuit: &Circuit) -> Result<Circuit> {
    let mut b = CircuitBuilder::new(circuit.inputs());
    let mut map: Vec<Wire> = (0..circuit.inputs()).collect();
    for gate in circuit.gates() {
        let wire = match *gate {
            Gate::Xor(x, y) => {
                let s = b.add(map[x], map[y]);
                let doubled = b.add(s, s);
                let squared = b.mul(s, s);
                b.sub(doubled, squared)
            }
            Gate::And(x, y) => b.mul(map[x], map[y]),
            Gate::Const(v) if v <= 1 => b.constant(v),
            ref other => return Err(Error::UnsupportedGate { kind: other.kind() }),
        };
        map.push(wire);
    }
    let outputs = circuit.outputs().iter().map(|&o| map[o]).collect();
    b.finish(outputs)
}

/// Appends the equality-test normalization `x -> x^(p-1)` to every output
/// when the ring has odd characteristic; over characteristic two the test
/// is the identity on 0/1 values and nothing is added.
fn normalize_outputs(circuit: Circuit, characteristic: u64) -> Result<Circuit> {
    if characteristic == 2 {
        return Ok(circuit);
    }
    let mut gates = circuit.gates().to_vec();
    let mut outputs = Vec::with_capacity(circuit.outputs().len());
    for &o in circuit.outputs() {
        gates.push(Gate::Pow(o, characteristic - 1));
        outputs.push(circuit.inputs() + gates.len() - 1);
    }
    Circuit::new(circuit.inputs(), gates, outputs)
}

/// The generic decryption circuit of the subset-product scheme, in the
/// secret key bits and ciphertext bits:
/// `prod_i (1 - sk_i * (1 - c_i))`.
pub fn csgn_dec_circuit(n: usize) -> DecCircuit {
    let mut b = CircuitBuilder::new(2 * n);
    let one = b.constant(1);
    let mut terms = Vec::with_capacity(n);
    for i in 0..n {
        let sk_bit = i;
        let ct_bit = n + i;
        let not_c = b.xor(ct_bit, one);
        let hit = b.and(sk_bit, not_c);
        terms.push(b.xor(hit, one));
    }
    let out = b.reduce(terms, |b, x, y| b.and(x, y), |b| b.constant(1));
    let circuit = b.finish(vec![out]).expect("valid wiring");
    DecCircuit::new(n, n, circuit).expect("input widths match")
}

/// A truth-table decryption circuit for GM at tiny moduli.
///
/// The key is baked into the gate structure: one minterm per residue that
/// decrypts to 1, XORed together (minterms are mutually exclusive). No
/// Jacobi symbol is computed inside the circuit, and no secret key bits are
/// consumed. Only sensible for toy moduli; the modulus is capped at 2^16.
pub fn gm_table_dec_circuit(scheme: &GmScheme, sk: &GmSecretKey) -> Result<DecCircuit> {
    let width = scheme.bits() as usize;
    let n = &sk.p * &sk.q;
    let cap = num_bigint::BigUint::from(1u64) << 16;
    if n > cap {
        return Err(Error::InvalidParameter(
            "table circuits only make sense for tiny moduli".into(),
        ));
    }
    if n.bits() > width as u64 {
        return Err(Error::InvalidParameter(format!(
            "modulus needs {} bits but the ciphertext width is {width}",
            n.bits()
        )));
    }
    let modulus = Modulus::new(n.clone())?;
    let p = Modulus::new(sk.p.clone())?;
    let n_u64 = n.to_u64().expect("capped above");
    let mut b = CircuitBuilder::new(width);
    let one = b.constant(1);
    let mut minterms = Vec::new();
    for v in 0..n_u64 {
        let value = num_bigint::BigUint::from(v);
        let is_one = !value.is_zero()
            && value.gcd(&n).is_one()
            && jacobi(&value, &modulus) == 1
            && jacobi(&value, &p) == -1;
        if !is_one {
            continue;
        }
        let literals: Vec<Wire> = (0..width)
            .map(|bit| {
                let input = b.input(bit);
                if v >> bit & 1 == 1 {
                    input
                } else {
                    b.xor(input, one)
                }
            })
            .collect();
        minterms.push(b.reduce(literals, |b, x, y| b.and(x, y), |b| b.constant(1)));
    }
    let out = b.reduce(minterms, |b, x, y| b.xor(x, y), |b| b.constant(0));
    let circuit = b.finish(vec![out])?;
    DecCircuit::new(0, width, circuit)
}

/// Knobs for the compiled bridges.
#[derive(Debug, Clone, Copy)]
pub struct GentryConfig {
    /// Inject ciphertext bits as fresh encryptions instead of trivial ones.
    pub fresh_input_encryptions: bool,
    /// Append the `x^(p-1)` equality-test normalization over odd
    /// characteristic.
    pub normalize_output: bool,
}

impl Default for GentryConfig {
    fn default() -> Self {
        GentryConfig {
            fresh_input_encryptions: false,
            normalize_output: true,
        }
    }
}

/// A bridge produced by [`compile_gentry_bridge`].
pub struct GentryBridge<S, H, F> {
    source: S,
    target: H,
    circuit_for: F,
    config: GentryConfig,
}

impl<S: Clone, H: Clone, F: Clone> Clone for GentryBridge<S, H, F> {
    fn clone(&self) -> Self {
        GentryBridge {
            source: self.source.clone(),
            target: self.target.clone(),
            circuit_for: self.circuit_for.clone(),
            config: self.config,
        }
    }
}

/// Bridge key: encryptions of the secret key bits plus the circuits the
/// conversion evaluates. The circuit travels here because it may depend on
/// the source key (the GM table circuit does).
pub struct GentryBridgeKey<H: HomomorphicScheme> {
    pub sk_bit_encs: Vec<H::Ciphertext>,
    pub dec_circuit: DecCircuit,
    pub ring_circuit: Circuit,
}

impl<H: HomomorphicScheme> Clone for GentryBridgeKey<H> {
    fn clone(&self) -> Self {
        GentryBridgeKey {
            sk_bit_encs: self.sk_bit_encs.clone(),
            dec_circuit: self.dec_circuit.clone(),
            ring_circuit: self.ring_circuit.clone(),
        }
    }
}

/// Compiles the recipe for a single-output decryption circuit.
///
/// `circuit_for` builds the decryption circuit from the freshly generated
/// source secret key; key-independent schemes simply ignore the argument.
pub fn compile_gentry_bridge<S, H, F>(
    source: S,
    target: H,
    circuit_for: F,
    config: GentryConfig,
) -> GentryBridge<S, H, F>
where
    S: BitRepresentable + Scheme<Plaintext = bool>,
    H: HomomorphicScheme + BitPlaintext,
    F: Fn(&S::SecretKey) -> Result<DecCircuit>,
{
    GentryBridge {
        source,
        target,
        circuit_for,
        config,
    }
}

impl<S, H, F> GentryBridge<S, H, F>
where
    S: BitRepresentable + Scheme<Plaintext = bool>,
    H: HomomorphicScheme + BitPlaintext,
    F: Fn(&S::SecretKey) -> Result<DecCircuit>,
{
    pub fn target_scheme(&self) -> &H {
        &self.target
    }

    fn encode_inputs(
        &self,
        pk: &H::PublicKey,
        bits: &[bool],
        rng: &mut dyn RngCore,
    ) -> Result<Vec<H::Ciphertext>> {
        bits.iter()
            .map(|&bit| {
                let m = self.target.embed_bit(bit);
                if self.config.fresh_input_encryptions {
                    self.target.encrypt(pk, &m, rng)
                } else {
                    self.target.encrypt_trivial(pk, &m)
                }
            })
            .collect()
    }
}

impl<S, H, F> Bridge for GentryBridge<S, H, F>
where
    S: BitRepresentable + Scheme<Plaintext = bool>,
    H: HomomorphicScheme + BitPlaintext,
    F: Fn(&S::SecretKey) -> Result<DecCircuit>,
{
    type Source = S;
    type TargetPlaintext = H::Plaintext;
    type TargetCiphertext = H::Ciphertext;
    type SecretKey2 = (S::SecretKey, H::SecretKey);
    type PublicKey2 = (H::PublicKey, H::EvalKey);
    type BridgeKey = GentryBridgeKey<H>;

    fn source_scheme(&self) -> &S {
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
        sk1: &S::SecretKey,
        _pk1: &S::PublicKey,
        rng: &mut dyn RngCore,
    ) -> Result<(Self::SecretKey2, Self::PublicKey2, Self::BridgeKey)> {
        let (sk_h, pk_h, evk) = self.target.keygen_eval(rng)?;
        let dec_circuit = (self.circuit_for)(sk1)?;
        if dec_circuit.sk_bits() != self.source.secret_key_len()
            || dec_circuit.ct_bits() != self.source.ciphertext_len()
        {
            return Err(Error::Circuit(format!(
                "decryption circuit shape ({}, {}) does not match the scheme ({}, {})",
                dec_circuit.sk_bits(),
                dec_circuit.ct_bits(),
                self.source.secret_key_len(),
                self.source.ciphertext_len()
            )));
        }
        if dec_circuit.output_bits() != 1 {
            return Err(Error::Circuit(
                "single-target compilation needs a single-output circuit".into(),
            ));
        }
        let ring_circuit = normalize_outputs(
            rewrite_boolean_to_ring(dec_circuit.circuit())?,
            self.target.plaintext_ring().characteristic(),
        )?;
        let sk_bit_encs = self
            .source
            .secret_key_bits(sk1)
            .into_iter()
            .map(|bit| self.target.encrypt(&pk_h, &self.target.embed_bit(bit), rng))
            .collect::<Result<Vec<_>>>()?;
        Ok((
            (sk1.clone(), sk_h),
            (pk_h, evk),
            GentryBridgeKey {
                sk_bit_encs,
                dec_circuit,
                ring_circuit,
            },
        ))
    }

    fn convert(
        &self,
        pk2: &Self::PublicKey2,
        bk: &Self::BridgeKey,
        c: &S::Ciphertext,
        rng: &mut dyn RngCore,
    ) -> Result<H::Ciphertext> {
        let ct_bits = self.source.ciphertext_bits(c);
        if ct_bits.len() != bk.dec_circuit.ct_bits() {
            return Err(Error::DimensionMismatch {
                expected: bk.dec_circuit.ct_bits(),
                got: ct_bits.len(),
            });
        }
        let mut inputs = bk.sk_bit_encs.clone();
        inputs.extend(self.encode_inputs(&pk2.0, &ct_bits, rng)?);
        self.target.eval(&pk2.1, &bk.ring_circuit, &inputs, rng)
    }

    fn decrypt_target(&self, sk2: &Self::SecretKey2, c: &H::Ciphertext) -> Result<H::Plaintext> {
        self.target.decrypt(&sk2.1, c)
    }
}

/// A bridge into the product of `p` copies of the target, one homomorphic
/// evaluation per output bit of the decryption circuit.
pub struct HpGentryBridge<S, H: HomomorphicScheme + Clone> {
    source: S,
    target: H,
    product: ProductScheme<H>,
    dec_circuit: DecCircuit,
    config: GentryConfig,
}

/// Per-component bridge keys: the secret key bits encrypted under every
/// component public key, plus the per-output ring circuits.
pub struct HpBridgeKey<H: HomomorphicScheme> {
    pub per_component: Vec<Vec<H::Ciphertext>>,
    pub ring_circuits: Vec<Circuit>,
}

impl<H: HomomorphicScheme> Clone for HpBridgeKey<H> {
    fn clone(&self) -> Self {
        HpBridgeKey {
            per_component: self.per_component.clone(),
            ring_circuits: self.ring_circuits.clone(),
        }
    }
}

/// Compiles the product variant: the decryption circuit's `p` outputs each
/// get their own target component.
pub fn compile_hp_variant<S, H>(
    source: S,
    target: H,
    dec_circuit: DecCircuit,
    config: GentryConfig,
) -> Result<HpGentryBridge<S, H>>
where
    S: BitRepresentable,
    H: HomomorphicScheme + BitPlaintext + Clone,
{
    if dec_circuit.sk_bits() != source.secret_key_len()
        || dec_circuit.ct_bits() != source.ciphertext_len()
    {
        return Err(Error::Circuit(
            "decryption circuit shape does not match the scheme".into(),
        ));
    }
    if dec_circuit.output_bits() != source.plaintext_bits() {
        return Err(Error::Circuit(format!(
            "{} circuit outputs cannot encode {} plaintext bits",
            dec_circuit.output_bits(),
            source.plaintext_bits()
        )));
    }
    let product = ProductScheme::power(target.clone(), dec_circuit.output_bits())?;
    Ok(HpGentryBridge {
        source,
        target,
        product,
        dec_circuit,
        config,
    })
}

impl<S, H> HpGentryBridge<S, H>
where
    S: BitRepresentable,
    H: HomomorphicScheme + BitPlaintext + Clone,
{
    pub fn arity(&self) -> usize {
        self.product.arity()
    }
}

impl<S, H> Bridge for HpGentryBridge<S, H>
where
    S: BitRepresentable,
    H: HomomorphicScheme + BitPlaintext + Clone,
{
    type Source = S;
    type TargetPlaintext = Vec<H::Plaintext>;
    type TargetCiphertext = Vec<H::Ciphertext>;
    type SecretKey2 = (S::SecretKey, Vec<H::SecretKey>);
    type PublicKey2 = Vec<(H::PublicKey, H::EvalKey)>;
    type BridgeKey = HpBridgeKey<H>;

    fn source_scheme(&self) -> &S {
        &self.source
    }

    fn embed(&self, m: &S::Plaintext) -> Vec<H::Plaintext> {
        self.source
            .encode_plaintext(m)
            .into_iter()
            .map(|bit| self.target.embed_bit(bit))
            .collect()
    }

    fn embed_inverse(&self, m: &Vec<H::Plaintext>) -> Option<S::Plaintext> {
        let bits = m
            .iter()
            .map(|v| self.target.extract_bit(v))
            .collect::<Option<Vec<bool>>>()?;
        self.source.decode_plaintext(&bits)
    }

    fn keygen_tail(
        &self,
        sk1: &S::SecretKey,
        _pk1: &S::PublicKey,
        rng: &mut dyn RngCore,
    ) -> Result<(Self::SecretKey2, Self::PublicKey2, Self::BridgeKey)> {
        let p = self.dec_circuit.output_bits();
        let sk_bits = self.source.secret_key_bits(sk1);
        let mut sks = Vec::with_capacity(p);
        let mut pks = Vec::with_capacity(p);
        let mut per_component = Vec::with_capacity(p);
        let mut ring_circuits = Vec::with_capacity(p);
        for i in 0..p {
            let (sk_h, pk_h, evk) = self.target.keygen_eval(rng)?;
            let encs = sk_bits
                .iter()
                .map(|&bit| self.target.encrypt(&pk_h, &self.target.embed_bit(bit), rng))
                .collect::<Result<Vec<_>>>()?;
            let single = self.dec_circuit.circuit().with_single_output(i)?;
            ring_circuits.push(normalize_outputs(
                rewrite_boolean_to_ring(&single)?,
                self.target.plaintext_ring().characteristic(),
            )?);
            per_component.push(encs);
            sks.push(sk_h);
            pks.push((pk_h, evk));
        }
        Ok((
            (sk1.clone(), sks),
            pks,
            HpBridgeKey {
                per_component,
                ring_circuits,
            },
        ))
    }

    fn convert(
        &self,
        pk2: &Self::PublicKey2,
        bk: &Self::BridgeKey,
        c: &S::Ciphertext,
        rng: &mut dyn RngCore,
    ) -> Result<Vec<H::Ciphertext>> {
        let ct_bits = self.source.ciphertext_bits(c);
        let mut out = Vec::with_capacity(pk2.len());
        for ((pk_evk, encs), circuit) in pk2.iter().zip(&bk.per_component).zip(&bk.ring_circuits) {
            let mut inputs = encs.clone();
            for &bit in &ct_bits {
                let m = self.target.embed_bit(bit);
                inputs.push(if self.config.fresh_input_encryptions {
                    self.target.encrypt(&pk_evk.0, &m, rng)?
                } else {
                    self.target.encrypt_trivial(&pk_evk.0, &m)?
                });
            }
            out.push(self.target.eval(&pk_evk.1, circuit, &inputs, rng)?);
        }
        Ok(out)
    }

    fn decrypt_target(
        &self,
        sk2: &Self::SecretKey2,
        c: &Vec<H::Ciphertext>,
    ) -> Result<Vec<H::Plaintext>> {
        self.product.decrypt(&sk2.1, c)
    }
}
