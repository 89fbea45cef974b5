//! Built-in adversaries: negative controls, positive controls at toy
//! sizes, and the wrappers used by reduction-equality tests.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{Rng, RngCore};

use super::{Adversary, ChallengerView, TwoChallengeAdversary};
use crate::bridge_core::{Bridge, GraphPublicKey, GraphScheme};
use crate::csgn::{CsgnCiphertext, CsgnScheme};
use crate::gm::{GmCiphertext, GmPublicKey, GmScheme, GmSecretKey};
use crate::mockfhe::MockCiphertext;
use crate::numtheory::{jacobi, Modulus};
use crate::scheme_core::{KnowledgeWrapped, Scheme};
use crate::Result;

/// Chooses the first two plaintexts and flips a coin. The canonical
/// negative control: its advantage is noise by construction.
#[derive(Debug, Clone, Copy, Default)]
pub struct RandomGuess;

impl<S: Scheme> Adversary<S> for RandomGuess {
    fn choose(
        &mut self,
        view: &ChallengerView<'_, S>,
        _rng: &mut dyn RngCore,
    ) -> (S::Plaintext, S::Plaintext) {
        let space = view.scheme().plaintexts();
        (space[0].clone(), space[1].clone())
    }

    fn guess(
        &mut self,
        _view: &ChallengerView<'_, S>,
        _challenge: &S::Ciphertext,
        rng: &mut dyn RngCore,
    ) -> bool {
        rng.gen()
    }
}

impl<S: Scheme> TwoChallengeAdversary<S> for RandomGuess {
    fn choose(
        &mut self,
        view: &ChallengerView<'_, S>,
        _rng: &mut dyn RngCore,
    ) -> (S::Plaintext, S::Plaintext) {
        let space = view.scheme().plaintexts();
        (space[0].clone(), space[1].clone())
    }

    fn guess(
        &mut self,
        _view: &ChallengerView<'_, S>,
        _first: &S::Ciphertext,
        _second: &S::Ciphertext,
        rng: &mut dyn RngCore,
    ) -> bool {
        rng.gen()
    }
}

/// Reads the plaintext that the transparent backend carries in the clear.
#[derive(Debug, Clone)]
pub struct MockValueReader<E> {
    target: Option<E>,
}

impl<E> MockValueReader<E> {
    pub fn new() -> Self {
        MockValueReader { target: None }
    }
}

impl<E> Default for MockValueReader<E> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S> Adversary<S> for MockValueReader<S::Plaintext>
where
    S: Scheme<Ciphertext = MockCiphertext<<S as Scheme>::Plaintext>>,
{
    fn choose(
        &mut self,
        view: &ChallengerView<'_, S>,
        _rng: &mut dyn RngCore,
    ) -> (S::Plaintext, S::Plaintext) {
        let space = view.scheme().plaintexts();
        self.target = Some(space[1].clone());
        (space[0].clone(), space[1].clone())
    }

    fn guess(
        &mut self,
        _view: &ChallengerView<'_, S>,
        challenge: &S::Ciphertext,
        _rng: &mut dyn RngCore,
    ) -> bool {
        challenge.value == *self.target.as_ref().expect("choose ran first")
    }
}

fn smallest_factor(n: u64) -> Option<u64> {
    if n.is_multiple_of(2) {
        return Some(2);
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return Some(d);
        }
        d += 2;
    }
    None
}

/// Factors the modulus by trial division and decrypts the challenge.
/// A positive control that only works at toy key sizes, which is the point.
#[derive(Debug, Clone, Default)]
pub struct GmFactoringAdversary {
    p: Option<BigUint>,
}

impl GmFactoringAdversary {
    pub fn new() -> Self {
        Self::default()
    }
}

impl Adversary<GmScheme> for GmFactoringAdversary {
    fn choose(
        &mut self,
        view: &ChallengerView<'_, GmScheme>,
        _rng: &mut dyn RngCore,
    ) -> (bool, bool) {
        let pk = view.public_key().expect("the scheme is asymmetric");
        self.p =
            pk.n.value()
                .to_u64()
                .and_then(smallest_factor)
                .map(BigUint::from);
        (false, true)
    }

    fn guess(
        &mut self,
        _view: &ChallengerView<'_, GmScheme>,
        challenge: &GmCiphertext,
        rng: &mut dyn RngCore,
    ) -> bool {
        match &self.p {
            Some(p) => {
                let p = Modulus::new(p.clone()).expect("odd prime factor");
                jacobi(&challenge.value, &p) == -1
            }
            None => rng.gen(),
        }
    }
}

/// Deterministic but meaningless: guesses the low bit of the ciphertext.
/// Useful wherever a transcript must depend on the challenge without being
/// a real attack.
#[derive(Debug, Clone, Copy, Default)]
pub struct GmParityAdversary;

impl GmParityAdversary {
    pub fn new() -> Self {
        GmParityAdversary
    }
}

impl Adversary<GmScheme> for GmParityAdversary {
    fn choose(
        &mut self,
        _view: &ChallengerView<'_, GmScheme>,
        _rng: &mut dyn RngCore,
    ) -> (bool, bool) {
        (false, true)
    }

    fn guess(
        &mut self,
        _view: &ChallengerView<'_, GmScheme>,
        challenge: &GmCiphertext,
        _rng: &mut dyn RngCore,
    ) -> bool {
        challenge.value.bit(0)
    }
}

/// Decrypts with a prime factor handed over as auxiliary public data.
#[derive(Debug, Clone, Default)]
pub struct GmKnownFactorAdversary {
    p: Option<BigUint>,
}

impl GmKnownFactorAdversary {
    pub fn new() -> Self {
        Self::default()
    }
}

impl<F> Adversary<KnowledgeWrapped<GmScheme, BigUint, F>> for GmKnownFactorAdversary
where
    F: Fn(&GmSecretKey, &GmPublicKey, &mut dyn RngCore) -> Result<BigUint> + Clone,
{
    fn choose(
        &mut self,
        view: &ChallengerView<'_, KnowledgeWrapped<GmScheme, BigUint, F>>,
        _rng: &mut dyn RngCore,
    ) -> (bool, bool) {
        let (_, p) = view.public_key().expect("the scheme is asymmetric");
        self.p = Some(p.clone());
        (false, true)
    }

    fn guess(
        &mut self,
        _view: &ChallengerView<'_, KnowledgeWrapped<GmScheme, BigUint, F>>,
        challenge: &GmCiphertext,
        _rng: &mut dyn RngCore,
    ) -> bool {
        let p = Modulus::new(self.p.clone().expect("choose ran first")).expect("odd prime");
        jacobi(&challenge.value, &p) == -1
    }
}

/// Recovers the secret subset of the componentwise-product scheme through
/// the encryption oracle: positions zeroed by some encryption of 1 cannot
/// belong to the subset.
#[derive(Debug, Clone)]
pub struct CsgnOracleRecovery {
    queries: usize,
    candidate: Option<Vec<usize>>,
}

impl CsgnOracleRecovery {
    pub fn new(queries: usize) -> Self {
        CsgnOracleRecovery {
            queries,
            candidate: None,
        }
    }
}

impl Adversary<CsgnScheme> for CsgnOracleRecovery {
    fn choose(
        &mut self,
        view: &ChallengerView<'_, CsgnScheme>,
        rng: &mut dyn RngCore,
    ) -> (bool, bool) {
        assert!(
            view.public_key().is_none(),
            "a symmetric scheme must hide its key"
        );
        let n = view.scheme().n();
        let mut never_zero = vec![true; n];
        for _ in 0..self.queries {
            let ct = view.encrypt_oracle(&true, rng).expect("oracle encryption");
            for (i, flag) in never_zero.iter_mut().enumerate() {
                *flag &= ct.bits.get(i);
            }
        }
        self.candidate = Some((0..n).filter(|&i| never_zero[i]).collect());
        (false, true)
    }

    fn guess(
        &mut self,
        _view: &ChallengerView<'_, CsgnScheme>,
        challenge: &CsgnCiphertext,
        _rng: &mut dyn RngCore,
    ) -> bool {
        let candidate = self.candidate.as_ref().expect("choose ran first");
        candidate.iter().all(|&i| challenge.bits.get(i))
    }
}

/// Plays an adversary for the source scheme against the graph scheme by
/// forwarding only the first challenge component.
#[derive(Debug, Clone)]
pub struct FirstComponent<A> {
    inner: A,
}

impl<A> FirstComponent<A> {
    pub fn new(inner: A) -> Self {
        FirstComponent { inner }
    }
}

impl<B, A> Adversary<GraphScheme<B>> for FirstComponent<A>
where
    B: Bridge,
    A: Adversary<B::Source>,
{
    fn choose(
        &mut self,
        view: &ChallengerView<'_, GraphScheme<B>>,
        rng: &mut dyn RngCore,
    ) -> (
        <GraphScheme<B> as Scheme>::Plaintext,
        <GraphScheme<B> as Scheme>::Plaintext,
    ) {
        let inner_view = ChallengerView {
            scheme: view.scheme.bridge().source_scheme(),
            pk: &view.pk.pk1,
            public: view.public,
        };
        self.inner.choose(&inner_view, rng)
    }

    fn guess(
        &mut self,
        view: &ChallengerView<'_, GraphScheme<B>>,
        challenge: &<GraphScheme<B> as Scheme>::Ciphertext,
        rng: &mut dyn RngCore,
    ) -> bool {
        let inner_view = ChallengerView {
            scheme: view.scheme.bridge().source_scheme(),
            pk: &view.pk.pk1,
            public: view.public,
        };
        self.inner.guess(&inner_view, &challenge.0, rng)
    }
}

/// Reads the plaintext out of a transparent second component. The negative
/// control demonstrating that the graph-scheme harness really exposes the
/// bridged ciphertext.
#[derive(Debug, Clone, Copy, Default)]
pub struct TransparentSecondComponent;

impl TransparentSecondComponent {
    pub fn new() -> Self {
        TransparentSecondComponent
    }
}

impl<B> Adversary<GraphScheme<B>> for TransparentSecondComponent
where
    B: Bridge<TargetCiphertext = MockCiphertext<u64>>,
    B::Source: Scheme<Plaintext = bool>,
{
    fn choose(
        &mut self,
        _view: &ChallengerView<'_, GraphScheme<B>>,
        _rng: &mut dyn RngCore,
    ) -> (bool, bool) {
        (false, true)
    }

    fn guess(
        &mut self,
        _view: &ChallengerView<'_, GraphScheme<B>>,
        challenge: &<GraphScheme<B> as Scheme>::Ciphertext,
        _rng: &mut dyn RngCore,
    ) -> bool {
        challenge.1.value == 1
    }
}

/// Rewires a graph-scheme adversary into the two-encryption game against
/// the knowledge-augmented source scheme: converts the second encryption
/// itself and feeds the pair to the inner adversary.
pub struct BridgeReduction<B: Bridge, A> {
    graph: GraphScheme<B>,
    inner: A,
    graph_pk: Option<GraphPublicKey<B>>,
}

impl<B: Bridge, A> BridgeReduction<B, A> {
    pub fn new(bridge: B, inner: A) -> Self {
        BridgeReduction {
            graph: GraphScheme::new(bridge),
            inner,
            graph_pk: None,
        }
    }
}

impl<B: Bridge + Clone, A: Clone> Clone for BridgeReduction<B, A> {
    fn clone(&self) -> Self {
        BridgeReduction {
            graph: GraphScheme::new(self.graph.bridge().clone()),
            inner: self.inner.clone(),
            graph_pk: self.graph_pk.clone(),
        }
    }
}

impl<B, A, F> TwoChallengeAdversary<KnowledgeWrapped<B::Source, (B::PublicKey2, B::BridgeKey), F>>
    for BridgeReduction<B, A>
where
    B: Bridge + Clone,
    A: Adversary<GraphScheme<B>>,
    F: Fn(
            &<B::Source as Scheme>::SecretKey,
            &<B::Source as Scheme>::PublicKey,
            &mut dyn RngCore,
        ) -> Result<(B::PublicKey2, B::BridgeKey)>
        + Clone,
{
    fn choose(
        &mut self,
        view: &ChallengerView<'_, KnowledgeWrapped<B::Source, (B::PublicKey2, B::BridgeKey), F>>,
        rng: &mut dyn RngCore,
    ) -> (
        <B::Source as Scheme>::Plaintext,
        <B::Source as Scheme>::Plaintext,
    ) {
        let (pk1, (pk2, bk)) = view.public_key().expect("augmented keys are public");
        self.graph_pk = Some(GraphPublicKey {
            pk1: pk1.clone(),
            pk2: pk2.clone(),
            bk: bk.clone(),
        });
        let inner_view = ChallengerView {
            scheme: &self.graph,
            pk: self.graph_pk.as_ref().unwrap(),
            public: true,
        };
        self.inner.choose(&inner_view, rng)
    }

    fn guess(
        &mut self,
        _view: &ChallengerView<'_, KnowledgeWrapped<B::Source, (B::PublicKey2, B::BridgeKey), F>>,
        first: &<B::Source as Scheme>::Ciphertext,
        second: &<B::Source as Scheme>::Ciphertext,
        rng: &mut dyn RngCore,
    ) -> bool {
        let gpk = self.graph_pk.as_ref().expect("choose ran first");
        let converted = self
            .graph
            .bridge()
            .convert(&gpk.pk2, &gpk.bk, second, rng)
            .expect("bridge conversion");
        let inner_view = ChallengerView {
            scheme: &self.graph,
            pk: gpk,
            public: true,
        };
        self.inner
            .guess(&inner_view, &(first.clone(), converted), rng)
    }
}
