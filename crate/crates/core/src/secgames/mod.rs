//! Runnable IND-CPA experiments with statistical controls.
//!
//! Each trial derives three independent RNG streams from the master seed:
//! one for key generation, one for the challenge encryption, one for the
//! adversary. Both experiment arms of a trial share the same streams, so
//! the only difference between them is which message gets encrypted. That
//! pairing keeps variance down and, more importantly, makes reduction
//! arguments testable as exact equalities of guess sequences: two games
//! whose challengers consume randomness identically produce identical
//! transcripts under a shared seed.
//!
//! Positive controls (transparent schemes, factoring at toy sizes) must
//! reach advantage near one; negative controls (random guessing) must stay
//! inside the Hoeffding band. Both run in CI.

pub mod adversaries;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::bridge_core::{Bridge, GraphScheme};
use crate::findist::{GameReport, Sampler};
use crate::gentry::BitRepresentable;
use crate::scheme_core::{HomomorphicScheme, Scheme};
use crate::{Error, Result};

const PHASE_KEYGEN: u64 = 0;
const PHASE_CHALLENGE: u64 = 1;
const PHASE_ADVERSARY: u64 = 2;
const PHASES: u64 = 4; // one spare stream per trial

/// Independent stream for (trial, phase) under a master seed.
pub fn phase_rng(seed: u64, trial: u64, phase: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(trial * PHASES + phase + 1);
    rng
}

/// Key handling across trials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KeyPolicy {
    /// Fresh keys every trial, as the experiment definition demands.
    #[default]
    FreshPerTrial,
    /// One key pair for the whole run. Cheaper, but not the standard
    /// experiment; results are labelled accordingly.
    FixedAcrossTrials,
}

#[derive(Debug, Clone, Copy)]
pub struct GameConfig {
    /// Trials per experiment arm.
    pub trials: usize,
    pub seed: u64,
    /// Worker threads; 1 runs inline. Results do not depend on this.
    pub jobs: usize,
    pub key_policy: KeyPolicy,
}

impl GameConfig {
    pub fn new(trials: usize, seed: u64) -> Self {
        GameConfig {
            trials,
            seed,
            jobs: 1,
            key_policy: KeyPolicy::default(),
        }
    }

    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs.max(1);
        self
    }

    pub fn with_key_policy(mut self, policy: KeyPolicy) -> Self {
        self.key_policy = policy;
        self
    }
}

/// What the challenger shows the adversary: the public key for asymmetric
/// schemes, an encryption oracle either way.
pub struct ChallengerView<'a, S: Scheme> {
    scheme: &'a S,
    pk: &'a S::PublicKey,
    public: bool,
}

impl<'a, S: Scheme> ChallengerView<'a, S> {
    pub fn scheme(&self) -> &'a S {
        self.scheme
    }

    /// `None` for symmetric schemes, where the key doubles as the secret.
    pub fn public_key(&self) -> Option<&'a S::PublicKey> {
        self.public.then_some(self.pk)
    }

    /// Encrypts a chosen message under the challenge key.
    pub fn encrypt_oracle(&self, m: &S::Plaintext, rng: &mut dyn RngCore) -> Result<S::Ciphertext> {
        self.scheme.encrypt(self.pk, m, rng)
    }
}

/// A chosen-plaintext adversary. Cloned fresh for every trial; state may
/// flow from `choose` to `guess` within a trial.
pub trait Adversary<S: Scheme>: Clone {
    fn choose(
        &mut self,
        view: &ChallengerView<'_, S>,
        rng: &mut dyn RngCore,
    ) -> (S::Plaintext, S::Plaintext);

    fn guess(
        &mut self,
        view: &ChallengerView<'_, S>,
        challenge: &S::Ciphertext,
        rng: &mut dyn RngCore,
    ) -> bool;
}

/// Same game, but the challenger hands over two independent encryptions of
/// the chosen message.
pub trait TwoChallengeAdversary<S: Scheme>: Clone {
    fn choose(
        &mut self,
        view: &ChallengerView<'_, S>,
        rng: &mut dyn RngCore,
    ) -> (S::Plaintext, S::Plaintext);

    fn guess(
        &mut self,
        view: &ChallengerView<'_, S>,
        first: &S::Ciphertext,
        second: &S::Ciphertext,
        rng: &mut dyn RngCore,
    ) -> bool;
}

/// Full outcome of a game run: the summary plus the per-trial guesses of
/// each arm, for transcript-equality checks.
#[derive(Debug, Clone)]
pub struct GameRun {
    pub report: GameReport,
    pub guesses0: Vec<bool>,
    pub guesses1: Vec<bool>,
}

fn finish_run(seed: u64, pairs: Vec<(bool, bool)>) -> GameRun {
    let guesses0: Vec<bool> = pairs.iter().map(|p| p.0).collect();
    let guesses1: Vec<bool> = pairs.iter().map(|p| p.1).collect();
    let wins0 = guesses0.iter().filter(|&&g| g).count();
    let wins1 = guesses1.iter().filter(|&&g| g).count();
    GameRun {
        report: GameReport::from_wins(pairs.len(), wins0, wins1, Some(seed)),
        guesses0,
        guesses1,
    }
}

fn run_trials<F>(trials: usize, jobs: usize, trial: F) -> Result<Vec<(bool, bool)>>
where
    F: Fn(u64) -> Result<(bool, bool)> + Sync,
{
    if trials == 0 {
        return Err(Error::Game("no trials requested".into()));
    }
    if jobs <= 1 {
        return (0..trials as u64).map(trial).collect();
    }
    std::thread::scope(|scope| {
        let chunk = trials.div_ceil(jobs);
        let trial = &trial;
        let workers: Vec<_> = (0..jobs)
            .map(|w| {
                scope.spawn(move || {
                    let start = w * chunk;
                    let end = ((w + 1) * chunk).min(trials);
                    (start as u64..end as u64)
                        .map(trial)
                        .collect::<Result<Vec<_>>>()
                })
            })
            .collect();
        let mut all = Vec::with_capacity(trials);
        for worker in workers {
            all.extend(worker.join().expect("game worker panicked")?);
        }
        Ok(all)
    })
}

fn validate_messages<S: Scheme>(scheme: &S, m0: &S::Plaintext, m1: &S::Plaintext) -> Result<()> {
    if m0 == m1 {
        return Err(Error::Game("adversary chose equal messages".into()));
    }
    let space = scheme.plaintexts();
    if !space.contains(m0) || !space.contains(m1) {
        return Err(Error::Game(
            "adversary chose a message outside the plaintext space".into(),
        ));
    }
    Ok(())
}

/// Runs the two experiment arms `cfg.trials` times each and reports the
/// empirical advantage `|wins1 - wins0| / trials`.
pub fn run_ind_cpa<S, A>(scheme: &S, adversary: &A, cfg: &GameConfig) -> Result<GameRun>
where
    S: Scheme + Sync,
    S::SecretKey: Sync,
    S::PublicKey: Sync,
    A: Adversary<S> + Sync,
{
    let fixed = match cfg.key_policy {
        KeyPolicy::FixedAcrossTrials => {
            Some(scheme.keygen(&mut phase_rng(cfg.seed, 0, PHASE_KEYGEN))?)
        }
        KeyPolicy::FreshPerTrial => None,
    };
    let pairs = run_trials(cfg.trials, cfg.jobs, |t| {
        let keys;
        let pk = match &fixed {
            Some((_, pk)) => pk,
            None => {
                keys = scheme.keygen(&mut phase_rng(cfg.seed, t, PHASE_KEYGEN))?;
                &keys.1
            }
        };
        let view = ChallengerView {
            scheme,
            pk,
            public: !scheme.is_symmetric(),
        };
        let mut out = (false, false);
        for arm in 0..2u8 {
            let mut challenge_rng = phase_rng(cfg.seed, t, PHASE_CHALLENGE);
            let mut adv_rng = phase_rng(cfg.seed, t, PHASE_ADVERSARY);
            let mut adv = adversary.clone();
            let (m0, m1) = adv.choose(&view, &mut adv_rng);
            validate_messages(scheme, &m0, &m1)?;
            let m = if arm == 1 { &m1 } else { &m0 };
            let ct = scheme.encrypt(pk, m, &mut challenge_rng)?;
            let guess = adv.guess(&view, &ct, &mut adv_rng);
            if arm == 1 {
                out.1 = guess;
            } else {
                out.0 = guess;
            }
        }
        Ok(out)
    })?;
    Ok(finish_run(cfg.seed, pairs))
}

/// The two-encryption variant: the challenge is a pair of independent
/// encryptions of the same chosen message.
pub fn run_2ind_cpa<S, A>(scheme: &S, adversary: &A, cfg: &GameConfig) -> Result<GameRun>
where
    S: Scheme + Sync,
    S::SecretKey: Sync,
    S::PublicKey: Sync,
    A: TwoChallengeAdversary<S> + Sync,
{
    let fixed = match cfg.key_policy {
        KeyPolicy::FixedAcrossTrials => {
            Some(scheme.keygen(&mut phase_rng(cfg.seed, 0, PHASE_KEYGEN))?)
        }
        KeyPolicy::FreshPerTrial => None,
    };
    let pairs = run_trials(cfg.trials, cfg.jobs, |t| {
        let keys;
        let pk = match &fixed {
            Some((_, pk)) => pk,
            None => {
                keys = scheme.keygen(&mut phase_rng(cfg.seed, t, PHASE_KEYGEN))?;
                &keys.1
            }
        };
        let view = ChallengerView {
            scheme,
            pk,
            public: !scheme.is_symmetric(),
        };
        let mut out = (false, false);
        for arm in 0..2u8 {
            let mut challenge_rng = phase_rng(cfg.seed, t, PHASE_CHALLENGE);
            let mut adv_rng = phase_rng(cfg.seed, t, PHASE_ADVERSARY);
            let mut adv = adversary.clone();
            let (m0, m1) = adv.choose(&view, &mut adv_rng);
            validate_messages(scheme, &m0, &m1)?;
            let m = if arm == 1 { &m1 } else { &m0 };
            let first = scheme.encrypt(pk, m, &mut challenge_rng)?;
            let second = scheme.encrypt(pk, m, &mut challenge_rng)?;
            let guess = adv.guess(&view, &first, &second, &mut adv_rng);
            if arm == 1 {
                out.1 = guess;
            } else {
                out.0 = guess;
            }
        }
        Ok(out)
    })?;
    Ok(finish_run(cfg.seed, pairs))
}

/// The security experiment of a bridge: the plain game on its graph scheme.
pub fn run_bridge_game<B, A>(bridge: &B, adversary: &A, cfg: &GameConfig) -> Result<GameRun>
where
    B: Bridge + Clone + Sync,
    <B::Source as Scheme>::SecretKey: Sync,
    <B::Source as Scheme>::PublicKey: Sync,
    B::SecretKey2: Sync,
    B::PublicKey2: Sync,
    B::BridgeKey: Sync,
    A: Adversary<GraphScheme<B>> + Sync,
{
    run_ind_cpa(&GraphScheme::new(bridge.clone()), adversary, cfg)
}

/// The measured cost of handing an adversary the extra public data: the
/// advantage gap between the augmented game and the plain game.
#[derive(Debug, Clone)]
pub struct KnowledgeGap {
    pub base: GameReport,
    pub augmented: GameReport,
    pub gap: f64,
    /// Sum of the two half-widths; a gap below this is noise.
    pub half_width: f64,
}

pub fn knowledge_gap(base: GameReport, augmented: GameReport) -> KnowledgeGap {
    KnowledgeGap {
        gap: (augmented.advantage - base.advantage).abs(),
        half_width: base.half_width + augmented.half_width,
        base,
        augmented,
    }
}

/// Samples the hybrid distributions interpolating between an all-zeros
/// bridge key and the true bit-by-bit encryption of the source secret key:
/// slots up to `index` encrypt real key bits, the rest encrypt zero.
pub struct HybridFixture<'a, S, H> {
    source: &'a S,
    target: &'a H,
    index: usize,
}

/// One draw from a hybrid distribution, with the secret material kept
/// around so tests can decrypt and diff.
pub struct HybridSample<S: Scheme, H: Scheme> {
    pub pk_source: S::PublicKey,
    pub pk_target: H::PublicKey,
    pub slots: Vec<H::Ciphertext>,
    pub sk_source: S::SecretKey,
    pub sk_target: H::SecretKey,
}

pub fn hybrid_fixture<'a, S, H>(
    source: &'a S,
    target: &'a H,
    index: usize,
) -> Result<HybridFixture<'a, S, H>>
where
    S: BitRepresentable,
    H: HomomorphicScheme + crate::scheme_core::BitPlaintext,
{
    if index > source.secret_key_len() {
        return Err(Error::InvalidParameter(format!(
            "hybrid index {index} exceeds the key length {}",
            source.secret_key_len()
        )));
    }
    Ok(HybridFixture {
        source,
        target,
        index,
    })
}

impl<S, H> HybridFixture<'_, S, H>
where
    S: BitRepresentable,
    H: HomomorphicScheme + crate::scheme_core::BitPlaintext,
{
    pub fn draw(&self, rng: &mut dyn RngCore) -> Result<HybridSample<S, H>> {
        let (sk_source, pk_source) = self.source.keygen(rng)?;
        let (sk_target, pk_target) = self.target.keygen(rng)?;
        let bits = self.source.secret_key_bits(&sk_source);
        let slots = bits
            .iter()
            .enumerate()
            .map(|(j, &bit)| {
                let plain = self.target.embed_bit(bit && j < self.index);
                self.target.encrypt(&pk_target, &plain, rng)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(HybridSample {
            pk_source,
            pk_target,
            slots,
            sk_source,
            sk_target,
        })
    }
}

impl<S, H> Sampler for HybridFixture<'_, S, H>
where
    S: BitRepresentable,
    H: HomomorphicScheme + crate::scheme_core::BitPlaintext,
{
    type Item = (S::PublicKey, H::PublicKey, Vec<H::Ciphertext>);

    fn sample(&self, rng: &mut dyn RngCore) -> Self::Item {
        let s = self.draw(rng).expect("hybrid sampling failed");
        (s.pk_source, s.pk_target, s.slots)
    }
}

#[cfg(test)]
mod tests {
    use super::adversaries::*;
    use super::*;
    use crate::bridge_core::IdentityBridge;
    use crate::csgn::CsgnScheme;
    use crate::gentry::{compile_gentry_bridge, gm_table_dec_circuit, GentryConfig};
    use crate::gm::GmScheme;
    use crate::gm_syy::GmSyyBridge;
    use crate::mockfhe::MockFhe;
    use crate::scheme_core::{KnowledgeWrapped, F2};

    #[test]
    fn random_guess_stays_inside_the_band() {
        let scheme = GmScheme::new(32).unwrap();
        let run = run_ind_cpa(&scheme, &RandomGuess, &GameConfig::new(2000, 201)).unwrap();
        assert!(
            run.report.advantage <= run.report.half_width,
            "{:?}",
            run.report
        );
    }

    #[test]
    fn transparent_scheme_reader_wins_always() {
        let scheme = MockFhe::unbounded(F2);
        let run =
            run_ind_cpa(&scheme, &MockValueReader::new(), &GameConfig::new(500, 202)).unwrap();
        assert_eq!(run.report.advantage, 1.0);
    }

    #[test]
    fn factoring_breaks_toy_moduli() {
        let scheme = GmScheme::new(32).unwrap();
        let run = run_ind_cpa(
            &scheme,
            &GmFactoringAdversary::new(),
            &GameConfig::new(300, 203),
        )
        .unwrap();
        assert!(run.report.advantage >= 0.9, "{:?}", run.report);
    }

    #[test]
    fn results_are_reproducible_and_job_count_invariant() {
        let scheme = GmScheme::new(24).unwrap();
        let cfg = GameConfig::new(400, 204);
        let a = run_ind_cpa(&scheme, &GmParityAdversary::new(), &cfg).unwrap();
        let b = run_ind_cpa(&scheme, &GmParityAdversary::new(), &cfg).unwrap();
        let c = run_ind_cpa(&scheme, &GmParityAdversary::new(), &cfg.with_jobs(4)).unwrap();
        assert_eq!(a.guesses0, b.guesses0);
        assert_eq!(a.guesses1, b.guesses1);
        assert_eq!(a.guesses0, c.guesses0);
        assert_eq!(a.guesses1, c.guesses1);
    }

    #[test]
    fn fixed_key_mode_runs() {
        let scheme = GmScheme::new(32).unwrap();
        let cfg = GameConfig::new(200, 205).with_key_policy(KeyPolicy::FixedAcrossTrials);
        let run = run_ind_cpa(&scheme, &RandomGuess, &cfg).unwrap();
        assert!(run.report.advantage <= run.report.half_width);
    }

    #[test]
    fn adversary_message_validation() {
        #[derive(Clone)]
        struct Degenerate;
        impl Adversary<GmScheme> for Degenerate {
            fn choose(
                &mut self,
                _view: &ChallengerView<'_, GmScheme>,
                _rng: &mut dyn RngCore,
            ) -> (bool, bool) {
                (true, true)
            }

            fn guess(
                &mut self,
                _view: &ChallengerView<'_, GmScheme>,
                _c: &crate::gm::GmCiphertext,
                _rng: &mut dyn RngCore,
            ) -> bool {
                false
            }
        }
        let scheme = GmScheme::new(24).unwrap();
        assert!(run_ind_cpa(&scheme, &Degenerate, &GameConfig::new(10, 206)).is_err());
    }

    #[test]
    fn symmetric_schemes_hide_the_key_but_offer_the_oracle() {
        let scheme = CsgnScheme::new(32, 8, 8).unwrap();
        let run = run_ind_cpa(
            &scheme,
            &CsgnOracleRecovery::new(64),
            &GameConfig::new(200, 207),
        )
        .unwrap();
        assert!(run.report.advantage >= 0.9, "{:?}", run.report);
    }

    #[test]
    fn first_component_adversary_matches_the_plain_game_exactly() {
        // shared seed: the graph scheme's first component replays the
        // source game transcript bit for bit
        let scheme = GmScheme::new(24).unwrap();
        let bridge = GmSyyBridge::new(24, 4).unwrap();
        let cfg = GameConfig::new(150, 208);
        let plain = run_ind_cpa(&scheme, &GmParityAdversary::new(), &cfg).unwrap();
        let graph = run_bridge_game(
            &bridge,
            &FirstComponent::new(GmParityAdversary::new()),
            &cfg,
        )
        .unwrap();
        assert_eq!(plain.guesses0, graph.guesses0);
        assert_eq!(plain.guesses1, graph.guesses1);
        assert_eq!(plain.report.advantage, graph.report.advantage);
    }

    #[test]
    fn bridge_game_on_identity_bridge_matches_the_base_game() {
        let scheme = GmScheme::new(24).unwrap();
        let bridge = IdentityBridge::new(scheme);
        let cfg = GameConfig::new(150, 209);
        let plain = run_ind_cpa(&scheme, &GmParityAdversary::new(), &cfg).unwrap();
        let graph = run_bridge_game(
            &bridge,
            &FirstComponent::new(GmParityAdversary::new()),
            &cfg,
        )
        .unwrap();
        assert_eq!(plain.guesses0, graph.guesses0);
        assert_eq!(plain.guesses1, graph.guesses1);
    }

    #[test]
    fn transparent_bridge_target_leaks_through_the_second_component() {
        let scheme = GmScheme::new(16).unwrap();
        let bridge = compile_gentry_bridge(
            scheme,
            MockFhe::unbounded(F2),
            move |sk: &crate::gm::GmSecretKey| gm_table_dec_circuit(&scheme, sk),
            GentryConfig::default(),
        );
        let run = run_bridge_game(
            &bridge,
            &TransparentSecondComponent::new(),
            &GameConfig::new(100, 210),
        )
        .unwrap();
        assert_eq!(run.report.advantage, 1.0);
    }

    #[test]
    fn two_challenge_reduction_replays_the_bridge_game_transcript() {
        // the graph-scheme adversary, rewired through the two-encryption
        // game against the knowledge-augmented source scheme, produces the
        // same guesses under a shared seed
        let scheme = GmScheme::new(16).unwrap();
        let bridge = compile_gentry_bridge(
            scheme,
            MockFhe::unbounded(F2),
            move |sk: &crate::gm::GmSecretKey| gm_table_dec_circuit(&scheme, sk),
            GentryConfig::default(),
        );
        let cfg = GameConfig::new(100, 211);
        let graph_run = run_bridge_game(&bridge, &TransparentSecondComponent::new(), &cfg).unwrap();

        let bridge_for_oracle = compile_gentry_bridge(
            scheme,
            MockFhe::unbounded(F2),
            move |sk: &crate::gm::GmSecretKey| gm_table_dec_circuit(&scheme, sk),
            GentryConfig::default(),
        );
        let wrapped =
            KnowledgeWrapped::new(scheme, move |sk: &_, pk: &_, rng: &mut dyn RngCore| {
                let (_, pk2, bk) = bridge_for_oracle.keygen_tail(sk, pk, rng)?;
                Ok((pk2, bk))
            });
        let reduction = BridgeReduction::new(
            compile_gentry_bridge(
                scheme,
                MockFhe::unbounded(F2),
                move |sk: &crate::gm::GmSecretKey| gm_table_dec_circuit(&scheme, sk),
                GentryConfig::default(),
            ),
            TransparentSecondComponent::new(),
        );
        let two_run = run_2ind_cpa(&wrapped, &reduction, &cfg).unwrap();
        assert_eq!(graph_run.guesses0, two_run.guesses0);
        assert_eq!(graph_run.guesses1, two_run.guesses1);
        assert_eq!(graph_run.report.advantage, two_run.report.advantage);
    }

    #[test]
    fn two_challenge_random_guess_stays_inside_the_band() {
        let scheme = GmScheme::new(32).unwrap();
        let run = run_2ind_cpa(&scheme, &RandomGuess, &GameConfig::new(1000, 216)).unwrap();
        assert!(run.report.advantage <= run.report.half_width, "{:?}", run.report);
    }

    #[test]
    fn two_challenge_components_are_independent() {
        #[derive(Clone)]
        struct Inspector;
        impl TwoChallengeAdversary<GmScheme> for Inspector {
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
                first: &crate::gm::GmCiphertext,
                second: &crate::gm::GmCiphertext,
                _rng: &mut dyn RngCore,
            ) -> bool {
                first == second
            }
        }
        let scheme = GmScheme::new(24).unwrap();
        let run = run_2ind_cpa(&scheme, &Inspector, &GameConfig::new(300, 212)).unwrap();
        // a collision of two independent encryptions is essentially impossible
        assert_eq!(run.report.wins0 + run.report.wins1, 0);
    }

    #[test]
    fn knowledge_gap_of_useless_and_fatal_knowledge() {
        let scheme = GmScheme::new(32).unwrap();
        let cfg = GameConfig::new(300, 213);
        let base = run_ind_cpa(&scheme, &RandomGuess, &cfg).unwrap();

        // useless knowledge: a constant; the gap stays in the noise
        let constant = KnowledgeWrapped::new(scheme, |_: &_, _: &_, _: &mut dyn RngCore| Ok(0u8));
        let augmented = run_ind_cpa(&constant, &RandomGuess, &cfg).unwrap();
        let gap = knowledge_gap(base.report.clone(), augmented.report);
        assert!(gap.gap <= gap.half_width, "{gap:?}");

        // fatal knowledge: the factorization itself
        let fatal = KnowledgeWrapped::new(
            scheme,
            |sk: &crate::gm::GmSecretKey, _: &_, _: &mut dyn RngCore| Ok(sk.p.clone()),
        );
        let augmented = run_ind_cpa(&fatal, &GmKnownFactorAdversary::new(), &cfg).unwrap();
        let gap = knowledge_gap(base.report, augmented.report);
        assert!(gap.gap >= 0.9, "{gap:?}");
    }

    #[test]
    fn hybrid_endpoints_decrypt_to_zeros_and_key_bits() {
        let source = CsgnScheme::new(16, 3, 5).unwrap();
        let target = MockFhe::unbounded(F2);
        let mut rng = ChaCha20Rng::seed_from_u64(214);
        let zero_end = hybrid_fixture(&source, &target, 0).unwrap();
        let sample = zero_end.draw(&mut rng).unwrap();
        for slot in &sample.slots {
            assert_eq!(target.decrypt(&sample.sk_target, slot).unwrap(), 0);
        }
        let full_end = hybrid_fixture(&source, &target, 16).unwrap();
        let sample = full_end.draw(&mut rng).unwrap();
        let bits = source.secret_key_bits(&sample.sk_source);
        for (slot, &bit) in sample.slots.iter().zip(&bits) {
            assert_eq!(
                target.decrypt(&sample.sk_target, slot).unwrap(),
                u64::from(bit)
            );
        }
    }

    #[test]
    fn adjacent_hybrids_differ_in_at_most_one_slot() {
        let source = CsgnScheme::new(16, 3, 5).unwrap();
        let target = MockFhe::unbounded(F2);
        for i in 1..=16usize {
            let before = hybrid_fixture(&source, &target, i - 1).unwrap();
            let after = hybrid_fixture(&source, &target, i).unwrap();
            let a = before.draw(&mut ChaCha20Rng::seed_from_u64(215)).unwrap();
            let b = after.draw(&mut ChaCha20Rng::seed_from_u64(215)).unwrap();
            let bits = source.secret_key_bits(&a.sk_source);
            let mut diffs = 0;
            for (j, (sa, sb)) in a.slots.iter().zip(&b.slots).enumerate() {
                let da = target.decrypt(&a.sk_target, sa).unwrap();
                let db = target.decrypt(&b.sk_target, sb).unwrap();
                if da != db {
                    diffs += 1;
                    assert_eq!(j, i - 1);
                    assert!(bits[j]);
                }
            }
            assert!(diffs <= 1);
            assert_eq!(diffs == 1, bits[i - 1]);
        }
    }

    #[test]
    fn hybrid_index_out_of_range_is_rejected() {
        let source = CsgnScheme::new(16, 3, 5).unwrap();
        let target = MockFhe::unbounded(F2);
        assert!(hybrid_fixture(&source, &target, 17).is_err());
    }
}
