//! Finite probability distributions with exact rational arithmetic.
//!
//! Declared distributions, morphisms between them, fibers, and fiber
//! products are all exact; only empirical estimates from sampling use
//! floating point.

use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::RngCore;
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// Value types a distribution can range over.
pub trait Value: Clone + Eq + Hash + Debug + 'static {}
impl<T: Clone + Eq + Hash + Debug + 'static> Value for T {}

/// A probability distribution with finite support and exact probabilities.
///
/// Probabilities are nonnegative rationals summing to exactly one; support
/// entries are distinct. Zero-probability entries are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteDistribution<V: Value> {
    support: Vec<V>,
    probs: Vec<BigRational>,
}

impl<V: Value> FiniteDistribution<V> {
    pub fn new(support: Vec<V>, probs: Vec<BigRational>) -> Result<Self> {
        if support.len() != probs.len() {
            return Err(Error::Distribution(format!(
                "{} support entries but {} probabilities",
                support.len(),
                probs.len()
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for v in &support {
            if !seen.insert(v) {
                return Err(Error::Distribution(format!(
                    "duplicate support entry {v:?}"
                )));
            }
        }
        if probs.iter().any(|p| p.is_negative()) {
            return Err(Error::Distribution("negative probability".into()));
        }
        let total: BigRational = probs.iter().sum();
        if !total.is_one() {
            return Err(Error::Distribution(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(FiniteDistribution { support, probs })
    }

    /// Uniform distribution over the given values.
    pub fn uniform(values: Vec<V>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Distribution("uniform over empty support".into()));
        }
        let p = BigRational::new(BigInt::one(), BigInt::from(values.len()));
        let probs = vec![p; values.len()];
        Self::new(values, probs)
    }

    pub fn point_mass(value: V) -> Self {
        FiniteDistribution {
            support: vec![value],
            probs: vec![BigRational::one()],
        }
    }

    pub fn support(&self) -> &[V] {
        &self.support
    }

    pub fn probs(&self) -> &[BigRational] {
        &self.probs
    }

    /// Probability of `v`, zero when `v` is not in the support.
    pub fn prob_of(&self, v: &V) -> BigRational {
        self.support
            .iter()
            .position(|s| s == v)
            .map(|i| self.probs[i].clone())
            .unwrap_or_else(BigRational::zero)
    }

    /// Precomputes an exact sampler for this distribution.
    pub fn sampler(&self) -> DistSampler<V> {
        // common denominator, then cumulative integer weights
        let mut denom = BigInt::one();
        for p in &self.probs {
            denom = num_integer::lcm(denom, p.denom().clone());
        }
        let mut cumulative = Vec::with_capacity(self.probs.len());
        let mut acc = BigUint::zero();
        for p in &self.probs {
            let w = (p * &denom)
                .to_integer()
                .to_biguint()
                .expect("nonnegative weight");
            acc += w;
            cumulative.push(acc.clone());
        }
        DistSampler {
            values: self.support.clone(),
            cumulative,
            total: denom.to_biguint().expect("positive denominator"),
        }
    }
}

/// Exact sampler drawing uniformly below the common denominator.
#[derive(Debug, Clone)]
pub struct DistSampler<V: Value> {
    values: Vec<V>,
    cumulative: Vec<BigUint>,
    total: BigUint,
}

/// Anything that can produce a value from randomness.
pub trait Sampler {
    type Item;
    fn sample(&self, rng: &mut dyn RngCore) -> Self::Item;
}

impl<V: Value> Sampler for DistSampler<V> {
    type Item = V;

    fn sample(&self, rng: &mut dyn RngCore) -> V {
        let draw = rng.gen_biguint_below(&self.total);
        for (i, bound) in self.cumulative.iter().enumerate() {
            if draw < *bound {
                return self.values[i].clone();
            }
        }
        unreachable!("draw below total is below the last cumulative bound")
    }
}

impl<F, T> Sampler for F
where
    F: Fn(&mut dyn RngCore) -> T,
{
    type Item = T;

    fn sample(&self, rng: &mut dyn RngCore) -> T {
        self(rng)
    }
}

/// A map of supports `source -> target` claimed to carry the source
/// distribution onto the target distribution.
#[derive(Clone)]
pub struct DistMorphism<S: Value, T: Value> {
    source: FiniteDistribution<S>,
    target: FiniteDistribution<T>,
    map: Arc<dyn Fn(&S) -> T + Send + Sync>,
}

impl<S: Value, T: Value> DistMorphism<S, T> {
    pub fn new(
        source: FiniteDistribution<S>,
        target: FiniteDistribution<T>,
        map: impl Fn(&S) -> T + Send + Sync + 'static,
    ) -> Self {
        DistMorphism {
            source,
            target,
            map: Arc::new(map),
        }
    }

    pub fn source(&self) -> &FiniteDistribution<S> {
        &self.source
    }

    pub fn target(&self) -> &FiniteDistribution<T> {
        &self.target
    }

    pub fn apply(&self, s: &S) -> T {
        (self.map)(s)
    }

    /// Verifies the fiber-sum law `Pr{X=x} = sum over the fiber of Pr{Y=y}`
    /// for every target point, in exact arithmetic.
    ///
    /// Fails with an error if the map leaves the target support; otherwise
    /// reports the first violated point, if any.
    pub fn check(&self) -> Result<MorphismCheck<T>> {
        let mut fiber_sums: HashMap<T, BigRational> = HashMap::new();
        for (y, p) in self.source.support.iter().zip(&self.source.probs) {
            let x = self.apply(y);
            if !self.target.support.contains(&x) {
                return Err(Error::MorphismImage(format!("{x:?}")));
            }
            *fiber_sums.entry(x).or_insert_with(BigRational::zero) += p;
        }
        for (x, px) in self.target.support.iter().zip(&self.target.probs) {
            let sum = fiber_sums.get(x).cloned().unwrap_or_else(BigRational::zero);
            if sum != *px {
                return Ok(MorphismCheck::Fails(Counterexample {
                    point: x.clone(),
                    target_prob: px.clone(),
                    fiber_sum: sum,
                }));
            }
        }
        Ok(MorphismCheck::Holds)
    }

    pub fn is_morphism(&self) -> bool {
        matches!(self.check(), Ok(MorphismCheck::Holds))
    }

    /// The fiber of the source over `x`: support `map^{-1}(x)` with
    /// probabilities conditioned on `x`.
    pub fn fiber(&self, x: &T) -> Result<FiniteDistribution<S>> {
        let px = self.target.prob_of(x);
        if px.is_zero() {
            return Err(Error::EmptyFiber);
        }
        let mut support = Vec::new();
        let mut probs = Vec::new();
        for (y, p) in self.source.support.iter().zip(&self.source.probs) {
            if self.apply(y) == *x {
                support.push(y.clone());
                probs.push(p / &px);
            }
        }
        FiniteDistribution::new(support, probs)
    }
}

impl<S: Value, T: Value> Debug for DistMorphism<S, T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DistMorphism")
            .field("source", &self.source)
            .field("target", &self.target)
            .finish_non_exhaustive()
    }
}

/// Outcome of [`DistMorphism::check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MorphismCheck<T: Value> {
    Holds,
    Fails(Counterexample<T>),
}

/// A target point where the fiber-sum law breaks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample<T: Value> {
    pub point: T,
    pub target_prob: BigRational,
    pub fiber_sum: BigRational,
}

/// The fiber product of two morphisms over a shared target, together with
/// its structural morphism and the two projections.
pub struct FiberProduct<A: Value, B: Value, X: Value> {
    pub dist: FiniteDistribution<(A, B)>,
    pub structural: DistMorphism<(A, B), X>,
    pub pr1: DistMorphism<(A, B), A>,
    pub pr2: DistMorphism<(A, B), B>,
}

/// Couples two morphisms over their common target: support is the set of
/// pairs agreeing on the target, and the probability of `(y1, y2)` over `x`
/// is `Pr{Y1=y1} * Pr{Y2=y2} / Pr{X=x}` (zero when `Pr{X=x}` is zero).
pub fn fiber_product<A: Value, B: Value, X: Value>(
    m1: &DistMorphism<A, X>,
    m2: &DistMorphism<B, X>,
) -> Result<FiberProduct<A, B, X>> {
    if m1.target != m2.target {
        return Err(Error::Distribution(
            "fiber product over different targets".into(),
        ));
    }
    let mut support = Vec::new();
    let mut probs = Vec::new();
    for (a, pa) in m1.source.support.iter().zip(&m1.source.probs) {
        let xa = m1.apply(a);
        for (b, pb) in m2.source.support.iter().zip(&m2.source.probs) {
            if m2.apply(b) != xa {
                continue;
            }
            let px = m1.target.prob_of(&xa);
            let p = if px.is_zero() {
                BigRational::zero()
            } else {
                pa * pb / px
            };
            support.push((a.clone(), b.clone()));
            probs.push(p);
        }
    }
    let dist = FiniteDistribution::new(support, probs)?;
    let map1 = m1.map.clone();
    let structural = DistMorphism::new(dist.clone(), m1.target.clone(), move |pair: &(A, B)| {
        map1(&pair.0)
    });
    let pr1 = DistMorphism::new(dist.clone(), m1.source.clone(), |pair: &(A, B)| {
        pair.0.clone()
    });
    let pr2 = DistMorphism::new(dist.clone(), m2.source.clone(), |pair: &(A, B)| {
        pair.1.clone()
    });
    Ok(FiberProduct {
        dist,
        structural,
        pr1,
        pr2,
    })
}

/// Half-width of the two-sided 95% Hoeffding confidence interval used for
/// all empirical advantage estimates: `sqrt(ln(40) / trials)`.
pub fn hoeffding_half_width(trials: usize) -> f64 {
    (40f64.ln() / trials as f64).sqrt()
}

/// Result of an empirical distinguishing experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GameReport {
    /// Samples drawn per arm.
    pub trials: usize,
    /// Times the distinguisher output 1 on arm 0.
    pub wins0: usize,
    /// Times the distinguisher output 1 on arm 1.
    pub wins1: usize,
    /// `|wins1 - wins0| / trials`.
    pub advantage: f64,
    /// 95% Hoeffding half-width for the advantage estimate.
    pub half_width: f64,
    /// Seed that reproduces the run, when the caller drove one.
    pub seed: Option<u64>,
}

impl GameReport {
    pub fn from_wins(trials: usize, wins0: usize, wins1: usize, seed: Option<u64>) -> Self {
        let advantage = (wins1 as f64 - wins0 as f64).abs() / trials as f64;
        GameReport {
            trials,
            wins0,
            wins1,
            advantage,
            half_width: hoeffding_half_width(trials),
            seed,
        }
    }
}

/// Runs a distinguisher against two samplers, `trials` draws each, and
/// reports the empirical advantage `|#1-outputs(s1) - #1-outputs(s0)| / trials`.
pub fn estimate_advantage<T>(
    distinguisher: impl Fn(&T) -> bool,
    s0: &impl Sampler<Item = T>,
    s1: &impl Sampler<Item = T>,
    trials: usize,
    rng: &mut dyn RngCore,
) -> GameReport {
    assert!(trials >= 1, "an advantage estimate needs at least one trial");
    let mut wins0 = 0usize;
    let mut wins1 = 0usize;
    for _ in 0..trials {
        if distinguisher(&s0.sample(rng)) {
            wins0 += 1;
        }
        if distinguisher(&s1.sample(rng)) {
            wins1 += 1;
        }
    }
    GameReport::from_wins(trials, wins0, wins1, None)
}

// Serialized form: probabilities as "numerator/denominator" strings.
#[derive(Serialize, Deserialize)]
struct DistRepr<V> {
    support: Vec<V>,
    probs: Vec<String>,
}

impl<V: Value + Serialize> Serialize for FiniteDistribution<V> {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        DistRepr {
            support: self.support.clone(),
            probs: self.probs.iter().map(|p| p.to_string()).collect(),
        }
        .serialize(ser)
    }
}

impl<'de, V: Value + Deserialize<'de>> Deserialize<'de> for FiniteDistribution<V> {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let repr = DistRepr::<V>::deserialize(de)?;
        let probs = repr
            .probs
            .iter()
            .map(|s| {
                s.parse::<BigRational>()
                    .map_err(|e| de::Error::custom(format!("{s:?}: {e}")))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        FiniteDistribution::new(repr.support, probs).map_err(de::Error::custom)
    }
}
