//! Arbitrary-precision modular arithmetic: Jacobi symbols, toy prime
//! generation, and the modulus/nonresidue search behind the GM scheme.
//!
//! Everything takes an explicit RNG; prime generation is Miller-Rabin with
//! 40 rounds and is intended for test-scale keys, not production use.

mod gf2;

pub use gf2::{Gf2Matrix, Gf2Vec};

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::{encoding::serde_hex, Error, Result};

/// Number of Miller-Rabin rounds used for all primality tests.
pub const MILLER_RABIN_ROUNDS: usize = 40;

/// An odd modulus `n >= 3`, the only kind this crate works with.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Modulus(#[serde(with = "serde_hex")] BigUint);

impl Modulus {
    /// Validates that `n` is odd and at least 3.
    pub fn new(n: BigUint) -> Result<Self> {
        if n < BigUint::from(3u8) || n.is_even() {
            return Err(Error::BadModulus(n.to_string()));
        }
        Ok(Modulus(n))
    }

    pub fn from_u64(n: u64) -> Result<Self> {
        Self::new(BigUint::from(n))
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn bits(&self) -> u64 {
        self.0.bits()
    }
}

impl std::fmt::Display for Modulus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// Jacobi symbol `(a/n)` in `{-1, 0, 1}`.
///
/// Binary algorithm: strip factors of two with the supplementary law, flip
/// by quadratic reciprocity, reduce, repeat. Multiplicative in `a` and
/// depends only on `a mod n`.
pub fn jacobi(a: &BigUint, n: &Modulus) -> i8 {
    let mut num = a % n.value();
    let mut den = n.value().clone();
    let mut acc = 1i8;
    loop {
        num %= &den;
        if num.is_zero() {
            return if den.is_one() { acc } else { 0 };
        }
        // (2/den) = 1 iff den = ±1 mod 8
        let twos = num.trailing_zeros().unwrap_or(0);
        if twos % 2 == 1 {
            let d8 = (&den % 8u8).to_u64_digits().first().copied().unwrap_or(0);
            if d8 == 3 || d8 == 5 {
                acc = -acc;
            }
        }
        num >>= twos;
        if num.is_one() {
            return acc;
        }
        // both odd now; reciprocity flips the sign iff both are 3 mod 4
        let n4 = (&num % 4u8).to_u64_digits().first().copied().unwrap_or(0);
        let d4 = (&den % 4u8).to_u64_digits().first().copied().unwrap_or(0);
        if n4 == 3 && d4 == 3 {
            acc = -acc;
        }
        std::mem::swap(&mut num, &mut den);
    }
}

/// Legendre symbol `(a/p)` via Euler's criterion, `a^((p-1)/2) mod p`.
///
/// `p` must be an odd prime; the result is in `{-1, 0, 1}`.
pub fn legendre_euler(a: &BigUint, p: &BigUint) -> i8 {
    let exp = (p - 1u8) >> 1;
    let r = a.modpow(&exp, p);
    if r.is_zero() {
        0
    } else if r.is_one() {
        1
    } else {
        -1
    }
}

/// Miller-Rabin with [`MILLER_RABIN_ROUNDS`] random bases.
pub fn is_probable_prime(n: &BigUint, rng: &mut dyn RngCore) -> bool {
    let two = BigUint::from(2u8);
    let three = BigUint::from(3u8);
    if *n < two {
        return false;
    }
    if *n == two || *n == three {
        return true;
    }
    if n.is_even() {
        return false;
    }
    // quick screen by small primes
    for &p in &[3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        let p = BigUint::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let n_minus_one = n - 1u8;
    let s = n_minus_one.trailing_zeros().unwrap();
    let d = &n_minus_one >> s;
    'witness: for _ in 0..MILLER_RABIN_ROUNDS {
        let a = rng.gen_biguint_range(&two, &n_minus_one);
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_one {
            continue;
        }
        for _ in 0..s - 1 {
            x = x.modpow(&two, n);
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Samples a prime with exactly `bits` bits (top and bottom bit set).
pub fn gen_prime(bits: u64, rng: &mut dyn RngCore) -> Result<BigUint> {
    if bits < 2 {
        return Err(Error::InvalidParameter("prime size below 2 bits".into()));
    }
    let attempts = 64 * bits as usize * bits as usize;
    for _ in 0..attempts {
        let mut candidate = rng.gen_biguint(bits);
        candidate.set_bit(bits - 1, true);
        candidate.set_bit(0, true);
        if is_probable_prime(&candidate, rng) {
            return Ok(candidate);
        }
    }
    Err(Error::SamplingExhausted {
        what: "prime",
        attempts,
    })
}

/// Uniform unit modulo `n`.
pub fn uniform_unit(n: &BigUint, rng: &mut dyn RngCore) -> Result<BigUint> {
    const ATTEMPTS: usize = 4096;
    let one = BigUint::one();
    for _ in 0..ATTEMPTS {
        let x = rng.gen_biguint_range(&one, n);
        if x.gcd(n).is_one() {
            return Ok(x);
        }
    }
    Err(Error::SamplingExhausted {
        what: "unit",
        attempts: ATTEMPTS,
    })
}

/// A freshly generated GM modulus: distinct primes, their product, and a
/// unit that is a quadratic nonresidue modulo both primes.
#[derive(Debug, Clone)]
pub struct GmModulus {
    pub p: BigUint,
    pub q: BigUint,
    pub n: Modulus,
    pub eta: BigUint,
}

/// Generates `N = pq` with `p`, `q` distinct primes of about
/// `bit_length / 2` bits each, and `eta` with `(eta/p) = (eta/q) = -1`.
///
/// The nonresidue search tests per-prime Legendre symbols with Euler's
/// criterion and succeeds for a quarter of all units, so the retry cap is
/// never reached in practice.
pub fn gen_gm_modulus(bit_length: u64, rng: &mut dyn RngCore) -> Result<GmModulus> {
    if bit_length < 16 {
        return Err(Error::InvalidParameter(format!(
            "modulus size {bit_length} below the 16-bit minimum"
        )));
    }
    let p_bits = bit_length.div_ceil(2);
    let q_bits = bit_length / 2;
    let p = gen_prime(p_bits, rng)?;
    let mut q = gen_prime(q_bits, rng)?;
    let mut regen = 0usize;
    while q == p {
        regen += 1;
        if regen > 64 {
            return Err(Error::SamplingExhausted {
                what: "distinct primes",
                attempts: regen,
            });
        }
        q = gen_prime(q_bits, rng)?;
    }
    let n = Modulus::new(&p * &q)?;
    const ETA_ATTEMPTS: usize = 4096;
    for _ in 0..ETA_ATTEMPTS {
        let eta = uniform_unit(n.value(), rng)?;
        if legendre_euler(&eta, &p) == -1 && legendre_euler(&eta, &q) == -1 {
            return Ok(GmModulus { p, q, n, eta });
        }
    }
    Err(Error::SamplingExhausted {
        what: "nonresidue",
        attempts: ETA_ATTEMPTS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn n77() -> Modulus {
        Modulus::from_u64(77).unwrap()
    }

    /// Squares modulo an odd prime, by exhaustive enumeration.
    fn squares_mod(p: u64) -> std::collections::HashSet<u64> {
        (1..p).map(|x| x * x % p).collect()
    }

    fn legendre_by_enumeration(a: u64, p: u64) -> i8 {
        if a.is_multiple_of(p) {
            0
        } else if squares_mod(p).contains(&(a % p)) {
            1
        } else {
            -1
        }
    }

    #[test]
    fn modulus_rejects_even_and_small() {
        assert!(Modulus::from_u64(2).is_err());
        assert!(Modulus::from_u64(8).is_err());
        assert!(Modulus::from_u64(0).is_err());
        assert!(Modulus::from_u64(3).is_ok());
    }

    #[test]
    fn jacobi_known_values() {
        let n15 = Modulus::from_u64(15).unwrap();
        assert_eq!(jacobi(&BigUint::from(1u8), &n15), 1);
        assert_eq!(jacobi(&BigUint::from(0u8), &n15), 0);
        // (6/77) = 1 although 6 is a nonresidue mod both 7 and 11
        assert_eq!(legendre_by_enumeration(6, 7), -1);
        assert_eq!(legendre_by_enumeration(6, 11), -1);
        assert_eq!(jacobi(&BigUint::from(6u8), &n77()), 1);
    }

    #[test]
    fn jacobi_matches_legendre_on_primes() {
        for p in [3u64, 7, 11, 13, 101] {
            let m = Modulus::from_u64(p).unwrap();
            for a in 0..p {
                assert_eq!(
                    jacobi(&BigUint::from(a), &m),
                    legendre_by_enumeration(a, p),
                    "a={a} p={p}"
                );
            }
        }
    }

    #[test]
    fn jacobi_is_multiplicative() {
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        for _ in 0..1000 {
            // random odd modulus, random pair
            let n = rng.gen_biguint(14) | BigUint::from(0x2001u64);
            let n = Modulus::new(n).unwrap();
            let a = rng.gen_biguint_below(n.value());
            let b = rng.gen_biguint_below(n.value());
            let ab = &a * &b;
            assert_eq!(jacobi(&ab, &n), jacobi(&a, &n) * jacobi(&b, &n), "a={a} b={b} n={n}");
        }
    }

    #[test]
    fn jacobi_of_squares_is_one() {
        let mut rng = ChaCha20Rng::seed_from_u64(12);
        let n = Modulus::from_u64(3 * 5 * 7 * 11).unwrap();
        for _ in 0..1000 {
            let x = uniform_unit(n.value(), &mut rng).unwrap();
            assert_eq!(jacobi(&(&x * &x), &n), 1);
        }
    }

    #[test]
    fn euler_agrees_with_binary_jacobi_on_primes() {
        let mut rng = ChaCha20Rng::seed_from_u64(13);
        for p in [7u64, 11, 103, 65537] {
            let m = Modulus::from_u64(p).unwrap();
            let pb = BigUint::from(p);
            for _ in 0..200 {
                let a = rng.gen_biguint_below(&pb);
                assert_eq!(legendre_euler(&a, &pb), jacobi(&a, &m));
            }
        }
    }

    #[test]
    fn millerrabin_small_values() {
        let mut rng = ChaCha20Rng::seed_from_u64(14);
        let primes = [2u64, 3, 5, 7, 11, 13, 65537, 2147483647];
        let composites = [1u64, 4, 9, 15, 341, 561, 1105, 1729, 2465, 6601, 62745];
        for p in primes {
            assert!(
                is_probable_prime(&BigUint::from(p), &mut rng),
                "{p} is prime"
            );
        }
        for c in composites {
            assert!(
                !is_probable_prime(&BigUint::from(c), &mut rng),
                "{c} is composite"
            );
        }
    }

    #[test]
    fn generated_moduli_are_valid() {
        let mut rng = ChaCha20Rng::seed_from_u64(15);
        for _ in 0..20 {
            let m = gen_gm_modulus(32, &mut rng).unwrap();
            assert_ne!(m.p, m.q);
            assert_eq!(m.n.value(), &(&m.p * &m.q));
            assert_eq!(legendre_euler(&m.eta, &m.p), -1);
            assert_eq!(legendre_euler(&m.eta, &m.q), -1);
            assert_eq!(jacobi(&m.eta, &m.n), 1);
        }
    }

    #[test]
    fn generated_primes_stay_distinct() {
        let mut rng = ChaCha20Rng::seed_from_u64(16);
        for _ in 0..1000 {
            let m = gen_gm_modulus(16, &mut rng).unwrap();
            assert_ne!(m.p, m.q);
        }
    }

    #[test]
    fn rejects_tiny_modulus_request() {
        let mut rng = ChaCha20Rng::seed_from_u64(17);
        assert!(gen_gm_modulus(8, &mut rng).is_err());
    }

    #[test]
    fn forced_toy_modulus_admits_eta_six() {
        // p=7, q=11: 6 is a nonresidue mod both, so eta=6 is a valid choice
        assert_eq!(legendre_euler(&BigUint::from(6u8), &BigUint::from(7u8)), -1);
        assert_eq!(
            legendre_euler(&BigUint::from(6u8), &BigUint::from(11u8)),
            -1
        );
        assert_eq!(jacobi(&BigUint::from(6u8), &n77()), 1);
    }
}
