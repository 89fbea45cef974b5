//! Finite rings that circuit evaluation and the homomorphic stand-in are
//! generic over.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A finite commutative ring with enumerable elements.
pub trait Ring: Clone + std::fmt::Debug {
    type Elem: Clone + Eq + std::hash::Hash + std::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Canonical image of an integer constant.
    fn lift(&self, v: u64) -> Self::Elem;
    fn characteristic(&self) -> u64;
    /// Every element, in a stable order.
    fn elements(&self) -> Vec<Self::Elem>;
}

/// The field with two elements; elements are `0` and `1` as `u64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct F2;

impl Ring for F2 {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) & 1
    }

    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + b) & 1
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a & b & 1
    }

    fn lift(&self, v: u64) -> u64 {
        v & 1
    }

    fn characteristic(&self) -> u64 {
        2
    }

    fn elements(&self) -> Vec<u64> {
        vec![0, 1]
    }
}

/// The prime field `F_p` for a `u64`-sized prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fp {
    p: u64,
}

impl Fp {
    /// Rejects composite or degenerate moduli.
    pub fn new(p: u64) -> Result<Self> {
        if p < 2 || !is_prime_u64(p) {
            return Err(Error::InvalidParameter(format!("{p} is not prime")));
        }
        Ok(Fp { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for d in [2u64, 3, 5, 7] {
        if n == d {
            return true;
        }
        if n.is_multiple_of(d) {
            return false;
        }
    }
    let mut d = 11u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl Ring for Fp {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1 % self.p
    }

    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }

    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b % self.p) % self.p
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (*a as u128 * *b as u128 % self.p as u128) as u64
    }

    fn lift(&self, v: u64) -> u64 {
        v % self.p
    }

    fn characteristic(&self) -> u64 {
        self.p
    }

    fn elements(&self) -> Vec<u64> {
        (0..self.p).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fp_rejects_composites() {
        assert!(Fp::new(1).is_err());
        assert!(Fp::new(4).is_err());
        assert!(Fp::new(91).is_err());
        assert!(Fp::new(5).is_ok());
        assert!(Fp::new(65537).is_ok());
    }

    #[test]
    fn f5_matches_integer_arithmetic() {
        let f5 = Fp::new(5).unwrap();
        for a in 0..5u64 {
            for b in 0..5u64 {
                assert_eq!(f5.add(&a, &b), (a + b) % 5);
                assert_eq!(f5.mul(&a, &b), a * b % 5);
                assert_eq!(f5.sub(&a, &b), (a + 5 - b) % 5);
            }
        }
    }

    #[test]
    fn f2_is_xor_and_and() {
        let f2 = F2;
        assert_eq!(f2.add(&1, &1), 0);
        assert_eq!(f2.mul(&1, &1), 1);
        assert_eq!(f2.elements(), vec![0, 1]);
    }
}
