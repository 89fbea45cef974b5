//! Dense bit-packed linear algebra over GF(2).

use rand::{Rng, RngCore};

use crate::{Error, Result};

const WORD_BITS: usize = 64;

/// A bit vector over GF(2), packed 64 bits per word.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Gf2Vec {
    len: usize,
    words: Vec<u64>,
}

impl Gf2Vec {
    pub fn zero(len: usize) -> Self {
        Gf2Vec {
            len,
            words: vec![0; len.div_ceil(WORD_BITS)],
        }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zero(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            v.set(i, b);
        }
        v
    }

    pub fn to_bits(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if bit {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    pub fn xor_assign(&mut self, other: &Gf2Vec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn and(&self, other: &Gf2Vec) -> Gf2Vec {
        debug_assert_eq!(self.len, other.len);
        Gf2Vec {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &Gf2Vec) -> bool {
        self.and(other).weight() % 2 == 1
    }

    /// Indices of set bits, ascending.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    pub fn random(len: usize, rng: &mut dyn RngCore) -> Self {
        let mut v = Self::zero(len);
        for w in &mut v.words {
            *w = rng.gen();
        }
        v.mask_tail();
        v
    }

    /// Uniform over the nonzero vectors, by rejection.
    pub fn random_nonzero(len: usize, rng: &mut dyn RngCore) -> Self {
        assert!(len > 0, "no nonzero vector of length 0");
        loop {
            let v = Self::random(len, rng);
            if !v.is_zero() {
                return v;
            }
        }
    }

    fn mask_tail(&mut self) {
        let tail = self.len % WORD_BITS;
        if tail != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
    }
}

/// A square bit matrix over GF(2), stored as packed rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gf2Matrix {
    dim: usize,
    rows: Vec<Gf2Vec>,
}

impl Gf2Matrix {
    pub fn zero(dim: usize) -> Self {
        Gf2Matrix {
            dim,
            rows: vec![Gf2Vec::zero(dim); dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            m.rows[i].set(i, true);
        }
        m
    }

    pub fn from_rows(rows: Vec<Gf2Vec>) -> Result<Self> {
        let dim = rows.len();
        for r in &rows {
            if r.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: r.len(),
                });
            }
        }
        Ok(Gf2Matrix { dim, rows })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &Gf2Vec {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, bit: bool) {
        self.rows[i].set(j, bit);
    }

    pub fn random(dim: usize, rng: &mut dyn RngCore) -> Self {
        Gf2Matrix {
            dim,
            rows: (0..dim).map(|_| Gf2Vec::random(dim, rng)).collect(),
        }
    }

    /// Uniform invertible matrix by rejection sampling of uniform matrices.
    ///
    /// A uniform matrix is invertible with probability
    /// `prod_{k>=1} (1 - 2^-k) > 0.288`, so the cap of `64 * dim` retries is
    /// astronomically unlikely to be hit.
    pub fn random_nonsingular(dim: usize, rng: &mut dyn RngCore) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("matrix dimension 0".into()));
        }
        let attempts = 64 * dim;
        for _ in 0..attempts {
            let m = Self::random(dim, rng);
            if m.is_nonsingular() {
                return Ok(m);
            }
        }
        Err(Error::SamplingExhausted {
            what: "nonsingular matrix",
            attempts,
        })
    }

    /// Rank equals dimension, by Gaussian elimination on a copy.
    pub fn is_nonsingular(&self) -> bool {
        let mut rows = self.rows.clone();
        for col in 0..self.dim {
            let Some(pivot) = (col..self.dim).find(|&r| rows[r].get(col)) else {
                return false;
            };
            rows.swap(col, pivot);
            let pivot_row = rows[col].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != col && row.get(col) {
                    row.xor_assign(&pivot_row);
                }
            }
        }
        true
    }

    /// Inverse by Gauss-Jordan elimination, `None` for singular matrices.
    pub fn inverse(&self) -> Option<Gf2Matrix> {
        let mut rows = self.rows.clone();
        let mut inv = Gf2Matrix::identity(self.dim).rows;
        for col in 0..self.dim {
            let pivot = (col..self.dim).find(|&r| rows[r].get(col))?;
            rows.swap(col, pivot);
            inv.swap(col, pivot);
            let pivot_row = rows[col].clone();
            let pivot_inv = inv[col].clone();
            for r in 0..self.dim {
                if r != col && rows[r].get(col) {
                    rows[r].xor_assign(&pivot_row);
                    inv[r].xor_assign(&pivot_inv);
                }
            }
        }
        Some(Gf2Matrix {
            dim: self.dim,
            rows: inv,
        })
    }

    /// Matrix-vector product over GF(2).
    pub fn mul_vec(&self, v: &Gf2Vec) -> Result<Gf2Vec> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            });
        }
        let mut out = Gf2Vec::zero(self.dim);
        for (i, row) in self.rows.iter().enumerate() {
            out.set(i, row.dot(v));
        }
        Ok(out)
    }

    pub fn mul_mat(&self, other: &Gf2Matrix) -> Result<Gf2Matrix> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let mut out = Gf2Matrix::zero(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let mut acc = false;
                for k in 0..self.dim {
                    acc ^= self.get(i, k) & other.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Hamming weight of row `i`.
    pub fn row_weight(&self, i: usize) -> usize {
        self.rows[i].weight()
    }

    /// All `dim x dim` matrices, for exhaustive small-case checks.
    pub fn enumerate_all(dim: usize) -> Vec<Gf2Matrix> {
        let cells = dim * dim;
        assert!(cells <= 16, "enumeration only supports tiny dimensions");
        (0u32..1 << cells)
            .map(|code| {
                let mut m = Gf2Matrix::zero(dim);
                for c in 0..cells {
                    m.set(c / dim, c % dim, code >> c & 1 == 1);
                }
                m
            })
            .collect()
    }
}
