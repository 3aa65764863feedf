//! Encoders: bijections from information indices `0..2^k` onto a code.
//!
//! Information index `j` is identified with the word `int_to_word(j, k)`;
//! linearity and translation invariance are defined through that identification.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::code::LinearCode;
use crate::error::{Error, Result};
use crate::gf2::BitWord;

/// An explicit encoder table. `table[j]` is the codeword index (canonical
/// order) of `f(ι_j)`; `inverse` undoes it.
#[derive(Clone, Debug)]
pub struct EncoderMap {
    code: Arc<LinearCode>,
    table: Vec<usize>,
    inverse: Vec<usize>,
}

impl PartialEq for EncoderMap {
    fn eq(&self, other: &Self) -> bool {
        *self.code == *other.code && self.table == other.table
    }
}

impl EncoderMap {
    /// Builds an encoder from a table of codeword indices, checking bijectivity.
    pub fn from_indices(code: Arc<LinearCode>, table: Vec<usize>) -> Result<Self> {
        let m = code.size();
        if table.len() != m {
            return Err(Error::Shape(format!(
                "encoder table has {} entries, code has {m}",
                table.len()
            )));
        }
        let mut inverse = vec![usize::MAX; m];
        for (j, &c) in table.iter().enumerate() {
            if c >= m || inverse[c] != usize::MAX {
                return Err(Error::Precondition(
                    "encoder table is not a bijection".into(),
                ));
            }
            inverse[c] = j;
        }
        Ok(Self {
            code,
            table,
            inverse,
        })
    }

    /// Builds an encoder from the images `f(ι_0), f(ι_1), ...` as words.
    pub fn from_codewords(code: Arc<LinearCode>, images: &[BitWord]) -> Result<Self> {
        let table = images
            .iter()
            .map(|&c| code.index_of(c).ok_or(Error::NotACodeword))
            .collect::<Result<Vec<_>>>()?;
        Self::from_indices(code, table)
    }

    pub fn code(&self) -> &Arc<LinearCode> {
        &self.code
    }

    /// Number of information symbols, `2^k`.
    pub fn size(&self) -> usize {
        self.table.len()
    }

    pub fn encode(&self, info: usize) -> BitWord {
        self.code.codeword(self.table[info])
    }

    pub fn encode_index(&self, info: usize) -> usize {
        self.table[info]
    }

    /// Information index of the codeword with canonical index `codeword`.
    pub fn decode_index(&self, codeword: usize) -> usize {
        self.inverse[codeword]
    }

    pub fn preimage(&self, c: BitWord) -> Result<usize> {
        self.code
            .index_of(c)
            .map(|i| self.inverse[i])
            .ok_or(Error::NotACodeword)
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn inverse_table(&self) -> &[usize] {
        &self.inverse
    }

    /// Same map with images `j1` and `j2` exchanged.
    pub fn transposed(&self, j1: usize, j2: usize) -> Self {
        let mut table = self.table.clone();
        table.swap(j1, j2);
        Self::from_indices(self.code.clone(), table).expect("transposition keeps bijectivity")
    }

    /// `f(a ⊕ b) = f(a) ⊕ f(b)` for all information words.
    ///
    /// Checked as `f(0) = 0` plus agreement with the linear extension of the
    /// basis images, which is equivalent to the pairwise condition.
    pub fn is_linear(&self) -> bool {
        let words = self.code.codeword_values();
        let image = |j: usize| words[self.table[j]];
        if image(0) != 0 {
            return false;
        }
        let k = self.code.k();
        let basis: Vec<u64> = (0..k).map(|i| image(1 << i)).collect();
        (0..self.size()).all(|j| {
            let expected = (0..k)
                .filter(|i| (j >> i) & 1 == 1)
                .fold(0u64, |acc, i| acc ^ basis[i]);
            image(j) == expected
        })
    }
}

pub fn is_linear_encoder(f: &EncoderMap) -> bool {
    f.is_linear()
}

/// `f(ι_j)` is the codeword with the `j`-th smallest integer value.
pub fn lexicographic_encoder(code: Arc<LinearCode>) -> EncoderMap {
    let m = code.size();
    EncoderMap::from_indices(code, (0..m).collect()).expect("identity table")
}

/// Binary reflected Gray encoder over the full space `F_2^k`.
pub fn gray_encoder(k: usize) -> Result<EncoderMap> {
    if !(1..=16).contains(&k) {
        return Err(Error::OutOfRange(format!("gray encoder dimension {k}")));
    }
    gray_encoder_for(Arc::new(LinearCode::identity(k)?))
}

/// Gray encoder on an existing code, which must be all of `F_2^k`.
pub fn gray_encoder_for(code: Arc<LinearCode>) -> Result<EncoderMap> {
    if code.n() != code.k() {
        return Err(Error::Precondition(
            "gray encoding is defined only for codes without redundancy".into(),
        ));
    }
    let table = (0..code.size()).map(|j| j ^ (j >> 1)).collect();
    EncoderMap::from_indices(code, table)
}

/// Codewords ordered by Hamming weight, ties by ascending integer value.
pub fn weight_priority_encoder(code: Arc<LinearCode>) -> EncoderMap {
    let words = code.codeword_values();
    let mut table: Vec<usize> = (0..code.size()).collect();
    table.sort_by_key(|&i| (words[i].count_ones(), words[i]));
    EncoderMap::from_indices(code, table).expect("permutation")
}

pub fn random_encoder(code: Arc<LinearCode>, seed: u64) -> EncoderMap {
    let mut table: Vec<usize> = (0..code.size()).collect();
    table.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    EncoderMap::from_indices(code, table).expect("permutation")
}

/// `ι_j ↦ word(j) · G`, for a generator given as `k` packed rows.
pub fn generator_encoder(code: Arc<LinearCode>, rows: &[u64]) -> Result<EncoderMap> {
    if rows.len() != code.k() {
        return Err(Error::Shape(format!(
            "{} generator rows for k = {}",
            rows.len(),
            code.k()
        )));
    }
    let images = (0..code.size())
        .map(|j| {
            let v = rows
                .iter()
                .enumerate()
                .filter(|(i, _)| (j >> i) & 1 == 1)
                .fold(0u64, |acc, (_, r)| acc ^ r);
            code.index_of_raw(v).ok_or(Error::NotACodeword)
        })
        .collect::<Result<Vec<_>>>()?;
    EncoderMap::from_indices(code, images)
}

/// Linear encoder through the reduced row echelon generator; information
/// bits can be read at the pivot coordinates.
pub fn systematic_encoder(code: Arc<LinearCode>) -> EncoderMap {
    let g = code.systematic_generator();
    let rows = g.packed_rows().to_vec();
    generator_encoder(code, &rows).expect("generator rows span the code")
}
