//! Binary linear codes and the concrete `[7;4]` and `[15;11]` codes used in
//! the experiments.

use crate::error::{Error, Result};
use crate::gf2::{top_index, BinMatrix, BitWord};

/// Largest dimension for which the codeword list is materialized.
pub const MAX_DIMENSION: usize = 16;

/// An `[n;k]` binary linear code with its full codeword list.
#[derive(Clone, Debug)]
pub struct LinearCode {
    n: usize,
    k: usize,
    generator: BinMatrix,
    parity_check: BinMatrix,
    codewords: Vec<u64>,
}

impl LinearCode {
    pub fn from_generator(g: BinMatrix) -> Result<Self> {
        let rank = g.rank();
        if rank != g.rows() || rank == 0 {
            return Err(Error::RankDeficient {
                rank,
                rows: g.rows(),
            });
        }
        let h = g.null_space();
        Self::assemble(g, h)
    }

    pub fn from_parity(h: BinMatrix) -> Result<Self> {
        let rank = h.rank();
        if rank != h.rows() {
            return Err(Error::RankDeficient {
                rank,
                rows: h.rows(),
            });
        }
        let g = h.null_space();
        if g.rows() == 0 {
            return Err(Error::Precondition(
                "parity check defines the zero code".into(),
            ));
        }
        Self::assemble(g, h)
    }

    /// The whole space `F_2^k` (no redundancy).
    pub fn identity(k: usize) -> Result<Self> {
        Self::from_generator(BinMatrix::identity(k)?)
    }

    fn assemble(generator: BinMatrix, parity_check: BinMatrix) -> Result<Self> {
        let k = generator.rows();
        if k > MAX_DIMENSION {
            return Err(Error::TooLarge(format!("dimension {k} > {MAX_DIMENSION}")));
        }
        let codewords = generator.row_span();
        Ok(Self {
            n: generator.cols(),
            k,
            generator,
            parity_check,
            codewords,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of codewords `M = 2^k`.
    pub fn size(&self) -> usize {
        self.codewords.len()
    }

    pub fn generator(&self) -> &BinMatrix {
        &self.generator
    }

    /// `(n-k) × n`; has zero rows when `k = n`.
    pub fn parity_check(&self) -> &BinMatrix {
        &self.parity_check
    }

    /// Codewords as raw integers, strictly increasing.
    pub fn codeword_values(&self) -> &[u64] {
        &self.codewords
    }

    pub fn codeword(&self, index: usize) -> BitWord {
        BitWord::from_raw(self.codewords[index], self.n)
    }

    pub fn codewords(&self) -> impl Iterator<Item = BitWord> + '_ {
        self.codewords.iter().map(|&c| BitWord::from_raw(c, self.n))
    }

    /// Position of `c` in the canonical (ascending) order, if it is a codeword.
    pub fn index_of(&self, c: BitWord) -> Option<usize> {
        if c.len() != self.n {
            return None;
        }
        self.index_of_raw(c.value())
    }

    #[inline]
    pub(crate) fn index_of_raw(&self, c: u64) -> Option<usize> {
        self.codewords.binary_search(&c).ok()
    }

    pub fn contains(&self, y: BitWord) -> bool {
        self.index_of(y).is_some()
    }

    pub fn word(&self, value: u64) -> Result<BitWord> {
        BitWord::new(value, self.n)
    }

    /// `H · yᵀ`, of length `n - k`. Row 1 of `H` gives the least significant bit.
    pub fn syndrome(&self, y: BitWord) -> Result<BitWord> {
        if y.len() != self.n {
            return Err(Error::LengthMismatch {
                left: self.n,
                right: y.len(),
            });
        }
        if self.parity_check.rows() == 0 {
            return Err(Error::Precondition("code has no redundancy".into()));
        }
        self.parity_check.mul_vec(y)
    }

    #[inline]
    pub(crate) fn syndrome_raw(&self, y: u64) -> u64 {
        self.parity_check.mul_raw(y)
    }

    pub fn min_distance(&self) -> Result<u32> {
        if self.k > MAX_DIMENSION {
            return Err(Error::TooLarge(format!("k = {}", self.k)));
        }
        if self.k == 0 {
            return Err(Error::Precondition("zero code".into()));
        }
        Ok(self
            .codewords
            .iter()
            .skip(1)
            .map(|c| c.count_ones())
            .min()
            .expect("k >= 1"))
    }

    /// Number of codewords of each Hamming weight `0..=n`.
    pub fn weight_distribution(&self) -> Vec<usize> {
        let mut dist = vec![0; self.n + 1];
        for c in &self.codewords {
            dist[c.count_ones() as usize] += 1;
        }
        dist
    }

    /// `word(j) · G` with the generator in reduced row echelon form, so the
    /// information bits appear unchanged at the pivot coordinates.
    pub fn systematic_generator(&self) -> BinMatrix {
        self.generator.row_reduce().0
    }

    /// Basis whose rows have pairwise distinct top coordinates, sorted by top
    /// coordinate descending. Used by the total-order decoder.
    pub(crate) fn top_echelon_basis(&self) -> Vec<u64> {
        let mut rows: Vec<u64> = self.generator.packed_rows().to_vec();
        let mut basis: Vec<u64> = Vec::with_capacity(rows.len());
        while let Some(pos) = (0..rows.len()).max_by_key(|&i| top_index(rows[i])) {
            let pivot = rows.swap_remove(pos);
            if pivot == 0 {
                break;
            }
            let t = top_index(pivot);
            for r in rows.iter_mut() {
                if top_index(*r) == t {
                    *r ^= pivot;
                }
            }
            basis.push(pivot);
        }
        basis
    }
}

impl PartialEq for LinearCode {
    /// Codes are equal when they have the same length and codeword set.
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.codewords == other.codewords
    }
}

/// Binary Hamming code of redundancy `l`; column `j` of the parity-check
/// matrix is the binary expansion of `j`, least significant bit in row 1.
pub fn hamming_code(l: usize) -> Result<LinearCode> {
    if !(2..=6).contains(&l) {
        return Err(Error::OutOfRange(format!(
            "hamming redundancy l = {l} (2..=6)"
        )));
    }
    let n = (1usize << l) - 1;
    let rows: Vec<u64> = (0..l)
        .map(|r| {
            (1..=n)
                .filter(|j| (j >> r) & 1 == 1)
                .fold(0u64, |acc, j| acc | 1 << (j - 1))
        })
        .collect();
    LinearCode::from_parity(BinMatrix::from_packed_rows(rows, n)?)
}

pub fn h3_parity_check() -> BinMatrix {
    BinMatrix::from_rows(&[
        &[1, 0, 1, 0, 1, 0, 1],
        &[0, 1, 1, 0, 0, 1, 1],
        &[0, 0, 0, 1, 1, 1, 1],
    ])
    .expect("static matrix")
}

pub fn c3_generator() -> BinMatrix {
    BinMatrix::from_rows(&[
        &[1, 0, 0, 0, 1, 0, 1],
        &[0, 1, 0, 0, 0, 1, 1],
        &[0, 0, 1, 0, 1, 1, 0],
        &[0, 0, 0, 1, 0, 0, 1],
    ])
    .expect("static matrix")
}

pub fn c4_parity_check() -> BinMatrix {
    BinMatrix::from_rows(&[
        &[1, 0, 0, 0, 1, 1, 1, 0, 0, 0, 0, 0, 1, 1, 0],
        &[0, 1, 0, 0, 0, 1, 0, 1, 1, 1, 0, 1, 0, 1, 0],
        &[0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 1],
        &[0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 1, 0, 1, 1],
    ])
    .expect("static matrix")
}

/// The `[7;4]` code `C(3)` given by its generator matrix.
pub fn paper_code_c3() -> LinearCode {
    LinearCode::from_generator(c3_generator()).expect("C(3) generator has full rank")
}

/// The `[15;11]` code `C(4)` given by its parity-check matrix.
pub fn paper_code_c4() -> LinearCode {
    LinearCode::from_parity(c4_parity_check()).expect("C(4) parity check has full rank")
}

/// `H(3)` built from the printed parity-check matrix.
pub fn paper_code_h3() -> LinearCode {
    LinearCode::from_parity(h3_parity_check()).expect("H(3) parity check has full rank")
}

pub fn repetition_code(n: usize) -> Result<LinearCode> {
    LinearCode::from_generator(BinMatrix::from_packed_rows(
        vec![BitWord::ones(n)?.value()],
        n,
    )?)
}
