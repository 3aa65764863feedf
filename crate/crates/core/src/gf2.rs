//! Bit words and dense matrices over GF(2).
//!
//! Coordinates are numbered `1..=n`; coordinate `i` carries positional weight
//! `2^(i-1)`, so coordinate 1 is the least significant bit of the integer
//! value of a word. The same convention is used for matrix columns: column
//! `j` of a [`BinMatrix`] row is bit `j-1` of the packed row.

use std::fmt;
use std::ops::BitXor;

use crate::error::{Error, Result};

pub const MAX_LEN: usize = 64;

#[inline]
fn mask(len: usize) -> u64 {
    if len == 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

/// A word of `len` bits over GF(2), stored LSB-first in a `u64`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitWord {
    value: u64,
    len: u8,
}

impl BitWord {
    pub fn new(value: u64, len: usize) -> Result<Self> {
        if len == 0 || len > MAX_LEN {
            return Err(Error::InvalidLength(len));
        }
        if value & !mask(len) != 0 {
            return Err(Error::ValueOutOfRange { value, len });
        }
        Ok(Self {
            value,
            len: len as u8,
        })
    }

    /// Builds a word from coordinate values `bits[0] = x_1, bits[1] = x_2, ...`.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        if bits.is_empty() || bits.len() > MAX_LEN {
            return Err(Error::InvalidLength(bits.len()));
        }
        let mut value = 0u64;
        for (i, &b) in bits.iter().enumerate() {
            match b {
                0 => {}
                1 => value |= 1 << i,
                _ => return Err(Error::OutOfRange(format!("bit value {b}"))),
            }
        }
        Self::new(value, bits.len())
    }

    pub fn zero(len: usize) -> Result<Self> {
        Self::new(0, len)
    }

    /// Standard basis word `e_i` (1-based coordinate).
    pub fn basis(i: usize, len: usize) -> Result<Self> {
        if i == 0 || i > len {
            return Err(Error::OutOfRange(format!(
                "basis index {i} for length {len}"
            )));
        }
        Self::new(1 << (i - 1), len)
    }

    pub fn ones(len: usize) -> Result<Self> {
        if len == 0 || len > MAX_LEN {
            return Err(Error::InvalidLength(len));
        }
        Self::new(mask(len), len)
    }

    #[inline]
    pub(crate) fn from_raw(value: u64, len: usize) -> Self {
        debug_assert!((1..=MAX_LEN).contains(&len) && value & !mask(len) == 0);
        Self {
            value,
            len: len as u8,
        }
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn len(self) -> usize {
        self.len as usize
    }

    /// Always false; words have at least one coordinate.
    #[inline]
    pub fn is_empty(self) -> bool {
        false
    }

    /// Coordinate `i` (1-based).
    #[inline]
    pub fn bit(self, i: usize) -> u8 {
        assert!(i >= 1 && i <= self.len(), "coordinate {i} out of range");
        ((self.value >> (i - 1)) & 1) as u8
    }

    pub fn bits(self) -> Vec<u8> {
        (1..=self.len()).map(|i| self.bit(i)).collect()
    }

    #[inline]
    pub fn weight(self) -> u32 {
        self.value.count_ones()
    }

    pub fn support(self) -> Vec<usize> {
        (1..=self.len()).filter(|&i| self.bit(i) == 1).collect()
    }

    pub fn complement(self) -> Self {
        Self::from_raw(!self.value & mask(self.len()), self.len())
    }

    pub fn checked_add(self, other: Self) -> Result<Self> {
        same_len(self, other)?;
        Ok(Self::from_raw(self.value ^ other.value, self.len()))
    }
}

impl BitXor for BitWord {
    type Output = BitWord;

    /// Panics on length mismatch; use [`BitWord::checked_add`] for fallible addition.
    fn bitxor(self, rhs: Self) -> Self {
        assert_eq!(self.len, rhs.len, "length mismatch in word addition");
        Self::from_raw(self.value ^ rhs.value, self.len())
    }
}

/// Printed as `x_1 x_2 ... x_n`, the order used for matrices and words throughout.
impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.len() {
            write!(f, "{}", self.bit(i))?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitWord({self})")
    }
}

fn same_len(x: BitWord, y: BitWord) -> Result<()> {
    if x.len != y.len {
        Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        })
    } else {
        Ok(())
    }
}

pub fn weight(x: BitWord) -> u32 {
    x.weight()
}

pub fn support(x: BitWord) -> Vec<usize> {
    x.support()
}

pub fn hamming_distance(x: BitWord, y: BitWord) -> Result<u32> {
    same_len(x, y)?;
    Ok((x.value ^ y.value).count_ones())
}

/// Largest coordinate at which the words differ, 0 when they are equal.
pub fn total_order_distance(x: BitWord, y: BitWord) -> Result<u32> {
    same_len(x, y)?;
    Ok(top_index(x.value ^ y.value))
}

/// 1-based index of the highest set bit, 0 for zero.
#[inline]
pub(crate) fn top_index(v: u64) -> u32 {
    64 - v.leading_zeros()
}

pub fn word_to_int(x: BitWord) -> u64 {
    x.value
}

pub fn int_to_word(v: u64, n: usize) -> Result<BitWord> {
    BitWord::new(v, n)
}

/// Dense GF(2) matrix; each row packed LSB-first (column 1 is bit 0).
///
/// A matrix may have zero rows (e.g. the null space of an invertible matrix).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinMatrix {
    rows: Vec<u64>,
    cols: usize,
}

impl BinMatrix {
    pub fn from_packed_rows(rows: Vec<u64>, cols: usize) -> Result<Self> {
        if cols == 0 || cols > MAX_LEN {
            return Err(Error::InvalidLength(cols));
        }
        if let Some(r) = rows.iter().find(|r| **r & !mask(cols) != 0) {
            return Err(Error::ValueOutOfRange {
                value: *r,
                len: cols,
            });
        }
        Ok(Self { rows, cols })
    }

    /// Rows given as printed, left to right = column 1..n.
    pub fn from_rows(rows: &[&[u8]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut packed = Vec::with_capacity(rows.len());
        for row in rows {
            if row.len() != cols {
                return Err(Error::Shape("ragged rows".into()));
            }
            packed.push(BitWord::from_bits(row)?.value());
        }
        Self::from_packed_rows(packed, cols)
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_packed_rows((0..n).map(|i| 1u64 << i).collect(), n)
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Self::from_packed_rows(vec![0; rows], cols)
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn packed_rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn row(&self, r: usize) -> BitWord {
        BitWord::from_raw(self.rows[r], self.cols)
    }

    /// Entry at 0-based `(r, c)`.
    pub fn get(&self, r: usize, c: usize) -> u8 {
        ((self.rows[r] >> c) & 1) as u8
    }

    /// `M · v` over GF(2); bit `r` of the result is row `r` dotted with `v`.
    pub fn mul_vec(&self, v: BitWord) -> Result<BitWord> {
        if v.len() != self.cols {
            return Err(Error::LengthMismatch {
                left: self.cols,
                right: v.len(),
            });
        }
        if self.rows.is_empty() {
            return Err(Error::Shape("product with an empty matrix".into()));
        }
        Ok(BitWord::from_raw(self.mul_raw(v.value()), self.rows.len()))
    }

    #[inline]
    pub(crate) fn mul_raw(&self, v: u64) -> u64 {
        self.rows.iter().enumerate().fold(0, |acc, (r, row)| {
            acc | (((row & v).count_ones() as u64 & 1) << r)
        })
    }

    pub fn transpose(&self) -> Result<Self> {
        let mut out = vec![0u64; self.cols];
        for (r, row) in self.rows.iter().enumerate() {
            for (c, o) in out.iter_mut().enumerate() {
                *o |= ((row >> c) & 1) << r;
            }
        }
        Self::from_packed_rows(out, self.rows.len().max(1))
    }

    /// `self · otherᵀ`, i.e. pairwise row inner products.
    pub fn mul_transpose(&self, other: &BinMatrix) -> Result<Vec<u64>> {
        if self.cols != other.cols {
            return Err(Error::Shape(format!(
                "{} columns vs {} columns",
                self.cols, other.cols
            )));
        }
        Ok(self.rows.iter().map(|&r| other.mul_raw(r)).collect())
    }

    /// Reduced row echelon form (pivots scanned from column 1 upward) and rank.
    /// Zero rows are dropped from the result.
    pub fn row_reduce(&self) -> (BinMatrix, usize) {
        let (rows, _) = rref(&self.rows, self.cols);
        let rank = rows.len();
        (
            BinMatrix {
                rows,
                cols: self.cols,
            },
            rank,
        )
    }

    pub fn rank(&self) -> usize {
        rref(&self.rows, self.cols).0.len()
    }

    /// Basis of `{v : M·v = 0}` as the rows of the returned matrix.
    pub fn null_space(&self) -> BinMatrix {
        let (rows, pivots) = rref(&self.rows, self.cols);
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = 1u64 << free;
            for (row, &p) in rows.iter().zip(&pivots) {
                if (row >> free) & 1 == 1 {
                    v |= 1 << p;
                }
            }
            basis.push(v);
        }
        BinMatrix {
            rows: basis,
            cols: self.cols,
        }
    }

    /// All `2^rows` combinations of the rows, sorted ascending.
    pub fn row_span(&self) -> Vec<u64> {
        let mut span = Vec::with_capacity(1 << self.rows.len());
        span.push(0u64);
        for &r in &self.rows {
            let len = span.len();
            for i in 0..len {
                span.push(span[i] ^ r);
            }
        }
        span.sort_unstable();
        span.dedup();
        span
    }
}

/// Returns the nonzero rows of the RREF and their pivot columns.
fn rref(input: &[u64], cols: usize) -> (Vec<u64>, Vec<usize>) {
    let mut rows = input.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| (rows[i] >> c) & 1 == 1) else {
            continue;
        };
        rows.swap(r, p);
        let pivot_row = rows[r];
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && (*row >> c) & 1 == 1 {
                *row ^= pivot_row;
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

impl fmt::Debug for BinMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinMatrix {}x{} [", self.rows.len(), self.cols)?;
        for r in 0..self.rows.len() {
            writeln!(f, "  {}", self.row(r))?;
        }
        write!(f, "]")
    }
}
