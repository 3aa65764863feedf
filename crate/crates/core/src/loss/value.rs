//! Error value functions on information pairs and their pushforward onto
//! codeword pairs.
//!
//! Arguments are ordered `(sent, decoded)`: `ν(ι, ι′)` is the cost of
//! delivering `ι′` when `ι` was transmitted.

use crate::encoder::EncoderMap;
use crate::error::{Error, Result};

/// Largest information dimension for dense value tables.
pub const MAX_VALUE_K: usize = 11;

const INVARIANCE_TOL: f64 = 1e-12;

/// Dense `2^k × 2^k` table of non-negative costs over information indices.
#[derive(Clone, Debug, PartialEq)]
pub struct ValueTable {
    k: usize,
    values: Vec<f64>,
}

impl ValueTable {
    pub fn from_fn(k: usize, f: impl Fn(usize, usize) -> f64) -> Result<Self> {
        if k == 0 || k > MAX_VALUE_K {
            return Err(Error::OutOfRange(format!("value table dimension k = {k}")));
        }
        let m = 1usize << k;
        let mut values = Vec::with_capacity(m * m);
        for a in 0..m {
            for b in 0..m {
                let v = f(a, b);
                if v.is_nan() || v < 0.0 || v.is_infinite() {
                    return Err(Error::OutOfRange(format!("value ({a}, {b}) = {v}")));
                }
                values.push(v);
            }
        }
        Ok(Self { k, values })
    }

    /// Translation-invariant table `ν(x, y) = ν̃(x ⊕ y)`.
    pub fn from_reduced(k: usize, reduced: &[f64]) -> Result<Self> {
        if reduced.len() != 1 << k {
            return Err(Error::Shape(format!(
                "reduced table of length {} for k = {k}",
                reduced.len()
            )));
        }
        Self::from_fn(k, |a, b| reduced[a ^ b])
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn size(&self) -> usize {
        1 << self.k
    }

    #[inline]
    pub fn get(&self, sent: usize, decoded: usize) -> f64 {
        self.values[sent * self.size() + decoded]
    }

    /// `ν(x+z, y+z) = ν(x, y)` for all `x, y, z`, up to `1e-12`.
    ///
    /// Equivalent to `ν(x, y) = ν(x ⊕ y, 0)` for all pairs, which is what is checked.
    pub fn is_translation_invariant(&self) -> bool {
        let m = self.size();
        (0..m)
            .all(|a| (0..m).all(|b| (self.get(a, b) - self.get(a ^ b, 0)).abs() <= INVARIANCE_TOL))
    }

    /// `ν̃(x) = ν(x, 0)` when the table is translation invariant.
    pub fn reduced(&self) -> Option<Vec<f64>> {
        self.is_translation_invariant()
            .then(|| (0..self.size()).map(|x| self.get(x, 0)).collect())
    }
}

/// `ν_0-1`: zero on the diagonal, one elsewhere.
pub fn indicator_value(k: usize) -> Result<ValueTable> {
    ValueTable::from_fn(k, |a, b| if a == b { 0.0 } else { 1.0 })
}

/// `1 - ν_0-1`: rewards correct decoding.
pub fn reward_equal_value(k: usize) -> Result<ValueTable> {
    ValueTable::from_fn(k, |a, b| if a == b { 1.0 } else { 0.0 })
}

/// Squared normalized brightness difference `((r - t) / (2^k - 1))^2`.
pub fn squared_error_value(k: usize) -> Result<ValueTable> {
    let scale = ((1u64 << k) - 1) as f64;
    ValueTable::from_fn(k, |r, t| {
        let d = (r as f64 - t as f64) / scale;
        d * d
    })
}

/// `δ` at the ordered pair `(sent, decoded)`, zero elsewhere.
pub fn point_mass_value(k: usize, pair: (usize, usize), delta: f64) -> Result<ValueTable> {
    if delta.is_nan() || delta <= 0.0 {
        return Err(Error::OutOfRange(format!("point mass δ = {delta}")));
    }
    let m = 1usize << k;
    if pair.0 >= m || pair.1 >= m {
        return Err(Error::OutOfRange(format!("pair {pair:?} for k = {k}")));
    }
    ValueTable::from_fn(k, |a, b| if (a, b) == pair { delta } else { 0.0 })
}

/// Fraction of information bits in error, `w_H(x ⊕ y) / k`.
pub fn bit_error_value(k: usize) -> Result<ValueTable> {
    ValueTable::from_fn(k, |a, b| (a ^ b).count_ones() as f64 / k as f64)
}

/// `ν̃_f(c) = w_H(f⁻¹(c)) / k`, indexed by canonical codeword index.
pub fn ber_value(f: &EncoderMap) -> Vec<f64> {
    let k = f.code().k() as f64;
    (0..f.size())
        .map(|c| f.decode_index(c).count_ones() as f64 / k)
        .collect()
}

/// Reduced value pushed through an encoder: `ν̃_f(c) = ν̃(f⁻¹(c))`.
pub fn reduced_through(f: &EncoderMap, reduced: &[f64]) -> Vec<f64> {
    (0..f.size()).map(|c| reduced[f.decode_index(c)]).collect()
}

/// `ν_f` on codeword index pairs `(sent, decoded)`.
#[derive(Clone, Debug, PartialEq)]
pub struct InducedValue {
    m: usize,
    values: Vec<f64>,
}

impl InducedValue {
    pub fn from_fn(m: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let values = (0..m)
            .flat_map(|a| (0..m).map(move |b| (a, b)))
            .map(|(a, b)| f(a, b))
            .collect();
        Self { m, values }
    }

    pub fn size(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn get(&self, sent: usize, decoded: usize) -> f64 {
        self.values[sent * self.m + decoded]
    }
}

/// `ν_f(f(ι₁), f(ι₂)) = ν(ι₁, ι₂)`.
pub fn induced_value(f: &EncoderMap, nu: &ValueTable) -> Result<InducedValue> {
    if nu.size() != f.size() {
        return Err(Error::Shape(format!(
            "value table over {} symbols, encoder over {}",
            nu.size(),
            f.size()
        )));
    }
    Ok(InducedValue::from_fn(f.size(), |c, d| {
        nu.get(f.decode_index(c), f.decode_index(d))
    }))
}
