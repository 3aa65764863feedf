//! Discrete channels over `F_2^n` and counter-based random substreams.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf2::BitWord;

/// Random stream handle; independent streams are derived with [`substream`].
pub type Stream = ChaCha8Rng;

/// Stream number `index` of the master seed. Streams for distinct indices are
/// independent, so results never depend on which worker consumed which index.
pub fn substream(master_seed: u64, index: u64) -> Stream {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

/// Largest block length for exhaustive checks over all `(x, y)` pairs.
pub const MAX_ENUMERABLE: usize = 10;

/// Conditional probabilities `P(y | x)` for `X = Y = F_2^n`.
pub trait ChannelModel: Send + Sync {
    fn n(&self) -> usize;

    /// `P(received | sent)` on raw word values; both must be `< 2^n`.
    fn likelihood_raw(&self, sent: u64, received: u64) -> f64;

    fn likelihood(&self, sent: BitWord, received: BitWord) -> Result<f64> {
        for w in [sent, received] {
            if w.len() != self.n() {
                return Err(Error::LengthMismatch {
                    left: self.n(),
                    right: w.len(),
                });
            }
        }
        Ok(self.likelihood_raw(sent.value(), received.value()))
    }

    fn sample_raw(&self, sent: u64, stream: &mut Stream) -> u64;

    /// Specialization hook for decoders that exploit the BMSC structure.
    fn as_bmsc(&self) -> Option<&Bmsc> {
        None
    }
}

/// Binary memoryless symmetric channel with crossover probability `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct Bmsc {
    n: usize,
    p: f64,
    /// `p^d (1-p)^(n-d)` for `d = 0..=n`.
    by_distance: Vec<f64>,
}

impl Bmsc {
    pub fn new(n: usize, p: f64) -> Result<Self> {
        if n == 0 || n > 64 {
            return Err(Error::InvalidLength(n));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::OutOfRange(format!("crossover probability {p}")));
        }
        let by_distance = (0..=n)
            .map(|d| p.powi(d as i32) * (1.0 - p).powi((n - d) as i32))
            .collect();
        Ok(Self { n, p, by_distance })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// `s = p / (1 - p)`; undefined at `p = 1`.
    pub fn odds(&self) -> Option<f64> {
        (self.p < 1.0).then(|| self.p / (1.0 - self.p))
    }

    /// Likelihood of a pattern of `d` flipped bits.
    #[inline]
    pub fn likelihood_at_distance(&self, d: u32) -> f64 {
        self.by_distance[d as usize]
    }

    pub fn sample(&self, sent: BitWord, stream: &mut Stream) -> Result<BitWord> {
        if sent.len() != self.n {
            return Err(Error::LengthMismatch {
                left: self.n,
                right: sent.len(),
            });
        }
        Ok(BitWord::from_raw(
            self.sample_raw(sent.value(), stream),
            self.n,
        ))
    }

    #[inline]
    pub(crate) fn error_pattern(&self, stream: &mut Stream) -> u64 {
        let mut e = 0u64;
        for i in 0..self.n {
            if stream.gen::<f64>() < self.p {
                e |= 1 << i;
            }
        }
        e
    }
}

impl ChannelModel for Bmsc {
    fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn likelihood_raw(&self, sent: u64, received: u64) -> f64 {
        self.by_distance[(sent ^ received).count_ones() as usize]
    }

    fn sample_raw(&self, sent: u64, stream: &mut Stream) -> u64 {
        sent ^ self.error_pattern(stream)
    }

    fn as_bmsc(&self) -> Option<&Bmsc> {
        Some(self)
    }
}

/// Explicit `2^n × 2^n` transition matrix, row `x` holding `P(· | x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TableChannel {
    n: usize,
    rows: Vec<Vec<f64>>,
}

impl TableChannel {
    pub fn new(n: usize, rows: Vec<Vec<f64>>) -> Result<Self> {
        if n == 0 || n > MAX_ENUMERABLE {
            return Err(Error::OutOfRange(format!("table channel length {n}")));
        }
        let size = 1usize << n;
        if rows.len() != size || rows.iter().any(|r| r.len() != size) {
            return Err(Error::Shape(format!(
                "expected {size}x{size} transition matrix"
            )));
        }
        for (x, row) in rows.iter().enumerate() {
            if row.iter().any(|&v| !(0.0..=1.0).contains(&v)) {
                return Err(Error::OutOfRange(format!(
                    "row {x} has an entry outside [0,1]"
                )));
            }
            let total: f64 = row.iter().sum();
            if (total - 1.0).abs() > 1e-9 {
                return Err(Error::Precondition(format!("row {x} sums to {total}")));
            }
        }
        Ok(Self { n, rows })
    }

    /// Tabulates any channel model (e.g. a BMSC) so individual rows can be edited.
    pub fn from_model(model: &dyn ChannelModel) -> Result<Self> {
        let n = model.n();
        if n > MAX_ENUMERABLE {
            return Err(Error::TooLarge(format!("n = {n}")));
        }
        let size = 1u64 << n;
        let rows = (0..size)
            .map(|x| (0..size).map(|y| model.likelihood_raw(x, y)).collect())
            .collect();
        Self::new(n, rows)
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }
}

impl ChannelModel for TableChannel {
    fn n(&self) -> usize {
        self.n
    }

    fn likelihood_raw(&self, sent: u64, received: u64) -> f64 {
        self.rows[sent as usize][received as usize]
    }

    fn sample_raw(&self, sent: u64, stream: &mut Stream) -> u64 {
        let u: f64 = stream.gen();
        let row = &self.rows[sent as usize];
        let mut acc = 0.0;
        for (y, &p) in row.iter().enumerate() {
            acc += p;
            if u < acc {
                return y as u64;
            }
        }
        // rounding slack: last word with positive mass
        row.iter().rposition(|&p| p > 0.0).unwrap_or(0) as u64
    }
}

fn require_enumerable(channel: &dyn ChannelModel, max: usize) -> Result<u64> {
    let n = channel.n();
    if n > max {
        return Err(Error::TooLarge(format!(
            "exhaustive channel check needs n <= {max}, got {n}"
        )));
    }
    Ok(1u64 << n)
}

/// `P(x|x) > P(y|x)` for every `x` and every `y ≠ x`.
pub fn is_reasonable(channel: &dyn ChannelModel) -> Result<bool> {
    if let Some(b) = channel.as_bmsc() {
        // likelihood falls strictly with distance iff p < 1/2
        return Ok(b.p() < 0.5);
    }
    let size = require_enumerable(channel, MAX_ENUMERABLE)?;
    Ok((0..size).all(|x| {
        let own = channel.likelihood_raw(x, x);
        (0..size)
            .filter(|&y| y != x)
            .all(|y| own > channel.likelihood_raw(x, y))
    }))
}

/// `P(y|x) = P(y+z | x+z)` for all `x, y, z`, checked exhaustively (`n <= 8`).
pub fn is_translation_invariant_channel(channel: &dyn ChannelModel) -> Result<bool> {
    let size = require_enumerable(channel, 8)?;
    for x in 0..size {
        for y in 0..size {
            let base = channel.likelihood_raw(x, y);
            for z in 1..size {
                if channel.likelihood_raw(x ^ z, y ^ z) != base {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Randomized version of the translation identity for larger `n`.
pub fn translation_invariance_sampled(
    channel: &dyn ChannelModel,
    samples: usize,
    seed: u64,
) -> bool {
    let n = channel.n();
    let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut rng = substream(seed, 0);
    (0..samples).all(|_| {
        let (x, y, z) = (
            rng.gen::<u64>() & mask,
            rng.gen::<u64>() & mask,
            rng.gen::<u64>() & mask,
        );
        channel.likelihood_raw(x, y) == channel.likelihood_raw(x ^ z, y ^ z)
    })
}
