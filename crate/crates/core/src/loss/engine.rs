//! Exact expected loss by enumeration of received words, and its Monte Carlo
//! estimate.
//!
//! With a uniform prior over the `M` codewords,
//! `G_a(c, c′) = (1/M) Σ_y w(y, c) P(y | c′)` where `w(y, c)` is the mass the
//! decoder puts on `c` at `y`, and the expected loss is
//! `Σ_{c, c′} G_a(c, c′) ν_f(c′, c)` (first index decoded, second sent).
//!
//! Sums over received words run in ascending word order inside each
//! parallel task, and task results are combined in a fixed order, so every
//! value is bit-identical regardless of the number of worker threads.

use rand::Rng;
use rayon::prelude::*;

use super::value::{induced_value, InducedValue, ValueTable};
use crate::channel::{substream, ChannelModel};
use crate::decoder::DecoderRule;
use crate::encoder::EncoderMap;
use crate::error::{Error, Result};

/// Largest block length for exhaustive enumeration.
pub const MAX_EXACT_LEN: usize = 16;

/// `G_a` as an `M × M` matrix, row = decoded codeword, column = sent codeword.
#[derive(Clone, Debug, PartialEq)]
pub struct GMatrix {
    m: usize,
    values: Vec<f64>,
}

impl GMatrix {
    pub fn size(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn get(&self, decoded: usize, sent: usize) -> f64 {
        self.values[decoded * self.m + sent]
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    /// `Σ_{c, c′} G(c, c′) ν(c′, c)`.
    pub fn weigh(&self, nu: &InducedValue) -> f64 {
        assert_eq!(nu.size(), self.m, "value and G sizes differ");
        let mut total = 0.0;
        for decoded in 0..self.m {
            for sent in 0..self.m {
                total += self.get(decoded, sent) * nu.get(sent, decoded);
            }
        }
        total
    }
}

pub(crate) fn check_compatible(decoder: &DecoderRule, channel: &dyn ChannelModel) -> Result<()> {
    let n = decoder.code().n();
    if channel.n() != n {
        return Err(Error::LengthMismatch {
            left: n,
            right: channel.n(),
        });
    }
    if n > MAX_EXACT_LEN {
        return Err(Error::TooLarge(format!("exact enumeration for n = {n}")));
    }
    Ok(())
}

fn check_encoder(f: &EncoderMap, decoder: &DecoderRule) -> Result<()> {
    if **f.code() != **decoder.code() {
        return Err(Error::Precondition(
            "encoder and decoder use different codes".into(),
        ));
    }
    Ok(())
}

pub fn g_matrix(decoder: &DecoderRule, channel: &dyn ChannelModel) -> Result<GMatrix> {
    check_compatible(decoder, channel)?;
    let code = decoder.code();
    let m = code.size();
    let table = decoder.table()?;
    let words = code.codeword_values();
    let inv_m = 1.0 / m as f64;
    let columns: Vec<Vec<f64>> = (0..m)
        .into_par_iter()
        .map(|sent| {
            let c = words[sent];
            let mut col = vec![0.0; m];
            for (y, d) in table.iter().enumerate() {
                let p = channel.likelihood_raw(c, y as u64);
                if p == 0.0 {
                    continue;
                }
                for &(dec, w) in d.entries() {
                    col[dec] += w * p;
                }
            }
            col
        })
        .collect();
    let mut values = vec![0.0; m * m];
    for (sent, col) in columns.iter().enumerate() {
        for (dec, &v) in col.iter().enumerate() {
            values[dec * m + sent] = v * inv_m;
        }
    }
    Ok(GMatrix { m, values })
}

/// `E(C, a, ν_f)` by exhaustive enumeration.
pub fn expected_loss_exact(
    f: &EncoderMap,
    decoder: &DecoderRule,
    channel: &dyn ChannelModel,
    nu: &ValueTable,
) -> Result<f64> {
    check_encoder(f, decoder)?;
    let induced = induced_value(f, nu)?;
    Ok(g_matrix(decoder, channel)?.weigh(&induced))
}

/// Expected loss for a value function already given on codeword pairs.
pub fn expected_loss_induced(
    decoder: &DecoderRule,
    channel: &dyn ChannelModel,
    nu: &InducedValue,
) -> Result<f64> {
    if nu.size() != decoder.code().size() {
        return Err(Error::Shape(
            "value function size differs from code size".into(),
        ));
    }
    Ok(g_matrix(decoder, channel)?.weigh(nu))
}

/// Word error probability `(1/M) Σ_c (1 - Σ_{y ∈ D(c)} w(y, c) P(y | c))`.
pub fn word_error_probability(decoder: &DecoderRule, channel: &dyn ChannelModel) -> Result<f64> {
    check_compatible(decoder, channel)?;
    let code = decoder.code();
    let table = decoder.table()?;
    let words = code.codeword_values();
    let per_codeword: Vec<f64> = (0..code.size())
        .into_par_iter()
        .map(|i| {
            let mut correct = 0.0;
            for (y, d) in table.iter().enumerate() {
                let w = d.mass_of(i);
                if w > 0.0 {
                    correct += w * channel.likelihood_raw(words[i], y as u64);
                }
            }
            1.0 - correct
        })
        .collect();
    Ok(per_codeword.iter().sum::<f64>() / code.size() as f64)
}

/// Monte Carlo estimate with its standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub trials: u64,
}

/// Trial `t` draws from substream `t` of `seed`: a uniform information
/// symbol, a channel output, and a decoded codeword (ties sampled uniformly).
pub fn expected_loss_monte_carlo(
    f: &EncoderMap,
    decoder: &DecoderRule,
    channel: &dyn ChannelModel,
    nu: &ValueTable,
    trials: u64,
    seed: u64,
) -> Result<McEstimate> {
    check_encoder(f, decoder)?;
    if trials == 0 {
        return Err(Error::OutOfRange("trials must be at least 1".into()));
    }
    if channel.n() != decoder.code().n() {
        return Err(Error::LengthMismatch {
            left: decoder.code().n(),
            right: channel.n(),
        });
    }
    if nu.size() != f.size() {
        return Err(Error::Shape(
            "value table size differs from encoder size".into(),
        ));
    }
    let code = decoder.code();
    let words = code.codeword_values();
    let m = f.size();
    let losses: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut s = substream(seed, t);
            let info = s.gen_range(0..m);
            let sent = words[f.encode_index(info)];
            let y = channel.sample_raw(sent, &mut s);
            let decoded = f.decode_index(decoder.decode_sample(y, &mut s));
            nu.get(info, decoded)
        })
        .collect();
    let count = trials as f64;
    let mean = losses.iter().sum::<f64>() / count;
    let stderr = if trials > 1 {
        let var = losses.iter().map(|l| (l - mean).powi(2)).sum::<f64>() / (count - 1.0);
        (var / count).sqrt()
    } else {
        0.0
    };
    Ok(McEstimate {
        estimate: mean,
        stderr,
        trials,
    })
}
