//! Loss coefficients for translation-invariant value functions.
//!
//! For a linear encoder and `ν(x, y) = ν̃(x ⊕ y)`, the expected loss collapses
//! to `Σ_u H_a(u) ν̃_f(u)` with
//! `H_a(u) = (1/M) Σ_y Σ_c w(y, c) P(y | c ⊕ u)`,
//! the probability that the decoded word differs from the sent one by `u`.

use rayon::prelude::*;

use super::engine::check_compatible;
use super::value::ValueTable;
use crate::channel::{is_translation_invariant_channel, ChannelModel};
use crate::decoder::{is_translation_invariant_decoder, DecoderRule};
use crate::encoder::EncoderMap;
use crate::error::{Error, Result};

const ORDER_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct HCoefficients {
    /// `H_a(c)` indexed by canonical codeword index.
    pub values: Vec<f64>,
    /// `None` when the channel was too long to check exhaustively.
    pub channel_invariant: Option<bool>,
}

pub fn h_coefficients(decoder: &DecoderRule, channel: &dyn ChannelModel) -> Result<HCoefficients> {
    check_compatible(decoder, channel)?;
    let code = decoder.code();
    let m = code.size();
    let words = code.codeword_values();
    let table = decoder.table()?;
    // one task per codeword offset u, received words in ascending order
    let values: Vec<f64> = (0..m)
        .into_par_iter()
        .map(|u| {
            let mut acc = 0.0;
            for (y, d) in table.iter().enumerate() {
                for &(c, w) in d.entries() {
                    acc += w * channel.likelihood_raw(words[c] ^ words[u], y as u64);
                }
            }
            acc / m as f64
        })
        .collect();
    let channel_invariant = is_translation_invariant_channel(channel).ok();
    Ok(HCoefficients {
        values,
        channel_invariant,
    })
}

/// `H_a(c)` for the Hamming code of redundancy `l` under nearest-neighbour
/// decoding on a BMSC, as a function of the codeword weight `w`. This is the
/// ML decoder for `p < 1/2`.
///
/// Weights 1 and 2 do not occur in a Hamming code and are rejected.
pub fn hamming_h_closed_form(l: usize, w: usize, p: f64) -> Result<f64> {
    if !(2..=16).contains(&l) {
        return Err(Error::OutOfRange(format!("Hamming redundancy l = {l}")));
    }
    let n = (1usize << l) - 1;
    if w > n || w == 1 || w == 2 {
        return Err(Error::OutOfRange(format!(
            "no codeword of weight {w} in a Hamming code of length {n}"
        )));
    }
    if !(0.0..1.0).contains(&p) {
        return Err(Error::OutOfRange(format!(
            "closed form needs 0 <= p < 1, got {p}"
        )));
    }
    let s = p / (1.0 - p);
    let wi = w as i32;
    let mut bracket = s.powi(wi) + (n - w) as f64 * s.powi(wi + 1);
    if w > 0 {
        bracket += w as f64 * s.powi(wi - 1);
    }
    Ok((1.0 - p).powi(n as i32) * bracket)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Assignment {
    /// `pairing[i]` is the position in `ν̃` matched with `H[i]`.
    pub pairing: Vec<usize>,
    pub total: f64,
}

/// Pairs the `i`-th largest `H` with the `i`-th smallest `ν̃`, which
/// minimizes `Σ H ν̃` over all pairings.
pub fn bayes_assignment(h: &[f64], nu: &[f64]) -> Result<Assignment> {
    if h.len() != nu.len() {
        return Err(Error::LengthMismatch {
            left: h.len(),
            right: nu.len(),
        });
    }
    let mut by_h: Vec<usize> = (0..h.len()).collect();
    by_h.sort_by(|&a, &b| h[b].total_cmp(&h[a]).then(a.cmp(&b)));
    let mut by_nu: Vec<usize> = (0..nu.len()).collect();
    by_nu.sort_by(|&a, &b| nu[a].total_cmp(&nu[b]).then(a.cmp(&b)));
    let mut pairing = vec![0; h.len()];
    for (&i, &j) in by_h.iter().zip(&by_nu) {
        pairing[i] = j;
    }
    let total = pairing.iter().enumerate().map(|(i, &j)| h[i] * nu[j]).sum();
    Ok(Assignment { pairing, total })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BayesVerdict {
    pub is_bayes: bool,
    /// Codeword indices `(c, c′)` with `H(c) > H(c′)` but `ν̃_f(c) > ν̃_f(c′)`.
    pub witness: Option<(usize, usize)>,
    pub loss: f64,
    pub optimal_loss: f64,
}

/// `f` is Bayes for `(a, ν)` iff `ν̃_f` is non-decreasing along codewords
/// sorted by decreasing `H_a`. Codewords with equal `H_a` (within `1e-12`)
/// may be ordered freely.
pub fn is_bayes_encoder(
    f: &EncoderMap,
    decoder: &DecoderRule,
    channel: &dyn ChannelModel,
    nu: &ValueTable,
) -> Result<BayesVerdict> {
    let reduced = nu
        .reduced()
        .ok_or_else(|| Error::Precondition("value function is not translation invariant".into()))?;
    if !f.is_linear() {
        return Err(Error::Precondition("encoder is not linear".into()));
    }
    if nu.size() != f.size() {
        return Err(Error::Shape(
            "value table size differs from encoder size".into(),
        ));
    }
    if **f.code() != **decoder.code() {
        return Err(Error::Precondition(
            "encoder and decoder use different codes".into(),
        ));
    }
    let h = h_coefficients(decoder, channel)?.values;
    let nu_f: Vec<f64> = (0..f.size()).map(|c| reduced[f.decode_index(c)]).collect();
    let loss = h.iter().zip(&nu_f).map(|(a, b)| a * b).sum();
    let optimal_loss = bayes_assignment(&h, &nu_f)?.total;

    let mut order: Vec<usize> = (0..h.len()).collect();
    order.sort_by(|&a, &b| h[b].total_cmp(&h[a]).then(a.cmp(&b)));
    // walk groups of equal H; the largest ν̃ seen in strictly higher groups
    // must not exceed anything in the current group
    let mut witness = None;
    let mut prev_max: Option<usize> = None;
    let mut start = 0;
    while start < order.len() && witness.is_none() {
        let mut end = start + 1;
        while end < order.len() && h[order[start]] - h[order[end]] <= ORDER_TOL {
            end += 1;
        }
        if let Some(pm) = prev_max {
            if let Some(&bad) = order[start..end]
                .iter()
                .find(|&&c| nu_f[pm] > nu_f[c] + ORDER_TOL)
            {
                witness = Some((pm, bad));
            }
        }
        for &c in &order[start..end] {
            if prev_max.is_none_or(|pm| nu_f[c] > nu_f[pm]) {
                prev_max = Some(c);
            }
        }
        start = end;
    }
    Ok(BayesVerdict {
        is_bayes: witness.is_none(),
        witness,
        loss,
        optimal_loss,
    })
}

/// Checks the hypotheses under which bit error probability is an expected
/// loss with a translation-invariant value: linear encoder, decoder with
/// `a⁻¹(c) = c + a⁻¹(0)`, translation-invariant channel.
fn check_ber_preconditions(
    f: &EncoderMap,
    decoder: &DecoderRule,
    channel: &dyn ChannelModel,
) -> Result<()> {
    if **f.code() != **decoder.code() {
        return Err(Error::Precondition(
            "encoder and decoder use different codes".into(),
        ));
    }
    if !f.is_linear() {
        return Err(Error::Precondition("encoder is not linear".into()));
    }
    if !is_translation_invariant_decoder(decoder)? {
        return Err(Error::Precondition(
            "decoder is not translation invariant".into(),
        ));
    }
    if !is_translation_invariant_channel(channel)? {
        return Err(Error::Precondition(
            "channel is not translation invariant".into(),
        ));
    }
    Ok(())
}

/// Bit error probability as `Σ_c H_a(c) w(f⁻¹(c)) / k`.
pub fn bit_error_probability(
    f: &EncoderMap,
    decoder: &DecoderRule,
    channel: &dyn ChannelModel,
) -> Result<f64> {
    check_ber_preconditions(f, decoder, channel)?;
    let h = h_coefficients(decoder, channel)?.values;
    let nu = super::value::ber_value(f);
    Ok(h.iter().zip(&nu).map(|(a, b)| a * b).sum())
}

/// Bit error probability by counting wrong information bits over every
/// (sent word, received word) pair. Needs no invariance.
pub fn bit_error_probability_direct(
    f: &EncoderMap,
    decoder: &DecoderRule,
    channel: &dyn ChannelModel,
) -> Result<f64> {
    check_compatible(decoder, channel)?;
    if **f.code() != **decoder.code() {
        return Err(Error::Precondition(
            "encoder and decoder use different codes".into(),
        ));
    }
    let code = decoder.code();
    let k = code.k() as f64;
    let words = code.codeword_values();
    let table = decoder.table()?;
    let per_info: Vec<f64> = (0..f.size())
        .into_par_iter()
        .map(|info| {
            let sent = words[f.encode_index(info)];
            let mut acc = 0.0;
            for (y, d) in table.iter().enumerate() {
                let p = channel.likelihood_raw(sent, y as u64);
                if p == 0.0 {
                    continue;
                }
                for &(c, w) in d.entries() {
                    acc += p * w * (f.decode_index(c) ^ info).count_ones() as f64;
                }
            }
            acc / k
        })
        .collect();
    Ok(per_info.iter().sum::<f64>() / f.size() as f64)
}
