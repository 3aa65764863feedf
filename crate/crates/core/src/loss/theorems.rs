//! Executable checks of the two decoder-comparison results: swapping decisions
//! of an ML decoder, and the disagreement-set loss comparison.
//!
//! Both work on value functions given directly on codeword pairs, so no
//! encoder is involved.

use std::sync::Arc;

use super::engine::expected_loss_induced;
use super::value::InducedValue;
use crate::channel::{is_reasonable, ChannelModel};
use crate::code::LinearCode;
use crate::decoder::{disagreement_sets, ml_decoder, swap_decoder, DecoderRule};
use crate::error::{Error, Result};
use crate::gf2::BitWord;

#[derive(Clone, Debug, PartialEq)]
pub struct Theorem1Report {
    /// `E(C, a, 1 - ν_0-1)` and `E(C, b, 1 - ν_0-1)`.
    pub reward_ml: f64,
    pub reward_swapped: f64,
    /// `E(C, a, ν_0-1)` and `E(C, b, ν_0-1)`.
    pub wep_ml: f64,
    pub wep_swapped: f64,
}

impl Theorem1Report {
    /// Margin of `E(a, reward) > E(b, reward)`.
    pub fn reward_margin(&self) -> f64 {
        self.reward_ml - self.reward_swapped
    }

    /// Margin of `E(a, ν_0-1) < E(b, ν_0-1)`.
    pub fn wep_margin(&self) -> f64 {
        self.wep_swapped - self.wep_ml
    }

    pub fn holds(&self) -> bool {
        self.reward_margin() > 0.0 && self.wep_margin() > 0.0
    }
}

/// Builds `a = ML` and `b = a` with the decisions at `c1` and `c2` exchanged,
/// then compares both decoders under the reward and indicator values.
pub fn theorem1_check(
    code: Arc<LinearCode>,
    channel: Arc<dyn ChannelModel>,
    c1: BitWord,
    c2: BitWord,
) -> Result<Theorem1Report> {
    if c1 == c2 {
        return Err(Error::Precondition("c1 and c2 must differ".into()));
    }
    if !code.contains(c1) || !code.contains(c2) {
        return Err(Error::NotACodeword);
    }
    if !is_reasonable(channel.as_ref())? {
        return Err(Error::Precondition("channel is not reasonable".into()));
    }
    let a = ml_decoder(code.clone(), channel.clone())?;
    let b = swap_decoder(&a, c1, c2)?;
    let m = code.size();
    let reward = InducedValue::from_fn(m, |s, d| if s == d { 1.0 } else { 0.0 });
    let indicator = InducedValue::from_fn(m, |s, d| if s == d { 0.0 } else { 1.0 });
    let ch = channel.as_ref();
    Ok(Theorem1Report {
        reward_ml: expected_loss_induced(&a, ch, &reward)?,
        reward_swapped: expected_loss_induced(&b, ch, &reward)?,
        wep_ml: expected_loss_induced(&a, ch, &indicator)?,
        wep_swapped: expected_loss_induced(&b, ch, &indicator)?,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Theorem2Report {
    pub v1: Vec<u64>,
    pub v2: Vec<u64>,
    /// Words of `V1 ∪ V2` where a decoder has a tie.
    pub ambiguous: Vec<u64>,
    /// `P(V1 | c1)`, `P(V2 | c1)`, `P(V1 | c2)`, `P(V2 | c2)`.
    pub p_v1_c1: f64,
    pub p_v2_c1: f64,
    pub p_v1_c2: f64,
    pub p_v2_c2: f64,
    /// `E(a1, ν1)`, `E(a2, ν1)`, `E(a1, ν2)`, `E(a2, ν2)` with `ν1` the point
    /// mass `δ1` at (sent `c1`, decoded `c2`) and `ν2` the point mass `δ2`
    /// at (sent `c2`, decoded `c1`).
    pub loss_a1_nu1: f64,
    pub loss_a2_nu1: f64,
    pub loss_a1_nu2: f64,
    pub loss_a2_nu2: f64,
    /// Loss differences predicted from `V1` and `V2` alone:
    /// `δ1/M (P(V1|c1) - P(V2|c1))` and `δ2/M (P(V2|c2) - P(V1|c2))`.
    pub predicted_diff_nu1: f64,
    pub predicted_diff_nu2: f64,
}

impl Theorem2Report {
    pub fn first_hypothesis(&self) -> bool {
        self.p_v1_c1 > self.p_v2_c1
    }

    pub fn second_hypothesis(&self) -> bool {
        self.p_v1_c2 > self.p_v2_c2
    }

    pub fn hypotheses_hold(&self) -> bool {
        self.first_hypothesis() && self.second_hypothesis()
    }

    /// `E(a1, ν1) > E(a2, ν1)` and `E(a1, ν2) < E(a2, ν2)`.
    pub fn conclusion_holds(&self) -> bool {
        self.loss_a1_nu1 > self.loss_a2_nu1 && self.loss_a1_nu2 < self.loss_a2_nu2
    }

    pub fn actual_diff_nu1(&self) -> f64 {
        self.loss_a1_nu1 - self.loss_a2_nu1
    }

    pub fn actual_diff_nu2(&self) -> f64 {
        self.loss_a1_nu2 - self.loss_a2_nu2
    }

    /// Whether the `V1`/`V2` prediction reproduces the actual differences.
    /// Always the case for two-word codes; for larger codes a decoder may
    /// send a word to `c2` while the other sends it to a third codeword.
    pub fn prediction_exact(&self, tol: f64) -> bool {
        (self.predicted_diff_nu1 - self.actual_diff_nu1()).abs() <= tol
            && (self.predicted_diff_nu2 - self.actual_diff_nu2()).abs() <= tol
    }

    /// Human-readable reason when the hypotheses fail.
    pub fn failed_hypotheses(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.first_hypothesis() {
            out.push("P(V1|c1) <= P(V2|c1)");
        }
        if !self.second_hypothesis() {
            out.push("P(V1|c2) <= P(V2|c2)");
        }
        out
    }
}

#[allow(clippy::too_many_arguments)]
pub fn theorem2_check(
    a1: &DecoderRule,
    a2: &DecoderRule,
    channel: &dyn ChannelModel,
    c1: BitWord,
    c2: BitWord,
    delta1: f64,
    delta2: f64,
) -> Result<Theorem2Report> {
    if c1 == c2 {
        return Err(Error::Precondition("c1 and c2 must differ".into()));
    }
    if !(delta1 > 0.0 && delta2 > 0.0) {
        return Err(Error::OutOfRange("point masses must be positive".into()));
    }
    let sets = disagreement_sets(a1, a2, c1, c2)?;
    let code = a1.code();
    let m = code.size();
    let i1 = code.index_of(c1).ok_or(Error::NotACodeword)?;
    let i2 = code.index_of(c2).ok_or(Error::NotACodeword)?;
    let mass = |set: &[u64], c: BitWord| {
        set.iter()
            .map(|&y| channel.likelihood_raw(c.value(), y))
            .sum::<f64>()
    };
    let (p_v1_c1, p_v2_c1) = (mass(&sets.v1, c1), mass(&sets.v2, c1));
    let (p_v1_c2, p_v2_c2) = (mass(&sets.v1, c2), mass(&sets.v2, c2));

    let nu1 = InducedValue::from_fn(m, |s, d| if (s, d) == (i1, i2) { delta1 } else { 0.0 });
    let nu2 = InducedValue::from_fn(m, |s, d| if (s, d) == (i2, i1) { delta2 } else { 0.0 });
    let inv_m = 1.0 / m as f64;
    Ok(Theorem2Report {
        loss_a1_nu1: expected_loss_induced(a1, channel, &nu1)?,
        loss_a2_nu1: expected_loss_induced(a2, channel, &nu1)?,
        loss_a1_nu2: expected_loss_induced(a1, channel, &nu2)?,
        loss_a2_nu2: expected_loss_induced(a2, channel, &nu2)?,
        predicted_diff_nu1: delta1 * inv_m * (p_v1_c1 - p_v2_c1),
        predicted_diff_nu2: delta2 * inv_m * (p_v2_c2 - p_v1_c2),
        v1: sets.v1,
        v2: sets.v2,
        ambiguous: sets.ambiguous,
        p_v1_c1,
        p_v2_c1,
        p_v1_c2,
        p_v2_c2,
    })
}
