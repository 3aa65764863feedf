//! Named verification suites over fixed configurations.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;

use crate::channel::{substream, Bmsc, ChannelModel, TableChannel};
use crate::code::{hamming_code, paper_code_c3, paper_code_c4, repetition_code, LinearCode};
use crate::decoder::{ml_decoder, nn_decoder, total_order_decoder, DecoderRule, Metric};
use crate::encoder::{lexicographic_encoder, systematic_encoder, EncoderMap};
use crate::error::{Error, Result};
use crate::loss::{
    bit_error_probability, bit_error_probability_direct, bit_error_value, expected_loss_exact,
    h_coefficients, hamming_h_closed_form, indicator_value, is_bayes_encoder, theorem1_check,
    theorem2_check, word_error_probability, ValueTable,
};

const P_GRID: [f64; 4] = [0.05, 0.1, 0.2, 0.35];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Swap,
    Disagreement,
    HClosedForm,
    BayesHamming,
    Translation,
    Wep,
    Ber,
    DecoderOracle,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 9] = [
        "swap",
        "disagreement",
        "h-closed-form",
        "bayes-hamming",
        "translation",
        "wep",
        "ber",
        "decoder-oracle",
        "all",
    ];

    fn members(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![
                Suite::Swap,
                Suite::Disagreement,
                Suite::HClosedForm,
                Suite::BayesHamming,
                Suite::Translation,
                Suite::Wep,
                Suite::Ber,
                Suite::DecoderOracle,
            ],
            s => vec![s],
        }
    }

    fn name(self) -> &'static str {
        Self::NAMES[self as usize]
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let all = [
            Suite::Swap,
            Suite::Disagreement,
            Suite::HClosedForm,
            Suite::BayesHamming,
            Suite::Translation,
            Suite::Wep,
            Suite::Ber,
            Suite::DecoderOracle,
            Suite::All,
        ];
        all.into_iter().find(|x| x.name() == s).ok_or_else(|| {
            Error::OutOfRange(format!(
                "unknown suite '{s}'; expected one of {}",
                Self::NAMES.join(", ")
            ))
        })
    }
}

/// One verified identity or inequality with its measured quantity.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    /// Deviation for identities, margin for strict inequalities.
    pub measured: f64,
    pub detail: String,
    pub passed: bool,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} [{}] {}: {:.3e}",
            self.suite, self.name, self.measured
        )?;
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        write!(f, "{} checks, {failed} failed", self.checks.len())
    }
}

fn deviation(suite: &'static str, name: String, dev: f64, tol: f64) -> Check {
    Check {
        suite,
        name,
        measured: dev,
        detail: format!("tolerance {tol:e}"),
        passed: dev <= tol,
    }
}

pub fn run_suite(suite: Suite) -> Result<VerifyReport> {
    let mut checks = Vec::new();
    for s in suite.members() {
        checks.extend(match s {
            Suite::Swap => swap_suite()?,
            Suite::Disagreement => disagreement_suite()?,
            Suite::HClosedForm => closed_form_suite()?,
            Suite::BayesHamming => bayes_suite()?,
            Suite::Translation => translation_suite()?,
            Suite::Wep => wep_suite()?,
            Suite::Ber => ber_suite()?,
            Suite::DecoderOracle => decoder_oracle_suite()?,
            Suite::All => unreachable!(),
        });
    }
    Ok(VerifyReport { checks })
}

fn h3() -> Arc<LinearCode> {
    Arc::new(hamming_code(3).expect("H(3)"))
}

fn ml(code: &Arc<LinearCode>, p: f64) -> Result<(DecoderRule, Bmsc)> {
    let ch = Bmsc::new(code.n(), p)?;
    Ok((ml_decoder(code.clone(), Arc::new(ch.clone()))?, ch))
}

fn swap_suite() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (label, code, p) in [
        ("hamming:3", h3(), 0.2),
        ("repetition:3", Arc::new(repetition_code(3)?), 0.2),
        ("repetition:3", Arc::new(repetition_code(3)?), 0.1),
    ] {
        let ch: Arc<dyn ChannelModel> = Arc::new(Bmsc::new(code.n(), p)?);
        let (mut min_reward, mut min_wep, mut failures, mut pairs) =
            (f64::INFINITY, f64::INFINITY, 0, 0);
        for i in 0..code.size() {
            for j in 0..code.size() {
                if i == j {
                    continue;
                }
                let r =
                    theorem1_check(code.clone(), ch.clone(), code.codeword(i), code.codeword(j))?;
                min_reward = min_reward.min(r.reward_margin());
                min_wep = min_wep.min(r.wep_margin());
                failures += usize::from(!r.holds());
                pairs += 1;
            }
        }
        out.push(Check {
            suite: "swap",
            name: format!("{label} p={p}: E(a,reward) > E(b,reward) and E(a,0-1) < E(b,0-1) for {pairs} pairs"),
            measured: min_reward.min(min_wep),
            detail: format!("min reward margin {min_reward:.6e}, min WEP margin {min_wep:.6e}"),
            passed: failures == 0,
        });
    }
    Ok(out)
}

/// Stochastic matrix with entries drawn from `[0.01, 1)` and then normalized.
pub fn random_table_channel(n: usize, seed: u64) -> TableChannel {
    let size = 1usize << n;
    let rows = (0..size)
        .map(|x| {
            let mut s = substream(seed, x as u64);
            let raw: Vec<f64> = (0..size).map(|_| s.gen_range(0.01..1.0)).collect();
            let total: f64 = raw.iter().sum();
            raw.into_iter().map(|v| v / total).collect()
        })
        .collect();
    TableChannel::new(n, rows).expect("normalized rows")
}

fn disagreement_suite() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    // exhaustive scan on H(3) under a BMSC
    let code = h3();
    let (a1, ch) = ml(&code, 0.2)?;
    let a2 = total_order_decoder(code.clone());
    let (mut hold, mut violated, mut inexact, mut inexact_ok) = (0, 0, 0, 0);
    for i in 0..16 {
        for j in 0..16 {
            if i == j {
                continue;
            }
            let r = theorem2_check(&a1, &a2, &ch, code.codeword(i), code.codeword(j), 1.0, 1.0)?;
            if r.hypotheses_hold() {
                hold += 1;
                if r.prediction_exact(1e-12) {
                    violated += usize::from(!r.conclusion_holds());
                } else {
                    inexact += 1;
                    inexact_ok += usize::from(r.conclusion_holds());
                }
            }
        }
    }
    out.push(Check {
        suite: "disagreement",
        name: "hamming:3 ML vs total-order p=0.2, 240 ordered pairs".into(),
        measured: hold as f64,
        detail: format!(
            "hypotheses hold for {hold} pairs; {inexact} involve a third codeword ({inexact_ok} of them still satisfy the conclusion); {violated} violations otherwise"
        ),
        passed: violated == 0,
    });

    // two-word code over random channels, where the conclusion is an equivalence
    let rep = Arc::new(repetition_code(3)?);
    let t = total_order_decoder(rep.clone());
    let (c1, c2) = (rep.codeword(0), rep.codeword(1));
    let (mut tested, mut hold, mut mismatched) = (0, 0, 0);
    let mut worst = 0.0f64;
    for seed in 0..300 {
        let ch: Arc<dyn ChannelModel> = Arc::new(random_table_channel(3, seed));
        let a = ml_decoder(rep.clone(), ch.clone())?;
        if !a.is_tie_free()? {
            continue;
        }
        let r = theorem2_check(&a, &t, ch.as_ref(), c1, c2, 0.7, 1.3)?;
        tested += 1;
        hold += usize::from(r.hypotheses_hold());
        mismatched += usize::from(r.hypotheses_hold() != r.conclusion_holds());
        worst = worst
            .max((r.predicted_diff_nu1 - r.actual_diff_nu1()).abs())
            .max((r.predicted_diff_nu2 - r.actual_diff_nu2()).abs());
    }
    out.push(Check {
        suite: "disagreement",
        name: format!("repetition:3 ML vs total-order over {tested} random channels: hypotheses <=> conclusion"),
        measured: worst,
        detail: format!("hypotheses hold on {hold} channels, {mismatched} mismatches, max prediction error shown"),
        passed: mismatched == 0 && hold > 0 && worst <= 1e-12,
    });
    Ok(out)
}

fn closed_form_suite() -> Result<Vec<Check>> {
    let code = h3();
    let mut worst = 0.0f64;
    let mut monotone = true;
    for p in P_GRID {
        let (a, ch) = ml(&code, p)?;
        let h = h_coefficients(&a, &ch)?.values;
        for (i, c) in code.codewords().enumerate() {
            let cf = hamming_h_closed_form(3, c.weight() as usize, p)?;
            worst = worst.max((cf - h[i]).abs());
        }
        for i in 0..16 {
            for j in 0..16 {
                if code.codeword(i).weight() <= code.codeword(j).weight() && h[i] < h[j] - 1e-15 {
                    monotone = false;
                }
            }
        }
    }
    Ok(vec![
        deviation(
            "h-closed-form",
            "hamming:3 ML, 16 codewords x 4 values of p".into(),
            worst,
            1e-10,
        ),
        Check {
            suite: "h-closed-form",
            name: "H non-increasing in codeword weight".into(),
            measured: 0.0,
            detail: String::new(),
            passed: monotone,
        },
    ])
}

/// `ν̃(x) = g(w(f(x)))` plus a small index-dependent term so that all values
/// differ; ordering by image weight is strict.
fn weight_monotone_value(f: &EncoderMap, g: impl Fn(u32) -> f64) -> Result<(Vec<f64>, ValueTable)> {
    let words = f.code().codeword_values();
    let reduced: Vec<f64> = (0..f.size())
        .map(|j| g(words[f.encode_index(j)].count_ones()) + j as f64 * 1e-4)
        .collect();
    let table = ValueTable::from_reduced(f.code().k(), &reduced)?;
    Ok((reduced, table))
}

fn bayes_suite() -> Result<Vec<Check>> {
    let code = h3();
    let (a, ch) = ml(&code, 0.1)?;
    let words = code.codeword_values();
    let mut out = Vec::new();
    type Shape = (&'static str, fn(u32) -> f64);
    let shapes: [Shape; 3] = [
        ("w", |w| w as f64),
        ("w^2", |w| (w * w) as f64),
        ("2^w", |w| 2f64.powi(w as i32)),
    ];
    for (enc_label, f) in [
        ("systematic", systematic_encoder(code.clone())),
        ("lex", lexicographic_encoder(code.clone())),
    ] {
        for (shape, g) in shapes {
            let (reduced, table) = weight_monotone_value(&f, g)?;
            let v = is_bayes_encoder(&f, &a, &ch, &table)?;
            out.push(Check {
                suite: "bayes-hamming",
                name: format!("{enc_label} encoder, value {shape} of image weight, is Bayes"),
                measured: v.loss - v.optimal_loss,
                detail: "loss minus rearrangement optimum".into(),
                passed: v.is_bayes && (v.loss - v.optimal_loss).abs() < 1e-12,
            });
            let (mut swaps, mut caught) = (0, 0);
            for j1 in 0..16 {
                for j2 in j1 + 1..16 {
                    let (w1, w2) = (
                        words[f.encode_index(j1)].count_ones(),
                        words[f.encode_index(j2)].count_ones(),
                    );
                    if w1 == w2 {
                        continue;
                    }
                    let mut swapped = reduced.clone();
                    swapped.swap(j1, j2);
                    let v = is_bayes_encoder(&f, &a, &ch, &ValueTable::from_reduced(4, &swapped)?)?;
                    swaps += 1;
                    caught +=
                        usize::from(!v.is_bayes && v.witness.is_some() && v.loss > v.optimal_loss);
                }
            }
            out.push(Check {
                suite: "bayes-hamming",
                name: format!(
                    "{enc_label} encoder, value {shape}: transpositions across weights rejected"
                ),
                measured: caught as f64,
                detail: format!("{caught} of {swaps} rejected with a witness"),
                passed: caught == swaps,
            });
        }
    }
    Ok(out)
}

fn translation_suite() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (label, code) in [("hamming:3", h3()), ("c3", Arc::new(paper_code_c3()))] {
        let mut worst = 0.0f64;
        for p in P_GRID {
            let ch = Bmsc::new(code.n(), p)?;
            for a in [
                ml_decoder(code.clone(), Arc::new(ch.clone()))?,
                total_order_decoder(code.clone()),
            ] {
                let h = h_coefficients(&a, &ch)?.values;
                for f in [
                    systematic_encoder(code.clone()),
                    lexicographic_encoder(code.clone()),
                ] {
                    for nu in [indicator_value(code.k())?, bit_error_value(code.k())?] {
                        let reduced = nu.reduced().expect("invariant");
                        let via_h: f64 = (0..code.size())
                            .map(|c| h[c] * reduced[f.decode_index(c)])
                            .sum();
                        worst = worst.max((via_h - expected_loss_exact(&f, &a, &ch, &nu)?).abs());
                    }
                }
            }
        }
        out.push(deviation(
            "translation",
            format!("{label}: sum H(c) v(c) = exact loss, 2 linear encoders x {{0-1, ber}} x {{ml, total}} x 4 p"),
            worst,
            1e-10,
        ));
    }
    Ok(out)
}

fn wep_suite() -> Result<Vec<Check>> {
    let mut worst = 0.0f64;
    for code in [h3(), Arc::new(paper_code_c3())] {
        let f = lexicographic_encoder(code.clone());
        let nu = indicator_value(code.k())?;
        for p in P_GRID {
            let ch = Bmsc::new(code.n(), p)?;
            for a in [
                ml_decoder(code.clone(), Arc::new(ch.clone()))?,
                total_order_decoder(code.clone()),
            ] {
                worst = worst.max(
                    (expected_loss_exact(&f, &a, &ch, &nu)? - word_error_probability(&a, &ch)?)
                        .abs(),
                );
            }
        }
    }
    let (a, ch) = ml(&h3(), 0.1)?;
    let sphere = 1.0 - (0.9f64.powi(7) + 7.0 * 0.1 * 0.9f64.powi(6));
    Ok(vec![
        deviation(
            "wep",
            "exact loss with 0-1 value = WEP, {hamming:3, c3} x {ml, total} x 4 p".into(),
            worst,
            1e-12,
        ),
        deviation(
            "wep",
            "hamming:3 ML p=0.1 against sphere bound".into(),
            (word_error_probability(&a, &ch)? - sphere).abs(),
            1e-12,
        ),
    ])
}

fn ber_suite() -> Result<Vec<Check>> {
    let code = h3();
    let f = systematic_encoder(code.clone());
    let mut out = Vec::new();
    for p in [0.1, 0.35] {
        let (a, ch) = ml(&code, p)?;
        let route = bit_error_probability(&f, &a, &ch)?;
        let direct = bit_error_probability_direct(&f, &a, &ch)?;
        out.push(deviation(
            "ber",
            format!("hamming:3 ML systematic p={p}: H route = bit count ({route:.10})"),
            (route - direct).abs(),
            1e-12,
        ));
    }
    Ok(out)
}

/// Compares the accelerated total-order decoder with brute-force nearest
/// neighbour search; exhaustive up to `n = 10`, otherwise `samples` inputs.
pub fn total_order_agreement(code: Arc<LinearCode>, samples: u64, seed: u64) -> Result<(u64, u64)> {
    let fast = total_order_decoder(code.clone());
    let slow = nn_decoder(code.clone(), Metric::TotalOrder);
    let n = code.n();
    let inputs: Vec<u64> = if n <= 10 {
        (0..1u64 << n).collect()
    } else {
        (0..samples)
            .map(|i| substream(seed, i).gen_range(0..1u64 << n))
            .collect()
    };
    let agree = inputs
        .iter()
        .filter(|&&y| fast.decide_raw(y).approx_eq(&slow.decide_raw(y)))
        .count() as u64;
    Ok((agree, inputs.len() as u64))
}

fn decoder_oracle_suite() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let codes: [(&str, Arc<LinearCode>); 4] = [
        ("hamming:3", h3()),
        ("c3", Arc::new(paper_code_c3())),
        ("hamming:4", Arc::new(hamming_code(4)?)),
        ("c4", Arc::new(paper_code_c4())),
    ];
    for (label, code) in codes {
        let (agree, total) = total_order_agreement(code, 10_000, 7)?;
        out.push(Check {
            suite: "decoder-oracle",
            name: format!("{label}: accelerated total-order = brute-force nearest neighbour"),
            measured: (total - agree) as f64,
            detail: format!("{agree} of {total} inputs agree"),
            passed: agree == total,
        });
    }
    Ok(out)
}
