//! Decoders as maps from received words to distributions over codewords.
//!
//! A tie between several best codewords is represented as a uniform
//! distribution over the tie set; loss computations average over it and
//! simulations draw from it.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::channel::{ChannelModel, Stream};
use crate::code::LinearCode;
use crate::error::{Error, Result};
use crate::gf2::{top_index, BitWord};

/// Largest block length for which full decision tables are materialized.
pub const MAX_TABLE_LEN: usize = 20;

const MASS_TOL: f64 = 1e-12;

/// Distribution over codeword indices (canonical order); masses sum to one.
#[derive(Clone, Debug, PartialEq)]
pub struct Decision {
    entries: Vec<(usize, f64)>,
}

impl Decision {
    pub fn point(index: usize) -> Self {
        Self {
            entries: vec![(index, 1.0)],
        }
    }

    /// Uniform over `indices`, which must be non-empty; sorted on construction.
    pub fn uniform(mut indices: Vec<usize>) -> Self {
        assert!(!indices.is_empty(), "empty tie set");
        indices.sort_unstable();
        indices.dedup();
        let mass = 1.0 / indices.len() as f64;
        Self {
            entries: indices.into_iter().map(|i| (i, mass)).collect(),
        }
    }

    pub fn from_masses(mut entries: Vec<(usize, f64)>) -> Result<Self> {
        entries.sort_by_key(|e| e.0);
        let total: f64 = entries.iter().map(|e| e.1).sum();
        if entries.is_empty()
            || entries.iter().any(|e| e.1 <= 0.0)
            || entries.windows(2).any(|w| w[0].0 == w[1].0)
            || (total - 1.0).abs() > MASS_TOL
        {
            return Err(Error::Precondition(
                "decision masses must be positive, distinct and sum to 1".into(),
            ));
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn as_point(&self) -> Option<usize> {
        match self.entries.as_slice() {
            [(i, _)] => Some(*i),
            _ => None,
        }
    }

    pub fn mass_of(&self, index: usize) -> f64 {
        self.entries
            .iter()
            .find(|e| e.0 == index)
            .map_or(0.0, |e| e.1)
    }

    /// Highest-mass codeword; ties go to the smallest index.
    pub fn modal(&self) -> usize {
        let mut best = self.entries[0];
        for &e in &self.entries[1..] {
            if e.1 > best.1 + MASS_TOL {
                best = e;
            }
        }
        best.0
    }

    pub fn sample(&self, stream: &mut Stream) -> usize {
        if let Some(i) = self.as_point() {
            return i;
        }
        let u: f64 = stream.gen();
        let mut acc = 0.0;
        for &(i, m) in &self.entries {
            acc += m;
            if u < acc {
                return i;
            }
        }
        self.entries[self.entries.len() - 1].0
    }

    /// Equal support and masses within `1e-12`.
    pub fn approx_eq(&self, other: &Decision) -> bool {
        self.entries.len() == other.entries.len()
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| a.0 == b.0 && (a.1 - b.1).abs() <= MASS_TOL)
    }
}

/// Distance used by a nearest-neighbour decoder.
#[derive(Clone)]
pub enum Metric {
    Hamming,
    TotalOrder,
    Custom(Arc<dyn Fn(BitWord, BitWord) -> f64 + Send + Sync>),
}

impl Metric {
    #[inline]
    fn eval(&self, x: u64, y: u64, n: usize) -> f64 {
        match self {
            Metric::Hamming => (x ^ y).count_ones() as f64,
            Metric::TotalOrder => top_index(x ^ y) as f64,
            Metric::Custom(f) => f(BitWord::from_raw(x, n), BitWord::from_raw(y, n)),
        }
    }
}

impl fmt::Debug for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Metric::Hamming => write!(f, "Hamming"),
            Metric::TotalOrder => write!(f, "TotalOrder"),
            Metric::Custom(_) => write!(f, "Custom"),
        }
    }
}

#[derive(Clone)]
enum Rule {
    /// `a(y) = y`; the code is the full space.
    Identity,
    /// Hamming-nearest codewords via min-weight coset members, indexed by
    /// syndrome. With `farthest`, decodes the complement instead.
    Coset {
        leaders: Arc<Vec<Vec<u64>>>,
        farthest: bool,
    },
    /// Every codeword equally likely.
    UniformAll,
    Likelihood(Arc<dyn ChannelModel>),
    Nearest(Metric),
    /// Suffix-agreement decoding for the total-order metric; basis rows have
    /// distinct top coordinates, descending.
    TotalOrder(Arc<Vec<u64>>),
    Table(Arc<Vec<Decision>>),
}

/// A decoding rule over a fixed code.
#[derive(Clone)]
pub struct DecoderRule {
    code: Arc<LinearCode>,
    rule: Rule,
    overrides: BTreeMap<u64, Decision>,
    label: String,
}

impl fmt::Debug for DecoderRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DecoderRule")
            .field("label", &self.label)
            .field("n", &self.code.n())
            .field("k", &self.code.k())
            .field("overrides", &self.overrides.len())
            .finish()
    }
}

impl DecoderRule {
    fn new(code: Arc<LinearCode>, rule: Rule, label: impl Into<String>) -> Self {
        Self {
            code,
            rule,
            overrides: BTreeMap::new(),
            label: label.into(),
        }
    }

    pub fn code(&self) -> &Arc<LinearCode> {
        &self.code
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn decide(&self, y: BitWord) -> Result<Decision> {
        if y.len() != self.code.n() {
            return Err(Error::LengthMismatch {
                left: self.code.n(),
                right: y.len(),
            });
        }
        Ok(self.decide_raw(y.value()))
    }

    pub fn decide_raw(&self, y: u64) -> Decision {
        if let Some(d) = self.overrides.get(&y) {
            return d.clone();
        }
        let code = &self.code;
        let n = code.n();
        match &self.rule {
            Rule::Identity => Decision::point(code.index_of_raw(y).expect("full space")),
            Rule::Coset { leaders, farthest } => {
                let target = if *farthest { !y & full_mask(n) } else { y };
                let list = &leaders[code.syndrome_raw(target) as usize];
                let indices: Vec<usize> = list
                    .iter()
                    .map(|e| code.index_of_raw(target ^ e).expect("coset member"))
                    .collect();
                if indices.len() == 1 {
                    Decision::point(indices[0])
                } else {
                    Decision::uniform(indices)
                }
            }
            Rule::UniformAll => Decision::uniform((0..code.size()).collect()),
            Rule::Likelihood(ch) => {
                let scores = code
                    .codeword_values()
                    .iter()
                    .map(|&c| ch.likelihood_raw(c, y));
                argbest(scores, |a, b| a > b)
            }
            Rule::Nearest(metric) => {
                let scores = code.codeword_values().iter().map(|&c| metric.eval(y, c, n));
                argbest(scores, |a, b| a < b)
            }
            Rule::TotalOrder(basis) => total_order_decide(code, basis, y),
            Rule::Table(t) => t[y as usize].clone(),
        }
    }

    /// Draws one decoded codeword index, sampling ties uniformly.
    pub fn decode_sample(&self, y: u64, stream: &mut Stream) -> usize {
        self.decide_raw(y).sample(stream)
    }

    /// Materializes decisions for all `2^n` inputs.
    pub fn precomputed(&self) -> Result<DecoderRule> {
        if let Rule::Table(_) = self.rule {
            return Ok(self.clone());
        }
        let n = self.code.n();
        if n > MAX_TABLE_LEN {
            return Err(Error::TooLarge(format!("decision table for n = {n}")));
        }
        let table: Vec<Decision> = (0..1u64 << n).map(|y| self.decide_raw(y)).collect();
        Ok(Self::new(
            self.code.clone(),
            Rule::Table(Arc::new(table)),
            self.label.clone(),
        ))
    }

    /// All decisions in input order, materializing them if necessary.
    pub fn table(&self) -> Result<Arc<Vec<Decision>>> {
        match self.precomputed()?.rule {
            Rule::Table(t) => Ok(t),
            _ => unreachable!(),
        }
    }

    pub fn is_tie_free(&self) -> Result<bool> {
        Ok(self.table()?.iter().all(|d| d.as_point().is_some()))
    }
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Indices whose score is best under `better`, exact comparison.
fn argbest(scores: impl Iterator<Item = f64>, better: impl Fn(f64, f64) -> bool) -> Decision {
    let mut best = Vec::new();
    let mut best_score = f64::NAN;
    for (i, s) in scores.enumerate() {
        if best.is_empty() || better(s, best_score) {
            best.clear();
            best.push(i);
            best_score = s;
        } else if s == best_score {
            best.push(i);
        }
    }
    if best.len() == 1 {
        Decision::point(best[0])
    } else {
        Decision::uniform(best)
    }
}

fn total_order_decide(code: &LinearCode, basis: &[u64], y: u64) -> Decision {
    // clear every pivot coordinate of y, highest first
    let mut residual = y;
    for &row in basis {
        if (residual >> (top_index(row) - 1)) & 1 == 1 {
            residual ^= row;
        }
    }
    let nearest = y ^ residual;
    let top = top_index(residual);
    // codewords below the residual's top coordinate keep the distance unchanged
    let free: Vec<u64> = basis
        .iter()
        .copied()
        .filter(|&r| top_index(r) < top)
        .collect();
    if free.is_empty() {
        return Decision::point(code.index_of_raw(nearest).expect("codeword"));
    }
    let mut ties = vec![nearest];
    for r in free {
        let len = ties.len();
        for i in 0..len {
            ties.push(ties[i] ^ r);
        }
    }
    Decision::uniform(
        ties.into_iter()
            .map(|c| code.index_of_raw(c).expect("codeword"))
            .collect(),
    )
}

fn coset_leaders(code: &LinearCode) -> Result<Vec<Vec<u64>>> {
    let n = code.n();
    if n > MAX_TABLE_LEN {
        return Err(Error::TooLarge(format!("syndrome table for n = {n}")));
    }
    let r = code.parity_check().rows();
    let mut leaders: Vec<Vec<u64>> = vec![Vec::new(); 1 << r];
    let mut best = vec![u32::MAX; 1 << r];
    for e in 0..1u64 << n {
        let s = code.syndrome_raw(e) as usize;
        let w = e.count_ones();
        if w < best[s] {
            best[s] = w;
            leaders[s].clear();
            leaders[s].push(e);
        } else if w == best[s] {
            leaders[s].push(e);
        }
    }
    Ok(leaders)
}

/// Maximum-likelihood decoder: uniform over `argmax_c P(y|c)`.
///
/// For a BMSC with `0 < p < 1/2` this is Hamming nearest-neighbour decoding
/// through a syndrome table; with `1/2 < p < 1` it picks the farthest codewords.
pub fn ml_decoder(code: Arc<LinearCode>, channel: Arc<dyn ChannelModel>) -> Result<DecoderRule> {
    if channel.n() != code.n() {
        return Err(Error::LengthMismatch {
            left: code.n(),
            right: channel.n(),
        });
    }
    if let Some(b) = channel.as_bmsc() {
        let p = b.p();
        if p == 0.5 {
            return Ok(DecoderRule::new(code, Rule::UniformAll, "ml"));
        }
        if p > 0.0 && p < 1.0 && code.n() <= MAX_TABLE_LEN {
            let leaders = Arc::new(coset_leaders(&code)?);
            return Ok(DecoderRule::new(
                code,
                Rule::Coset {
                    leaders,
                    farthest: p > 0.5,
                },
                "ml",
            ));
        }
    }
    Ok(DecoderRule::new(code, Rule::Likelihood(channel), "ml"))
}

/// Hamming nearest-neighbour decoding through the syndrome table.
pub fn hamming_decoder(code: Arc<LinearCode>) -> Result<DecoderRule> {
    let leaders = Arc::new(coset_leaders(&code)?);
    Ok(DecoderRule::new(
        code,
        Rule::Coset {
            leaders,
            farthest: false,
        },
        "hamming",
    ))
}

/// Brute-force nearest-neighbour decoder for an arbitrary metric.
pub fn nn_decoder(code: Arc<LinearCode>, metric: Metric) -> DecoderRule {
    let label = match metric {
        Metric::Hamming => "nn-hamming",
        Metric::TotalOrder => "nn-total",
        Metric::Custom(_) => "nn-custom",
    };
    DecoderRule::new(code, Rule::Nearest(metric), label)
}

/// Nearest-neighbour decoder for `d_T(x, y) = max{i : x_i ≠ y_i}`.
pub fn total_order_decoder(code: Arc<LinearCode>) -> DecoderRule {
    let basis = Arc::new(code.top_echelon_basis());
    DecoderRule::new(code, Rule::TotalOrder(basis), "total")
}

/// `a(y) = y` on the full space `F_2^k`.
pub fn trivial_decoder(k: usize) -> Result<DecoderRule> {
    trivial_decoder_for(Arc::new(LinearCode::identity(k)?))
}

pub fn trivial_decoder_for(code: Arc<LinearCode>) -> Result<DecoderRule> {
    if code.n() != code.k() {
        return Err(Error::Precondition(
            "trivial decoder needs a code without redundancy".into(),
        ));
    }
    Ok(DecoderRule::new(code, Rule::Identity, "trivial"))
}

/// Exchanges the decisions made at the inputs `c1` and `c2`; all other
/// inputs are untouched. When `a` decodes codewords to themselves this gives
/// `b(c2) = c1` and `b(c1) = c2`.
pub fn swap_decoder(a: &DecoderRule, c1: BitWord, c2: BitWord) -> Result<DecoderRule> {
    if c1 == c2 {
        return Err(Error::Precondition(
            "swap needs two distinct codewords".into(),
        ));
    }
    if !a.code.contains(c1) || !a.code.contains(c2) {
        return Err(Error::NotACodeword);
    }
    let at1 = a.decide_raw(c1.value());
    let at2 = a.decide_raw(c2.value());
    let mut b = a.clone();
    b.overrides.insert(c1.value(), at2);
    b.overrides.insert(c2.value(), at1);
    b.label = format!("{}-swapped", a.label);
    Ok(b)
}

/// For each codeword index, the received words decoded to it with their mass.
pub fn decision_regions(a: &DecoderRule) -> Result<Vec<Vec<(u64, f64)>>> {
    let table = a.table()?;
    let mut regions = vec![Vec::new(); a.code.size()];
    for (y, d) in table.iter().enumerate() {
        for &(c, m) in d.entries() {
            regions[c].push((y as u64, m));
        }
    }
    Ok(regions)
}

/// `V1 = {y : a(y) = c2, b(y) = c1}` and `V2 = {y : a(y) = c1, b(y) = c2}`.
#[derive(Clone, Debug, PartialEq)]
pub struct DisagreementSets {
    pub v1: Vec<u64>,
    pub v2: Vec<u64>,
    /// Words where either decoder has a tie; their membership was decided by
    /// the modal codeword.
    pub ambiguous: Vec<u64>,
}

pub fn disagreement_sets(
    a: &DecoderRule,
    b: &DecoderRule,
    c1: BitWord,
    c2: BitWord,
) -> Result<DisagreementSets> {
    let code = &a.code;
    if **code != *b.code {
        return Err(Error::Precondition(
            "decoders are over different codes".into(),
        ));
    }
    let i1 = code.index_of(c1).ok_or(Error::NotACodeword)?;
    let i2 = code.index_of(c2).ok_or(Error::NotACodeword)?;
    let n = code.n();
    if n > MAX_TABLE_LEN {
        return Err(Error::TooLarge(format!("n = {n}")));
    }
    let mut sets = DisagreementSets {
        v1: Vec::new(),
        v2: Vec::new(),
        ambiguous: Vec::new(),
    };
    for y in 0..1u64 << n {
        let da = a.decide_raw(y);
        let db = b.decide_raw(y);
        let (ma, mb) = (da.modal(), db.modal());
        let v1 = ma == i2 && mb == i1;
        let v2 = ma == i1 && mb == i2;
        if (v1 || v2) && (da.as_point().is_none() || db.as_point().is_none()) {
            sets.ambiguous.push(y);
        }
        if v1 {
            sets.v1.push(y);
        } else if v2 {
            sets.v2.push(y);
        }
    }
    Ok(sets)
}

/// `a⁻¹(c) = c + a⁻¹(0)`: decisions commute with translation by codewords.
pub fn is_translation_invariant_decoder(a: &DecoderRule) -> Result<bool> {
    let code = &a.code;
    let n = code.n();
    if n > 10 {
        return Err(Error::TooLarge(format!(
            "exhaustive invariance check for n = {n}"
        )));
    }
    let table = a.table()?;
    let words = code.codeword_values();
    for (y, d) in table.iter().enumerate() {
        for &c in words {
            let moved = &table[(y as u64 ^ c) as usize];
            let shifted: Vec<(usize, f64)> = d
                .entries()
                .iter()
                .map(|&(i, m)| (code.index_of_raw(words[i] ^ c).expect("codeword"), m))
                .collect();
            let shifted = Decision::from_masses(shifted)?;
            if !shifted.approx_eq(moved) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
