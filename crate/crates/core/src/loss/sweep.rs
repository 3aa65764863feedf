//! Expected loss over a grid of crossover probabilities.

use std::fmt;
use std::io::Write;
use std::sync::Arc;

use super::engine::{expected_loss_exact, expected_loss_monte_carlo};
use super::value::ValueTable;
use crate::channel::Bmsc;
use crate::code::LinearCode;
use crate::decoder::{ml_decoder, total_order_decoder, trivial_decoder_for, DecoderRule};
use crate::encoder::EncoderMap;
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 8] = [
    "p",
    "code",
    "encoder",
    "decoder",
    "value_fn",
    "method",
    "expected_loss",
    "stderr",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecoderSpec {
    /// ML for the BMSC at the current grid point.
    Ml,
    Total,
    Trivial,
}

impl DecoderSpec {
    pub fn name(self) -> &'static str {
        match self {
            DecoderSpec::Ml => "ml",
            DecoderSpec::Total => "total",
            DecoderSpec::Trivial => "trivial",
        }
    }

    pub fn build(self, code: Arc<LinearCode>, p: f64) -> Result<DecoderRule> {
        match self {
            DecoderSpec::Ml => ml_decoder(code.clone(), Arc::new(Bmsc::new(code.n(), p)?)),
            DecoderSpec::Total => Ok(total_order_decoder(code)),
            DecoderSpec::Trivial => trivial_decoder_for(code),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Exact,
    MonteCarlo { trials: u64, seed: u64 },
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::MonteCarlo { .. } => "mc",
        }
    }
}

/// One coding-decoding scheme with a value function, plus labels for output.
#[derive(Clone, Debug)]
pub struct Configuration {
    pub code_label: String,
    pub encoder_label: String,
    pub value_label: String,
    pub encoder: EncoderMap,
    pub decoder: DecoderSpec,
    pub value: ValueTable,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRecord {
    pub p: f64,
    pub code: String,
    pub encoder: String,
    pub decoder: String,
    pub value_fn: String,
    pub method: &'static str,
    pub expected_loss: f64,
    pub stderr: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SweepReport {
    pub records: Vec<SweepRecord>,
}

impl SweepReport {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Losses of the records whose decoder label is `decoder`, in grid order.
    pub fn series(&self, decoder: &str) -> Vec<(f64, f64)> {
        self.records
            .iter()
            .filter(|r| r.decoder == decoder)
            .map(|r| (r.p, r.expected_loss))
            .collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(CSV_HEADER).map_err(csv_error)?;
        for r in &self.records {
            let stderr = r.stderr.map(|s| s.to_string()).unwrap_or_default();
            w.write_record([
                r.p.to_string(),
                r.code.clone(),
                r.encoder.clone(),
                r.decoder.clone(),
                r.value_fn.clone(),
                r.method.to_string(),
                r.expected_loss.to_string(),
                stderr,
            ])
            .map_err(csv_error)?;
        }
        w.flush()?;
        Ok(())
    }
}

impl fmt::Display for SweepReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).map_err(|_| fmt::Error)?;
        f.write_str(&String::from_utf8_lossy(&buf))
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// Validates a grid of crossover probabilities: within `[0, 1]`, strictly increasing.
pub fn check_grid(grid: &[f64]) -> Result<()> {
    if let Some(p) = grid.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::OutOfRange(format!("crossover probability {p}")));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::OutOfRange("grid must be strictly increasing".into()));
    }
    Ok(())
}

/// Exact expected loss for every grid point and configuration, grid-major.
pub fn sweep_losses(grid: &[f64], configs: &[Configuration]) -> Result<SweepReport> {
    sweep_with(grid, configs, Method::Exact)
}

pub fn sweep_with(grid: &[f64], configs: &[Configuration], method: Method) -> Result<SweepReport> {
    check_grid(grid)?;
    let mut records = Vec::with_capacity(grid.len() * configs.len());
    for &p in grid {
        for cfg in configs {
            let code = cfg.encoder.code().clone();
            let channel = Bmsc::new(code.n(), p)?;
            let decoder = cfg.decoder.build(code, p)?;
            let (loss, stderr) = match method {
                Method::Exact => (
                    expected_loss_exact(&cfg.encoder, &decoder, &channel, &cfg.value)?,
                    None,
                ),
                Method::MonteCarlo { trials, seed } => {
                    let e = expected_loss_monte_carlo(
                        &cfg.encoder,
                        &decoder,
                        &channel,
                        &cfg.value,
                        trials,
                        seed,
                    )?;
                    (e.estimate, Some(e.stderr))
                }
            };
            records.push(SweepRecord {
                p,
                code: cfg.code_label.clone(),
                encoder: cfg.encoder_label.clone(),
                decoder: cfg.decoder.name().to_string(),
                value_fn: cfg.value_label.clone(),
                method: method.name(),
                expected_loss: loss,
                stderr,
            });
        }
    }
    Ok(SweepReport { records })
}

/// Grid points where the sign of `a - b` differs from the previous point,
/// ignoring exact zeros. Returns the pairs `(p_before, p_after)`.
pub fn sign_changes(a: &[(f64, f64)], b: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let signs: Vec<(f64, f64)> = a
        .iter()
        .zip(b)
        .map(|(&(p, x), &(_, y))| (p, x - y))
        .filter(|&(_, d)| d != 0.0)
        .collect();
    signs
        .windows(2)
        .filter(|w| (w[0].1 < 0.0) != (w[1].1 < 0.0))
        .map(|w| (w[0].0, w[1].0))
        .collect()
}

/// Evenly spaced grid `start, start + step, ...` up to `stop` inclusive when
/// representable. Points are computed as `start + i * step` and rounded to
/// 12 decimals to avoid accumulated drift.
pub fn linear_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if step.is_nan() || step <= 0.0 || !start.is_finite() || !stop.is_finite() || stop < start {
        return Err(Error::OutOfRange(format!("grid {start}:{stop}:{step}")));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::hamming_code;
    use crate::encoder::lexicographic_encoder;
    use crate::loss::value::squared_error_value;

    fn h3_configs() -> Vec<Configuration> {
        let code = Arc::new(hamming_code(3).unwrap());
        [DecoderSpec::Ml, DecoderSpec::Total]
            .into_iter()
            .map(|d| Configuration {
                code_label: "hamming:3".into(),
                encoder_label: "lex".into(),
                value_label: "mse".into(),
                encoder: lexicographic_encoder(code.clone()),
                decoder: d,
                value: squared_error_value(4).unwrap(),
            })
            .collect()
    }

    #[test]
    fn empty_grid() {
        assert!(sweep_losses(&[], &h3_configs()).unwrap().is_empty());
    }

    #[test]
    fn grid_parsing() {
        let g = linear_grid(0.01, 0.49, 0.01).unwrap();
        assert_eq!(g.len(), 49);
        assert_eq!(g[0], 0.01);
        assert_eq!(g[48], 0.49);
        assert_eq!(linear_grid(0.0, 0.5, 0.25).unwrap(), vec![0.0, 0.25, 0.5]);
        assert_eq!(linear_grid(0.0, 0.3, 0.25).unwrap(), vec![0.0, 0.25]);
        assert!(linear_grid(0.2, 0.1, 0.1).is_err());
        assert!(linear_grid(0.0, 0.1, 0.0).is_err());
        assert!(check_grid(&[0.1, 0.1]).is_err());
        assert!(check_grid(&[0.1, 1.2]).is_err());
    }

    #[test]
    fn crossing_on_hamming() {
        let grid = linear_grid(0.01, 0.49, 0.01).unwrap();
        let report = sweep_losses(&grid, &h3_configs()).unwrap();
        assert_eq!(report.len(), 98);
        let ml = report.series("ml");
        let total = report.series("total");
        assert!(ml[0].1 < total[0].1);
        assert!(ml[48].1 > total[48].1);
        assert_eq!(sign_changes(&ml, &total).len(), 1);
        assert!(report.records.iter().all(|r| r.expected_loss >= 0.0));
    }

    #[test]
    fn losses_vanish_at_zero() {
        let report = sweep_losses(&[0.0, 1e-6], &h3_configs()).unwrap();
        for r in &report.records {
            assert!(r.expected_loss < 1e-4);
        }
    }

    #[test]
    fn csv_layout() {
        let report = sweep_losses(&[0.1, 0.2, 0.3], &h3_configs()).unwrap();
        let text = report.to_string();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 7);
        assert_eq!(
            lines[0],
            "p,code,encoder,decoder,value_fn,method,expected_loss,stderr"
        );
        assert!(lines[1].starts_with("0.1,hamming:3,lex,ml,mse,exact,"));
        assert!(lines[1].ends_with(','));
        assert!(!text.contains('\r'));
        assert_eq!(
            text,
            sweep_losses(&[0.1, 0.2, 0.3], &h3_configs())
                .unwrap()
                .to_string()
        );
    }

    #[test]
    fn monte_carlo_records_have_stderr() {
        let m = Method::MonteCarlo {
            trials: 1000,
            seed: 5,
        };
        let report = sweep_with(&[0.2], &h3_configs(), m).unwrap();
        assert!(report
            .records
            .iter()
            .all(|r| r.method == "mc" && r.stderr.is_some()));
    }
}
