//! Command-line front end.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::code::{hamming_code, paper_code_c3, paper_code_c4, LinearCode};
use crate::encoder::{
    gray_encoder_for, lexicographic_encoder, random_encoder, systematic_encoder,
    weight_priority_encoder, EncoderMap,
};
use crate::error::{Error, Result};
use crate::image::{
    dequantize, diff_highlight, quantize, read_pgm, transmit_image, write_pgm, GrayImage,
};
use crate::loss::{
    bit_error_value, indicator_value, linear_grid, squared_error_value, sweep_with, Configuration,
    DecoderSpec, Method, ValueTable,
};
use crate::verify::{run_suite, Suite};

pub const SEED_ENV: &str = "CODELOSS_SEED";

pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_IO: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "codeloss",
    version,
    about = "Expected loss of small binary codes over a binary symmetric channel"
)]
pub struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Expected loss over a grid of crossover probabilities, as CSV.
    Sweep(SweepArgs),
    /// Send a PGM image pixel by pixel through the channel.
    Image(ImageArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct SchemeArgs {
    /// identity:K, hamming:L, c3 or c4
    #[arg(long, default_value = "hamming:3")]
    pub code: String,
    /// lex, gray, weight, random:SEED or linear:systematic
    #[arg(long, default_value = "lex")]
    pub encoder: String,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    /// Comma-separated list of ml, total, trivial
    #[arg(long, default_value = "ml,total")]
    pub decoder: String,
    /// wep, mse or ber
    #[arg(long, default_value = "mse")]
    pub value: String,
    /// A single probability or START:STOP:STEP
    #[arg(long, default_value = "0.01:0.49:0.01")]
    pub p: String,
    #[arg(long, value_enum, default_value_t = MethodArg::Exact)]
    pub method: MethodArg,
    /// Monte Carlo trials per grid point
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    /// Output CSV (stdout when omitted)
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Exact,
    Mc,
}

#[derive(Args, Debug)]
pub struct ImageArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    /// ml, total or trivial
    #[arg(long, default_value = "ml")]
    pub decoder: String,
    #[arg(long)]
    pub p: f64,
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    /// Input PGM (P2 or P5)
    #[arg(long, short)]
    pub input: PathBuf,
    /// Decoded image, written as P5
    #[arg(long, short)]
    pub output: PathBuf,
    /// Purple-highlight difference image, written as P6
    #[arg(long)]
    pub diff: Option<PathBuf>,
    /// Stats line destination (stdout when omitted)
    #[arg(long)]
    pub stats: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// swap, disagreement, h-closed-form, bayes-hamming, translation, wep, ber, decoder-oracle or all
    #[arg(default_value = "all")]
    pub suite: String,
}

/// A failure with the exit status it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn usage(e: impl std::fmt::Display) -> Self {
        Self {
            code: EXIT_USAGE,
            message: e.to_string(),
        }
    }

    fn io(path: &Path, e: impl std::fmt::Display) -> Self {
        Self {
            code: EXIT_IO,
            message: format!("{}: {e}", path.display()),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) => Self {
                code: EXIT_IO,
                message: e.to_string(),
            },
            other => Self::usage(other),
        }
    }
}

pub fn parse_code(s: &str) -> Result<LinearCode> {
    let bad = || {
        Error::OutOfRange(format!(
            "unknown code '{s}'; expected identity:K, hamming:L, c3 or c4"
        ))
    };
    match s.split_once(':') {
        Some(("identity", k)) => LinearCode::identity(k.parse().map_err(|_| bad())?),
        Some(("hamming", l)) => hamming_code(l.parse().map_err(|_| bad())?),
        None if s == "c3" => Ok(paper_code_c3()),
        None if s == "c4" => Ok(paper_code_c4()),
        _ => Err(bad()),
    }
}

pub fn parse_encoder(s: &str, code: Arc<LinearCode>) -> Result<EncoderMap> {
    match s.split_once(':') {
        Some(("random", seed)) => {
            let seed = seed
                .parse()
                .map_err(|_| Error::OutOfRange(format!("bad encoder seed in '{s}'")))?;
            Ok(random_encoder(code, seed))
        }
        Some(("linear", "systematic")) => Ok(systematic_encoder(code)),
        None if s == "lex" => Ok(lexicographic_encoder(code)),
        None if s == "gray" => gray_encoder_for(code),
        None if s == "weight" => Ok(weight_priority_encoder(code)),
        _ => Err(Error::OutOfRange(format!(
            "unknown encoder '{s}'; expected lex, gray, weight, random:SEED or linear:systematic"
        ))),
    }
}

pub fn parse_decoder(s: &str) -> Result<DecoderSpec> {
    match s {
        "ml" => Ok(DecoderSpec::Ml),
        "total" => Ok(DecoderSpec::Total),
        "trivial" => Ok(DecoderSpec::Trivial),
        _ => Err(Error::OutOfRange(format!(
            "unknown decoder '{s}'; expected ml, total or trivial"
        ))),
    }
}

pub fn parse_value(s: &str, k: usize) -> Result<ValueTable> {
    match s {
        "wep" => indicator_value(k),
        "mse" => squared_error_value(k),
        "ber" => bit_error_value(k),
        _ => Err(Error::OutOfRange(format!(
            "unknown value function '{s}'; expected wep, mse or ber"
        ))),
    }
}

/// `START:STOP:STEP` (inclusive where representable) or a single value.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| Error::OutOfRange(format!("bad number '{t}' in grid '{s}'")))
    };
    let parts: Vec<&str> = s.split(':').collect();
    let grid = match parts.as_slice() {
        [single] => vec![num(single)?],
        [a, b, c] => linear_grid(num(a)?, num(b)?, num(c)?)?,
        _ => {
            return Err(Error::OutOfRange(format!(
                "grid '{s}' is not START:STOP:STEP"
            )))
        }
    };
    crate::loss::sweep::check_grid(&grid)?;
    Ok(grid)
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::result::Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(path, e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

fn cmd_sweep(args: &SweepArgs) -> std::result::Result<String, CliError> {
    let code = Arc::new(parse_code(&args.scheme.code)?);
    let encoder = parse_encoder(&args.scheme.encoder, code.clone())?;
    let value = parse_value(&args.value, code.k())?;
    let grid = parse_grid(&args.p)?;
    let configs = args
        .decoder
        .split(',')
        .map(|d| {
            Ok(Configuration {
                code_label: args.scheme.code.clone(),
                encoder_label: args.scheme.encoder.clone(),
                value_label: args.value.clone(),
                encoder: encoder.clone(),
                decoder: parse_decoder(d.trim())?,
                value: value.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let method = match args.method {
        MethodArg::Exact => Method::Exact,
        MethodArg::Mc => Method::MonteCarlo {
            trials: args.trials,
            seed: args.seed,
        },
    };
    let report = sweep_with(&grid, &configs, method)?;
    let mut buf = Vec::new();
    report.write_csv(&mut buf)?;
    match &args.output {
        Some(path) => {
            write_atomic(path, &buf)?;
            Ok(format!(
                "wrote {} rows to {}\n",
                report.len(),
                path.display()
            ))
        }
        None => Ok(String::from_utf8(buf).expect("CSV is UTF-8")),
    }
}

/// Brings an input image to depth `k`: depth-8 images are quantized, images
/// already at depth `k` are used as they are.
fn to_depth(image: &GrayImage, k: u8) -> Result<GrayImage> {
    if image.depth() == k {
        Ok(image.clone())
    } else if image.depth() == 8 {
        quantize(image, k)
    } else {
        quantize(&dequantize(image), k)
    }
}

fn cmd_image(args: &ImageArgs) -> std::result::Result<String, CliError> {
    let code = Arc::new(parse_code(&args.scheme.code)?);
    if code.k() > 8 {
        return Err(CliError::usage(format!(
            "code dimension {} exceeds 8 bits per pixel",
            code.k()
        )));
    }
    if !(0.0..=1.0).contains(&args.p) {
        return Err(CliError::usage(format!(
            "crossover probability {} not in [0, 1]",
            args.p
        )));
    }
    let encoder = parse_encoder(&args.scheme.encoder, code.clone())?;
    let decoder = parse_decoder(&args.decoder)?.build(code.clone(), args.p)?;
    let bytes = fs::read(&args.input).map_err(|e| CliError::io(&args.input, e))?;
    let original = read_pgm(&bytes).map_err(|e| CliError::io(&args.input, e))?;
    let image = to_depth(&original, code.k() as u8)?;
    let (decoded, stats) = transmit_image(&image, &encoder, &decoder, args.p, args.seed)?;
    write_atomic(&args.output, &write_pgm(&decoded))?;
    if let Some(diff) = &args.diff {
        write_atomic(diff, &diff_highlight(&image, &decoded)?)?;
    }
    let line = format!(
        "pixels={} wrong={} wrong_fraction={} mse={} bit_flips={} seed={}\n",
        stats.pixels,
        stats.wrong_pixels,
        stats.wrong_fraction(),
        stats.mse,
        stats.bit_flips,
        stats.seed
    );
    match &args.stats {
        Some(path) => {
            write_atomic(path, line.as_bytes())?;
            Ok(String::new())
        }
        None => Ok(line),
    }
}

fn cmd_verify(args: &VerifyArgs) -> std::result::Result<(String, bool), CliError> {
    let suite: Suite = args.suite.parse()?;
    let report = run_suite(suite)?;
    Ok((format!("{report}\n"), report.passed()))
}

/// Parses `args` (including the program name) and runs the command, writing
/// normal output to `out`. Returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    if let Some(t) = cli.threads {
        if t == 0 {
            let _ = writeln!(err, "error: --threads must be at least 1");
            return EXIT_USAGE;
        }
        // fails harmlessly if the global pool was already built
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global();
    }
    let result = match &cli.command {
        Command::Sweep(a) => cmd_sweep(a).map(|s| (s, true)),
        Command::Image(a) => cmd_image(a).map(|s| (s, true)),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok((text, ok)) => {
            if out.write_all(text.as_bytes()).is_err() {
                return EXIT_IO;
            }
            if ok {
                0
            } else {
                EXIT_VERIFY_FAILED
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

pub fn main_entry() -> ExitCode {
    let stdout = io::stdout();
    let stderr = io::stderr();
    ExitCode::from(run(
        std::env::args_os(),
        &mut stdout.lock(),
        &mut stderr.lock(),
    ))
}
