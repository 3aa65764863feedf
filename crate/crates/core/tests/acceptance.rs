//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Reference values come from the brute-force oracles below, which
//! share no code with the library's decoders or loss engine.

use std::path::Path;
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use codeloss::channel::{Bmsc, ChannelModel};
use codeloss::code::{hamming_code, paper_code_c3, paper_code_c4, repetition_code, LinearCode};
use codeloss::decoder::{ml_decoder, total_order_decoder, trivial_decoder, DecoderRule};
use codeloss::encoder::{
    generator_encoder, lexicographic_encoder, random_encoder, systematic_encoder, EncoderMap,
};
use codeloss::image::{quantize, read_pgm, transmit_image, GrayImage, PURPLE};
use codeloss::loss::{
    bit_error_probability, bit_error_probability_direct, bit_error_value, expected_loss_exact,
    expected_loss_monte_carlo, h_coefficients, hamming_h_closed_form, indicator_value,
    is_bayes_encoder, sign_changes, squared_error_value, sweep_losses, theorem1_check,
    word_error_probability, Configuration, DecoderSpec, ValueTable,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(bool, String), String>;
type Dist = Vec<(usize, f64)>;
type Metric = fn(u64, u64) -> u32;
type Criterion<'a> = (&'a str, Box<dyn Fn() -> Outcome>);

const P_GRID: [f64; 4] = [0.05, 0.1, 0.2, 0.35];

// ---------------------------------------------------------------------------
// oracles

fn hamming_distance(x: u64, y: u64) -> u32 {
    (x ^ y).count_ones()
}

/// Largest 1-based coordinate where the words differ, 0 when equal.
fn total_order_distance(x: u64, y: u64) -> u32 {
    64 - (x ^ y).leading_zeros()
}

/// Nearest codewords under `metric`, ties split evenly.
fn nearest(words: &[u64], y: u64, metric: Metric) -> Dist {
    let best = words.iter().map(|&c| metric(c, y)).min().unwrap();
    let hits: Vec<usize> = (0..words.len())
        .filter(|&i| metric(words[i], y) == best)
        .collect();
    let w = 1.0 / hits.len() as f64;
    hits.into_iter().map(|i| (i, w)).collect()
}

fn likelihood(n: usize, p: f64, sent: u64, y: u64) -> f64 {
    let d = hamming_distance(sent, y) as i32;
    p.powi(d) * (1.0 - p).powi(n as i32 - d)
}

/// `(1/M) Σ_sent Σ_y P(y|sent) Σ_c w(y,c) ν(f⁻¹(sent), f⁻¹(c))`.
fn oracle_loss(
    words: &[u64],
    n: usize,
    p: f64,
    decide: &dyn Fn(u64) -> Dist,
    info_of: &[usize],
    nu: &dyn Fn(usize, usize) -> f64,
) -> f64 {
    let decisions: Vec<Dist> = (0..1u64 << n).map(decide).collect();
    let mut total = 0.0;
    for (s, &sent) in words.iter().enumerate() {
        for (y, d) in decisions.iter().enumerate() {
            let py = likelihood(n, p, sent, y as u64);
            for &(c, w) in d {
                total += py * w * nu(info_of[s], info_of[c]);
            }
        }
    }
    total / words.len() as f64
}

/// `H(u) = (1/M) Σ_c Σ_y w(y,c) P(y | c ⊕ u)` for every codeword `u`.
fn oracle_h(words: &[u64], n: usize, p: f64, decide: &dyn Fn(u64) -> Dist) -> Vec<f64> {
    let decisions: Vec<Dist> = (0..1u64 << n).map(decide).collect();
    words
        .iter()
        .map(|&u| {
            let mut t = 0.0;
            for (y, d) in decisions.iter().enumerate() {
                for &(c, w) in d {
                    t += w * likelihood(n, p, words[c] ^ u, y as u64);
                }
            }
            t / words.len() as f64
        })
        .collect()
}

fn identity_perm(m: usize) -> Vec<usize> {
    (0..m).collect()
}

fn inverse_of(f: &EncoderMap) -> Vec<usize> {
    (0..f.size()).map(|c| f.decode_index(c)).collect()
}

fn ml(code: &Arc<LinearCode>, p: f64) -> Result<(DecoderRule, Bmsc), String> {
    let ch = Bmsc::new(code.n(), p).map_err(|e| e.to_string())?;
    Ok((
        ml_decoder(code.clone(), Arc::new(ch.clone())).map_err(|e| e.to_string())?,
        ch,
    ))
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

// ---------------------------------------------------------------------------
// criteria

fn wep_identity() -> Outcome {
    let mut worst = 0.0f64;
    let mut worst_oracle = 0.0f64;
    for code in [
        Arc::new(hamming_code(3).map_err(err)?),
        Arc::new(paper_code_c3()),
    ] {
        let words = code.codeword_values().to_vec();
        let f = lexicographic_encoder(code.clone());
        for p in P_GRID {
            let (a_ml, ch) = ml(&code, p)?;
            let pairs: [(DecoderRule, Metric); 2] = [
                (a_ml, hamming_distance),
                (total_order_decoder(code.clone()), total_order_distance),
            ];
            for (a, metric) in pairs {
                let e = expected_loss_exact(&f, &a, &ch, &indicator_value(4).map_err(err)?)
                    .map_err(err)?;
                let wep = word_error_probability(&a, &ch).map_err(err)?;
                let oracle = oracle_loss(
                    &words,
                    7,
                    p,
                    &|y| nearest(&words, y, metric),
                    &identity_perm(16),
                    &|s, d| f64::from(u8::from(s != d)),
                );
                worst = worst.max((e - wep).abs());
                worst_oracle = worst_oracle.max((e - oracle).abs());
            }
        }
    }
    let code = Arc::new(hamming_code(3).map_err(err)?);
    let (a, ch) = ml(&code, 0.1)?;
    let wep = word_error_probability(&a, &ch).map_err(err)?;
    // perfect single-error-correcting code: decoding fails outside the radius-1 sphere
    let sphere = 1.0 - 0.9f64.powi(7) - 7.0 * 0.1 * 0.9f64.powi(6);
    let value_ok = (wep - sphere).abs() < 1e-12 && (wep - 0.1496944).abs() < 5e-8;
    Ok((
        worst <= 1e-12 && worst_oracle <= 1e-12 && value_ok,
        format!("max |E - WEP| = {worst:.1e}, max |E - oracle| = {worst_oracle:.1e}, H(3)+ML p=0.1 WEP = {wep:.7}"),
    ))
}

fn closed_form() -> Outcome {
    let code = Arc::new(hamming_code(3).map_err(err)?);
    let words = code.codeword_values().to_vec();
    let mut worst = 0.0f64;
    let mut monotone = true;
    for p in P_GRID {
        let (a, ch) = ml(&code, p)?;
        let h = h_coefficients(&a, &ch).map_err(err)?.values;
        let oracle = oracle_h(&words, 7, p, &|y| nearest(&words, y, hamming_distance));
        let mut by_weight: Vec<(u32, f64)> = Vec::new();
        for (i, &c) in words.iter().enumerate() {
            let w = c.count_ones();
            let cf = hamming_h_closed_form(3, w as usize, p).map_err(err)?;
            worst = worst.max((cf - h[i]).abs()).max((oracle[i] - h[i]).abs());
            by_weight.push((w, h[i]));
        }
        by_weight.sort_by_key(|x| x.0);
        monotone &= by_weight.windows(2).all(|x| x[1].1 <= x[0].1 + 1e-15);
    }
    Ok((
        worst <= 1e-10 && monotone,
        format!("max deviation {worst:.1e}, non-increasing in weight: {monotone}"),
    ))
}

fn translation_identity() -> Outcome {
    let code = Arc::new(hamming_code(3).map_err(err)?);
    let sys = systematic_encoder(code.clone());
    let mut rows = code.systematic_generator().packed_rows().to_vec();
    rows.reverse();
    rows[0] ^= rows[3];
    let other = generator_encoder(code.clone(), &rows).map_err(err)?;
    if sys.table() == other.table() || !sys.is_linear() || !other.is_linear() {
        return Err("test encoders are not two distinct linear maps".into());
    }
    let mut worst = 0.0f64;
    for p in P_GRID {
        let (a_ml, ch) = ml(&code, p)?;
        for a in [a_ml, total_order_decoder(code.clone())] {
            let h = h_coefficients(&a, &ch).map_err(err)?.values;
            for f in [&sys, &other] {
                for nu in [
                    indicator_value(4).map_err(err)?,
                    bit_error_value(4).map_err(err)?,
                ] {
                    let r = nu.reduced().ok_or("value not translation invariant")?;
                    let via_h: f64 = (0..16).map(|c| h[c] * r[f.decode_index(c)]).sum();
                    let e = expected_loss_exact(f, &a, &ch, &nu).map_err(err)?;
                    worst = worst.max((via_h - e).abs());
                }
            }
        }
    }
    Ok((
        worst <= 1e-10,
        format!("max |Σ H·ν̃ - E| = {worst:.1e} over 2 encoders × 2 decoders × 2 values × 4 p"),
    ))
}

fn bayes() -> Outcome {
    let code = Arc::new(hamming_code(3).map_err(err)?);
    let words = code.codeword_values().to_vec();
    let p = 0.1;
    let (a, ch) = ml(&code, p)?;
    let h = oracle_h(&words, 7, p, &|y| nearest(&words, y, hamming_distance));
    let mut rows = code.systematic_generator().packed_rows().to_vec();
    rows.rotate_left(1);
    let encoders = [
        systematic_encoder(code.clone()),
        lexicographic_encoder(code.clone()),
        generator_encoder(code.clone(), &rows).map_err(err)?,
    ];
    let shapes: [fn(u32) -> f64; 3] = [|w| w as f64, |w| (w * w) as f64, |w| 2f64.powi(w as i32)];
    let (mut accepted, mut tested, mut rejected, mut swaps) = (0, 0, 0, 0);
    for f in &encoders {
        for g in shapes {
            // strictly monotone in the weight of the codeword carrying each symbol
            let reduced: Vec<f64> = (0..16)
                .map(|j| g(words[f.encode_index(j)].count_ones()) + j as f64 * 1e-4)
                .collect();
            let loss = |r: &[f64]| (0..16).map(|c| h[c] * r[f.decode_index(c)]).sum::<f64>();
            let optimum = |r: &[f64]| {
                let mut hs = h.clone();
                let mut vs = r.to_vec();
                hs.sort_by(|a, b| b.total_cmp(a));
                vs.sort_by(|a, b| a.total_cmp(b));
                hs.iter().zip(&vs).map(|(a, b)| a * b).sum::<f64>()
            };
            let v = is_bayes_encoder(
                f,
                &a,
                &ch,
                &ValueTable::from_reduced(4, &reduced).map_err(err)?,
            )
            .map_err(err)?;
            tested += 1;
            accepted +=
                usize::from(v.is_bayes && (loss(&reduced) - optimum(&reduced)).abs() < 1e-12);
            for j1 in 0..16 {
                for j2 in j1 + 1..16 {
                    if words[f.encode_index(j1)].count_ones()
                        == words[f.encode_index(j2)].count_ones()
                    {
                        continue;
                    }
                    let mut s = reduced.clone();
                    s.swap(j1, j2);
                    let v = is_bayes_encoder(
                        f,
                        &a,
                        &ch,
                        &ValueTable::from_reduced(4, &s).map_err(err)?,
                    )
                    .map_err(err)?;
                    swaps += 1;
                    let worse = loss(&s) > optimum(&s) + 1e-12;
                    rejected += usize::from(!v.is_bayes && v.witness.is_some() && worse);
                }
            }
        }
    }
    Ok((
        accepted == tested && rejected == swaps,
        format!("{accepted}/{tested} monotone values accepted, {rejected}/{swaps} cross-weight transpositions rejected"),
    ))
}

fn lex_dominance() -> Outcome {
    let code = Arc::new(LinearCode::identity(4).map_err(err)?);
    let a = trivial_decoder(4).map_err(err)?;
    let nu = squared_error_value(4).map_err(err)?;
    let words = code.codeword_values().to_vec();
    let lex = lexicographic_encoder(code.clone());
    let mut all_ok = true;
    let mut detail = Vec::new();
    for p in [0.05, 0.2, 0.4] {
        let ch = Bmsc::new(4, p).map_err(err)?;
        let base = expected_loss_exact(&lex, &a, &ch, &nu).map_err(err)?;
        let mse = |s: usize, d: usize| ((s as f64 - d as f64) / 15.0).powi(2);
        let oracle = oracle_loss(
            &words,
            4,
            p,
            &|y| vec![(y as usize, 1.0)],
            &inverse_of(&lex),
            &mse,
        );
        let (mut le, mut strict) = (0, 0);
        for seed in 0..500 {
            let f = random_encoder(code.clone(), seed);
            let e = expected_loss_exact(&f, &a, &ch, &nu).map_err(err)?;
            if seed < 5 {
                let o = oracle_loss(
                    &words,
                    4,
                    p,
                    &|y| vec![(y as usize, 1.0)],
                    &inverse_of(&f),
                    &mse,
                );
                all_ok &= (o - e).abs() < 1e-12;
            }
            le += usize::from(base <= e + 1e-15);
            strict += usize::from(base < e - 1e-15);
        }
        all_ok &= (oracle - base).abs() < 1e-12 && le == 500 && strict * 100 >= 99 * 500;
        detail.push(format!(
            "p={p}: lex {base:.5}, <= {le}/500, strict {strict}/500"
        ));
    }
    Ok((all_ok, detail.join("; ")))
}

fn decoder_crossing() -> Outcome {
    let code = Arc::new(hamming_code(3).map_err(err)?);
    let configs: Vec<Configuration> = [DecoderSpec::Ml, DecoderSpec::Total]
        .into_iter()
        .map(|d| -> Result<Configuration, String> {
            Ok(Configuration {
                code_label: "hamming:3".into(),
                encoder_label: "lex".into(),
                value_label: "mse".into(),
                encoder: lexicographic_encoder(code.clone()),
                decoder: d,
                value: squared_error_value(4).map_err(err)?,
            })
        })
        .collect::<Result<_, _>>()?;
    let grid: Vec<f64> = (1..=49).map(|i| i as f64 / 100.0).collect();
    let report = sweep_losses(&grid, &configs).map_err(err)?;
    let (ml_s, to_s) = (report.series("ml"), report.series("total"));

    // spot-check the sweep against the oracle
    let words = code.codeword_values().to_vec();
    let info = inverse_of(&lexicographic_encoder(code.clone()));
    let mse = |s: usize, d: usize| ((s as f64 - d as f64) / 15.0).powi(2);
    let mut spot = 0.0f64;
    for i in [0, 24, 48] {
        let p = grid[i];
        let o_ml = oracle_loss(
            &words,
            7,
            p,
            &|y| nearest(&words, y, hamming_distance),
            &info,
            &mse,
        );
        let o_to = oracle_loss(
            &words,
            7,
            p,
            &|y| nearest(&words, y, total_order_distance),
            &info,
            &mse,
        );
        spot = spot
            .max((o_ml - ml_s[i].1).abs())
            .max((o_to - to_s[i].1).abs());
    }

    let changes = sign_changes(&ml_s, &to_s);
    let first = ml_s[0].1 - to_s[0].1;
    let last = ml_s[48].1 - to_s[48].1;
    let crossing = changes.first().map(|&(p0, p1)| {
        let i = grid.iter().position(|&p| p == p0).unwrap();
        let (d0, d1) = (ml_s[i].1 - to_s[i].1, ml_s[i + 1].1 - to_s[i + 1].1);
        p0 + (p1 - p0) * d0 / (d0 - d1)
    });
    Ok((
        changes.len() == 1 && first < 0.0 && last > 0.0 && spot < 1e-12,
        format!(
            "{} sign change(s), diff {first:+.2e} at 0.01 and {last:+.2e} at 0.49, p0 ≈ {}, oracle spot-check {spot:.1e}",
            changes.len(),
            crossing.map_or("none".into(), |p| format!("{p:.4}"))
        ),
    ))
}

fn swapped_ml() -> Outcome {
    let mut pairs = 0;
    let mut held = 0;
    let mut min_margin = f64::INFINITY;
    for code in [
        Arc::new(hamming_code(3).map_err(err)?),
        Arc::new(repetition_code(3).map_err(err)?),
    ] {
        let ch: Arc<dyn ChannelModel> = Arc::new(Bmsc::new(code.n(), 0.2).map_err(err)?);
        for i in 0..code.size() {
            for j in 0..code.size() {
                if i == j {
                    continue;
                }
                let r =
                    theorem1_check(code.clone(), ch.clone(), code.codeword(i), code.codeword(j))
                        .map_err(err)?;
                pairs += 1;
                held += usize::from(r.holds());
                min_margin = min_margin.min(r.reward_margin()).min(r.wep_margin());
            }
        }
    }
    Ok((
        held == pairs,
        format!("{held}/{pairs} ordered pairs, smallest margin {min_margin:.3e}"),
    ))
}

fn ber_equivalence() -> Outcome {
    let code = Arc::new(hamming_code(3).map_err(err)?);
    let words = code.codeword_values().to_vec();
    let f = systematic_encoder(code.clone());
    let mut worst = 0.0f64;
    let mut values = Vec::new();
    for p in [0.1, 0.35] {
        let (a, ch) = ml(&code, p)?;
        let via = bit_error_probability(&f, &a, &ch).map_err(err)?;
        let direct = bit_error_probability_direct(&f, &a, &ch).map_err(err)?;
        let oracle = oracle_loss(
            &words,
            7,
            p,
            &|y| nearest(&words, y, hamming_distance),
            &inverse_of(&f),
            &|s, d| (s ^ d).count_ones() as f64 / 4.0,
        );
        worst = worst.max((via - direct).abs()).max((via - oracle).abs());
        values.push(format!("p={p}: {via:.6}"));
    }
    Ok((
        worst <= 1e-12,
        format!("{}, max deviation {worst:.1e}", values.join(", ")),
    ))
}

fn decoder_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut report = Vec::new();
    let mut ok = true;
    let codes = [
        ("H(3)", hamming_code(3).map_err(err)?, false),
        ("C(3)", paper_code_c3(), false),
        ("H(4)", hamming_code(4).map_err(err)?, true),
        ("C(4)", paper_code_c4(), true),
    ];
    for (label, code, sampled) in codes {
        let code = Arc::new(code);
        let words = code.codeword_values().to_vec();
        let a = total_order_decoder(code.clone());
        let n = code.n();
        let inputs: Vec<u64> = if sampled {
            (0..10_000).map(|_| rng.gen_range(0..1u64 << n)).collect()
        } else {
            (0..1u64 << n).collect()
        };
        let agree = inputs
            .iter()
            .filter(|&&y| {
                let got = a.decide_raw(y);
                let want = nearest(&words, y, total_order_distance);
                got.entries().len() == want.len()
                    && got
                        .entries()
                        .iter()
                        .zip(&want)
                        .all(|(g, w)| g.0 == w.0 && (g.1 - w.1).abs() < 1e-12)
            })
            .count();
        ok &= agree == inputs.len();
        report.push(format!("{label} {agree}/{}", inputs.len()));
    }
    Ok((ok, report.join(", ")))
}

fn monte_carlo() -> Outcome {
    let code = Arc::new(hamming_code(3).map_err(err)?);
    let f = lexicographic_encoder(code.clone());
    let nu = squared_error_value(4).map_err(err)?;
    let (a_ml, ch) = ml(&code, 0.35)?;
    let mut ok = true;
    let mut detail = Vec::new();
    for a in [a_ml, total_order_decoder(code.clone())] {
        let exact = expected_loss_exact(&f, &a, &ch, &nu).map_err(err)?;
        let mc = expected_loss_monte_carlo(&f, &a, &ch, &nu, 100_000, 1).map_err(err)?;
        let z = (mc.estimate - exact) / mc.stderr;
        ok &= z.abs() <= 4.0;
        detail.push(format!(
            "{}: exact {exact:.5}, mc {:.5} ± {:.5} (z = {z:+.2})",
            a.label(),
            mc.estimate,
            mc.stderr
        ));
    }
    Ok((ok, detail.join("; ")))
}

// ---------------------------------------------------------------------------
// CLI helpers

fn codeloss(args: &[&str]) -> Result<std::process::Output, String> {
    Command::new(env!("CARGO_BIN_EXE_codeloss"))
        .args(args)
        .env_remove("CODELOSS_SEED")
        .output()
        .map_err(err)
}

fn stat(line: &str, key: &str) -> Result<f64, String> {
    line.split_whitespace()
        .find_map(|kv| kv.strip_prefix(&format!("{key}=")))
        .ok_or(format!("no {key} in stats line {line:?}"))?
        .parse()
        .map_err(err)
}

fn gradient_pgm(width: usize, height: usize) -> Vec<u8> {
    let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
    out.extend((0..width * height).map(|i| ((i % width) * 255 / (width - 1)) as u8));
    out
}

fn image_pipeline(dir: &Path) -> Outcome {
    let input = dir.join("gradient.pgm");
    std::fs::write(&input, gradient_pgm(64, 48)).map_err(err)?;
    let (out, diff) = (dir.join("clean.pgm"), dir.join("clean_diff.ppm"));
    let run = codeloss(&[
        "image",
        "--p",
        "0",
        "-i",
        input.to_str().unwrap(),
        "-o",
        out.to_str().unwrap(),
        "--diff",
        diff.to_str().unwrap(),
    ])?;
    if !run.status.success() {
        return Err(String::from_utf8_lossy(&run.stderr).into_owned());
    }
    let stats = String::from_utf8_lossy(&run.stdout).into_owned();
    let expected = quantize(
        &read_pgm(&std::fs::read(&input).map_err(err)?).map_err(err)?,
        4,
    )
    .map_err(err)?;
    let decoded = read_pgm(&std::fs::read(&out).map_err(err)?).map_err(err)?;
    let diff_bytes = std::fs::read(&diff).map_err(err)?;
    let raster = &diff_bytes[diff_bytes.len() - 64 * 48 * 3..];
    let purple = raster.chunks(3).all(|px| px == PURPLE);
    let clean = decoded == expected && stat(&stats, "mse")? == 0.0 && purple;

    // 4-bit pixels sent uncoded: a pixel is wrong unless all four bits survive
    let noisy_in = dir.join("flat.pgm");
    let flat = GrayImage::new(400, 250, 4, (0..100_000).map(|i| (i % 16) as u16).collect())
        .map_err(err)?;
    std::fs::write(&noisy_in, codeloss::image::write_pgm(&flat)).map_err(err)?;
    let noisy_out = dir.join("noisy.pgm");
    let run = codeloss(&[
        "image",
        "--code",
        "identity:4",
        "--decoder",
        "trivial",
        "--p",
        "0.2",
        "--seed",
        "11",
        "-i",
        noisy_in.to_str().unwrap(),
        "-o",
        noisy_out.to_str().unwrap(),
    ])?;
    if !run.status.success() {
        return Err(String::from_utf8_lossy(&run.stderr).into_owned());
    }
    let line = String::from_utf8_lossy(&run.stdout).into_owned();
    let q = 1.0 - 0.8f64.powi(4);
    let n = stat(&line, "pixels")?;
    let frac = stat(&line, "wrong_fraction")?;
    let sigma = (q * (1.0 - q) / n).sqrt();
    let z = (frac - q) / sigma;
    Ok((
        clean && n >= 1e5 && z.abs() <= 4.0,
        format!("p=0 exact: {clean}; identity:4 at p=0.2 wrong fraction {frac:.5} vs {q:.4} (z = {z:+.2}, {n} pixels)"),
    ))
}

fn determinism(dir: &Path) -> Outcome {
    let mut checks = Vec::new();
    let sweeps: [&[&str]; 2] = [
        &["sweep", "--p", "0.01:0.49:0.04"],
        &[
            "sweep",
            "--method",
            "mc",
            "--trials",
            "20000",
            "--seed",
            "5",
            "--p",
            "0.1:0.4:0.1",
            "--value",
            "wep",
        ],
    ];
    for args in sweeps {
        let mut outputs = Vec::new();
        for threads in ["1", "4", "4"] {
            let mut full = vec!["--threads", threads];
            full.extend_from_slice(args);
            let o = codeloss(&full)?;
            if !o.status.success() {
                return Err(String::from_utf8_lossy(&o.stderr).into_owned());
            }
            outputs.push(o.stdout);
        }
        checks.push((
            format!("{} sweep", if args.len() > 3 { "mc" } else { "exact" }),
            outputs.windows(2).all(|w| w[0] == w[1]),
        ));
    }

    let input = dir.join("det.pgm");
    std::fs::write(&input, gradient_pgm(120, 90)).map_err(err)?;
    let mut images = Vec::new();
    for (i, threads) in ["1", "3", "3"].iter().enumerate() {
        let out = dir.join(format!("det_{i}.pgm"));
        let diff = dir.join(format!("det_{i}.ppm"));
        let o = codeloss(&[
            "--threads",
            threads,
            "image",
            "--decoder",
            "total",
            "--p",
            "0.3",
            "--seed",
            "9",
            "-i",
            input.to_str().unwrap(),
            "-o",
            out.to_str().unwrap(),
            "--diff",
            diff.to_str().unwrap(),
        ])?;
        if !o.status.success() {
            return Err(String::from_utf8_lossy(&o.stderr).into_owned());
        }
        images.push((
            o.stdout,
            std::fs::read(&out).map_err(err)?,
            std::fs::read(&diff).map_err(err)?,
        ));
    }
    checks.push(("image".into(), images.windows(2).all(|w| w[0] == w[1])));

    // library entry points under explicit pools
    let code = Arc::new(hamming_code(3).map_err(err)?);
    let f = lexicographic_encoder(code.clone());
    let (a, ch) = ml(&code, 0.35)?;
    let nu = squared_error_value(4).map_err(err)?;
    let img = GrayImage::new(
        100,
        100,
        4,
        (0..10_000).map(|i| (i * 5 % 16) as u16).collect(),
    )
    .map_err(err)?;
    let in_pool = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| {
                let mc = expected_loss_monte_carlo(&f, &a, &ch, &nu, 10_000, 3).unwrap();
                let (out, stats) = transmit_image(&img, &f, &a, 0.35, 3).unwrap();
                (mc, out, stats)
            })
    };
    checks.push(("library".into(), in_pool(1) == in_pool(6)));

    let ok = checks.iter().all(|c| c.1);
    let detail = checks
        .iter()
        .map(|(name, same)| format!("{name} {}", if *same { "identical" } else { "DIFFERS" }))
        .collect::<Vec<_>>()
        .join(", ");
    Ok((ok, detail))
}

fn main() {
    let started = Instant::now();
    let dir = tempfile::tempdir().expect("temporary directory");
    let dir_path = dir.path().to_path_buf();
    let image_dir = dir_path.clone();
    let criteria: Vec<Criterion> = vec![
        ("WEP identity", Box::new(wep_identity)),
        ("Hamming closed form", Box::new(closed_form)),
        ("translation identity", Box::new(translation_identity)),
        ("Bayes encoder", Box::new(bayes)),
        ("lexicographic dominance", Box::new(lex_dominance)),
        ("decoder crossing", Box::new(decoder_crossing)),
        ("ML is not reward-optimal", Box::new(swapped_ml)),
        ("BER equivalence", Box::new(ber_equivalence)),
        ("total-order oracle", Box::new(decoder_oracle)),
        ("Monte Carlo consistency", Box::new(monte_carlo)),
        (
            "image pipeline",
            Box::new(move || image_pipeline(&image_dir)),
        ),
        ("determinism", Box::new(move || determinism(&dir_path))),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (passed, detail) = match check() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!passed);
        println!(
            "{} {:>2} {name}: {detail}",
            if passed { "PASS" } else { "FAIL" },
            i + 1
        );
    }
    println!(
        "{} criteria, {failed} failed, {:.1}s",
        criteria.len(),
        started.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
