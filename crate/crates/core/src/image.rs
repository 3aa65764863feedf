//! Grayscale images, netpbm I/O and per-pixel transmission.

use rayon::prelude::*;

use crate::channel::{substream, Bmsc, ChannelModel};
use crate::decoder::DecoderRule;
use crate::encoder::EncoderMap;
use crate::error::{Error, Result};
use crate::gf2::{int_to_word, word_to_int, BitWord};

pub const PURPLE: [u8; 3] = [128, 0, 128];

/// Row-major image whose pixels are brightness indices in `0..2^depth`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    depth: u8,
    pixels: Vec<u16>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, depth: u8, pixels: Vec<u16>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Shape(format!("image dimensions {width}x{height}")));
        }
        if !(1..=8).contains(&depth) {
            return Err(Error::OutOfRange(format!("pixel depth {depth}")));
        }
        if pixels.len() != width * height {
            return Err(Error::Shape(format!(
                "{} pixels for a {width}x{height} image",
                pixels.len()
            )));
        }
        let max = (1u16 << depth) - 1;
        if let Some(&v) = pixels.iter().find(|&&v| v > max) {
            return Err(Error::OutOfRange(format!("pixel value {v} exceeds {max}")));
        }
        Ok(Self {
            width,
            height,
            depth,
            pixels,
        })
    }

    pub fn filled(width: usize, height: usize, depth: u8, value: u16) -> Result<Self> {
        Self::new(width, height, depth, vec![value; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn depth(&self) -> u8 {
        self.depth
    }

    pub fn max_value(&self) -> u16 {
        (1 << self.depth) - 1
    }

    pub fn pixels(&self) -> &[u16] {
        &self.pixels
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn get(&self, x: usize, y: usize) -> u16 {
        self.pixels[y * self.width + x]
    }

    fn same_shape(&self, other: &GrayImage) -> Result<()> {
        if (self.width, self.height, self.depth) != (other.width, other.height, other.depth) {
            return Err(Error::Shape(format!(
                "{}x{} depth {} vs {}x{} depth {}",
                self.width, self.height, self.depth, other.width, other.height, other.depth
            )));
        }
        Ok(())
    }
}

struct Header {
    binary: bool,
    width: usize,
    height: usize,
    maxval: u16,
    raster_start: usize,
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn fail(&self, msg: impl Into<String>) -> Error {
        Error::Format {
            offset: self.pos,
            msg: msg.into(),
        }
    }

    /// Skips whitespace and `#` comments that run to the end of the line.
    fn skip_blank(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_blank();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.fail(format!("expected {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| self.fail(format!("{what} out of range")))
    }
}

fn parse_header(bytes: &[u8]) -> Result<Header> {
    let mut cur = Cursor { bytes, pos: 0 };
    let binary = match bytes.get(..2) {
        Some(b"P2") => false,
        Some(b"P5") => true,
        _ => return Err(cur.fail("expected magic P2 or P5")),
    };
    cur.pos = 2;
    let width = cur.number("width")?;
    let height = cur.number("height")?;
    let maxval = cur.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(cur.fail("zero image dimension"));
    }
    if maxval == 0 || maxval > 255 {
        return Err(cur.fail(format!("maxval {maxval} not in 1..=255")));
    }
    // exactly one whitespace byte separates the header from a binary raster
    match bytes.get(cur.pos) {
        Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
        None if !binary => {}
        _ => return Err(cur.fail("expected whitespace after maxval")),
    }
    Ok(Header {
        binary,
        width,
        height,
        maxval: maxval as u16,
        raster_start: cur.pos,
    })
}

/// Reads a P2 or P5 file.
///
/// When `maxval = 2^k - 1` the image has depth `k` and samples are kept as
/// they are; any other `maxval` gives a depth-8 image with raw samples.
pub fn read_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let h = parse_header(bytes)?;
    let count = h.width.checked_mul(h.height).ok_or(Error::Format {
        offset: h.raster_start,
        msg: "image too large".into(),
    })?;
    let pixels: Vec<u16> = if h.binary {
        let raster = &bytes[h.raster_start..];
        if raster.len() < count {
            return Err(Error::Format {
                offset: bytes.len(),
                msg: format!("truncated raster: {} of {count} samples", raster.len()),
            });
        }
        raster[..count].iter().map(|&b| b as u16).collect()
    } else {
        let mut cur = Cursor {
            bytes,
            pos: h.raster_start,
        };
        let mut out = Vec::with_capacity(count);
        for i in 0..count {
            cur.skip_blank();
            if cur.pos >= bytes.len() {
                return Err(cur.fail(format!("truncated raster: {i} of {count} samples")));
            }
            let v = cur.number("sample")?;
            out.push(v.min(u16::MAX as usize) as u16);
        }
        out
    };
    let at = h.raster_start;
    if let Some(&v) = pixels.iter().find(|&&v| v > h.maxval) {
        return Err(Error::Format {
            offset: at,
            msg: format!("sample {v} exceeds maxval {}", h.maxval),
        });
    }
    let depth = if (h.maxval + 1).is_power_of_two() {
        (h.maxval + 1).trailing_zeros() as u8
    } else {
        8
    };
    GrayImage::new(h.width, h.height, depth, pixels)
}

/// Writes a binary P5 file with `maxval = 2^depth - 1`.
pub fn write_pgm(image: &GrayImage) -> Vec<u8> {
    let mut out = format!(
        "P5\n{} {}\n{}\n",
        image.width,
        image.height,
        image.max_value()
    )
    .into_bytes();
    out.extend(image.pixels.iter().map(|&v| v as u8));
    out
}

/// Writes an ASCII P2 file.
pub fn write_pgm_ascii(image: &GrayImage) -> Vec<u8> {
    let mut out = format!(
        "P2\n{} {}\n{}\n",
        image.width,
        image.height,
        image.max_value()
    );
    for row in image.pixels.chunks(image.width) {
        let line: Vec<String> = row.iter().map(u16::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out.into_bytes()
}

/// `round(v (2^k - 1) / 255)`, halves rounded up.
pub fn quantize(image: &GrayImage, k: u8) -> Result<GrayImage> {
    if image.depth != 8 {
        return Err(Error::Precondition(format!(
            "quantize expects depth 8, got {}",
            image.depth
        )));
    }
    if !(1..=8).contains(&k) {
        return Err(Error::OutOfRange(format!("target depth {k}")));
    }
    let levels = (1u32 << k) - 1;
    let pixels = image
        .pixels
        .iter()
        .map(|&v| ((2 * v as u32 * levels + 255) / 510) as u16)
        .collect();
    GrayImage::new(image.width, image.height, k, pixels)
}

/// `round(r 255 / (2^k - 1))` back to depth 8.
pub fn dequantize(image: &GrayImage) -> GrayImage {
    let levels = image.max_value() as u32;
    let pixels = image
        .pixels
        .iter()
        .map(|&r| ((2 * r as u32 * 255 + levels) / (2 * levels)) as u16)
        .collect();
    GrayImage::new(image.width, image.height, 8, pixels).expect("depth-8 values")
}

/// LSB-first word of length `k` for brightness index `r`.
pub fn pixel_to_word(r: u16, k: u8) -> Result<BitWord> {
    if !(1..=8).contains(&k) {
        return Err(Error::OutOfRange(format!("pixel depth {k}")));
    }
    if r as u32 >= 1 << k {
        return Err(Error::ValueOutOfRange {
            value: r as u64,
            len: k as usize,
        });
    }
    int_to_word(r as u64, k as usize)
}

pub fn word_to_pixel(x: BitWord) -> Result<u16> {
    if !(1..=8).contains(&x.len()) {
        return Err(Error::InvalidLength(x.len()));
    }
    Ok(word_to_int(x) as u16)
}

/// Summary of one image transmission.
#[derive(Clone, Debug, PartialEq)]
pub struct TransmissionStats {
    pub pixels: usize,
    pub wrong_pixels: usize,
    pub mse: f64,
    /// Channel bit flips summed over all pixels.
    pub bit_flips: u64,
    pub seed: u64,
}

impl TransmissionStats {
    pub fn wrong_fraction(&self) -> f64 {
        self.wrong_pixels as f64 / self.pixels as f64
    }

    pub fn flips_per_pixel(&self) -> f64 {
        self.bit_flips as f64 / self.pixels as f64
    }
}

/// Encodes each pixel with `f`, sends it through a BMSC with crossover `p`,
/// decodes with `decoder` and maps back through `f⁻¹`. Pixel `i` uses
/// substream `i` of `seed`, so the result does not depend on scheduling.
pub fn transmit_image(
    image: &GrayImage,
    f: &EncoderMap,
    decoder: &DecoderRule,
    p: f64,
    seed: u64,
) -> Result<(GrayImage, TransmissionStats)> {
    if f.size() != 1 << image.depth {
        return Err(Error::Precondition(format!(
            "encoder carries {} symbols, image depth {} needs {}",
            f.size(),
            image.depth,
            1 << image.depth
        )));
    }
    if **f.code() != **decoder.code() {
        return Err(Error::Precondition(
            "encoder and decoder use different codes".into(),
        ));
    }
    let code = f.code();
    let channel = Bmsc::new(code.n(), p)?;
    let words = code.codeword_values();
    let results: Vec<(u16, u32)> = image
        .pixels
        .par_iter()
        .enumerate()
        .map(|(i, &r)| {
            let mut s = substream(seed, i as u64);
            let sent = words[f.encode_index(r as usize)];
            let received = channel.sample_raw(sent, &mut s);
            let decoded = f.decode_index(decoder.decode_sample(received, &mut s));
            (decoded as u16, (sent ^ received).count_ones())
        })
        .collect();
    let pixels: Vec<u16> = results.iter().map(|&(v, _)| v).collect();
    let bit_flips = results.iter().map(|&(_, b)| b as u64).sum();
    let out = GrayImage::new(image.width, image.height, image.depth, pixels)?;
    let stats = TransmissionStats {
        pixels: image.len(),
        wrong_pixels: image
            .pixels
            .iter()
            .zip(&out.pixels)
            .filter(|(a, b)| a != b)
            .count(),
        mse: image_mse(image, &out)?,
        bit_flips,
        seed,
    };
    Ok((out, stats))
}

/// Mean over pixels of `((x - y) / (2^k - 1))^2`.
pub fn image_mse(x: &GrayImage, y: &GrayImage) -> Result<f64> {
    x.same_shape(y)?;
    let scale = x.max_value() as f64;
    let total: f64 = x
        .pixels
        .iter()
        .zip(&y.pixels)
        .map(|(&a, &b)| {
            let d = (a as f64 - b as f64) / scale;
            d * d
        })
        .sum();
    Ok(total / x.len() as f64)
}

/// P6 image: purple where `decoded` matches `original`, the decoded gray
/// level (at depth 8) elsewhere.
pub fn diff_highlight(original: &GrayImage, decoded: &GrayImage) -> Result<Vec<u8>> {
    original.same_shape(decoded)?;
    let gray = dequantize(decoded);
    let mut out = format!("P6\n{} {}\n255\n", original.width, original.height).into_bytes();
    for ((&a, &b), &g) in original
        .pixels
        .iter()
        .zip(&decoded.pixels)
        .zip(&gray.pixels)
    {
        if a == b {
            out.extend_from_slice(&PURPLE);
        } else {
            out.extend_from_slice(&[g as u8; 3]);
        }
    }
    Ok(out)
}
