//! Expected-loss analysis for small binary linear codes.
//!
//! Words are LSB-first: coordinate `i` (1-based) carries weight `2^(i-1)` when
//! a word is read as an integer.

pub mod channel;
pub mod cli;
pub mod code;
pub mod decoder;
pub mod encoder;
pub mod error;
pub mod gf2;
pub mod image;
pub mod loss;
pub mod verify;

pub use error::{Error, Result};
