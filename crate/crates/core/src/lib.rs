//! Garbage-free quantum squaring circuits built from logical-AND gates and
//! in-place ripple-carry adders.

pub mod blocks;
pub mod cost;
pub mod error;
pub mod ir;
pub mod layout;
pub mod sim;
pub mod synth;

pub use error::{Error, Result};
