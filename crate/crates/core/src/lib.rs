//! Sentiment pipeline for social-media product-review comments.
//!
//! The stages are independent modules that compose left to right:
//!
//! ```text
//! corpus -> cleaning -> sentiment -> labeling -> features -> models -> eval
//! ```
//!
//! [`pipeline`] wires them together behind the `unbox` binary, writing one
//! artifact per stage so each step can be inspected or re-run on its own.

pub mod cleaning;
pub mod config;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod features;
pub mod labeling;
pub mod models;
pub mod pipeline;
pub mod sentiment;

pub use error::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;
