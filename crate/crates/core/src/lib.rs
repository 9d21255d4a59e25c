//! Causal reasoning over dynamic domains: theories of labeled causal
//! mechanisms, their grounding into logic programs, answer-set solving and
//! the analysis of actual causes.

pub mod analysis;
mod error;
pub mod ground;
pub mod model;
pub mod parser;
pub mod solver;

pub use error::{Error, Result};
