pub mod accumulate;
pub mod cli;
pub mod config;
pub mod corpus;
pub mod error;
pub mod expr;
pub mod harness;
pub mod oscillation;
pub mod sequence;
pub mod transform;
pub mod variation;
pub mod weights;

pub use error::{Error, Result};
