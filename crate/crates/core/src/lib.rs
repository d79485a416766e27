pub mod arith;
pub mod asymptotics;
pub mod brute;
pub mod cli;
pub mod error;
pub mod relations;
pub mod report;
pub mod scan;
pub mod semigroup;

pub use error::{Error, Result};
