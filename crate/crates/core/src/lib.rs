pub mod arith;
pub mod cli;
pub mod cyclicbar;
pub mod divisor;
pub mod error;
pub mod json;
pub mod kgroups;
pub mod linalg;
pub mod truncation;
pub mod witt;

pub use arith::PrimeP;
pub use error::{Error, Result};
pub use truncation::TruncationSet;
