pub mod cli;
pub mod data;
pub mod error;
pub mod eval;
pub mod forest;
pub mod metrics;
pub mod neighbors;
pub mod num;
pub mod profile;
pub mod recommend;
pub mod resample;
pub mod rules;
pub mod seed;

pub use data::{Class, Dataset};
pub use error::{Error, Result};
