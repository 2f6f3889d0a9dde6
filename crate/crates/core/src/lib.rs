pub mod ainfty;
pub mod bmt;
pub mod cli;
pub mod decide;
pub mod error;
pub mod exactla;
pub mod galg;
pub mod gysin;
pub mod sympow;

pub use error::{Error, Result};
