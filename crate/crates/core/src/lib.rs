pub mod cli;
pub mod counterexample;
pub mod error;
pub mod ext_real;
pub mod io;
pub mod matrix;
pub mod operator;
pub mod report;
pub mod scaling;
pub mod semigroup;
pub mod tropical;

pub use error::{Error, Result};
