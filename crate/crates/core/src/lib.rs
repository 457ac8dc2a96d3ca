pub mod assessment;
pub mod completion;
pub mod encoder_sim;
pub mod error;
pub mod harness;
pub mod numerics;

pub use error::{Error, Result};
