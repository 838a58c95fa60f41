pub mod certify;
pub mod error;
pub mod fourier;
pub mod geometry;
pub mod poly;
pub mod quaternion;
pub mod sampling;
pub mod solver;
mod serde_util;

pub use error::{Error, Result};
