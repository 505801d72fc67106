mod error;
pub mod linalg;
pub mod flagkit;
pub mod lie;
pub mod limits;
pub mod pairing;
pub mod wire;

pub use error::{Error, Result};
