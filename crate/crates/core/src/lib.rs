pub mod aklt;
pub mod cluster;
pub mod error;
pub mod fit;
pub mod harness;
pub mod linalg;
pub mod mps;
pub mod register;
pub mod report;
pub mod rng;
pub mod spin;
pub mod tomography;

pub use error::{Result, SimError};
