pub mod baskets;
pub mod config;
pub mod error;
pub mod linalg;
pub mod linegeom;
pub mod poly;
pub mod report;
pub mod selfcheck;
pub mod spheres;
pub mod symqr;

pub use config::Tolerances;
pub use error::{Error, Result};
pub use linalg::C64;
