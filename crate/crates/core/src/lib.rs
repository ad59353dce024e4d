pub mod complexity;
pub mod dcd;
pub mod eiv;
pub mod error;
pub mod filters;
pub mod harness;
pub mod linalg;
pub mod rng;
pub mod stats;
pub mod theory;
