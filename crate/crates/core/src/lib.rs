//! Exact traces of free planar holonomy fields driven by free unitary Lévy processes,
//! and Monte-Carlo simulation of their `U(N)` matrix models.

pub mod arrangement;
pub mod braid;
pub mod error;
pub mod field;
pub mod geometry;
pub mod lasso;
pub mod levy;
pub mod matrix;
pub mod seeds;
pub mod series;
pub mod sim;
pub mod words;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
