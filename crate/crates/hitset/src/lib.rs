//! Online hitting set for axis-aligned rectangles and positive polygon
//! homothets over a fixed planar point set, with an exact offline optimum
//! solver and a benchmark harness.

pub mod bbd;
pub mod crossing;
pub mod error;
pub mod extremal;
pub mod generators;
pub mod geometry;
pub mod homothet;
pub mod instance;
pub mod offline;
pub mod online;

pub use error::{Error, Result};
