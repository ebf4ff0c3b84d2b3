//! Discrete and continuum hitting distributions of segments on the real axis
//! for planar random walks, and tools for comparing them.

pub mod axis;
pub mod continuum;
pub mod edge;
pub mod error;
pub mod hitting;
pub mod lab;
pub mod mc;
pub mod potential;
pub mod probes;
pub mod quad;
pub mod report;
pub mod series;
pub mod spectral;
pub mod truncated;
pub mod walk;

pub use error::{Error, Result};
