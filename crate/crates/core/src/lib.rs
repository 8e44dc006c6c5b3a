//! Numerical toolkit for the subcritical dissipative surface
//! quasi-geostrophic equation on R² and on periodic boxes.

pub mod error;
pub mod grid;
pub mod io;
pub mod kernel;
pub mod solver;
pub mod special;
pub mod verify;

pub use error::{Error, Result};
