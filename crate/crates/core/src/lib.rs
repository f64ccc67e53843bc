//! Ergodic optimization for locally constant potentials on one-sided
//! subshifts of finite type.

pub mod circle;
pub mod error;
pub mod maxplus;
pub mod measure;
pub mod optimize;
pub mod perturb;
pub mod perron;
pub mod potential;
pub mod shadow;
pub mod shift;
pub mod simplex;
pub mod thermo;

pub use error::{Error, Result};
