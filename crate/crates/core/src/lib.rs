//! Wigner phase of photon helicity along null geodesics in Schwarzschild
//! spacetime, with Earth–satellite–Earth link schemes and multi-photon
//! helicity states.

pub mod cli;
pub mod dual;
pub mod error;
pub mod frames;
pub mod geodesics;
pub mod geometry;
pub mod numerics;
pub mod quantum;
pub mod schemes;
pub mod studies;
pub mod transport;

pub use error::{Result, WignerError};
