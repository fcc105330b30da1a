//! Riesz s-equilibrium measures on the real line in the field of one
//! attracting point charge.

pub mod error;
pub mod iba;
pub mod measures;
pub mod quadrature;
pub mod solver;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
pub use measures::FieldParams;
