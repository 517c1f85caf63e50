//! Numerical verification of Schwarz-type inequalities for harmonic functions in
//! the unit ball: Möbius geometry, Poisson integrals, sharp gradient
//! estimates, and Clifford/octonion Dirac operators.

pub mod cli;
pub mod clifford;
pub mod diff;
pub mod error;
pub mod harmonic;
pub mod hypercomplex;
pub mod lab;
pub mod mobius;
pub mod octonion;
pub mod point;
pub mod report;

pub use error::{Error, Result};
pub use point::Point;
pub use report::{CheckReport, Regime};
