//! Both sides of the verified inequalities, the dimensional constants,
//! and random families for sweeps.

pub mod checks;
pub mod constants;
pub mod jacobian;
pub mod sampling;

pub use checks::*;
pub use constants::{ball_volume, liu_constant, liu_constant_n3, sharp_gradient_constant, zhang_constant};
pub use jacobian::{operator_norm, JacobianMatrix};
