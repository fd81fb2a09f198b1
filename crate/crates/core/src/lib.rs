//! Numerical S-spectral theory for right-linear operators on finite
//! dimensional Clifford modules.
#![no_std]
// `!(a <= b)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod battery;
pub mod calculus;
pub mod clifford;
pub mod eigen;
pub mod error;
pub mod module;
pub mod mult;
pub mod quadrature;
pub mod slice;
pub mod spectral;

pub use clifford::{BladeIndex, CliffordNum, ImaginaryUnit, Paravector, SpectralSphere};
pub use error::{Error, Result};
pub use module::{CliffordMatrix, ModuleVector, RealifiedMatrix};
