//! Exact integer linear algebra.
//!
//! Everything here works over arbitrary-precision integers; there is no
//! fixed-width arithmetic that could overflow.

mod lattice;
mod matrix;
mod normal_form;
pub mod rational;

pub use lattice::{cokernel_invariants, gcd_all, is_primitive, kernel_basis, primitive};
pub use matrix::{dot, IntMatrix};
pub use normal_form::{hermite_normal_form, smith_normal_form, HermiteForm, SmithForm};
