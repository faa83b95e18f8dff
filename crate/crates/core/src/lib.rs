//! Exact lattice algorithms for simplicial toric varieties.
//!
//! The crate is organised bottom-up:
//!
//! * [`exactmat`]: arbitrary-precision integer matrices, Hermite and Smith
//!   normal forms, kernels and cokernels, exact rational solves.
//! * [`fan`]: complete simplicial fans, with validation, smoothness,
//!   terminality and the singular locus.
//! * [`coxcl`]: the quotient presentation of a toric variety (class group,
//!   grading of the coordinate ring, irrelevant locus, ampleness).
//! * [`gwps`]: generalized weighted projective spaces and weight systems.
//! * [`wci`]: complete intersections in those spaces, with well-formedness,
//!   Fano index, Lefschetz-type Betti predictions and the hypothesis checker.

pub mod coxcl;
pub mod error;
pub mod exactmat;
pub mod fan;
pub mod gwps;
pub mod wci;

pub use error::{Error, Result};

/// Default cap on the number of lattice points a single enumeration may visit.
pub const DEFAULT_BUDGET: u64 = 1_000_000;
