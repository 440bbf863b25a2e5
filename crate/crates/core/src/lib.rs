//! Positive and completely positive maps on finite-dimensional quantum
//! state spaces.
//!
//! The crate models Hermitian operators, density states, Kraus channels and
//! their Choi matrices, and affine maps of the Euclidean unit ball. On top
//! of those it provides extremality certificates (Choi's linear-independence
//! criteria, the single-Kraus cone criterion, the invertible-extreme equivalences,
//! fix-extreme certificates from pure states in the image), a Wigner-map
//! classifier, and constructors for a catalog of low-dimensional examples.

pub mod ballmaps;
pub mod channels;
pub mod error;
pub mod examples_catalog;
pub mod extremality;
pub mod linalg;
pub mod operators;
pub mod sampling;
pub mod states;
pub mod wigner;

pub use error::{CoreError, Result};
pub use num_complex;
pub use operators::{ComplexMatrix, HermitianOp, MatrixJson, PsdReport};
