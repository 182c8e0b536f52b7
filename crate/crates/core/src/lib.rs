//! Zero-preserving linear maps from the monomial basis to Jacobi-family
//! bases, with the numerical machinery needed to test them: Jacobi
//! polynomials and their generating functions, sign-regularity scanning of
//! bivariate kernels, biorthogonal polynomial systems, and a seeded campaign
//! harness with JSON/CSV reports.
//!
//! Sign-regularity verdicts are sampled evidence, never proofs: a kernel
//! reported `ConsistentStp` produced no wrong-signed minor on the tuples
//! that were drawn.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod biortho;
pub mod error;
pub mod harness;
mod linalg;
pub mod orthopoly;
pub mod polycore;
pub mod scalar;
pub mod signreg;
pub mod transforms;

pub use error::{Error, Result};
pub use polycore::{Basis, Poly, RootClass, RootReport};
pub use scalar::{Ext, Precision, PrecisionPolicy, Scalar};
