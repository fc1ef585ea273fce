//! Numerical toolkit for symmetric informationally complete POVMs in the
//! Weyl-Heisenberg covariant setting.
//!
//! The crate builds SIC sets from fiducial vectors, derives their Gram data,
//! triple products and adjoint matrices, and checks the algebraic and
//! geometric identities those objects satisfy. Every check returns a
//! [`report::VerificationReport`] so callers can aggregate results.
//!
//! Basic use:
//!
//! ```
//! use sic_core::sicpovm::{bundled_fiducial, sic_from_fiducial, validate_sic};
//!
//! let fid = bundled_fiducial(3).unwrap();
//! let set = sic_from_fiducial(&fid).unwrap();
//! assert!(validate_sic(&set, 1e-9).passed());
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod adjoint;
pub mod error;
pub mod geometry;
pub mod gramproj;
pub mod linalg;
pub mod reconstruct;
pub mod report;
pub mod sicpovm;
pub mod suite;
pub mod tensors;
pub mod whgroup;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

/// Dense complex matrix used throughout the crate.
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Dense complex column vector.
pub type CVector = nalgebra::DVector<C64>;
/// Dense real matrix.
pub type RMatrix = nalgebra::DMatrix<f64>;
/// Dense real column vector.
pub type RVector = nalgebra::DVector<f64>;
