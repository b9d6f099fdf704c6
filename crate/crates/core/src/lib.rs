//! Affine buildings of type `A~_{d-1}` over `F_q((t))`, the spectral theory of
//! their colored Hecke operators, and a verifier deciding whether a finite
//! colored complex is Ramanujan.
//!
//! The crate is organized bottom-up:
//!
//! * [`algebra`]: `F_q`, polynomials in the uniformizer, Hermite and
//!   elementary-divisor forms of matrices over `O = F_q[[t]]`.
//! * [`building`]: balls of the building around the standard lattice.
//! * [`spectrum`]: Satake parameters, the simultaneous spectrum and its
//!   projections, trivial eigenvalues and uniform bounds.
//! * [`complexes`]: the `.rcx` file format and generators.
//! * [`verifier`]: colored adjacency operators, joint spectra and verdicts.

pub mod algebra;
pub mod building;
pub mod complexes;
pub mod error;
pub mod spectrum;
pub mod verifier;

pub use error::{Error, Result};
