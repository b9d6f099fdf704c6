//! Exact arithmetic over the residue field `F_q` and the local ring
//! `O = F_q[[t]]`.

pub mod field;
pub mod matrix;
pub mod poly;

pub use field::{Field, FieldElem, FieldParams};
pub use matrix::OMatrix;
pub use poly::LocalPoly;
