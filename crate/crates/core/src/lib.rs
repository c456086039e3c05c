//! Exact-arithmetic workbench for intersection theory on surfaces:
//! lattice and divisor-class arithmetic, Zariski decompositions with exact
//! volumes and volume denominators, Pell-divisor families, plane
//! interpolation dimension counts over finite fields, and certificate-backed
//! constructions of negative classes of prescribed order.
//!
//! All arithmetic is arbitrary-precision integer/rational; the crate
//! contains no floating point.

pub mod arith;
pub mod cert;
pub mod construct;
pub mod error;
pub mod gf;
pub mod interp;
pub mod jsonio;
pub mod linalg;

pub mod lattice;
pub mod pell;
pub mod shgh;
pub mod zariski;

pub use error::{Error, Result};
