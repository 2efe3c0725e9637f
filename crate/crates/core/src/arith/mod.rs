//! Exact arithmetic kernels: polynomials over prime fields, finite-field
//! extensions, cyclotomic integers, and integer/rational polynomials.
//!
//! Everything here is a pure function on immutable values.

pub mod cyc;
pub mod fq;
pub mod polyzp;
pub mod primes;
pub mod qpoly;
pub mod zpoly;

pub use cyc::CycInt;
pub use fq::{roots_in_fq, Fq, FqElem, PolyFq};
pub use polyzp::{factor_mod_p, PolyZp};
pub use qpoly::QPoly;
pub use zpoly::ZPoly;
