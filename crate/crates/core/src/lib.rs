//! Numerical orbit-method laboratory.
//!
//! Symbols on the dual of a Lie algebra are quantized to operators on finite unitary
//! representations, compared with integrals over (rescaled) coadjoint orbits, and
//! combined through BCH star products. The `ggp` and `relchar` modules cover the
//! stability and branching side for the standard inclusions.

mod error;
pub mod fit;
pub mod ggp;
pub mod liecore;
pub mod linalg;
pub mod orbits;
pub mod poly;
pub mod quadrature;
pub mod quantize;
pub mod relchar;
pub mod starprod;
pub mod symbols;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
