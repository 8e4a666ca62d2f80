//! Exact heights, adelic-Lipschitz constants and counting of points and
//! fields of small degree.

pub mod als;
pub mod arith;
pub mod census;
pub mod error;
pub mod heights;
pub mod invariants;
pub mod nfq;
pub mod real;
pub mod surd;

pub use error::{Error, Result};
pub use real::Real;
pub use surd::QuadSurd;
