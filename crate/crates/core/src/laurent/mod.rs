//! Truncated Laurent series in π = 1/T and the quadratic extension used for points
//! of the Drinfeld upper half plane.

mod quad;
mod series;

pub use quad::{OmegaPoint, QuadExt, QuadLaurent};
pub use series::{Laurent, LaurentJson, EXACT};
