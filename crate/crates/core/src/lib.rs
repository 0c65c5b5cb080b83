//! Explicit modular parametrization of elliptic curves over F_q(T) by Drinfeld
//! modular curves: quotient graphs of the Bruhat-Tits tree, harmonic cochains,
//! Hecke operators, theta functions at cusps and torsion orders of cusp images.

pub mod bt_graph;
pub mod error;
pub mod ff_base;
pub mod laurent;
pub mod linalg;
pub mod cochain;
pub mod curve;
pub mod matrix;
pub mod modparam;
pub mod par;
pub mod theta;

pub use error::{Error, Result};
