//! The quotient graph Γ_0(n)\T of the Bruhat-Tits tree.
//!
//! Vertex and edge orbits are read off from the double cosets
//! Γ_0(n)\GL_2(A)/Stab(v_k), i.e. orbits of the stabilizers of the standard half-line
//! on P^1(A/n).

mod p1;
mod quotient;
mod tree;

pub use p1::{transporter, LevelGroup, Orbits, P1Mod};
pub use quotient::{cusp_matrix, EdgeHit, End, Identification, QEdge, QVertex, QuotientGraph, GRAPH_SCHEMA_VERSION};
pub use tree::{distance, edges_from, geodesic, locate_edge, reduce, reverse_edge, terminus, EdgeLocation, EdgeRep, Reduced};
