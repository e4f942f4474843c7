//! Exact vertex-colorings of the cubic honeycomb {4,3,4}.
//!
//! The symmetry group of the honeycomb is generated by four reflections `P, Q, R, S`
//! ([`isometry`]). Computations run in the finite quotient of that group by the
//! translations `N·Z³` ([`quotient`]), which is exact for every subgroup certified to
//! contain those translations. On top of that sit vertex orbits and stabilizers
//! ([`orbits`]), colorings built from a subgroup `H` and per-orbit subgroups `J ≤ H`
//! ([`coloring`]), and their reading as cubic crystal structures ([`crystal`]).

pub mod cli;
pub mod coloring;
pub mod config;
pub mod crystal;
pub mod isometry;
pub mod orbits;
pub mod quotient;

pub use isometry::{eval_word, generator, GeneratorWord, Isometry, Letter, Realization, Vertex};
pub use orbits::{decompose, stabilizer, stabilizer_contained, OrbitDecomposition, TorusVertex};
pub use quotient::{index, left_cosets, member, TorusElement, TorusGroup, TorusSubgroup};
