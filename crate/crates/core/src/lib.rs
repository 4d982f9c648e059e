//! Exact computations with torsion modules over twisted graded group rings
//! `R[W] = Q[x1..xr][W]`: minimal and Koszul resolutions, the torsion
//! functor, bigraded Ext tables and equivariant formality maps.
//!
//! Degrees are homological. Ring generators sit in negative even degrees,
//! and a degree-t map raises degree by t.

pub mod error;
pub mod examples;
pub mod ext;
pub mod formality;
pub mod group;
pub mod linalg;
pub mod module;
pub mod par;
pub mod parse;
pub mod rational;
pub mod resolution;
pub mod ring;

pub use error::{Error, Result};
pub use ext::{adams_e2_report, change_of_rings_check, ext_table, recognize_cell, BigradedExtTable, Convention};
pub use formality::{build_formality_map, verify_quasi_iso, EquivariantDGA, FormalityMap, IndecomposableData};
pub use group::{FiniteGroup, Representation};
pub use linalg::{RationalMatrix, Subspace};
pub use module::{torsion_submodule, DegreeWindow, GradedModule, GradedModulePresentation};
pub use rational::Rational;
pub use resolution::{koszul_complex, minimal_free_resolution, Resolution};
pub use ring::{GeneratorSpace, Polynomial, RingElement, TwistedGroupRing};
