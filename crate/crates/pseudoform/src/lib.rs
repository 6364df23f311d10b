//! Toolkit for constructing, analyzing and decomposing triangulated normal
//! pseudomanifolds.
//!
//! The crate is organized around immutable [`complex::SimplicialComplex`]
//! values. On top of those sit enumeration invariants and surface analysis
//! (`analysis`), the identification constructions (`ops`) with a replayable
//! trace registry (`trace`), inverse recognition of those constructions
//! (`recognize`), generic rigidity over exact arithmetic (`rigidity`), and
//! the relative-minimality decomposition machinery (`relmin`).

pub mod analysis;
pub mod catalog;
pub mod complex;
pub mod error;
pub mod io;
pub mod rigidity;
pub mod ops;
pub mod trace;

pub use complex::{Face, FaceVectorReport, SimplicialComplex, VertexId};
pub use error::{Error, Result};
