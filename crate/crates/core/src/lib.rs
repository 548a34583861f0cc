//! Simple quasi-states on triangulated 2-spheres.
//!
//! The crate evaluates Aarnes' 3-point quasi-state and the median quasi-state
//! on combinatorial sublevel sets of piecewise-linear fields, computes the
//! L1 norm of the Poisson bracket of two PL fields as the total absolute
//! Jacobian area of `(F, G)`, and rebuilds two extremal function pairs for
//! which `Π(F,G)² / ‖{F,G}‖₁` is (close to) 1.

pub mod cli;
pub mod config;
pub mod constructions;
pub mod error;
pub mod fields;
pub mod mesh;
pub mod poisson;
pub mod quasimeasure;
pub mod quasistate;

pub use error::{Error, Result};
pub use mesh::{MeshId, ScalarField, SetKind, SurfaceMesh, VertexSet};
pub use poisson::{poisson_l1, sharpness_ratio, BracketReport};
pub use quasimeasure::{QuasiMeasure, SolidSetFunction};
pub use quasistate::{DistributionFunction, QuasiState};
