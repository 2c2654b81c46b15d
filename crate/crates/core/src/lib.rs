//! Lattice cohomology of plumbing graphs.
//!
//! The crate computes the lattice cohomology `ℍ*(Γ)` of a plumbing graph as
//! a graded `Z[U]`-module, class by class, from the cubical sublevel towers
//! `S_r`. On top of that it provides the blow-up and surgery operators at
//! chain level, relative lattice cohomology for a vertex deletion, and the
//! topological Poincaré series with its periodic constants.

pub mod chain_ops;
pub mod charlat;
pub mod cubes;
pub mod enumerate;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod linalg;
pub mod sample;
pub mod series;
pub mod sparse;
pub mod surgery;
pub mod zu_module;

/// Exact rationals used for weights, degrees and dual coordinates.
pub type Rational = num_rational::Ratio<i128>;

pub use charlat::{CharClass, CharElement, ClassMin, Lattice};
pub use error::{Error, Result};
pub use graph::{Definiteness, IntersectionForm, PlumbingGraph};
pub use chain_ops::{BlowUp, CharCube, ClassRepTable, FiniteChain, IdentityConfig, IdentityReport, SurgeryOps};
pub use cubes::{CohomologyGroup, Cube, CubeComplex, GroupData, Subcomplex};
pub use series::{CountingReport, LSeries, OneVarSeries, PeriodicReport, QuasiPolyFit, Verdict};
pub use surgery::{
    EuRelReport, RelativeCohomology, RelativeContext, RelativeEuler, Role, SurgeryReport, SurgeryTriple, VanishingReport,
};
pub use zu_module::{GradedZUModule, Mode, Normalization, Stabilization, TPlus, Tower, TowerOptions};
