//! Exact intersection theory and toric symmetry classification for iterated
//! torus-invariant blowups of projective 3-space (and the projective plane).
//!
//! The crate builds fans of blowups of P^3 or P^2 along torus-fixed points
//! and lines, tracks divisor classes through the blowups, computes triple
//! intersection numbers and curve classes exactly over the integers,
//! enumerates every lattice automorphism of each fan, and runs a census of
//! all blowup configurations classifying which of them carry symmetries that
//! act nontrivially on homology.

pub mod blowup;
pub mod census;
pub mod chow;
pub mod fan;
pub mod lattice;
pub mod report;
pub mod symmetry;

pub use blowup::{parse_centers, BlowupCenter, BlowupConfig, BlowupSpace, CenterKind};
pub use census::{CensusRecord, ClassLabel};
pub use chow::{ChowPresentation, CurveClass, DivisorClass};
pub use fan::{p2_fan, p3_fan, Cone, Fan, Ray, RayId};
pub use lattice::{Int, IntMat};
pub use symmetry::{SymmetryClassification, ToricSymmetry};
