//! Quadratic-form knot invariant computed from long knot diagrams.
//!
//! From an oriented long diagram (explicit rational polyline or braid-word
//! closure) the crate builds the decorated combinatorial structure (bridges,
//! bridge vertices, auxiliary vertical lines), an admissible assignment and
//! the quadratic action functional; solves the integrality constraints on
//! the torus via exact Smith normal form, which identifies the solution set
//! with the cohomology of the double cyclic cover of the knot complement;
//! evaluates the functional on the dual of the torsion subgroup; and reduces
//! the resulting quadratic function to its automorphism-orbit data (the
//! `minv` set, the value fingerprint, and the Gauss sum).
//!
//! Everything up to the final complex exponential is exact rational
//! arithmetic.

pub mod action;
pub mod braid;
pub mod burau;
pub mod diagram;
pub mod error;
pub mod exactgeom;
pub mod forms;
pub mod invariant;
pub mod lattice;
pub mod moves;
pub mod rng;

pub use braid::BraidWord;
pub use diagram::{parse_diagram, DiagramSpec, LongDiagram};
pub use error::{Error, Result};
pub use invariant::{
    full_report, full_report_braid, run_pipeline, run_pipeline_braid, InvariantReport,
    PipelineOptions,
};
