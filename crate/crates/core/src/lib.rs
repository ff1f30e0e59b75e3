//! Trisection diagrams at the level of first homology of the central surface.
//!
//! A diagram is stored as three families of `g` homology classes in
//! `H_1(Σ_g) ≅ ℤ^{2g}`, with entries that are integer polynomials in a
//! parameter `n`. On top of that model the crate provides
//!
//! * exact arithmetic: polynomials, the symplectic pairing, rank over
//!   `ℚ(n)` and Smith normal form over `ℤ` ([`exactalg`]);
//! * validation of cut systems and Heegaard pairs ([`diagram`]);
//! * the homological move calculus ([`moves`]);
//! * a checker for homologically standard position ([`standardness`]);
//! * the bundled diagram corpus ([`corpus`]);
//! * a line-oriented certificate format with replay ([`certificate`]);
//! * a bounded certificate search ([`search`]).

pub mod certificate;
pub mod corpus;
pub mod diagram;
pub mod exactalg;
pub mod format;
pub mod moves;
pub mod search;
pub mod standardness;

pub use certificate::{Certificate, ReplayOptions, ReplayResult};
pub use diagram::{Family, TrisectionMatrix, ValidationReport};
pub use exactalg::{pairing, HClass, IntPoly, SymplecticSpace};
pub use moves::Move;
pub use standardness::{is_standard_position, standardness_defect, StandardAssignment};
