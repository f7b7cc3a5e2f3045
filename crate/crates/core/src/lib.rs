//! Combinatorial Legendrian contact homology over F2.
//!
//! The crate computes, for Legendrian links in standard contact 3-space
//! presented by plat-position fronts: the Chekanov-Eliashberg differential
//! graded algebra via rigid-polygon counts on the resolved Lagrangian
//! projection, its augmentations, linearized and bilinearized (co)homology,
//! block complexes for stacked parallel copies together with continuation
//! elements and higher products, and exact verification of the A-infinity
//! equations the structure maps satisfy.

pub mod ainfinity;
pub mod cthulhu;
pub mod dga;
pub mod diagram;
pub mod discs;
pub mod error;
pub mod f2;
pub mod front;
pub mod oracle;
pub mod random;
pub mod rational;
pub mod stack;

pub use diagram::{Convention, ResolvedDiagram};
pub use f2::{ChainComplex, GradedSpace, GradingRing, NcPoly, SparseMatF2, Word};

use error::DiagramError;

/// Parse a plat front word, resolve it, and assign chord actions.
pub fn resolve_front(text: &str, convention: Convention) -> Result<ResolvedDiagram, DiagramError> {
    let word = front::parse_front(text)?;
    let analyzed = front::analyze(&word)?;
    let mut d = diagram::resolve(&analyzed, convention)?;
    discs::assign_actions(&mut d)?;
    Ok(d)
}
