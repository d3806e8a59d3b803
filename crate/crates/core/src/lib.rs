//! Exact verification engine for the generic fibres of the ADE Klein-surface
//! fibrations: exceptional curves, Galois orbits, rationality degrees,
//! root-system combinatorics and automorphisms, with a floating-point oracle.

pub mod exact;
pub mod catalog;
pub mod geometry;
pub mod curves;
pub mod exec;
pub mod galois;
pub mod lattice;
pub mod autos;
pub mod oracle;
pub mod report;
