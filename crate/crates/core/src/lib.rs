//! Modal logic over finite Kripke models, read through topology and
//! coalgebra.
//!
//! * [`formula`]: the modal language, its parser and normal forms.
//! * [`kripke`]: models, semantics, bisimulations, homomorphisms, quotients.
//! * [`topology`]: finite topologies and topological models.
//! * [`vietoris`]: the compact Vietoris construction and closure theorems.
//! * [`canonical`]: bounded-depth behaviour types and characteristic formulas.
//! * [`ladder`]: exact evaluation on two infinite chain structures.
//! * [`cli`]: the `vkt` command line.

pub mod canonical;
pub mod cli;
pub mod examples;
pub mod formula;
pub mod json;
pub mod kripke;
pub mod ladder;
pub mod random;
pub mod selftest;
mod set;
pub mod topology;
pub mod vietoris;

pub use formula::{parse, AtomSet, Formula};
pub use kripke::{KripkeModel, Partition, Relation};
pub use set::StateSet;
pub use topology::{FiniteTopology, TopologicalModel};
