//! Graphical Fourier transform between ZH- and ZX-diagrams.
//!
//! The crate is organized bottom-up:
//!
//! * [`diagram`]: open ZH/ZX string diagrams and builders for the derived
//!   generators (phase gadgets, indexing boxes, normal forms).
//! * [`tensor`]: dense contraction, the reference semantics every rewrite
//!   and pass is checked against.
//! * [`rewrite`]: the ZH rule set and derived lemmas as matchable rewrites.
//! * [`fourier`]: the semi-Boolean Fourier transform on coefficient tables
//!   and on diagrams.
//! * [`circuit`]: circuits, Clifford+T extraction, T-counting and the
//!   Toffoli constructions.
//! * [`verify`]: seeded randomized soundness checks.

pub mod bits;
pub mod circuit;
pub mod diagram;
pub mod fourier;
pub mod phase;
pub mod rewrite;
pub mod tensor;
pub mod verify;

pub use bits::BitString;
pub use diagram::{Diagram, DiagramError, HLabel, NodeId, NodeKind};
pub use phase::Phase;
pub use tensor::{evaluate, proportional, Tensor, TensorError};
