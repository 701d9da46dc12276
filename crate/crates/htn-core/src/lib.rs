//! Holographic codes from hyperinvariant tensor networks (HTN).
//!
//! This crate builds finite patches of regular {p,q} hyperbolic tilings, places
//! encoding tensors on their vertices and unitary edge tensors on their edges,
//! and then verifies the resulting bulk-to-boundary codes numerically: isometry
//! and perfection classes, greedy bulk reconstruction and its wedges, erasure
//! maps, entanglement spectra and the discrete Ryu-Takayanagi formula, boundary
//! correlators, and the one-site scaling superoperator with its lattice primary
//! spectrum.
//!
//! The main objects are:
//!
//! - [`tiling::HyperbolicTiling`] — a layered vertex/edge patch with an ordered
//!   boundary of open legs,
//! - [`tensor::DenseTensor`] — dense complex tensors with labeled legs,
//! - [`pauli::PauliString`] — generalized (Weyl) Pauli strings over ℤ₄,
//! - [`network::CodeNetwork`] — a tiling dressed with vertex/edge tensors and a
//!   bulk configuration, ready for contraction,
//! - [`reconstruction::Wedge`] — the result of greedy reconstruction.

pub mod codes;
pub mod entropy;
pub mod flow;
pub mod network;
pub mod pauli;
pub mod reconstruction;
pub mod rg;
pub mod tensor;
pub mod tiling;

pub use tensor::{Bipartition, DenseTensor, Leg};

/// Default cap on dense tensor sizes: 4^12 entries.
pub const DEFAULT_DIM_CAP: usize = 1 << 24;
