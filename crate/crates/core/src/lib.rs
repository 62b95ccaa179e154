//! Multi-photon interference in linear-optical networks.
//!
//! The crate is organised bottom-up:
//!
//! * [`complex`] and [`permanent`]: dense complex matrices, equivalence
//!   predicates and Ryser permanents.
//! * [`polarization`]: Jones calculus, the rail waveplate programs and
//!   Poincaré-sphere geometry (Pancharatnam phases, solid angles).
//! * [`circuit`]: mode circuits, the four-mode complex Hadamard family, the
//!   rail × polarization layout and the Reck decomposition.
//! * [`interference`]: Fock-state evolution and two-photon coincidences.
//! * [`experiment`]: Poisson counting sweeps, fringe fits and CSV output.

pub mod circuit;
pub mod complex;
pub mod error;
pub mod experiment;
pub mod interference;
pub mod matrix_io;
pub mod permanent;
pub mod polarization;
pub mod random;

pub use complex::{ComplexMatrix, Tolerance};
pub use error::{Error, Result};
