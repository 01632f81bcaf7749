//! Simulator for cyclic (delta-type) three-level systems driven by three
//! optical couplings.
//!
//! The crate models left- and right-handed molecules whose Rabi triples
//! differ only in the sign of the direct 1-3 coupling, builds the
//! three-pulse sequence that sends left-handed molecules to |2> and
//! right-handed ones back to |1>, and measures how the discrimination
//! contrast degrades under pulse-area, phase, detuning, and decoherence
//! errors.
//!
//! ```
//! use chiral_sim::hamiltonian::Chirality;
//! use chiral_sim::protocol::{contrast, run_protocol, ProtocolSpec};
//!
//! let spec = ProtocolSpec::default();
//! let left = run_protocol(&spec, Chirality::Left)?;
//! let right = run_protocol(&spec, Chirality::Right)?;
//! assert!((left.populations[1] - 1.0).abs() < 1e-10);   // left ends in |2>
//! assert!((right.populations[0] - 1.0).abs() < 1e-10);  // right returns to |1>
//! assert!((contrast(&left, &right) - 1.0).abs() < 1e-10);
//! # Ok::<(), chiral_sim::Error>(())
//! ```

#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod config;
pub mod error;
pub mod evolution;
pub mod hamiltonian;
pub mod protocol;
pub mod pulses;
pub mod quantum;
pub mod robustness;
pub mod tolerances;

pub use error::{Error, Result};
pub use quantum::{DensityMatrix3, HermitianOp3, Mat3, StateVec3, Unitary3};
