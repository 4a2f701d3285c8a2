//! Phase-covariant qubit dynamics inside the quantum time flip and the
//! quantum switch, and the memory they carry.
//!
//! The crate is `no_std` and only needs `alloc`. Modules, bottom up:
//!
//! - [`matcore`]: dense complex matrices for one to three qubits.
//! - [`channels`]: phase-covariant channel families, Kraus sets, Lindblad rates.
//! - [`supermaps`]: time flip and switch Kraus sets, ancilla extension,
//!   post-selection on the control qubit.
//! - [`scenario`]: a family inside a supermap, evaluated at a grid time.
//! - [`measures`]: trace distance, concurrence, entanglement of formation and
//!   the backflow measures `N_D` and `N_E`.
#![no_std]
// `!(x > y)` guards are kept on purpose: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod channels;
pub mod error;
pub mod matcore;
pub mod measures;
pub mod scenario;
pub mod supermaps;

pub use channels::{ChannelFamily, CustomFamily, DecoherenceRates, KrausSet, PhaseCovParams};
pub use error::{Error, Result};
pub use matcore::{CMatrix, DensityMatrix, PureState};
pub use measures::{MemoryResult, StatePair, TimeGrid, Trajectory};
pub use scenario::{Scenario, SupermapMode};
pub use supermaps::{ControlSpec, Outcome, PostSelectedStep, SuperKrausSet};
