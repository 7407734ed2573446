//! Variational quantum Kolmogorov-Arnold network (VQKAN) solver for
//! time-dependent travelling salesman problems.
//!
//! The crate is organised bottom-up:
//!
//! * [`statevec`]: a dense state-vector simulator with the two gates the
//!   models need (`Ry` and the partial swap) and exact `Z` expectations.
//! * [`graph`]: time-dependent weighted graphs and the experiment generators.
//! * [`vqkan`]: input encoding, the layered swap-network ansatz and the
//!   per-layer `Z` snapshots.
//! * [`loss`]: tour-cost and taboo terms over snapshots.
//! * [`decoder`]: scoring of every Hamiltonian cycle against the snapshots.
//! * [`optimizer`]: seeded derivative-free minimisation with trial history.
//! * [`oracle`]: exact brute-force shortest tours.
//! * [`vqe`]: the one-hot `N^2`-qubit VQE baseline.
//! * [`experiment`]: config files, CSV outputs and the CLI commands.
//!
//! Data-parallel loops go through [`par`], which uses rayon when the
//! `parallel` feature is enabled (the default) and plain iterators otherwise.

pub mod decoder;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod loss;
pub mod optimizer;
pub mod oracle;
pub mod par;
pub mod statevec;
pub mod vqe;
pub mod vqkan;

pub use error::{Error, Result};
pub use graph::TimedGraph;
pub use statevec::StateVector;
pub use vqkan::{LayerSnapshots, VqkanParams};
