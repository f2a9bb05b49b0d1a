//! Classical simulation of quarter-turn Clifford ansätze: Pauli algebra, two
//! independent stabilizer evaluators plus a dense reference, non-trivial
//! sampling statistics, synthetic datasets and the surrogate-guided bootstrap.

pub mod ansatz;
pub mod bootstrap;
pub mod circuit;
pub mod dataset;
pub mod dense;
mod error;
pub mod heisenberg;
pub mod pauli;
pub mod prob;
pub mod rng;
pub mod tableau;

pub use ansatz::{AngleVector, AnsatzSpec, Entanglement, EntanglementConvention};
pub use circuit::{Circuit, Gate};
pub use error::{Error, Result};
pub use heisenberg::expectation_heisenberg;
pub use pauli::{Letter, PauliString};
pub use tableau::{expectation_tableau, StabilizerTableau};
