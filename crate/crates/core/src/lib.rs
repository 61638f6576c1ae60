//! Two electrons in a one-dimensional two-center power-exponential potential.
//!
//! The ground state is found by exact diagonalization in a harmonic-oscillator
//! product basis restricted to exchange-symmetric (spin-singlet) spatial
//! states. From it the crate derives the interaction energy `<U>`, the linear
//! entropy of the one-particle reduced density matrix, wavefunction cuts and
//! parameter sweeps over the range `R` and exponent `p` of the confinement.

pub mod assembly;
pub mod basis;
pub mod cache;
pub mod confinement;
pub mod entanglement;
pub mod error;
pub mod interactions;
pub mod observables;
pub mod oracle_grid;
pub mod spectral;
pub mod sweep;

pub use assembly::{Assembler, HamiltonianMatrix, Parity, SymmetricSubspaceMap};
pub use basis::{BasisSpec, QuadratureSpec};
pub use confinement::{classify_structure, Confinement, PotentialParams, StructureClass};
pub use entanglement::{entanglement_of, linear_entropy, reduced_density_from_coeffs, EntanglementReport, ReferenceState};
pub use error::{Error, Result};
pub use interactions::InteractionKind;
pub use observables::{cuts, evaluate_wavefunction, origin_density, CutProfile, WavefunctionGrid};
pub use spectral::{solve_ground, spectrum_slice, GroundStateSolution};
pub use sweep::{run_sweep, DerivativeMode, SweepPlan, SweepRecord};
