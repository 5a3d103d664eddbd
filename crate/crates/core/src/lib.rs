//! Hamiltonians for driven n-level quantum systems built from the
//! generalized Pauli (clock and shift) matrices, and a unitary propagator
//! that turns them into population trajectories.

pub mod algebra;
pub mod cli;
pub mod config;
pub mod error;
pub mod hamiltonian;
pub mod matrix;
pub mod propagator;

pub use algebra::{
    build_clock, build_fourier, build_shift, primitive_root, similarity_diagonalize_shift,
    PrimitiveRoot,
};
pub use error::{Error, Result};
pub use hamiltonian::{
    build_drift, build_full_hamiltonian, build_interaction, deltas_to_energies,
    energies_to_deltas, interaction_diagonal, DeltaCoefficients, DriveModel, DrivenHamiltonian,
    SystemSpec,
};
pub use matrix::{adjoint, mat_mul, mat_pow, ComplexMatrix};
pub use num_complex::Complex64;
pub use propagator::{
    evolve, exp_step, hermitian_eig, EvolutionConfig, HermitianEigen, InitialState, StateVector,
    Trajectory,
};
