//! Dense linear algebra and the state-vector engine for registers of up to
//! four qubits.

pub mod eigen;
pub mod matrix;
pub mod parse;
pub mod state;

pub use eigen::{eig_hermitian, eig_matrix, Eigen};
pub use matrix::{
    embed_local, embed_single, kron, pauli_x, pauli_y, pauli_z, ComplexMatrix, HermitianOperator,
    C64,
};
pub use parse::{format_state, parse_state};
pub use state::{
    born_distribution, born_distribution_mixed, expectation, kron_vec, partial_trace, BornTable,
    DensityMatrix, Observable, PureState,
};
