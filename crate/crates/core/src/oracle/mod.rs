//! Brute-force references: dense Dicke-sector evolution and a full spin-basis
//! evolution for tiny baths.

mod dicke;
mod full_spin;
mod jacobi;
mod matrix;

pub use dicke::{
    dense_evolve, dense_hamiltonian, dicke_product_state, partial_trace_qubit, purity_oracle,
    DickeOracle, MAX_DICKE_N,
};
pub use full_spin::{
    dicke_bath_vector, embed_dicke_state, full_spin_hamiltonian, full_spin_purity,
    sector_closure_residual, symmetric_sector_projector, FullSpinOracle, MAX_FULL_SPIN_N,
};
pub use jacobi::{hermitian_eigendecomposition, DenseHermitian, EigenDecomposition};
pub use matrix::DenseMatrix;
