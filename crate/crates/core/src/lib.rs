//! Exact dynamics and purity of a central qubit coupled to an isotropic
//! Lipkin-Meshkov-Glick bath, with Holstein-Primakoff limits and dense
//! brute-force oracles.

pub mod analysis;
pub mod anti_jc;
pub mod dynamics;
pub mod error;
pub mod model;
pub mod oracle;

pub use dynamics::{
    closed_form_terms, evolve_product_state, purity, purity_trace, reduced_density,
    ClosedFormTerms, ClosedFormVariant, ExactEvolver, Method, PurityTrace, QubitState,
    ReducedDensity, Spin, TotalState, TraceMeta,
};
pub use error::{LmgError, Result};
pub use model::{
    block_eigensystem, block_hamiltonian, ground_state, BlockEigen, BlockSpec, CouplingCase,
    DickeIndex, ModelParams, TieBreak,
};
