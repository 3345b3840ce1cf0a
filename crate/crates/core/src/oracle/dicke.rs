//! Dense Hamiltonian on the symmetric (j = N/2) bath sector times the qubit.

use num_complex::Complex64;

use super::jacobi::{hermitian_eigendecomposition, DenseHermitian, EigenDecomposition};
use super::matrix::DenseMatrix;
use crate::dynamics::{QubitState, ReducedDensity};
use crate::error::{LmgError, Result};
use crate::model::{DickeIndex, ModelParams};

pub const MAX_DICKE_N: usize = 4096;

/// Bath ladder operator J+ on |N/2, M>, M ascending.
fn j_plus(n: usize) -> DenseMatrix {
    let dim = n + 1;
    let j = n as f64 / 2.0;
    let mut m = DenseMatrix::zeros(dim);
    for k in 0..n {
        let mz = k as f64 - j;
        m[(k + 1, k)] = Complex64::new((j * (j + 1.0) - mz * (mz + 1.0)).sqrt(), 0.0);
    }
    m
}

fn j_z(n: usize) -> DenseMatrix {
    let j = n as f64 / 2.0;
    let diag: Vec<f64> = (0..=n).map(|k| k as f64 - j).collect();
    DenseMatrix::from_diagonal(&diag)
}

/// Qubit operators in the order (up, down).
fn s_plus() -> DenseMatrix {
    DenseMatrix::from_real(2, &[0.0, 1.0, 0.0, 0.0])
}

fn s_z() -> DenseMatrix {
    DenseMatrix::from_real(2, &[0.5, 0.0, 0.0, -0.5])
}

/// H = -(lambda/N)[J+J- + J-J+ - N] - 2Jz - 2 lambda'(s+ J- + s- J+) - 2 sz
/// in the basis |N/2, M> (x) |s>, index 2(M + N/2) + s with s = 0 for up.
pub fn dense_hamiltonian(params: &ModelParams) -> Result<DenseHermitian> {
    let n = params.n();
    if n > MAX_DICKE_N {
        return Err(LmgError::OracleTooLarge {
            n,
            max: MAX_DICKE_N,
        });
    }
    let nf = params.nf();
    let lambda = params.lambda();
    let lp = params.lambda_prime();

    let jp = j_plus(n);
    let jm = jp.adjoint();
    let bath_id = DenseMatrix::identity(n + 1);
    let qubit_id = DenseMatrix::identity(2);
    let sp = s_plus();
    let sm = sp.adjoint();

    let mut bath = jp.matmul(&jm);
    bath.add_assign_scaled(&jm.matmul(&jp), 1.0);
    bath.add_assign_scaled(&bath_id, -nf);
    let mut bath = bath.scaled(-lambda / nf);
    bath.add_assign_scaled(&j_z(n), -2.0);

    let mut h = bath.kron(&qubit_id);
    h.add_assign_scaled(&jm.kron(&sp), -2.0 * lp);
    h.add_assign_scaled(&jp.kron(&sm), -2.0 * lp);
    h.add_assign_scaled(&bath_id.kron(&s_z()), -2.0);
    DenseHermitian::new(h)
}

/// V exp(-i Lambda t) V^dagger psi0 after diagonalising `h`.
pub fn dense_evolve(h: &DenseHermitian, psi0: &[Complex64], t: f64) -> Result<Vec<Complex64>> {
    if psi0.len() != h.dim() {
        return Err(LmgError::DimensionMismatch {
            expected: h.dim(),
            got: psi0.len(),
        });
    }
    hermitian_eigendecomposition(h)?.evolve(psi0, t)
}

/// |M> (x) q0 as a dense vector.
pub fn dicke_product_state(m: DickeIndex, q0: &QubitState) -> Vec<Complex64> {
    let mut psi = vec![Complex64::new(0.0, 0.0); 2 * (m.n() + 1)];
    psi[2 * m.offset()] = q0.c_up();
    psi[2 * m.offset() + 1] = q0.c_down();
    psi
}

/// Trace out the bath from a dense Dicke-sector state.
pub fn partial_trace_qubit(psi: &[Complex64]) -> ReducedDensity {
    let mut rho_uu = 0.0;
    let mut rho_dd = 0.0;
    let mut rho_ud = Complex64::new(0.0, 0.0);
    for pair in psi.chunks_exact(2) {
        rho_uu += pair[0].norm_sqr();
        rho_dd += pair[1].norm_sqr();
        rho_ud += pair[0] * pair[1].conj();
    }
    ReducedDensity {
        rho_uu,
        rho_dd,
        rho_ud,
    }
}

/// Diagonalised Dicke-sector Hamiltonian with the bath starting in a fixed
/// Dicke state (the ground state unless chosen otherwise).
#[derive(Debug, Clone)]
pub struct DickeOracle {
    params: ModelParams,
    initial: DickeIndex,
    hamiltonian: DenseHermitian,
    decomposition: EigenDecomposition,
}

impl DickeOracle {
    pub fn new(params: &ModelParams) -> Result<Self> {
        Self::from_dicke(params, params.ground_state())
    }

    pub fn from_dicke(params: &ModelParams, initial: DickeIndex) -> Result<Self> {
        if initial.n() != params.n() {
            return Err(LmgError::SizeMismatch {
                index: initial.n(),
                model: params.n(),
            });
        }
        let hamiltonian = dense_hamiltonian(params)?;
        let decomposition = hermitian_eigendecomposition(&hamiltonian)?;
        Ok(Self {
            params: *params,
            initial,
            hamiltonian,
            decomposition,
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn hamiltonian(&self) -> &DenseHermitian {
        &self.hamiltonian
    }

    pub fn decomposition(&self) -> &EigenDecomposition {
        &self.decomposition
    }

    pub fn state_at(&self, q0: &QubitState, t: f64) -> Result<Vec<Complex64>> {
        self.decomposition
            .evolve(&dicke_product_state(self.initial, q0), t)
    }

    pub fn reduced_density(&self, q0: &QubitState, t: f64) -> Result<ReducedDensity> {
        Ok(partial_trace_qubit(&self.state_at(q0, t)?))
    }

    pub fn purity(&self, q0: &QubitState, t: f64) -> Result<f64> {
        Ok(self.reduced_density(q0, t)?.purity())
    }
}

/// One-shot purity; diagonalises on every call.
pub fn purity_oracle(params: &ModelParams, q0: &QubitState, t: f64) -> Result<f64> {
    DickeOracle::new(params)?.purity(q0, t)
}
