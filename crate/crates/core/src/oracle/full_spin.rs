//! Full 2^(N+1) spin-basis Hamiltonian for tiny baths.
//!
//! Basis index: central qubit is the most significant bit, bath qubit i is
//! bit i; a bit value 0 is spin up (sigma_z = +1).

use num_complex::Complex64;

use super::dicke::partial_trace_qubit;
use super::jacobi::{hermitian_eigendecomposition, DenseHermitian, EigenDecomposition};
use super::matrix::DenseMatrix;
use crate::dynamics::{QubitState, ReducedDensity};
use crate::error::{LmgError, Result};
use crate::model::{DickeIndex, ModelParams};

pub const MAX_FULL_SPIN_N: usize = 8;

fn z_sign(state: usize, bit: usize) -> f64 {
    if state >> bit & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// (X_a X_b + Y_a Y_b) |s>: 2 |s with a, b flipped> when the bits differ.
fn flip_flop(state: usize, a: usize, b: usize) -> Option<usize> {
    ((state >> a & 1) != (state >> b & 1)).then_some(state ^ (1 << a) ^ (1 << b))
}

/// H = -(lambda/N) sum_{i<j} (X_i X_j + Y_i Y_j) - sum_i Z_i
///     - lambda' sum_i (X_i X_c + Y_i Y_c) - Z_c
pub fn full_spin_hamiltonian(params: &ModelParams) -> Result<DenseHermitian> {
    let n = params.n();
    if n > MAX_FULL_SPIN_N {
        return Err(LmgError::OracleTooLarge {
            n,
            max: MAX_FULL_SPIN_N,
        });
    }
    let dim = 1usize << (n + 1);
    let c = n;
    let bath_xy = -params.lambda() / params.nf();
    let coupling = -params.lambda_prime();
    let mut h = DenseMatrix::zeros(dim);
    for s in 0..dim {
        let diag: f64 = -(0..=n).map(|i| z_sign(s, i)).sum::<f64>();
        h[(s, s)] += Complex64::new(diag, 0.0);
        for i in 0..n {
            for j in (i + 1)..n {
                if let Some(s2) = flip_flop(s, i, j) {
                    h[(s2, s)] += Complex64::new(2.0 * bath_xy, 0.0);
                }
            }
            if let Some(s2) = flip_flop(s, i, c) {
                h[(s2, s)] += Complex64::new(2.0 * coupling, 0.0);
            }
        }
    }
    DenseHermitian::new(h)
}

/// |N/2, M> as a uniform superposition over bath bit strings with
/// M + N/2 up spins.
pub fn dicke_bath_vector(m: DickeIndex) -> Vec<Complex64> {
    let n = m.n();
    let ups = m.offset();
    let strings: Vec<usize> = (0..1usize << n)
        .filter(|b| n - b.count_ones() as usize == ups)
        .collect();
    let amp = Complex64::new(1.0 / (strings.len() as f64).sqrt(), 0.0);
    let mut v = vec![Complex64::new(0.0, 0.0); 1 << n];
    for b in strings {
        v[b] = amp;
    }
    v
}

/// Map a Dicke-sector vector (index 2(M + N/2) + s) into the full basis.
pub fn embed_dicke_state(n: usize, psi: &[Complex64]) -> Result<Vec<Complex64>> {
    if psi.len() != 2 * (n + 1) {
        return Err(LmgError::DimensionMismatch {
            expected: 2 * (n + 1),
            got: psi.len(),
        });
    }
    let mut out = vec![Complex64::new(0.0, 0.0); 1 << (n + 1)];
    for k in 0..=n {
        let bath = dicke_bath_vector(DickeIndex::from_offset(n, k)?);
        for (spin, &amp) in psi[2 * k..2 * k + 2].iter().enumerate() {
            if amp == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (b, &w) in bath.iter().enumerate() {
                out[(spin << n) | b] += amp * w;
            }
        }
    }
    Ok(out)
}

/// Orthogonal projector onto (symmetric bath sector) (x) qubit.
pub fn symmetric_sector_projector(n: usize) -> Result<DenseMatrix> {
    let dim = 1usize << (n + 1);
    let mut p = DenseMatrix::zeros(dim);
    for k in 0..=n {
        let bath = dicke_bath_vector(DickeIndex::from_offset(n, k)?);
        for spin in 0..2 {
            let base = spin << n;
            for (a, &wa) in bath.iter().enumerate() {
                for (b, &wb) in bath.iter().enumerate() {
                    p[(base | a, base | b)] += wa * wb.conj();
                }
            }
        }
    }
    Ok(p)
}

/// Largest entry of [H, P] for the symmetric sector projector P.
pub fn sector_closure_residual(params: &ModelParams) -> Result<f64> {
    let h = full_spin_hamiltonian(params)?;
    let p = symmetric_sector_projector(params.n())?;
    Ok(h.matrix().matmul(&p).max_abs_diff(&p.matmul(h.matrix())))
}

fn partial_trace_bath(n: usize, psi: &[Complex64]) -> ReducedDensity {
    let half = 1usize << n;
    let interleaved: Vec<Complex64> = (0..half)
        .flat_map(|b| [psi[b], psi[half | b]])
        .collect();
    partial_trace_qubit(&interleaved)
}

#[derive(Debug, Clone)]
pub struct FullSpinOracle {
    n: usize,
    initial: DickeIndex,
    decomposition: EigenDecomposition,
}

impl FullSpinOracle {
    pub fn new(params: &ModelParams) -> Result<Self> {
        let h = full_spin_hamiltonian(params)?;
        Ok(Self {
            n: params.n(),
            initial: params.ground_state(),
            decomposition: hermitian_eigendecomposition(&h)?,
        })
    }

    pub fn decomposition(&self) -> &EigenDecomposition {
        &self.decomposition
    }

    pub fn initial_state(&self, q0: &QubitState) -> Vec<Complex64> {
        let bath = dicke_bath_vector(self.initial);
        let half = 1usize << self.n;
        let mut psi = vec![Complex64::new(0.0, 0.0); 2 * half];
        for (b, &w) in bath.iter().enumerate() {
            psi[b] = q0.c_up() * w;
            psi[half | b] = q0.c_down() * w;
        }
        psi
    }

    pub fn state_at(&self, q0: &QubitState, t: f64) -> Result<Vec<Complex64>> {
        self.decomposition.evolve(&self.initial_state(q0), t)
    }

    pub fn purity(&self, q0: &QubitState, t: f64) -> Result<f64> {
        Ok(partial_trace_bath(self.n, &self.state_at(q0, t)?).purity())
    }
}

pub fn full_spin_purity(params: &ModelParams, q0: &QubitState, t: f64) -> Result<f64> {
    FullSpinOracle::new(params)?.purity(q0, t)
}
