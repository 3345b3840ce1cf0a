//! Bath parameters, the isotropic LMG Dicke spectrum and the 2x2 invariant
//! blocks of the qubit + bath Hamiltonian.
//!
//! Units are dimensionless with hbar = 1. The bath Hamiltonian is diagonal in
//! the Dicke states |N/2, M>, and the flip-flop coupling to the central qubit
//! only mixes |M, up> with |M+1, down>, so every dynamical question reduces to
//! one of the blocks built here.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{LmgError, Result};

/// How the qubit-bath coupling lambda' scales with the bath size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CouplingCase {
    /// lambda' = lambda / N.
    CaseI,
    /// lambda' = lambda / sqrt(N).
    #[serde(rename = "case-ii")]
    CaseII,
    /// lambda' given directly.
    Explicit(f64),
}

impl fmt::Display for CouplingCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CouplingCase::CaseI => f.write_str("case-i"),
            CouplingCase::CaseII => f.write_str("case-ii"),
            CouplingCase::Explicit(lp) => write!(f, "explicit({lp})"),
        }
    }
}

/// Which Dicke index wins when N/(2 lambda) sits exactly halfway between two
/// grid values. The two bath energies are degenerate there.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieBreak {
    #[default]
    Lower,
    Upper,
}

/// Parameters of one simulation: bath size, bath coupling and the qubit-bath
/// coupling convention. The anisotropy is fixed at gamma = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    n: usize,
    lambda: f64,
    case: CouplingCase,
    #[serde(default)]
    tie_break: TieBreak,
}

impl ModelParams {
    pub fn new(n: usize, lambda: f64, case: CouplingCase) -> Result<Self> {
        Self::with_gamma(n, lambda, 1.0, case)
    }

    /// Like [`ModelParams::new`] but with the anisotropy stated explicitly;
    /// anything other than gamma = 1 is rejected.
    pub fn with_gamma(n: usize, lambda: f64, gamma: f64, case: CouplingCase) -> Result<Self> {
        if n < 2 {
            return Err(LmgError::BathTooSmall(n));
        }
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(LmgError::InvalidLambda(lambda));
        }
        if gamma != 1.0 {
            return Err(LmgError::Anisotropic(gamma));
        }
        if let CouplingCase::Explicit(lp) = case {
            if !lp.is_finite() {
                return Err(LmgError::InvalidLambdaPrime(lp));
            }
        }
        Ok(Self {
            n,
            lambda,
            case,
            tie_break: TieBreak::Lower,
        })
    }

    pub fn with_tie_break(mut self, tie_break: TieBreak) -> Self {
        self.tie_break = tie_break;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn case(&self) -> CouplingCase {
        self.case
    }

    pub fn gamma(&self) -> f64 {
        1.0
    }

    pub fn tie_break(&self) -> TieBreak {
        self.tie_break
    }

    pub fn lambda_prime(&self) -> f64 {
        coupling_strength(self)
    }

    pub fn nf(&self) -> f64 {
        self.n as f64
    }

    /// The spin length j = N/2 of the bath's Dicke sector.
    pub fn half_n(&self) -> f64 {
        self.n as f64 / 2.0
    }

    /// `true` when the ground state is the fully polarized |N/2, N/2>
    /// (0 < lambda <= 1). The boundary lambda = 1 belongs here.
    pub fn is_broken_phase(&self) -> bool {
        self.lambda <= 1.0
    }

    pub fn ground_state(&self) -> DickeIndex {
        ground_state(self)
    }
}

/// A J_z quantum number M of the j = N/2 Dicke sector, stored as 2M so that
/// odd N (half-integer M) is exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DickeIndex {
    n: usize,
    twice_m: i64,
}

impl DickeIndex {
    pub fn new(n: usize, m: f64) -> Result<Self> {
        let twice = 2.0 * m;
        if !twice.is_finite() || twice.fract() != 0.0 || twice.abs() > n as f64 {
            return Err(LmgError::OffGrid { n, m });
        }
        Self::from_twice(n, twice as i64)
    }

    pub fn from_twice(n: usize, twice_m: i64) -> Result<Self> {
        let ni = n as i64;
        if twice_m.abs() > ni || (twice_m + ni) % 2 != 0 {
            return Err(LmgError::OffGrid {
                n,
                m: twice_m as f64 / 2.0,
            });
        }
        Ok(Self { n, twice_m })
    }

    /// Index from the position k = M + N/2 in 0..=N.
    pub fn from_offset(n: usize, k: usize) -> Result<Self> {
        Self::from_twice(n, 2 * k as i64 - n as i64)
    }

    /// M = N/2, the fully polarized state.
    pub fn top(n: usize) -> Self {
        Self {
            n,
            twice_m: n as i64,
        }
    }

    /// M = -N/2.
    pub fn bottom(n: usize) -> Self {
        Self {
            n,
            twice_m: -(n as i64),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn value(&self) -> f64 {
        self.twice_m as f64 / 2.0
    }

    pub fn twice_m(&self) -> i64 {
        self.twice_m
    }

    /// Position k = M + N/2 on the grid, 0 at the bottom.
    pub fn offset(&self) -> usize {
        ((self.twice_m + self.n as i64) / 2) as usize
    }

    pub fn is_top(&self) -> bool {
        self.twice_m == self.n as i64
    }

    pub fn is_bottom(&self) -> bool {
        self.twice_m == -(self.n as i64)
    }

    /// M + delta, if still on the grid.
    pub fn shifted(&self, delta: i64) -> Option<Self> {
        Self::from_twice(self.n, self.twice_m + 2 * delta).ok()
    }

    fn check(&self, params: &ModelParams) -> Result<()> {
        if self.n != params.n {
            return Err(LmgError::SizeMismatch {
                index: self.n,
                model: params.n,
            });
        }
        Ok(())
    }
}

impl fmt::Display for DickeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice_m % 2 == 0 {
            write!(f, "{}", self.twice_m / 2)
        } else {
            write!(f, "{}/2", self.twice_m)
        }
    }
}

/// Bath ground state: |N/2, N/2> for lambda <= 1, otherwise the grid value
/// of M nearest to N/(2 lambda).
pub fn ground_state(params: &ModelParams) -> DickeIndex {
    let n = params.n;
    if params.lambda <= 1.0 {
        return DickeIndex::top(n);
    }
    // Position on the grid measured from the bottom, k = M + N/2.
    let target = params.nf() / (2.0 * params.lambda) + params.half_n();
    let lower = target.floor();
    let frac = target - lower;
    let k = if frac > 0.5 {
        lower + 1.0
    } else if frac < 0.5 {
        lower
    } else {
        match params.tie_break {
            TieBreak::Lower => lower,
            TieBreak::Upper => lower + 1.0,
        }
    };
    let k = (k.max(0.0) as usize).min(n);
    DickeIndex::from_offset(n, k).expect("offset clamped to the grid")
}

/// Energy 2 lambda M^2 / N - 2M - lambda N / 2 of |N/2, M> under the bath
/// Hamiltonian.
pub fn bath_eigenenergy(params: &ModelParams, m: DickeIndex) -> Result<f64> {
    m.check(params)?;
    Ok(bath_energy_unchecked(params, m.value()))
}

fn bath_energy_unchecked(params: &ModelParams, m: f64) -> f64 {
    let lambda = params.lambda;
    let n = params.nf();
    2.0 * lambda * m * m / n - 2.0 * m - lambda * n / 2.0
}

/// The qubit-bath coupling lambda' under the chosen convention.
pub fn coupling_strength(params: &ModelParams) -> f64 {
    match params.case {
        CouplingCase::CaseI => params.lambda / params.nf(),
        CouplingCase::CaseII => params.lambda / params.nf().sqrt(),
        CouplingCase::Explicit(lp) => lp,
    }
}

/// The Hamiltonian restricted to span{|M, up>, |M+1, down>}:
///
/// ```text
/// [ alpha  zeta ]
/// [ zeta   beta ]
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockSpec {
    pub m: DickeIndex,
    pub alpha: f64,
    pub beta: f64,
    pub zeta: f64,
}

impl BlockSpec {
    pub fn matrix(&self) -> [[f64; 2]; 2] {
        [[self.alpha, self.zeta], [self.zeta, self.beta]]
    }
}

/// Build the block for the subspace whose lower Dicke index is `m`.
pub fn block_hamiltonian(params: &ModelParams, m: DickeIndex) -> Result<BlockSpec> {
    m.check(params)?;
    if m.is_top() {
        return Err(LmgError::OneDimensionalSubspace);
    }
    let n = params.nf();
    let lambda = params.lambda;
    let mv = m.value();
    let mp = mv + 1.0;
    let alpha = -(lambda / (2.0 * n)) * (n * n - 4.0 * mv * mv) - 2.0 * mv - 1.0;
    let beta = -(lambda / (2.0 * n)) * (n * n - 4.0 * mp * mp) - 2.0 * mp + 1.0;
    // N(N+2) - 4M(M+1) = 4 (j(j+1) - M(M+1)) >= 4N > 0 below the top.
    let radicand = (n * (n + 2.0) - 4.0 * mv * mp).max(0.0);
    let zeta = -coupling_strength(params) * radicand.sqrt();
    Ok(BlockSpec {
        m,
        alpha,
        beta,
        zeta,
    })
}

/// Eigenpairs of a [`BlockSpec`]. `x1 >= x2`, and (a, b) is the unit
/// eigenvector for `x1`; the one for `x2` is (-b, a).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockEigen {
    pub x1: f64,
    pub x2: f64,
    pub a: f64,
    pub b: f64,
}

impl BlockEigen {
    /// x1 - x2 >= 0.
    pub fn gap(&self) -> f64 {
        self.x1 - self.x2
    }

    /// a^2 b^2, the mixing weight that controls every purity formula.
    pub fn mixing(&self) -> f64 {
        let ab = self.a * self.b;
        ab * ab
    }
}

pub fn block_eigensystem(spec: &BlockSpec) -> BlockEigen {
    let BlockSpec {
        alpha, beta, zeta, ..
    } = *spec;
    let diff = alpha - beta;
    let root = diff.hypot(2.0 * zeta);
    let x1 = 0.5 * ((alpha + beta) + root);
    let x2 = 0.5 * ((alpha + beta) - root);
    // x1 - alpha without cancellation when alpha > beta.
    let shift = if diff > 0.0 {
        2.0 * zeta * zeta / (root + diff)
    } else {
        0.5 * (root - diff)
    };
    let norm = zeta.hypot(shift);
    let (a, b) = if norm == 0.0 {
        // zeta = 0 with alpha >= beta: x1 = alpha belongs to the first basis state.
        (1.0, 0.0)
    } else {
        (zeta / norm, shift / norm)
    };
    BlockEigen { x1, x2, a, b }
}
