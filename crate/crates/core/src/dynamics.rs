//! Exact evolution of bath ground state x qubit superposition, the qubit's
//! reduced density matrix and its purity.
//!
//! The initial product state touches at most two invariant subspaces:
//! |G, up> lives in the block with lower index M_G and |G, down> in the block
//! with lower index M_G - 1. Each block evolves with its own 2x2 propagator,
//! so the joint state never has more than four nonzero amplitudes and the cost
//! per time point is independent of N.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::anti_jc;
use crate::error::{LmgError, Result};
use crate::model::{
    bath_eigenenergy, block_eigensystem, block_hamiltonian, BlockEigen, CouplingCase, DickeIndex,
    ModelParams,
};
use crate::oracle::DickeOracle;

/// A 2x2 complex matrix, row-major.
pub type Mat2 = [[Complex64; 2]; 2];

const NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spin {
    Up,
    Down,
}

/// A normalized central-qubit state c_up |up> + c_down |down>.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    c_up: Complex64,
    c_down: Complex64,
}

impl QubitState {
    pub fn new(c_up: Complex64, c_down: Complex64) -> Result<Self> {
        let norm = c_up.norm_sqr() + c_down.norm_sqr();
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOL {
            return Err(LmgError::NotNormalized(norm));
        }
        Ok(Self { c_up, c_down })
    }

    /// Rescale an arbitrary nonzero pair to unit norm.
    pub fn normalized(c_up: Complex64, c_down: Complex64) -> Result<Self> {
        let norm = (c_up.norm_sqr() + c_down.norm_sqr()).sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(LmgError::NotNormalized(norm * norm));
        }
        Ok(Self {
            c_up: c_up / norm,
            c_down: c_down / norm,
        })
    }

    pub fn up() -> Self {
        Self {
            c_up: Complex64::new(1.0, 0.0),
            c_down: Complex64::new(0.0, 0.0),
        }
    }

    pub fn down() -> Self {
        Self {
            c_up: Complex64::new(0.0, 0.0),
            c_down: Complex64::new(1.0, 0.0),
        }
    }

    /// (|up> + |down>) / sqrt(2), the state every closed-form purity assumes.
    pub fn plus() -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self {
            c_up: h,
            c_down: h,
        }
    }

    pub fn c_up(&self) -> Complex64 {
        self.c_up
    }

    pub fn c_down(&self) -> Complex64 {
        self.c_down
    }

    pub fn is_plus(&self) -> bool {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        (self.c_up - h).norm() <= NORM_TOL && (self.c_down - h).norm() <= NORM_TOL
    }

    pub fn density(&self) -> ReducedDensity {
        ReducedDensity {
            rho_uu: self.c_up.norm_sqr(),
            rho_dd: self.c_down.norm_sqr(),
            rho_ud: self.c_up * self.c_down.conj(),
        }
    }
}

/// Amplitudes of the joint state over |N/2, M> x |spin>. Absent entries are
/// zero.
#[derive(Debug, Clone, PartialEq)]
pub struct TotalState {
    n: usize,
    amplitudes: BTreeMap<(DickeIndex, Spin), Complex64>,
}

impl TotalState {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            amplitudes: BTreeMap::new(),
        }
    }

    /// |m> x q0.
    pub fn product(m: DickeIndex, q0: &QubitState) -> Self {
        let mut s = Self::empty(m.n());
        s.add(m, Spin::Up, q0.c_up);
        s.add(m, Spin::Down, q0.c_down);
        s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add(&mut self, m: DickeIndex, spin: Spin, amp: Complex64) {
        debug_assert_eq!(m.n(), self.n);
        if amp == Complex64::new(0.0, 0.0) {
            return;
        }
        *self
            .amplitudes
            .entry((m, spin))
            .or_insert(Complex64::new(0.0, 0.0)) += amp;
    }

    pub fn amplitude(&self, m: DickeIndex, spin: Spin) -> Complex64 {
        self.amplitudes
            .get(&(m, spin))
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn iter(&self) -> impl Iterator<Item = (DickeIndex, Spin, Complex64)> + '_ {
        self.amplitudes.iter().map(|(&(m, s), &a)| (m, s, a))
    }

    pub fn nonzero_count(&self) -> usize {
        self.amplitudes.values().filter(|a| a.norm_sqr() > 0.0).count()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    /// Dense vector in the ordered basis {|M> x up, |M> x down : M = -N/2..N/2},
    /// index 2 (M + N/2) + spin.
    pub fn to_dense(&self) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); 2 * (self.n + 1)];
        for (m, s, a) in self.iter() {
            let idx = 2 * m.offset() + usize::from(s == Spin::Down);
            v[idx] = a;
        }
        v
    }
}

/// The central qubit's 2x2 density matrix; rho_du is conj(rho_ud).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedDensity {
    pub rho_uu: f64,
    pub rho_dd: f64,
    pub rho_ud: Complex64,
}

impl ReducedDensity {
    pub fn rho_du(&self) -> Complex64 {
        self.rho_ud.conj()
    }

    pub fn trace(&self) -> f64 {
        self.rho_uu + self.rho_dd
    }

    /// Unit trace, nonnegative populations and positivity, within `tol`.
    pub fn is_valid(&self, tol: f64) -> bool {
        (self.trace() - 1.0).abs() <= tol
            && self.rho_uu >= -tol
            && self.rho_dd >= -tol
            && self.rho_ud.norm_sqr() <= self.rho_uu * self.rho_dd + tol
    }

    pub fn purity(&self) -> f64 {
        purity(self)
    }
}

/// Tr rho^2 = rho_uu^2 + rho_dd^2 + 2 |rho_ud|^2, divided by (Tr rho)^2 so
/// that rounding in the state norm does not leak into the result.
pub fn purity(rho: &ReducedDensity) -> f64 {
    let tr = rho.rho_uu + rho.rho_dd;
    (rho.rho_uu * rho.rho_uu + rho.rho_dd * rho.rho_dd + 2.0 * rho.rho_ud.norm_sqr()) / (tr * tr)
}

/// exp(-i H_M t) on span{|M, up>, |M+1, down>}.
pub fn block_propagator(eig: &BlockEigen, t: f64) -> Mat2 {
    let a2 = eig.a * eig.a;
    let b2 = eig.b * eig.b;
    let ab = eig.a * eig.b;
    // Factor out the mean energy so the remaining phases stay small.
    let mean = 0.5 * (eig.x1 + eig.x2);
    let half_gap = 0.5 * (eig.x1 - eig.x2);
    let global = Complex64::from_polar(1.0, -mean * t);
    let (s, c) = (half_gap * t).sin_cos();
    let i = Complex64::i();
    let u11 = global * (c - i * (a2 - b2) * s);
    let u22 = global * (c + i * (a2 - b2) * s);
    let u12 = global * (-2.0 * i * ab * s);
    [[u11, u12], [u12, u22]]
}

/// Time-independent part of the exact evolution from |m_g> x q0: the
/// eigensystems of the (at most two) blocks the initial state touches.
#[derive(Debug, Clone, Copy)]
pub struct ExactEvolver {
    params: ModelParams,
    m_g: DickeIndex,
    /// Block with lower index m_g, holding |m_g, up>. `None` at the top.
    upper: Option<BlockEigen>,
    /// Block with lower index m_g - 1, holding |m_g, down>. `None` at the bottom.
    lower: Option<BlockEigen>,
    /// Energies of the one-dimensional corners (top, up) and (bottom, down).
    up_corner_energy: f64,
    down_corner_energy: f64,
}

impl ExactEvolver {
    /// Evolver for the bath starting in its ground state.
    pub fn new(params: &ModelParams) -> Self {
        Self::from_dicke(params, params.ground_state()).expect("ground state is on the grid")
    }

    /// Evolver for an arbitrary initial Dicke state; used for tests and
    /// experiments away from the ground state.
    pub fn from_dicke(params: &ModelParams, m_g: DickeIndex) -> Result<Self> {
        let upper = if m_g.is_top() {
            None
        } else {
            Some(block_eigensystem(&block_hamiltonian(params, m_g)?))
        };
        let lower = match m_g.shifted(-1) {
            Some(below) => Some(block_eigensystem(&block_hamiltonian(params, below)?)),
            None => None,
        };
        let up_corner_energy = bath_eigenenergy(params, m_g)? - 1.0;
        let down_corner_energy = bath_eigenenergy(params, m_g)? + 1.0;
        Ok(Self {
            params: *params,
            m_g,
            upper,
            lower,
            up_corner_energy,
            down_corner_energy,
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn initial_index(&self) -> DickeIndex {
        self.m_g
    }

    pub fn upper_block(&self) -> Option<&BlockEigen> {
        self.upper.as_ref()
    }

    pub fn lower_block(&self) -> Option<&BlockEigen> {
        self.lower.as_ref()
    }

    pub fn state_at(&self, q0: &QubitState, t: f64) -> TotalState {
        let m = self.m_g;
        let mut state = TotalState::empty(self.params.n());
        match &self.upper {
            Some(eig) => {
                let u = block_propagator(eig, t);
                let above = m.shifted(1).expect("below the top");
                state.add(m, Spin::Up, u[0][0] * q0.c_up);
                state.add(above, Spin::Down, u[1][0] * q0.c_up);
            }
            None => {
                // |N/2, N/2> x up is an eigenstate with energy -(N + 1).
                let phase = Complex64::from_polar(1.0, -self.up_corner_energy * t);
                state.add(m, Spin::Up, phase * q0.c_up);
            }
        }
        match &self.lower {
            Some(eig) => {
                let u = block_propagator(eig, t);
                let below = m.shifted(-1).expect("above the bottom");
                state.add(below, Spin::Up, u[0][1] * q0.c_down);
                state.add(m, Spin::Down, u[1][1] * q0.c_down);
            }
            None => {
                // |N/2, -N/2> x down is an eigenstate with energy N + 1.
                let phase = Complex64::from_polar(1.0, -self.down_corner_energy * t);
                state.add(m, Spin::Down, phase * q0.c_down);
            }
        }
        state
    }

    pub fn purity_at(&self, q0: &QubitState, t: f64) -> f64 {
        purity(&reduced_density(&self.state_at(q0, t)))
    }
}

/// Evolve |G> x q0 for time t, G the bath ground state.
pub fn evolve_product_state(params: &ModelParams, q0: &QubitState, t: f64) -> Result<TotalState> {
    check_normalized(q0)?;
    Ok(ExactEvolver::new(params).state_at(q0, t))
}

/// Evolve |m> x q0 for an arbitrary Dicke index m.
pub fn evolve_from_dicke(
    params: &ModelParams,
    m: DickeIndex,
    q0: &QubitState,
    t: f64,
) -> Result<TotalState> {
    check_normalized(q0)?;
    Ok(ExactEvolver::from_dicke(params, m)?.state_at(q0, t))
}

fn check_normalized(q0: &QubitState) -> Result<()> {
    let norm = q0.c_up.norm_sqr() + q0.c_down.norm_sqr();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(LmgError::NotNormalized(norm));
    }
    Ok(())
}

/// Partial trace over the bath.
pub fn reduced_density(state: &TotalState) -> ReducedDensity {
    let mut rho_uu = 0.0;
    let mut rho_dd = 0.0;
    let mut rho_ud = Complex64::new(0.0, 0.0);
    for (m, spin, amp) in state.iter() {
        match spin {
            Spin::Up => {
                rho_uu += amp.norm_sqr();
                rho_ud += amp * state.amplitude(m, Spin::Down).conj();
            }
            Spin::Down => rho_dd += amp.norm_sqr(),
        }
    }
    ReducedDensity {
        rho_uu,
        rho_dd,
        rho_ud,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClosedFormVariant {
    Symmetric,
    Broken,
}

/// Squared propagator entries for the two blocks touched by the initial state:
///
/// * f = |<M_G,up| U |M_G,up>|^2, i = |<M_G+1,down| U |M_G,up>|^2
/// * g = |<M_G,down| U |M_G,down>|^2, h = |<M_G-1,up| U |M_G,down>|^2
///
/// In the broken variant |G, up> is stationary, so f = 1 and i = 0, and g, h
/// are the tilde quantities of the block just below the top.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormTerms {
    pub f: f64,
    pub g: f64,
    pub h: f64,
    pub i: f64,
    pub variant: ClosedFormVariant,
}

impl ClosedFormTerms {
    /// Purity for the (|up> + |down>)/sqrt(2) initial state.
    pub fn purity(&self) -> f64 {
        match self.variant {
            ClosedFormVariant::Symmetric => {
                let (f, g, h, i) = (self.f, self.g, self.h, self.i);
                0.25 * (f + h).powi(2) + 0.25 * (i + g).powi(2) + 0.5 * g * f
            }
            ClosedFormVariant::Broken => {
                let (g, h) = (self.g, self.h);
                0.25 * (1.0 + h).powi(2) + 0.25 * g * g + 0.5 * g
            }
        }
    }
}

/// (a^4 + b^4 + 2 a^2 b^2 cos(gap t), 2 a^2 b^2 (1 - cos(gap t))).
fn diagonal_and_transfer(eig: &BlockEigen, t: f64) -> (f64, f64) {
    let a2 = eig.a * eig.a;
    let b2 = eig.b * eig.b;
    let cos = (eig.gap() * t).cos();
    let moved = 2.0 * a2 * b2 * (1.0 - cos);
    let stay = 1.0 - moved;
    (stay, moved)
}

/// Closed-form terms for the bath ground state. lambda <= 1 gives the broken
/// variant; lambda > 1 the symmetric one.
pub fn closed_form_terms(params: &ModelParams, t: f64) -> Result<ClosedFormTerms> {
    if params.is_broken_phase() {
        let terms = closed_form_terms_at(params, DickeIndex::top(params.n()), t)?;
        Ok(ClosedFormTerms {
            variant: ClosedFormVariant::Broken,
            ..terms
        })
    } else {
        closed_form_terms_at(params, params.ground_state(), t)
    }
}

/// Closed-form terms for the initial Dicke index `m_g`. At the top the
/// up-block is the one-dimensional corner, which contributes f = 1, i = 0.
pub fn closed_form_terms_at(
    params: &ModelParams,
    m_g: DickeIndex,
    t: f64,
) -> Result<ClosedFormTerms> {
    let below = m_g.shifted(-1).ok_or(LmgError::NoLowerSubspace)?;
    let lower = block_eigensystem(&block_hamiltonian(params, below)?);
    let (g, h) = diagonal_and_transfer(&lower, t);
    let (f, i) = if m_g.is_top() {
        (1.0, 0.0)
    } else {
        diagonal_and_transfer(&block_eigensystem(&block_hamiltonian(params, m_g)?), t)
    };
    Ok(ClosedFormTerms {
        f,
        g,
        h,
        i,
        variant: ClosedFormVariant::Symmetric,
    })
}

/// Purity for lambda > 1 and the (|up> + |down>)/sqrt(2) qubit:
/// P = (f + h)^2 / 4 + (i + g)^2 / 4 + g f / 2.
pub fn purity_symmetric_closed(params: &ModelParams, t: f64) -> Result<f64> {
    if params.lambda() <= 1.0 {
        return Err(LmgError::PhaseMismatch {
            op: "purity_symmetric_closed",
            requirement: "lambda > 1",
            lambda: params.lambda(),
        });
    }
    Ok(closed_form_terms(params, t)?.purity())
}

/// Purity for 0 < lambda <= 1 and the (|up> + |down>)/sqrt(2) qubit:
/// P = (1 + h~)^2 / 4 + g~^2 / 4 + g~ / 2.
pub fn purity_broken_closed(params: &ModelParams, t: f64) -> Result<f64> {
    if params.lambda() > 1.0 {
        return Err(LmgError::PhaseMismatch {
            op: "purity_broken_closed",
            requirement: "0 < lambda <= 1",
            lambda: params.lambda(),
        });
    }
    Ok(closed_form_terms(params, t)?.purity())
}

/// Large-N broken-phase density from the Clebsch-Gordan decomposition of
/// |N/2, N/2> x q0: populations stay fixed and the coherence rotates as
/// exp(i (2 lambda / N + 2) t). Its purity is exactly 1.
pub fn broken_phase_cg_density(
    params: &ModelParams,
    q0: &QubitState,
    t: f64,
) -> Result<ReducedDensity> {
    if params.lambda() >= 1.0 {
        return Err(LmgError::PhaseMismatch {
            op: "broken_phase_cg_density",
            requirement: "0 < lambda < 1",
            lambda: params.lambda(),
        });
    }
    let omega = 2.0 * params.lambda() / params.nf() + 2.0;
    let mut rho = q0.density();
    rho.rho_ud *= Complex64::from_polar(1.0, omega * t);
    Ok(rho)
}

/// How a [`PurityTrace`] was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Block propagators applied to the joint state.
    Exact,
    /// f, g, h, i closed forms.
    ClosedForm,
    /// Holstein-Primakoff / anti-Jaynes-Cummings formulas.
    HpLimit,
    /// Dense Dicke-sector eigendecomposition.
    Oracle,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::Exact,
        Method::ClosedForm,
        Method::HpLimit,
        Method::Oracle,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::ClosedForm => "closed-form",
            Method::HpLimit => "hp-limit",
            Method::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Method::ALL
            .iter()
            .copied()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown method `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceMeta {
    pub n: usize,
    pub lambda: f64,
    pub case: CouplingCase,
    pub method: Method,
}

/// Purity sampled on a time grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PurityTrace {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub meta: TraceMeta,
}

impl PurityTrace {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// max_t |P(t) - Q(t)| over a shared grid.
    pub fn sup_deviation(&self, other: &PurityTrace) -> f64 {
        assert_eq!(self.times.len(), other.times.len(), "traces on different grids");
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Evaluate the purity on `times` with the chosen method. Closed-form and
/// H-P methods assume the (|up> + |down>)/sqrt(2) qubit; lambda = 1 uses the
/// broken-phase formulas.
pub fn purity_trace(
    params: &ModelParams,
    q0: &QubitState,
    times: &[f64],
    method: Method,
) -> Result<PurityTrace> {
    if times.iter().any(|t| !t.is_finite()) || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(LmgError::UnsortedTimes);
    }
    let values = match method {
        Method::Exact => {
            check_normalized(q0)?;
            let evolver = ExactEvolver::new(params);
            times.iter().map(|&t| evolver.purity_at(q0, t)).collect()
        }
        Method::ClosedForm => {
            if !q0.is_plus() {
                return Err(LmgError::UnsupportedInitialState("closed-form purity"));
            }
            times
                .iter()
                .map(|&t| closed_form_terms(params, t).map(|c| c.purity()))
                .collect::<Result<Vec<_>>>()?
        }
        Method::HpLimit => {
            if !q0.is_plus() {
                return Err(LmgError::UnsupportedInitialState("hp-limit purity"));
            }
            times
                .iter()
                .map(|&t| {
                    if params.is_broken_phase() {
                        anti_jc::purity_broken_hp(params, t)
                    } else {
                        anti_jc::purity_symmetric_hp(params, t)
                    }
                })
                .collect::<Result<Vec<_>>>()?
        }
        Method::Oracle => {
            let oracle = DickeOracle::new(params)?;
            times
                .iter()
                .map(|&t| oracle.purity(q0, t))
                .collect::<Result<Vec<_>>>()?
        }
    };
    Ok(PurityTrace {
        times: times.to_vec(),
        values,
        meta: TraceMeta {
            n: params.n(),
            lambda: params.lambda(),
            case: params.case(),
            method,
        },
    })
}
