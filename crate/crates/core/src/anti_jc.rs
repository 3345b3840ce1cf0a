//! Holstein-Primakoff reductions of the qubit + bath model.
//!
//! In the broken phase the bath ground state is the boson vacuum and the
//! model becomes an anti-Jaynes-Cummings model
//! `nu d^+ d - k (s+ d^+ + s- d) + omega s_z`. In the symmetric phase the
//! ground state holds n = N/2 - I(lambda) bosons, and the exact mapping gives
//! an intensity-dependent anti-JC model with a Kerr term. Both are solved
//! pair by pair on span{|up, m+1>, |down, m>}.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{purity, ReducedDensity};
use crate::error::{LmgError, Result};
use crate::model::ModelParams;

/// Parameters of `nu d^+ d - k (s+ d^+ + s- d) + (omega / 2) sigma_z`, with
/// detuning `delta = nu + omega`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AntiJcParams {
    pub nu: f64,
    pub omega: f64,
    pub k: f64,
    pub delta: f64,
}

impl AntiJcParams {
    pub fn new(nu: f64, omega: f64, k: f64) -> Self {
        Self {
            nu,
            omega,
            k,
            delta: nu + omega,
        }
    }

    pub fn rabi(&self, n: usize) -> RabiTerms {
        RabiTerms::new(self, n)
    }
}

/// Rabi frequency of the pair (|up, n+1>, |down, n>).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RabiTerms {
    pub n: usize,
    pub omega_n: f64,
}

impl RabiTerms {
    pub fn new(p: &AntiJcParams, n: usize) -> Self {
        let half = 0.5 * p.delta;
        let omega_n = (half * half + p.k * p.k * (n as f64 + 1.0)).sqrt();
        Self { n, omega_n }
    }
}

/// First-order H-P mapping: nu = 2 (1 - lambda), omega = -2,
/// k = 2 lambda' sqrt(N), so delta = -2 lambda.
pub fn map_to_anti_jc(params: &ModelParams) -> AntiJcParams {
    let k = 2.0 * params.lambda_prime() * params.nf().sqrt();
    AntiJcParams::new(2.0 * (1.0 - params.lambda()), -2.0, k)
}

/// Amplitudes (c_up,n+1(t), c_down,n(t)) of the anti-JC pair at photon index
/// `n`, from their values at t = 0.
///
/// The rotation uses the half-detuning over the Rabi frequency,
/// `delta / (2 Omega_n)`, which is what makes the pair evolution unitary.
pub fn anti_jc_amplitudes(
    p: &AntiJcParams,
    n: usize,
    c_up0: Complex64,
    c_down0: Complex64,
    t: f64,
) -> (Complex64, Complex64) {
    let rabi = RabiTerms::new(p, n);
    let i = Complex64::i();
    if rabi.omega_n == 0.0 {
        return (c_up0, c_down0);
    }
    let (s, c) = (rabi.omega_n * t).sin_cos();
    let detune = 0.5 * p.delta / rabi.omega_n;
    let couple = p.k * (n as f64 + 1.0).sqrt() / rabi.omega_n;
    let up = (c_up0 * (c - i * detune * s) + i * couple * s * c_down0)
        * Complex64::from_polar(1.0, 0.5 * p.delta * t);
    let down = (c_down0 * (c + i * detune * s) + i * couple * s * c_up0)
        * Complex64::from_polar(1.0, -0.5 * p.delta * t);
    (up, down)
}

fn require_broken(op: &'static str, lambda: f64) -> Result<()> {
    if lambda > 1.0 {
        return Err(LmgError::PhaseMismatch {
            op,
            requirement: "0 < lambda <= 1",
            lambda,
        });
    }
    Ok(())
}

fn require_symmetric(op: &'static str, lambda: f64) -> Result<()> {
    if lambda <= 1.0 {
        return Err(LmgError::PhaseMismatch {
            op,
            requirement: "lambda > 1",
            lambda,
        });
    }
    Ok(())
}

/// Reduced qubit density built from the anti-JC amplitudes for the initial
/// state (|up> + |down>)/sqrt(2) x |0>. The |up, 0> component has no partner
/// and stays put; |down, 0> pairs with |up, 1>.
pub fn broken_hp_reduced_density(params: &ModelParams, t: f64) -> Result<ReducedDensity> {
    require_broken("broken_hp_reduced_density", params.lambda())?;
    let p = map_to_anti_jc(params);
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let (up1, down0) = anti_jc_amplitudes(&p, 0, zero, h, t);
    let up0 = h;
    Ok(ReducedDensity {
        rho_uu: up0.norm_sqr() + up1.norm_sqr(),
        rho_dd: down0.norm_sqr(),
        // Only the photon number 0 appears in both spin sectors.
        rho_ud: up0 * down0.conj(),
    })
}

/// Broken-phase H-P purity:
/// `P = [1 + cos^2 + (delta / 2 Omega_0)^2 sin^2]^2 / 4
///    + [(k / Omega_0)^4 sin^4 + 2 (k / Omega_0)^2 sin^2] / 4`,
/// all at `Omega_0 t`. Accepts the boundary lambda = 1.
pub fn purity_broken_hp(params: &ModelParams, t: f64) -> Result<f64> {
    require_broken("purity_broken_hp", params.lambda())?;
    let p = map_to_anti_jc(params);
    let omega0 = RabiTerms::new(&p, 0).omega_n;
    let s2 = (omega0 * t).sin().powi(2);
    let c2 = 1.0 - s2;
    let detune2 = (0.5 * p.delta / omega0).powi(2);
    let couple2 = (p.k / omega0).powi(2);
    Ok(0.25 * (1.0 + c2 + detune2 * s2).powi(2)
        + 0.25 * (couple2 * couple2 * s2 * s2 + 2.0 * couple2 * s2))
}

/// Case II broken-phase purity in the N -> infinity limit, where
/// Omega_0 = sqrt(5) lambda.
pub fn purity_broken_caseii_limit(lambda: f64, t: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(LmgError::PhaseMismatch {
            op: "purity_broken_caseii_limit",
            requirement: "0 < lambda < 1",
            lambda,
        });
    }
    let s2 = (5.0f64.sqrt() * lambda * t).sin().powi(2);
    Ok(0.25 * (32.0 / 25.0 * s2 * s2 - 8.0 / 5.0 * s2 + 4.0))
}

/// Mean boson number of the symmetric-phase ground state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonNumber {
    /// N/2 - I(lambda).
    pub exact: usize,
    /// N/2 (1 - 1/lambda).
    pub approx: f64,
}

pub fn mean_photon_number(params: &ModelParams) -> Result<PhotonNumber> {
    require_symmetric("mean_photon_number", params.lambda())?;
    let ground = params.ground_state();
    let exact = (params.n() as i64 - ground.twice_m()) / 2;
    Ok(PhotonNumber {
        exact: exact as usize,
        approx: params.half_n() * (1.0 - 1.0 / params.lambda()),
    })
}

/// Coefficients of the Kerr anti-JC pair (|up, n+1>, |down, n>).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KerrJcTerms {
    pub n: usize,
    /// -2 lambda.
    pub delta_prime: f64,
    /// Half the diagonal splitting of the pair.
    pub lambda_n: f64,
    /// Off-diagonal coupling 2 lambda' sqrt((N - n)(n + 1)).
    pub gamma_n: f64,
    pub omega_prime_n: f64,
    pub a_n: f64,
    pub b_n: f64,
    /// Same quantity as `lambda_n`, under its other name.
    pub xi_n: f64,
}

pub fn kerr_jc_terms(params: &ModelParams, n: usize) -> Result<KerrJcTerms> {
    if n > params.n() {
        return Err(LmgError::PhotonIndexOutOfRange { n, max: params.n() });
    }
    let lambda = params.lambda();
    let big_n = params.nf();
    let nf = n as f64;
    let delta_prime = -2.0 * lambda;
    let lambda_n = lambda * (2.0 * nf + 1.0) / big_n + 0.5 * delta_prime;
    let gamma_n = 2.0 * params.lambda_prime() * ((big_n - nf) * (nf + 1.0)).sqrt();
    let a_n = lambda * (nf * nf + (nf + 1.0) * (nf + 1.0)) / big_n - 0.5 * delta_prime;
    Ok(KerrJcTerms {
        n,
        delta_prime,
        lambda_n,
        gamma_n,
        omega_prime_n: lambda_n.hypot(gamma_n),
        a_n,
        b_n: a_n + delta_prime,
        xi_n: lambda_n,
    })
}

/// Kerr anti-JC pair amplitudes (c'_up,n+1(t), c'_down,n(t)).
pub fn kerr_jc_amplitudes(
    terms: &KerrJcTerms,
    c_up0: Complex64,
    c_down0: Complex64,
    t: f64,
) -> (Complex64, Complex64) {
    let i = Complex64::i();
    let omega = terms.omega_prime_n;
    if omega == 0.0 {
        return (
            c_up0 * Complex64::from_polar(1.0, -terms.a_n * t),
            c_down0 * Complex64::from_polar(1.0, -terms.b_n * t),
        );
    }
    let (s, c) = (omega * t).sin_cos();
    let detune = terms.lambda_n / omega;
    let couple = terms.gamma_n / omega;
    let up = (c_up0 * (c - i * detune * s) + i * c_down0 * couple * s)
        * Complex64::from_polar(1.0, -terms.a_n * t);
    let down = (c_down0 * (c + i * detune * s) + i * c_up0 * couple * s)
        * Complex64::from_polar(1.0, -terms.b_n * t);
    (up, down)
}

/// Reduced qubit density from the Kerr anti-JC amplitudes for
/// (|up> + |down>)/sqrt(2) x |n>, n = N/2 - I(lambda).
///
/// |up, n> belongs to the pair indexed n - 1 and |down, n> to the pair
/// indexed n; each evolves with its own frequency. With this assignment the
/// result is the exact symmetric-phase dynamics.
pub fn symmetric_hp_reduced_density(params: &ModelParams, t: f64) -> Result<ReducedDensity> {
    require_symmetric("symmetric_hp_reduced_density", params.lambda())?;
    let n = mean_photon_number(params)?.exact;
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let zero = Complex64::new(0.0, 0.0);

    // |down, n> pairs with |up, n + 1>.
    let (up_next, down_n) = kerr_jc_amplitudes(&kerr_jc_terms(params, n)?, zero, h, t);
    // |up, n> pairs with |down, n - 1>; at n = 0 it has no partner.
    let (up_n, down_prev) = if n == 0 {
        // |up, 0> is an eigenstate with energy -(N + 1).
        (h * Complex64::from_polar(1.0, (params.nf() + 1.0) * t), zero)
    } else {
        kerr_jc_amplitudes(&kerr_jc_terms(params, n - 1)?, h, zero, t)
    };
    Ok(ReducedDensity {
        rho_uu: up_n.norm_sqr() + up_next.norm_sqr(),
        rho_dd: down_n.norm_sqr() + down_prev.norm_sqr(),
        rho_ud: up_n * down_n.conj(),
    })
}

/// Time argument of the oscillating factor in the symmetric H-P purity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HpTimeConvention {
    /// sin^2(Omega'_n t); matches the exact oscillation frequency.
    #[default]
    Full,
    /// sin^2(Omega'_n t / 2); kept for comparison only.
    Half,
}

/// Symmetric-phase H-P purity
/// `P = 1/2 + [1 - (2 lambda' / Omega'_n)^2 (N - n)(n + 1) sin^2(Omega'_n t)]^2 / 2`
/// with the exact boson number n = N/2 - I(lambda).
pub fn purity_symmetric_hp(params: &ModelParams, t: f64) -> Result<f64> {
    purity_symmetric_hp_with(params, t, HpTimeConvention::Full)
}

pub fn purity_symmetric_hp_with(
    params: &ModelParams,
    t: f64,
    convention: HpTimeConvention,
) -> Result<f64> {
    require_symmetric("purity_symmetric_hp", params.lambda())?;
    let n = mean_photon_number(params)?.exact;
    let terms = kerr_jc_terms(params, n)?;
    let omega = terms.omega_prime_n;
    let arg = match convention {
        HpTimeConvention::Full => omega * t,
        HpTimeConvention::Half => 0.5 * omega * t,
    };
    let big_n = params.nf();
    let nf = n as f64;
    let weight = (2.0 * params.lambda_prime() / omega).powi(2) * (big_n - nf) * (nf + 1.0);
    let inner = 1.0 - weight * arg.sin().powi(2);
    Ok(0.5 + 0.5 * inner * inner)
}

/// Case I symmetric phase, N -> infinity: `1/2 + [1 - (1 - 1/lambda^2) sin^2(lambda t)]^2 / 2`.
pub fn purity_symmetric_case_i(lambda: f64, t: f64) -> Result<f64> {
    require_symmetric("purity_symmetric_case_i", lambda)?;
    let inner = 1.0 - (1.0 - 1.0 / (lambda * lambda)) * (lambda * t).sin().powi(2);
    Ok(0.5 + 0.5 * inner * inner)
}

/// Case II symmetric phase: `1/2 + {1 - sin^2[sqrt(N (lambda^2 - 1)) t]}^2 / 2`.
pub fn purity_symmetric_case_ii(n: usize, lambda: f64, t: f64) -> Result<f64> {
    require_symmetric("purity_symmetric_case_ii", lambda)?;
    let freq = (n as f64 * (lambda * lambda - 1.0)).sqrt();
    let inner = 1.0 - (freq * t).sin().powi(2);
    Ok(0.5 + 0.5 * inner * inner)
}

/// Purity of the broken-phase amplitude path; equals [`purity_broken_hp`].
pub fn purity_broken_hp_from_amplitudes(params: &ModelParams, t: f64) -> Result<f64> {
    Ok(purity(&broken_hp_reduced_density(params, t)?))
}
