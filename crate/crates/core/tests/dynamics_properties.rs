use std::f64::consts::PI;

use approx::assert_relative_eq;
use lmg_core::analysis::{linspace, sup_distance};
use lmg_core::anti_jc::{
    anti_jc_amplitudes, kerr_jc_amplitudes, kerr_jc_terms, map_to_anti_jc,
    purity_broken_caseii_limit, purity_symmetric_case_i, purity_symmetric_hp,
};
use lmg_core::dynamics::{block_propagator, closed_form_terms};
use lmg_core::{
    block_eigensystem, block_hamiltonian, evolve_product_state, purity_trace, reduced_density,
    CouplingCase, ExactEvolver, Method, ModelParams, QubitState,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rustfft::FftPlanner;

fn case_strategy() -> impl Strategy<Value = CouplingCase> {
    prop_oneof![
        Just(CouplingCase::CaseI),
        Just(CouplingCase::CaseII),
        (-1.5f64..1.5).prop_map(CouplingCase::Explicit),
    ]
}

fn qubit_strategy() -> impl Strategy<Value = QubitState> {
    (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0)
        .prop_filter("nonzero", |(a, b, c, d)| a * a + b * b + c * c + d * d > 1e-3)
        .prop_map(|(a, b, c, d)| {
            QubitState::normalized(Complex64::new(a, b), Complex64::new(c, d)).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn propagators_are_unitary(
        n in 2usize..3000,
        lambda in 0.05f64..8.0,
        case in case_strategy(),
        k in 0.0f64..1.0,
        t in -50.0f64..50.0,
    ) {
        let p = ModelParams::new(n, lambda, case).unwrap();
        let m = lmg_core::DickeIndex::from_offset(n, ((n as f64) * k) as usize % n).unwrap();
        let u = block_propagator(&block_eigensystem(&block_hamiltonian(&p, m).unwrap()), t);
        for col in 0..2 {
            for row in 0..2 {
                let dot: Complex64 = (0..2).map(|r| u[r][row].conj() * u[r][col]).sum();
                let expected = if row == col { 1.0 } else { 0.0 };
                prop_assert!((dot - expected).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn evolution_is_normalized_bounded_and_even(
        n in 2usize..3000,
        lambda in 0.05f64..8.0,
        case in case_strategy(),
        q0 in qubit_strategy(),
        t in 0.0f64..30.0,
    ) {
        let p = ModelParams::new(n, lambda, case).unwrap();
        let ev = ExactEvolver::new(&p);
        let state = ev.state_at(&q0, t);
        prop_assert!((state.norm_sqr() - 1.0).abs() <= 1e-12);
        prop_assert!(state.nonzero_count() <= 4);
        let rho = reduced_density(&state);
        prop_assert!(rho.is_valid(1e-12));
        let pt = rho.purity();
        prop_assert!((0.5 - 1e-12..=1.0 + 1e-12).contains(&pt));
        prop_assert!((ev.purity_at(&q0, -t) - pt).abs() <= 1e-12);
        prop_assert!((ev.purity_at(&q0, 0.0) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn coherence_is_a_quarter_of_f_times_g(
        n in 2usize..3000,
        lambda in 0.05f64..8.0,
        case in case_strategy(),
        t in 0.0f64..30.0,
    ) {
        let p = ModelParams::new(n, lambda, case).unwrap();
        let rho = reduced_density(&evolve_product_state(&p, &QubitState::plus(), t).unwrap());
        let c = closed_form_terms(&p, t).unwrap();
        prop_assert!((rho.rho_ud.norm_sqr() - 0.25 * c.f * c.g).abs() <= 1e-12);
    }

    #[test]
    fn anti_jc_pairs_are_unitary(
        n in 2usize..5000,
        lambda in 0.05f64..1.0,
        photon in 0usize..50,
        q0 in qubit_strategy(),
        t in -20.0f64..20.0,
    ) {
        let p = map_to_anti_jc(&ModelParams::new(n, lambda, CouplingCase::CaseII).unwrap());
        let (u, d) = anti_jc_amplitudes(&p, photon, q0.c_up(), q0.c_down(), t);
        prop_assert!((u.norm_sqr() + d.norm_sqr() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn kerr_pairs_are_unitary(
        n in 2usize..5000,
        lambda in 1.01f64..8.0,
        frac in 0.0f64..1.0,
        q0 in qubit_strategy(),
        t in -20.0f64..20.0,
    ) {
        let p = ModelParams::new(n, lambda, CouplingCase::CaseI).unwrap();
        let terms = kerr_jc_terms(&p, (frac * n as f64) as usize).unwrap();
        let (u, d) = kerr_jc_amplitudes(&terms, q0.c_up(), q0.c_down(), t);
        prop_assert!((u.norm_sqr() + d.norm_sqr() - 1.0).abs() <= 1e-12);
        prop_assert_eq!(terms.xi_n, terms.lambda_n);
        prop_assert!((terms.a_n - terms.b_n - 2.0 * lambda).abs() <= 1e-12 * terms.a_n.abs().max(1.0));
    }

    #[test]
    fn symmetric_gap_tends_to_twice_lambda(n in 100usize..6000, lambda in 1.2f64..5.0) {
        let p = ModelParams::new(n, lambda, CouplingCase::CaseI).unwrap();
        let gap = block_eigensystem(&block_hamiltonian(&p, p.ground_state()).unwrap()).gap();
        prop_assert!((gap / (2.0 * lambda) - 1.0).abs() <= 10.0 / n as f64);
    }

    #[test]
    fn symmetric_hp_tracks_case_i_limit(n in 1000usize..6000, lambda in 1.2f64..5.0) {
        let p = ModelParams::new(n, lambda, CouplingCase::CaseI).unwrap();
        for t in linspace(0.0, PI, 201) {
            let d = purity_symmetric_hp(&p, t).unwrap() - purity_symmetric_case_i(lambda, t).unwrap();
            prop_assert!(d.abs() <= 0.01, "t={} d={}", t, d);
        }
    }
}

#[test]
fn closed_form_equals_exact_for_small_baths() {
    let times = linspace(0.0, 20.0, 21);
    let q0 = QubitState::plus();
    for n in 2..=64 {
        for lambda in [0.3, 0.7, 1.5, 2.0, 5.0] {
            for case in [CouplingCase::CaseI, CouplingCase::CaseII] {
                let p = ModelParams::new(n, lambda, case).unwrap();
                let exact = purity_trace(&p, &q0, &times, Method::Exact).unwrap();
                let closed = purity_trace(&p, &q0, &times, Method::ClosedForm).unwrap();
                let d = exact.sup_deviation(&closed);
                assert!(d <= 1e-12, "N={n} lambda={lambda} {case}: {d:e}");
            }
        }
    }
}

#[test]
fn caseii_broken_phase_converges_to_limit() {
    let times = linspace(0.0, 10.0, 2001);
    let q0 = QubitState::plus();
    let lambda = 0.999;
    let limit: Vec<f64> = times
        .iter()
        .map(|&t| purity_broken_caseii_limit(lambda, t).unwrap())
        .collect();
    let devs: Vec<f64> = [200, 400, 800, 1600]
        .iter()
        .map(|&n| {
            let p = ModelParams::new(n, lambda, CouplingCase::CaseII).unwrap();
            let tr = purity_trace(&p, &q0, &times, Method::Exact).unwrap();
            sup_distance(&tr.values, &limit).unwrap()
        })
        .collect();
    assert!(devs.windows(2).all(|w| w[1] <= w[0]), "{devs:?}");
    assert!(devs[3] <= 0.02);
}

fn blackman_harris(i: usize, len: usize) -> f64 {
    let x = 2.0 * PI * i as f64 / (len - 1) as f64;
    0.35875 - 0.48829 * x.cos() + 0.14128 * (2.0 * x).cos() - 0.01168 * (3.0 * x).cos()
}

/// The exact purity is a quadratic polynomial in cos(w1 t), cos(w2 t), so its
/// spectrum holds at most the lines w1, 2 w1, w2, 2 w2, w1 + w2, |w1 - w2|
/// besides DC.
#[test]
fn purity_spectrum_has_only_gap_combination_lines() {
    for (n, lambda, case) in [
        (10, 2.0, CouplingCase::CaseI),
        (12, 3.0, CouplingCase::CaseII),
        (9, 1.6, CouplingCase::Explicit(0.3)),
    ] {
        let p = ModelParams::new(n, lambda, case).unwrap();
        let m_g = p.ground_state();
        let w1 = block_eigensystem(&block_hamiltonian(&p, m_g).unwrap()).gap();
        let w2 = block_eigensystem(&block_hamiltonian(&p, m_g.shifted(-1).unwrap()).unwrap()).gap();
        let expected = [w1, 2.0 * w1, w2, 2.0 * w2, w1 + w2, (w1 - w2).abs()];

        let len = 1 << 15;
        let span = 800.0;
        let dt = span / len as f64;
        let ev = ExactEvolver::new(&p);
        let q0 = QubitState::plus();
        let samples: Vec<f64> = (0..len).map(|i| ev.purity_at(&q0, i as f64 * dt)).collect();
        let mean = samples.iter().sum::<f64>() / len as f64;
        let mut buf: Vec<Complex64> = samples
            .iter()
            .enumerate()
            .map(|(i, v)| Complex64::new((v - mean) * blackman_harris(i, len), 0.0))
            .collect();
        FftPlanner::new().plan_fft_forward(len).process(&mut buf);
        let mag: Vec<f64> = buf[..len / 2].iter().map(|c| c.norm()).collect();
        let top = mag.iter().copied().fold(0.0, f64::max);
        let bin = 2.0 * PI / span;
        let peaks: Vec<f64> = (8..mag.len() - 1)
            .filter(|&k| mag[k] > 1e-3 * top && mag[k] >= mag[k - 1] && mag[k] > mag[k + 1])
            .map(|k| k as f64 * bin)
            .collect();
        assert!(!peaks.is_empty());
        assert!(peaks.len() <= expected.len(), "{peaks:?} vs {expected:?}");
        for w in &peaks {
            assert!(
                expected.iter().any(|e| (e - w).abs() <= 4.0 * bin),
                "unexpected line at {w} (expected {expected:?})"
            );
        }
    }
}

#[test]
fn purity_is_one_at_time_zero_for_every_method() {
    let q0 = QubitState::plus();
    for lambda in [0.5, 1.0, 2.0] {
        let p = ModelParams::new(20, lambda, CouplingCase::CaseI).unwrap();
        for method in Method::ALL {
            let tr = purity_trace(&p, &q0, &[0.0], method).unwrap();
            assert_relative_eq!(tr.values[0], 1.0, epsilon = 1e-12);
        }
    }
}
