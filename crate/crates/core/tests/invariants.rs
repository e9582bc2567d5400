//! Structural invariants checked on random trigonometric polynomials.

use num_complex::Complex64;
use proptest::prelude::*;
use toeplitz_trace::funcalc::{heat_trace, om_resolvent_trace, trace_phi_difference, OperatorMonotone, ScalarFunction};
use toeplitz_trace::indices::ssf::LevelScan;
use toeplitz_trace::indices::{krein_check, spectral_shift, ssf_from_principal, ssf_pushforward, winding_number};
use toeplitz_trace::operators::{commutator, commutator_trace, product_sections, schatten_norm};
use toeplitz_trace::quadrature::{
    boundary_trace_integral, disk_trace_integral, heat_integral, principal_value_integral, DiskMode, QuadratureSettings,
};
use toeplitz_trace::suites::{random_factored_polynomial, seeded};
use toeplitz_trace::symbol::{omega_form, SobolevMethod};
use toeplitz_trace::{FourierSymbol, SymbolFamily, TruncationMode};

fn coefficients(lo: i64, hi: i64) -> impl Strategy<Value = Vec<(i64, Complex64)>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), (hi - lo + 1) as usize).prop_map(move |v| {
        v.into_iter()
            .enumerate()
            .map(|(i, (re, im))| (lo + i as i64, Complex64::new(re, im)))
            .collect()
    })
}

/// Trig polynomial with degree at most `max_degree` on each side.
fn trig_polynomial(max_degree: i64) -> impl Strategy<Value = FourierSymbol> {
    (0..=max_degree, 0..=max_degree)
        .prop_flat_map(|(a, b)| coefficients(-a, b))
        .prop_map(|pairs| FourierSymbol::from_coefficients(&pairs).unwrap())
}

fn analytic_polynomial(max_degree: i64) -> impl Strategy<Value = FourierSymbol> {
    (1..=max_degree)
        .prop_flat_map(|b| coefficients(0, b))
        .prop_map(|pairs| FourierSymbol::from_coefficients(&pairs).unwrap())
}

fn add(f: &FourierSymbol, g: &FourierSymbol) -> FourierSymbol {
    let lo = f.min_index().min(g.min_index());
    let hi = f.max_index().max(g.max_index());
    let pairs: Vec<_> = (lo..=hi).map(|k| (k, f.coeff(k) + g.coeff(k))).collect();
    FourierSymbol::from_coefficients(&pairs).unwrap()
}

fn coefficient_gap(f: &FourierSymbol, g: &FourierSymbol) -> f64 {
    let lo = f.min_index().min(g.min_index());
    let hi = f.max_index().max(g.max_index());
    (lo..=hi).map(|k| (f.coeff(k) - g.coeff(k)).norm()).fold(0.0, f64::max)
}

fn w_half(f: &FourierSymbol) -> f64 {
    f.sobolev_half_norm(SobolevMethod::Coefficient)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn sobolev_norms_agree(f in trig_polynomial(16)) {
        let a = f.sobolev_half_norm(SobolevMethod::Coefficient);
        let b = f.sobolev_half_norm(SobolevMethod::DoubleIntegral);
        prop_assert!((a - b).abs() <= 1e-10 * (1.0 + a), "{a} {b}");
    }

    #[test]
    fn omega_is_skew_bilinear_and_bounded(f in trig_polynomial(8), g in trig_polynomial(8), h in trig_polynomial(8)) {
        let fg = omega_form(&f, &g);
        prop_assert!((fg + omega_form(&g, &f)).norm() <= 1e-12 * (1.0 + fg.norm()));
        let sum = omega_form(&f, &add(&g, &h));
        prop_assert!((sum - fg - omega_form(&f, &h)).norm() <= 1e-11 * (1.0 + sum.norm()));
        prop_assert!(fg.norm() <= w_half(&f) * w_half(&g) + 1e-12);
    }

    #[test]
    fn multiplication_is_commutative_and_associative(f in trig_polynomial(6), g in trig_polynomial(6), h in trig_polynomial(6)) {
        prop_assert!(coefficient_gap(&f.multiply(&g), &g.multiply(&f)) <= 1e-12);
        let left = f.multiply(&g).multiply(&h);
        let right = f.multiply(&g.multiply(&h));
        prop_assert!(coefficient_gap(&left, &right) <= 1e-12);
    }

    #[test]
    fn zero_free_symbols_have_no_circle_zeros(f in trig_polynomial(6)) {
        // Shrink f below 1 in sup norm and add 2.
        let scale = 1.0 / (1.0 + f.l1_norm());
        let lo = f.min_index().min(0);
        let hi = f.max_index().max(0);
        let pairs: Vec<_> = (lo..=hi)
            .map(|k| (k, f.coeff(k) * scale + if k == 0 { 2.0 } else { 0.0 }))
            .collect();
        let g = FourierSymbol::from_coefficients(&pairs).unwrap();
        prop_assert!(g.circle_zeros().unwrap().is_empty());
    }

    #[test]
    fn section_difference_is_supported_in_the_corner(f in trig_polynomial(6)) {
        let d = f.degree();
        let mut traces = Vec::new();
        for n in [d.max(1) + 4, d.max(1) + 11] {
            let pair = product_sections(&f, n).unwrap();
            prop_assert!(pair.a.hermitian_defect() <= 1e-14 * (1.0 + pair.a.max_abs()));
            prop_assert!(pair.b.hermitian_defect() <= 1e-14 * (1.0 + pair.b.max_abs()));
            let diff = pair.difference();
            for i in 0..n {
                for j in 0..n {
                    if i >= d || j >= d {
                        prop_assert!(diff[(i, j)].norm() <= 1e-13, "({i}, {j}) {}", diff[(i, j)]);
                    }
                }
            }
            traces.push(diff.trace().re);
        }
        prop_assert!((traces[0] - traces[1]).abs() <= 1e-12 * (1.0 + traces[0].abs()));
    }

    #[test]
    fn commutator_trace_norm_bound(f in trig_polynomial(6), g in trig_polynomial(6)) {
        let n = f.degree() + g.degree() + 8;
        let c = commutator(&f, &g, n).unwrap();
        let norm = schatten_norm(&c, 1.0).unwrap();
        prop_assert!(norm <= w_half(&f) * w_half(&g) + 1e-10, "{norm}");
    }

    #[test]
    fn helton_howe_formula(f in trig_polynomial(16), g in trig_polynomial(16)) {
        let t = commutator_trace(&f, &g).unwrap();
        let w = omega_form(&f, &g);
        prop_assert!((t.trace - w).norm() <= 1e-10 * (1.0 + w.norm()), "{} {w}", t.trace);
    }

    #[test]
    fn heat_trace_is_nonnegative_for_analytic_symbols(f in analytic_polynomial(5), s in 0.1f64..10.0) {
        let r = heat_trace(&f, s, 64).unwrap();
        prop_assert!(r.value >= -1e-12, "{}", r.value);
    }

    #[test]
    fn heat_integral_is_nonnegative_for_analytic_symbols(f in analytic_polynomial(4)) {
        let settings = QuadratureSettings::default();
        for s in [0.25, 1.0, 4.0, 16.0] {
            let v = heat_integral(&f, s, &settings).unwrap().value.re;
            prop_assert!(v >= -1e-9, "s = {s}: {v}");
        }
    }

    #[test]
    fn heat_integral_of_monomials(k in 1i64..5, c in 0.2f64..2.0, s in 0.1f64..10.0) {
        // A = c^2 and B = c^2 (1 - P_k), so the trace is k (1 - e^{-s c^2}).
        let f = FourierSymbol::from_real_coefficients(&[(k, c)]).unwrap();
        let v = heat_integral(&f, s, &QuadratureSettings::default()).unwrap().value.re;
        let expected = k as f64 * -(-s * c * c).exp_m1();
        prop_assert!((v - expected).abs() <= 1e-9, "{v} {expected}");
    }

    #[test]
    fn boundary_and_disk_sides_agree(f in trig_polynomial(4)) {
        let settings = QuadratureSettings::default();
        for phi in [
            ScalarFunction::Power { p: 1.0 },
            ScalarFunction::Power { p: 2.0 },
            ScalarFunction::ExpHeat { s: 1.0 },
        ] {
            let b = boundary_trace_integral(&f, &phi, &settings).unwrap();
            let d = disk_trace_integral(&f, &phi, DiskMode::Harmonic, &settings).unwrap();
            let gap = (b.value.re - d.value.re).abs();
            prop_assert!(gap <= b.abs_error_estimate + d.abs_error_estimate + 1e-9 * (1.0 + b.value.norm()), "{}: {gap}", phi.label());
        }
    }

    #[test]
    fn winding_of_factored_polynomials(seed in any::<u64>(), roots in 1usize..6, shift in -2i64..=2) {
        let (f, expected) = random_factored_polynomial(&mut seeded(seed), roots, shift).unwrap();
        prop_assert_eq!(winding_number(&f, Complex64::new(0.0, 0.0)).unwrap(), expected);
    }

    #[test]
    fn spectral_shift_vanishes_above_the_spectrum(f in analytic_polynomial(4)) {
        let settings = QuadratureSettings::default();
        let top = LevelScan::new(&f).top;
        let grid = [top * 1.01, top * 1.5, top * 3.0];
        for values in [
            spectral_shift(&f, &grid).unwrap().values,
            ssf_from_principal(&f, &grid, &settings).unwrap().values,
            ssf_pushforward(&f, &grid).unwrap().values,
        ] {
            prop_assert!(values.iter().all(|v| v.abs() <= 1e-9), "{values:?}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn monotone_route_matches_spectral_route(f in analytic_polynomial(3), q in prop::sample::select(vec![0.25, 0.5, 0.75])) {
        let direct = trace_phi_difference(&f, &ScalarFunction::Power { p: q }, 64).unwrap();
        let om = om_resolvent_trace(&f, &OperatorMonotone::power_q(q).unwrap(), 64).unwrap();
        prop_assert!((direct.value - om.value).abs() <= 1e-5, "{} {}", direct.value, om.value);
    }
}

#[test]
fn power_representation_reconstructs() {
    for q in [0.25, 0.5, 0.9] {
        let phi = OperatorMonotone::power_q(q).unwrap();
        for i in 0..=40 {
            let x = 0.25 * i as f64;
            let v = phi.reconstruct(x).unwrap();
            assert!((v - x.powf(q)).abs() <= 1e-8, "q = {q}, x = {x}: {v}");
        }
    }
}

#[test]
fn fejer_truncation_does_not_increase_sup_norm() {
    for family in [
        SymbolFamily::TwistedPower { n: 1, alpha: 0.5 },
        SymbolFamily::PsiPower { alpha: 1.0 },
        SymbolFamily::ShiftSum { n: 4 },
    ] {
        let full = FourierSymbol::from_family(family.clone(), 64, TruncationMode::Raw).unwrap();
        let fejer = FourierSymbol::from_family(family.clone(), 64, TruncationMode::Fejer).unwrap();
        let top = full.sup_norm();
        let smoothed = fejer.truncated().grid_values(4096).iter().map(|v| v.norm()).fold(0.0, f64::max);
        assert!(smoothed <= top + 1e-12, "{}: {smoothed} > {top}", family.label());
    }
}

#[test]
fn disk_integral_is_stable_under_radial_refinement() {
    let f = FourierSymbol::from_real_coefficients(&[(-2, 0.3), (0, 1.0), (1, 0.7), (3, -0.4)]).unwrap();
    let phi = ScalarFunction::Power { p: 2.0 };
    let coarse = QuadratureSettings::default();
    let fine = QuadratureSettings { rings: 2 * coarse.rings, ..coarse };
    let a = disk_trace_integral(&f, &phi, DiskMode::Harmonic, &coarse).unwrap();
    let b = disk_trace_integral(&f, &phi, DiskMode::Harmonic, &fine).unwrap();
    assert!((a.value - b.value).norm() <= a.abs_error_estimate + 1e-12);
}

#[test]
fn principal_value_is_stable_under_smaller_excision() {
    let f = FourierSymbol::from_family(SymbolFamily::TwistedPower { n: 0, alpha: 1.0 }, 64, TruncationMode::Raw).unwrap();
    let zeros = f.circle_zeros().unwrap();
    let base = QuadratureSettings::default();
    let half = QuadratureSettings { eps0_fraction: 0.5 * base.eps0_fraction, ..base };
    let a = principal_value_integral(&f, &zeros, &base).unwrap();
    let b = principal_value_integral(&f, &zeros, &half).unwrap();
    assert!((a.value - b.value).norm() <= a.abs_error_estimate + b.abs_error_estimate + 1e-12);
}

#[test]
fn krein_routes_agree() {
    let settings = QuadratureSettings::default();
    let symbols = [
        FourierSymbol::from_real_coefficients(&[(1, 1.0)]).unwrap(),
        FourierSymbol::from_real_coefficients(&[(0, 1.0), (1, 1.0)]).unwrap(),
        // Every route sees the same degree-32 polynomial.
        FourierSymbol::from_family(SymbolFamily::TwistedPower { n: 1, alpha: 0.5 }, 32, TruncationMode::Raw)
            .unwrap()
            .truncated(),
    ];
    let functions = [
        ScalarFunction::Power { p: 1.0 },
        ScalarFunction::Power { p: 2.0 },
        ScalarFunction::ExpHeat { s: 1.0 },
        ScalarFunction::Power { p: 0.5 },
    ];
    for f in &symbols {
        for phi in &functions {
            let r = krein_check(f, phi, 128, 2e-3, &settings).unwrap();
            assert!(r.agreement, "{}: {:?}", phi.label(), r.routes);
        }
    }
}
