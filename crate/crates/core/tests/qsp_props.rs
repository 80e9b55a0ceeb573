use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use monoqsp::cyclotomic::CyclotomicNumber;
use monoqsp::dihedral::{enumerate_class, gamma};
use monoqsp::polymat::{phase_matrix, qsp_product_symbolic, BivariatePoly, Mat2};
use monoqsp::qsp::{
    derivative_cross_check, evaluate_qsp_general, evaluate_qsp_unit_circle, monomial_phases,
    phase_matrix_numeric, residual_sweep, sample_sweep, signal_matrix_numeric, unit_circle_signal,
    DerivativeChecker, PhaseSchedule,
};

type C = Complex64;
type Raw = [[C; 2]; 2];

/// Plain-array product `Π_i T(k1,k2) · diag(e^{2πi·i/n}, e^{−2πi·i/n})`.
fn raw_product(n: usize, k1: C, k2: C) -> Raw {
    let mul = |a: &Raw, b: &Raw| -> Raw {
        let mut out = [[C::new(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        out
    };
    let t = [[k1, k2], [k2, k1]];
    let mut acc = [
        [C::new(1.0, 0.0), C::new(0.0, 0.0)],
        [C::new(0.0, 0.0), C::new(1.0, 0.0)],
    ];
    for i in 1..=n {
        let w = C::from_polar(1.0, std::f64::consts::TAU * i as f64 / n as f64);
        acc = mul(&acc, &t);
        acc = mul(&acc, &[[w, C::new(0.0, 0.0)], [C::new(0.0, 0.0), w.conj()]]);
    }
    acc
}

#[test]
fn worked_examples_against_raw_products() {
    let s3 = monomial_phases(3).unwrap();
    let (k1, k2) = unit_circle_signal(0.5).unwrap();
    let oracle = raw_product(3, k1, k2)[0][0];
    assert!((oracle - 0.125).norm() < 1e-12);
    assert!((evaluate_qsp_unit_circle(&s3, 0.5).unwrap() - oracle).norm() < 1e-12);

    let (k1, k2) = (C::new(1.0, 1.0), C::new(0.3, -0.2));
    let oracle = raw_product(5, k1, k2)[0][0];
    let s5 = monomial_phases(5).unwrap();
    let value = evaluate_qsp_general(&s5, k1, k2).e11;
    assert!((oracle - k1.powu(5)).norm() < 1e-9);
    assert!((value - k1.powu(5)).norm() < 1e-9);
    assert!((value - oracle).norm() < 1e-12);
}

#[test]
fn schedule_invariants() {
    for n in (1..=201).step_by(2) {
        let s = monomial_phases(n).unwrap();
        assert_eq!(s.len(), n);
        assert_eq!(*s.angles.last().unwrap(), 0.0);
        for (a, &m) in s.angles.iter().zip(&s.multiples) {
            assert!((0.0..std::f64::consts::TAU).contains(a));
            assert_eq!(*a, std::f64::consts::TAU * m as f64 / n as f64);
        }
    }
}

#[test]
fn partial_products_stay_unitary() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in (1..=101).step_by(10) {
        let s = monomial_phases(n).unwrap();
        for _ in 0..10 {
            let x: f64 = rng.gen_range(-1.0..=1.0);
            let (k1, k2) = unit_circle_signal(x).unwrap();
            let t = signal_matrix_numeric(k1, k2);
            let mut acc = Mat2::<C>::identity();
            for &phi in &s.angles {
                acc = &acc * &t;
                assert!(acc.unitarity_defect() < 1e-12);
                acc = &acc * &phase_matrix_numeric(phi);
                assert!(acc.unitarity_defect() < 1e-12);
            }
            assert!((acc.det().norm() - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn monomial_identity_up_to_101() {
    for n in (1..=101).step_by(2) {
        let r = residual_sweep(n, 100, n as u64).unwrap();
        assert!(r.max_abs_error <= 1e-9, "n = {n}: {r:?}");
    }
}

#[test]
fn sweep_examples() {
    assert!(residual_sweep(1, 50, 0).unwrap().max_abs_error <= 1e-15);
    assert!(residual_sweep(3, 1000, 42).unwrap().max_abs_error <= 1e-10);
    assert!(residual_sweep(101, 200, 7).unwrap().max_abs_error <= 1e-9);
    let samples = sample_sweep(5, 20, 3).unwrap();
    for s in &samples {
        assert!((-1.0..=1.0).contains(&s.x));
        assert_eq!(s.abs_error, (s.value - C::new(s.target, 0.0)).norm());
    }
}

#[test]
fn general_complex_arguments() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in (1..=21).step_by(2) {
        let s = monomial_phases(n).unwrap();
        for _ in 0..50 {
            let mut draw = || {
                C::from_polar(
                    rng.gen_range(0.0..=2.0),
                    rng.gen_range(0.0..std::f64::consts::TAU),
                )
            };
            let (k1, k2) = (draw(), draw());
            let err = (evaluate_qsp_general(&s, k1, k2).e11 - k1.powu(n as u32)).norm();
            assert!(
                err <= 1e-7 * 1f64.max(k1.norm().powi(n as i32)),
                "n = {n}, k = ({k1}, {k2}): {err}"
            );
        }
    }
}

#[test]
fn cross_layer_agreement() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for n in (1..=15).step_by(2) {
        let symbolic = qsp_product_symbolic(n).unwrap();
        let s = monomial_phases(n).unwrap();
        for _ in 0..20 {
            let mut draw = || C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let (k1, k2) = (draw(), draw());
            let d = symbolic
                .evaluate(k1, k2)
                .max_abs_diff(&evaluate_qsp_general(&s, k1, k2));
            assert!(d <= 1e-9, "n = {n}: {d}");
        }
    }
}

#[test]
fn derivative_slices_match_sign_function_sums() {
    for n in [1, 3, 5, 7] {
        let checker = DerivativeChecker::new(n).unwrap();
        for k in 0..=n {
            let c = checker.check(k).unwrap();
            assert!(c.passes(), "n = {n}, k = {k}: {:?}", c.difference());
            assert!(c.difference().entries().iter().all(|p| p.is_zero()));
        }
        let top = checker.check(n).unwrap();
        assert!(top.predicted.e11.is_monomial(n as u32, 0));
        assert!(top.predicted.e22.is_monomial(n as u32, 0));
    }
}

/// `X^{m} Σ_{f∈A(m)} S(ω^{Γ(f)})` with the unsigned exponent.
fn literal_prediction(n: usize, k: usize) -> Mat2<CyclotomicNumber> {
    let m = n - k;
    let mut sum = Mat2::<CyclotomicNumber>::zero(n).unwrap();
    for f in enumerate_class(n, m).unwrap() {
        sum = &sum + &phase_matrix(n, gamma(&f) as i64).unwrap();
    }
    if m % 2 == 1 {
        &Mat2::swap(n).unwrap() * &sum
    } else {
        sum
    }
}

#[test]
fn unsigned_gamma_prediction_differs_off_the_even_class() {
    for n in [3, 5, 7] {
        let checker = DerivativeChecker::new(n).unwrap();
        for k in 0..=n {
            let c = checker.check(k).unwrap();
            let literal = literal_prediction(n, k)
                .map(|c| BivariatePoly::monomial(c.clone(), k as u32, (n - k) as u32));
            // only the diagonal, which vanishes for odd n − k, is unaffected
            assert_eq!(literal.e11, c.slice.e11);
            assert_eq!(literal.e22, c.slice.e22);
            assert_eq!(literal == c.slice, (n - k) % 2 == 0, "n = {n}, k = {k}");
        }
    }
}

#[test]
fn derivative_check_rejects_even_degree() {
    assert!(derivative_cross_check(2, 0).is_err());
}

#[test]
fn schedule_documents_round_trip() {
    let s = monomial_phases(7).unwrap();
    let json = serde_json::to_string(&s).unwrap();
    let value: serde_json::Value = serde_json::from_str(&json).unwrap();
    for key in [
        "degree",
        "convention",
        "angles_radians",
        "angles_as_multiples_of_2pi_over_n",
    ] {
        assert!(value.get(key).is_some(), "missing {key}");
    }
    let back: PhaseSchedule = serde_json::from_str(&json).unwrap();
    assert_eq!(back, s);
    assert_eq!(serde_json::to_string(&back).unwrap(), json);

    let csv = s.to_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("index,angle_radians"));
    let angles: Vec<f64> = lines
        .enumerate()
        .map(|(i, line)| {
            let (idx, a) = line.split_once(',').unwrap();
            assert_eq!(idx.parse::<usize>().unwrap(), i + 1);
            a.parse().unwrap()
        })
        .collect();
    assert_eq!(angles, s.angles);
}

proptest! {
    #[test]
    fn unit_circle_domain(x in -3.0f64..3.0) {
        let s = monomial_phases(3).unwrap();
        let r = evaluate_qsp_unit_circle(&s, x);
        prop_assert_eq!(r.is_ok(), (-1.0..=1.0).contains(&x));
    }
}
