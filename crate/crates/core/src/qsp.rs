//! Closed-form phase schedules for odd monomials and their numeric evaluation.
//!
//! Convention: the sequence is `T(k)·S(e^{iφ_1})·T(k)·S(e^{iφ_2})⋯T(k)·S(e^{iφ_n})`,
//! multiplied left to right, with `T(k) = [[k1, k2], [k2, k1]]` and
//! `S(z) = diag(z, z̄)`. For odd `n` and `φ_i = 2πi/n` the top-left entry is `k1ⁿ`.

use std::cmp::Ordering;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::CyclotomicNumber;
use crate::dihedral::{enumerate_class, normal_form_product};
use crate::error::{Error, Result};
use crate::polymat::{phase_matrix, qsp_product_symbolic, BivariatePoly, Mat2};

/// Convention tag carried by every serialized schedule.
pub const CONVENTION: &str =
    "S(e^{i phi}) = diag(e^{i phi}, e^{-i phi}) = e^{i phi Z}, interleaved as T S(e^{i phi_1}) T S(e^{i phi_2}) ... T S(e^{i phi_n}), product left to right";

/// Phase angles implementing `x ↦ xⁿ` for odd `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseSchedule {
    pub degree: usize,
    pub convention: String,
    #[serde(rename = "angles_radians")]
    pub angles: Vec<f64>,
    /// `m_i` with `φ_i = 2π·m_i/n`.
    #[serde(rename = "angles_as_multiples_of_2pi_over_n")]
    pub multiples: Vec<usize>,
}

impl PhaseSchedule {
    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    /// CSV with header `index,angle_radians`, one row per phase, 1-based index.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["index", "angle_radians"])
            .expect("in-memory write");
        for (i, a) in self.angles.iter().enumerate() {
            w.write_record([(i + 1).to_string(), a.to_string()])
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
    }
}

/// `φ_i = 2π·(i mod n)/n` for `i = 1..n`, i.e. the phases are the powers
/// `ω, ω², …, ωⁿ = 1` of `ω = e^{2πi/n}`.
pub fn monomial_phases(degree: usize) -> Result<PhaseSchedule> {
    if degree == 0 {
        return Err(Error::InvalidDegree(degree));
    }
    if degree.is_multiple_of(2) {
        return Err(Error::EvenDegree(degree));
    }
    let multiples: Vec<usize> = (1..=degree).map(|i| i % degree).collect();
    let angles = multiples
        .iter()
        .map(|&m| TAU * m as f64 / degree as f64)
        .collect();
    Ok(PhaseSchedule {
        degree,
        convention: CONVENTION.to_string(),
        angles,
        multiples,
    })
}

/// `T(k1, k2) = [[k1, k2], [k2, k1]]`
pub fn signal_matrix_numeric(k1: Complex64, k2: Complex64) -> Mat2<Complex64> {
    Mat2::new(k1, k2, k2, k1)
}

/// `S(e^{iφ}) = diag(e^{iφ}, e^{−iφ})`
pub fn phase_matrix_numeric(phi: f64) -> Mat2<Complex64> {
    let z = Complex64::from_polar(1.0, phi);
    Mat2::new(
        z,
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        z.conj(),
    )
}

/// Full product `Π_i T(k1, k2)·S(e^{iφ_i})`.
pub fn evaluate_qsp_general(s: &PhaseSchedule, k1: Complex64, k2: Complex64) -> Mat2<Complex64> {
    let t = signal_matrix_numeric(k1, k2);
    s.angles
        .iter()
        .fold(Mat2::<Complex64>::identity(), |acc, &phi| {
            let acc = &acc * &t;
            &acc * &phase_matrix_numeric(phi)
        })
}

/// Signal pair `(x, i√(1−x²))`, for which `T = e^{iθX}` with `x = cos θ`.
pub fn unit_circle_signal(x: f64) -> Result<(Complex64, Complex64)> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::OutOfDomain(x));
    }
    Ok((
        Complex64::new(x, 0.0),
        Complex64::new(0.0, (1.0 - x * x).sqrt()),
    ))
}

/// Top-left entry of the sequence with the unitary signal `T(x, i√(1−x²))`.
pub fn evaluate_qsp_unit_circle(s: &PhaseSchedule, x: f64) -> Result<Complex64> {
    let (k1, k2) = unit_circle_signal(x)?;
    Ok(evaluate_qsp_general(s, k1, k2).e11)
}

/// One numeric evaluation against the target `xⁿ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QspSample {
    pub x: f64,
    pub value: Complex64,
    pub target: f64,
    pub abs_error: f64,
}

/// Summary of a seeded residual sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub degree: usize,
    pub samples: usize,
    pub seed: u64,
    pub max_abs_error: f64,
    pub argmax_x: f64,
}

/// Draws `count` points uniformly from `[−1, 1]` with ChaCha8 seeded by `seed`
/// and evaluates the monomial schedule at each.
pub fn sample_sweep(degree: usize, count: usize, seed: u64) -> Result<Vec<QspSample>> {
    let schedule = monomial_phases(degree)?;
    if count == 0 {
        return Err(Error::EmptySweep);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let x: f64 = rng.gen_range(-1.0..=1.0);
            let value = evaluate_qsp_unit_circle(&schedule, x)?;
            let target = x.powi(degree as i32);
            let abs_error = (value - Complex64::new(target, 0.0)).norm();
            Ok(QspSample {
                x,
                value,
                target,
                abs_error,
            })
        })
        .collect()
}

/// Largest absolute error of a seeded sweep; ties broken by the total order on `x`.
pub fn residual_sweep(degree: usize, count: usize, seed: u64) -> Result<SweepReport> {
    let samples = sample_sweep(degree, count, seed)?;
    let worst = samples
        .iter()
        .max_by(|a, b| match a.abs_error.total_cmp(&b.abs_error) {
            Ordering::Equal => a.x.total_cmp(&b.x),
            o => o,
        })
        .expect("count >= 1");
    Ok(SweepReport {
        degree,
        samples: count,
        seed,
        max_abs_error: worst.abs_error,
        argmax_x: worst.x,
    })
}

/// The `deg_x = k` slice of the symbolic product next to its prediction from
/// the sign-function sum `y^{n−k} Σ_{f∈A(n−k)} φ(Π_i r^{[f(i)]} c^i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivativeCheck {
    pub degree: usize,
    pub k: usize,
    /// Terms of each product entry with `deg_x = k`.
    pub slice: Mat2<BivariatePoly>,
    /// `x^k y^{n−k}` times the summed representation matrices.
    pub predicted: Mat2<BivariatePoly>,
}

impl DerivativeCheck {
    pub fn passes(&self) -> bool {
        self.slice == self.predicted
    }

    /// `slice − predicted`; the zero matrix exactly when the check passes.
    pub fn difference(&self) -> Mat2<BivariatePoly> {
        &self.slice - &self.predicted
    }
}

/// Holds one symbolic product so that every `k` can be checked against it.
#[derive(Debug, Clone)]
pub struct DerivativeChecker {
    degree: usize,
    product: Mat2<BivariatePoly>,
}

impl DerivativeChecker {
    pub fn new(degree: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidDegree(degree));
        }
        if degree.is_multiple_of(2) {
            return Err(Error::EvenDegree(degree));
        }
        Ok(DerivativeChecker {
            degree,
            product: qsp_product_symbolic(degree)?,
        })
    }

    pub fn product(&self) -> &Mat2<BivariatePoly> {
        &self.product
    }

    /// Checks the slice for `0 ≤ k ≤ n`.
    pub fn check(&self, k: usize) -> Result<DerivativeCheck> {
        let n = self.degree;
        if k > n {
            return Err(Error::IndexOutOfRange {
                index: k,
                degree: n,
            });
        }
        let kk = k as u32;
        let slice = self.product.map(|p| {
            BivariatePoly::from_terms(
                n,
                p.terms()
                    .filter(|((dx, _), _)| *dx == kk)
                    .map(|(&m, c)| (m, c.clone())),
            )
            .expect("orders agree")
        });

        let mut sum = Mat2::<CyclotomicNumber>::zero(n)?;
        let swap = Mat2::<CyclotomicNumber>::swap(n)?;
        for f in enumerate_class(n, n - k)? {
            let g = normal_form_product(&f);
            let rot = phase_matrix(n, g.shift() as i64)?;
            let term = if g.refl() { &swap * &rot } else { rot };
            sum = &sum + &term;
        }
        let predicted = sum.map(|c| BivariatePoly::monomial(c.clone(), kk, (n - k) as u32));
        Ok(DerivativeCheck {
            degree: n,
            k,
            slice,
            predicted,
        })
    }
}

/// Compares the `deg_x = k` slice of the exact product with the sign-function sum.
pub fn derivative_cross_check(degree: usize, k: usize) -> Result<DerivativeCheck> {
    DerivativeChecker::new(degree)?.check(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn schedule_examples() {
        let s = monomial_phases(1).unwrap();
        assert_eq!(s.angles, vec![0.0]);
        assert_eq!(s.multiples, vec![0]);

        let s = monomial_phases(3).unwrap();
        assert_eq!(s.multiples, vec![1, 2, 0]);
        assert!((s.angles[0] - 2.0 * PI / 3.0).abs() < 1e-15);
        assert!((s.angles[1] - 4.0 * PI / 3.0).abs() < 1e-15);
        assert_eq!(s.angles[2], 0.0);

        assert_eq!(monomial_phases(4), Err(Error::EvenDegree(4)));
        assert_eq!(monomial_phases(0), Err(Error::InvalidDegree(0)));
    }

    #[test]
    fn unit_circle_examples() {
        let s = monomial_phases(3).unwrap();
        assert!((evaluate_qsp_unit_circle(&s, 1.0).unwrap() - 1.0).norm() < 1e-15);
        assert!(evaluate_qsp_unit_circle(&s, 0.0).unwrap().norm() < 1e-15);
        assert!((evaluate_qsp_unit_circle(&s, 0.5).unwrap() - 0.125).norm() < 1e-12);
        assert_eq!(
            evaluate_qsp_unit_circle(&s, 1.5),
            Err(Error::OutOfDomain(1.5))
        );
        assert!(evaluate_qsp_unit_circle(&s, f64::NAN).is_err());
    }

    #[test]
    fn general_examples() {
        let c = |re, im| Complex64::new(re, im);
        let s = monomial_phases(3).unwrap();
        assert!((evaluate_qsp_general(&s, c(2.0, 0.0), c(0.0, 0.0)).e11 - 8.0).norm() < 1e-12);
        assert!(
            evaluate_qsp_general(&s, c(0.0, 0.0), c(1.0, 0.0))
                .e11
                .norm()
                < 1e-12
        );
    }

    #[test]
    fn sweep_is_deterministic_and_rejects_bad_input() {
        let a = residual_sweep(3, 50, 42).unwrap();
        let b = residual_sweep(3, 50, 42).unwrap();
        assert_eq!(a, b);
        assert!(a.max_abs_error <= 1e-10);
        assert_eq!(residual_sweep(3, 0, 42), Err(Error::EmptySweep));
        assert_eq!(residual_sweep(6, 10, 42), Err(Error::EvenDegree(6)));
        assert!(residual_sweep(1, 100, 9).unwrap().max_abs_error <= 1e-15);
    }

    #[test]
    fn derivative_examples() {
        let top = derivative_cross_check(3, 3).unwrap();
        assert!(top.passes());
        assert!(top.slice.e11.is_monomial(3, 0));
        let bottom = derivative_cross_check(3, 0).unwrap();
        assert!(bottom.passes());
        assert!(bottom.slice.e11.is_zero());
        assert!(matches!(
            derivative_cross_check(3, 4),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert_eq!(derivative_cross_check(4, 0), Err(Error::EvenDegree(4)));
    }
}
