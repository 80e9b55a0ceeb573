//! Sparse bivariate polynomials over `Z[ω]`, 2×2 matrices over a generic ring,
//! and the exact symbolic QSP product `Π_{i=1..n} T(x, y)·S(ω^i)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::cyclotomic::CyclotomicNumber;
use crate::error::{Error, Result};

/// Exponent pair `(deg_x, deg_y)`.
pub type Monomial = (u32, u32);

/// Polynomial in `x`, `y` with coefficients in `Z[ω]` of a fixed order.
///
/// Terms are kept in a `BTreeMap` so iteration is sorted by `(deg_x, deg_y)`,
/// and zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BivariatePoly {
    order: usize,
    terms: BTreeMap<Monomial, CyclotomicNumber>,
}

impl BivariatePoly {
    pub fn zero(order: usize) -> Result<Self> {
        CyclotomicNumber::zero(order)?;
        Ok(BivariatePoly {
            order,
            terms: BTreeMap::new(),
        })
    }

    /// `coeff · x^dx · y^dy`
    pub fn monomial(coeff: CyclotomicNumber, dx: u32, dy: u32) -> Self {
        let mut terms = BTreeMap::new();
        let order = coeff.order();
        if !coeff.is_zero() {
            terms.insert((dx, dy), coeff);
        }
        BivariatePoly { order, terms }
    }

    pub fn constant(coeff: CyclotomicNumber) -> Self {
        Self::monomial(coeff, 0, 0)
    }

    pub fn one(order: usize) -> Result<Self> {
        Ok(Self::constant(CyclotomicNumber::one(order)?))
    }

    pub fn x(order: usize) -> Result<Self> {
        Ok(Self::monomial(CyclotomicNumber::one(order)?, 1, 0))
    }

    pub fn y(order: usize) -> Result<Self> {
        Ok(Self::monomial(CyclotomicNumber::one(order)?, 0, 1))
    }

    /// Builds a polynomial from `(monomial, coefficient)` pairs, summing repeats.
    pub fn from_terms<I>(order: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, CyclotomicNumber)>,
    {
        let mut out = Self::zero(order)?;
        for (mono, c) in terms {
            out.add_term(mono, c)?;
        }
        Ok(out)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in `(deg_x, deg_y)` order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &CyclotomicNumber)> {
        self.terms.iter()
    }

    pub fn coeff(&self, dx: u32, dy: u32) -> Option<&CyclotomicNumber> {
        self.terms.get(&(dx, dy))
    }

    /// Largest `deg_x + deg_y`, or `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(a, b)| a + b).max()
    }

    pub fn is_monomial(&self, dx: u32, dy: u32) -> bool {
        self.terms.len() == 1 && self.coeff(dx, dy).is_some_and(CyclotomicNumber::is_one)
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        self.same_order(rhs)?;
        let mut out = self.clone();
        for (&mono, c) in &rhs.terms {
            out.add_term(mono, c.clone())?;
        }
        Ok(out)
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        self.checked_add(&-rhs)
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        self.same_order(rhs)?;
        let mut out = Self::zero(self.order)?;
        for (&(ax, ay), a) in &self.terms {
            for (&(bx, by), b) in &rhs.terms {
                out.add_term((ax + bx, ay + by), a.checked_mul(b)?)?;
            }
        }
        Ok(out)
    }

    /// Complex value at `(x, y)`, with coefficients mapped through
    /// [`CyclotomicNumber::to_complex`].
    pub fn evaluate(&self, x: Complex64, y: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|(&(dx, dy), c)| c.to_complex() * x.powu(dx) * y.powu(dy))
            .sum()
    }

    /// Parses the canonical text form written by `Display`.
    pub fn parse(order: usize, s: &str) -> Result<Self> {
        let s = s.trim();
        let mut out = Self::zero(order)?;
        if s == "0" {
            return Ok(out);
        }
        for term in s.split(" + ") {
            let (vector, rest) = term
                .trim()
                .split_once(']')
                .ok_or_else(|| Error::Parse(format!("missing coefficient in {term:?}")))?;
            let coeff = CyclotomicNumber::parse_vector(order, &format!("{vector}]"))?;
            let mut parts = rest.split_whitespace();
            let dx = parse_exponent(parts.next(), "x^")?;
            let dy = parse_exponent(parts.next(), "y^")?;
            if parts.next().is_some() || coeff.is_zero() || out.terms.contains_key(&(dx, dy)) {
                return Err(Error::Parse(format!("non-canonical term {term:?}")));
            }
            out.terms.insert((dx, dy), coeff);
        }
        Ok(out)
    }

    fn add_term(&mut self, mono: Monomial, c: CyclotomicNumber) -> Result<()> {
        if c.order() != self.order {
            return Err(Error::OrderMismatch {
                left: self.order,
                right: c.order(),
            });
        }
        if c.is_zero() {
            return Ok(());
        }
        match self.terms.remove(&mono) {
            Some(prev) => {
                let sum = prev.checked_add(&c)?;
                if !sum.is_zero() {
                    self.terms.insert(mono, sum);
                }
            }
            None => {
                self.terms.insert(mono, c);
            }
        }
        Ok(())
    }

    fn same_order(&self, rhs: &Self) -> Result<()> {
        if self.order == rhs.order {
            Ok(())
        } else {
            Err(Error::OrderMismatch {
                left: self.order,
                right: rhs.order,
            })
        }
    }
}

fn parse_exponent(token: Option<&str>, prefix: &str) -> Result<u32> {
    token
        .and_then(|t| t.strip_prefix(prefix))
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse(format!("expected {prefix}<int>, got {token:?}")))
}

/// Canonical witness text: `[c_0,c_1,…] x^a y^b` terms joined by ` + `, sorted
/// by `(a, b)`, coefficients over the `ω`-power basis. The zero polynomial is `0`.
impl fmt::Display for BivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, ((dx, dy), c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c} x^{dx} y^{dy}")?;
        }
        Ok(())
    }
}

macro_rules! forward_poly_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&BivariatePoly> for &BivariatePoly {
            type Output = BivariatePoly;

            fn $method(self, rhs: &BivariatePoly) -> BivariatePoly {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }

        impl $trait for BivariatePoly {
            type Output = BivariatePoly;

            fn $method(self, rhs: BivariatePoly) -> BivariatePoly {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_poly_binop!(Add, add, checked_add);
forward_poly_binop!(Sub, sub, checked_sub);
forward_poly_binop!(Mul, mul, checked_mul);

impl Neg for &BivariatePoly {
    type Output = BivariatePoly;

    fn neg(self) -> BivariatePoly {
        BivariatePoly {
            order: self.order,
            terms: self.terms.iter().map(|(&m, c)| (m, -c)).collect(),
        }
    }
}

impl Neg for BivariatePoly {
    type Output = BivariatePoly;

    fn neg(self) -> BivariatePoly {
        -&self
    }
}

/// A 2×2 matrix `[[e11, e12], [e21, e22]]` over any ring whose references multiply.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat2<R> {
    pub e11: R,
    pub e12: R,
    pub e21: R,
    pub e22: R,
}

impl<R> Mat2<R> {
    pub fn new(e11: R, e12: R, e21: R, e22: R) -> Self {
        Mat2 { e11, e12, e21, e22 }
    }

    pub fn map<S>(&self, mut f: impl FnMut(&R) -> S) -> Mat2<S> {
        Mat2::new(f(&self.e11), f(&self.e12), f(&self.e21), f(&self.e22))
    }

    pub fn entries(&self) -> [&R; 4] {
        [&self.e11, &self.e12, &self.e21, &self.e22]
    }

    pub fn try_map<S, E>(
        &self,
        mut f: impl FnMut(&R) -> std::result::Result<S, E>,
    ) -> std::result::Result<Mat2<S>, E> {
        Ok(Mat2::new(
            f(&self.e11)?,
            f(&self.e12)?,
            f(&self.e21)?,
            f(&self.e22)?,
        ))
    }
}

impl<R: Clone> Mat2<R> {
    pub fn transpose(&self) -> Self {
        Mat2::new(
            self.e11.clone(),
            self.e21.clone(),
            self.e12.clone(),
            self.e22.clone(),
        )
    }
}

impl<'a, R> Mul<&'a Mat2<R>> for &'a Mat2<R>
where
    &'a R: Mul<&'a R, Output = R>,
    R: Add<Output = R>,
{
    type Output = Mat2<R>;

    fn mul(self, rhs: &'a Mat2<R>) -> Mat2<R> {
        Mat2::new(
            &self.e11 * &rhs.e11 + &self.e12 * &rhs.e21,
            &self.e11 * &rhs.e12 + &self.e12 * &rhs.e22,
            &self.e21 * &rhs.e11 + &self.e22 * &rhs.e21,
            &self.e21 * &rhs.e12 + &self.e22 * &rhs.e22,
        )
    }
}

impl<'a, R> Add<&'a Mat2<R>> for &'a Mat2<R>
where
    &'a R: Add<&'a R, Output = R>,
{
    type Output = Mat2<R>;

    fn add(self, rhs: &'a Mat2<R>) -> Mat2<R> {
        Mat2::new(
            &self.e11 + &rhs.e11,
            &self.e12 + &rhs.e12,
            &self.e21 + &rhs.e21,
            &self.e22 + &rhs.e22,
        )
    }
}

impl<'a, R> Sub<&'a Mat2<R>> for &'a Mat2<R>
where
    &'a R: Sub<&'a R, Output = R>,
{
    type Output = Mat2<R>;

    fn sub(self, rhs: &'a Mat2<R>) -> Mat2<R> {
        Mat2::new(
            &self.e11 - &rhs.e11,
            &self.e12 - &rhs.e12,
            &self.e21 - &rhs.e21,
            &self.e22 - &rhs.e22,
        )
    }
}

impl Mat2<CyclotomicNumber> {
    pub fn identity(order: usize) -> Result<Self> {
        let (one, zero) = (
            CyclotomicNumber::one(order)?,
            CyclotomicNumber::zero(order)?,
        );
        Ok(Mat2::new(one.clone(), zero.clone(), zero, one))
    }

    pub fn zero(order: usize) -> Result<Self> {
        let zero = CyclotomicNumber::zero(order)?;
        Ok(Mat2::new(zero.clone(), zero.clone(), zero.clone(), zero))
    }

    /// The swap matrix `X = [[0, 1], [1, 0]]`.
    pub fn swap(order: usize) -> Result<Self> {
        let (one, zero) = (
            CyclotomicNumber::one(order)?,
            CyclotomicNumber::zero(order)?,
        );
        Ok(Mat2::new(zero.clone(), one.clone(), one, zero))
    }

    pub fn order(&self) -> usize {
        self.e11.order()
    }

    pub fn is_zero(&self) -> bool {
        self.entries().iter().all(|c| c.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.e11.is_one() && self.e22.is_one() && self.e12.is_zero() && self.e21.is_zero()
    }

    pub fn conj_transpose(&self) -> Self {
        Mat2::new(
            self.e11.conj(),
            self.e21.conj(),
            self.e12.conj(),
            self.e22.conj(),
        )
    }

    pub fn to_complex(&self) -> Mat2<Complex64> {
        self.map(CyclotomicNumber::to_complex)
    }

    /// Embeds each entry as a constant polynomial.
    pub fn to_poly(&self) -> Mat2<BivariatePoly> {
        self.map(|c| BivariatePoly::constant(c.clone()))
    }
}

impl Mat2<BivariatePoly> {
    pub fn evaluate(&self, x: Complex64, y: Complex64) -> Mat2<Complex64> {
        self.map(|p| p.evaluate(x, y))
    }
}

impl Mat2<Complex64> {
    pub fn identity() -> Self {
        let (one, zero) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        Mat2::new(one, zero, zero, one)
    }

    pub fn det(&self) -> Complex64 {
        self.e11 * self.e22 - self.e12 * self.e21
    }

    pub fn adjoint(&self) -> Self {
        Mat2::new(
            self.e11.conj(),
            self.e21.conj(),
            self.e12.conj(),
            self.e22.conj(),
        )
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let d = self - other;
        d.entries().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Entrywise distance of `U·U†` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        (self * &self.adjoint()).max_abs_diff(&Self::identity())
    }
}

/// Signal matrix `T(x, y) = [[x, y], [y, x]]` with order-`n` coefficients.
pub fn signal_matrix_symbolic(order: usize) -> Result<Mat2<BivariatePoly>> {
    let (x, y) = (BivariatePoly::x(order)?, BivariatePoly::y(order)?);
    Ok(Mat2::new(x.clone(), y.clone(), y, x))
}

/// Phase matrix `S(ω^i) = diag(ω^i, ω^{-i})`.
pub fn phase_matrix(order: usize, i: i64) -> Result<Mat2<CyclotomicNumber>> {
    let zero = CyclotomicNumber::zero(order)?;
    Ok(Mat2::new(
        CyclotomicNumber::from_power(order, i)?,
        zero.clone(),
        zero,
        CyclotomicNumber::from_power(order, -i)?,
    ))
}

/// `Π_{i=1..n} T·S(ω^i)` as a strict left-to-right fold over the factors
/// `T, S(ω), T, S(ω²), …, T, S(ωⁿ)`. Since `S(ωⁿ) = Id` the last factor is trivial.
pub fn qsp_product_symbolic(order: usize) -> Result<Mat2<BivariatePoly>> {
    let t = signal_matrix_symbolic(order)?;
    let mut acc = t.clone();
    for i in 1..=order {
        if i > 1 {
            acc = &acc * &t;
        }
        let s = phase_matrix(order, i as i64)?.to_poly();
        acc = &acc * &s;
    }
    Ok(acc)
}

/// Slice of `p` with `deg_x = k`, keyed by `deg_y`.
///
/// The k-th `x`-derivative at `x = 0` is `k!` times this slice.
pub fn coefficient_of_x(p: &BivariatePoly, k: u32) -> BTreeMap<u32, CyclotomicNumber> {
    p.terms()
        .filter(|((dx, _), _)| *dx == k)
        .map(|(&(_, dy), c)| (dy, c.clone()))
        .collect()
}

/// Outcome of checking that the top-left entry of the product is exactly `xⁿ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TheoremVerdict {
    Holds,
    /// The full top-left polynomial, which differs from `xⁿ`.
    Fails {
        witness: BivariatePoly,
    },
}

impl TheoremVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, TheoremVerdict::Holds)
    }
}

pub fn verify_theorem(order: usize) -> Result<TheoremVerdict> {
    let e11 = qsp_product_symbolic(order)?.e11;
    if e11.is_monomial(order as u32, 0) {
        Ok(TheoremVerdict::Holds)
    } else {
        Ok(TheoremVerdict::Fails { witness: e11 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(order: usize) -> CyclotomicNumber {
        CyclotomicNumber::one(order).unwrap()
    }

    #[test]
    fn signal_matrix_shape() {
        for n in [1, 3, 8] {
            let t = signal_matrix_symbolic(n).unwrap();
            assert_eq!(t.e11, BivariatePoly::x(n).unwrap());
            assert_eq!(t.e12, BivariatePoly::y(n).unwrap());
            assert_eq!(t.e11, t.e22);
            assert_eq!(t.e12, t.e21);
            assert_eq!(t.e11.order(), n);
        }
    }

    #[test]
    fn phase_matrix_examples() {
        for n in 1..6 {
            assert!(phase_matrix(n, 0).unwrap().is_identity());
        }
        let s = phase_matrix(2, 1).unwrap();
        let minus_one = -unit(2);
        assert_eq!(
            s,
            Mat2::new(
                minus_one.clone(),
                CyclotomicNumber::zero(2).unwrap(),
                CyclotomicNumber::zero(2).unwrap(),
                minus_one
            )
        );
        let s = phase_matrix(4, 1).unwrap();
        assert_eq!(s.e11, CyclotomicNumber::from_power(4, 1).unwrap());
        assert_eq!(s.e22, CyclotomicNumber::from_power(4, 3).unwrap());
    }

    #[test]
    fn product_small_orders() {
        let p1 = qsp_product_symbolic(1).unwrap();
        assert_eq!(p1, signal_matrix_symbolic(1).unwrap());

        let e11 = qsp_product_symbolic(2).unwrap().e11;
        let expected =
            BivariatePoly::from_terms(2, [((2, 0), -unit(2)), ((0, 2), -unit(2))]).unwrap();
        assert_eq!(e11, expected);

        assert!(qsp_product_symbolic(3).unwrap().e11.is_monomial(3, 0));
    }

    #[test]
    fn coefficient_slices() {
        let x3 = BivariatePoly::monomial(unit(3), 3, 0);
        assert_eq!(coefficient_of_x(&x3, 3), BTreeMap::from([(0, unit(3))]));
        assert!(coefficient_of_x(&x3, 1).is_empty());

        let e11 = qsp_product_symbolic(2).unwrap().e11;
        assert_eq!(coefficient_of_x(&e11, 0), BTreeMap::from([(2, -unit(2))]));
    }

    #[test]
    fn theorem_verdicts() {
        assert!(verify_theorem(1).unwrap().holds());
        assert!(verify_theorem(5).unwrap().holds());
        match verify_theorem(2).unwrap() {
            TheoremVerdict::Fails { witness } => {
                assert_eq!(witness.to_string(), "[-1] x^0 y^2 + [-1] x^2 y^0");
            }
            TheoremVerdict::Holds => panic!("n = 2 must fail"),
        }
        assert_eq!(verify_theorem(0), Err(Error::InvalidOrder(0)));
    }

    #[test]
    fn sparse_form_drops_cancelled_terms() {
        let x = BivariatePoly::x(5).unwrap();
        assert!((&x - &x).is_zero());
        assert_eq!((&x - &x).len(), 0);
    }

    #[test]
    fn witness_text_round_trip() {
        let p = qsp_product_symbolic(6).unwrap().e12;
        let back = BivariatePoly::parse(6, &p.to_string()).unwrap();
        assert_eq!(back, p);
        assert_eq!(
            BivariatePoly::parse(6, "0").unwrap(),
            BivariatePoly::zero(6).unwrap()
        );
        assert!(BivariatePoly::parse(6, "[1,0] x^1").is_err());
        assert!(BivariatePoly::parse(6, "[0,0] x^1 y^0").is_err());
    }
}
