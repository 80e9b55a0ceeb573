//! Exact arithmetic in the ring of cyclotomic integers `Z[ω]`, `ω = e^{2πi/n}`.
//!
//! Elements are stored in the power basis `1, ω, …, ω^{φ(n)-1}` and kept reduced
//! modulo the n-th cyclotomic polynomial `Φ_n`, so two elements are equal exactly
//! when their coefficient vectors are equal.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Dense univariate polynomial with arbitrary-precision integer coefficients.
///
/// `coeffs[i]` is the coefficient of `t^i`. The highest stored coefficient is
/// never zero; the zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly {
            coeffs: vec![BigInt::one()],
        }
    }

    /// `c · t^deg`
    pub fn monomial(deg: usize, c: BigInt) -> Self {
        let mut coeffs = vec![BigInt::zero(); deg + 1];
        coeffs[deg] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff().is_some_and(One::is_one)
    }

    /// Quotient and remainder of division by a monic polynomial.
    ///
    /// Returns `None` when `divisor` is not monic; over `Z` the division is then
    /// not always defined.
    pub fn div_rem_monic(&self, divisor: &IntPoly) -> Option<(IntPoly, IntPoly)> {
        if !divisor.is_monic() {
            return None;
        }
        let d = divisor.coeffs.len() - 1;
        if self.coeffs.len() <= d {
            return Some((IntPoly::zero(), self.clone()));
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); rem.len() - d];
        for i in (d..rem.len()).rev() {
            let c = std::mem::take(&mut rem[i]);
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs[..d].iter().enumerate() {
                rem[i - d + j] -= &c * dc;
            }
            quot[i - d] = c;
        }
        rem.truncate(d);
        Some((IntPoly::new(quot), IntPoly::new(rem)))
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;

    fn add(self, rhs: &IntPoly) -> IntPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![BigInt::zero(); len];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            out[i] += c;
        }
        IntPoly::new(out)
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;

    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![BigInt::zero(); len];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            out[i] -= c;
        }
        IntPoly::new(out)
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;

    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        IntPoly::new(convolve(&self.coeffs, &rhs.coeffs))
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (deg, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            match (deg, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "t")?,
                (1, false) => write!(f, "{mag}*t")?,
                (_, true) => write!(f, "t^{deg}")?,
                (_, false) => write!(f, "{mag}*t^{deg}")?,
            }
        }
        Ok(())
    }
}

fn convolve(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

type PhiCache = RwLock<HashMap<usize, Arc<IntPoly>>>;

fn phi_cache() -> &'static PhiCache {
    static CACHE: OnceLock<PhiCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Cached `Φ_n`; `n` must be at least 1.
fn phi(n: usize) -> Arc<IntPoly> {
    debug_assert!(n >= 1);
    if let Some(p) = phi_cache().read().expect("phi cache poisoned").get(&n) {
        return Arc::clone(p);
    }
    // t^n - 1 divided by Φ_d for every proper divisor d of n.
    let mut denom = IntPoly::one();
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        denom = &denom * &phi(d);
    }
    let numer = &IntPoly::monomial(n, BigInt::one()) - &IntPoly::one();
    let (quot, rem) = numer
        .div_rem_monic(&denom)
        .expect("products of cyclotomic polynomials are monic");
    assert!(
        rem.is_zero(),
        "t^{n} - 1 not divisible by lower cyclotomic factors"
    );
    let quot = Arc::new(quot);
    phi_cache()
        .write()
        .expect("phi cache poisoned")
        .entry(n)
        .or_insert(quot)
        .clone()
}

/// The n-th cyclotomic polynomial `Φ_n(t)`.
pub fn cyclotomic_polynomial(n: usize) -> Result<IntPoly> {
    if n == 0 {
        return Err(Error::InvalidOrder(n));
    }
    Ok(phi(n).as_ref().clone())
}

/// Euler's totient, computed as `deg Φ_n`.
pub fn totient(n: usize) -> Result<usize> {
    if n == 0 {
        return Err(Error::InvalidOrder(n));
    }
    Ok(phi(n).degree().expect("Φ_n is nonzero"))
}

/// An element of `Z[ω]` with `ω = e^{2πi/n}`, `n = order`.
///
/// `coeffs` has exactly `φ(n)` entries and represents `Σ coeffs[i] ω^i` reduced
/// modulo `Φ_n`. Binary operators panic on mismatched orders; the `checked_*`
/// methods report [`Error::OrderMismatch`] instead.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicNumber {
    order: usize,
    coeffs: Vec<BigInt>,
}

impl CyclotomicNumber {
    /// Reduces an arbitrary integer combination `Σ raw[i] ω^i`.
    pub fn from_coeffs<I, C>(order: usize, raw: I) -> Result<Self>
    where
        I: IntoIterator<Item = C>,
        C: Into<BigInt>,
    {
        if order == 0 {
            return Err(Error::InvalidOrder(order));
        }
        let raw: Vec<BigInt> = raw.into_iter().map(Into::into).collect();
        Ok(Self::reduce(order, raw))
    }

    pub fn zero(order: usize) -> Result<Self> {
        Self::from_int(order, 0)
    }

    pub fn one(order: usize) -> Result<Self> {
        Self::from_int(order, 1)
    }

    pub fn from_int(order: usize, value: impl Into<BigInt>) -> Result<Self> {
        Self::from_coeffs(order, [value.into()])
    }

    /// `ω^{k mod n}` for any integer `k`.
    pub fn from_power(order: usize, k: i64) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidOrder(order));
        }
        let e = k.rem_euclid(order as i64) as usize;
        Ok(Self::reduce(
            order,
            IntPoly::monomial(e, BigInt::one()).coeffs,
        ))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Coefficients over the power basis `1, ω, …, ω^{φ(n)-1}`.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs
            .split_first()
            .is_some_and(|(c0, rest)| c0.is_one() && rest.iter().all(Zero::is_zero))
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        self.same_order(rhs)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CyclotomicNumber {
            order: self.order,
            coeffs,
        })
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        self.same_order(rhs)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(CyclotomicNumber {
            order: self.order,
            coeffs,
        })
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        self.same_order(rhs)?;
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(self.order);
        }
        Ok(Self::reduce(
            self.order,
            convolve(&self.coeffs, &rhs.coeffs),
        ))
    }

    /// Multiplication by `ω^k`, done as an index shift before reduction.
    pub fn mul_power(&self, k: i64) -> Self {
        let n = self.order;
        let shift = k.rem_euclid(n as i64) as usize;
        let mut raw = vec![BigInt::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            raw[(i + shift) % n] += c;
        }
        Self::reduce(n, raw)
    }

    /// Complex conjugation, the ring automorphism `ω ↦ ω^{-1} = ω^{n-1}`.
    pub fn conj(&self) -> Self {
        let n = self.order;
        let mut raw = vec![BigInt::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            raw[(n - i) % n] += c;
        }
        Self::reduce(n, raw)
    }

    /// Floating-point value `Σ c_i e^{2πi·i/n}`.
    ///
    /// Each term carries a relative rounding error of a few ulps, so the absolute
    /// error is bounded by roughly `(Σ|c_i|)·4ε`.
    pub fn to_complex(&self) -> Complex64 {
        let n = self.order as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let theta = std::f64::consts::TAU * i as f64 / n;
                let c = c.to_f64().unwrap_or(f64::NAN);
                Complex64::new(c * theta.cos(), c * theta.sin())
            })
            .sum()
    }

    /// Parses the integer-vector form produced by `Display`, e.g. `[1,0,-1]`.
    pub fn parse_vector(order: usize, s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("expected [..], got {s:?}")))?;
        let coeffs = inner
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<BigInt>()
                    .map_err(|e| Error::Parse(format!("bad integer {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let expected = totient(order)?;
        if coeffs.len() != expected {
            return Err(Error::Parse(format!(
                "order {order} needs {expected} coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(CyclotomicNumber { order, coeffs })
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

    fn reduce(order: usize, mut raw: Vec<BigInt>) -> Self {
        let phi = phi(order);
        let d = phi.coeffs.len() - 1;
        // t^n ≡ 1 modulo Φ_n, so fold high powers first.
        if raw.len() > order {
            let tail = raw.split_off(order);
            for (i, c) in tail.into_iter().enumerate() {
                raw[i % order] += c;
            }
        }
        for i in (d..raw.len()).rev() {
            let c = std::mem::take(&mut raw[i]);
            if c.is_zero() {
                continue;
            }
            for (j, pc) in phi.coeffs[..d].iter().enumerate() {
                if !pc.is_zero() {
                    raw[i - d + j] -= &c * pc;
                }
            }
        }
        raw.resize(d, BigInt::zero());
        CyclotomicNumber { order, coeffs: raw }
    }
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&CyclotomicNumber> for &CyclotomicNumber {
            type Output = CyclotomicNumber;

            fn $method(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }

        impl $trait for CyclotomicNumber {
            type Output = CyclotomicNumber;

            fn $method(self, rhs: CyclotomicNumber) -> CyclotomicNumber {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;

    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CyclotomicNumber {
    type Output = CyclotomicNumber;

    fn neg(self) -> CyclotomicNumber {
        -&self
    }
}
