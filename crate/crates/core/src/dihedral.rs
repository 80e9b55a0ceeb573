//! Sign functions `Z_n → {−1, +1}`, the dihedral group `D_{2n}` acting on them,
//! the evaluation function Γ, and orbit sums under the two-dimensional
//! representation `c ↦ S(ω)`, `r ↦ X`.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use crate::cyclotomic::CyclotomicNumber;
use crate::error::{Error, Result};
use crate::polymat::{phase_matrix, Mat2};

/// Largest order accepted by the enumeration routines (masks are `u64`).
pub const MAX_ENUMERATION_ORDER: usize = 63;

/// An element of the multiplicative group `{+1, −1}`. `Plus < Minus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_bit(bit: bool) -> Sign {
        if bit {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_bit((self == Sign::Minus) != (rhs == Sign::Minus))
    }
}

/// The isomorphism `{+1, −1} → Z_2` with `[+1] = 0`, `[−1] = 1`.
pub fn sign_to_bit(s: Sign) -> u8 {
    match s {
        Sign::Plus => 0,
        Sign::Minus => 1,
    }
}

/// A function `f: Z_n → {−1, +1}`, stored as `f(0), …, f(n−1)`.
///
/// Ordering is lexicographic over the value vector with `+1 < −1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignFunction {
    values: Vec<Sign>,
}

impl SignFunction {
    pub fn new(values: Vec<Sign>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidOrder(0));
        }
        Ok(SignFunction { values })
    }

    pub fn from_ints(values: &[i64]) -> Result<Self> {
        let values = values
            .iter()
            .map(|&v| match v {
                1 => Ok(Sign::Plus),
                -1 => Ok(Sign::Minus),
                _ => Err(Error::Parse(format!("sign value must be ±1, got {v}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(values)
    }

    pub fn constant(order: usize, sign: Sign) -> Result<Self> {
        Self::new(vec![sign; order])
    }

    /// Bit `n−1−i` of `mask` set means `f(i) = −1`; ascending masks are then
    /// ascending in the lexicographic order.
    pub fn from_mask(order: usize, mask: u64) -> Result<Self> {
        if order > MAX_ENUMERATION_ORDER {
            return Err(Error::UnsupportedOrder(
                order,
                "bit-mask construction needs n <= 63",
            ));
        }
        Self::new(
            (0..order)
                .map(|i| Sign::from_bit(mask >> (order - 1 - i) & 1 == 1))
                .collect(),
        )
    }

    pub fn order(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Sign] {
        &self.values
    }

    /// Value at any integer via the periodic extension.
    pub fn at(&self, i: i64) -> Sign {
        self.values[i.rem_euclid(self.order() as i64) as usize]
    }

    /// `|f^{-1}(−1)|`
    pub fn minus_count(&self) -> usize {
        self.values.iter().filter(|&&s| s == Sign::Minus).count()
    }

    /// `Π_{i∈Z_n} f(i)`
    pub fn product(&self) -> Sign {
        self.values.iter().fold(Sign::Plus, |acc, &s| acc * s)
    }

    /// Membership in the even class `A_0` (product of all values is +1).
    pub fn is_even_class(&self) -> bool {
        self.product() == Sign::Plus
    }

    pub fn is_constant(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }

    /// `Π_{j=1}^{m} f(j)` for `m ≥ 1`, using the periodic extension.
    fn partial_product(&self, m: usize) -> Sign {
        (1..=m as i64).fold(Sign::Plus, |acc, j| acc * self.at(j))
    }

    fn same_order(&self, order: usize) -> Result<()> {
        if self.order() == order {
            Ok(())
        } else {
            Err(Error::OrderMismatch {
                left: order,
                right: self.order(),
            })
        }
    }
}

/// Written as a `+`/`-` string, index 0 first.
impl fmt::Display for SignFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.values {
            f.write_str(match s {
                Sign::Plus => "+",
                Sign::Minus => "-",
            })?;
        }
        Ok(())
    }
}

/// Accepts `+`, `-` and the Unicode minus sign `−`.
impl FromStr for SignFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let values = s
            .trim()
            .chars()
            .map(|c| match c {
                '+' => Ok(Sign::Plus),
                '-' | '\u{2212}' => Ok(Sign::Minus),
                _ => Err(Error::Parse(format!(
                    "unexpected character {c:?} in sign function"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(values)
    }
}

/// An element `r^refl · c^shift` of `D_{2n}` in normal form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DihedralElement {
    order: usize,
    refl: bool,
    shift: usize,
}

impl DihedralElement {
    pub fn new(order: usize, refl: bool, shift: i64) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidOrder(0));
        }
        Ok(DihedralElement {
            order,
            refl,
            shift: shift.rem_euclid(order as i64) as usize,
        })
    }

    pub fn identity(order: usize) -> Result<Self> {
        Self::new(order, false, 0)
    }

    /// `c^k`
    pub fn rotation(order: usize, k: i64) -> Result<Self> {
        Self::new(order, false, k)
    }

    /// `r`
    pub fn reflection(order: usize) -> Result<Self> {
        Self::new(order, true, 0)
    }

    /// All `2n` elements: rotations first, then `r·c^a`, shifts ascending.
    pub fn all(order: usize) -> Result<impl Iterator<Item = DihedralElement>> {
        Self::identity(order)?;
        Ok([false, true].into_iter().flat_map(move |refl| {
            (0..order).map(move |shift| DihedralElement { order, refl, shift })
        }))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn refl(&self) -> bool {
        self.refl
    }

    pub fn shift(&self) -> usize {
        self.shift
    }

    pub fn is_identity(&self) -> bool {
        !self.refl && self.shift == 0
    }

    /// `(r^{b1} c^{a1})(r^{b2} c^{a2}) = r^{b1+b2} c^{(−1)^{b2} a1 + a2}`,
    /// from the relation `c r = r c^{-1}`.
    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        if self.order != rhs.order {
            return Err(Error::OrderMismatch {
                left: self.order,
                right: rhs.order,
            });
        }
        let a1 = self.shift as i64;
        let a1 = if rhs.refl { -a1 } else { a1 };
        Self::new(self.order, self.refl != rhs.refl, a1 + rhs.shift as i64)
    }

    pub fn inverse(&self) -> Self {
        if self.refl {
            *self
        } else {
            DihedralElement {
                shift: (self.order - self.shift) % self.order,
                ..*self
            }
        }
    }
}

impl Mul for DihedralElement {
    type Output = DihedralElement;

    fn mul(self, rhs: DihedralElement) -> DihedralElement {
        self.checked_mul(&rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

/// Written as `r^b c^a`.
impl fmt::Display for DihedralElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r^{} c^{}", u8::from(self.refl), self.shift)
    }
}

impl DihedralElement {
    /// Parses the `r^b c^a` form; the order is not part of the text.
    pub fn parse(order: usize, s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected \"r^b c^a\", got {s:?}"));
        let (r, c) = s.trim().split_once(' ').ok_or_else(bad)?;
        let b: u8 = r
            .strip_prefix("r^")
            .and_then(|t| t.parse().ok())
            .ok_or_else(bad)?;
        let a: i64 = c
            .trim()
            .strip_prefix("c^")
            .and_then(|t| t.parse().ok())
            .ok_or_else(bad)?;
        if b > 1 {
            return Err(bad());
        }
        Self::new(order, b == 1, a)
    }
}

/// The evaluation function `Γ(f) = Σ_{i∈Z_n} i·Π_{k=1}^{i} f(k) mod n`.
pub fn gamma(f: &SignFunction) -> usize {
    let n = f.order() as i64;
    let mut partial = Sign::Plus;
    let mut total = 0i64;
    for i in 1..n {
        partial = partial * f.at(i);
        total += i * partial.value();
    }
    total.rem_euclid(n) as usize
}

/// `f⋆(i) = f(1 − i)`
pub fn star(f: &SignFunction) -> SignFunction {
    let values = (0..f.order() as i64).map(|i| f.at(1 - i)).collect();
    SignFunction { values }
}

/// The action `τ`: `τ(c^k) f = f ∘ c^{-k}`, `τ(r) f = f⋆`, extended to
/// `r^b c^a` as `τ(r)^b τ(c^a)`.
pub fn act(g: &DihedralElement, f: &SignFunction) -> Result<SignFunction> {
    f.same_order(g.order())?;
    let a = g.shift() as i64;
    let rotated = SignFunction {
        values: (0..f.order() as i64).map(|i| f.at(i - a)).collect(),
    };
    Ok(if g.refl() { star(&rotated) } else { rotated })
}

/// `F = Σ_{i∈Z_n} Π_{j=1}^{i} f(j)`, where the `i = 0` term is read as the
/// full product `Π_{j=1}^{n} f(j)`.
pub fn big_f(f: &SignFunction) -> i64 {
    let n = f.order();
    let head = f.partial_product(n).value();
    let mut partial = Sign::Plus;
    let mut total = head;
    for i in 1..n {
        partial = partial * f.at(i as i64);
        total += partial.value();
    }
    total
}

/// Normal form of `Π_{i=1}^{n} r^{[f(i)]} c^i`.
///
/// The reflection bit is `|f^{-1}(−1)| mod 2`. Pushing every `r` to the left
/// multiplies the exponent of factor `i` by `Π_{j>i} f(j)`; on the even class this
/// equals `Π_{j≤i} f(j)` and the rotation is `c^{Γ(f)}`, while off the even class
/// the two differ by a global sign and the rotation is `c^{−Γ(f)}`.
pub fn normal_form_product(f: &SignFunction) -> DihedralElement {
    let n = f.order();
    let g = gamma(f) as i64;
    let shift = if f.is_even_class() { g } else { -g };
    DihedralElement::new(n, f.minus_count() % 2 == 1, shift).expect("order is positive")
}

/// Left-to-right group multiplication of the factors `r^{[f(i)]} c^i`, `i = 1..n`.
pub fn interleaved_product(f: &SignFunction) -> DihedralElement {
    let n = f.order();
    (1..=n as i64).fold(
        DihedralElement::identity(n).expect("order is positive"),
        |acc, i| {
            let refl =
                DihedralElement::new(n, f.at(i) == Sign::Minus, 0).expect("order is positive");
            let rot = DihedralElement::rotation(n, i).expect("order is positive");
            acc * refl * rot
        },
    )
}

/// Iterator over `A(k)`, the sign functions with exactly `k` values equal to −1,
/// in ascending lexicographic order.
#[derive(Debug, Clone)]
pub struct ClassIter {
    order: usize,
    next: Option<u64>,
}

impl Iterator for ClassIter {
    type Item = SignFunction;

    fn next(&mut self) -> Option<SignFunction> {
        let mask = self.next?;
        // Gosper's hack: next larger integer with the same popcount.
        self.next = if mask == 0 {
            None
        } else {
            let low = mask & mask.wrapping_neg();
            let ripple = mask + low;
            let succ = (((ripple ^ mask) >> 2) / low) | ripple;
            (succ >> self.order == 0).then_some(succ)
        };
        Some(SignFunction::from_mask(self.order, mask).expect("order checked at construction"))
    }
}

/// Enumerates `A(k)`; empty when `k > n`.
pub fn enumerate_class(order: usize, k: usize) -> Result<ClassIter> {
    if order == 0 {
        return Err(Error::InvalidOrder(0));
    }
    if order > MAX_ENUMERATION_ORDER {
        return Err(Error::UnsupportedOrder(order, "enumeration needs n <= 63"));
    }
    let next = (k <= order).then(|| if k == 0 { 0 } else { u64::MAX >> (64 - k) });
    Ok(ClassIter { order, next })
}

/// All `2^n` sign functions in lexicographic order.
pub fn enumerate_all(order: usize) -> Result<impl Iterator<Item = SignFunction>> {
    if order == 0 {
        return Err(Error::InvalidOrder(0));
    }
    if order > MAX_ENUMERATION_ORDER {
        return Err(Error::UnsupportedOrder(order, "enumeration needs n <= 63"));
    }
    Ok((0..1u64 << order).map(move |m| SignFunction::from_mask(order, m).expect("order checked")))
}

/// The even class `A_0`, in lexicographic order.
pub fn enumerate_even_class(order: usize) -> Result<impl Iterator<Item = SignFunction>> {
    Ok(enumerate_all(order)?.filter(SignFunction::is_even_class))
}

/// `{ τ(g) f : g ∈ D_{2n} }`
pub fn orbit(f: &SignFunction) -> BTreeSet<SignFunction> {
    DihedralElement::all(f.order())
        .expect("order is positive")
        .map(|g| act(&g, f).expect("orders agree"))
        .collect()
}

/// `φ(r^b c^a) = X^b · S(ω^a)` with `ω = e^{2πi/n}`.
pub fn rep_phi(g: &DihedralElement) -> Result<Mat2<CyclotomicNumber>> {
    let n = g.order();
    if n < 3 {
        return Err(Error::UnsupportedOrder(
            n,
            "the 2-dimensional representation is reducible for n < 3",
        ));
    }
    let rot = phase_matrix(n, g.shift() as i64)?;
    Ok(if g.refl() {
        &Mat2::swap(n)? * &rot
    } else {
        rot
    })
}

/// `Σ_{g∈O(f)} φ(Π_{i=1}^{n} r^{[g(i)]} c^i)`, for odd `n ≥ 3`.
pub fn orbit_sum(f: &SignFunction) -> Result<Mat2<CyclotomicNumber>> {
    let n = f.order();
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::UnsupportedOrder(
            n,
            "orbit sums vanish only for odd n >= 3",
        ));
    }
    orbit(f).iter().try_fold(Mat2::zero(n)?, |acc, g| {
        Ok(&acc + &rep_phi(&normal_form_product(g))?)
    })
}

/// Per-identity results of [`check_lemma2`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lemma2Report {
    /// `Γ(f⋆) ≡ −Γ(f)`
    pub star_negates: bool,
    /// `Γ(τ(c^k) f) ≡ (Γ(f) + F·k)·Π_{j=1}^{n−k} f(j)`; `None` for even `n`.
    pub shift_law: Option<bool>,
    /// `Γ(τ(c^k) f⋆) ≡ −Γ(τ(c^{−k}) f)`
    pub reflected_shift: bool,
}

impl Lemma2Report {
    pub fn all_hold(&self) -> bool {
        self.star_negates && self.shift_law != Some(false) && self.reflected_shift
    }
}

/// Evaluates both sides of the three Γ identities for `f ∈ A_0` and shift `k`.
pub fn check_lemma2(f: &SignFunction, k: usize) -> Result<Lemma2Report> {
    if !f.is_even_class() {
        return Err(Error::NotEvenClass(f.to_string()));
    }
    let n = f.order();
    let ni = n as i64;
    let k = k % n;
    let modn = |v: i64| v.rem_euclid(ni);
    let g = gamma(f) as i64;
    let ck = DihedralElement::rotation(n, k as i64)?;
    let c_minus_k = DihedralElement::rotation(n, -(k as i64))?;

    let star_negates = modn(gamma(&star(f)) as i64) == modn(-g);

    let shift_law = (n % 2 == 1).then(|| {
        let lhs = gamma(&act(&ck, f).expect("orders agree")) as i64;
        let rhs = (g + big_f(f) * k as i64) * f.partial_product(n - k).value();
        lhs == modn(rhs)
    });

    let lhs = gamma(&act(&ck, &star(f))?) as i64;
    let rhs = -(gamma(&act(&c_minus_k, f)?) as i64);
    let reflected_shift = lhs == modn(rhs);

    Ok(Lemma2Report {
        star_negates,
        shift_law,
        reflected_shift,
    })
}
