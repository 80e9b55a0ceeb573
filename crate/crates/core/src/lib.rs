//! Exact phase schedules for odd-degree monomials in single-qubit quantum
//! signal processing.
//!
//! For odd `n`, interleaving the signal matrix `T(k1, k2) = [[k1, k2], [k2, k1]]`
//! with the phases `S(ω), S(ω²), …, S(ωⁿ)`, `ω = e^{2πi/n}`, yields a product whose
//! top-left entry is exactly `k1ⁿ`. This crate produces that schedule and checks
//! the identity three ways: exactly over `Z[ω]` ([`polymat`]), in floating point
//! ([`qsp`]), and through the dihedral-group bookkeeping behind it ([`dihedral`]).

pub mod cyclotomic;
pub mod dihedral;
pub mod error;
pub mod polymat;
pub mod qsp;

pub use cyclotomic::{cyclotomic_polynomial, CyclotomicNumber, IntPoly};
pub use dihedral::{DihedralElement, Sign, SignFunction};
pub use error::{Error, Result};
pub use polymat::{BivariatePoly, Mat2, TheoremVerdict};
pub use qsp::{PhaseSchedule, QspSample, SweepReport};
