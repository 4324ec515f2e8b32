//! Reals extended by `±∞`.
//!
//! Risks and uncertainties can be infinite (continuous entropies, log loss on
//! a zero-probability action). Arithmetic is total except for `∞ − ∞` and
//! `∞ + (−∞)`, which are reported as [`Error::Indeterminate`].

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    PosInf,
    NegInf,
}

impl ExtendedReal {
    pub const ZERO: ExtendedReal = ExtendedReal::Finite(0.0);

    /// Maps `±inf` to the infinite variants. NaN is rejected.
    pub fn from_f64(value: f64) -> Result<Self> {
        if value.is_nan() {
            Err(Error::Indeterminate("NaN value".into()))
        } else if value == f64::INFINITY {
            Ok(ExtendedReal::PosInf)
        } else if value == f64::NEG_INFINITY {
            Ok(ExtendedReal::NegInf)
        } else {
            Ok(ExtendedReal::Finite(value))
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    /// Lossy conversion back to `f64`, with infinities as IEEE infinities.
    pub fn to_f64(self) -> f64 {
        match self {
            ExtendedReal::Finite(v) => v,
            ExtendedReal::PosInf => f64::INFINITY,
            ExtendedReal::NegInf => f64::NEG_INFINITY,
        }
    }

    pub fn checked_sub(self, rhs: ExtendedReal) -> Result<ExtendedReal> {
        use ExtendedReal::*;
        match (self, rhs) {
            (Finite(a), Finite(b)) => Ok(Finite(a - b)),
            (Finite(_), NegInf) | (PosInf, Finite(_)) | (PosInf, NegInf) => Ok(PosInf),
            (Finite(_), PosInf) | (NegInf, Finite(_)) | (NegInf, PosInf) => Ok(NegInf),
            (PosInf, PosInf) => Err(Error::Indeterminate("inf - inf".into())),
            (NegInf, NegInf) => Err(Error::Indeterminate("-inf - (-inf)".into())),
        }
    }

    pub fn checked_add(self, rhs: ExtendedReal) -> Result<ExtendedReal> {
        use ExtendedReal::*;
        match (self, rhs) {
            (Finite(a), Finite(b)) => Ok(Finite(a + b)),
            (PosInf, NegInf) | (NegInf, PosInf) => Err(Error::Indeterminate("inf + (-inf)".into())),
            (PosInf, _) | (_, PosInf) => Ok(PosInf),
            (NegInf, _) | (_, NegInf) => Ok(NegInf),
        }
    }

    /// Multiplies by a nonnegative weight with the convention `0 · ±∞ = 0`.
    pub fn weighted(self, weight: f64) -> ExtendedReal {
        debug_assert!(weight >= 0.0);
        match self {
            _ if weight == 0.0 => ExtendedReal::ZERO,
            ExtendedReal::Finite(v) => ExtendedReal::Finite(weight * v),
            inf => inf,
        }
    }
}

impl From<f64> for ExtendedReal {
    /// Panics on NaN; use [`ExtendedReal::from_f64`] for fallible conversion.
    fn from(value: f64) -> Self {
        ExtendedReal::from_f64(value).expect("NaN is not an extended real")
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Finite(v) => fmt::Display::fmt(v, f),
            ExtendedReal::PosInf => f.write_str("inf"),
            ExtendedReal::NegInf => f.write_str("-inf"),
        }
    }
}

/// Sums terms left to right, failing on `∞ + (−∞)`.
pub fn sum_extended<I: IntoIterator<Item = ExtendedReal>>(terms: I) -> Result<ExtendedReal> {
    terms
        .into_iter()
        .try_fold(ExtendedReal::ZERO, ExtendedReal::checked_add)
}
