//! Exact coefficient arithmetic: Laurent polynomials in `v = q^(1/2)`, their
//! fraction field, q-Pochhammer symbols, and q-binomial coefficients valid
//! for negative upper argument.
//!
//! All values are immutable after construction and all operations are pure
//! functions, so everything in this module is safe to copy or move between
//! threads.

mod laurent;
mod rational;

pub use laurent::{laurent_gcd, LaurentPoly};
pub use rational::RationalV;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Errors from exact polynomial arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("polynomial division left a remainder")]
    NonExactDivision,
}

/// A sign `+1` or `-1`: the base `q^ε` of a q-binomial, and the green/red
/// marker of a mutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_i64(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Sign::Plus => write!(f, "+"),
            Sign::Minus => write!(f, "-"),
        }
    }
}

impl Serialize for Sign {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_i64(self.as_i64())
    }
}

impl<'de> Deserialize<'de> for Sign {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let v = i64::deserialize(deserializer)?;
        Sign::from_i64(v).ok_or_else(|| serde::de::Error::custom("sign must be 1 or -1"))
    }
}

/// q-Pochhammer symbol `(x; q)_k = ∏_{i=0}^{k-1} (1 - x q^i)` specialized to
/// `x = v^x_power`, so every factor is `1 - v^(x_power + 2i)`.
pub fn qpochhammer(x_power: i64, k: u32) -> LaurentPoly {
    let mut p = LaurentPoly::one();
    for i in 0..i64::from(k) {
        let factor = LaurentPoly::from_terms([(0i64, 1i64), (x_power + 2 * i, -1)]);
        p = &p * &factor;
    }
    p
}

/// Gaussian binomial coefficient `[m choose k]_{q^eps}` as a Laurent
/// polynomial in `v`, via the Pochhammer ratio
/// `(q^(m-k+1); q)_k / (q; q)_k`.
///
/// Valid for any integer `m`, including `m < k` and `m < 0`; the `eps = -1`
/// case is the `eps = +1` result under `v ↦ v^(-1)`. The division is always
/// exact; a remainder can only mean an arithmetic bug, so it panics.
pub fn qbinom(m: i64, k: u32, eps: Sign) -> LaurentPoly {
    match eps {
        Sign::Plus => {
            let num = qpochhammer(2 * (m - i64::from(k) + 1), k);
            let den = qpochhammer(2, k);
            num.div_exact(&den)
                .expect("q-binomial Pochhammer division is exact")
        }
        Sign::Minus => qbinom(m, k, Sign::Plus).substitute_inverse(),
    }
}
