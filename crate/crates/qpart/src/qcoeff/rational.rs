//! The fraction field of [`LaurentPoly`]: normalized ratios of integer
//! Laurent polynomials in `v`, the coefficient field for dilogarithm series.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::laurent::{laurent_gcd, LaurentPoly};
use super::ArithError;

/// Normalized ratio `num / den` of two Laurent polynomials.
///
/// Canonical form: the denominator is nonzero with zero `v`-valuation
/// (nonzero constant term) and positive leading coefficient, shares no
/// nonunit factor with the numerator, and all pure `v`-power factors live in
/// the numerator. Equality of normalized forms is therefore structural.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalV {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RationalV {
    /// Builds `num / den` in canonical form.
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self, ArithError> {
        if den.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: LaurentPoly, den: LaurentPoly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return RationalV {
                num: LaurentPoly::zero(),
                den: LaurentPoly::one(),
            };
        }
        let (vn, nu) = num.split_valuation();
        let (vd, du) = den.split_valuation();
        let g = laurent_gcd(&nu, &du);
        let mut n = nu.div_exact(&g).expect("gcd divides numerator");
        let mut d = du.div_exact(&g).expect("gcd divides denominator");
        if d.leading_coeff().is_negative() {
            n = -n;
            d = -d;
        }
        RationalV {
            num: n.shifted(vn - vd),
            den: d,
        }
    }

    pub fn zero() -> Self {
        RationalV {
            num: LaurentPoly::zero(),
            den: LaurentPoly::one(),
        }
    }

    pub fn one() -> Self {
        RationalV {
            num: LaurentPoly::one(),
            den: LaurentPoly::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    /// True when the denominator is 1, i.e. the value is a Laurent polynomial.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    /// The underlying Laurent polynomial, if denominator-free.
    pub fn as_laurent(&self) -> Option<&LaurentPoly> {
        self.is_laurent().then_some(&self.num)
    }

    pub fn inverse(&self) -> Result<RationalV, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    /// Multiplies by `v^e`.
    pub fn mul_v_pow(&self, e: i64) -> RationalV {
        RationalV {
            num: self.num.shifted(e),
            den: self.den.clone(),
        }
    }

    pub fn mul_laurent(&self, p: &LaurentPoly) -> RationalV {
        Self::normalized(&self.num * p, self.den.clone())
    }

    pub fn div(&self, rhs: &RationalV) -> Result<RationalV, ArithError> {
        if rhs.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Self::normalized(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    /// Applies `v ↦ v^(-1)` to the value.
    pub fn substitute_inverse(&self) -> RationalV {
        Self::normalized(
            self.num.substitute_inverse(),
            self.den.substitute_inverse(),
        )
    }

    /// Checks the canonical-form invariants; used by tests.
    pub fn is_normalized(&self) -> bool {
        if self.num.is_zero() {
            return self.den.is_one();
        }
        self.den.min_exp() == Some(0)
            && self.den.leading_coeff().is_positive()
            && laurent_gcd(&self.num.split_valuation().1, &self.den).is_one()
    }
}

impl From<LaurentPoly> for RationalV {
    fn from(p: LaurentPoly) -> Self {
        RationalV {
            num: p,
            den: LaurentPoly::one(),
        }
    }
}

impl Add for &RationalV {
    type Output = RationalV;
    fn add(self, rhs: &RationalV) -> RationalV {
        RationalV::normalized(
            &self.num * &rhs.den + &rhs.num * &self.den,
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &RationalV {
    type Output = RationalV;
    fn sub(self, rhs: &RationalV) -> RationalV {
        RationalV::normalized(
            &self.num * &rhs.den - &rhs.num * &self.den,
            &self.den * &rhs.den,
        )
    }
}

impl Mul for &RationalV {
    type Output = RationalV;
    fn mul(self, rhs: &RationalV) -> RationalV {
        RationalV::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &RationalV {
    type Output = RationalV;
    fn neg(self) -> RationalV {
        RationalV {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for RationalV {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_laurent() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}
