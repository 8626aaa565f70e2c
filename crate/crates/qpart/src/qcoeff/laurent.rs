//! Integer-coefficient Laurent polynomials in the formal variable `v = q^(1/2)`.
//!
//! Exponents are powers of `v`, so the q-power `q^e` is stored with exponent
//! `2e`; every half-integer power of `q` appearing in a mutation weight is an
//! integer power of `v`. Coefficients are arbitrary-precision integers.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use super::ArithError;

/// Integer-coefficient Laurent polynomial in `v = q^(1/2)`.
///
/// The zero polynomial is the empty map; stored coefficients are never zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::term(0, 1)
    }

    /// The monomial `v^e`.
    pub fn v_pow(e: i64) -> Self {
        LaurentPoly::term(e, 1)
    }

    /// The monomial `c * v^e`.
    pub fn term(e: i64, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(e, c);
        }
        LaurentPoly { coeffs }
    }

    /// Builds a polynomial from (exponent, coefficient) pairs, summing
    /// repeated exponents and dropping zeros.
    pub fn from_terms<I, C>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut p = LaurentPoly::zero();
        for (e, c) in pairs {
            p.add_term(e, c.into());
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeff(0).is_one()
    }

    /// Coefficient of `v^e` (zero if absent).
    pub fn coeff(&self, e: i64) -> BigInt {
        self.coeffs.get(&e).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Iterates over (exponent, coefficient) in increasing exponent order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Lowest exponent with nonzero coefficient.
    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    /// Highest exponent with nonzero coefficient.
    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Coefficient of the highest power of `v`; zero for the zero polynomial.
    pub fn leading_coeff(&self) -> BigInt {
        self.max_exp().map(|e| self.coeff(e)).unwrap_or_else(BigInt::zero)
    }

    fn add_term(&mut self, e: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(e).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    /// Multiplies by `v^e` (shifts every exponent by `e`).
    pub fn shifted(&self, e: i64) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(k, c)| (k + e, c.clone())).collect(),
        }
    }

    /// Multiplies every coefficient by the integer `c`.
    pub fn scaled(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, k)| (*e, k * c)).collect(),
        }
    }

    /// Applies `q ↦ q^(-1)`, i.e. `v ↦ v^(-1)`: negates every exponent.
    pub fn substitute_inverse(&self) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Evaluates at `v = 1` (sum of coefficients).
    pub fn eval_one(&self) -> BigInt {
        self.coeffs.values().sum()
    }

    /// Greatest common divisor of the coefficients, nonnegative; zero for
    /// the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.coeffs.values() {
            g = g.gcd(c);
        }
        g
    }

    /// Splits off the `v`-valuation: `p = v^val * unit_part` where the unit
    /// part has a nonzero constant term. Panics on the zero polynomial.
    pub fn split_valuation(&self) -> (i64, LaurentPoly) {
        let val = self.min_exp().expect("split_valuation of zero polynomial");
        (val, self.shifted(-val))
    }

    /// Exact division: returns `self / den` when the quotient is again an
    /// integer Laurent polynomial, an error otherwise.
    pub fn div_exact(&self, den: &LaurentPoly) -> Result<LaurentPoly, ArithError> {
        if den.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(LaurentPoly::zero());
        }
        let (va, a) = self.split_valuation();
        let (vb, b) = den.split_valuation();
        let da = a.max_exp().unwrap();
        let db = b.max_exp().unwrap();
        if da < db {
            return Err(ArithError::NonExactDivision);
        }
        // Dense long division from the top. The quotient coefficient at each
        // step must divide exactly, otherwise the overall quotient is not an
        // integer polynomial.
        let mut rem: Vec<BigInt> = vec![BigInt::zero(); (da + 1) as usize];
        for (e, c) in a.iter() {
            rem[e as usize] = c.clone();
        }
        let bvec: Vec<BigInt> = (0..=db).map(|e| b.coeff(e)).collect();
        let lead = &bvec[db as usize];
        let mut quot: Vec<BigInt> = vec![BigInt::zero(); (da - db + 1) as usize];
        for d in (db..=da).rev() {
            let c = rem[d as usize].clone();
            if c.is_zero() {
                continue;
            }
            let (qc, r) = c.div_rem(lead);
            if !r.is_zero() {
                return Err(ArithError::NonExactDivision);
            }
            let off = (d - db) as usize;
            quot[off] = qc.clone();
            for (i, bc) in bvec.iter().enumerate() {
                if !bc.is_zero() {
                    rem[off + i] -= &qc * bc;
                }
            }
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(ArithError::NonExactDivision);
        }
        let q = LaurentPoly::from_terms(
            quot.into_iter().enumerate().map(|(i, c)| (i as i64, c)),
        );
        Ok(q.shifted(va - vb))
    }
}

/// Greatest common divisor in the Laurent polynomial ring, normalized to a
/// zero-valuation polynomial with positive leading coefficient; pure
/// `v`-power factors are treated as units. Returns zero only when both
/// inputs are zero.
pub fn laurent_gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    match (a.is_zero(), b.is_zero()) {
        (true, true) => return LaurentPoly::zero(),
        (true, false) => return positive_unit_part(b),
        (false, true) => return positive_unit_part(a),
        _ => {}
    }
    let ca = a.content();
    let cb = b.content();
    let c = ca.gcd(&cb);
    let mut x = primitive_unit_part(a);
    let mut y = primitive_unit_part(b);
    if x.max_exp() < y.max_exp() {
        std::mem::swap(&mut x, &mut y);
    }
    // Primitive pseudo-remainder sequence; valuations introduced by the
    // pseudo-remainders are stripped since v does not divide either input.
    while !y.is_zero() {
        let r = pseudo_rem(&x, &y);
        x = y;
        y = if r.is_zero() { r } else { primitive_unit_part(&r) };
    }
    let g = x.scaled(&c);
    if g.leading_coeff().is_negative() {
        -g
    } else {
        g
    }
}

fn positive_unit_part(p: &LaurentPoly) -> LaurentPoly {
    let (_, u) = p.split_valuation();
    if u.leading_coeff().is_negative() {
        -u
    } else {
        u
    }
}

fn primitive_unit_part(p: &LaurentPoly) -> LaurentPoly {
    let (_, u) = p.split_valuation();
    let c = u.content();
    u.div_exact(&LaurentPoly::term(0, c)).expect("content divides")
}

/// Remainder of `lc(b)^k * a` divided by `b` for suitable `k`; both inputs
/// must be nonzero with nonnegative exponents.
fn pseudo_rem(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    let db = b.max_exp().unwrap();
    let lb = b.leading_coeff();
    let mut r = a.clone();
    while let Some(dr) = r.max_exp() {
        if dr < db {
            break;
        }
        let lr = r.leading_coeff();
        r = r.scaled(&lb) - b.shifted(dr - db).scaled(&lr);
    }
    r
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.iter() {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in rhs.iter() {
            out.add_term(e, -c.clone());
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (ea, ca) in self.iter() {
            for (eb, cb) in rhs.iter() {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$method(rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in rhs.iter() {
            self.add_term(e, c.clone());
        }
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in rhs.iter() {
            self.add_term(e, -c.clone());
        }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit_coeff = abs.is_one();
            match (e, unit_coeff) {
                (0, _) => write!(f, "{abs}")?,
                (1, true) => write!(f, "v")?,
                (1, false) => write!(f, "{abs}*v")?,
                (_, true) => write!(f, "v^{e}")?,
                (_, false) => write!(f, "{abs}*v^{e}")?,
            }
        }
        Ok(())
    }
}

// Wire format: a JSON object mapping the stringified v-exponent to the
// integer coefficient, e.g. {"-2":1,"0":1,"2":1} for q^(-1)+1+q.
// Coefficients outside the i64 range are emitted as decimal strings.
impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.coeffs.len()))?;
        for (e, c) in self.iter() {
            let key = e.to_string();
            match i64::try_from(c) {
                Ok(small) => map.serialize_entry(&key, &small)?,
                Err(_) => map.serialize_entry(&key, &c.to_string())?,
            }
        }
        map.end()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CoeffRepr {
    Small(i64),
    Big(String),
}

impl CoeffRepr {
    fn into_bigint(self) -> Result<BigInt, String> {
        match self {
            CoeffRepr::Small(c) => Ok(BigInt::from(c)),
            CoeffRepr::Big(s) => {
                BigInt::from_str(&s).map_err(|_| format!("invalid integer coefficient {s:?}"))
            }
        }
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct PolyVisitor;

        impl<'de> Visitor<'de> for PolyVisitor {
            type Value = LaurentPoly;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a map from stringified v-exponent to integer coefficient")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<Self::Value, A::Error> {
                let mut p = LaurentPoly::zero();
                while let Some((key, value)) = access.next_entry::<String, CoeffRepr>()? {
                    let e: i64 = key
                        .parse()
                        .map_err(|_| de::Error::custom(format!("invalid exponent key {key:?}")))?;
                    let c = value.into_bigint().map_err(de::Error::custom)?;
                    if p.coeffs.contains_key(&e) {
                        return Err(de::Error::custom(format!("duplicate exponent key {e}")));
                    }
                    p.add_term(e, c);
                }
                Ok(p)
            }
        }

        deserializer.deserialize_map(PolyVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(pairs: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(pairs.iter().copied())
    }

    #[test]
    fn product_of_conjugates() {
        let a = lp(&[(0, 1), (1, 1)]);
        let b = lp(&[(0, 1), (1, -1)]);
        assert_eq!(&a * &b, lp(&[(0, 1), (2, -1)]));
    }

    #[test]
    fn shift_by_negative_power() {
        let p = lp(&[(1, 1), (3, 1)]);
        assert_eq!(p.shifted(-1), lp(&[(0, 1), (2, 1)]));
    }

    #[test]
    fn additive_inverse_is_empty_map() {
        let p = lp(&[(-2, 1), (0, 1), (2, 1)]);
        let s = &p + &(-&p);
        assert!(s.is_zero());
        assert_eq!(s.num_terms(), 0);
    }

    #[test]
    fn substitute_inverse_negates_exponents() {
        assert_eq!(
            lp(&[(0, 1), (2, 1)]).substitute_inverse(),
            lp(&[(-2, 1), (0, 1)])
        );
        assert!(LaurentPoly::zero().substitute_inverse().is_zero());
        let palindrome = lp(&[(-1, 1), (1, 1)]);
        assert_eq!(palindrome.substitute_inverse(), palindrome);
    }

    #[test]
    fn exact_division_with_valuations() {
        // (1 - v^-2) / (1 - v^2) = -v^-2
        let num = lp(&[(-2, -1), (0, 1)]);
        let den = lp(&[(0, 1), (2, -1)]);
        assert_eq!(num.div_exact(&den).unwrap(), lp(&[(-2, -1)]));
    }

    #[test]
    fn division_remainder_is_error() {
        let num = lp(&[(0, 1), (1, 1)]);
        let den = lp(&[(0, 1), (2, -1)]);
        assert_eq!(num.div_exact(&den), Err(ArithError::NonExactDivision));
        let odd = lp(&[(0, 3)]);
        assert_eq!(
            odd.div_exact(&lp(&[(0, 2)])),
            Err(ArithError::NonExactDivision)
        );
        assert_eq!(
            odd.div_exact(&LaurentPoly::zero()),
            Err(ArithError::DivisionByZero)
        );
    }

    #[test]
    fn gcd_of_cyclotomic_products() {
        // gcd(1 - v^4, 1 - v^6) = v^2 - 1 (positive leading coefficient)
        let a = lp(&[(0, 1), (4, -1)]);
        let b = lp(&[(0, 1), (6, -1)]);
        assert_eq!(laurent_gcd(&a, &b), lp(&[(0, -1), (2, 1)]));
        // contents participate: gcd(2(1-v^2), 4) = 2
        let c = lp(&[(0, 2), (2, -2)]);
        let d = lp(&[(0, 4)]);
        assert_eq!(laurent_gcd(&c, &d), lp(&[(0, 2)]));
    }

    #[test]
    fn gcd_strips_valuation_and_sign() {
        let a = lp(&[(-3, -1), (-1, 1)]); // v^-3 (v^2 - 1)
        let b = lp(&[(0, 1), (2, -1)]);
        // normalized to positive leading coefficient
        assert_eq!(laurent_gcd(&a, &b), lp(&[(0, -1), (2, 1)]));
    }

    #[test]
    fn serde_wire_format() {
        let p = lp(&[(-2, 1), (0, 1), (2, 1)]);
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"{"-2":1,"0":1,"2":1}"#);
        let back: LaurentPoly = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
        // big coefficients round-trip through the string form
        let big = LaurentPoly::term(1, BigInt::from(i64::MAX) * 3);
        let json = serde_json::to_string(&big).unwrap();
        let back: LaurentPoly = serde_json::from_str(&json).unwrap();
        assert_eq!(back, big);
    }

    #[test]
    fn display_renders_signs_and_powers() {
        assert_eq!(lp(&[(-1, 1), (1, 1)]).to_string(), "v^-1 + v");
        assert_eq!(lp(&[(0, 1), (2, -3)]).to_string(), "1 - 3*v^2");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
    }
}
