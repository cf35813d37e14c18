//! Exact rationals and points of ℙ¹(ℚ) over arbitrary-precision integers.
//!
//! A [`Rational`] is a signed fraction in lowest terms with positive
//! denominator; a [`ProjPoint`] is a point (x₀:x₁) of the projective line
//! stored as a canonical coprime integer pair, so that equality of values is
//! field-wise equality. The point at infinity is (1:0) and corresponds to no
//! rational; conversions between the two types treat it explicitly.
//!
//! Arbitrary precision is not optional here: entries along the Calkin-Wilf
//! tree grow like Fibonacci numbers and overflow 64 bits near depth 90.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// An exact rational number: numerator and positive denominator, coprime.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rational {
    num: BigInt,
    den: BigInt,
}

impl Rational {
    /// Normalizes `num/den` into lowest terms with a positive denominator.
    ///
    /// This is the only constructor; every `Rational` in the library has
    /// passed through it. Fails when `den` is zero.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Rational, Error> {
        let num = num.into();
        let mut den = den.into();
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let mut num = num;
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        if num.is_zero() {
            return Ok(Rational { num, den: BigInt::one() });
        }
        let g = num.gcd(&den);
        Ok(Rational { num: num / &g, den: den / g })
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Rational {
        Rational { num: n.into(), den: BigInt::one() }
    }

    pub fn zero() -> Rational {
        Rational::from_integer(0)
    }

    pub fn one() -> Rational {
        Rational::from_integer(1)
    }

    pub fn numer(&self) -> &BigInt {
        &self.num
    }

    pub fn denom(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_positive(&self) -> bool {
        self.num.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.den.is_one()
    }

    /// Floor of the rational as an integer (floor division, exact).
    pub fn floor(&self) -> BigInt {
        self.num.div_floor(&self.den)
    }

    /// Fractional part `self - floor(self)`, always in [0, 1).
    pub fn fract(&self) -> Rational {
        let whole = self.floor() * &self.den;
        Rational { num: &self.num - whole, den: self.den.clone() }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Rational> {
        if self.num.is_zero() {
            return None;
        }
        let mut num = self.den.clone();
        let mut den = self.num.clone();
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        Some(Rational { num, den })
    }
}

impl Add for &Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        Rational::new(&self.num * &rhs.den + &rhs.num * &self.den, &self.den * &rhs.den)
            .expect("nonzero denominators")
    }
}

impl Sub for &Rational {
    type Output = Rational;
    fn sub(self, rhs: &Rational) -> Rational {
        Rational::new(&self.num * &rhs.den - &rhs.num * &self.den, &self.den * &rhs.den)
            .expect("nonzero denominators")
    }
}

impl Mul for &Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        Rational::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero denominators")
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational { num: -&self.num, den: self.den.clone() }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Rational) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Rational) -> Ordering {
        // Denominators are positive, so cross-multiplication preserves order.
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Rational {
        Rational::from_integer(n)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl serde::Serialize for Rational {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Parses "p" or "p/q", optionally negative. "inf" is not a rational;
    /// parse a [`ProjPoint`] to accept it.
    fn from_str(s: &str) -> Result<Rational, Error> {
        let s = s.trim();
        let (num_text, den_text) = match s.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (s, None),
        };
        let num = BigInt::from_str(num_text.trim())
            .map_err(|_| Error::parse(0, format!("expected an integer, found {num_text:?}")))?;
        let den = match den_text {
            Some(d) => BigInt::from_str(d.trim())
                .map_err(|_| Error::parse(0, format!("expected an integer, found {d:?}")))?,
            None => BigInt::one(),
        };
        Rational::new(num, den)
    }
}

/// A point of ℙ¹(ℚ) as a canonical coprime integer pair (x₀:x₁).
///
/// Canonical form: gcd(|x₀|,|x₁|) = 1 with x₁ > 0, except for the point at
/// infinity which is exactly (1:0). Equality and hashing are therefore
/// plain field-wise operations.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    x0: BigInt,
    x1: BigInt,
}

impl ProjPoint {
    /// Canonicalizes homogeneous coordinates. Fails when both are zero.
    pub fn new(x0: impl Into<BigInt>, x1: impl Into<BigInt>) -> Result<ProjPoint, Error> {
        let mut x0 = x0.into();
        let mut x1 = x1.into();
        if x0.is_zero() && x1.is_zero() {
            return Err(Error::ZeroPoint);
        }
        if x1.is_zero() {
            return Ok(ProjPoint { x0: BigInt::one(), x1 });
        }
        let g = x0.gcd(&x1);
        x0 /= &g;
        x1 /= g;
        if x1.is_negative() {
            x0 = -x0;
            x1 = -x1;
        }
        Ok(ProjPoint { x0, x1 })
    }

    /// Constructor for coordinates already known to be canonical (coprime,
    /// x₁ > 0 or the point at infinity); skips the gcd.
    pub(crate) fn from_coprime(x0: BigInt, x1: BigInt) -> ProjPoint {
        debug_assert!(!x1.is_negative() && (!x1.is_zero() || x0.is_one()));
        ProjPoint { x0, x1 }
    }

    pub fn infinity() -> ProjPoint {
        ProjPoint { x0: BigInt::one(), x1: BigInt::zero() }
    }

    pub fn zero() -> ProjPoint {
        ProjPoint { x0: BigInt::zero(), x1: BigInt::one() }
    }

    pub fn one() -> ProjPoint {
        ProjPoint { x0: BigInt::one(), x1: BigInt::one() }
    }

    pub fn x0(&self) -> &BigInt {
        &self.x0
    }

    pub fn x1(&self) -> &BigInt {
        &self.x1
    }

    pub fn is_infinity(&self) -> bool {
        self.x1.is_zero()
    }

    /// Embeds a rational a/b as the point (a:b).
    pub fn from_rational(q: &Rational) -> ProjPoint {
        ProjPoint { x0: q.num.clone(), x1: q.den.clone() }
    }

    /// The finite rational this point represents, or `None` at infinity.
    pub fn to_rational(&self) -> Option<Rational> {
        if self.is_infinity() {
            None
        } else {
            Some(Rational { num: self.x0.clone(), den: self.x1.clone() })
        }
    }

    /// True for finite points with positive value.
    pub fn is_positive_rational(&self) -> bool {
        !self.is_infinity() && self.x0.is_positive()
    }

    /// H(x) = max(|x₀|, |x₁|) on the canonical representative.
    pub fn height(&self) -> BigUint {
        let h0 = self.x0.magnitude();
        let h1 = self.x1.magnitude();
        if h0 >= h1 { h0.clone() } else { h1.clone() }
    }

    /// Height comparison against a machine-word bound without allocating.
    pub fn height_at_most(&self, bound: u64) -> bool {
        let bound = BigUint::from(bound);
        *self.x0.magnitude() <= bound && *self.x1.magnitude() <= bound
    }
}

impl From<&Rational> for ProjPoint {
    fn from(q: &Rational) -> ProjPoint {
        ProjPoint::from_rational(q)
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_rational() {
            Some(q) => write!(f, "{q}"),
            None => write!(f, "inf"),
        }
    }
}

impl serde::Serialize for ProjPoint {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl FromStr for ProjPoint {
    type Err = Error;

    /// Accepts "p", "p/q", "-p/q" and "inf".
    fn from_str(s: &str) -> Result<ProjPoint, Error> {
        let t = s.trim();
        if t == "inf" {
            return Ok(ProjPoint::infinity());
        }
        Ok(ProjPoint::from_rational(&t.parse::<Rational>()?))
    }
}

#[cfg(test)]
pub(crate) fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn normalization() {
        assert_eq!(q(6, 10), q(3, 5));
        assert_eq!(q(0, 5), Rational::zero());
        assert_eq!(q(0, 5).to_string(), "0");
        assert_eq!(q(3, -5).to_string(), "-3/5");
        assert_eq!(Rational::new(1, 0), Err(Error::ZeroDenominator));
    }

    #[test]
    fn proj_roundtrip() {
        let p = ProjPoint::from_rational(&q(3, 5));
        assert_eq!(p.to_string(), "3/5");
        assert_eq!(p.to_rational(), Some(q(3, 5)));
        assert_eq!(ProjPoint::infinity().to_string(), "inf");
        assert_eq!(ProjPoint::infinity().to_rational(), None);
        assert_eq!(ProjPoint::from_rational(&q(-2, 1)), ProjPoint::new(-2, 1).unwrap());
        assert_eq!(ProjPoint::new(0, 1).unwrap().to_rational(), Some(Rational::zero()));
    }

    #[test]
    fn proj_canonical_sign() {
        assert_eq!(ProjPoint::new(3, -5).unwrap(), ProjPoint::new(-3, 5).unwrap());
        assert_eq!(ProjPoint::new(-4, 0).unwrap(), ProjPoint::infinity());
        assert_eq!(ProjPoint::new(10, 4).unwrap(), ProjPoint::new(5, 2).unwrap());
        assert!(ProjPoint::new(0, 0).is_err());
    }

    #[test]
    fn small_integer_arithmetic_oracle() {
        // Compare ops against i128 fraction arithmetic for |num|,|den| <= 100.
        let cases = [(3, 5, 7, 2), (-4, 9, 11, 3), (100, 99, -98, 97), (0, 1, -5, 7)];
        for (a, b, c, d) in cases {
            let x = q(a, b);
            let y = q(c, d);
            let sum = &x + &y;
            assert_eq!(
                (sum.numer() * BigInt::from(b as i128 * d as i128)).to_string(),
                (BigInt::from(a as i128 * d as i128 + c as i128 * b as i128) * sum.denom())
                    .to_string()
            );
            let prod = &x * &y;
            assert_eq!(prod, q(a * c, b * d));
            let ord = (a as i128 * d as i128).cmp(&(c as i128 * b as i128));
            let ord = if (b < 0) ^ (d < 0) { ord.reverse() } else { ord };
            assert_eq!(x.cmp(&y), ord);
        }
    }

    #[test]
    fn floor_and_fract() {
        assert_eq!(q(7, 2).floor(), big(3));
        assert_eq!(q(-7, 2).floor(), big(-4));
        assert_eq!(q(7, 2).fract(), q(1, 2));
        assert_eq!(q(-7, 2).fract(), q(1, 2));
        assert_eq!(q(4, 1).fract(), Rational::zero());
    }

    #[test]
    fn parsing() {
        assert_eq!("3/5".parse::<Rational>().unwrap(), q(3, 5));
        assert_eq!("-3/5".parse::<Rational>().unwrap(), q(-3, 5));
        assert_eq!("7".parse::<Rational>().unwrap(), q(7, 1));
        assert!("inf".parse::<Rational>().is_err());
        assert_eq!("inf".parse::<ProjPoint>().unwrap(), ProjPoint::infinity());
        assert_eq!("-2".parse::<ProjPoint>().unwrap(), ProjPoint::new(-2, 1).unwrap());
    }
}
