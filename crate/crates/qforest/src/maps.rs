//! Rational maps over ℚ as exact objects.
//!
//! A [`RationalMap`] is a pair of coprime integer polynomials evaluated
//! homogeneously on ℙ¹(ℚ), so poles and the point at infinity need no
//! special cases. Möbius transformations are the invertible degree-1 maps;
//! their height-specific operations ([`moebius_height`], [`moebius_inverse`])
//! work on canonical PGL₂(ℚ) matrix representatives.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::monoid::Mat2;
use crate::poly;
use crate::rational::ProjPoint;

/// A nonconstant rational map with integer coefficients, in lowest terms.
///
/// Invariants: the numerator and denominator polynomials share no
/// nonconstant factor, the gcd of all coefficients together is 1, the
/// denominator's leading coefficient is positive, and the degree
/// max(deg numer, deg denom) is at least 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMap {
    numer: Vec<BigInt>,
    denom: Vec<BigInt>,
    degree: usize,
}

impl RationalMap {
    /// Builds and normalizes a map from raw coefficient lists
    /// (ascending degree). Rejects zero denominators and constant maps.
    pub fn new(numer: Vec<BigInt>, denom: Vec<BigInt>) -> Result<RationalMap, Error> {
        let mut numer = numer;
        let mut denom = denom;
        poly::trim(&mut numer);
        poly::trim(&mut denom);
        if denom.is_empty() {
            return Err(Error::precondition("zero denominator polynomial"));
        }
        if numer.is_empty() {
            return Err(Error::precondition("constant map"));
        }
        // Remove the common polynomial factor, then the common content.
        let g = poly::gcd(&numer, &denom);
        if poly::degree(&g) > Some(0) {
            numer = poly::div_exact(&numer, &g);
            denom = poly::div_exact(&denom, &g);
        }
        let c = poly::content(&numer).gcd(&poly::content(&denom));
        if !c.is_one() {
            for x in numer.iter_mut() {
                *x = &*x / &c;
            }
            for x in denom.iter_mut() {
                *x = &*x / &c;
            }
        }
        if denom.last().is_some_and(Signed::is_negative) {
            for x in numer.iter_mut().chain(denom.iter_mut()) {
                *x = -std::mem::take(x);
            }
        }
        let degree = poly::degree(&numer).unwrap_or(0).max(poly::degree(&denom).unwrap_or(0));
        if degree == 0 {
            return Err(Error::precondition("constant map"));
        }
        Ok(RationalMap { numer, denom, degree })
    }

    pub fn from_i64(numer: &[i64], denom: &[i64]) -> Result<RationalMap, Error> {
        RationalMap::new(
            numer.iter().map(|&c| BigInt::from(c)).collect(),
            denom.iter().map(|&c| BigInt::from(c)).collect(),
        )
    }

    pub fn numer_coeffs(&self) -> &[BigInt] {
        &self.numer
    }

    pub fn denom_coeffs(&self) -> &[BigInt] {
        &self.denom
    }

    /// deg f = max(deg numerator, deg denominator) ≥ 1.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Homogeneous evaluation at a projective point; total on ℙ¹(ℚ).
    ///
    /// Both polynomials are homogenized to the degree of the map and
    /// evaluated at (x₀:x₁); coprimality of the pair guarantees the result
    /// is never (0:0).
    pub fn eval(&self, p: &ProjPoint) -> ProjPoint {
        let num = poly::eval_homogeneous(&self.numer, self.degree, p.x0(), p.x1());
        let den = poly::eval_homogeneous(&self.denom, self.degree, p.x0(), p.x1());
        ProjPoint::new(num, den).expect("coprime polynomials have no common projective root")
    }

    /// f ∘ g, normalized; degrees multiply.
    pub fn compose(&self, g: &RationalMap) -> RationalMap {
        let mut num = Vec::new();
        let mut den = Vec::new();
        // Substitute g = U/V into each polynomial of f, clearing V^deg(f).
        for (coeffs, out) in [(&self.numer, &mut num), (&self.denom, &mut den)] {
            let mut result: Vec<BigInt> = Vec::new();
            for i in (0..=self.degree).rev() {
                // result = result * U + coeff_i * V^(degree - i) ... built by Horner.
                result = poly::mul(&result, &g.numer);
                if let Some(c) = coeffs.get(i) {
                    if !c.is_zero() {
                        let mut v_pow = vec![BigInt::one()];
                        for _ in 0..(self.degree - i) {
                            v_pow = poly::mul(&v_pow, &g.denom);
                        }
                        for (k, vc) in v_pow.iter().enumerate() {
                            if result.len() <= k {
                                result.resize(k + 1, BigInt::zero());
                            }
                            result[k] += c * vc;
                        }
                    }
                }
                poly::trim(&mut result);
            }
            *out = result;
        }
        RationalMap::new(num, den).expect("composition of nonconstant maps is nonconstant")
    }

    /// The matrix of a degree-1 map as a canonical PGL₂(ℚ) representative.
    pub fn as_moebius(&self) -> Option<Mat2> {
        if self.degree != 1 {
            return None;
        }
        let coeff = |p: &[BigInt], i: usize| p.get(i).cloned().unwrap_or_else(BigInt::zero);
        let m = Mat2 {
            a: coeff(&self.numer, 1),
            b: coeff(&self.numer, 0),
            c: coeff(&self.denom, 1),
            d: coeff(&self.denom, 0),
        };
        Some(m.pgl2_canonical().expect("coprime degree-1 maps are invertible"))
    }

    /// The Möbius map (a·x + b)/(c·x + d) of an invertible matrix.
    pub fn from_moebius(m: &Mat2) -> Result<RationalMap, Error> {
        if m.det().is_zero() {
            return Err(Error::SingularMatrix);
        }
        RationalMap::new(vec![m.b.clone(), m.a.clone()], vec![m.d.clone(), m.c.clone()])
    }

    /// For a monomial map (a/b)·x^d the coefficient pair (a, b); `None`
    /// otherwise. Monomial maps admit an exact height growth constant.
    pub fn monomial_coefficient(&self) -> Option<(BigInt, BigInt)> {
        let num_terms = self.numer.iter().filter(|c| !c.is_zero()).count();
        let den_ok = poly::degree(&self.denom) == Some(0);
        if den_ok
            && num_terms == 1
            && self.numer.last().is_some_and(|c| !c.is_zero())
            && self.numer.len() - 1 == self.degree
        {
            Some((self.numer.last().cloned().unwrap(), self.denom[0].clone()))
        } else {
            None
        }
    }
}

impl fmt::Display for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let write_poly = |f: &mut fmt::Formatter<'_>, p: &[BigInt]| -> fmt::Result {
            let mut first = true;
            for (i, c) in p.iter().enumerate().rev() {
                if c.is_zero() {
                    continue;
                }
                let mag = c.magnitude();
                if first {
                    if c.is_negative() {
                        write!(f, "-")?;
                    }
                    first = false;
                } else {
                    write!(f, "{}", if c.is_negative() { " - " } else { " + " })?;
                }
                match i {
                    0 => write!(f, "{mag}")?,
                    _ => {
                        if !mag.is_one() {
                            write!(f, "{mag}*")?;
                        }
                        write!(f, "x")?;
                        if i > 1 {
                            write!(f, "^{i}")?;
                        }
                    }
                }
            }
            if first {
                write!(f, "0")?;
            }
            Ok(())
        };
        if poly::degree(&self.denom) == Some(0) && self.denom[0].is_one() {
            write_poly(f, &self.numer)
        } else {
            write!(f, "(")?;
            write_poly(f, &self.numer)?;
            write!(f, ")/(")?;
            write_poly(f, &self.denom)?;
            write!(f, ")")
        }
    }
}

impl FromStr for RationalMap {
    type Err = Error;

    fn from_str(s: &str) -> Result<RationalMap, Error> {
        parse_map(s)
    }
}

/// Height of a Möbius transformation: the maximal absolute entry of the
/// canonical coprime-integer representative.
pub fn moebius_height(m: &Mat2) -> Result<BigUint, Error> {
    let canon = m.pgl2_canonical()?;
    let mut h = canon.a.magnitude().clone();
    for e in [&canon.b, &canon.c, &canon.d] {
        if e.magnitude() > &h {
            h = e.magnitude().clone();
        }
    }
    Ok(h)
}

/// Inverse in PGL₂(ℚ) via the adjugate, canonicalized; it shares the height
/// of the original.
pub fn moebius_inverse(m: &Mat2) -> Result<Mat2, Error> {
    if m.det().is_zero() {
        return Err(Error::SingularMatrix);
    }
    Mat2 { a: m.d.clone(), b: -m.b.clone(), c: -m.c.clone(), d: m.a.clone() }.pgl2_canonical()
}

/// Parses the map grammar
///
/// ```text
/// map  := gpoly ("/" gpoly)?
/// gpoly := "(" poly ")" | poly
/// poly := ["-"] term (("+"|"-") term)*
/// term := int | int "*" pow | pow
/// pow  := "x" ("^" uint)?
/// ```
///
/// over integer coefficients in the single variable `x`, with one optional
/// top-level division. Anything richer, in particular nested rational
/// subexpressions, is rejected; errors carry the byte offset.
pub fn parse_map(text: &str) -> Result<RationalMap, Error> {
    let mut parser = MapParser { bytes: text.as_bytes(), pos: 0 };
    parser.skip_ws();
    let numer = parser.gpoly()?;
    parser.skip_ws();
    let denom = if parser.eat(b'/') {
        parser.skip_ws();
        let d = parser.gpoly()?;
        parser.skip_ws();
        d
    } else {
        vec![BigInt::one()]
    };
    if parser.pos != parser.bytes.len() {
        return Err(Error::parse(parser.pos, "unexpected trailing input"));
    }
    RationalMap::new(numer, denom)
}

const MAX_EXPONENT: usize = 4096;

struct MapParser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> MapParser<'a> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, byte: u8) -> bool {
        if self.peek() == Some(byte) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn gpoly(&mut self) -> Result<Vec<BigInt>, Error> {
        if self.eat(b'(') {
            let p = self.poly()?;
            self.skip_ws();
            if !self.eat(b')') {
                return Err(Error::parse(self.pos, "expected ')'"));
            }
            Ok(p)
        } else {
            self.poly()
        }
    }

    fn poly(&mut self) -> Result<Vec<BigInt>, Error> {
        let mut coeffs: Vec<BigInt> = Vec::new();
        self.skip_ws();
        let mut negate = self.eat(b'-');
        loop {
            self.skip_ws();
            let (coeff, exp) = self.term()?;
            let coeff = if negate { -coeff } else { coeff };
            if coeffs.len() <= exp {
                coeffs.resize(exp + 1, BigInt::zero());
            }
            coeffs[exp] += coeff;
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    negate = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    negate = true;
                }
                _ => break,
            }
        }
        Ok(coeffs)
    }

    fn term(&mut self) -> Result<(BigInt, usize), Error> {
        match self.peek() {
            Some(b'x') => {
                let exp = self.pow()?;
                Ok((BigInt::one(), exp))
            }
            Some(b) if b.is_ascii_digit() => {
                let coeff = self.integer()?;
                self.skip_ws();
                if self.eat(b'*') {
                    self.skip_ws();
                    if self.peek() != Some(b'x') {
                        return Err(Error::parse(self.pos, "expected 'x' after '*'"));
                    }
                    let exp = self.pow()?;
                    Ok((coeff, exp))
                } else {
                    Ok((coeff, 0))
                }
            }
            Some(b) => Err(Error::parse(
                self.pos,
                format!("expected a term, found {:?}", char::from(b)),
            )),
            None => Err(Error::parse(self.pos, "expected a term, found end of input")),
        }
    }

    fn pow(&mut self) -> Result<usize, Error> {
        self.pos += 1; // consume 'x'
        if self.eat(b'^') {
            let start = self.pos;
            let n = self.integer()?;
            let exp: usize = n
                .to_string()
                .parse()
                .map_err(|_| Error::parse(start, "exponent too large"))?;
            if exp > MAX_EXPONENT {
                return Err(Error::parse(start, "exponent too large"));
            }
            Ok(exp)
        } else {
            Ok(1)
        }
    }

    fn integer(&mut self) -> Result<BigInt, Error> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(start, "expected digits"));
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii digits");
        Ok(text.parse().expect("digit string"))
    }
}

/// Splits a semicolon-separated list of map expressions, as used on the
/// command line for families.
pub fn parse_family(text: &str) -> Result<Vec<RationalMap>, Error> {
    let mut maps = Vec::new();
    let mut offset = 0;
    for part in text.split(';') {
        let map = parse_map(part).map_err(|e| match e {
            Error::Parse { offset: inner, message } => Error::parse(offset + inner, message),
            other => other,
        })?;
        maps.push(map);
        offset += part.len() + 1;
    }
    Ok(maps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::big;

    fn map(s: &str) -> RationalMap {
        parse_map(s).unwrap()
    }

    fn pt(a: i64, b: i64) -> ProjPoint {
        ProjPoint::new(a, b).unwrap()
    }

    #[test]
    fn parse_examples() {
        let sq = map("x^2");
        assert_eq!(sq.numer_coeffs(), &[big(0), big(0), big(1)]);
        assert_eq!(sq.denom_coeffs(), &[big(1)]);
        assert_eq!(sq.degree(), 2);

        let l = map("(x)/(x+1)");
        assert_eq!(l.as_moebius().unwrap(), Mat2::generator_l());

        let two_sq = map("2*x^2");
        assert_eq!(two_sq.numer_coeffs(), &[big(0), big(0), big(2)]);
        assert_eq!(two_sq.degree(), 2);
    }

    #[test]
    fn parse_errors_carry_offsets() {
        match parse_map("x^2 + y") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 6),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse_map("5").is_err(), "constant map must be rejected");
        assert!(parse_map("x/0").is_err(), "zero denominator polynomial");
        assert!(parse_map("(x/(x+1))/x").is_err(), "nested rational rejected");
        assert!(parse_map("").is_err());
    }

    #[test]
    fn normalization_reduces_common_factors() {
        // (x^2+x)/(x+1) = x after cancelling.
        let m = map("(x^2+x)/(x+1)");
        assert_eq!(m, map("x"));
        // content normalization
        assert_eq!(map("(2*x)/(4)"), map("x/2"));
        assert_eq!(map("2*x^2").to_string(), "2*x^2");
        assert_eq!(map("(x)/(x+1)").to_string(), "(x)/(x + 1)");
    }

    #[test]
    fn eval_examples() {
        assert_eq!(map("x^2").eval(&pt(3, 5)), pt(9, 25));
        // L(inf) = 1
        assert_eq!(map("x/(x+1)").eval(&ProjPoint::infinity()), pt(1, 1));
        // x+1 fixes inf
        assert_eq!(map("x+1").eval(&ProjPoint::infinity()), ProjPoint::infinity());
        // pole of L at -1 goes to inf
        assert_eq!(map("x/(x+1)").eval(&pt(-1, 1)), ProjPoint::infinity());
    }

    #[test]
    fn compose_examples() {
        let sq = map("x^2");
        assert_eq!(sq.compose(&sq), map("x^4"));
        assert_eq!(sq.compose(&sq).degree(), 4);
        assert_eq!(map("x/(x+1)").compose(&map("x+1")), map("(x+1)/(x+2)"));
        assert_eq!(sq.compose(&map("x/(x+1)")), map("(x^2)/(x^2+2*x+1)"));
    }

    #[test]
    fn moebius_height_examples() {
        assert_eq!(moebius_height(&Mat2::generator_l()).unwrap(), BigUint::from(1u32));
        assert_eq!(moebius_height(&Mat2::new(2, 1, 3, 2)).unwrap(), BigUint::from(3u32));
        assert_eq!(moebius_height(&Mat2::new(2, 0, 0, 2)).unwrap(), BigUint::from(1u32));
        assert!(moebius_height(&Mat2::new(1, 2, 2, 4)).is_err());
    }

    #[test]
    fn moebius_inverse_examples() {
        assert_eq!(moebius_inverse(&Mat2::generator_l()).unwrap(), Mat2::new(1, 0, -1, 1));
        assert_eq!(moebius_inverse(&Mat2::new(2, 1, 3, 2)).unwrap(), Mat2::new(2, -1, -3, 2));
        assert_eq!(moebius_inverse(&Mat2::identity()).unwrap(), Mat2::identity());
        let m = Mat2::new(3, -7, 2, 5);
        let prod = m.mul(&moebius_inverse(&m).unwrap()).pgl2_canonical().unwrap();
        assert_eq!(prod, Mat2::identity());
    }

    #[test]
    fn monomial_detection() {
        assert_eq!(map("x^2").monomial_coefficient(), Some((big(1), big(1))));
        assert_eq!(map("2*x^2").monomial_coefficient(), Some((big(2), big(1))));
        assert_eq!(map("(x^3)/(4)").monomial_coefficient(), Some((big(1), big(4))));
        assert_eq!(map("x^2+1").monomial_coefficient(), None);
        assert_eq!(map("x/(x+1)").monomial_coefficient(), None);
    }

    #[test]
    fn torsion_witness_in_pgl2() {
        // (R L^{-1} R)^2 is the identity Möbius transformation, so L and R
        // generate no free group of matrices; freeness lives in the monoid.
        let r = Mat2::generator_r();
        let l_inv = moebius_inverse(&Mat2::generator_l()).unwrap();
        let w = r.mul(&l_inv).mul(&r);
        let sq = w.mul(&w).pgl2_canonical().unwrap();
        assert_eq!(sq, Mat2::identity());
    }

    #[test]
    fn family_parsing() {
        let fam = parse_family("x^2;2*x^2").unwrap();
        assert_eq!(fam.len(), 2);
        assert_eq!(fam[1], map("2*x^2"));
        assert!(parse_family("x^2;;").is_err());
    }
}
