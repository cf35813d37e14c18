//! Integer polynomial arithmetic used by [`crate::maps`].
//!
//! Polynomials are coefficient vectors in ascending degree with no trailing
//! zeros; the zero polynomial is the empty vector. Gcds are computed with a
//! primitive pseudo-remainder sequence, which stays in ℤ[x] throughout.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub(crate) fn trim(p: &mut Vec<BigInt>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

pub(crate) fn degree(p: &[BigInt]) -> Option<usize> {
    if p.is_empty() {
        None
    } else {
        Some(p.len() - 1)
    }
}

pub(crate) fn mul(p: &[BigInt], q: &[BigInt]) -> Vec<BigInt> {
    if p.is_empty() || q.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

/// Nonnegative gcd of all coefficients; zero for the zero polynomial.
pub(crate) fn content(p: &[BigInt]) -> BigInt {
    p.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
}

pub(crate) fn primitive_part(p: &[BigInt]) -> Vec<BigInt> {
    let c = content(p);
    if c.is_zero() || c.is_one() {
        return p.to_vec();
    }
    p.iter().map(|x| x / &c).collect()
}

/// Pseudo-remainder of a by b (deg a ≥ deg b ≥ 0): a is premultiplied by a
/// power of b's leading coefficient so that division stays integral.
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let lead_b = b.last().expect("b nonzero").clone();
    let mut r = a.to_vec();
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let lead_r = r.last().expect("trimmed").clone();
        for coeff in r.iter_mut() {
            *coeff *= &lead_b;
        }
        for (i, coeff) in b.iter().enumerate() {
            r[shift + i] -= &lead_r * coeff;
        }
        trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

/// Primitive gcd in ℤ[x], with positive leading coefficient; gcd with the
/// zero polynomial is the primitive part of the other argument.
pub(crate) fn gcd(p: &[BigInt], q: &[BigInt]) -> Vec<BigInt> {
    let mut a = primitive_part(p);
    let mut b = primitive_part(q);
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
            continue;
        }
        let r = primitive_part(&pseudo_rem(&a, &b));
        a = b;
        b = r;
        trim(&mut b);
    }
    if a.last().is_some_and(Signed::is_negative) {
        for c in a.iter_mut() {
            *c = -std::mem::take(c);
        }
    }
    a
}

/// Exact long division; callers guarantee divisibility in ℤ[x].
pub(crate) fn div_exact(p: &[BigInt], d: &[BigInt]) -> Vec<BigInt> {
    assert!(!d.is_empty(), "division by the zero polynomial");
    if p.is_empty() {
        return Vec::new();
    }
    let mut rem = p.to_vec();
    let mut quot = vec![BigInt::zero(); p.len() - d.len() + 1];
    let lead_d = d.last().expect("nonzero divisor");
    while rem.len() >= d.len() {
        let shift = rem.len() - d.len();
        let (coeff, r) = rem.last().expect("trimmed").div_rem(lead_d);
        assert!(r.is_zero(), "inexact polynomial division");
        for (i, dc) in d.iter().enumerate() {
            rem[shift + i] -= &coeff * dc;
        }
        quot[shift] = coeff;
        trim(&mut rem);
        if rem.is_empty() {
            break;
        }
    }
    assert!(rem.is_empty(), "inexact polynomial division");
    quot
}

/// Evaluates the homogenization of p to total degree `deg` at (x0, x1):
/// Σ p[i]·x0^i·x1^(deg−i).
pub(crate) fn eval_homogeneous(p: &[BigInt], deg: usize, x0: &BigInt, x1: &BigInt) -> BigInt {
    let mut pow_x0 = Vec::with_capacity(deg + 1);
    let mut acc = BigInt::one();
    for _ in 0..=deg {
        pow_x0.push(acc.clone());
        acc *= x0;
    }
    let mut result = BigInt::zero();
    let mut pow_x1 = BigInt::one();
    // Walk from the x1-free term downward so x1 powers build up once.
    for i in (0..=deg).rev() {
        if let Some(c) = p.get(i) {
            if !c.is_zero() {
                result += c * &pow_x0[i] * &pow_x1;
            }
        }
        pow_x1 *= x1;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::big;

    fn poly(coeffs: &[i64]) -> Vec<BigInt> {
        let mut p: Vec<BigInt> = coeffs.iter().map(|&c| big(c)).collect();
        trim(&mut p);
        p
    }

    #[test]
    fn gcd_finds_common_factor() {
        // (x+1)(x+2) and (x+1)(x+3)
        let a = poly(&[2, 3, 1]);
        let b = poly(&[3, 4, 1]);
        assert_eq!(gcd(&a, &b), poly(&[1, 1]));
        assert_eq!(gcd(&a, &poly(&[])), a);
    }

    #[test]
    fn gcd_of_coprime_is_constant() {
        assert_eq!(gcd(&poly(&[0, 1]), &poly(&[1, 1])), poly(&[1]));
        assert_eq!(gcd(&poly(&[-2, 0, 4]), &poly(&[3])), poly(&[1]));
    }

    #[test]
    fn division_inverts_multiplication() {
        let a = poly(&[1, -4, 0, 2]);
        let b = poly(&[5, 1, 3]);
        assert_eq!(div_exact(&mul(&a, &b), &b), a);
    }

    #[test]
    fn homogeneous_eval() {
        // x^2 homogenized to degree 2: x0^2.
        assert_eq!(eval_homogeneous(&poly(&[0, 0, 1]), 2, &big(3), &big(5)), big(9));
        // constant 1 homogenized to degree 2: x1^2.
        assert_eq!(eval_homogeneous(&poly(&[1]), 2, &big(3), &big(5)), big(25));
        // x+1 homogenized to degree 1 at (1,0): x0 + x1 -> 1.
        assert_eq!(eval_homogeneous(&poly(&[1, 1]), 1, &big(1), &big(0)), big(1));
    }
}
