//! Heights on ℙ¹(ℚ) and exact bounded-height counting.
//!
//! For a point x = (x₀:x₁) in coprime integer coordinates the absolute
//! height is H(x) = max(|x₀|, |x₁|) and h(x) = log H(x). The number of
//! points with H ≤ N is exactly 4·Σ_{n≤N} φ(n): the coprime pairs in
//! `[1,N]²` number 2Σφ − 1, signs double them, and 0 and ∞ contribute two
//! more. Asymptotically this is 12/π²·N² + O(N log N), the leading
//! constant being the Schanuel constant of ℚ; [`schanuel_constant`]
//! evaluates the closed form for arbitrary user-supplied field invariants.
//!
//! Exact counts never pass through floating point; reals appear only in
//! logarithms, ratios and the Schanuel formula.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::Error;
use crate::rational::{ProjPoint, Rational};

/// H(x) = max(|x₀|, |x₁|) ≥ 1 on the canonical representative.
pub fn height(p: &ProjPoint) -> BigUint {
    p.height()
}

/// h(x) = log H(x); zero exactly on {0, ±1, ∞}, the points of height 1.
pub fn log_height(p: &ProjPoint) -> f64 {
    ln_biguint(&p.height())
}

/// Natural log of a positive big integer, without overflowing f64 range.
pub(crate) fn ln_biguint(n: &BigUint) -> f64 {
    assert!(!n.is_zero(), "log of zero");
    let bits = n.bits();
    if bits <= 53 {
        n.to_f64().expect("fits f64").ln()
    } else {
        let shift = bits - 53;
        let top = (n >> shift).to_f64().expect("53 bits fit f64");
        top.ln() + shift as f64 * std::f64::consts::LN_2
    }
}

/// Euler's totient for 1..=n by a linear sieve.
fn totient_sieve(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut phi = vec![0u64; n + 1];
    let mut primes: Vec<usize> = Vec::new();
    if n >= 1 {
        phi[1] = 1;
    }
    for i in 2..=n {
        if phi[i] == 0 {
            phi[i] = (i - 1) as u64;
            primes.push(i);
        }
        for &p in &primes {
            let ip = i * p;
            if ip > n {
                break;
            }
            if i % p == 0 {
                phi[ip] = phi[i] * p as u64;
                break;
            }
            phi[ip] = phi[i] * (p - 1) as u64;
        }
    }
    phi
}

/// Exact Σ_{k≤n} φ(k).
pub fn phi_summatory(n: u64) -> u128 {
    totient_sieve(n).iter().map(|&v| v as u128).sum()
}

/// Reusable prefix sums of the totient, for counting at many cutoffs.
pub struct HeightCounter {
    prefix: Vec<u128>,
}

impl HeightCounter {
    pub fn new(max: u64) -> HeightCounter {
        let phi = totient_sieve(max);
        let mut prefix = Vec::with_capacity(phi.len());
        let mut acc = 0u128;
        for v in phi {
            acc += v as u128;
            prefix.push(acc);
        }
        HeightCounter { prefix }
    }

    pub fn phi_summatory(&self, n: u64) -> u128 {
        self.prefix[n as usize]
    }

    /// card{x ∈ ℙ¹(ℚ) : H(x) ≤ n} = 4·Σφ(n).
    pub fn total_points(&self, n: u64) -> u128 {
        4 * self.phi_summatory(n)
    }
}

/// The census of points of height at most a cutoff.
#[derive(Clone, Debug, Serialize)]
pub struct HeightCensus {
    pub cutoff: u64,
    #[serde(rename = "totalPoints")]
    pub total_points: u128,
    /// totalPoints/N² as an exact fraction, rendered "p/q".
    #[serde(rename = "ratioExact")]
    pub ratio_exact: String,
    /// totalPoints/N² in double precision.
    pub ratio: f64,
}

/// Exact count of all x ∈ ℙ¹(ℚ) with H(x) ≤ n, via the totient sieve.
pub fn count_points_up_to(n: u64) -> HeightCensus {
    HeightCounter::new(n).census(n)
}

impl HeightCounter {
    pub fn census(&self, n: u64) -> HeightCensus {
        let total = self.total_points(n);
        let ratio_exact = Rational::new(
            num_bigint::BigInt::from(total),
            num_bigint::BigInt::from(n) * num_bigint::BigInt::from(n),
        )
        .expect("n >= 1");
        HeightCensus {
            cutoff: n,
            total_points: total,
            ratio: total as f64 / (n as f64 * n as f64),
            ratio_exact: ratio_exact.to_string(),
        }
    }
}

/// Invariants of a number field needed by the Schanuel constant.
#[derive(Clone, Debug)]
pub struct FieldInvariants {
    /// Number of real places.
    pub r1: u32,
    /// Number of complex places.
    pub r2: u32,
    /// Field discriminant, nonzero.
    pub discriminant: i64,
    /// Class number.
    pub class_number: u64,
    /// Regulator.
    pub regulator: f64,
    /// Number of roots of unity (at least 2).
    pub roots_of_unity: u64,
    /// ζ_K(2).
    pub zeta_at_2: f64,
}

impl FieldInvariants {
    /// The invariants of ℚ itself: (r₁, r₂, Δ, h, R, w) = (1, 0, 1, 1, 1, 2)
    /// and ζ(2) = π²/6.
    pub fn rationals() -> FieldInvariants {
        FieldInvariants {
            r1: 1,
            r2: 0,
            discriminant: 1,
            class_number: 1,
            regulator: 1.0,
            roots_of_unity: 2,
            zeta_at_2: std::f64::consts::PI * std::f64::consts::PI / 6.0,
        }
    }
}

/// The Schanuel constant evaluated from field invariants; when a residue of
/// ζ_K at 1 is supplied, the alternative residue form is evaluated too and
/// the relative discrepancy between the forms is reported.
#[derive(Clone, Debug, Serialize)]
pub struct SchanuelConstant {
    /// c_K = h·R·2^(3r₁+r₂−1)·(2π)^(2r₂) / (w·|Δ|·ζ_K(2)).
    pub value: f64,
    /// 2^(2r₁+r₂−1)·(2π)^(r₂)/√|Δ| · Res_{s=1}ζ_K(s)/ζ_K(2), if Res given.
    #[serde(rename = "residueForm", skip_serializing_if = "Option::is_none")]
    pub residue_form: Option<f64>,
    #[serde(rename = "relativeDiscrepancy", skip_serializing_if = "Option::is_none")]
    pub relative_discrepancy: Option<f64>,
}

/// Evaluates c_K, the leading coefficient of the bounded-height point count
/// c_K·N^(2d_K) of ℙ¹(K). For ℚ the value is 12/π².
pub fn schanuel_constant(
    degree: u32,
    inv: &FieldInvariants,
    residue: Option<f64>,
) -> Result<SchanuelConstant, Error> {
    if inv.r1 + 2 * inv.r2 != degree {
        return Err(Error::precondition(format!(
            "inconsistent invariants: r1 + 2*r2 = {} but degree = {degree}",
            inv.r1 + 2 * inv.r2
        )));
    }
    if degree == 0
        || inv.discriminant == 0
        || inv.class_number == 0
        || inv.regulator <= 0.0
        || inv.roots_of_unity < 2
        || inv.zeta_at_2 <= 0.0
    {
        return Err(Error::precondition("inconsistent invariants"));
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    let disc = (inv.discriminant as f64).abs();
    let value = inv.class_number as f64 * inv.regulator
        * 2f64.powi(3 * inv.r1 as i32 + inv.r2 as i32 - 1)
        * two_pi.powi(2 * inv.r2 as i32)
        / (inv.roots_of_unity as f64 * disc * inv.zeta_at_2);
    let residue_form = residue.map(|res| {
        2f64.powi(2 * inv.r1 as i32 + inv.r2 as i32 - 1) * two_pi.powi(inv.r2 as i32)
            / disc.sqrt()
            * res
            / inv.zeta_at_2
    });
    let relative_discrepancy = residue_form.map(|other| ((other - value) / value).abs());
    Ok(SchanuelConstant { value, residue_form, relative_discrepancy })
}

/// Streams every x ∈ ℙ¹(ℚ) with H(x) ≤ n exactly once, in a deterministic
/// order: 0, ∞, then each positive reduced p/q (by depth-first descent of
/// the Calkin-Wilf tree, pruned where heights exceed n) followed by its
/// negative. The tree descent is sound because both children strictly
/// increase the height.
pub fn for_each_point(n: u64, mut visit: impl FnMut(&ProjPoint)) {
    assert!(n >= 1, "cutoff must be at least 1");
    assert!(n <= 1 << 31, "exhaustive enumeration is limited to n <= 2^31");
    visit(&ProjPoint::zero());
    visit(&ProjPoint::infinity());
    let mut stack: Vec<(u64, u64)> = vec![(1, 1)];
    while let Some((p, q)) = stack.pop() {
        // Tree descent keeps the pair coprime, so no reduction is needed.
        let point = ProjPoint::from_coprime((p as i64).into(), (q as i64).into());
        visit(&point);
        let neg = ProjPoint::from_coprime((-(p as i64)).into(), (q as i64).into());
        visit(&neg);
        let sum = p + q;
        if sum <= n {
            stack.push((sum, q));
            stack.push((p, sum));
        }
    }
}

/// Result of an exhaustive height-density measurement at one cutoff.
#[derive(Clone, Debug, Serialize)]
pub struct DensityEstimate {
    pub cutoff: u64,
    pub count: u128,
    pub total: u128,
    pub ratio: f64,
}

/// Counts the points of height ≤ n satisfying the predicate and divides by
/// the exact total. Exhaustive, hence exact for every finite cutoff.
pub fn density_estimate(
    mut predicate: impl FnMut(&ProjPoint) -> bool,
    n: u64,
) -> DensityEstimate {
    let mut count: u128 = 0;
    for_each_point(n, |p| {
        if predicate(p) {
            count += 1;
        }
    });
    let total = HeightCounter::new(n).total_points(n);
    DensityEstimate { cutoff: n, count, total, ratio: count as f64 / total as f64 }
}

/// Membership test: positive rationals.
pub fn predicate_positive(p: &ProjPoint) -> bool {
    p.is_positive_rational()
}

/// Membership test: ℚ₊ with numerator·denominator even.
pub fn predicate_even_product(p: &ProjPoint) -> bool {
    use num_integer::Integer;
    p.is_positive_rational() && (p.x0().is_even() || p.x1().is_even())
}

/// Membership test: the unit interval [0, 1].
pub fn predicate_unit_interval(p: &ProjPoint) -> bool {
    use num_traits::Signed;
    !p.is_infinity() && !p.x0().is_negative() && p.x0().magnitude() <= p.x1().magnitude()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(a: i64, b: i64) -> ProjPoint {
        ProjPoint::new(a, b).unwrap()
    }

    #[test]
    fn height_examples() {
        assert_eq!(height(&pt(3, 5)), BigUint::from(5u32));
        assert_eq!(height(&ProjPoint::infinity()), BigUint::from(1u32));
        assert_eq!(height(&pt(7, -2)), BigUint::from(7u32));
    }

    #[test]
    fn log_height_examples() {
        assert_eq!(log_height(&pt(1, 1)), 0.0);
        assert!((log_height(&pt(3, 5)) - 5f64.ln()).abs() < 1e-12);
        assert_eq!(log_height(&ProjPoint::infinity()), 0.0);
    }

    #[test]
    fn ln_biguint_handles_huge_values() {
        let big = BigUint::from(3u32).pow(10_000);
        let expect = 10_000.0 * 3f64.ln();
        assert!((ln_biguint(&big) - expect).abs() / expect < 1e-12);
    }

    #[test]
    fn phi_summatory_examples() {
        assert_eq!(phi_summatory(1), 1);
        assert_eq!(phi_summatory(10), 32);
        let s = phi_summatory(100_000) as f64;
        let predicted = 3.0 / (std::f64::consts::PI * std::f64::consts::PI) * 1e10;
        assert!((s - predicted).abs() / predicted < 0.005);
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_points_up_to(1).total_points, 4);
        assert_eq!(count_points_up_to(2).total_points, 8);
        assert_eq!(count_points_up_to(1).ratio_exact, "4");
    }

    #[test]
    fn count_matches_brute_force_small() {
        for n in 1..=60u64 {
            let mut brute = 2u128; // 0 and inf
            for p in 1..=n {
                for q in 1..=n {
                    if num_integer::gcd(p, q) == 1 {
                        brute += 2;
                    }
                }
            }
            assert_eq!(count_points_up_to(n).total_points, brute, "n = {n}");
        }
    }

    #[test]
    fn enumeration_agrees_with_formula() {
        for n in [1u64, 2, 10, 50] {
            let mut seen = std::collections::HashSet::new();
            for_each_point(n, |p| {
                assert!(p.height_at_most(n));
                assert!(seen.insert(p.clone()), "duplicate {p}");
            });
            assert_eq!(seen.len() as u128, count_points_up_to(n).total_points);
        }
    }

    #[test]
    fn schanuel_rationals_gives_twelve_over_pi_squared() {
        let c = schanuel_constant(1, &FieldInvariants::rationals(), Some(1.0)).unwrap();
        let expect = 12.0 / (std::f64::consts::PI * std::f64::consts::PI);
        assert!((c.value - expect).abs() / expect < 1e-12);
        assert!(c.relative_discrepancy.unwrap() < 1e-12);
    }

    #[test]
    fn schanuel_linear_in_class_number() {
        let mut inv = FieldInvariants::rationals();
        let base = schanuel_constant(1, &inv, None).unwrap().value;
        inv.class_number = 2;
        let doubled = schanuel_constant(1, &inv, None).unwrap().value;
        assert!((doubled - 2.0 * base).abs() < 1e-12);
    }

    #[test]
    fn schanuel_gaussian_integers() {
        // Q(i): zeta_K(2) = zeta(2) * beta(2) with beta(2) Catalan's constant.
        let catalan = 0.915_965_594_177_219;
        let zeta2 = std::f64::consts::PI * std::f64::consts::PI / 6.0;
        let inv = FieldInvariants {
            r1: 0,
            r2: 1,
            discriminant: -4,
            class_number: 1,
            regulator: 1.0,
            roots_of_unity: 4,
            zeta_at_2: zeta2 * catalan,
        };
        let c = schanuel_constant(2, &inv, None).unwrap();
        let expect = std::f64::consts::PI * std::f64::consts::PI / (4.0 * inv.zeta_at_2);
        assert!((c.value - expect).abs() / expect < 1e-12);
        assert!((c.value - 1.6377).abs() < 1e-3);
        assert!(schanuel_constant(3, &inv, None).is_err());
    }

    #[test]
    fn density_positive_half() {
        let d = density_estimate(predicate_positive, 500);
        assert!((d.ratio - 0.5).abs() < 0.01, "ratio {}", d.ratio);
    }

    #[test]
    fn predicates() {
        assert!(predicate_even_product(&pt(1, 2)));
        assert!(!predicate_even_product(&pt(1, 3)));
        assert!(predicate_even_product(&pt(5, 2)));
        assert!(!predicate_even_product(&pt(-1, 2)));
        assert!(predicate_unit_interval(&pt(1, 2)));
        assert!(predicate_unit_interval(&ProjPoint::zero()));
        assert!(predicate_unit_interval(&pt(1, 1)));
        assert!(!predicate_unit_interval(&pt(3, 2)));
        assert!(!predicate_unit_interval(&pt(-1, 2)));
        assert!(!predicate_unit_interval(&ProjPoint::infinity()));
    }
}
