//! The Calkin-Wilf tree as an enumeration device.
//!
//! The tree is rooted at 1; the node p/q has left child p/(p+q) and right
//! child (p+q)/q, and every positive rational appears exactly once. Reading
//! the tree breadth-first gives a bijection ℕ₀ → ℚ₊ whose n-th value is
//! fusc(n)/fusc(n+1), where fusc is the Stern diatomic sequence counting
//! hyperbinary partitions. Newman's recurrence steps through the same list
//! without reference to the tree.
//!
//! A node's root-to-node move sequence is the reversal of its matrix word
//! in [`crate::monoid`]: the leftmost matrix factor is the last move.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::Error;
use crate::monoid::{omega_inverse_word, LRWord, Letter};
use crate::rational::Rational;

/// A root-to-node move sequence in the tree; `Letter::L` is a left move.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TreePath(Vec<Letter>);

impl TreePath {
    pub fn new(moves: Vec<Letter>) -> TreePath {
        TreePath(moves)
    }

    pub fn moves(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The matrix word of the node: the path read backwards.
    pub fn to_word(&self) -> LRWord {
        self.0.iter().rev().copied().collect()
    }

    /// Inverse of [`TreePath::to_word`].
    pub fn from_word(word: &LRWord) -> TreePath {
        TreePath(word.letters().iter().rev().copied().collect())
    }
}

impl fmt::Display for TreePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for mv in &self.0 {
            write!(f, "{mv}")?;
        }
        Ok(())
    }
}

impl FromStr for TreePath {
    type Err = Error;

    fn from_str(s: &str) -> Result<TreePath, Error> {
        Ok(TreePath(s.parse::<LRWord>()?.letters().to_vec()))
    }
}

/// A canonical finite continued fraction [a₀; a₁, …, a_k]: a₀ ≥ 0, inner
/// terms ≥ 1, final term ≥ 2 when k ≥ 1, and the value 1 is `[1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ContinuedFraction(Vec<BigUint>);

impl ContinuedFraction {
    pub fn new(terms: Vec<BigUint>) -> Result<ContinuedFraction, Error> {
        let cf = ContinuedFraction(terms);
        if cf.is_canonical() {
            Ok(cf)
        } else {
            Err(Error::NonCanonicalContinuedFraction)
        }
    }

    pub fn from_u64_terms(terms: &[u64]) -> Result<ContinuedFraction, Error> {
        ContinuedFraction::new(terms.iter().map(|&t| BigUint::from(t)).collect())
    }

    pub fn terms(&self) -> &[BigUint] {
        &self.0
    }

    fn is_canonical(&self) -> bool {
        match self.0.as_slice() {
            [] => false,
            [only] => !only.is_zero(),
            [_, mid @ .., last] => {
                mid.iter().all(|t| !t.is_zero()) && *last >= BigUint::from(2u32)
            }
        }
    }

    /// The Euclidean continued fraction of a positive rational.
    pub fn from_rational(q: &Rational) -> Result<ContinuedFraction, Error> {
        if !q.is_positive() {
            return Err(Error::NotPositiveRational);
        }
        let mut p = q.numer().magnitude().clone();
        let mut d = q.denom().magnitude().clone();
        let mut terms = Vec::new();
        loop {
            terms.push(&p / &d);
            let r = p % &d;
            if r.is_zero() {
                break;
            }
            p = std::mem::replace(&mut d, r);
        }
        Ok(ContinuedFraction(terms))
    }

    /// Evaluates the fraction back to a rational, from the last term inward.
    pub fn value(&self) -> Rational {
        let mut num = BigInt::from(self.0.last().expect("nonempty").clone());
        let mut den = BigInt::one();
        for term in self.0.iter().rev().skip(1) {
            // x -> term + 1/x
            let new_num = BigInt::from(term.clone()) * &num + &den;
            den = std::mem::replace(&mut num, new_num);
        }
        Rational::new(num, den).expect("den >= 1")
    }
}

impl fmt::Display for ContinuedFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}", self.0[0])?;
        for (i, term) in self.0.iter().enumerate().skip(1) {
            write!(f, "{}{term}", if i == 1 { ";" } else { "," })?;
        }
        write!(f, "]")
    }
}

/// Children (p/(p+q), (p+q)/q) of a positive rational p/q.
pub fn children(x: &Rational) -> Result<(Rational, Rational), Error> {
    if !x.is_positive() {
        return Err(Error::NotPositiveRational);
    }
    let sum = x.numer() + x.denom();
    let left = Rational::new(x.numer().clone(), sum.clone()).expect("p+q > 0");
    let right = Rational::new(sum, x.denom().clone()).expect("q > 0");
    Ok((left, right))
}

/// Parent of a non-root node, together with the side the node hangs on:
/// values below 1 are left children, values above 1 right children.
pub fn parent(x: &Rational) -> Result<(Rational, Letter), Error> {
    if !x.is_positive() {
        return Err(Error::NotPositiveRational);
    }
    if x.is_one() {
        return Err(Error::RootHasNoParent);
    }
    if x.numer() < x.denom() {
        let p = Rational::new(x.numer().clone(), x.denom() - x.numer()).expect("q > p");
        Ok((p, Letter::L))
    } else {
        let p = Rational::new(x.numer() - x.denom(), x.denom().clone()).expect("q > 0");
        Ok((p, Letter::R))
    }
}

/// Walks the heap bits of n+1, producing (fusc(n), fusc(n+1)).
fn cw_pair(n: &BigUint) -> (BigUint, BigUint) {
    let heap = n + 1u32;
    let mut p = BigUint::one();
    let mut q = BigUint::one();
    for i in (0..heap.bits().saturating_sub(1)).rev() {
        if heap.bit(i) {
            p += &q; // right move: (p+q)/q
        } else {
            q += &p; // left move: p/(p+q)
        }
    }
    (p, q)
}

/// The n-th entry (0-based) of the breadth-first listing of the tree;
/// equals fusc(n)/fusc(n+1).
pub fn index_to_rational(n: &BigUint) -> Rational {
    let (p, q) = cw_pair(n);
    Rational::new(BigInt::from(p), BigInt::from(q)).expect("q >= 1")
}

/// BFS index of a positive rational: with path bits b₁…b_d (left = 0,
/// right = 1), the index is 2^d − 1 + Σ bᵢ 2^{d−i}; equivalently, the
/// heap encoding 1·b₁⋯b_d read in binary, minus one.
pub fn rational_to_index(q: &Rational) -> Result<BigUint, Error> {
    let word = omega_inverse_word(q)?;
    let mut bits = Vec::with_capacity(word.len() + 1);
    bits.push(1u8);
    bits.extend(word.letters().iter().rev().map(|mv| (*mv == Letter::R) as u8));
    let heap = BigUint::from_radix_be(&bits, 2).expect("binary digits");
    Ok(heap - 1u32)
}

/// Root-to-node path of a positive rational.
pub fn path_of(q: &Rational) -> Result<TreePath, Error> {
    Ok(TreePath::from_word(&omega_inverse_word(q)?))
}

/// Value of the node a path leads to.
pub fn value_of_path(path: &TreePath) -> Rational {
    let mut p = BigInt::one();
    let mut q = BigInt::one();
    for mv in path.moves() {
        match mv {
            Letter::L => q += &p,
            Letter::R => p += &q,
        }
    }
    Rational::new(p, q).expect("q >= 1")
}

/// The Stern diatomic value f(n): f(0) = 1, f(2n+1) = f(n),
/// f(2n) = f(n) + f(n−1); also the number of hyperbinary partitions of n.
pub fn fusc(n: &BigUint) -> BigUint {
    cw_pair(n).0
}

pub fn fusc_u64(n: u64) -> BigUint {
    fusc(&BigUint::from(n))
}

/// Precomputed fusc values f(0), …, f(bound), filled by the recurrence.
/// Immutable once built, so shared concurrent reads are safe.
pub struct FuscTable(Vec<BigUint>);

impl FuscTable {
    pub fn new(bound: usize) -> FuscTable {
        let mut table = Vec::with_capacity(bound + 1);
        table.push(BigUint::one());
        for k in 1..=bound {
            let v = if k % 2 == 1 {
                table[k / 2].clone()
            } else {
                &table[k / 2] + &table[k / 2 - 1]
            };
            table.push(v);
        }
        FuscTable(table)
    }

    pub fn get(&self, n: usize) -> &BigUint {
        &self.0[n]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Newman's step a ↦ 1/(1 + ⌊a⌋ − {a}), exactly. Iterating it from 1
/// reproduces the breadth-first listing.
pub fn newman_next(a: &Rational) -> Result<Rational, Error> {
    if !a.is_positive() {
        return Err(Error::NotPositiveRational);
    }
    let denom = &(&Rational::one() + &Rational::from_integer(a.floor())) - &a.fract();
    Ok(denom.recip().expect("1 + floor - fract > 0 for positive input"))
}

/// Streaming breadth-first enumeration (index, value), starting at (0, 1).
pub fn enumerate() -> impl Iterator<Item = (u64, Rational)> {
    let mut state = Some(Rational::one());
    (0u64..).map_while(move |i| {
        let current = state.take()?;
        state = newman_next(&current).ok();
        Some((i, current))
    })
}

/// Translates a path to the continued fraction of its node label: the
/// matrix word (path reversed) is R^{a₀} L^{a₁} R^{a₂} ⋯ with the final
/// exponent one less than the final term. The empty path is the root, `[1]`.
pub fn path_to_cf(path: &TreePath) -> ContinuedFraction {
    let word = path.to_word();
    let letters = word.letters();
    if letters.is_empty() {
        return ContinuedFraction(vec![BigUint::one()]);
    }
    let mut terms: Vec<BigUint> = Vec::new();
    if letters[0] == Letter::L {
        terms.push(BigUint::zero());
    }
    let mut run_letter = letters[0];
    let mut run_len = 0u64;
    for &letter in letters {
        if letter == run_letter {
            run_len += 1;
        } else {
            terms.push(BigUint::from(run_len));
            run_letter = letter;
            run_len = 1;
        }
    }
    terms.push(BigUint::from(run_len + 1));
    ContinuedFraction(terms)
}

/// Inverse of [`path_to_cf`]; rejects non-canonical continued fractions.
pub fn cf_to_path(cf: &ContinuedFraction) -> Result<TreePath, Error> {
    if !cf.is_canonical() {
        return Err(Error::NonCanonicalContinuedFraction);
    }
    let mut letters: Vec<Letter> = Vec::new();
    let last = cf.0.len() - 1;
    for (i, term) in cf.0.iter().enumerate() {
        let letter = if i % 2 == 0 { Letter::R } else { Letter::L };
        let mut count = term
            .to_u64()
            .ok_or(Error::BudgetExceeded { requested: u128::MAX, budget: u64::MAX })?;
        if i == last {
            count -= 1; // canonical form guarantees the final term >= 1
        }
        letters.extend(std::iter::repeat_n(letter, count as usize));
    }
    Ok(TreePath::from_word(&LRWord::new(letters)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn children_examples() {
        assert_eq!(children(&Rational::one()).unwrap(), (q(1, 2), q(2, 1)));
        assert_eq!(children(&q(3, 2)).unwrap(), (q(3, 5), q(5, 2)));
        assert_eq!(children(&q(2, 3)).unwrap(), (q(2, 5), q(5, 3)));
        assert!(children(&q(-1, 2)).is_err());
    }

    #[test]
    fn parent_examples() {
        assert_eq!(parent(&q(1, 2)).unwrap(), (q(1, 1), Letter::L));
        assert_eq!(parent(&q(3, 5)).unwrap(), (q(3, 2), Letter::L));
        assert_eq!(parent(&q(7, 3)).unwrap(), (q(4, 3), Letter::R));
        assert_eq!(parent(&Rational::one()), Err(Error::RootHasNoParent));
    }

    #[test]
    fn index_examples() {
        let at = |n: u64| index_to_rational(&BigUint::from(n));
        assert_eq!(at(0), q(1, 1));
        assert_eq!(at(7), q(1, 4));
        assert_eq!(at(19), q(3, 8));
        // The first five layers of the tree, read breadth-first.
        let list = ["1", "1/2", "2", "1/3", "3/2", "2/3", "3", "1/4", "4/3", "3/5", "5/2",
            "2/5", "5/3", "3/4", "4", "1/5", "5/4", "4/7", "7/3", "3/8", "8/5", "5/7",
            "7/2", "2/7", "7/5", "5/8", "8/3", "3/7", "7/4", "4/5", "5"];
        for (i, expect) in list.iter().enumerate() {
            assert_eq!(at(i as u64).to_string(), *expect);
        }
    }

    #[test]
    fn index_inverse_examples() {
        assert_eq!(rational_to_index(&q(1, 1)).unwrap(), BigUint::from(0u32));
        assert_eq!(rational_to_index(&q(3, 8)).unwrap(), BigUint::from(19u32));
        assert_eq!(rational_to_index(&q(5, 1)).unwrap(), BigUint::from(30u32));
        assert!(rational_to_index(&q(0, 1)).is_err());
    }

    #[test]
    fn fusc_examples() {
        assert_eq!(fusc_u64(0), BigUint::from(1u32));
        assert_eq!(fusc_u64(4), BigUint::from(3u32));
        assert_eq!(fusc_u64(10), BigUint::from(5u32));
        let table = FuscTable::new(200);
        for n in 0..=200u64 {
            assert_eq!(*table.get(n as usize), fusc_u64(n));
        }
    }

    #[test]
    fn newman_examples() {
        assert_eq!(newman_next(&q(1, 1)).unwrap(), q(1, 2));
        assert_eq!(newman_next(&q(1, 2)).unwrap(), q(2, 1));
        assert_eq!(newman_next(&q(2, 1)).unwrap(), q(1, 3));
    }

    #[test]
    fn enumerate_streams_the_list() {
        let head: Vec<String> = enumerate().take(3).map(|(_, v)| v.to_string()).collect();
        assert_eq!(head, ["1", "1/2", "2"]);
    }

    #[test]
    fn path_cf_examples() {
        let path = |s: &str| s.parse::<TreePath>().unwrap();
        assert_eq!(path_to_cf(&TreePath::default()), ContinuedFraction::from_u64_terms(&[1]).unwrap());
        assert_eq!(
            path_to_cf(&path("LRL")),
            ContinuedFraction::from_u64_terms(&[0, 1, 1, 2]).unwrap()
        );
        assert_eq!(
            path_to_cf(&path("RLR")),
            ContinuedFraction::from_u64_terms(&[1, 1, 2]).unwrap()
        );

        assert_eq!(cf_to_path(&ContinuedFraction::from_u64_terms(&[1]).unwrap()), Ok(TreePath::default()));
        assert_eq!(
            cf_to_path(&ContinuedFraction::from_u64_terms(&[0, 1, 1, 2]).unwrap()),
            Ok(path("LRL"))
        );
        assert_eq!(
            cf_to_path(&ContinuedFraction::from_u64_terms(&[5]).unwrap()),
            Ok(path("RRRR"))
        );
        assert_eq!(
            ContinuedFraction::from_u64_terms(&[0, 1, 1, 1]),
            Err(Error::NonCanonicalContinuedFraction)
        );
        assert_eq!(ContinuedFraction::from_u64_terms(&[0]), Err(Error::NonCanonicalContinuedFraction));
    }

    #[test]
    fn cf_matches_euclid() {
        assert_eq!(
            ContinuedFraction::from_rational(&q(3, 5)).unwrap(),
            ContinuedFraction::from_u64_terms(&[0, 1, 1, 2]).unwrap()
        );
        assert_eq!(
            ContinuedFraction::from_rational(&q(5, 3)).unwrap(),
            ContinuedFraction::from_u64_terms(&[1, 1, 2]).unwrap()
        );
        assert_eq!(ContinuedFraction::from_rational(&q(5, 3)).unwrap().value(), q(5, 3));
    }

    #[test]
    fn paths_and_words_are_reversals() {
        let value = q(4, 7);
        let path = path_of(&value).unwrap();
        assert_eq!(path.to_string(), "LLRL");
        assert_eq!(value_of_path(&path), value);
        assert_eq!(path.to_word().to_string(), "LRLL");
    }

    #[test]
    fn display_forms() {
        assert_eq!(
            ContinuedFraction::from_u64_terms(&[0, 1, 1, 2]).unwrap().to_string(),
            "[0;1,1,2]"
        );
        assert_eq!(ContinuedFraction::from_u64_terms(&[5]).unwrap().to_string(), "[5]");
    }
}
