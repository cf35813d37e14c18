//! The free monoid SL₂(ℕ₀) of nonnegative unimodular 2×2 matrices.
//!
//! SL₂(ℕ₀) is freely generated by
//!
//! ```text
//! L = [1 0]      R = [1 1]
//!     [1 1]          [0 1]
//! ```
//!
//! so every element has a unique factorization as a word over {L, R}; the
//! factorization is found by greedy row peeling, and the orbit map
//! Ω(γ) = γ(1) is a bijection onto the positive rationals. Words multiply on
//! the left in the directed Cayley graph: the edge labelled α leads from μ
//! to αμ.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::rational::{ProjPoint, Rational};

/// A generator of SL₂(ℕ₀).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    L,
    R,
}

impl Letter {
    pub fn matrix(self) -> Mat2 {
        match self {
            Letter::L => Mat2::generator_l(),
            Letter::R => Mat2::generator_r(),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::L => write!(f, "L"),
            Letter::R => write!(f, "R"),
        }
    }
}

/// A finite word over {L, R}; the empty word is the monoid identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LRWord(Vec<Letter>);

impl LRWord {
    pub fn new(letters: Vec<Letter>) -> LRWord {
        LRWord(letters)
    }

    pub fn empty() -> LRWord {
        LRWord(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The word read backwards; this is the root-to-node move sequence of
    /// the tree node the word labels.
    pub fn reversed(&self) -> LRWord {
        LRWord(self.0.iter().rev().copied().collect())
    }
}

impl FromIterator<Letter> for LRWord {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> LRWord {
        LRWord(iter.into_iter().collect())
    }
}

impl fmt::Display for LRWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for letter in &self.0 {
            write!(f, "{letter}")?;
        }
        Ok(())
    }
}

impl serde::Serialize for LRWord {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl FromStr for LRWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<LRWord, Error> {
        s.trim()
            .char_indices()
            .map(|(i, ch)| match ch {
                'L' => Ok(Letter::L),
                'R' => Ok(Letter::R),
                _ => Err(Error::parse(i, format!("expected 'L' or 'R', found {ch:?}"))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(LRWord)
    }
}

/// A 2×2 matrix over arbitrary-precision integers, row-major.
///
/// The same type serves two roles: elements of the monoid SL₂(ℕ₀)
/// (nonnegative entries, determinant 1) and representatives of Möbius
/// transformations in PGL₂(ℚ) (nonzero determinant, canonicalized via
/// [`Mat2::pgl2_canonical`]).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl Mat2 {
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Mat2 {
        Mat2 { a: a.into(), b: b.into(), c: c.into(), d: d.into() }
    }

    pub fn identity() -> Mat2 {
        Mat2::new(1, 0, 0, 1)
    }

    /// L = `[[1,0],[1,1]]`, the left-child map x ↦ x/(x+1).
    pub fn generator_l() -> Mat2 {
        Mat2::new(1, 0, 1, 1)
    }

    /// R = `[[1,1],[0,1]]`, the right-child map x ↦ x+1.
    pub fn generator_r() -> Mat2 {
        Mat2::new(1, 1, 0, 1)
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_one()
    }

    /// Membership in SL₂(ℕ₀): nonnegative entries and determinant 1.
    pub fn is_sl2n0(&self) -> bool {
        !self.a.is_negative()
            && !self.b.is_negative()
            && !self.c.is_negative()
            && !self.d.is_negative()
            && self.det().is_one()
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        Mat2 {
            a: &self.a * &rhs.a + &self.b * &rhs.c,
            b: &self.a * &rhs.b + &self.b * &rhs.d,
            c: &self.c * &rhs.a + &self.d * &rhs.c,
            d: &self.c * &rhs.b + &self.d * &rhs.d,
        }
    }

    /// Möbius action on ℙ¹(ℚ) by homogeneous evaluation. Requires a
    /// nonsingular matrix; only then can (0:0) never arise.
    pub fn apply(&self, p: &ProjPoint) -> ProjPoint {
        ProjPoint::new(&self.a * p.x0() + &self.b * p.x1(), &self.c * p.x0() + &self.d * p.x1())
            .expect("nonsingular matrix maps points to points")
    }

    /// Entry sum Σ(M) = a+b+c+d, the induction measure for row peeling.
    pub fn entry_sum(&self) -> BigInt {
        &self.a + &self.b + &self.c + &self.d
    }

    /// Canonical PGL₂(ℚ) representative: integer entries with gcd 1 and the
    /// first nonzero entry in reading order positive.
    pub fn pgl2_canonical(&self) -> Result<Mat2, Error> {
        if self.det().is_zero() {
            return Err(Error::SingularMatrix);
        }
        let mut g = self.a.gcd(&self.b);
        g = g.gcd(&self.c);
        g = g.gcd(&self.d);
        let mut m = Mat2 { a: &self.a / &g, b: &self.b / &g, c: &self.c / &g, d: &self.d / &g };
        let lead_negative = [&m.a, &m.b, &m.c, &m.d]
            .into_iter()
            .find(|e| !e.is_zero())
            .map(|e| e.is_negative())
            .unwrap_or(false);
        if lead_negative {
            m = Mat2 { a: -m.a, b: -m.b, c: -m.c, d: -m.d };
        }
        Ok(m)
    }

}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.a, self.b, self.c, self.d)
    }
}

impl serde::Serialize for Mat2 {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl FromStr for Mat2 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mat2, Error> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 4 {
            return Err(Error::parse(0, "matrix form is a,b,c,d"));
        }
        let mut entries = Vec::with_capacity(4);
        for part in parts {
            let e = BigInt::from_str(part.trim())
                .map_err(|_| Error::parse(0, format!("expected an integer, found {part:?}")))?;
            entries.push(e);
        }
        let mut it = entries.into_iter();
        Ok(Mat2 {
            a: it.next().unwrap(),
            b: it.next().unwrap(),
            c: it.next().unwrap(),
            d: it.next().unwrap(),
        })
    }
}

/// Multiplies out a word, leftmost letter first; the empty word gives the
/// identity matrix.
pub fn compose_word(word: &LRWord) -> Mat2 {
    word.letters()
        .iter()
        .fold(Mat2::identity(), |acc, letter| acc.mul(&letter.matrix()))
}

/// Recovers the unique factorization of an SL₂(ℕ₀) matrix.
///
/// While the matrix is not the identity, exactly one generator can be
/// peeled off the left: L when the second row dominates the first
/// entrywise (strictly in at least one coordinate), R when the first
/// dominates the second. Each peel subtracts one row from the other and
/// strictly decreases the entry sum, so the loop terminates.
pub fn decompose(m: &Mat2) -> Result<LRWord, Error> {
    if !m.is_sl2n0() {
        return Err(Error::NotInSl2N0);
    }
    let mut m = m.clone();
    let mut letters = Vec::new();
    while !m.is_identity() {
        let row2_dominates = m.c >= m.a && m.d >= m.b;
        if row2_dominates {
            letters.push(Letter::L);
            m.c -= &m.a;
            m.d -= &m.b;
        } else {
            letters.push(Letter::R);
            m.a -= &m.c;
            m.b -= &m.d;
        }
    }
    Ok(LRWord(letters))
}

/// The inequality (a−c)(b−d) ≥ 0, valid on every non-identity element of
/// SL₂(ℕ₀); it is what makes the row-peeling trichotomy work.
pub fn lemma_sign_check(m: &Mat2) -> Result<bool, Error> {
    if !m.is_sl2n0() {
        return Err(Error::NotInSl2N0);
    }
    if m.is_identity() {
        return Err(Error::IdentityExcluded);
    }
    Ok(!((&m.a - &m.c) * (&m.b - &m.d)).is_negative())
}

/// Ω(M) = M(1) = (a+b)/(c+d), the bijection SL₂(ℕ₀) → ℚ₊.
///
/// Callers must pass an SL₂(ℕ₀) element; c+d ≥ 1 holds there, so the
/// division is always defined.
pub fn omega(m: &Mat2) -> Rational {
    debug_assert!(m.is_sl2n0());
    Rational::new(&m.a + &m.b, &m.c + &m.d).expect("c+d >= 1 in SL2(N0)")
}

/// Inverse of Ω by Euclidean descent: a value below 1 unpeels an L, a value
/// above 1 unpeels an R, until 1 is reached. Runs of equal letters are
/// processed per Euclidean quotient, so the cost matches the gcd algorithm.
pub fn omega_inverse(q: &Rational) -> Result<Mat2, Error> {
    descend(q, |m, letter, count| {
        let run = match letter {
            Letter::L => Mat2::new(1, 0, count.clone(), 1),
            Letter::R => Mat2::new(1, count.clone(), 0, 1),
        };
        *m = m.mul(&run);
    })
}

/// Longest factorization word that will be materialized letter by letter.
const MAX_WORD_LETTERS: u64 = 1 << 27;

/// The factorization word of `omega_inverse(q)`; its length is the sum of
/// the continued-fraction quotients of `q` minus one, so it is refused
/// (budget error) beyond 2^27 letters.
pub fn omega_inverse_word(q: &Rational) -> Result<LRWord, Error> {
    let mut letters = Vec::new();
    let mut total: u128 = 0;
    descend(q, |_, letter, count| {
        total = total.saturating_add(count.to_u64().map_or(u128::MAX, u128::from));
        if total <= MAX_WORD_LETTERS as u128 {
            letters.extend(std::iter::repeat_n(letter, count.to_u64().unwrap() as usize));
        }
    })?;
    if total > MAX_WORD_LETTERS as u128 {
        return Err(Error::BudgetExceeded { requested: total, budget: MAX_WORD_LETTERS });
    }
    Ok(LRWord(letters))
}

fn descend(
    q: &Rational,
    mut on_run: impl FnMut(&mut Mat2, Letter, &BigInt),
) -> Result<Mat2, Error> {
    if !q.is_positive() {
        return Err(Error::NotPositiveRational);
    }
    let mut p = q.numer().clone();
    let mut qq = q.denom().clone();
    let mut m = Mat2::identity();
    while p != qq {
        if p < qq {
            // k leading Ls, k maximal with k*p < q.
            let k = (&qq - 1u32) / &p;
            qq -= &k * &p;
            on_run(&mut m, Letter::L, &k);
        } else {
            let k = (&p - 1u32) / &qq;
            p -= &k * &qq;
            on_run(&mut m, Letter::R, &k);
        }
    }
    Ok(m)
}

/// For coprime positive p, q, the unique a,b,c,d ≥ 0 with a+b = p, c+d = q
/// and ad−bc = 1; these are the entries of `omega_inverse(p/q)`.
pub fn solve_diophantine(p: &BigInt, q: &BigInt) -> Result<(BigInt, BigInt, BigInt, BigInt), Error> {
    if !p.is_positive() || !q.is_positive() {
        return Err(Error::precondition("p and q must be positive"));
    }
    if !p.gcd(q).is_one() {
        return Err(Error::NotCoprime);
    }
    let value = Rational::new(p.clone(), q.clone()).expect("q > 0");
    let m = omega_inverse(&value)?;
    Ok((m.a, m.b, m.c, m.d))
}

/// All edges of the directed Cayley graph of (SL₂(ℕ₀), {L, R}) whose source
/// word has length ≤ `depth`. The edge labelled α leads from μ to the word
/// αμ (left multiplication), i.e. the label is prepended.
pub fn cayley_edges(depth: usize) -> Vec<(LRWord, Letter, LRWord)> {
    let mut edges = Vec::new();
    let mut level: Vec<LRWord> = vec![LRWord::empty()];
    for _ in 0..=depth {
        let mut next = Vec::with_capacity(level.len() * 2);
        for source in &level {
            for letter in [Letter::L, Letter::R] {
                let mut target = Vec::with_capacity(source.len() + 1);
                target.push(letter);
                target.extend_from_slice(source.letters());
                let target = LRWord(target);
                edges.push((source.clone(), letter, target.clone()));
                next.push(target);
            }
        }
        level = next;
    }
    edges
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::big;

    fn word(s: &str) -> LRWord {
        s.parse().unwrap()
    }

    #[test]
    fn compose_examples() {
        assert_eq!(compose_word(&LRWord::empty()), Mat2::identity());
        assert_eq!(compose_word(&word("L")), Mat2::new(1, 0, 1, 1));
        assert_eq!(compose_word(&word("LRL")), Mat2::new(2, 1, 3, 2));
    }

    #[test]
    fn decompose_examples() {
        assert_eq!(decompose(&Mat2::identity()).unwrap(), LRWord::empty());
        assert_eq!(decompose(&Mat2::new(2, 1, 3, 2)).unwrap(), word("LRL"));
        assert_eq!(decompose(&Mat2::new(1, 4, 0, 1)).unwrap(), word("RRRR"));
        assert_eq!(decompose(&Mat2::new(1, 1, 1, 1)), Err(Error::NotInSl2N0));
        assert_eq!(decompose(&Mat2::new(-1, 0, 0, -1)), Err(Error::NotInSl2N0));
    }

    #[test]
    fn roundtrip_short_words() {
        // Exhaustive over all words of length <= 8.
        for len in 0..=8u32 {
            for mask in 0..(1u32 << len) {
                let letters = (0..len)
                    .map(|i| if mask >> i & 1 == 0 { Letter::L } else { Letter::R })
                    .collect();
                let w = LRWord::new(letters);
                assert_eq!(decompose(&compose_word(&w)).unwrap(), w);
            }
        }
    }

    #[test]
    fn sign_lemma_examples() {
        assert_eq!(lemma_sign_check(&Mat2::new(2, 1, 3, 2)), Ok(true));
        assert_eq!(lemma_sign_check(&Mat2::generator_r()), Ok(true));
        assert_eq!(lemma_sign_check(&Mat2::generator_l()), Ok(true));
        assert_eq!(lemma_sign_check(&Mat2::identity()), Err(Error::IdentityExcluded));
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega(&Mat2::identity()), Rational::one());
        assert_eq!(omega(&Mat2::generator_l()), Rational::new(1, 2).unwrap());
        assert_eq!(omega(&Mat2::new(2, 1, 3, 2)), Rational::new(3, 5).unwrap());
    }

    #[test]
    fn omega_inverse_examples() {
        assert_eq!(omega_inverse(&Rational::one()).unwrap(), Mat2::identity());
        assert_eq!(omega_inverse(&Rational::new(3, 5).unwrap()).unwrap(), Mat2::new(2, 1, 3, 2));
        assert_eq!(omega_inverse(&Rational::new(5, 1).unwrap()).unwrap(), Mat2::new(1, 4, 0, 1));
        assert_eq!(omega_inverse(&Rational::new(-3, 5).unwrap()), Err(Error::NotPositiveRational));
        assert_eq!(omega_inverse_word(&Rational::new(3, 5).unwrap()).unwrap(), word("LRL"));
    }

    #[test]
    fn diophantine_examples() {
        assert_eq!(
            solve_diophantine(&big(1), &big(1)).unwrap(),
            (big(1), big(0), big(0), big(1))
        );
        assert_eq!(
            solve_diophantine(&big(3), &big(5)).unwrap(),
            (big(2), big(1), big(3), big(2))
        );
        assert_eq!(
            solve_diophantine(&big(5), &big(1)).unwrap(),
            (big(1), big(4), big(0), big(1))
        );
        assert_eq!(solve_diophantine(&big(4), &big(6)), Err(Error::NotCoprime));
    }

    #[test]
    fn cayley_edge_counts() {
        let depth0 = cayley_edges(0);
        assert_eq!(depth0.len(), 2);
        assert_eq!(depth0[0], (LRWord::empty(), Letter::L, word("L")));
        assert_eq!(depth0[1], (LRWord::empty(), Letter::R, word("R")));
        assert_eq!(cayley_edges(1).len(), 6);
        assert_eq!(cayley_edges(2).len(), 14);
        // Left multiplication: the label is prepended.
        let edges = cayley_edges(1);
        assert!(edges.contains(&(word("R"), Letter::L, word("LR"))));
    }

    #[test]
    fn pgl2_canonical_examples() {
        assert_eq!(Mat2::new(2, 0, 0, 2).pgl2_canonical().unwrap(), Mat2::identity());
        assert_eq!(
            Mat2::new(-2, 4, 0, -6).pgl2_canonical().unwrap(),
            Mat2::new(1, -2, 0, 3)
        );
        assert_eq!(Mat2::new(1, 2, 2, 4).pgl2_canonical(), Err(Error::SingularMatrix));
        assert_eq!(
            Mat2::new(0, -1, 1, 0).pgl2_canonical().unwrap(),
            Mat2::new(0, 1, -1, 0)
        );
    }

    #[test]
    fn sigma_descent_terminates_with_decreasing_sum() {
        let m = compose_word(&word("LRLLRRLRL"));
        let mut current = m.clone();
        let mut last_sum = current.entry_sum();
        while !current.is_identity() {
            if current.c >= current.a && current.d >= current.b {
                current.c -= &current.a;
                current.d -= &current.b;
            } else {
                current.a -= &current.c;
                current.b -= &current.d;
            }
            let sum = current.entry_sum();
            assert!(sum < last_sum);
            last_sum = sum;
        }
    }
}
