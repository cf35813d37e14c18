//! Finite forests of Möbius maps that partition ℚ₊ or ℚ₊ᵉᵛᵉⁿ.
//!
//! For k ≥ 2 the family 𝒢ₖ of 2k Möbius transformations, applied from the
//! 2k−1 roots 1/2, …, (k−1)/k, 1, k/(k−1), …, 2, generates disjoint orbit
//! trees whose union is all of ℚ₊. The families ℋₖ (2k+1 maps, 2k roots)
//! do the same for the positive rationals p/q with pq even. The
//! [`verify_partition`] checker expands the forest and confronts it with an
//! exhaustive enumeration of the target set up to a height bound.
//!
//! Both families are palindromic: the descending half of the map list
//! consists of the transposes of the ascending half in reverse order. The
//! ℋₖ pivot `[[k+1,k],[k,k+1]]` is symmetric and therefore appears only
//! once, which is where the odd count 2k+1 comes from; the partition
//! checker is the arbiter for the construction.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::Error;
use crate::monoid::Mat2;
use crate::rational::{ProjPoint, Rational};

/// The membership predicate a forest is expected to enumerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetSet {
    /// All positive rationals.
    AllPositive,
    /// Positive p/q in lowest terms with pq even.
    EvenProduct,
}

impl TargetSet {
    pub fn contains(&self, q: &Rational) -> bool {
        match self {
            TargetSet::AllPositive => q.is_positive(),
            TargetSet::EvenProduct => is_even_rational(q),
        }
    }
}

/// True when numerator·denominator is even; with p, q coprime this is
/// membership in ℚ₊ᵉᵛᵉⁿ for positive input.
pub fn is_even_rational(q: &Rational) -> bool {
    use num_integer::Integer;
    q.numer().is_even() || q.denom().is_even()
}

/// An ordered family of Möbius maps with root values and a target set.
#[derive(Clone, Debug)]
pub struct ForestSpec {
    maps: Vec<Mat2>,
    roots: Vec<Rational>,
    target: TargetSet,
    label: String,
}

impl ForestSpec {
    /// Validates and canonicalizes a forest description: maps must have
    /// nonnegative entries and nonzero determinant, roots must be pairwise
    /// distinct members of the target set.
    pub fn new(
        label: impl Into<String>,
        maps: Vec<Mat2>,
        roots: Vec<Rational>,
        target: TargetSet,
    ) -> Result<ForestSpec, Error> {
        if maps.is_empty() || roots.is_empty() {
            return Err(Error::precondition("a forest needs at least one map and one root"));
        }
        let maps = maps
            .into_iter()
            .map(|m| {
                use num_traits::Signed;
                if m.a.is_negative() || m.b.is_negative() || m.c.is_negative() || m.d.is_negative()
                {
                    return Err(Error::precondition("forest maps must have nonnegative entries"));
                }
                m.pgl2_canonical()
            })
            .collect::<Result<Vec<_>, _>>()?;
        for (i, r) in roots.iter().enumerate() {
            if !target.contains(r) {
                return Err(Error::precondition(format!("root {r} is outside the target set")));
            }
            if roots[..i].contains(r) {
                return Err(Error::precondition(format!("duplicate root {r}")));
            }
        }
        Ok(ForestSpec { maps, roots, target, label: label.into() })
    }

    pub fn maps(&self) -> &[Mat2] {
        &self.maps
    }

    pub fn roots(&self) -> &[Rational] {
        &self.roots
    }

    pub fn target(&self) -> TargetSet {
        self.target
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

/// The Calkin-Wilf tree as a one-root forest: maps {L, R}, root 1.
pub fn calkin_wilf_spec() -> ForestSpec {
    ForestSpec::new(
        "calkin-wilf",
        vec![Mat2::generator_l(), Mat2::generator_r()],
        vec![Rational::one()],
        TargetSet::AllPositive,
    )
    .expect("valid by construction")
}

/// Chan's family 𝒢ₖ (k ≥ 2): 2k maps and 2k−1 roots partitioning ℚ₊.
///
/// The maps are the ascending chain `[[1,0],[2,1]], [[2,1],[3,2]], …,
/// [[k−1,k−2],[k,k−1]]`, the pivot `[[k,k−1],[k,k]]`, and the transposes
/// of these in reverse order; the roots are 1/2, 2/3, …, (k−1)/k, 1,
/// k/(k−1), …, 3/2, 2.
pub fn gk_family(k: u64) -> Result<ForestSpec, Error> {
    if k < 2 {
        return Err(Error::precondition("the G family needs k >= 2"));
    }
    let k = k as i64;
    let mut ascent: Vec<Mat2> = (1..k).map(|j| Mat2::new(j, j - 1, j + 1, j)).collect();
    ascent.push(Mat2::new(k, k - 1, k, k));
    let maps = mirror_closure(ascent);
    let mut roots: Vec<Rational> =
        (1..k).map(|j| Rational::new(j, j + 1).expect("j+1 > 0")).collect();
    roots.push(Rational::one());
    roots.extend((1..k).rev().map(|j| Rational::new(j + 1, j).expect("j > 0")));
    ForestSpec::new(format!("G{k}"), maps, roots, TargetSet::AllPositive)
}

/// Chan's family ℋₖ (k ≥ 1): 2k+1 maps and 2k roots partitioning ℚ₊ᵉᵛᵉⁿ.
///
/// The maps are the ascending chain `[[1,0],[2,1]], …, [[k,k−1],[k+1,k]]`,
/// the symmetric pivot `[[k+1,k],[k,k+1]]`, and the transposed chain in
/// reverse order; the roots are 1/2, …, k/(k+1), (k+1)/k, …, 2.
pub fn hk_family(k: u64) -> Result<ForestSpec, Error> {
    if k < 1 {
        return Err(Error::precondition("the H family needs k >= 1"));
    }
    let k = k as i64;
    let mut ascent: Vec<Mat2> = (1..=k).map(|j| Mat2::new(j, j - 1, j + 1, j)).collect();
    ascent.push(Mat2::new(k + 1, k, k, k + 1));
    let maps = mirror_closure(ascent);
    let mut roots: Vec<Rational> =
        (1..=k).map(|j| Rational::new(j, j + 1).expect("j+1 > 0")).collect();
    roots.extend((1..=k).rev().map(|j| Rational::new(j + 1, j).expect("j > 0")));
    ForestSpec::new(format!("H{k}"), maps, roots, TargetSet::EvenProduct)
}

/// Appends the transposes of the given chain in reverse order, dropping
/// the mirror of the final element when it is symmetric (the ℋ pivot).
fn mirror_closure(ascent: Vec<Mat2>) -> Vec<Mat2> {
    let mut maps = ascent.clone();
    for m in ascent.iter().rev() {
        let t = Mat2 { a: m.a.clone(), b: m.c.clone(), c: m.b.clone(), d: m.d.clone() };
        if &t != m {
            maps.push(t);
        }
    }
    maps
}

/// One duplicated value found during forest expansion.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct DuplicateEntry {
    pub value: Rational,
    /// Indices of the orbits (roots) in which the value appeared; a
    /// repeated index means a collision inside a single orbit tree.
    pub orbits: Vec<usize>,
}

/// Parameters echoed into a [`PartitionReport`].
#[derive(Clone, Debug, Serialize)]
pub struct PartitionParameters {
    pub family: String,
    #[serde(rename = "heightBound")]
    pub height_bound: u64,
    #[serde(rename = "depthBound")]
    pub depth_bound: u32,
    /// Orbit values above this ceiling are not expanded further.
    #[serde(rename = "expansionCeiling")]
    pub expansion_ceiling: u64,
}

/// Outcome of a partition check.
///
/// A clean report has no duplicates, no foreign values and no unfound
/// target members. Target members the expansion never produced are
/// reported as `missing` when the expansion was exhaustive (every branch
/// died against the height ceiling before the depth bound), and as
/// `inconclusive_missing` when the depth bound cut live branches, since a
/// deeper run could still produce them.
#[derive(Clone, Debug, Serialize)]
pub struct PartitionReport {
    #[serde(rename = "countsPerOrbit")]
    pub counts_per_orbit: Vec<u64>,
    pub duplicates: Vec<DuplicateEntry>,
    pub foreign: Vec<Rational>,
    pub missing: Vec<Rational>,
    #[serde(rename = "inconclusiveMissing")]
    pub inconclusive_missing: Vec<Rational>,
    /// False when the depth bound truncated branches still inside the
    /// expansion ceiling.
    pub conclusive: bool,
    pub parameters: PartitionParameters,
}

impl PartitionReport {
    pub fn is_clean(&self) -> bool {
        self.duplicates.is_empty()
            && self.foreign.is_empty()
            && self.missing.is_empty()
            && self.inconclusive_missing.is_empty()
    }
}

/// Heights may dip under these maps (the ℋ pivots shrink by a bounded
/// factor when the determinant cancels), so expansion continues past the
/// height bound up to this multiple of it before a branch is abandoned.
const EXPANSION_MARGIN: u64 = 4;

/// Expands every root's orbit tree to `depth_bound`, collects the values of
/// height ≤ `height_bound`, and compares them with an exhaustive
/// enumeration of the target set: duplicate values (within or across
/// orbits), values outside the target set, and target members never
/// produced are all reported. Duplicate detection order is fixed by
/// sorting values before reporting.
pub fn verify_partition(
    spec: &ForestSpec,
    height_bound: u64,
    depth_bound: u32,
) -> PartitionReport {
    let ceiling = height_bound.saturating_mul(EXPANSION_MARGIN);
    let mut counts = vec![0u64; spec.roots.len()];
    let mut seen: HashMap<Rational, Vec<usize>> = HashMap::new();
    let mut depth_frontier_cut = false;

    for (orbit, root) in spec.roots.iter().enumerate() {
        let mut level: Vec<ProjPoint> = vec![ProjPoint::from_rational(root)];
        for depth in 0..=depth_bound {
            let mut next = Vec::new();
            for point in &level {
                if point.height_at_most(height_bound) {
                    counts[orbit] += 1;
                    let value = point.to_rational().expect("orbit values are finite");
                    seen.entry(value).or_default().push(orbit);
                }
                if !point.height_at_most(ceiling) {
                    continue;
                }
                if depth == depth_bound {
                    // Still inside the ceiling but out of depth: a deeper
                    // expansion could reach more of the target set.
                    depth_frontier_cut = true;
                    continue;
                }
                for m in &spec.maps {
                    next.push(m.apply(point));
                }
            }
            level = next;
            if level.is_empty() {
                break;
            }
        }
    }

    let mut duplicates: Vec<DuplicateEntry> = seen
        .iter()
        .filter(|(_, orbits)| orbits.len() > 1)
        .map(|(value, orbits)| DuplicateEntry { value: value.clone(), orbits: orbits.clone() })
        .collect();
    duplicates.sort_by(|x, y| x.value.cmp(&y.value));

    let mut foreign: Vec<Rational> = seen
        .keys()
        .filter(|v| !spec.target.contains(v))
        .cloned()
        .collect();
    foreign.sort();

    let mut unfound: Vec<Rational> = Vec::new();
    crate::heights::for_each_point(height_bound, |p| {
        if !p.is_positive_rational() {
            return;
        }
        let q = p.to_rational().expect("finite");
        if spec.target.contains(&q) && !seen.contains_key(&q) {
            unfound.push(q);
        }
    });
    unfound.sort();
    let (missing, inconclusive_missing) = if depth_frontier_cut {
        (Vec::new(), unfound)
    } else {
        (unfound, Vec::new())
    };

    PartitionReport {
        counts_per_orbit: counts,
        duplicates,
        foreign,
        missing,
        inconclusive_missing,
        conclusive: !depth_frontier_cut,
        parameters: PartitionParameters {
            family: spec.label.clone(),
            height_bound,
            depth_bound,
            expansion_ceiling: ceiling,
        },
    }
}
