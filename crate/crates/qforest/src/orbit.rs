//! Orbits of free monoids of rational maps and their height growth.
//!
//! A [`Family`] is a list of rational maps with a base point; its orbit is
//! the tree of all words applied to the base point. When every map has
//! degree ≥ 2 there is a constant c ≥ 1 with h(fᵢ(x)) ≥ 2h(x) − c for all
//! x, so heights explode outside the finite exceptional set
//! S = {h(x) ≤ 2c}: each step multiplies the logarithmic height by at
//! least 3/2 there. Once every word of some length n₀ leaves S, all longer
//! words stay out, heights grow like (3/2)^(‖γ‖−n₀), and the number of
//! words of bounded log-height B is at most r^(n₀+1)·B^k with
//! k = ⌈log r / log(3/2)⌉. That census is what forces the orbit to have
//! height density zero — and why a forest of Möbius maps, where heights
//! grow only linearly, is the only way to enumerate a positive fraction
//! of ℙ¹(ℚ).
//!
//! Growth constants come in two flavours: for monomial maps a·x^d the
//! constant is an exact coefficient computation (`analytic`); for anything
//! else it is validated by exhaustive scan up to a height bound and
//! labelled `empirical`, never presented as proved.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::error::Error;
use crate::heights::{ln_biguint, log_height, HeightCounter};
use crate::maps::RationalMap;
use crate::rational::ProjPoint;

/// Comparison slack for logarithmic heights in double precision.
const H_EPS: f64 = 1e-9;

/// Default cap on expanded orbit nodes; override with
/// [`NODE_BUDGET_ENV`] or an explicit [`NodeBudget`].
pub const DEFAULT_NODE_BUDGET: u64 = 2_000_000;
pub const NODE_BUDGET_ENV: &str = "QFOREST_NODE_BUDGET";

/// Hard cap on nodes an expansion may materialize. Exceeding it is an
/// error, never a silent truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NodeBudget(pub u64);

impl Default for NodeBudget {
    fn default() -> NodeBudget {
        NodeBudget(DEFAULT_NODE_BUDGET)
    }
}

impl NodeBudget {
    /// The default budget, overridden by the `QFOREST_NODE_BUDGET`
    /// environment variable when set.
    pub fn from_env() -> NodeBudget {
        std::env::var(NODE_BUDGET_ENV)
            .ok()
            .and_then(|v| v.parse().ok())
            .map(NodeBudget)
            .unwrap_or_default()
    }

    fn check(&self, requested: u128) -> Result<(), Error> {
        if requested > self.0 as u128 {
            Err(Error::BudgetExceeded { requested, budget: self.0 })
        } else {
            Ok(())
        }
    }
}

/// Provenance of a certified growth constant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CertMode {
    /// Exact coefficient bound, available for monomial maps a·x^d, d ≥ 2.
    Analytic,
    /// Validated by exhaustive scan up to a height bound only.
    Empirical,
}

/// A constant c ≥ 1 with h(f(x)) ≥ 2h(x) − c for every family map.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CertifiedC {
    pub c: f64,
    pub mode: CertMode,
}

/// Rational maps f₁…f_r with a base point x₀ and an optional certified
/// growth constant. All fields are immutable after construction.
#[derive(Clone, Debug)]
pub struct Family {
    maps: Vec<RationalMap>,
    base: ProjPoint,
    certified: Option<CertifiedC>,
}

impl Family {
    /// A family without a growth certificate; enough for expansion and
    /// injectivity checking.
    pub fn new(maps: Vec<RationalMap>, base: ProjPoint) -> Result<Family, Error> {
        if maps.is_empty() {
            return Err(Error::precondition("a family needs at least one map"));
        }
        Ok(Family { maps, base, certified: None })
    }

    /// Certifies the growth constant analytically. Every map must be a
    /// monomial (a/b)·x^d with d ≥ 2; then h(f(x)) ≥ d·h(x) − log max(|a|,b)
    /// exactly, and the constant is the largest such log, clamped to ≥ 1.
    pub fn with_analytic_c(maps: Vec<RationalMap>, base: ProjPoint) -> Result<Family, Error> {
        let mut fam = Family::new(maps, base)?;
        let c = fam.analytic_constant()?;
        fam.certified = Some(CertifiedC { c: c.max(1.0), mode: CertMode::Analytic });
        Ok(fam)
    }

    /// Certifies a caller-supplied constant empirically: the inequality
    /// h(f(x)) ≥ 2h(x) − c is checked for every x with H(x) ≤ `scan_bound`
    /// and every map. The constant is clamped to ≥ 1 first. A passing scan
    /// is evidence, not proof; the mode label records that.
    pub fn with_empirical_c(
        maps: Vec<RationalMap>,
        base: ProjPoint,
        c: f64,
        scan_bound: u64,
    ) -> Result<Family, Error> {
        let mut fam = Family::new(maps, base)?;
        let c = c.max(1.0);
        let mut violation: Option<(ProjPoint, usize)> = None;
        crate::heights::for_each_point(scan_bound, |x| {
            if violation.is_some() {
                return;
            }
            let hx = log_height(x);
            for (i, f) in fam.maps.iter().enumerate() {
                if log_height(&f.eval(x)) < 2.0 * hx - c - H_EPS {
                    violation = Some((x.clone(), i));
                    return;
                }
            }
        });
        if let Some((x, i)) = violation {
            return Err(Error::precondition(format!(
                "empirical constant {c} rejected: map {i} shrinks the height too much at {x}"
            )));
        }
        fam.certified = Some(CertifiedC { c, mode: CertMode::Empirical });
        Ok(fam)
    }

    /// Picks the certification route: analytic when all maps are monomials
    /// of degree ≥ 2 (honoring a larger requested constant), otherwise an
    /// empirical scan of the requested constant.
    pub fn certified(
        maps: Vec<RationalMap>,
        base: ProjPoint,
        requested_c: Option<f64>,
        scan_bound: u64,
    ) -> Result<Family, Error> {
        let all_monomial = maps
            .iter()
            .all(|m| m.degree() >= 2 && m.monomial_coefficient().is_some());
        if all_monomial {
            let mut fam = Family::with_analytic_c(maps, base)?;
            if let (Some(req), Some(cert)) = (requested_c, fam.certified.as_mut()) {
                cert.c = cert.c.max(req);
            }
            Ok(fam)
        } else {
            let c = requested_c.ok_or_else(|| {
                Error::precondition(
                    "a growth constant is required for non-monomial maps (pass --c)",
                )
            })?;
            Family::with_empirical_c(maps, base, c, scan_bound)
        }
    }

    fn analytic_constant(&self) -> Result<f64, Error> {
        let mut c: f64 = 0.0;
        for m in &self.maps {
            let (a, b) = m.monomial_coefficient().ok_or_else(|| {
                Error::precondition("analytic certification needs monomial maps a*x^d")
            })?;
            if m.degree() < 2 {
                return Err(Error::precondition("analytic certification needs degree >= 2"));
            }
            let bound = a.magnitude().max(b.magnitude()).clone();
            c = c.max(ln_biguint(&bound));
        }
        Ok(c)
    }

    pub fn maps(&self) -> &[RationalMap] {
        &self.maps
    }

    pub fn base(&self) -> &ProjPoint {
        &self.base
    }

    pub fn certified_c(&self) -> Option<CertifiedC> {
        self.certified
    }

    pub fn generator_count(&self) -> usize {
        self.maps.len()
    }
}

/// One expanded orbit node: the word γ (generator indices, leftmost =
/// outermost map) and the value γ(x₀).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitNode {
    pub word: Vec<usize>,
    pub value: ProjPoint,
}

impl OrbitNode {
    /// ‖γ‖, the word norm.
    pub fn word_norm(&self) -> usize {
        self.word.len()
    }
}

fn tree_size(r: usize, depth: usize) -> Option<u128> {
    let mut total: u128 = 0;
    let mut level: u128 = 1;
    for _ in 0..=depth {
        total = total.checked_add(level)?;
        level = level.checked_mul(r as u128)?;
    }
    Some(total)
}

/// Expands all words of length ≤ depth in breadth-first order, children in
/// generator order; the node for word γ = αμ is produced by applying the
/// map α to the node of μ. Exceeding the node budget is an error.
pub fn expand_orbit(
    fam: &Family,
    depth: usize,
    budget: NodeBudget,
) -> Result<Vec<OrbitNode>, Error> {
    let requested = tree_size(fam.maps.len(), depth).unwrap_or(u128::MAX);
    budget.check(requested)?;
    let mut nodes = vec![OrbitNode { word: Vec::new(), value: fam.base.clone() }];
    let mut cursor = 0;
    while cursor < nodes.len() {
        if nodes[cursor].word.len() < depth {
            for (i, map) in fam.maps.iter().enumerate() {
                let parent = &nodes[cursor];
                let mut word = Vec::with_capacity(parent.word.len() + 1);
                word.push(i);
                word.extend_from_slice(&parent.word);
                let value = map.eval(&parent.value);
                nodes.push(OrbitNode { word, value });
            }
        }
        cursor += 1;
    }
    Ok(nodes)
}

/// A pair of distinct words with the same orbit value.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Collision {
    pub first: Vec<usize>,
    pub second: Vec<usize>,
    pub value: ProjPoint,
}

#[derive(Clone, Debug, Serialize)]
pub struct InjectivityReport {
    pub depth: usize,
    #[serde(rename = "nodesChecked")]
    pub nodes_checked: u64,
    /// The first collision in breadth-first word order, if any.
    pub collision: Option<Collision>,
}

impl InjectivityReport {
    pub fn injective(&self) -> bool {
        self.collision.is_none()
    }
}

/// Searches for equal values among all words of length ≤ depth; the
/// reported collision is the first in breadth-first order, hence the
/// lexicographically least witness under the word-length-then-path order.
pub fn check_injectivity(
    fam: &Family,
    depth: usize,
    budget: NodeBudget,
) -> Result<InjectivityReport, Error> {
    let nodes = expand_orbit(fam, depth, budget)?;
    let mut seen: HashMap<&ProjPoint, usize> = HashMap::with_capacity(nodes.len());
    let mut collision = None;
    let mut checked = 0u64;
    for (i, node) in nodes.iter().enumerate() {
        checked += 1;
        match seen.entry(&node.value) {
            std::collections::hash_map::Entry::Occupied(first) => {
                let first = &nodes[*first.get()];
                collision = Some(Collision {
                    first: first.word.clone(),
                    second: node.word.clone(),
                    value: node.value.clone(),
                });
                break;
            }
            std::collections::hash_map::Entry::Vacant(slot) => {
                slot.insert(i);
            }
        }
    }
    Ok(InjectivityReport { depth, nodes_checked: checked, collision })
}

/// H ≤ this bound is exactly membership in S = {h(x) ≤ 2c}.
fn exceptional_height_bound(c: f64) -> u64 {
    (2.0 * c).exp().floor() as u64
}

/// The exceptional set S = {x ∈ ℙ¹(ℚ) : h(x) ≤ 2c} = {H(x) ≤ ⌊e^(2c)⌋},
/// enumerated exactly; finite because bounded-height sets are.
pub fn exceptional_set(c: f64, budget: NodeBudget) -> Result<Vec<ProjPoint>, Error> {
    if c.is_nan() || c < 1.0 {
        return Err(Error::precondition("the growth constant must satisfy c >= 1"));
    }
    let bound = exceptional_height_bound(c);
    // 4·(3/π²)·bound² points, give or take the error term.
    let estimate = (1.3 * bound as f64 * bound as f64) as u128;
    budget.check(estimate.max(bound as u128))?;
    let mut points = Vec::new();
    crate::heights::for_each_point(bound.max(1), |p| points.push(p.clone()));
    Ok(points)
}

/// The least n₀ ≤ depth_budget such that every length-n₀ word maps the base
/// point outside S; the single-step inequality h(f(x)) ≥ 2h(x) − c, checked
/// along the way, closes the complement of S under the family, so all
/// longer words stay outside too.
///
/// The family must be injective (the orbit meets the finite set S only
/// finitely often exactly because values never repeat); injectivity is
/// checked up to the deepest full expansion the node budget allows.
pub fn find_escape_depth(
    fam: &Family,
    depth_budget: usize,
    budget: NodeBudget,
) -> Result<usize, Error> {
    let cert = fam
        .certified
        .ok_or_else(|| Error::precondition("a certified growth constant is required"))?;
    // Full expansion materializes every value; under degree-d maps those
    // have ~d^depth digits, so the precheck is capped both in node count
    // and in estimated coordinate size.
    const INJECTIVITY_PRECHECK_NODES: u128 = 1 << 14;
    const INJECTIVITY_PRECHECK_BITS: u128 = 1 << 21;
    let node_cap = INJECTIVITY_PRECHECK_NODES.min(budget.0 as u128);
    let deg_max = fam.maps.iter().map(|m| m.degree()).max().expect("nonempty") as u128;
    let coeff_bits = fam
        .maps
        .iter()
        .flat_map(|m| m.numer_coeffs().iter().chain(m.denom_coeffs()))
        .map(|c| c.magnitude().bits() as u128)
        .max()
        .unwrap_or(1);
    let mut bits = fam.base.height().bits() as u128 + 1;
    let mut inj_depth = 0;
    while inj_depth < depth_budget
        && tree_size(fam.maps.len(), inj_depth + 1).is_some_and(|n| n <= node_cap)
    {
        bits = bits * deg_max + coeff_bits + 4;
        if bits > INJECTIVITY_PRECHECK_BITS {
            break;
        }
        inj_depth += 1;
    }
    let inj = check_injectivity(fam, inj_depth, budget)?;
    if let Some(collision) = inj.collision {
        return Err(Error::precondition(format!(
            "family is not injective at the base point: words {:?} and {:?} both reach {}",
            collision.first, collision.second, collision.value
        )));
    }

    let s_bound = exceptional_height_bound(cert.c);
    let mut level: Vec<(ProjPoint, f64)> = vec![(fam.base.clone(), log_height(&fam.base))];
    let mut visited: u128 = 1;
    for depth in 0..=depth_budget {
        if level.iter().all(|(v, _)| !v.height_at_most(s_bound)) {
            return Ok(depth);
        }
        if depth == depth_budget {
            break;
        }
        visited = visited.saturating_add(level.len() as u128 * fam.maps.len() as u128);
        budget.check(visited)?;
        let mut next = Vec::with_capacity(level.len() * fam.maps.len());
        for (value, h) in &level {
            for (i, map) in fam.maps.iter().enumerate() {
                let child = map.eval(value);
                let hc = log_height(&child);
                if hc < 2.0 * h - cert.c - H_EPS {
                    return Err(Error::precondition(format!(
                        "certified constant {} violated by map {i} along the orbit",
                        cert.c
                    )));
                }
                next.push((child, hc));
            }
        }
        level = next;
    }
    Err(Error::EscapeNotReached { depth_budget })
}

/// A node violating one of the growth bounds; values can be astronomically
/// large, so the witness carries the word and the heights, not the value.
#[derive(Clone, Debug, Serialize)]
pub struct GrowthWitness {
    pub word: Vec<usize>,
    #[serde(rename = "logHeight")]
    pub log_height: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthReport {
    pub n0: usize,
    pub c: f64,
    pub mode: CertMode,
    pub depth: usize,
    #[serde(rename = "nodesChecked")]
    pub nodes_checked: u64,
    /// Nodes with ‖γ‖ > n₀ but h(γ(x₀)) ≤ (3/2)^(‖γ‖−n₀).
    #[serde(rename = "exponentialViolations")]
    pub exponential_violations: Vec<GrowthWitness>,
    /// Children of out-of-S nodes with h(f(x)) < (3/2)·h(x).
    #[serde(rename = "singleStepViolations")]
    pub single_step_violations: Vec<GrowthWitness>,
}

impl GrowthReport {
    pub fn passed(&self) -> bool {
        self.exponential_violations.is_empty() && self.single_step_violations.is_empty()
    }
}

/// Verifies the exponential growth bound h(γ(x₀)) > (3/2)^(‖γ‖−n₀) for
/// every word longer than n₀ up to `depth`, and the single-step bound
/// h(f(x)) ≥ (3/2)·h(x) wherever x lies outside S.
pub fn growth_check(fam: &Family, depth: usize, budget: NodeBudget) -> Result<GrowthReport, Error> {
    let cert = fam
        .certified
        .ok_or_else(|| Error::precondition("a certified growth constant is required"))?;
    let n0 = find_escape_depth(fam, depth, budget)?;
    let s_bound = exceptional_height_bound(cert.c);
    let nodes = expand_orbit(fam, depth, budget)?;
    let mut exponential = Vec::new();
    let mut single_step = Vec::new();
    let ratio = 1.5f64;
    for node in &nodes {
        let h = log_height(&node.value);
        let norm = node.word_norm();
        if norm > n0 {
            let bound = ratio.powi((norm - n0) as i32);
            if h <= bound * (1.0 - 1e-12) {
                exponential.push(GrowthWitness {
                    word: node.word.clone(),
                    log_height: h,
                    bound,
                });
            }
        }
        if norm < depth && !node.value.height_at_most(s_bound) {
            for (i, map) in fam.maps.iter().enumerate() {
                let child = map.eval(&node.value);
                let hc = log_height(&child);
                if hc < ratio * h * (1.0 - 1e-12) {
                    let mut word = vec![i];
                    word.extend_from_slice(&node.word);
                    single_step.push(GrowthWitness { word, log_height: hc, bound: ratio * h });
                }
            }
        }
    }
    Ok(GrowthReport {
        n0,
        c: cert.c,
        mode: cert.mode,
        depth,
        nodes_checked: nodes.len() as u64,
        exponential_violations: exponential,
        single_step_violations: single_step,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusReport {
    /// Number of words γ with h(γ(x₀)) ≤ B.
    pub count: u64,
    /// The proposition's bound: r^(n₀+1)·B^k for r ≥ 2 generators,
    /// ⌊n₀ + log B / log(3/2)⌋ + 1 for a single generator.
    pub bound: f64,
    pub n0: usize,
    #[serde(rename = "logHeightBound")]
    pub log_height_bound: f64,
    #[serde(rename = "truncationDepth")]
    pub truncation_depth: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(rename = "cPrime", skip_serializing_if = "Option::is_none")]
    pub c_prime: Option<f64>,
    #[serde(rename = "withinBound")]
    pub within_bound: bool,
}

/// Counts the orbit words of logarithmic height ≤ B against the bound
/// c′·B^k. Words longer than n₀ + log B / log(3/2) are excluded by the
/// growth lemma, so the count is sound only when the depth budget reaches
/// that truncation depth; a smaller budget is an error.
pub fn orbit_height_census(
    fam: &Family,
    b: f64,
    depth_budget: usize,
    budget: NodeBudget,
) -> Result<CensusReport, Error> {
    if b.is_nan() || b < 1.0 {
        return Err(Error::precondition("the census bound must satisfy B >= 1"));
    }
    let cert = fam
        .certified
        .ok_or_else(|| Error::precondition("a certified growth constant is required"))?;
    let n0 = find_escape_depth(fam, depth_budget, budget)?;
    let extra = (b.ln() / 1.5f64.ln()).ceil().max(0.0) as usize;
    let required = n0 + extra;
    if depth_budget < required {
        return Err(Error::InsufficientDepth { required, depth_budget });
    }
    let s_bound = exceptional_height_bound(cert.c);
    let mut count = 0u64;
    let mut visited: u128 = 0;
    // Depth-limited walk; a node outside S with h > B has no countable
    // descendants, so the branch is dropped.
    let mut stack: Vec<(ProjPoint, usize)> = vec![(fam.base.clone(), 0)];
    while let Some((value, depth)) = stack.pop() {
        visited += 1;
        budget.check(visited)?;
        let h = log_height(&value);
        if h <= b + H_EPS {
            count += 1;
        }
        if depth == required {
            continue;
        }
        if h > b + H_EPS && !value.height_at_most(s_bound) {
            continue;
        }
        for map in &fam.maps {
            stack.push((map.eval(&value), depth + 1));
        }
    }
    let r = fam.maps.len();
    let (k, c_prime, bound) = if r >= 2 {
        let k = ((r as f64).ln() / 1.5f64.ln()).ceil() as u32;
        let c_prime = (r as f64).powi(n0 as i32 + 1);
        (Some(k), Some(c_prime), c_prime * b.powi(k as i32))
    } else {
        (None, None, (n0 as f64 + b.ln() / 1.5f64.ln()).floor() + 1.0)
    };
    Ok(CensusReport {
        count,
        bound,
        n0,
        log_height_bound: b,
        truncation_depth: required,
        k,
        c_prime,
        within_bound: (count as f64) <= bound,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceRow {
    pub cutoff: u64,
    #[serde(rename = "orbitCount")]
    pub orbit_count: u64,
    #[serde(rename = "totalCount")]
    pub total_count: u128,
    pub ratio: f64,
}

/// Confronts the orbit's bounded-height count with the full count of
/// ℙ¹(ℚ) at geometrically spaced cutoffs up to `nmax`: the orbit of a
/// family of maps of degree ≥ 2 contributes O((log N)^k) points against
/// ~1.22·N², so the ratios collapse toward zero.
pub fn orbit_density_trace(
    fam: &Family,
    nmax: u64,
    samples: usize,
    budget: NodeBudget,
) -> Result<Vec<TraceRow>, Error> {
    if fam.maps.iter().any(|m| m.degree() < 2) {
        return Err(Error::precondition(
            "height density of an orbit needs every map of degree at least 2",
        ));
    }
    if nmax < 2 || samples == 0 {
        return Err(Error::precondition("need nmax >= 2 and at least one sample"));
    }
    let cert = fam
        .certified
        .ok_or_else(|| Error::precondition("a certified growth constant is required"))?;
    const ESCAPE_SEARCH_DEPTH: usize = 64;
    let n0 = find_escape_depth(fam, ESCAPE_SEARCH_DEPTH, budget)?;
    let s_bound = exceptional_height_bound(cert.c);

    // One pruned walk at the largest cutoff serves every smaller one.
    let b_max = (nmax as f64).ln();
    let extra = (b_max.ln() / 1.5f64.ln()).ceil().max(0.0) as usize;
    let truncation = n0 + extra;
    let mut value_heights: HashSet<(u64, ProjPoint)> = HashSet::new();
    let mut visited: u128 = 0;
    let mut stack: Vec<(ProjPoint, usize)> = vec![(fam.base.clone(), 0)];
    while let Some((value, depth)) = stack.pop() {
        visited += 1;
        budget.check(visited)?;
        let within = value.height_at_most(nmax);
        if within {
            use num_traits::ToPrimitive;
            let h = value.height().to_u64().expect("height <= nmax fits u64");
            value_heights.insert((h, value.clone()));
        }
        if depth == truncation {
            continue;
        }
        if !within && !value.height_at_most(s_bound) {
            continue;
        }
        for map in &fam.maps {
            stack.push((map.eval(&value), depth + 1));
        }
    }
    let mut heights: Vec<u64> = value_heights.iter().map(|(h, _)| *h).collect();
    heights.sort_unstable();

    let counter = HeightCounter::new(nmax);
    let mut cutoffs: Vec<u64> = (1..=samples)
        .map(|i| (nmax as f64).powf(i as f64 / samples as f64).round() as u64)
        .filter(|&n| n >= 2)
        .collect();
    cutoffs.dedup();
    if cutoffs.last() != Some(&nmax) {
        cutoffs.push(nmax);
    }
    let rows = cutoffs
        .into_iter()
        .map(|n| {
            let orbit_count = heights.partition_point(|&h| h <= n) as u64;
            let total_count = counter.total_points(n);
            TraceRow {
                cutoff: n,
                orbit_count,
                total_count,
                ratio: orbit_count as f64 / total_count as f64,
            }
        })
        .collect();
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::parse_map;

    fn family(maps: &[&str], x0: i64) -> Family {
        Family::certified(
            maps.iter().map(|m| parse_map(m).unwrap()).collect(),
            ProjPoint::new(x0, 1).unwrap(),
            Some(1.0),
            200,
        )
        .unwrap()
    }

    fn budget() -> NodeBudget {
        NodeBudget::default()
    }

    #[test]
    fn expand_calkin_wilf_top_layers() {
        let maps = vec![parse_map("x/(x+1)").unwrap(), parse_map("x+1").unwrap()];
        let fam = Family::new(maps, ProjPoint::one()).unwrap();
        let nodes = expand_orbit(&fam, 2, budget()).unwrap();
        let values: Vec<String> = nodes.iter().map(|n| n.value.to_string()).collect();
        assert_eq!(values, ["1", "1/2", "2", "1/3", "3/2", "2/3", "3"]);
        assert_eq!(nodes[4].word, vec![1, 0]);
        assert_eq!(nodes.len(), 7);
    }

    #[test]
    fn expand_powers_of_two() {
        let fam = family(&["x^2", "2*x^2"], 2);
        let nodes = expand_orbit(&fam, 2, budget()).unwrap();
        let exponents: Vec<u64> = nodes
            .iter()
            .map(|n| n.value.x0().magnitude().bits() - 1)
            .collect();
        assert_eq!(exponents, [1, 2, 3, 4, 5, 6, 7]);
    }

    #[test]
    fn expand_depth_zero_and_budget() {
        let fam = family(&["x^2"], 2);
        let nodes = expand_orbit(&fam, 0, budget()).unwrap();
        assert_eq!(nodes.len(), 1);
        assert!(nodes[0].word.is_empty());
        let two = family(&["x^2", "2*x^2"], 2);
        assert!(matches!(
            expand_orbit(&two, 40, NodeBudget(1000)),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn injectivity_examples() {
        let lr = Family::new(
            vec![parse_map("x/(x+1)").unwrap(), parse_map("x+1").unwrap()],
            ProjPoint::one(),
        )
        .unwrap();
        assert!(check_injectivity(&lr, 8, budget()).unwrap().injective());

        let duplicated = Family::new(
            vec![parse_map("x/(x+1)").unwrap(), parse_map("x/(x+1)").unwrap()],
            ProjPoint::one(),
        )
        .unwrap();
        let report = check_injectivity(&duplicated, 1, budget()).unwrap();
        let collision = report.collision.unwrap();
        assert_eq!(collision.first, vec![0]);
        assert_eq!(collision.second, vec![1]);

        let powers = family(&["x^2", "2*x^2"], 2);
        assert!(check_injectivity(&powers, 10, budget()).unwrap().injective());
    }

    #[test]
    fn exceptional_set_examples() {
        let s = exceptional_set(1.0, budget()).unwrap();
        assert_eq!(s.len(), 72);
        assert!(s.contains(&ProjPoint::infinity()));
        assert!(!s.iter().any(|p| p == &ProjPoint::new(8, 1).unwrap()));
        assert!(s.contains(&ProjPoint::new(7, 1).unwrap()));
        assert!(exceptional_set(0.69, budget()).is_err());
        // e^(2c) beyond the enumeration budget is refused, not truncated.
        assert!(matches!(
            exceptional_set(10.0, budget()),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn escape_depth_examples() {
        // Level 1 of {x^2, 2x^2} from 2 contains 4 = x^2(2), which still has
        // h = log 4 <= 2, so escape happens at level 2 where the smallest
        // value is 16.
        let fam = family(&["x^2", "2*x^2"], 2);
        assert_eq!(find_escape_depth(&fam, 12, budget()).unwrap(), 2);

        let cubes = family(&["x^3"], 3);
        assert_eq!(find_escape_depth(&cubes, 12, budget()).unwrap(), 1);

        let far = family(&["x^2"], 9);
        assert_eq!(find_escape_depth(&far, 12, budget()).unwrap(), 0);
    }

    #[test]
    fn escape_not_reached_within_budget() {
        // A huge certified constant makes S enormous; three levels of the
        // square family stay inside it.
        let maps = vec![parse_map("x^2").unwrap(), parse_map("2*x^2").unwrap()];
        let fam = Family::certified(maps, ProjPoint::new(2, 1).unwrap(), Some(30.0), 100)
            .unwrap();
        assert_eq!(
            find_escape_depth(&fam, 3, budget()),
            Err(Error::EscapeNotReached { depth_budget: 3 })
        );
    }

    #[test]
    fn growth_check_powers() {
        let fam = family(&["x^2", "2*x^2"], 2);
        let report = growth_check(&fam, 12, budget()).unwrap();
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.n0, 2);
        assert_eq!(report.nodes_checked, (1 << 13) - 1);
    }

    #[test]
    fn growth_check_single_square_exact_law() {
        let fam = family(&["x^2"], 3);
        let report = growth_check(&fam, 20, budget()).unwrap();
        assert!(report.passed());
        // h at depth n is exactly 2^n * log 3.
        let nodes = expand_orbit(&fam, 20, budget()).unwrap();
        for node in nodes {
            let expect = 2f64.powi(node.word_norm() as i32) * 3f64.ln();
            let h = log_height(&node.value);
            assert!((h - expect).abs() < 1e-9 * expect.max(1.0));
        }
    }

    #[test]
    fn census_powers_of_two() {
        let fam = family(&["x^2", "2*x^2"], 2);
        for b in [5.0, 10.0, 14.0] {
            let report = orbit_height_census(&fam, b, 12, budget()).unwrap();
            // Orbit values are 2^e, each exponent >= 1 exactly once, so the
            // count is floor(B / log 2).
            assert_eq!(report.count, (b / 2f64.ln()).floor() as u64);
            assert!(report.within_bound, "{report:?}");
            assert_eq!(report.k, Some(2));
        }
        assert!(matches!(
            orbit_height_census(&fam, 14.0, 5, budget()),
            Err(Error::InsufficientDepth { .. })
        ));
    }

    #[test]
    fn census_single_generator() {
        let fam = family(&["x^2"], 3);
        let report = orbit_height_census(&fam, 10.0, 12, budget()).unwrap();
        // h values are 2^n log 3: n with 2^n log 3 <= 10 are 0..=3.
        assert_eq!(report.count, 4);
        assert!(report.within_bound);
        assert_eq!(report.k, None);
    }

    #[test]
    fn census_below_base_height() {
        let fam = family(&["x^2"], 9);
        // n0 = 0 and h(9) = log 9 > 2; nothing in the orbit has h <= 1.
        let report = orbit_height_census(&fam, 1.0, 10, budget()).unwrap();
        assert_eq!(report.count, 0);
    }

    #[test]
    fn density_trace_collapses() {
        let fam = family(&["x^2", "2*x^2"], 2);
        let rows = orbit_density_trace(&fam, 1_000_000, 6, budget()).unwrap();
        let last = rows.last().unwrap();
        assert_eq!(last.cutoff, 1_000_000);
        assert!(last.ratio <= 1e-3, "{last:?}");
        let tail: Vec<f64> = rows.iter().rev().take(3).map(|r| r.ratio).collect();
        assert!(tail[0] < tail[1] && tail[1] < tail[2], "{rows:?}");
    }

    #[test]
    fn density_trace_single_cube() {
        let fam = family(&["x^3"], 2);
        let rows = orbit_density_trace(&fam, 1_000_000, 4, budget()).unwrap();
        let last = rows.last().unwrap();
        // Orbit values 2^(3^k) with H <= 10^6: exponents 1, 3, 9.
        assert_eq!(last.orbit_count, 3);
        assert!(last.ratio <= 1e-4, "{last:?}");
    }

    #[test]
    fn density_trace_rejects_moebius() {
        let lr = Family::new(
            vec![parse_map("x/(x+1)").unwrap(), parse_map("x+1").unwrap()],
            ProjPoint::one(),
        )
        .unwrap();
        assert!(matches!(
            orbit_density_trace(&lr, 1000, 3, budget()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn empirical_certification() {
        let maps = vec![parse_map("x^2").unwrap(), parse_map("2*x^2").unwrap()];
        let fam =
            Family::with_empirical_c(maps, ProjPoint::new(2, 1).unwrap(), 1.0, 200).unwrap();
        let cert = fam.certified_c().unwrap();
        assert_eq!(cert.mode, CertMode::Empirical);
        assert_eq!(cert.c, 1.0);

        // x+1 only adds ~log x to the height, so 2h - c overshoots already
        // at moderate heights and the scan must reject it.
        let shift = vec![parse_map("x+1").unwrap()];
        assert!(Family::with_empirical_c(shift, ProjPoint::one(), 1.0, 200).is_err());
    }

    #[test]
    fn analytic_certification_clamps() {
        let fam = family(&["x^2", "2*x^2"], 2);
        let cert = fam.certified_c().unwrap();
        assert_eq!(cert.mode, CertMode::Analytic);
        assert_eq!(cert.c, 1.0); // max(log 2, 1)
        let bigger = Family::with_analytic_c(
            vec![parse_map("7*x^2").unwrap()],
            ProjPoint::new(2, 1).unwrap(),
        )
        .unwrap();
        assert!((bigger.certified_c().unwrap().c - 7f64.ln()).abs() < 1e-12);
        assert!(Family::with_analytic_c(
            vec![parse_map("x+1").unwrap()],
            ProjPoint::one()
        )
        .is_err());
    }

    #[test]
    fn escape_when_base_in_s_forever_fails() {
        // A fixed point of x^2 is 1; the orbit never leaves S.
        let fam = Family::with_analytic_c(vec![parse_map("x^2").unwrap()], ProjPoint::one());
        // x0 = 1 collides immediately (1 -> 1), so injectivity fails first.
        assert!(matches!(
            find_escape_depth(&fam.unwrap(), 6, budget()),
            Err(Error::Precondition(_))
        ));
    }

}
