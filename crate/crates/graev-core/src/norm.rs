//! The Graev prenorm and its extension pseudometric on the free Boolean group.
//!
//! The prenorm of an element is the minimum total weight over all perfect
//! matchings of its support, with `e` adjoined when the support has odd size.
//! This equals the infimum over arbitrary two-letter representations whenever
//! the ground distance satisfies the triangle inequality, which every
//! [`GroundSpace`] guarantees by construction. An independent enumeration
//! oracle over representations (repeats and `e` allowed) cross-checks the
//! matching route.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{GroupElement, Representation};
use crate::space::{GroundSpace, E_INDEX};

/// Default cap on the matched set size for the exact matching search.
/// Overridable per call and via `GRAEV_MATCH_LIMIT` in the CLI.
pub const DEFAULT_MATCH_LIMIT: usize = 20;

/// Cost bound for the enumeration oracle's dynamic program.
const ORACLE_COST_BOUND: u128 = 100_000_000;

/// A perfect pairing of a support, with `e` (index 0) adjoined exactly when
/// the support size is odd. Pairs are sorted internally and listed in
/// ascending order; the weight is the total ground distance over pairs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Matching {
    pub pairs: Vec<(usize, usize)>,
    pub weight: f64,
}

impl Matching {
    /// Structural validity against an element: pairs partition the support,
    /// and index 0 is used exactly when the support size is odd.
    pub fn is_perfect_for(&self, h: &GroupElement) -> bool {
        let mut seen: Vec<usize> = self
            .pairs
            .iter()
            .flat_map(|&(a, b)| [a, b])
            .collect();
        seen.sort_unstable();
        if seen.windows(2).any(|w| w[0] == w[1]) {
            return false;
        }
        let mut expected: Vec<usize> = h.support().to_vec();
        if h.word_length() % 2 == 1 {
            expected.insert(0, E_INDEX);
        }
        seen == expected
    }

    /// Recompute the weight from a space; `true` when it matches the stored
    /// weight up to `tol` (the stored value carries the solver's own
    /// summation order).
    pub fn weight_consistent(&self, space: &GroundSpace, tol: f64) -> bool {
        let sum: f64 = self.pairs.iter().map(|&(a, b)| space.distance(a, b)).sum();
        (sum - self.weight).abs() <= tol
    }
}

/// The prenorm value together with an optimal matching attaining it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormResult {
    pub value: f64,
    pub witness: Matching,
}

/// Graev prenorm of `h` with the default matching capacity.
pub fn graev_norm(h: &GroupElement, space: &GroundSpace) -> Result<NormResult> {
    graev_norm_with_limit(h, space, DEFAULT_MATCH_LIMIT)
}

/// Graev prenorm of `h`: minimum matching weight over the support (plus `e`
/// when odd). Exact bitmask dynamic programming, `O(2^m m)` for matched set
/// size `m`; rejects supports beyond `limit`.
pub fn graev_norm_with_limit(
    h: &GroupElement,
    space: &GroundSpace,
    limit: usize,
) -> Result<NormResult> {
    h.check_in_space(space)?;
    if h.is_zero() {
        return Ok(NormResult {
            value: 0.0,
            witness: Matching {
                pairs: Vec::new(),
                weight: 0.0,
            },
        });
    }
    if h.word_length() > limit {
        return Err(Error::CapacityExceeded {
            support: h.word_length(),
            limit,
        });
    }

    // Matched set: the support, with e adjoined in front when the size is odd.
    let mut matched: Vec<usize> = Vec::with_capacity(h.word_length() + 1);
    if h.word_length() % 2 == 1 {
        matched.push(E_INDEX);
    }
    matched.extend_from_slice(h.support());
    let m = matched.len();

    let mut w = vec![0.0f64; m * m];
    for i in 0..m {
        for j in 0..m {
            w[i * m + j] = space.distance(matched[i], matched[j]);
        }
    }

    let full: usize = (1usize << m) - 1;
    let mut dp = vec![f64::INFINITY; 1usize << m];
    dp[0] = 0.0;
    for mask in 1..=full {
        if (mask.count_ones() % 2) != 0 {
            continue;
        }
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut best = f64::INFINITY;
        let mut r = rest;
        while r != 0 {
            let j = r.trailing_zeros() as usize;
            r &= r - 1;
            let cand = w[i * m + j] + dp[rest & !(1 << j)];
            if cand < best {
                best = cand;
            }
        }
        dp[mask] = best;
    }

    // Reconstruct the lexicographically smallest optimal pair list: repeatedly
    // match the lowest remaining index with the smallest partner that keeps
    // the total optimal. Candidates are recomputed exactly as in the forward
    // pass, so float equality is reliable.
    let mut pairs = Vec::with_capacity(m / 2);
    let mut mask = full;
    while mask != 0 {
        let i = mask.trailing_zeros() as usize;
        let rest = mask & !(1 << i);
        let mut chosen = None;
        let mut r = rest;
        while r != 0 {
            let j = r.trailing_zeros() as usize;
            r &= r - 1;
            if w[i * m + j] + dp[rest & !(1 << j)] == dp[mask] {
                chosen = Some(j);
                break;
            }
        }
        let j = chosen.expect("optimal matching reconstruction");
        pairs.push((matched[i], matched[j]));
        mask = rest & !(1 << j);
    }

    Ok(NormResult {
        value: dp[full],
        witness: Matching {
            pairs,
            weight: dp[full],
        },
    })
}

/// The Graev pseudometric: `dist(g, h) = norm(g + h)`. Invariant under
/// translation and an exact extension of the ground distance on singletons.
pub fn graev_dist(g: &GroupElement, h: &GroupElement, space: &GroundSpace) -> Result<f64> {
    graev_dist_with_limit(g, h, space, DEFAULT_MATCH_LIMIT)
}

pub fn graev_dist_with_limit(
    g: &GroupElement,
    h: &GroupElement,
    space: &GroundSpace,
    limit: usize,
) -> Result<f64> {
    Ok(graev_norm_with_limit(&g.add(h), space, limit)?.value)
}

/// Reduce a representation to one with pairwise distinct entries representing
/// the same element, without increasing the weight: drop trivial pairs, and
/// while two pairs share an entry, merge them into the pair of their other
/// two entries (weight non-increasing by the triangle inequality). Introduces
/// no entries that were absent from the input.
pub fn reduce_representation(
    rep: &Representation,
    space: &GroundSpace,
) -> Result<Representation> {
    for &(x, y) in &rep.pairs {
        space.check_index(x)?;
        space.check_index(y)?;
    }
    let mut pairs: Vec<(usize, usize)> = rep.pairs.clone();
    'outer: loop {
        pairs.retain(|&(x, y)| x != y);
        for i in 0..pairs.len() {
            for j in (i + 1)..pairs.len() {
                let (a, b) = pairs[i];
                let (c, d) = pairs[j];
                let merged = if a == c {
                    Some((b, d))
                } else if a == d {
                    Some((b, c))
                } else if b == c {
                    Some((a, d))
                } else if b == d {
                    Some((a, c))
                } else {
                    None
                };
                if let Some(p) = merged {
                    pairs.swap_remove(j);
                    pairs[i] = p;
                    continue 'outer;
                }
            }
        }
        return Ok(Representation::new(pairs));
    }
}

fn oracle_guard(space_len: usize, max_pairs: usize) -> Result<usize> {
    let bits = space_len.saturating_sub(1);
    if bits > 24 {
        return Err(Error::GuardExceeded(format!(
            "{space_len} points is beyond the enumeration oracle range"
        )));
    }
    let cost = (max_pairs as u128 + 1)
        * (1u128 << bits)
        * (space_len as u128)
        * (space_len as u128);
    if cost > ORACLE_COST_BOUND {
        return Err(Error::GuardExceeded(format!(
            "oracle cost {cost} exceeds bound {ORACLE_COST_BOUND}"
        )));
    }
    Ok(bits)
}

/// Minimum representation weight for every element and every pair budget at
/// once, by exhaustive relaxation over all representations with at most
/// `max_pairs` pairs drawn from `X x X` (repeats and `e` allowed).
/// `layers[k][mask]` is the minimum over representations with at most `k`
/// pairs of the element whose support is `{i+1 : bit i of mask}`.
///
/// This is the independent oracle: it never assumes distinct entries or any
/// matching structure.
pub fn oracle_norm_layers(space: &GroundSpace, max_pairs: usize) -> Result<Vec<Vec<f64>>> {
    let bits = oracle_guard(space.len(), max_pairs)?;
    let size = 1usize << bits;

    // All unordered pairs with a nonzero symmetric-difference mask. Pairs
    // (x, x) contribute nothing and cost nothing, so they never help.
    let mut moves: Vec<(usize, f64)> = Vec::new();
    for x in 0..space.len() {
        for y in (x + 1)..space.len() {
            let mask_x = if x == E_INDEX { 0 } else { 1usize << (x - 1) };
            let mask_y = 1usize << (y - 1);
            moves.push((mask_x ^ mask_y, space.distance(x, y)));
        }
    }

    let mut zero = vec![f64::INFINITY; size];
    zero[0] = 0.0;
    let mut layers = vec![zero];
    for k in 1..=max_pairs {
        let prev = &layers[k - 1];
        let mut dp = prev.clone();
        for el in 0..size {
            let base = prev[el];
            if !base.is_finite() {
                continue;
            }
            for &(mask, cost) in &moves {
                let target = el ^ mask;
                let cand = base + cost;
                if cand < dp[target] {
                    dp[target] = cand;
                }
            }
        }
        layers.push(dp);
    }
    Ok(layers)
}

/// Final layer of [`oracle_norm_layers`]: the minimum over all
/// representations with at most `max_pairs` pairs, per element mask.
pub fn oracle_norm_table(space: &GroundSpace, max_pairs: usize) -> Result<Vec<f64>> {
    Ok(oracle_norm_layers(space, max_pairs)?
        .pop()
        .expect("at least the zero layer"))
}

/// Minimum representation weight of `h` over at most `max_pairs` pairs.
/// With `max_pairs >= ceil((|support| + 1) / 2)` this equals [`graev_norm`].
pub fn oracle_norm(h: &GroupElement, space: &GroundSpace, max_pairs: usize) -> Result<f64> {
    h.check_in_space(space)?;
    let table = oracle_norm_table(space, max_pairs)?;
    Ok(table[support_mask(h)])
}

/// Bitmask of a support over `X \ {e}`: bit `i - 1` for point `i`.
pub fn support_mask(h: &GroupElement) -> usize {
    h.support().iter().map(|&i| 1usize << (i - 1)).sum()
}

/// Pair budget sufficient for exactness of the oracle on `h`, plus slack.
pub fn oracle_budget(h: &GroupElement, slack: usize) -> usize {
    (h.word_length() + 1).div_ceil(2) + slack
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_space() -> GroundSpace {
        GroundSpace::from_points(vec![vec![0.0], vec![1.0], vec![2.0], vec![4.0]]).unwrap()
    }

    fn el(support: &[usize]) -> GroupElement {
        GroupElement::from_support(support.to_vec()).unwrap()
    }

    #[test]
    fn norm_of_zero_is_zero() {
        let s = line_space();
        let r = graev_norm(&GroupElement::zero(), &s).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(r.witness.pairs.is_empty());
    }

    #[test]
    fn norm_of_a_singleton_is_the_distance_to_e() {
        let s = line_space();
        let r = graev_norm(&el(&[1]), &s).unwrap();
        assert_eq!(r.value, 1.0);
        assert_eq!(r.witness.pairs, vec![(0, 1)]);
    }

    #[test]
    fn norm_of_three_points_enumerates_all_matchings() {
        // Candidates on {e,a,b,c}: (e,a)+(b,c)=3, (e,b)+(a,c)=5, (e,c)+(a,b)=5.
        let s = line_space();
        let r = graev_norm(&el(&[1, 2, 3]), &s).unwrap();
        assert_eq!(r.value, 3.0);
        assert_eq!(r.witness.pairs, vec![(0, 1), (2, 3)]);
        assert!(r.witness.is_perfect_for(&el(&[1, 2, 3])));
    }

    #[test]
    fn zero_distance_pair_gives_zero_norm() {
        let s = GroundSpace::from_matrix(vec![
            vec![0.0, 5.0, 5.0],
            vec![5.0, 0.0, 0.0],
            vec![5.0, 0.0, 0.0],
        ])
        .unwrap();
        let r = graev_norm(&el(&[1, 2]), &s).unwrap();
        assert_eq!(r.value, 0.0);
        // The enumeration oracle confirms no representation does better.
        assert_eq!(oracle_norm(&el(&[1, 2]), &s, 3).unwrap(), 0.0);
    }

    #[test]
    fn dist_extends_the_ground_distance_and_vanishes_on_the_diagonal() {
        let s = line_space();
        assert_eq!(graev_dist(&el(&[1]), &el(&[2]), &s).unwrap(), 1.0);
        let g = el(&[1, 3]);
        assert_eq!(graev_dist(&g, &g, &s).unwrap(), 0.0);
        assert_eq!(graev_dist(&el(&[1, 2]), &el(&[3]), &s).unwrap(), 3.0);
    }

    #[test]
    fn capacity_error_on_large_supports() {
        let coords: Vec<Vec<f64>> = (0..30).map(|i| vec![i as f64]).collect();
        let s = GroundSpace::from_points(coords).unwrap();
        let g = GroupElement::from_support((1..=25).collect()).unwrap();
        assert!(matches!(
            graev_norm(&g, &s),
            Err(Error::CapacityExceeded { support: 25, limit: 20 })
        ));
        assert!(graev_norm_with_limit(&el(&[1, 2, 3]), &s, 2).is_err());
    }

    #[test]
    fn reduce_merges_shared_entries() {
        let s = line_space();
        let rep = Representation::new(vec![(1, 2), (1, 3)]);
        let reduced = reduce_representation(&rep, &s).unwrap();
        assert_eq!(reduced.pairs, vec![(2, 3)]);
        let (g0, w0) = rep.evaluate(&s).unwrap();
        let (g1, w1) = reduced.evaluate(&s).unwrap();
        assert_eq!(g0, g1);
        assert!(w1 <= w0);
        assert_eq!(w1, 2.0);
    }

    #[test]
    fn reduce_drops_trivial_pairs_and_fixes_reduced_input() {
        let s = line_space();
        let trivial = reduce_representation(&Representation::new(vec![(1, 1)]), &s).unwrap();
        assert!(trivial.pairs.is_empty());
        let fixed = reduce_representation(&Representation::new(vec![(1, 2)]), &s).unwrap();
        assert_eq!(fixed.pairs, vec![(1, 2)]);
    }

    #[test]
    fn oracle_agrees_with_matching_on_the_line_space() {
        let s = line_space();
        let g = el(&[1, 2, 3]);
        assert_eq!(oracle_norm(&g, &s, 2).unwrap(), 3.0);
        assert_eq!(
            oracle_norm(&g, &s, 2).unwrap(),
            graev_norm(&g, &s).unwrap().value
        );
        // Extra budget never improves the minimum.
        assert_eq!(oracle_norm(&el(&[1]), &s, 3).unwrap(), 1.0);
        assert_eq!(oracle_norm(&GroupElement::zero(), &s, 1).unwrap(), 0.0);
    }

    #[test]
    fn oracle_guard_rejects_oversized_searches() {
        let coords: Vec<Vec<f64>> = (0..30).map(|i| vec![i as f64]).collect();
        let s = GroundSpace::from_points(coords).unwrap();
        assert!(matches!(
            oracle_norm(&el(&[1]), &s, 2),
            Err(Error::GuardExceeded(_))
        ));
    }

    /// Literal minimum over every ordered tuple of pairs, nothing shared
    /// with the solvers above.
    fn naive_min_weight(
        space: &GroundSpace,
        target: &GroupElement,
        max_pairs: usize,
    ) -> f64 {
        fn go(
            space: &GroundSpace,
            target: &GroupElement,
            acc: &mut Vec<usize>,
            weight: f64,
            left: usize,
            best: &mut f64,
        ) {
            let el = GroupElement::sum_points(acc, space).unwrap();
            if &el == target && weight < *best {
                *best = weight;
            }
            if left == 0 {
                return;
            }
            for x in 0..space.len() {
                for y in 0..space.len() {
                    acc.push(x);
                    acc.push(y);
                    go(space, target, acc, weight + space.distance(x, y), left - 1, best);
                    acc.pop();
                    acc.pop();
                }
            }
        }
        let mut best = f64::INFINITY;
        go(space, target, &mut Vec::new(), 0.0, max_pairs, &mut best);
        best
    }

    #[test]
    fn naive_enumeration_agrees_with_both_solvers() {
        let spaces = [
            line_space(),
            GroundSpace::from_matrix(vec![
                vec![0.0, 5.0, 5.0],
                vec![5.0, 0.0, 0.0],
                vec![5.0, 0.0, 0.0],
            ])
            .unwrap(),
            GroundSpace::from_matrix(vec![
                vec![0.0, 0.7, 1.0, 1.2],
                vec![0.7, 0.0, 0.4, 1.1],
                vec![1.0, 0.4, 0.0, 0.9],
                vec![1.2, 1.1, 0.9, 0.0],
            ])
            .unwrap(),
        ];
        for space in &spaces {
            for mask in 0..(1usize << (space.len() - 1)) {
                let support: Vec<usize> = (0..space.len() - 1)
                    .filter(|b| mask & (1 << b) != 0)
                    .map(|b| b + 1)
                    .collect();
                let g = GroupElement::from_support(support).unwrap();
                let budget = oracle_budget(&g, 1);
                let naive = naive_min_weight(space, &g, budget);
                let oracle = oracle_norm(&g, space, budget).unwrap();
                let matching = graev_norm(&g, space).unwrap().value;
                assert!((naive - oracle).abs() <= 1e-12, "{naive} vs {oracle}");
                assert!((naive - matching).abs() <= 1e-9, "{naive} vs {matching}");
            }
        }
    }

    #[test]
    fn witness_ties_break_to_the_lexicographically_smallest_list() {
        // Equidistant square: multiple optimal matchings.
        let s = GroundSpace::from_points(vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![1.0, 1.0],
        ])
        .unwrap();
        let r = graev_norm(&el(&[1, 2, 3]), &s).unwrap();
        // (e,1)+(2,3) and (e,2)+(1,3) both cost 2; the smaller list wins.
        assert_eq!(r.value, 2.0);
        assert_eq!(r.witness.pairs, vec![(0, 1), (2, 3)]);
    }
}
