//! Neighborhood certificates for the word-sumset system of a pseudometric
//! sequence.
//!
//! For a sequence `D = (d_n)`, let `W_n` collect the two-letter words `x + y`
//! with `d_n(x, y) < 1`. The system's neighborhood of zero is the union over
//! n of the sumsets `W_1 + ... + W_n`. Membership of an element is certified
//! by an injective assignment of witness pairs to indices; refutation up to a
//! bound is decided by an exact reachability search. Elements of small
//! sup-combined norm admit a constructive witness built from their optimal
//! matching by dyadic bucketing.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::metrics::{exp2_f64, PseudometricSequence};
use crate::norm::{graev_norm, support_mask, NormResult};
use crate::space::{GroundSpace, E_INDEX};

/// Largest dyadic bucket exponent the witness builder will assign. Indices
/// live below `2^(MAX_BUCKET+1)`, which keeps them in range for u64 and JSON.
const MAX_BUCKET: u32 = 50;

/// State-space bound for the exact membership search.
const SEARCH_COST_BOUND: u128 = 100_000_000;
const SEARCH_MAX_BITS: usize = 20;

/// The word-sumset system of a pseudometric sequence, with the unit threshold
/// fixed at 1.
#[derive(Debug, Clone, PartialEq)]
pub struct WdSystem {
    seq: PseudometricSequence,
}

impl WdSystem {
    pub fn new(seq: PseudometricSequence) -> Self {
        WdSystem { seq }
    }

    pub fn sequence(&self) -> &PseudometricSequence {
        &self.seq
    }

    /// `d_n(x, y)` for any index n >= 1.
    pub fn metric(&self, n: u64, x: usize, y: usize) -> f64 {
        self.seq.eval(n, x, y)
    }

    /// Words of `W_n` with a nonzero symmetric-difference mask, as
    /// `((x, y), mask)` with x < y, in ascending order.
    fn words(&self, n: u64) -> Vec<((usize, usize), usize)> {
        let len = self.seq.point_count();
        let mut out = Vec::new();
        for x in 0..len {
            for y in (x + 1)..len {
                if self.seq.eval(n, x, y) < 1.0 {
                    let mx = if x == E_INDEX { 0 } else { 1usize << (x - 1) };
                    out.push(((x, y), mx ^ (1usize << (y - 1))));
                }
            }
        }
        out
    }
}

/// One witness pair: `d_index(x, y) < 1`, contributing `x + y`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessPair {
    pub x: usize,
    pub y: usize,
    pub index: u64,
}

/// An injective assignment of pairs to indices certifying membership in the
/// bounded sumset; unselected indices contribute zero.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct WdWitness {
    pub pairs: Vec<WitnessPair>,
}

/// Outcome of the bounded membership decision.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum WdVerdict {
    Certified { witness: WdWitness },
    RefutedUpTo { n_max: usize },
    Unknown { reason: String },
}

/// Decide membership of `g` in `W_1 + ... + W_{n_max}`.
///
/// The search is exact over that bounded sumset: `Certified` comes with an
/// independently checkable witness, `RefutedUpTo(n_max)` means no assignment
/// of pairs to distinct indices `<= n_max` sums to `g`, and `Unknown` is
/// returned only when the state space exceeds the guard, never as a wrong
/// verdict.
pub fn wd_membership(
    g: &GroupElement,
    system: &WdSystem,
    space: &GroundSpace,
    n_max: usize,
) -> Result<WdVerdict> {
    g.check_in_space(space)?;
    system.sequence().check_point_count(space)?;
    if n_max == 0 {
        return Err(Error::Malformed("n_max must be at least 1".into()));
    }
    if g.is_zero() {
        return Ok(WdVerdict::Certified {
            witness: WdWitness::default(),
        });
    }

    let bits = space.len() - 1;
    let pair_bound = (space.len() * space.len()) as u128;
    let cost = (n_max as u128) * pair_bound * (1u128 << bits.min(64));
    if bits > SEARCH_MAX_BITS || cost > SEARCH_COST_BOUND {
        return Ok(WdVerdict::Unknown {
            reason: format!(
                "search over {} points up to index {n_max} exceeds the guard",
                space.len()
            ),
        });
    }

    let size = 1usize << bits;
    let target = support_mask(g);

    // Layered reachability: an element reached at step s used distinct
    // indices <= s, one word per index. Parents record the first discovery.
    #[derive(Clone, Copy)]
    struct Parent {
        step: u32,
        prev: u32,
        x: u32,
        y: u32,
    }
    let mut parent: Vec<Option<Parent>> = vec![None; size];
    let mut reached = vec![false; size];
    reached[0] = true;
    let mut known: Vec<usize> = vec![0];

    for step in 1..=n_max {
        let words = system.words(step as u64);
        let snapshot_len = known.len();
        for k in 0..snapshot_len {
            let base = known[k];
            for &((x, y), mask) in &words {
                let next = base ^ mask;
                if !reached[next] {
                    reached[next] = true;
                    parent[next] = Some(Parent {
                        step: step as u32,
                        prev: base as u32,
                        x: x as u32,
                        y: y as u32,
                    });
                    known.push(next);
                }
            }
        }
        if reached[target] {
            break;
        }
    }

    if !reached[target] {
        return Ok(WdVerdict::RefutedUpTo { n_max });
    }

    let mut pairs = Vec::new();
    let mut cur = target;
    while cur != 0 {
        let p = parent[cur].expect("reachable mask has a parent");
        pairs.push(WitnessPair {
            x: p.x as usize,
            y: p.y as usize,
            index: p.step as u64,
        });
        cur = p.prev as usize;
    }
    pairs.reverse();
    Ok(WdVerdict::Certified {
        witness: WdWitness { pairs },
    })
}

/// Build a witness for an element of the sup-combined ball of radius 1/2.
///
/// `space_rho` must be the [`combine_sup`](crate::metrics::combine_sup) of
/// the system's sequence. The optimal matching of `g` under `space_rho` is
/// bucketed dyadically by pair weight: a pair of weight in
/// `[2^(-k-1), 2^(-k))` lands in bucket k, zero-weight pairs share the
/// smallest bucket keeping the total dyadic mass below 1, and bucket j pairs
/// receive distinct indices in `[2^j, 2^(j+1))`.
pub fn wd_witness_from_ball(
    g: &GroupElement,
    system: &WdSystem,
    space_rho: &GroundSpace,
) -> Result<WdWitness> {
    g.check_in_space(space_rho)?;
    system.sequence().check_point_count(space_rho)?;
    let NormResult { value, witness } = graev_norm(g, space_rho)?;
    // NaN must fail the ball test, so keep the negated form.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(value < 0.5) {
        return Err(Error::BallPrecondition {
            norm: value,
            bound: 0.5,
        });
    }
    if g.is_zero() {
        return Ok(WdWitness::default());
    }

    let mut nonzero: Vec<((usize, usize), u32)> = Vec::new();
    let mut zero_pairs: Vec<(usize, usize)> = Vec::new();
    let mut dyadic_mass = 0.0f64;
    for &(x, y) in &witness.pairs {
        let w = space_rho.distance(x, y);
        if w == 0.0 {
            zero_pairs.push((x, y));
            continue;
        }
        // Smallest k with 2^(-k-1) <= w; then w < 2^(-k) by minimality.
        let mut k: u32 = 1;
        while exp2_f64(-(k as i64) - 1) > w {
            k += 1;
            if k > MAX_BUCKET {
                return Err(Error::GuardExceeded(format!(
                    "pair weight {w} needs a dyadic bucket beyond 2^-{MAX_BUCKET}"
                )));
            }
        }
        dyadic_mass += exp2_f64(-(k as i64));
        nonzero.push(((x, y), k));
    }

    if !zero_pairs.is_empty() {
        // Smallest shared bucket for the zero-weight pairs keeping the total
        // dyadic mass strictly below 1.
        let z = zero_pairs.len() as f64;
        let mut k: u32 = 1;
        while dyadic_mass + z * exp2_f64(-(k as i64)) >= 1.0 {
            k += 1;
            if k > MAX_BUCKET {
                return Err(Error::GuardExceeded(
                    "no dyadic bucket accommodates the zero-weight pairs".into(),
                ));
            }
        }
        for &(x, y) in &zero_pairs {
            nonzero.push(((x, y), k));
        }
    }

    nonzero.sort_by_key(|&((x, y), k)| (k, x, y));
    let mut pairs = Vec::with_capacity(nonzero.len());
    let mut bucket_start = 0usize;
    while bucket_start < nonzero.len() {
        let k = nonzero[bucket_start].1;
        let mut bucket_end = bucket_start;
        while bucket_end < nonzero.len() && nonzero[bucket_end].1 == k {
            bucket_end += 1;
        }
        let count = bucket_end - bucket_start;
        // Total dyadic mass below 1 caps every bucket at 2^k - 1 members.
        assert!(
            (count as u64) < (1u64 << k),
            "bucket {k} holds {count} pairs"
        );
        for (offset, &((x, y), _)) in nonzero[bucket_start..bucket_end].iter().enumerate() {
            pairs.push(WitnessPair {
                x,
                y,
                index: (1u64 << k) + offset as u64,
            });
        }
        bucket_start = bucket_end;
    }
    pairs.sort_by_key(|p| p.index);
    Ok(WdWitness { pairs })
}

/// Independent witness soundness check: distinct positive indices, every
/// pair strictly under its index's unit threshold, and the pairs sum to `g`.
pub fn verify_witness(
    witness: &WdWitness,
    g: &GroupElement,
    system: &WdSystem,
    space: &GroundSpace,
) -> std::result::Result<(), String> {
    let mut indices: Vec<u64> = witness.pairs.iter().map(|p| p.index).collect();
    indices.sort_unstable();
    if indices.windows(2).any(|w| w[0] == w[1]) {
        return Err("witness indices are not pairwise distinct".into());
    }
    if indices.first().is_some_and(|&n| n == 0) {
        return Err("witness indices must be positive".into());
    }
    let mut points = Vec::new();
    for p in &witness.pairs {
        if p.x >= space.len() || p.y >= space.len() {
            return Err(format!("pair ({}, {}) out of range", p.x, p.y));
        }
        let d = system.metric(p.index, p.x, p.y);
        // NaN must fail the threshold, so keep the negated form.
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(d < 1.0) {
            return Err(format!(
                "d_{}({}, {}) = {d} is not below 1",
                p.index, p.x, p.y
            ));
        }
        points.push(p.x);
        points.push(p.y);
    }
    let sum = GroupElement::sum_points(&points, space).map_err(|e| e.to_string())?;
    if &sum != g {
        return Err(format!(
            "witness sums to {:?}, expected {:?}",
            sum.support(),
            g.support()
        ));
    }
    Ok(())
}

/// Additional structural check for ball-construction witnesses: every dyadic
/// bucket `[2^j, 2^(j+1))` holds fewer than `2^j` pairs.
pub fn verify_dyadic_buckets(witness: &WdWitness) -> std::result::Result<(), String> {
    let mut bucket_counts = std::collections::BTreeMap::new();
    for p in &witness.pairs {
        if p.index == 0 {
            return Err("witness indices must be positive".into());
        }
        let j = 63 - p.index.leading_zeros(); // floor(log2 n)
        *bucket_counts.entry(j).or_insert(0u64) += 1;
    }
    for (j, count) in bucket_counts {
        if count >= (1u64 << j) {
            return Err(format!(
                "bucket {j} holds {count} pairs, expected fewer than {}",
                1u64 << j
            ));
        }
    }
    Ok(())
}

/// Open-ball membership: `norm(g) < r`.
pub fn ball_membership(g: &GroupElement, space: &GroundSpace, r: f64) -> Result<bool> {
    Ok(graev_norm(g, space)?.value < r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{combine_sup, TailRule};

    fn line_table(scale: f64) -> Vec<Vec<f64>> {
        let xs: [f64; 4] = [0.0, 1.0, 2.0, 4.0];
        (0..4)
            .map(|i| (0..4).map(|j| (xs[i] - xs[j]).abs() * scale).collect())
            .collect()
    }

    fn line_space() -> GroundSpace {
        GroundSpace::from_points(vec![vec![0.0], vec![1.0], vec![2.0], vec![4.0]]).unwrap()
    }

    fn el(support: &[usize]) -> GroupElement {
        GroupElement::from_support(support.to_vec()).unwrap()
    }

    /// d_n = |x - y| / n over the line, explicit up to L = 6.
    fn shrinking_system() -> WdSystem {
        let metrics = (1..=6).map(|n| line_table(1.0 / n as f64)).collect();
        WdSystem::new(PseudometricSequence::new(metrics, TailRule::RepeatLast).unwrap())
    }

    #[test]
    fn zero_is_certified_with_an_empty_witness() {
        let sys = shrinking_system();
        let v = wd_membership(&GroupElement::zero(), &sys, &line_space(), 4).unwrap();
        match v {
            WdVerdict::Certified { witness } => assert!(witness.pairs.is_empty()),
            other => panic!("expected certified, got {other:?}"),
        }
    }

    #[test]
    fn gap_two_pair_certifies_at_index_three() {
        // d_3(b, c) = 2/3 < 1 is the first index admitting the pair (b, c).
        let sys = shrinking_system();
        let space = line_space();
        let g = el(&[2, 3]);
        match wd_membership(&g, &sys, &space, 6).unwrap() {
            WdVerdict::Certified { witness } => {
                verify_witness(&witness, &g, &sys, &space).unwrap();
                assert_eq!(witness.pairs.len(), 1);
                let p = &witness.pairs[0];
                assert_eq!((p.x, p.y, p.index), (2, 3, 3));
            }
            other => panic!("expected certified, got {other:?}"),
        }
    }

    #[test]
    fn unit_distances_refute_every_nonzero_element() {
        // d_n = |x - y| for all n: every nonzero pair is at distance >= 1.
        let sys = WdSystem::new(
            PseudometricSequence::new(vec![line_table(1.0)], TailRule::RepeatLast).unwrap(),
        );
        let space = line_space();
        match wd_membership(&el(&[1, 3]), &sys, &space, 6).unwrap() {
            WdVerdict::RefutedUpTo { n_max } => assert_eq!(n_max, 6),
            other => panic!("expected refuted, got {other:?}"),
        }
    }

    #[test]
    fn certified_verdicts_survive_larger_bounds() {
        let sys = shrinking_system();
        let space = line_space();
        let g = el(&[2, 3]);
        for n_max in 3..=8 {
            assert!(matches!(
                wd_membership(&g, &sys, &space, n_max).unwrap(),
                WdVerdict::Certified { .. }
            ));
        }
    }

    #[test]
    fn witness_from_ball_buckets_dyadically() {
        // Base gap 0.1 combines to a sup weight of exactly 0.2 for (a, b):
        // the terms 2^-n * min(1, 2^(n+1) * 0.1) peak at 0.2 before the
        // partial sums saturate. Then 2^-3 <= 0.2 < 2^-2 puts it in bucket 2.
        let metrics = vec![line_table(0.1)];
        let seq = PseudometricSequence::new(metrics, TailRule::RepeatLast).unwrap();
        let sys = WdSystem::new(seq.clone());
        let rho = combine_sup(&seq).unwrap();
        let g = el(&[1, 2]);
        let value = graev_norm(&g, &rho).unwrap().value;
        assert!((value - 0.2).abs() < 1e-12, "norm = {value}");
        let w = wd_witness_from_ball(&g, &sys, &rho).unwrap();
        verify_witness(&w, &g, &sys, &rho).unwrap();
        verify_dyadic_buckets(&w).unwrap();
        assert_eq!(w.pairs.len(), 1);
        let idx = w.pairs[0].index;
        assert!((4..8).contains(&idx), "index {idx} outside [4, 8)");
    }

    #[test]
    fn two_bucket_witness_uses_disjoint_index_ranges() {
        // Base gaps 0.1 and 0.025 combine to sup weights 0.2 and 0.05: the
        // optimal matching pairs the two near couples, and the buckets are 2
        // and 4, with indices drawn from [4, 8) and [16, 32).
        let xs: [f64; 5] = [0.0, 1.0, 1.2, 2.0, 2.05];
        let n = xs.len();
        let table: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| (xs[i] - xs[j]).abs() * 0.5).collect())
            .collect();
        let seq = PseudometricSequence::new(vec![table], TailRule::RepeatLast).unwrap();
        let sys = WdSystem::new(seq.clone());
        let rho = combine_sup(&seq).unwrap();
        let g = el(&[1, 2, 3, 4]);
        let norm = graev_norm(&g, &rho).unwrap();
        assert!((norm.value - 0.25).abs() < 1e-12, "norm = {}", norm.value);
        let w = wd_witness_from_ball(&g, &sys, &rho).unwrap();
        verify_witness(&w, &g, &sys, &rho).unwrap();
        verify_dyadic_buckets(&w).unwrap();
        let buckets: Vec<u32> = w.pairs.iter().map(|p| 63 - p.index.leading_zeros()).collect();
        assert_eq!(buckets, vec![2, 4]);
    }

    #[test]
    fn ball_precondition_is_enforced() {
        let seq =
            PseudometricSequence::new(vec![line_table(1.0)], TailRule::RepeatLast).unwrap();
        let sys = WdSystem::new(seq.clone());
        let rho = combine_sup(&seq).unwrap();
        // rho(e, a) = 1/2 exactly, so the singleton {a} sits on the boundary.
        let err = wd_witness_from_ball(&el(&[1]), &sys, &rho);
        assert!(matches!(err, Err(Error::BallPrecondition { .. })));
        // The zero element is always inside.
        let w = wd_witness_from_ball(&GroupElement::zero(), &sys, &rho).unwrap();
        assert!(w.pairs.is_empty());
    }

    #[test]
    fn ball_membership_is_a_strict_threshold() {
        let space = line_space();
        let g = el(&[1, 2, 3]);
        assert!(ball_membership(&GroupElement::zero(), &space, 1e-12).unwrap());
        assert!(!ball_membership(&g, &space, 3.0).unwrap());
        assert!(ball_membership(&g, &space, 3.0001).unwrap());
    }
}
