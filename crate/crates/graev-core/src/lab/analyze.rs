//! Slot-tracking analyzer for Cauchy sequences of group elements.
//!
//! The trailing half of the sequence is the analysis window, shrunk to its
//! maximal constant-word-length suffix. The last term's support points seed
//! one slot each; every window term is matched to the seeds by a minimum
//! weight assignment, yielding per-slot trajectories. Slot limits are
//! estimated (coordinatewise tail averages for euclidean spaces, best
//! existing point for matrix spaces), then slots whose limits collapse to `e`
//! or coincide pairwise cancel by symmetric difference, and the survivors
//! form the limit element. Verdicts never come out of the gray zone between
//! `tol` and `10 * tol`: such cases are refused as ambiguous.

use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::lab::{
    check_cauchy, CauchyReport, ClusterInfo, DomainBox, ElementSequence, Verdict,
};
use crate::norm::graev_dist;
use crate::space::{GroundSpace, E_INDEX};

/// Points deduplicate against existing ones at this coordinate tolerance
/// when a discovered limit is registered.
const REGISTER_DEDUP_TOL: f64 = 1e-12;

pub fn analyze_cauchy(
    seq: &ElementSequence,
    space: &mut GroundSpace,
    domain: Option<&DomainBox>,
    n: usize,
    tol: f64,
) -> Result<CauchyReport> {
    let check = check_cauchy(seq, space, tol)?;
    if !check.is_cauchy {
        let (i, j, dist) = check.worst_tail_pair.expect("non-Cauchy check has a witness");
        return Err(Error::NotCauchy { i, j, dist, tol });
    }
    for (idx, term) in seq.terms.iter().enumerate() {
        if !term.in_bn(n) {
            return Err(Error::Malformed(format!(
                "term {idx} has word length {} > n = {n}",
                term.word_length()
            )));
        }
        term.check_in_space(space)?;
    }

    let t = seq.terms.len();
    let mut window_start = t / 2;
    // Maximal suffix with constant word length.
    let s = seq.terms[t - 1].word_length();
    for m in (window_start..t).rev() {
        if seq.terms[m].word_length() != s {
            window_start = m + 1;
            break;
        }
    }
    let window: Vec<&GroupElement> = seq.terms[window_start..].iter().collect();

    if s == 0 {
        // The tail is literally zero; distances to zero are the norms.
        let limit = GroupElement::zero();
        let tail_distances = window
            .iter()
            .map(|g| graev_dist(g, &limit, space))
            .collect::<Result<Vec<_>>>()?;
        let stable_before = seq.terms[..window_start]
            .iter()
            .map(|g| g.word_length())
            .max()
            .unwrap_or(0);
        let verdict = if stable_before == 0 {
            Verdict::Converged { limit }
        } else {
            Verdict::EscapedToLowerRank { limit }
        };
        return Ok(CauchyReport {
            verdict,
            cauchy_modulus: check.modulus,
            clusters: Vec::new(),
            epsilon: tol,
            disjoint: true,
            stable_support: 0,
            window_start,
            tail_distances,
        });
    }

    let seeds: Vec<usize> = seq.terms[t - 1].support().to_vec();

    // Per-slot trajectories via minimum-weight assignment to the seeds.
    let mut traj: Vec<Vec<usize>> = vec![Vec::with_capacity(window.len()); s];
    for term in &window {
        let points = term.support();
        let perm = best_assignment(points, &seeds, space);
        for (slot, &p_idx) in perm.iter().enumerate() {
            traj[slot].push(points[p_idx]);
        }
    }

    let radii: Vec<f64> = (0..s)
        .map(|i| {
            traj[i]
                .iter()
                .map(|&p| space.distance(p, seeds[i]))
                .fold(0.0f64, f64::max)
        })
        .collect();

    // Cluster radius bound: a third of the smallest seed gap (gaps to e
    // included), capped by the tolerance.
    let mut min_gap = f64::INFINITY;
    for i in 0..s {
        min_gap = min_gap.min(space.distance(seeds[i], E_INDEX));
        for j in (i + 1)..s {
            min_gap = min_gap.min(space.distance(seeds[i], seeds[j]));
        }
    }
    let epsilon = (min_gap / 3.0).min(tol);
    let disjoint = radii.iter().all(|&r| r <= epsilon);

    // Slot limits.
    let half = window.len().div_ceil(2);
    let tail_range = window.len() - half..window.len();
    let mut slot_limit_coords: Vec<Option<Vec<f64>>> = vec![None; s];
    let mut slot_limit_point: Vec<Option<usize>> = vec![None; s];
    let margin = 10.0 * tol;

    if space.is_euclidean() {
        let dim = space.coords(0).expect("euclidean").len();
        for i in 0..s {
            let mut mean = vec![0.0f64; dim];
            for m in tail_range.clone() {
                let c = space.coords(traj[i][m]).expect("euclidean point");
                for d in 0..dim {
                    mean[d] += c[d];
                }
            }
            for v in &mut mean {
                *v /= half as f64;
            }
            let spread = tail_range
                .clone()
                .map(|m| euclid(space.coords(traj[i][m]).unwrap(), &mean))
                .fold(0.0f64, f64::max);
            if spread > margin {
                return Err(Error::Ambiguous(format!(
                    "slot {i} keeps a coordinate spread of {spread} around its tail average"
                )));
            }
            if let Some(dom) = domain {
                if !dom.contains_with_margin(&mean, margin) {
                    return Ok(no_limit_report(
                        format!(
                            "slot {i} drifts to {:?}, within {margin} of an open boundary",
                            mean
                        ),
                        check.modulus,
                        cluster_info(&seeds, &radii, &slot_limit_coords, &slot_limit_point, &[]),
                        epsilon,
                        disjoint,
                        s,
                        window_start,
                    ));
                }
            }
            slot_limit_coords[i] = Some(mean);
        }
    } else {
        for i in 0..s {
            // Best existing point under the max distance over the trajectory
            // tail; lowest index wins ties.
            let mut best: Option<(f64, usize)> = None;
            for cand in 0..space.len() {
                let worst = tail_range
                    .clone()
                    .map(|m| space.distance(traj[i][m], cand))
                    .fold(0.0f64, f64::max);
                if best.is_none_or(|(b, _)| worst < b) {
                    best = Some((worst, cand));
                }
            }
            let (worst, cand) = best.expect("non-empty space");
            if worst <= tol {
                slot_limit_point[i] = Some(cand);
            } else if worst <= margin {
                return Err(Error::Ambiguous(format!(
                    "slot {i}: closest ground point sits at max distance {worst}"
                )));
            } else {
                return Ok(no_limit_report(
                    format!("slot {i} is Cauchy but no ground point is within {tol} (best {worst})"),
                    check.modulus,
                    cluster_info(&seeds, &radii, &slot_limit_coords, &slot_limit_point, &[]),
                    epsilon,
                    disjoint,
                    s,
                    window_start,
                ));
            }
        }
    }

    // Pairwise limit distances drive merging; distances to e drive collapse.
    let limdist = |i: usize, j: usize| -> f64 {
        if space.is_euclidean() {
            euclid(
                slot_limit_coords[i].as_ref().unwrap(),
                slot_limit_coords[j].as_ref().unwrap(),
            )
        } else {
            space.distance(slot_limit_point[i].unwrap(), slot_limit_point[j].unwrap())
        }
    };
    let dist_to_e = |i: usize| -> f64 {
        if space.is_euclidean() {
            euclid(
                slot_limit_coords[i].as_ref().unwrap(),
                space.coords(E_INDEX).unwrap(),
            )
        } else {
            space.distance(slot_limit_point[i].unwrap(), E_INDEX)
        }
    };

    let mut group = (0..s).collect::<Vec<usize>>();
    fn find(group: &mut Vec<usize>, i: usize) -> usize {
        if group[i] != i {
            let root = find(group, group[i]);
            group[i] = root;
            root
        } else {
            i
        }
    }
    for i in 0..s {
        for j in (i + 1)..s {
            let d = limdist(i, j);
            if d <= tol {
                let (ri, rj) = (find(&mut group, i), find(&mut group, j));
                if ri != rj {
                    group[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    for i in 0..s {
        for j in (i + 1)..s {
            let d = limdist(i, j);
            if d > tol && d <= margin && find(&mut group, i) != find(&mut group, j) {
                return Err(Error::Ambiguous(format!(
                    "slots {i} and {j} have limits at distance {d}, inside the gray zone"
                )));
            }
        }
    }

    // Survivors: per group, odd cardinality keeps the representative limit
    // unless it collapses to e.
    let mut cancelled: Vec<Option<String>> = vec![None; s];
    let mut members: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..s {
        let r = find(&mut group, i);
        members.entry(r).or_default().push(i);
    }
    let mut contributed: Vec<usize> = Vec::new(); // representative slots
    for (rep, slots) in &members {
        let d_e = dist_to_e(*rep);
        if d_e <= tol {
            for &i in slots {
                cancelled[i] = Some("collapsed-to-e".into());
            }
            continue;
        }
        if d_e <= margin {
            return Err(Error::Ambiguous(format!(
                "slot {rep} limit sits at distance {d_e} from e, inside the gray zone"
            )));
        }
        if slots.len() % 2 == 0 {
            for &i in slots {
                cancelled[i] = Some(format!("merged-even-group-of-{}", slots.len()));
            }
        } else {
            for &i in slots {
                if i != *rep {
                    cancelled[i] = Some(format!("merged-into-slot-{rep}"));
                }
            }
            contributed.push(*rep);
        }
    }

    // Register or resolve the contributed limit points.
    let mut limit_support: Vec<usize> = Vec::with_capacity(contributed.len());
    for &rep in &contributed {
        let idx = if space.is_euclidean() {
            let coords = slot_limit_coords[rep].clone().unwrap();
            match (1..space.len())
                .find(|&p| euclid(space.coords(p).unwrap(), &coords) <= REGISTER_DEDUP_TOL)
            {
                Some(existing) => existing,
                None => space.push_point(coords)?,
            }
        } else {
            slot_limit_point[rep].unwrap()
        };
        slot_limit_point[rep] = Some(idx);
        limit_support.push(idx);
    }
    limit_support.sort_unstable();
    limit_support.dedup();
    let limit = GroupElement::from_support(limit_support)?;

    let tail_distances = window
        .iter()
        .map(|g| graev_dist(g, &limit, space))
        .collect::<Result<Vec<_>>>()?;
    if let Some(&last) = tail_distances.last() {
        if last > tol {
            return Err(Error::Ambiguous(format!(
                "assembled limit lies at distance {last} from the final term"
            )));
        }
    }

    let clusters = (0..s)
        .map(|i| ClusterInfo {
            slot: i,
            seed_point: seeds[i],
            radius: radii[i],
            limit_coords: slot_limit_coords[i].clone(),
            limit_point: slot_limit_point[i],
            cancelled: cancelled[i].clone(),
        })
        .collect();

    let verdict = if limit.word_length() == s {
        Verdict::Converged { limit }
    } else {
        Verdict::EscapedToLowerRank { limit }
    };
    Ok(CauchyReport {
        verdict,
        cauchy_modulus: check.modulus,
        clusters,
        epsilon,
        disjoint,
        stable_support: s,
        window_start,
        tail_distances,
    })
}

#[allow(clippy::too_many_arguments)]
fn no_limit_report(
    diagnostic: String,
    modulus: Vec<crate::lab::ModulusSample>,
    clusters: Vec<ClusterInfo>,
    epsilon: f64,
    disjoint: bool,
    stable_support: usize,
    window_start: usize,
) -> CauchyReport {
    CauchyReport {
        verdict: Verdict::NoLimitInGround { diagnostic },
        cauchy_modulus: modulus,
        clusters,
        epsilon,
        disjoint,
        stable_support,
        window_start,
        tail_distances: Vec::new(),
    }
}

fn cluster_info(
    seeds: &[usize],
    radii: &[f64],
    coords: &[Option<Vec<f64>>],
    points: &[Option<usize>],
    cancelled: &[Option<String>],
) -> Vec<ClusterInfo> {
    (0..seeds.len())
        .map(|i| ClusterInfo {
            slot: i,
            seed_point: seeds[i],
            radius: radii[i],
            limit_coords: coords[i].clone(),
            limit_point: points[i],
            cancelled: cancelled.get(i).cloned().flatten(),
        })
        .collect()
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Minimum-weight bijection of `points` onto `seeds` (equal sizes, at most a
/// handful of slots). Returns, per slot, the index into `points`; the first
/// minimal permutation in lexicographic order wins ties.
fn best_assignment(points: &[usize], seeds: &[usize], space: &GroundSpace) -> Vec<usize> {
    let s = seeds.len();
    debug_assert_eq!(points.len(), s);
    let mut best_perm: Vec<usize> = (0..s).collect();
    let mut best_cost = f64::INFINITY;
    let mut perm: Vec<usize> = Vec::with_capacity(s);
    let mut used = vec![false; s];
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        slot: usize,
        s: usize,
        points: &[usize],
        seeds: &[usize],
        space: &GroundSpace,
        perm: &mut Vec<usize>,
        used: &mut [bool],
        cost: f64,
        best_cost: &mut f64,
        best_perm: &mut Vec<usize>,
    ) {
        if slot == s {
            if cost < *best_cost {
                *best_cost = cost;
                best_perm.clone_from(perm);
            }
            return;
        }
        for p in 0..s {
            if used[p] {
                continue;
            }
            let step = space.distance(points[p], seeds[slot]);
            if cost + step >= *best_cost {
                continue;
            }
            used[p] = true;
            perm.push(p);
            recurse(
                slot + 1, s, points, seeds, space, perm, used,
                cost + step, best_cost, best_perm,
            );
            perm.pop();
            used[p] = false;
        }
    }
    recurse(
        0, s, points, seeds, space, &mut perm, &mut used,
        0.0, &mut best_cost, &mut best_perm,
    );
    best_perm
}
