//! Desk-scale completeness experiments: Cauchy sequences of group elements
//! over complete and incomplete ground spaces, with convergence, cancellation,
//! and missing-limit verdicts.
//!
//! Filters are replaced by sequences throughout: every convergence assertion
//! here is checkable on finite data, and the reports say so in their header.

mod analyze;
pub(crate) mod scenario;

pub use analyze::analyze_cauchy;
pub use scenario::{
    generate_case, generate_finite_cases, generate_sequences, LabCase, Scenario, ScenarioSpec,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::norm::graev_dist;
use crate::space::GroundSpace;

/// A finite sequence of group elements over one ground space, plus the
/// metadata needed to reproduce it.
#[derive(Debug, Clone)]
pub struct ElementSequence {
    pub terms: Vec<GroupElement>,
    pub generator: String,
    pub seed: u64,
}

/// Open-box domain constraint for euclidean ground spaces. Coordinates must
/// stay strictly inside `(lower[d], upper[d])`; infinite bounds model the
/// whole space.
#[derive(Debug, Clone, Serialize)]
pub struct DomainBox {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl DomainBox {
    pub fn unbounded(dim: usize) -> Self {
        DomainBox {
            lower: vec![f64::NEG_INFINITY; dim],
            upper: vec![f64::INFINITY; dim],
        }
    }

    /// True when `point` is at least `margin` inside every open bound.
    pub fn contains_with_margin(&self, point: &[f64], margin: f64) -> bool {
        point.iter().enumerate().all(|(d, &x)| {
            (self.lower[d] == f64::NEG_INFINITY || x >= self.lower[d] + margin)
                && (self.upper[d] == f64::INFINITY || x <= self.upper[d] - margin)
        })
    }
}

/// Final verdict for an analyzed sequence.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    /// The tail converges to a representable element of full stable length.
    Converged { limit: GroupElement },
    /// Cancellation strictly reduced the word length in the limit.
    EscapedToLowerRank { limit: GroupElement },
    /// The sequence fails the Cauchy criterion; the witness pair attains the
    /// tail supremum.
    NotCauchy { i: usize, j: usize, dist: f64 },
    /// A cluster is Cauchy in coordinates but no ground point realizes it.
    NoLimitInGround { diagnostic: String },
}

/// Tail supremum of pairwise distances, sampled at increasing start indices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModulusSample {
    pub from: usize,
    pub sup: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CauchyCheck {
    pub is_cauchy: bool,
    pub tol: f64,
    pub modulus: Vec<ModulusSample>,
    /// Worst pair in the trailing half: `(i, j, dist)`.
    pub worst_tail_pair: Option<(usize, usize, f64)>,
}

/// Per-slot clustering information for the report.
#[derive(Debug, Clone, Serialize)]
pub struct ClusterInfo {
    pub slot: usize,
    pub seed_point: usize,
    pub radius: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit_coords: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit_point: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cancelled: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CauchyReport {
    pub verdict: Verdict,
    pub cauchy_modulus: Vec<ModulusSample>,
    pub clusters: Vec<ClusterInfo>,
    /// Cluster radius bound `min(min seed gap / 3, tol)`; gaps include the
    /// distance from each seed to `e`.
    pub epsilon: f64,
    /// Whether every observed cluster stayed within `epsilon` of its seed.
    pub disjoint: bool,
    /// Constant word length of the analysis window.
    pub stable_support: usize,
    /// Absolute index where the analysis window starts.
    pub window_start: usize,
    /// Distances from each window term to the limit (empty when no limit).
    pub tail_distances: Vec<f64>,
}

/// Cauchy check: the trailing half of the sequence must have all pairwise
/// distances below `tol`. Returns the observed tail-supremum modulus at
/// sampled start indices either way.
pub fn check_cauchy(
    seq: &ElementSequence,
    space: &GroundSpace,
    tol: f64,
) -> Result<CauchyCheck> {
    let t = seq.terms.len();
    if t < 2 {
        return Err(Error::Malformed(
            "a Cauchy check needs at least two terms".into(),
        ));
    }
    let mut pair = vec![vec![0.0f64; t]; t];
    for i in 0..t {
        for j in (i + 1)..t {
            let d = graev_dist(&seq.terms[i], &seq.terms[j], space)?;
            pair[i][j] = d;
            pair[j][i] = d;
        }
    }
    // suffix[m] = sup over i, j >= m of the pairwise distance.
    let mut suffix = vec![0.0f64; t];
    for m in (0..t.saturating_sub(1)).rev() {
        let row_max = pair[m][m + 1..]
            .iter()
            .fold(0.0f64, |acc, &d| acc.max(d));
        suffix[m] = suffix[m + 1].max(row_max);
    }

    let tail_start = t / 2;
    let mut sample_points: Vec<usize> = (0..8).map(|k| k * t / 8).collect();
    sample_points.push(tail_start);
    sample_points.sort_unstable();
    sample_points.dedup();
    let modulus = sample_points
        .into_iter()
        .filter(|&m| m < t)
        .map(|m| ModulusSample {
            from: m,
            sup: suffix[m],
        })
        .collect();

    let mut worst: Option<(usize, usize, f64)> = None;
    for i in tail_start..t {
        for j in (i + 1)..t {
            if worst.is_none_or(|(_, _, d)| pair[i][j] > d) {
                worst = Some((i, j, pair[i][j]));
            }
        }
    }
    Ok(CauchyCheck {
        is_cauchy: suffix[tail_start] < tol,
        tol,
        modulus,
        worst_tail_pair: worst,
    })
}

/// Distance from `g` to the filtration level `B_k`, by exhaustive enumeration
/// of all supports of size at most `k`. Finite matrix spaces only; guarded at
/// `|X| <= 12`, `k <= 4`.
pub fn dist_to_bk(g: &GroupElement, k: usize, space: &GroundSpace) -> Result<f64> {
    Ok(dist_to_bk_argmin(g, k, space)?.0)
}

/// As [`dist_to_bk`], also returning the first minimizing element in the
/// depth-first enumeration order of supports.
pub fn dist_to_bk_argmin(
    g: &GroupElement,
    k: usize,
    space: &GroundSpace,
) -> Result<(f64, GroupElement)> {
    if space.is_euclidean() {
        return Err(Error::Malformed(
            "distance to a filtration level requires a matrix-kind space".into(),
        ));
    }
    if space.len() > 12 || k > 4 {
        return Err(Error::GuardExceeded(format!(
            "filtration distance limited to 12 points and k <= 4, got {} and {k}",
            space.len()
        )));
    }
    g.check_in_space(space)?;

    let mut best = f64::INFINITY;
    let mut best_el = GroupElement::zero();
    let points: Vec<usize> = (1..space.len()).collect();
    let mut stack: Vec<usize> = Vec::with_capacity(k);
    visit_supports(&points, k, 0, &mut stack, &mut |support| {
        let h = GroupElement::from_sorted_unchecked(support.to_vec());
        let d = graev_dist(g, &h, space)?;
        if d < best {
            best = d;
            best_el = h;
        }
        Ok(())
    })?;
    Ok((best, best_el))
}

fn visit_supports(
    points: &[usize],
    k: usize,
    from: usize,
    stack: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    f(stack)?;
    if stack.len() == k {
        return Ok(());
    }
    for idx in from..points.len() {
        stack.push(points[idx]);
        visit_supports(points, k, idx + 1, stack, f)?;
        stack.pop();
    }
    Ok(())
}

/// One row of the convergence-vs-separation table: for each `k` below the
/// filtration level, exactly one of the two branches must hold.
#[derive(Debug, Clone, Serialize)]
pub struct DichotomyRow {
    pub k: usize,
    /// Minimum over the trailing half of the window of the distance to `B_k`.
    pub liminf_dist: f64,
    pub chosen_limit: GroupElement,
    /// Distance from the last term to the chosen element of `B_k`.
    pub chosen_tail_dist: f64,
    pub branch: DichotomyBranch,
    pub exactly_one: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DichotomyBranch {
    ConvergesIntoLevel,
    Separated,
    Ambiguous,
}

/// Evaluate the dichotomy table for an analyzed sequence over a finite space.
pub fn dichotomy_table(
    seq: &ElementSequence,
    space: &GroundSpace,
    n: usize,
    window_start: usize,
    tol: f64,
) -> Result<Vec<DichotomyRow>> {
    let window = &seq.terms[window_start..];
    let mut rows = Vec::new();
    for k in 0..n {
        let dists: Vec<f64> = window
            .iter()
            .map(|g| dist_to_bk(g, k, space))
            .collect::<Result<_>>()?;
        let second_half = &dists[dists.len() / 2..];
        let liminf = second_half.iter().fold(f64::INFINITY, |a, &b| a.min(b));
        let last = window.last().expect("non-empty window");
        let (chosen_dist, chosen) = dist_to_bk_argmin(last, k, space)?;
        let branch = if liminf <= tol {
            DichotomyBranch::ConvergesIntoLevel
        } else if liminf > 10.0 * tol {
            DichotomyBranch::Separated
        } else {
            DichotomyBranch::Ambiguous
        };
        rows.push(DichotomyRow {
            k,
            liminf_dist: liminf,
            chosen_limit: chosen,
            chosen_tail_dist: chosen_dist,
            exactly_one: branch != DichotomyBranch::Ambiguous,
            branch,
        });
    }
    Ok(rows)
}

/// Designed ground truth attached to a generated case.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Designed {
    Converged { support_len: usize },
    Escaped { support_len: usize },
    NoLimit,
    NotCauchy,
}

/// Report row for one lab case.
#[derive(Debug, Clone, Serialize)]
pub struct LabCaseReport {
    pub id: String,
    pub scenario: String,
    pub generator: String,
    pub designed: Designed,
    pub verdict: Verdict,
    pub agree: bool,
    pub modulus: Vec<ModulusSample>,
    pub clusters: Vec<ClusterInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit_support: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub last_term_distance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dichotomy: Option<Vec<DichotomyRow>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LabHeader {
    pub note: String,
    pub seed: u64,
    pub rng: String,
    pub version: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct LabSummary {
    pub total: usize,
    pub agreed: usize,
    pub disagreements: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LabReport {
    pub header: LabHeader,
    pub cases: Vec<LabCaseReport>,
    pub summary: LabSummary,
}

pub fn lab_header(seed: u64) -> LabHeader {
    LabHeader {
        note: "Completeness is assessed on sequences, the countable testable fragment; \
               general Cauchy filters and non-metrizable uniformities are out of scope."
            .into(),
        seed,
        rng: "chacha20".into(),
        version: env!("CARGO_PKG_VERSION").into(),
    }
}

/// Analyze one case end to end and compare against its designed label.
pub fn run_case(case: &mut LabCase) -> Result<LabCaseReport> {
    let check = check_cauchy(&case.seq, &case.space, case.tol)?;
    let analysis = analyze_cauchy(
        &case.seq,
        &mut case.space,
        case.domain.as_ref(),
        case.n,
        case.tol,
    );
    let (verdict, modulus, clusters, limit_support, last_dist, window_start) = match analysis {
        Ok(report) => {
            let limit = match &report.verdict {
                Verdict::Converged { limit } | Verdict::EscapedToLowerRank { limit } => {
                    Some(limit.support().to_vec())
                }
                _ => None,
            };
            let last = report.tail_distances.last().copied();
            (
                report.verdict,
                report.cauchy_modulus,
                report.clusters,
                limit,
                last,
                report.window_start,
            )
        }
        Err(Error::NotCauchy { i, j, dist, .. }) => (
            Verdict::NotCauchy { i, j, dist },
            check.modulus.clone(),
            Vec::new(),
            None,
            None,
            case.seq.terms.len() / 2,
        ),
        Err(other) => return Err(other),
    };

    let agree = match (&case.designed, &verdict) {
        (Designed::Converged { support_len }, Verdict::Converged { limit }) => {
            limit.word_length() == *support_len
        }
        (Designed::Escaped { support_len }, Verdict::EscapedToLowerRank { limit }) => {
            limit.word_length() == *support_len
        }
        (Designed::NoLimit, Verdict::NoLimitInGround { .. }) => true,
        (Designed::NotCauchy, Verdict::NotCauchy { .. }) => true,
        _ => false,
    };

    let dichotomy = if case.space.is_euclidean() || !matches!(verdict, Verdict::Converged { .. } | Verdict::EscapedToLowerRank { .. }) {
        None
    } else {
        Some(dichotomy_table(
            &case.seq,
            &case.space,
            case.n,
            window_start,
            case.tol,
        )?)
    };

    Ok(LabCaseReport {
        id: case.id.clone(),
        scenario: case.scenario_name.clone(),
        generator: case.seq.generator.clone(),
        designed: case.designed.clone(),
        verdict,
        agree,
        modulus,
        clusters,
        limit_support,
        last_term_distance: last_dist,
        dichotomy,
    })
}
