//! Seeded scenario generation for the completeness lab.
//!
//! Every case is fully determined by `(scenario, master seed, case index)`.
//! Euclidean scenarios decay geometrically so that tails settle far below the
//! verdict tolerance; finite-space cases hop across zero-distance twins to
//! exercise the pseudometric corner.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::lab::{Designed, DomainBox, ElementSequence};
use crate::space::GroundSpace;

/// Shared decay rate for euclidean scenarios.
const DECAY: f64 = 0.45;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    Constant,
    ConvergingClusters,
    MergingClusters,
    DriftToBoundary,
    AdversarialNoise,
}

impl Scenario {
    pub const ALL: [Scenario; 5] = [
        Scenario::Constant,
        Scenario::ConvergingClusters,
        Scenario::MergingClusters,
        Scenario::DriftToBoundary,
        Scenario::AdversarialNoise,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Constant => "constant",
            Scenario::ConvergingClusters => "converging-clusters",
            Scenario::MergingClusters => "merging-clusters",
            Scenario::DriftToBoundary => "drift-to-boundary",
            Scenario::AdversarialNoise => "adversarial-noise",
        }
    }
}

impl std::str::FromStr for Scenario {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| Error::UnknownScenario(s.to_string()))
    }
}

/// Descriptor for a batch of cases of one scenario.
#[derive(Debug, Clone)]
pub struct ScenarioSpec {
    pub scenario: Scenario,
    pub cases: usize,
    /// Filtration level for the generated sequences (scenario-dependent
    /// meaning; capped at 4).
    pub n: usize,
}

/// One generated experiment: a sequence, its ground space (owned, since the
/// analyzer may register limit points), and the designed outcome.
#[derive(Debug, Clone)]
pub struct LabCase {
    pub id: String,
    pub scenario_name: String,
    pub designed: Designed,
    pub space: GroundSpace,
    pub domain: Option<DomainBox>,
    /// Points present before the sequence was generated (markers and e).
    pub fixed_points: usize,
    pub seq: ElementSequence,
    pub n: usize,
    pub tol: f64,
}

/// Mix a master seed, a scenario tag, and a case index into an RNG seed.
fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

pub(crate) fn case_rng(master: u64, tag: u64, index: u64) -> ChaCha20Rng {
    let mixed = splitmix(splitmix(master ^ tag.wrapping_mul(0xa076_1d64_78bd_642f)) ^ index);
    ChaCha20Rng::seed_from_u64(mixed)
}

/// Generate `spec.cases` labeled sequences for one scenario.
pub fn generate_sequences(spec: &ScenarioSpec, seed: u64) -> Result<Vec<LabCase>> {
    (0..spec.cases)
        .map(|i| generate_case(spec.scenario, spec.n, seed, i as u64))
        .collect()
}

pub fn generate_case(scenario: Scenario, n: usize, seed: u64, index: u64) -> Result<LabCase> {
    let tag = (scenario as u64 + 1).wrapping_mul(97);
    let mut rng = case_rng(seed, tag, index);
    let n = n.clamp(1, 4);
    match scenario {
        Scenario::Constant => constant_case(&mut rng, n, seed, index),
        Scenario::ConvergingClusters => converging_case(&mut rng, n, seed, index),
        Scenario::MergingClusters => merging_case(&mut rng, n.max(2), seed, index),
        Scenario::DriftToBoundary => drift_case(&mut rng, seed, index),
        Scenario::AdversarialNoise => noise_case(&mut rng, seed, index),
    }
}

/// Well-separated target points in an annulus around the origin: pairwise
/// gaps at least 0.5 and distance at least 1 from e. Falls back to fixed
/// circle positions if rejection sampling stalls.
fn sample_targets(rng: &mut ChaCha20Rng, count: usize) -> Vec<[f64; 2]> {
    let mut targets: Vec<[f64; 2]> = Vec::with_capacity(count);
    let mut attempts = 0;
    while targets.len() < count && attempts < 200 {
        attempts += 1;
        let angle = rng.gen_range(0.0..std::f64::consts::TAU);
        let radius = rng.gen_range(1.0..2.0);
        let cand = [radius * angle.cos(), radius * angle.sin()];
        if targets
            .iter()
            .all(|t| ((t[0] - cand[0]).powi(2) + (t[1] - cand[1]).powi(2)).sqrt() >= 0.5)
        {
            targets.push(cand);
        }
    }
    while targets.len() < count {
        let k = targets.len();
        let angle = std::f64::consts::TAU * k as f64 / count.max(1) as f64;
        targets.push([1.5 * angle.cos(), 1.5 * angle.sin()]);
    }
    targets
}

fn unit_dir(rng: &mut ChaCha20Rng) -> [f64; 2] {
    let angle = rng.gen_range(0.0..std::f64::consts::TAU);
    [angle.cos(), angle.sin()]
}

fn constant_case(rng: &mut ChaCha20Rng, n: usize, seed: u64, index: u64) -> Result<LabCase> {
    let mut space = GroundSpace::from_points(vec![vec![0.0, 0.0]])?;
    let targets = sample_targets(rng, n);
    let mut support = Vec::with_capacity(n);
    for t in &targets {
        support.push(space.push_point(vec![t[0], t[1]])?);
    }
    let element = GroupElement::sum_points(&support, &space)?;
    let terms = vec![element; 24];
    Ok(LabCase {
        id: format!("constant-{index}"),
        scenario_name: Scenario::Constant.name().into(),
        designed: Designed::Converged { support_len: n },
        fixed_points: space.len(),
        space,
        domain: None,
        seq: ElementSequence {
            terms,
            generator: format!("constant(n={n})"),
            seed,
        },
        n,
        tol: 1e-6,
    })
}

fn converging_case(rng: &mut ChaCha20Rng, n: usize, seed: u64, index: u64) -> Result<LabCase> {
    let mut space = GroundSpace::from_points(vec![vec![0.0, 0.0]])?;
    let targets = sample_targets(rng, n);
    let dirs: Vec<[f64; 2]> = (0..n).map(|_| unit_dir(rng)).collect();
    let amps: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..0.15)).collect();
    let fixed = space.len();
    let mut terms = Vec::with_capacity(48);
    let mut scale = 1.0f64;
    for _m in 0..48 {
        let mut support = Vec::with_capacity(n);
        for i in 0..n {
            let p = vec![
                targets[i][0] + dirs[i][0] * amps[i] * scale,
                targets[i][1] + dirs[i][1] * amps[i] * scale,
            ];
            support.push(space.push_point(p)?);
        }
        terms.push(GroupElement::sum_points(&support, &space)?);
        scale *= DECAY;
    }
    Ok(LabCase {
        id: format!("converging-{index}"),
        scenario_name: Scenario::ConvergingClusters.name().into(),
        designed: Designed::Converged { support_len: n },
        fixed_points: fixed,
        space,
        domain: None,
        seq: ElementSequence {
            terms,
            generator: format!("converging-clusters(n={n})"),
            seed,
        },
        n,
        tol: 1e-6,
    })
}

/// Even case indices merge the last two slots into one target; odd indices
/// collapse the last slot onto e. Both cancel in the limit.
fn merging_case(rng: &mut ChaCha20Rng, n: usize, seed: u64, index: u64) -> Result<LabCase> {
    let collapse = index % 2 == 1;
    let mut space = GroundSpace::from_points(vec![vec![0.0, 0.0]])?;
    let stable = if collapse { n - 1 } else { n - 2 };
    let targets = sample_targets(rng, stable + 1);
    let dirs: Vec<[f64; 2]> = (0..n).map(|_| unit_dir(rng)).collect();
    let amps: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..0.15)).collect();
    let fixed = space.len();
    let mut terms = Vec::with_capacity(48);
    let mut scale = 1.0f64;
    for _m in 0..48 {
        let mut support = Vec::with_capacity(n);
        for i in 0..stable {
            support.push(space.push_point(vec![
                targets[i][0] + dirs[i][0] * amps[i] * scale,
                targets[i][1] + dirs[i][1] * amps[i] * scale,
            ])?);
        }
        if collapse {
            // A single slot sliding into the distinguished point.
            support.push(space.push_point(vec![
                dirs[n - 1][0] * amps[n - 1] * scale,
                dirs[n - 1][1] * amps[n - 1] * scale,
            ])?);
        } else {
            // Two slots approaching the shared target from opposite sides.
            let shared = targets[stable];
            for sign in [1.0, -1.0] {
                support.push(space.push_point(vec![
                    shared[0] + sign * dirs[n - 1][0] * amps[n - 1] * scale,
                    shared[1] + sign * dirs[n - 1][1] * amps[n - 1] * scale,
                ])?);
            }
        }
        terms.push(GroupElement::sum_points(&support, &space)?);
        scale *= DECAY;
    }
    Ok(LabCase {
        id: format!("merging-{index}"),
        scenario_name: Scenario::MergingClusters.name().into(),
        designed: Designed::Escaped {
            support_len: stable,
        },
        fixed_points: fixed,
        space,
        domain: None,
        seq: ElementSequence {
            terms,
            generator: format!(
                "merging-clusters(n={n}, {})",
                if collapse { "collapse-to-e" } else { "pairwise" }
            ),
            seed,
        },
        n,
        tol: 1e-6,
    })
}

fn drift_case(rng: &mut ChaCha20Rng, seed: u64, index: u64) -> Result<LabCase> {
    // Open interval (0, 1) with e interior at 0.5 and fixed markers.
    let mut space = GroundSpace::from_points(vec![
        vec![0.5],
        vec![0.3],
        vec![0.7],
        vec![0.9],
    ])?;
    let fixed = space.len();
    let amp = rng.gen_range(0.2..0.3);
    let rate = rng.gen_range(0.45..0.55);
    let mut terms = Vec::with_capacity(60);
    let mut x = amp;
    for _m in 0..60 {
        let idx = space.push_point(vec![x])?;
        terms.push(GroupElement::from_support(vec![idx])?);
        x *= rate;
    }
    Ok(LabCase {
        id: format!("drift-{index}"),
        scenario_name: Scenario::DriftToBoundary.name().into(),
        designed: Designed::NoLimit,
        fixed_points: fixed,
        space,
        domain: Some(DomainBox {
            lower: vec![0.0],
            upper: vec![1.0],
        }),
        seq: ElementSequence {
            terms,
            generator: format!("drift-to-boundary(amp={amp:.3}, rate={rate:.3})"),
            seed,
        },
        n: 1,
        tol: 1e-6,
    })
}

fn noise_case(rng: &mut ChaCha20Rng, seed: u64, index: u64) -> Result<LabCase> {
    let mut space = GroundSpace::from_points(vec![vec![0.0, 0.0]])?;
    let targets = sample_targets(rng, 4);
    let g_support = vec![
        space.push_point(vec![targets[0][0], targets[0][1]])?,
        space.push_point(vec![targets[1][0], targets[1][1]])?,
    ];
    let h_support = vec![
        space.push_point(vec![targets[2][0], targets[2][1]])?,
        space.push_point(vec![targets[3][0], targets[3][1]])?,
    ];
    let g = GroupElement::sum_points(&g_support, &space)?;
    let h = GroupElement::sum_points(&h_support, &space)?;
    let terms = (0..24)
        .map(|i| if i % 2 == 0 { g.clone() } else { h.clone() })
        .collect();
    Ok(LabCase {
        id: format!("noise-{index}"),
        scenario_name: Scenario::AdversarialNoise.name().into(),
        designed: Designed::NotCauchy,
        fixed_points: space.len(),
        space,
        domain: None,
        seq: ElementSequence {
            terms,
            generator: "adversarial-noise(alternating)".into(),
            seed,
        },
        n: 2,
        tol: 1e-6,
    })
}

/// Finite-space cases for the convergence-vs-separation table: a random
/// repaired pseudometric space with occasional zero-distance twins, and a
/// sequence hopping across the twins of a fixed target element.
pub fn generate_finite_cases(seed: u64, count: usize) -> Result<Vec<LabCase>> {
    (0..count).map(|i| finite_case(seed, i as u64)).collect()
}

fn finite_case(seed: u64, index: u64) -> Result<LabCase> {
    let mut rng = case_rng(seed, 0xf1417e, index);
    let points = rng.gen_range(5..=10usize);
    let n = rng.gen_range(2..=4usize).min(points - 1);

    let mut table = random_repaired_table(&mut rng, points);
    // Plant a twin pair away from e about a third of the time.
    if rng.gen_bool(0.34) && points >= 4 {
        let p = rng.gen_range(1..points - 1);
        let q = p + 1;
        table[p][q] = 0.0;
        table[q][p] = 0.0;
        shortest_path_closure(&mut table);
    }
    let space = GroundSpace::from_matrix(table)?;

    // Target support with all points well separated from e and each other.
    let mut target: Vec<usize> = Vec::new();
    for p in 1..points {
        if space.distance(p, 0) > 0.1 && target.iter().all(|&q| space.distance(p, q) > 0.1) {
            target.push(p);
        }
        if target.len() == n {
            break;
        }
    }
    let n = target.len().max(1);
    if target.is_empty() {
        target.push(1);
    }

    // Twin classes: indices at exact distance zero from each target point.
    let twins: Vec<Vec<usize>> = target
        .iter()
        .map(|&p| (1..points).filter(|&q| space.distance(p, q) == 0.0).collect())
        .collect();

    let mut terms = Vec::with_capacity(16);
    for _ in 0..16 {
        let mut support: Vec<usize> = Vec::with_capacity(n);
        for class in &twins {
            let pick = class[rng.gen_range(0..class.len())];
            if support.contains(&pick) {
                support.push(class[0]);
            } else {
                support.push(pick);
            }
        }
        support.sort_unstable();
        support.dedup();
        terms.push(GroupElement::from_support(support)?);
    }
    // Keep the designed length honest even if twin collisions shortened a
    // term; the analyzer window uses the final term's length.
    let designed_len = terms.last().unwrap().word_length();

    Ok(LabCase {
        id: format!("finite-{index}"),
        scenario_name: "finite-dichotomy".into(),
        designed: Designed::Converged {
            support_len: designed_len,
        },
        fixed_points: points,
        space,
        domain: None,
        seq: ElementSequence {
            terms,
            generator: format!("finite-dichotomy(points={points}, n={n})"),
            seed,
        },
        n,
        tol: 1e-6,
    })
}

/// Random symmetric table with entries in [0.2, 2], repaired to a
/// pseudometric by shortest-path closure.
pub fn random_repaired_table(rng: &mut ChaCha20Rng, points: usize) -> Vec<Vec<f64>> {
    let mut table = vec![vec![0.0f64; points]; points];
    for i in 0..points {
        for j in (i + 1)..points {
            let v = rng.gen_range(0.2..2.0);
            table[i][j] = v;
            table[j][i] = v;
        }
    }
    shortest_path_closure(&mut table);
    table
}

pub fn shortest_path_closure(table: &mut [Vec<f64>]) {
    let n = table.len();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = table[i][k] + table[k][j];
                if via < table[i][j] {
                    table[i][j] = via;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lab::run_case;
    use crate::lab::Verdict;

    #[test]
    fn scenario_names_round_trip() {
        for sc in Scenario::ALL {
            assert_eq!(sc.name().parse::<Scenario>().unwrap(), sc);
        }
        assert!(matches!(
            "bogus".parse::<Scenario>(),
            Err(Error::UnknownScenario(_))
        ));
    }

    #[test]
    fn generation_is_deterministic_per_seed() {
        let a = generate_case(Scenario::ConvergingClusters, 3, 7, 0).unwrap();
        let b = generate_case(Scenario::ConvergingClusters, 3, 7, 0).unwrap();
        assert_eq!(a.seq.terms, b.seq.terms);
        assert_eq!(a.space, b.space);
        let c = generate_case(Scenario::ConvergingClusters, 3, 8, 0).unwrap();
        assert_ne!(a.space, c.space);
    }

    #[test]
    fn converging_cluster_case_agrees_with_its_label() {
        let mut case = generate_case(Scenario::ConvergingClusters, 2, 7, 0).unwrap();
        let report = run_case(&mut case).unwrap();
        assert!(report.agree, "report: {report:?}");
        assert!(matches!(report.verdict, Verdict::Converged { .. }));
    }

    #[test]
    fn constant_case_converges_to_itself() {
        let mut case = generate_case(Scenario::Constant, 3, 41, 1).unwrap();
        let first = case.seq.terms[0].clone();
        let report = run_case(&mut case).unwrap();
        assert!(report.agree);
        match report.verdict {
            Verdict::Converged { limit } => assert_eq!(limit, first),
            other => panic!("expected convergence, got {other:?}"),
        }
    }

    #[test]
    fn merging_cases_escape_to_lower_rank() {
        for index in 0..2 {
            let mut case = generate_case(Scenario::MergingClusters, 3, 11, index).unwrap();
            let report = run_case(&mut case).unwrap();
            assert!(report.agree, "index {index}: {report:?}");
            assert!(matches!(report.verdict, Verdict::EscapedToLowerRank { .. }));
            // Cancellation reasons are reported per slot: a merged pair on
            // even indices, a collapse-to-e on odd ones.
            let cancelled: Vec<&str> = report
                .clusters
                .iter()
                .filter_map(|c| c.cancelled.as_deref())
                .collect();
            if index % 2 == 0 {
                assert_eq!(cancelled.len(), 2, "{report:?}");
                assert!(cancelled.iter().all(|r| r.contains("merged")));
            } else {
                assert_eq!(cancelled, vec!["collapsed-to-e"]);
            }
        }
    }

    #[test]
    fn drift_cases_find_no_ground_limit() {
        let mut case = generate_case(Scenario::DriftToBoundary, 1, 13, 2).unwrap();
        let report = run_case(&mut case).unwrap();
        assert!(report.agree, "{report:?}");
    }

    #[test]
    fn noise_cases_are_flagged_not_cauchy() {
        let mut case = generate_case(Scenario::AdversarialNoise, 2, 17, 3).unwrap();
        let report = run_case(&mut case).unwrap();
        assert!(report.agree);
        assert!(matches!(report.verdict, Verdict::NotCauchy { .. }));
    }

    #[test]
    fn finite_cases_converge_and_fill_the_dichotomy_table() {
        for case_idx in 0..5 {
            let mut case = finite_case(3, case_idx).unwrap();
            let report = run_case(&mut case).unwrap();
            assert!(report.agree, "case {case_idx}: {report:?}");
            let rows = report.dichotomy.expect("matrix case has a table");
            assert!(rows.iter().all(|r| r.exactly_one));
        }
    }

    #[test]
    fn repaired_tables_are_valid_pseudometrics() {
        let mut rng = case_rng(5, 1, 2);
        for points in 2..=8 {
            let table = random_repaired_table(&mut rng, points);
            assert!(GroundSpace::from_matrix(table).is_ok());
        }
    }
}
